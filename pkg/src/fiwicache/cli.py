"""Command line interface: ``fiwicache {generate,solve,sweep,compare,oracle-check}``.

Exit codes: 0 success, 2 usage error, 3 unreadable input, 4 oracle mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import scenario as scn
from .domain import DomainError, PowerParams
from .experiments import (ALGORITHMS, gnuplot_data, load_sweep_spec, rows_to_csv,
                          run_algorithm, run_sweep)
from .mckp import mckp_solve
from .oracles import mckp_exhaustive, p1_evaluate, waterfill_bisection
from .vabwf import Candidate, opt_out, vabwf_allocate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_MISMATCH = 4


class _InputError(Exception):
    pass


def _load_scenario(path):
    try:
        return scn.load(path)
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror}") from exc
    except scn.ScenarioFormatError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _config_from_args(args):
    base = {}
    if getattr(args, 'config', None):
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except OSError as exc:
            raise _InputError(f"{args.config}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise _InputError(f"{args.config}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
    overrides = {
        'seed': args.seed, 'num_aps': args.num_aps, 'ues_per_ap': args.ues_per_ap,
        'mean_snr_ref_db': args.snr_db, 'backhaul_capacity_bps': args.backhaul_bps,
        'max_power_w': args.max_power, 'zipf_delta': args.zipf_delta,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return scn.config_from_dict(base)
    except scn.ScenarioFormatError as exc:
        raise _InputError(str(exc)) from exc


def format_report(solution, scenario=None):
    lines = [
        f"algorithm: {solution.algorithm}",
        f"throughput_bps: {solution.total_throughput!r}",
        f"backhaul_used_bps: {solution.backhaul_used!r}",
    ]
    if scenario is not None:
        lines.append(f"backhaul_capacity_bps: {scenario.backhaul_capacity_bps!r}")
    lines += [
        f"mean_cache_utilization: {solution.mean_cache_utilization!r}",
        f"feasible: {str(solution.feasible).lower()}",
        f"opt_out_aps: {sum(solution.selected_opt_out)}",
        "per_ap: id prefix_len hit_ratio rate_bps backhaul_bps",
    ]
    for n, (j, h, r, b) in enumerate(zip(solution.prefix_lengths, solution.hit_ratios,
                                         solution.ap_rates, solution.ap_backhaul)):
        ap_id = scenario.aps[n].id if scenario is not None else n
        lines.append(f"  {ap_id} {j} {h:.6f} {r:.6e} {b:.6e}")
    return '\n'.join(lines)


def cmd_generate(args):
    config = _config_from_args(args)
    scenario = scn.generate(config)
    if args.output == '-':
        sys.stdout.write(scn.dumps(scenario))
    else:
        scn.save(scenario, args.output)
    return EXIT_OK


def cmd_solve(args):
    scenario = _load_scenario(args.scenario)
    solution = run_algorithm(args.algorithm, scenario, seed=args.seed)
    print(format_report(solution, scenario))
    return EXIT_OK


def cmd_compare(args):
    if args.scenario:
        scenario = _load_scenario(args.scenario)
    else:
        scenario = scn.generate(_config_from_args(args))
    seed = args.seed if args.seed is not None else 0
    for algo in ALGORITHMS:
        sol = run_algorithm(algo, scenario, seed=seed)
        print(f"{algo:<12} throughput_bps={sol.total_throughput!r} "
              f"mean_cache_utilization={sol.mean_cache_utilization:.4f} "
              f"feasible={str(sol.feasible).lower()}")
    return EXIT_OK


def cmd_sweep(args):
    try:
        spec = load_sweep_spec(args.config)
    except OSError as exc:
        raise _InputError(f"{args.config}: {exc.strerror}") from exc
    except scn.ScenarioFormatError as exc:
        raise _InputError(f"{args.config}: {exc}") from exc
    rows = run_sweep(spec, threads=args.threads, timing=args.timing)
    text = rows_to_csv(rows)
    if args.output == '-':
        sys.stdout.write(text)
    else:
        with open(args.output, 'w', newline='') as fh:
            fh.write(text)
    if args.gnuplot:
        with open(args.gnuplot, 'w') as fh:
            fh.write(gnuplot_data(rows, spec.axis))
    return EXIT_OK


def _random_classes(rng, n_classes, max_items, max_units):
    classes = []
    for n in range(n_classes):
        items = [opt_out(n)]
        for j in range(int(rng.integers(1, max_items + 1))):
            items.append(Candidate(n, j, None, float(rng.uniform(0, 100)), 0.0,
                                   int(rng.integers(0, max_units + 1))))
        classes.append(items)
    return classes


def oracle_check(instances, seed, out=None):
    """Run randomized oracle comparisons; returns the number of mismatches."""
    out = out or sys.stdout
    rng = np.random.default_rng(seed)
    mismatches = 0
    power_ok = True
    for _ in range(instances):
        k = int(rng.integers(1, 21))
        floors = 10.0 ** rng.uniform(-2, 1, size=k)
        budget = float(10.0 ** rng.uniform(-1, 1))
        params = PowerParams(max_power=budget * 1.2, amplifier_coeff=1.2, caching_coeff=1e-12,
                             circuit_power=0.0, noise_power=1.0, subchannel_bw=1.0)
        fast = vabwf_allocate(1.0 / floors, 0, params, 1.0)
        slow = waterfill_bisection(1.0 / floors, budget, 1.0)
        if np.max(np.abs(fast.powers - slow.powers)) > 1e-9 * budget:
            mismatches += 1
        if abs(fast.budget_residual(params, 1.0)) > 1e-9 * params.max_power:
            power_ok = False
    wf_bad = mismatches
    print(f"waterfill: {instances - wf_bad}/{instances} agree", file=out)
    dp_bad = 0
    for _ in range(instances):
        classes = _random_classes(rng, int(rng.integers(1, 5)), 6, 10)
        cap = int(rng.integers(0, 26))
        if mckp_solve(classes, cap).value != mckp_exhaustive(classes, cap).value:
            dp_bad += 1
    print(f"mckp: {instances - dp_bad}/{instances} agree", file=out)
    feas_bad = 0
    for i in range(max(1, instances // 20)):
        config = scn.GeneratorConfig(seed=seed * 1000 + i, num_aps=int(rng.integers(1, 4)),
                                     ues_per_ap=int(rng.integers(1, 6)), file_count=8,
                                     cache_capacity_bits=4 * 8e8,
                                     backhaul_capacity_bps=float(rng.uniform(0, 5e7)))
        sc = scn.generate(config)
        report = p1_evaluate(sc, run_algorithm('proposed', sc))
        if report.min_residual() < -1e-9:
            feas_bad += 1
    print(f"p1 feasibility: {feas_bad} violations", file=out)
    if not power_ok:
        print("budget equality violated", file=out)
    return wf_bad + dp_bad + feas_bad + (0 if power_ok else 1)


def cmd_oracle_check(args):
    bad = oracle_check(args.instances, args.seed)
    return EXIT_MISMATCH if bad else EXIT_OK


def _add_config_args(p):
    p.add_argument('--config', help='JSON file of generator settings')
    p.add_argument('--seed', type=int)
    p.add_argument('--num-aps', type=int)
    p.add_argument('--ues-per-ap', type=int)
    p.add_argument('--snr-db', type=float, help='reference mean SNR in dB')
    p.add_argument('--backhaul-bps', type=float)
    p.add_argument('--max-power', type=float)
    p.add_argument('--zipf-delta', type=float)


def build_parser():
    parser = argparse.ArgumentParser(prog='fiwicache', description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('generate', help='write a random scenario file')
    _add_config_args(p)
    p.add_argument('-o', '--output', default='-')
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('solve', help='solve a scenario file and print the report')
    p.add_argument('scenario')
    p.add_argument('--algorithm', choices=ALGORITHMS, default='proposed')
    p.add_argument('--seed', type=int, default=0, help='seed for the random baseline')
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('sweep', help='run a sweep config and write CSV')
    p.add_argument('config')
    p.add_argument('-o', '--output', default='-')
    p.add_argument('--gnuplot', help='also write gnuplot data to this path')
    p.add_argument('--threads', type=int, help='worker count (overrides FIWI_THREADS)')
    p.add_argument('--timing', action='store_true',
                   help='fill runtime_ms (output is then not reproducible)')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('compare', help='run all four algorithms on one scenario')
    p.add_argument('scenario', nargs='?')
    _add_config_args(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser('oracle-check', help='cross-check solvers against brute force')
    p.add_argument('--instances', type=int, default=200)
    p.add_argument('--seed', type=int, default=7)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
