"""Parameter sweeps over backhaul capacity, power budget, and Zipf skew."""
from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .baselines import equal_power, full_cache, random_cache
from .mckp import solve_scenario
from .scenario import GeneratorConfig, ScenarioFormatError, config_from_dict, generate

__all__ = [
    'AXES',
    'ALGORITHMS',
    'CSV_HEADER',
    'SweepSpec',
    'run_algorithm',
    'run_sweep',
    'rows_to_csv',
    'summarize',
    'gnuplot_data',
    'load_sweep_spec',
    'sweep_spec_from_dict',
    'default_grid',
    'resolve_workers',
]

AXES = {
    'backhaul_capacity': 'backhaul_capacity_bps',
    'max_power': 'max_power_w',
    'zipf_delta': 'zipf_delta',
}
ALGORITHMS = ('proposed', 'full_cache', 'equal_power', 'random')
CSV_HEADER = ('scenario_seed', 'algorithm', 'axis', 'axis_value', 'throughput_bps',
              'backhaul_used_bps', 'mean_cache_utilization', 'feasible', 'runtime_ms')


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    algorithms: tuple = ALGORITHMS
    seeds: tuple = (0,)
    base: GeneratorConfig = field(default_factory=GeneratorConfig)

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(float(v) for v in self.values))
        object.__setattr__(self, 'algorithms', tuple(self.algorithms))
        object.__setattr__(self, 'seeds', tuple(int(s) for s in self.seeds))
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; choose from {sorted(AXES)}")
        if not self.values:
            raise ValueError("sweep needs at least one axis value")
        if list(self.values) != sorted(self.values):
            raise ValueError("axis values must be sorted")
        if not self.algorithms:
            raise ValueError("sweep needs at least one algorithm")
        bad = set(self.algorithms) - set(ALGORITHMS)
        if bad:
            raise ValueError(f"unknown algorithm(s) {sorted(bad)}")
        if not self.seeds:
            raise ValueError("sweep needs at least one seed")


def run_algorithm(name, scenario, seed=0, threads=None):
    if name == 'proposed':
        return solve_scenario(scenario, threads=threads)
    if name == 'full_cache':
        return full_cache(scenario)
    if name == 'equal_power':
        return equal_power(scenario, threads=threads)
    if name == 'random':
        return random_cache(scenario, seed)
    raise ValueError(f"unknown algorithm {name!r}")


def _point(spec, value, seed, timing):
    config = spec.base.with_(**{AXES[spec.axis]: value, 'seed': seed})
    scenario = generate(config)
    rows = []
    for algo in spec.algorithms:
        row = {'scenario_seed': seed, 'algorithm': algo, 'axis': spec.axis,
               'axis_value': value}
        start = time.perf_counter()
        try:
            sol = run_algorithm(algo, scenario, seed)
        except Exception as exc:  # one failed row must not sink the sweep
            row.update(throughput_bps=None, backhaul_used_bps=None,
                       mean_cache_utilization=None, feasible=f'error:{type(exc).__name__}',
                       runtime_ms=None)
        else:
            elapsed = (time.perf_counter() - start) * 1e3
            row.update(throughput_bps=sol.total_throughput,
                       backhaul_used_bps=sol.backhaul_used,
                       mean_cache_utilization=sol.mean_cache_utilization,
                       feasible=sol.feasible,
                       runtime_ms=elapsed if timing else None)
        rows.append(row)
    return rows


def resolve_workers(threads=None):
    """Worker count: explicit argument, then ``FIWI_THREADS``, then 1."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get('FIWI_THREADS')
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"FIWI_THREADS must be an integer, got {env!r}") from None
    return 1


def run_sweep(spec, threads=None, timing=False):
    """Run every (axis value, seed) point of ``spec``.

    Rows come back ordered by axis value, then algorithm (in
    :data:`ALGORITHMS` order), then seed, whatever order the workers finish.
    ``runtime_ms`` is ``None`` unless ``timing`` is set, which keeps the
    output reproducible byte for byte.
    """
    jobs = [(v, s) for v in spec.values for s in spec.seeds]
    workers = resolve_workers(threads)
    if workers == 1:
        results = [_point(spec, v, s, timing) for v, s in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: _point(spec, *job, timing), jobs))
    rows = [row for batch in results for row in batch]
    order = {a: i for i, a in enumerate(ALGORITHMS)}
    rows.sort(key=lambda r: (r['axis_value'], order[r['algorithm']], r['scenario_seed']))
    return rows


def _fmt(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in CSV_HEADER])
    return buf.getvalue()


def summarize(rows):
    """Mean and population std of each metric per (axis value, algorithm)."""
    groups = {}
    for row in rows:
        if row['throughput_bps'] is None:
            continue
        groups.setdefault((row['axis_value'], row['algorithm']), []).append(row)
    out = []
    for (value, algo), group in sorted(groups.items(),
                                       key=lambda kv: (kv[0][0], ALGORITHMS.index(kv[0][1]))):
        entry = {'axis_value': value, 'algorithm': algo, 'n': len(group)}
        for key in ('throughput_bps', 'backhaul_used_bps', 'mean_cache_utilization'):
            xs = [r[key] for r in group]
            entry[key + '_mean'] = statistics.fmean(xs)
            entry[key + '_std'] = statistics.pstdev(xs)
        entry['feasible_fraction'] = sum(r['feasible'] is True for r in group) / len(group)
        out.append(entry)
    return out


def gnuplot_data(rows, axis=''):
    """gnuplot text with one indexed data block per algorithm."""
    summary = summarize(rows)
    lines = []
    for algo in ALGORITHMS:
        block = [s for s in summary if s['algorithm'] == algo]
        if not block:
            continue
        if lines:
            lines += ['', '']
        lines.append(f'# algorithm={algo} axis={axis}')
        lines.append('# axis_value throughput_mean throughput_std '
                     'utilization_mean utilization_std backhaul_mean backhaul_std')
        for s in block:
            lines.append(' '.join(repr(float(x)) for x in (
                s['axis_value'], s['throughput_bps_mean'], s['throughput_bps_std'],
                s['mean_cache_utilization_mean'], s['mean_cache_utilization_std'],
                s['backhaul_used_bps_mean'], s['backhaul_used_bps_std'])))
    return '\n'.join(lines) + '\n'


def sweep_spec_from_dict(data):
    if not isinstance(data, dict):
        raise ScenarioFormatError("sweep config: expected an object")
    if data.get('format_version', 1) != 1:
        raise ScenarioFormatError(f"unsupported format_version {data['format_version']}")
    for key in ('axis', 'values'):
        if key not in data:
            raise ScenarioFormatError(f"sweep config: missing field '{key}'")
    base = config_from_dict(data.get('base', {}), 'sweep config.base')
    try:
        return SweepSpec(axis=data['axis'], values=data['values'],
                         algorithms=data.get('algorithms', ALGORITHMS),
                         seeds=data.get('seeds', [0]), base=base)
    except (TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"sweep config: {exc}") from exc


def load_sweep_spec(path):
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return sweep_spec_from_dict(data)


def default_grid(seeds=(0,), base=None):
    """The reference sweep points, one spec per axis."""
    base = base or GeneratorConfig()
    return [
        SweepSpec('backhaul_capacity', (0.5e9, 1.25e9, 2.488e9, 5e9), seeds=seeds, base=base),
        SweepSpec('max_power', (3.0, 5.0, 7.0, 9.0, 11.0), seeds=seeds, base=base),
        SweepSpec('zipf_delta', (0.6, 0.8, 1.0, 1.2), seeds=seeds, base=base),
    ]

