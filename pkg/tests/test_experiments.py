import csv
import io

import pytest

from fiwicache.experiments import (CSV_HEADER, SweepSpec, gnuplot_data, resolve_workers,
                                   rows_to_csv, run_sweep, summarize, sweep_spec_from_dict)
from fiwicache.mckp import solve_scenario
from fiwicache.scenario import GeneratorConfig, ScenarioFormatError, generate

SMALL = GeneratorConfig(num_aps=4, ues_per_ap=5)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec('bandwidth', [1.0])
    with pytest.raises(ValueError):
        SweepSpec('zipf_delta', [])
    with pytest.raises(ValueError):
        SweepSpec('zipf_delta', [1.0, 0.5])
    with pytest.raises(ValueError):
        SweepSpec('zipf_delta', [1.0], algorithms=())
    with pytest.raises(ValueError):
        SweepSpec('zipf_delta', [1.0], algorithms=('greedy',))
    with pytest.raises(ValueError):
        SweepSpec('zipf_delta', [1.0], seeds=())


def test_single_point_matches_solver():
    spec = SweepSpec('zipf_delta', [0.8], algorithms=('proposed',), seeds=(3,), base=SMALL)
    rows = run_sweep(spec)
    assert len(rows) == 1
    sol = solve_scenario(generate(SMALL.with_(seed=3)))
    assert rows[0]['throughput_bps'] == sol.total_throughput
    assert rows[0]['backhaul_used_bps'] == sol.backhaul_used
    assert rows[0]['mean_cache_utilization'] == sol.mean_cache_utilization
    assert rows[0]['feasible'] is True


def test_row_order_and_shape():
    spec = SweepSpec('backhaul_capacity', [1e7, 5e7], algorithms=('random', 'proposed'),
                     seeds=(2, 1), base=SMALL)
    rows = run_sweep(spec, threads=3)
    keys = [(r['axis_value'], r['algorithm'], r['scenario_seed']) for r in rows]
    assert keys == [(1e7, 'proposed', 1), (1e7, 'proposed', 2), (1e7, 'random', 1),
                    (1e7, 'random', 2), (5e7, 'proposed', 1), (5e7, 'proposed', 2),
                    (5e7, 'random', 1), (5e7, 'random', 2)]


def test_csv_header_and_determinism():
    spec = SweepSpec('backhaul_capacity', [2e7, 4e7], seeds=(0, 1), base=SMALL)
    first = rows_to_csv(run_sweep(spec, threads=1))
    second = rows_to_csv(run_sweep(spec, threads=4))
    assert first == second
    lines = first.splitlines()
    assert lines[0] == ','.join(CSV_HEADER)
    parsed = list(csv.DictReader(io.StringIO(first)))
    assert len(parsed) == 2 * 4 * 2
    assert all(row['runtime_ms'] == '' for row in parsed)


def test_timing_fills_runtime():
    spec = SweepSpec('zipf_delta', [0.8], algorithms=('proposed',), base=SMALL)
    rows = run_sweep(spec, timing=True)
    assert rows[0]['runtime_ms'] > 0


def test_failed_row_is_marked(monkeypatch):
    import fiwicache.experiments as ex

    def boom(scenario, seed):
        raise RuntimeError('nope')

    monkeypatch.setattr(ex, 'random_cache', boom)
    spec = SweepSpec('zipf_delta', [0.8], algorithms=('proposed', 'random'), base=SMALL)
    rows = run_sweep(spec)
    assert rows[0]['feasible'] is True
    assert rows[1]['feasible'] == 'error:RuntimeError'
    assert 'error:RuntimeError' in rows_to_csv(rows)


def test_summary_statistics():
    rows = [
        {'axis_value': 1.0, 'algorithm': 'proposed', 'throughput_bps': 2.0,
         'backhaul_used_bps': 1.0, 'mean_cache_utilization': 0.0, 'feasible': True},
        {'axis_value': 1.0, 'algorithm': 'proposed', 'throughput_bps': 4.0,
         'backhaul_used_bps': 3.0, 'mean_cache_utilization': 1.0, 'feasible': False},
    ]
    (s,) = summarize(rows)
    assert s['throughput_bps_mean'] == 3.0
    assert s['throughput_bps_std'] == 1.0   # population std
    assert s['feasible_fraction'] == 0.5
    text = gnuplot_data(rows, 'zipf_delta')
    assert text.startswith('# algorithm=proposed axis=zipf_delta')
    assert '1.0 3.0 1.0 0.5 0.5 2.0 1.0' in text


def test_worker_resolution(monkeypatch):
    monkeypatch.delenv('FIWI_THREADS', raising=False)
    assert resolve_workers() == 1
    monkeypatch.setenv('FIWI_THREADS', '6')
    assert resolve_workers() == 6
    assert resolve_workers(2) == 2
    monkeypatch.setenv('FIWI_THREADS', 'lots')
    with pytest.raises(ValueError):
        resolve_workers()


def test_spec_from_dict():
    spec = sweep_spec_from_dict({'axis': 'max_power', 'values': [3, 7], 'seeds': [1],
                                 'algorithms': ['proposed'], 'base': {'num_aps': 2}})
    assert spec.values == (3.0, 7.0) and spec.base.num_aps == 2
    with pytest.raises(ScenarioFormatError, match='axis'):
        sweep_spec_from_dict({'values': [1]})
    with pytest.raises(ScenarioFormatError, match='sorted'):
        sweep_spec_from_dict({'axis': 'max_power', 'values': [7, 3]})


def test_utilization_falls_with_delta():
    base = GeneratorConfig(num_aps=6, mean_snr_ref_db=30.0, backhaul_capacity_bps=0.4e9)
    spec = SweepSpec('zipf_delta', [0.6, 0.8, 1.0], algorithms=('proposed',), base=base)
    util = [r['mean_cache_utilization'] for r in run_sweep(spec)]
    assert util[0] >= util[1] >= util[2]
    assert util[0] > 0
