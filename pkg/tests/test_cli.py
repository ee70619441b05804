import subprocess
import sys
from pathlib import Path

import pytest

from fiwicache.cli import main
from fiwicache.oracles import p1_evaluate
from fiwicache.scenario import load

FIXTURE = Path(__file__).parent / 'data' / 'two_ap.json'


def _field(out, name):
    for line in out.splitlines():
        if line.startswith(name + ':'):
            return line.split(':', 1)[1].strip()
    raise KeyError(name)


def test_solve_fixture_reports_p1_objective(capsys):
    assert main(['solve', str(FIXTURE)]) == 0
    out = capsys.readouterr().out
    sc = load(FIXTURE)
    from fiwicache.mckp import solve_scenario
    objective = p1_evaluate(sc, solve_scenario(sc)).objective
    assert float(_field(out, 'throughput_bps')) == pytest.approx(objective, rel=1e-12)
    assert _field(out, 'feasible') == 'true'


def test_generate_then_solve(tmp_path, capsys):
    path = tmp_path / 'sc.json'
    assert main(['generate', '--seed', '4', '--num-aps', '3', '--ues-per-ap', '4',
                 '-o', str(path)]) == 0
    assert load(path).num_aps == 3
    assert main(['solve', str(path), '--algorithm', 'full_cache']) == 0
    assert _field(capsys.readouterr().out, 'algorithm') == 'full_cache'


def test_compare_orders_algorithms(capsys):
    assert main(['compare', '--num-aps', '6', '--seed', '1']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[0] for line in lines] == ['proposed', 'full_cache', 'equal_power',
                                                   'random']
    thr = [float(line.split('throughput_bps=')[1].split()[0]) for line in lines]
    assert thr[0] >= thr[1] and thr[0] >= thr[2] >= thr[3]


def test_sweep_writes_csv_and_gnuplot(tmp_path):
    cfg = tmp_path / 'sweep.json'
    cfg.write_text('{"axis": "zipf_delta", "values": [0.6, 1.0], "seeds": [0],'
                   ' "algorithms": ["proposed", "full_cache"],'
                   ' "base": {"num_aps": 3, "ues_per_ap": 4}}')
    out, gp = tmp_path / 'out.csv', tmp_path / 'out.dat'
    assert main(['sweep', str(cfg), '-o', str(out), '--gnuplot', str(gp)]) == 0
    assert out.read_text().splitlines()[0].startswith('scenario_seed,algorithm')
    assert len(out.read_text().splitlines()) == 5
    assert '# algorithm=full_cache' in gp.read_text()


def test_oracle_check_passes(capsys):
    assert main(['oracle-check', '--instances', '200', '--seed', '7']) == 0
    assert '200/200 agree' in capsys.readouterr().out


def test_oracle_check_reports_mismatch(monkeypatch):
    import fiwicache.cli as cli
    real = cli.mckp_solve

    def broken(classes, cap):
        res = real(classes, cap)
        return type(res)(res.choices, res.value + 1.0, res.units, res.table)

    monkeypatch.setattr(cli, 'mckp_solve', broken)
    assert main(['oracle-check', '--instances', '5']) == 4


def test_bad_input_exit_code(tmp_path, capsys):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"format_version": 1}')
    assert main(['solve', str(bad)]) == 3
    assert 'missing field' in capsys.readouterr().err
    assert main(['solve', str(tmp_path / 'missing.json')]) == 3


def test_usage_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(['frobnicate'])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, '-m', 'fiwicache', 'solve', str(FIXTURE)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert 'throughput_bps' in proc.stdout
