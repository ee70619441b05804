import json
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

from fiwicache.domain import DomainError
from fiwicache.scenario import (GeneratorConfig, ScenarioFormatError, config_from_dict,
                                dumps, generate, load, loads, mean_gain, save,
                                scenario_to_dict)

FIXTURE = Path(__file__).parent / 'data' / 'two_ap.json'


def test_same_seed_same_scenario():
    a = generate(GeneratorConfig(seed=42))
    b = generate(GeneratorConfig(seed=42))
    assert a == b
    assert dumps(a) == dumps(b)
    assert a != generate(GeneratorConfig(seed=43))


def test_table_defaults():
    sc = generate(GeneratorConfig())
    assert sc.num_aps == 32
    assert sc.num_ues == 640
    assert sc.capacity_units == 2488
    assert sc.catalog.file_count == 1000
    assert sc.aps[0].cache_capacity_bits == 2.4e11
    assert sc.power.max_power == 7.0


def test_adding_aps_keeps_existing_gains():
    small = generate(GeneratorConfig(seed=5, num_aps=3))
    large = generate(GeneratorConfig(seed=5, num_aps=6))
    assert small.aps == large.aps[:3]


def test_mean_gain_calibration():
    cfg = GeneratorConfig()
    snr = mean_gain(cfg) * (7.0 / 1.2 / 20) / cfg.noise_power_w
    assert snr == pytest.approx(100.0, rel=1e-12)
    # sweeping the power budget must not move the channel statistics
    assert mean_gain(cfg.with_(max_power_w=11.0)) == mean_gain(cfg)


def _gains(n, seed=0):
    cfg = GeneratorConfig(seed=seed, num_aps=1, ues_per_ap=n, system_bw_hz=1e15)
    return np.asarray(generate(cfg).aps[0].ue_gains), mean_gain(cfg)


def test_sample_mean():
    g, g_mean = _gains(10 ** 6)
    assert abs(g.mean() / g_mean - 1) < 0.005


def test_exponential_ks():
    g, g_mean = _gains(10 ** 5, seed=9)
    result = stats.kstest(g / g_mean, 'expon')
    assert result.pvalue > 0.01


def test_generated_scenarios_valid():
    for seed in range(5):
        sc = generate(GeneratorConfig(seed=seed, num_aps=4, ues_per_ap=3))
        assert all(g > 0 for ap in sc.aps for g in ap.ue_gains)


def test_config_validation():
    with pytest.raises(DomainError):
        GeneratorConfig(num_aps=0)
    with pytest.raises(DomainError):
        GeneratorConfig(ues_per_ap=41)   # 41 x 500 kHz > 20 MHz
    with pytest.raises(DomainError):
        GeneratorConfig(seed=-1)


def test_round_trip(tmp_path):
    sc = generate(GeneratorConfig(seed=3, num_aps=4))
    path = tmp_path / 'sc.json'
    save(sc, path)
    assert load(path) == sc


def test_missing_field_is_named():
    data = scenario_to_dict(generate(GeneratorConfig(num_aps=1)))
    del data['power']['noise_power_w']
    with pytest.raises(ScenarioFormatError, match='noise_power_w'):
        loads(json.dumps(data))
    data = scenario_to_dict(generate(GeneratorConfig(num_aps=1)))
    del data['aps'][0]['ue_gains']
    with pytest.raises(ScenarioFormatError, match=r'aps\[0\].*ue_gains'):
        loads(json.dumps(data))


def test_parse_error_has_position():
    with pytest.raises(ScenarioFormatError, match='line 2'):
        loads('{\n  "format_version": 1,,\n}')


def test_bad_values_are_reported():
    data = scenario_to_dict(generate(GeneratorConfig(num_aps=1)))
    data['aps'][0]['ue_gains'][0] = -1.0
    with pytest.raises(ScenarioFormatError, match='gains'):
        loads(json.dumps(data))
    data['format_version'] = 2
    with pytest.raises(ScenarioFormatError, match='format_version'):
        loads(json.dumps(data))


def test_fixture_loads():
    sc = load(FIXTURE)
    assert sc.num_aps == 2
    assert sc.aps[0].ue_gains == (1e-12, 4e-13, 2.5e-12)
    assert sc.aps[1].cache_capacity_bits == 1.6e9
    assert sc.aps[0].max_cached_files(sc.catalog.file_size_bits) == 4
    assert sc.aps[1].max_cached_files(sc.catalog.file_size_bits) == 2
    assert sc.capacity_units == 60
    assert sc.power.noise_power == 2e-15
    assert sc.catalog.zipf_delta == 0.8


def test_config_from_dict():
    cfg = config_from_dict({'seed': 4, 'num_aps': 2, 'mean_snr_ref_db': 25})
    assert cfg.seed == 4 and cfg.num_aps == 2 and cfg.mean_snr_ref_db == 25.0
    with pytest.raises(ScenarioFormatError, match='unknown'):
        config_from_dict({'bogus': 1})
    with pytest.raises(ScenarioFormatError, match='num_aps'):
        config_from_dict({'num_aps': 1.5})
