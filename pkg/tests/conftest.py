import numpy as np
import pytest

from fiwicache.domain import AccessPoint, CatalogParams, PowerParams, Scenario
from fiwicache.scenario import GeneratorConfig, generate


@pytest.fixture(scope='session')
def default_scenario():
    return generate(GeneratorConfig(seed=0))


@pytest.fixture
def unit_power():
    """Power constants with noise 1, so noise/g is just 1/g."""
    return PowerParams(max_power=7.0, amplifier_coeff=1.2, caching_coeff=6.25e-12,
                       circuit_power=3.0, noise_power=1.0, subchannel_bw=5e5)


def toy_scenario(gains, file_count=4, cache_files=2, capacity_bps=1e6, unit_bps=1e5,
                 delta=0.8, max_power=1.0, caching_coeff=0.05, seed=None):
    """Small scenario with unit file size so caching costs ``caching_coeff`` W per file."""
    rng = np.random.default_rng(seed)
    if gains is None:
        gains = [tuple(rng.exponential(1.0, size=int(rng.integers(1, 4))) + 0.05)
                 for _ in range(2)]
    aps = tuple(AccessPoint(n, float(cache_files), tuple(g)) for n, g in enumerate(gains))
    return Scenario(
        aps,
        CatalogParams(file_count, 1.0, delta),
        PowerParams(max_power=max_power, amplifier_coeff=1.2, caching_coeff=caching_coeff,
                    circuit_power=0.0, noise_power=0.1, subchannel_bw=1e5),
        capacity_bps, unit_bps)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section('acceptance criteria')
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
