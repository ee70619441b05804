"""Seeded scenario generation and the JSON scenario file format.

Gains are drawn i.i.d. exponential (Rayleigh fading power). Randomness
comes from numpy's PCG64: ``SeedSequence(seed).spawn(num_aps)`` gives AP
``n`` its own stream, and UE ``k`` of that AP takes the ``k``-th
standard-exponential draw of the stream. Adding APs therefore never
changes the gains of existing ones.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .domain import (AccessPoint, CatalogParams, DomainError, PowerParams, Scenario,
                     noise_power_from_density)

__all__ = [
    'FORMAT_VERSION',
    'ScenarioFormatError',
    'GeneratorConfig',
    'mean_gain',
    'generate',
    'scenario_to_dict',
    'scenario_from_dict',
    'save',
    'load',
    'loads',
    'dumps',
    'config_to_dict',
    'config_from_dict',
]

FORMAT_VERSION = 1


class ScenarioFormatError(ValueError):
    """Malformed scenario or config file."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Scenario generator settings; defaults are the reference network settings.

    ``mean_snr_ref_db`` fixes the mean channel gain so that a UE with the
    mean gain and an equal share of ``reference_power_w / amplifier_coeff``
    sees that SNR. The reference power is separate from ``max_power_w`` so
    that sweeping the power budget does not rescale the channels.
    """

    seed: int = 0
    num_aps: int = 32
    ues_per_ap: int = 20
    mean_snr_ref_db: float = 20.0
    reference_power_w: float = 7.0
    file_count: int = 1000
    file_size_bits: float = 8e8             # 100 MB
    zipf_delta: float = 0.8
    cache_capacity_bits: float = 2.4e11     # 30 GB
    max_power_w: float = 7.0
    amplifier_coeff: float = 1.2
    caching_coeff_w_per_bit: float = 6.25e-12
    circuit_power_w: float = 3.0
    noise_density_dbm_per_hz: float = -174.0
    subchannel_bw_hz: float = 5e5
    system_bw_hz: float = 2e7
    backhaul_capacity_bps: float = 2.488e9
    backhaul_unit_bps: float = 1e6

    def __post_init__(self):
        if self.num_aps < 1 or self.ues_per_ap < 1:
            raise DomainError("need at least one AP and one UE per AP")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must fit in 64 bits")
        if self.reference_power_w <= 0:
            raise DomainError("reference_power_w must be > 0")
        if self.ues_per_ap * self.subchannel_bw_hz > self.system_bw_hz:
            raise DomainError(
                f"{self.ues_per_ap} subchannels of {self.subchannel_bw_hz:g} Hz exceed "
                f"the {self.system_bw_hz:g} Hz system bandwidth")
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise DomainError(f"{f.name} must be finite")

    def with_(self, **changes):
        return replace(self, **changes)

    @property
    def noise_power_w(self):
        return noise_power_from_density(self.noise_density_dbm_per_hz, self.subchannel_bw_hz)

    def power_params(self):
        return PowerParams(
            max_power=self.max_power_w,
            amplifier_coeff=self.amplifier_coeff,
            caching_coeff=self.caching_coeff_w_per_bit,
            circuit_power=self.circuit_power_w,
            noise_power=self.noise_power_w,
            subchannel_bw=self.subchannel_bw_hz,
        )

    def catalog_params(self):
        return CatalogParams(self.file_count, self.file_size_bits, self.zipf_delta)


def mean_gain(config):
    """Mean exponential gain implied by ``config.mean_snr_ref_db``."""
    per_ue_power = config.reference_power_w / config.amplifier_coeff / config.ues_per_ap
    return 10.0 ** (config.mean_snr_ref_db / 10.0) * config.noise_power_w / per_ue_power


def generate(config):
    """Draw a random scenario from ``config``; deterministic in ``config.seed``."""
    g_mean = mean_gain(config)
    streams = np.random.SeedSequence(int(config.seed)).spawn(config.num_aps)
    aps = []
    for n, ss in enumerate(streams):
        rng = np.random.Generator(np.random.PCG64(ss))
        draws = rng.standard_exponential(config.ues_per_ap)
        # exponential draws can be exactly 0 with probability ~2^-53
        draws = np.maximum(draws, np.finfo(float).tiny)
        aps.append(AccessPoint(n, config.cache_capacity_bits, tuple(g_mean * draws)))
    return Scenario(tuple(aps), config.catalog_params(), config.power_params(),
                    config.backhaul_capacity_bps, config.backhaul_unit_bps)


# --- file format ---------------------------------------------------------

_CATALOG_KEYS = {'file_count': 'file_count', 'file_size_bits': 'file_size_bits',
                 'zipf_delta': 'zipf_delta'}
_POWER_KEYS = {'max_power_w': 'max_power', 'amplifier_coeff': 'amplifier_coeff',
               'caching_coeff_w_per_bit': 'caching_coeff', 'circuit_power_w': 'circuit_power',
               'noise_power_w': 'noise_power', 'subchannel_bw_hz': 'subchannel_bw'}


def scenario_to_dict(scenario):
    return {
        'format_version': FORMAT_VERSION,
        'backhaul_capacity_bps': scenario.backhaul_capacity_bps,
        'backhaul_unit_bps': scenario.backhaul_unit_bps,
        'catalog': {k: getattr(scenario.catalog, a) for k, a in _CATALOG_KEYS.items()},
        'power': {k: getattr(scenario.power, a) for k, a in _POWER_KEYS.items()},
        'aps': [
            {'id': ap.id, 'cache_capacity_bits': ap.cache_capacity_bits,
             'ue_gains': list(ap.ue_gains)}
            for ap in scenario.aps
        ],
    }


def _get(obj, key, where, kind=float):
    if not isinstance(obj, dict):
        raise ScenarioFormatError(f"{where}: expected an object")
    if key not in obj:
        raise ScenarioFormatError(f"{where}: missing field '{key}'")
    value = obj[key]
    if kind is list:
        if not isinstance(value, list):
            raise ScenarioFormatError(f"{where}.{key}: expected a list")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            raise ScenarioFormatError(f"{where}.{key}: expected an object")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFormatError(f"{where}.{key}: expected a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ScenarioFormatError(f"{where}.{key}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def scenario_from_dict(data):
    version = _get(data, 'format_version', 'scenario', int)
    if version != FORMAT_VERSION:
        raise ScenarioFormatError(f"unsupported format_version {version}")
    try:
        cat = _get(data, 'catalog', 'scenario', dict)
        catalog = CatalogParams(
            _get(cat, 'file_count', 'catalog', int),
            _get(cat, 'file_size_bits', 'catalog'),
            _get(cat, 'zipf_delta', 'catalog'))
        pw = _get(data, 'power', 'scenario', dict)
        power = PowerParams(**{a: _get(pw, k, 'power') for k, a in _POWER_KEYS.items()})
        aps = []
        for i, ap in enumerate(_get(data, 'aps', 'scenario', list)):
            where = f'aps[{i}]'
            gains = _get(ap, 'ue_gains', where, list)
            for g_i, g in enumerate(gains):
                if isinstance(g, bool) or not isinstance(g, (int, float)):
                    raise ScenarioFormatError(f"{where}.ue_gains[{g_i}]: expected a number")
            aps.append(AccessPoint(_get(ap, 'id', where, int),
                                   _get(ap, 'cache_capacity_bits', where),
                                   tuple(float(g) for g in gains)))
        return Scenario(tuple(aps), catalog, power,
                        _get(data, 'backhaul_capacity_bps', 'scenario'),
                        _get(data, 'backhaul_unit_bps', 'scenario'))
    except DomainError as exc:
        raise ScenarioFormatError(str(exc)) from exc


def dumps(scenario):
    return json.dumps(scenario_to_dict(scenario), indent=2) + '\n'


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data)


def save(scenario, path):
    with open(path, 'w') as fh:
        fh.write(dumps(scenario))


def load(path):
    with open(path) as fh:
        return loads(fh.read())


def config_to_dict(config):
    return asdict(config)


def config_from_dict(data, where='config'):
    if not isinstance(data, dict):
        raise ScenarioFormatError(f"{where}: expected an object")
    known = {f.name: f for f in fields(GeneratorConfig)}
    unknown = set(data) - set(known)
    if unknown:
        raise ScenarioFormatError(f"{where}: unknown field(s) {sorted(unknown)}")
    values = {}
    for key in data:
        kind = int if key in ('seed', 'num_aps', 'ues_per_ap', 'file_count') else float
        values[key] = _get(data, key, where, kind)
    try:
        return GeneratorConfig(**values)
    except DomainError as exc:
        raise ScenarioFormatError(f"{where}: {exc}") from exc
