"""Experiment configuration: one JSON document, validated eagerly."""
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .model import PROFILES, CutoffFamily
from .modes import ModeSpace, Source


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending key or constraint."""


DEFAULT_LAMBDAS = list(range(10, 201, 10))
DEFAULT_BETAS = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0]


@dataclass
class SweepConfig:
    profile: str = "severe"
    mu: float = None
    lambdas: list = field(default_factory=lambda: list(DEFAULT_LAMBDAS))
    overlap_level: float = 0.01
    extend_to_threshold: bool = True


@dataclass
class ExperimentConfig:
    """Validated experiment parameters.

    Required keys: ``M``, ``mu``, ``N`` and either ``omega`` (explicit list)
    or ``omega_rule`` (``"ladder"``: ``sqrt(mu^2 + k^2)``, or
    ``"harmonic"``: ``k * mu``).  ``seed`` is required whenever ``randomized``
    is true (the default).
    """

    M: int
    mu: float
    N: int
    omega: list
    seed: int = None
    randomized: bool = True
    omega_rule: str = None
    source: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    betas: list = field(default_factory=lambda: list(DEFAULT_BETAS))
    t_points: int = 64
    t_max: float = 2 * math.pi
    samples: int = 256
    random_instances: int = 20
    sweep: SweepConfig = field(default_factory=SweepConfig)
    spectrum_g: list = None
    output: str = "out"
    corrupt_phase: bool = False

    @property
    def modes(self):
        return ModeSpace(self.omega, self.mu)

    @property
    def src(self):
        """Source over :attr:`modes`; ``v`` defaults to 0.3 in every mode."""
        if "v" in self.source:
            v = np.array([complex(*x) if isinstance(x, list) else complex(x) for x in self.source["v"]])
            return Source(self.modes, v)
        if "profile" in self.source:
            return CutoffFamily(self.source["profile"], self.mu).source(self.M)
        return Source(self.modes, np.full(self.M, 0.3))

    def family(self):
        mu = self.mu if self.sweep.mu is None else self.sweep.mu
        return CutoffFamily(self.sweep.profile, mu)

    def to_dict(self):
        """Config echo for reports; the output directory is left out so that
        reports written to different places stay byte-identical."""
        d = asdict(self)
        d.pop("output")
        return d


_TOP_KEYS = {f for f in ExperimentConfig.__dataclass_fields__}
_SWEEP_KEYS = {f for f in SweepConfig.__dataclass_fields__}
_SOURCE_KEYS = {"v", "profile"}


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _number(d, key, kind=float):
    x = d[key]
    _require(isinstance(x, (int, float)) and not isinstance(x, bool), f"{key} must be a number")
    return kind(x)


def config_from_dict(raw):
    """Validate a parsed JSON object and build an :class:`ExperimentConfig`."""
    try:
        return _build(raw)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config value: {exc}") from exc


def _build(raw):
    _require(isinstance(raw, dict), "config must be a JSON object")
    for key in raw:
        _require(key in _TOP_KEYS, f"unknown config key: {key}")
    for key in ("M", "mu", "N"):
        _require(key in raw, f"missing required key: {key}")
    M = _number(raw, "M", int)
    _require(M >= 1 and raw["M"] == M, "M must be a positive integer")
    mu = _number(raw, "mu")
    _require(mu > 0, "mu must be > 0")
    N = _number(raw, "N", int)
    _require(N >= 1 and raw["N"] == N, "N must be an integer >= 1")

    rule = raw.get("omega_rule")
    if "omega" in raw:
        omega = raw["omega"]
        _require(isinstance(omega, list) and len(omega) == M, "omega must be a list of M numbers")
        _require(all(isinstance(w, (int, float)) for w in omega), "omega must be a list of M numbers")
        omega = [float(w) for w in omega]
    elif rule == "ladder":
        omega = [math.sqrt(mu ** 2 + k ** 2) for k in range(1, M + 1)]
    elif rule == "harmonic":
        omega = [k * mu for k in range(1, M + 1)]
    else:
        raise ConfigError("either omega or omega_rule ('ladder' | 'harmonic') is required")
    _require(all(w >= mu for w in omega), "omega_k must be >= mu for every mode")

    kw = {k: raw[k] for k in raw if k not in ("M", "mu", "N", "omega", "sweep")}
    cfg = ExperimentConfig(M=M, mu=mu, N=N, omega=omega, **kw)

    _require(isinstance(cfg.randomized, bool), "randomized must be true or false")
    if cfg.randomized:
        _require(cfg.seed is not None, "seed is required when randomized checks are enabled")
    if cfg.seed is not None:
        _require(isinstance(cfg.seed, int) and not isinstance(cfg.seed, bool) and cfg.seed >= 0,
                 "seed must be a nonnegative integer")

    _require(isinstance(cfg.source, dict), "source must be an object")
    for key in cfg.source:
        _require(key in _SOURCE_KEYS, f"unknown config key: source.{key}")
    if "v" in cfg.source:
        _require(isinstance(cfg.source["v"], list) and len(cfg.source["v"]) == M,
                 "source.v must be a list of M numbers or [re, im] pairs")
    if "profile" in cfg.source:
        _require(cfg.source["profile"] in PROFILES, f"source.profile must be one of {PROFILES}")

    _require(isinstance(cfg.tolerances, dict), "tolerances must be an object")
    for name, tol in cfg.tolerances.items():
        _require(isinstance(tol, (int, float)) and tol > 0, f"tolerance {name} must be > 0")

    _require(isinstance(cfg.betas, list) and cfg.betas and all(b > 0 for b in cfg.betas),
             "betas must be a nonempty list of positive numbers")
    _require(all(b2 > b1 for b1, b2 in zip(cfg.betas, cfg.betas[1:])), "betas must be increasing")
    _require(isinstance(cfg.t_points, int) and cfg.t_points >= 2, "t_points must be an integer >= 2")
    _require(isinstance(cfg.samples, int) and cfg.samples >= 8, "samples must be an integer >= 8")
    _require(isinstance(cfg.random_instances, int) and cfg.random_instances >= 1,
             "random_instances must be a positive integer")
    _require(isinstance(cfg.output, str), "output must be a path string")
    _require(isinstance(cfg.corrupt_phase, bool), "corrupt_phase must be true or false")
    if cfg.spectrum_g is not None:
        _require(isinstance(cfg.spectrum_g, list) and len(cfg.spectrum_g) == M,
                 "spectrum_g must be a list of M numbers or [re, im] pairs")

    sweep = raw.get("sweep", {})
    _require(isinstance(sweep, dict), "sweep must be an object")
    for key in sweep:
        _require(key in _SWEEP_KEYS, f"unknown config key: sweep.{key}")
    cfg.sweep = SweepConfig(**sweep)
    _require(cfg.sweep.profile in PROFILES, f"sweep.profile must be one of {PROFILES}")
    lams = cfg.sweep.lambdas
    _require(isinstance(lams, list) and lams and all(isinstance(x, int) and x >= 1 for x in lams),
             "sweep.lambdas must be a list of positive integers")
    _require(all(b > a for a, b in zip(lams, lams[1:])), "sweep.lambdas must be increasing")
    _require(0 < cfg.sweep.overlap_level < 1, "sweep.overlap_level must lie in (0, 1)")
    if cfg.sweep.mu is not None:
        _require(cfg.sweep.mu > 0, "sweep.mu must be > 0")
    return cfg


def parse_config(path):
    """Read and validate a JSON config file."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return config_from_dict(raw)
