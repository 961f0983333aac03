"""Run configuration: a versioned, human-editable TOML (or JSON) document.

Every field has a default, so an empty file is a valid configuration. The
defaults describe a thin torus pipe (R1/R0 = 100, R0/Rf = 10) with
sigma_ph = 1e-3, in units where rho0 = v0 = hbar = Rf = 1.

Example::

    schema = 1

    [domain]
    R0 = 10.0
    R1 = 1000.0

    [dynamics]
    seed_modes = [2, 3]

    [turbulence]
    eps_t_over_hbar = 0.5
"""

from dataclasses import asdict, dataclass, field, fields
import json
import math

from .errors import ConfigError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

SCHEMA_VERSION = 1


@dataclass
class DomainBlock:
    R0: float = 10.0
    R1: float = 1000.0
    rho0: float = 1.0
    v0: float = 1.0
    Rf: float = 1.0
    hbar: float = 1.0
    # hbar / (sigma_ph^2 v0 Rf) with sigma_ph = 1e-3
    mu0: float = 1.0e6
    sigma_convention: str = "Rf"


@dataclass
class DynamicsBlock:
    beta1: float = 1.0
    epsilon: float = 1.0e-4
    omega: float = 0.0
    N_xi: int = 256
    dtau: float = 1.0e-3
    n_steps: int = 1000
    M: int = 16
    c_stab: float = 0.5
    save_every: int = 1
    seed_modes: list = field(default_factory=list)
    seed_amplitude: float = 1.0


@dataclass
class SpectrumBlock:
    s_min: int = 0
    s_max: int = 3
    m_min: int = 1
    m_max: int = 2
    ell_min: int = 0
    ell_max: int = 1
    k_min: int = 1
    k_max: int = 2
    cap: int = 10**7
    axial_convention: str = "half"
    allow_m0: bool = False


@dataclass
class FractalBlock:
    # "reciprocal", "uniform", "gamma_slice" or "csv"
    source: str = "reciprocal"
    n_lo: int = 1
    n_hi: int = 100000
    s_lo: int = 1000
    s_hi: int = 0
    m: int = 1
    ell: int = 0
    k: int = 1
    input: str = ""
    column: str = "gamma"
    j_lo: int = 4
    j_hi: int = 16
    min_points: int = 1000


@dataclass
class TurbulenceBlock:
    K: int = 1
    s_max: int = -1
    internal_modes: int = 0
    indices: list = field(default_factory=list)
    eps_t_over_hbar: float = 0.5
    n_samples: int = 10000
    rng_seed: int = 0
    n_trunc: int = 40
    oracle_phases: int = 8
    bins: int = 20
    count_cap: int = 10**6


@dataclass
class OutputBlock:
    directory: str = "runs"
    format: str = "csv"


@dataclass
class RunConfig:
    schema: int = SCHEMA_VERSION
    domain: DomainBlock = field(default_factory=DomainBlock)
    dynamics: DynamicsBlock = field(default_factory=DynamicsBlock)
    spectrum: SpectrumBlock = field(default_factory=SpectrumBlock)
    fractal: FractalBlock = field(default_factory=FractalBlock)
    turbulence: TurbulenceBlock = field(default_factory=TurbulenceBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    def to_dict(self):
        return asdict(self)

    def snapshot(self):
        """Canonical JSON text of the resolved configuration."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


_BLOCKS = {
    "domain": DomainBlock,
    "dynamics": DynamicsBlock,
    "spectrum": SpectrumBlock,
    "fractal": FractalBlock,
    "turbulence": TurbulenceBlock,
    "output": OutputBlock,
}

_POSITIVE = {
    "domain": ("R0", "R1", "rho0", "v0", "Rf", "hbar", "mu0"),
    "dynamics": ("N_xi", "dtau", "M", "c_stab", "save_every", "seed_amplitude"),
    "turbulence": ("n_samples", "n_trunc", "oracle_phases", "bins", "count_cap"),
    "spectrum": ("cap",),
    "fractal": ("min_points",),
}
_NONNEG = {
    "dynamics": ("n_steps", "epsilon"),
    "spectrum": ("s_min", "s_max", "m_min", "m_max", "ell_min", "ell_max", "k_min", "k_max"),
    "fractal": ("n_lo", "n_hi", "s_lo", "s_hi", "ell"),
    "turbulence": ("K", "internal_modes", "eps_t_over_hbar", "rng_seed"),
}
_CHOICES = {
    ("domain", "sigma_convention"): ("Rf", "R0"),
    ("spectrum", "axial_convention"): ("half", "periodic"),
    ("fractal", "source"): ("reciprocal", "uniform", "gamma_slice", "csv"),
    ("output", "format"): ("csv", "jsonl"),
}


def _coerce(block, name, value, default):
    where = f"{block}.{name}"
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true or false, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        if not math.isfinite(value):
            raise ConfigError(f"{where}: expected a finite number, got {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list, got {value!r}")
        return value
    return value


def _build_block(name, raw):
    cls = _BLOCKS[name]
    if not isinstance(raw, dict):
        raise ConfigError(f"{name}: expected a table, got {raw!r}")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}: unknown field")
    block = cls()
    for key, value in raw.items():
        setattr(block, key, _coerce(name, key, value, getattr(block, key)))
    return block


def _validate(cfg):
    for block, names in _POSITIVE.items():
        for name in names:
            value = getattr(getattr(cfg, block), name)
            if not value > 0:
                raise ConfigError(f"{block}.{name}: must be > 0, got {value!r}")
    for block, names in _NONNEG.items():
        for name in names:
            value = getattr(getattr(cfg, block), name)
            if value < 0:
                raise ConfigError(f"{block}.{name}: must be >= 0, got {value!r}")
    for (block, name), allowed in _CHOICES.items():
        value = getattr(getattr(cfg, block), name)
        if value not in allowed:
            raise ConfigError(f"{block}.{name}: must be one of {', '.join(allowed)}, got {value!r}")
    d = cfg.domain
    if not d.Rf < d.R0:
        raise ConfigError(f"domain.Rf: must be smaller than domain.R0 = {d.R0}, got {d.Rf!r}")
    dyn = cfg.dynamics
    if dyn.M < 2:
        raise ConfigError(f"dynamics.M: must be >= 2, got {dyn.M}")
    if dyn.N_xi < 8:
        raise ConfigError(f"dynamics.N_xi: must be >= 8, got {dyn.N_xi}")
    for n in dyn.seed_modes:
        if isinstance(n, bool) or not isinstance(n, int) or not 2 <= n <= dyn.M:
            raise ConfigError(f"dynamics.seed_modes: entries must be integers in [2, M={dyn.M}], got {n!r}")
    sp = cfg.spectrum
    if sp.k_min < 1:
        raise ConfigError(f"spectrum.k_min: must be >= 1, got {sp.k_min}")
    if sp.m_min < 1 and not sp.allow_m0:
        raise ConfigError(f"spectrum.m_min: must be >= 1 unless allow_m0 is set, got {sp.m_min}")
    fr = cfg.fractal
    if fr.j_lo > fr.j_hi:
        raise ConfigError(f"fractal.j_hi: must be >= fractal.j_lo = {fr.j_lo}, got {fr.j_hi}")
    if fr.source == "csv" and not fr.input:
        raise ConfigError("fractal.input: a CSV path is required when source = 'csv'")
    tb = cfg.turbulence
    for w in tb.indices:
        if not isinstance(w, list) or len(w) < 4 or not all(isinstance(v, int) and not isinstance(v, bool) for v in w):
            raise ConfigError(f"turbulence.indices: entries must be integer lists [s, m, ell, k, ...], got {w!r}")
    if tb.rng_seed >= 2**64:
        raise ConfigError(f"turbulence.rng_seed: must fit in 64 bits, got {tb.rng_seed}")


def config_from_dict(raw):
    """Build and validate a :class:`RunConfig`; errors name the offending field."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a table")
    unknown = sorted(set(raw) - set(_BLOCKS) - {"schema"})
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown section")
    schema = raw.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ConfigError(f"schema: unsupported version {schema!r}, expected {SCHEMA_VERSION}")
    cfg = RunConfig()
    for name in _BLOCKS:
        if name in raw:
            setattr(cfg, name, _build_block(name, raw[name]))
    _validate(cfg)
    return cfg


def load_config(path=None):
    """Read a TOML or JSON configuration file; ``None`` gives the defaults."""
    if path is None:
        return config_from_dict({})
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
    text = data.decode("utf-8", errors="replace")
    if text.lstrip().startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    else:
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config: invalid TOML: {exc}") from exc
    return config_from_dict(raw)
