"""Per-state time and velocity scales, and box-counting analysis of level sets."""

from dataclasses import asdict, dataclass, field
import json
import math

import numpy as np
from scipy import stats

from .bessel import bessel_zero
from .errors import DomainError, RangeError, SizeError
from .spectrum import check_index, circulation, n_max, quantized_radius

MIN_POINTS = 1000
R2_THRESHOLD = 0.995


def time_scale(R_s, Gamma):
    """Evolution time scale 4 pi R_s^2 / Gamma."""
    if not Gamma > 0:
        raise DomainError(f"circulation must be positive, got {Gamma}")
    return 4.0 * math.pi * R_s**2 / Gamma


def loop_velocity(R_s, T_w, beta1):
    """Translation speed beta1 R_s / T_w of a ring on its own time scale."""
    if not T_w > 0:
        raise DomainError(f"time scale must be positive, got {T_w}")
    return beta1 * R_s / T_w


def t_max(dom):
    """Largest time scale 4 pi rho0 R0^5 / (hbar zeta_1^(0)), reached by the largest rings."""
    return 4.0 * math.pi * dom.rho0 * dom.R0**5 / (dom.hbar * bessel_zero(0, 1))


def quantized_dispersion(idx, n, dom, beta1=1.0, axial_convention="half"):
    """Kelvin frequency of harmonic n on the ring in state ``idx``."""
    if int(n) != n or n < 2:
        raise DomainError(f"Kelvin dispersion is defined for n >= 2, got n = {n}")
    idx = check_index(idx)
    gamma = circulation(idx, dom, axial_convention)
    radius = quantized_radius(idx.s, dom)
    k = n / radius
    return beta1 * gamma / (4.0 * math.pi * radius) * k * math.sqrt(radius**2 * k**2 - 1.0)


@dataclass(frozen=True)
class ScaleSet:
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size and (not np.all(np.isfinite(v)) or v[0] <= 0):
            raise DomainError("scale sets hold finite positive values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


def geometric_ladder(j_lo, j_hi, base=2.0):
    """Box sizes base**-j for j = j_lo..j_hi, coarse to fine."""
    return base ** -np.arange(j_lo, j_hi + 1, dtype=float)


def box_counts(values, deltas):
    """Occupied boxes of each size in ``deltas`` (same units as ``values``)."""
    v = np.sort(np.asarray(values, dtype=float))
    lo = v[0]
    out = np.empty(len(deltas), dtype=np.int64)
    for i, d in enumerate(deltas):
        idx = np.floor((v - lo) / d).astype(np.int64)
        out[i] = 1 + np.count_nonzero(np.diff(idx))
    return out


@dataclass
class FitReport:
    dimension: float
    ci: tuple
    window: tuple
    r2: float
    n_points: int
    degenerate: bool = False
    delta_cut: float | None = None
    deltas: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    label: str = ""

    def to_json(self):
        payload = {
            "dimension": self.dimension,
            "ci": list(self.ci),
            "window": list(self.window),
            "r2": self.r2,
            "n_points": self.n_points,
        }
        for k, v in asdict(self).items():
            payload.setdefault(k, v)
        return json.dumps(payload, sort_keys=True)


def _fit(x, y):
    res = stats.linregress(x, y)
    r2 = res.rvalue**2
    dof = x.size - 2
    half = stats.t.ppf(0.975, dof) * res.stderr if dof > 0 else math.inf
    return res.slope, res.intercept, r2, half


def box_counting_dimension(values, deltas=None, *, relative=True, min_points=MIN_POINTS,
                           r2_threshold=R2_THRESHOLD, min_window=4, label=""):
    """Box-counting dimension from the slope of log N(delta) against log(1/delta).

    ``deltas`` are box sizes; with ``relative=True`` they are fractions of the
    set's extent (max - min), which makes the estimate invariant under
    rescaling of the values. The fit uses the widest contiguous window of the
    ladder whose R^2 reaches ``r2_threshold`` (ties go to the higher R^2).
    When the ladder continues below that window, the window's finest box size
    is reported as ``delta_cut``: the scale below which the power law fails.
    Reported ``window`` and ``delta_cut`` are in the units of ``values``.
    """
    v = np.asarray(getattr(values, "values", values), dtype=float).ravel()
    label = label or getattr(values, "label", "")
    if v.size < min_points:
        raise SizeError(f"set has {v.size} points; at least {min_points} are needed")
    deltas = geometric_ladder(4, 16) if deltas is None else np.asarray(deltas, dtype=float)
    span = float(v.max() - v.min())
    if span == 0.0:
        return FitReport(0.0, (0.0, 0.0), (math.nan, math.nan), 1.0, int(v.size), degenerate=True, label=label)
    phys = deltas * span if relative else deltas
    counts = box_counts(v, phys)
    x = np.log(1.0 / phys)
    y = np.log(counts.astype(float))
    order = np.argsort(phys)[::-1]
    x, y, phys, counts = x[order], y[order], phys[order], counts[order]

    best = None
    n = x.size
    for width in range(n, min_window - 1, -1):
        for a in range(0, n - width + 1):
            b = a + width
            if np.ptp(y[a:b]) == 0.0:
                slope, intercept, r2, half = 0.0, y[a], 1.0, 0.0
            else:
                slope, intercept, r2, half = _fit(x[a:b], y[a:b])
            if r2 >= r2_threshold and (best is None or r2 > best[2]):
                best = (a, b, r2, slope, intercept, half)
        if best is not None:
            break
    if best is None:
        slope, intercept, r2, half = _fit(x, y)
        best = (0, n, r2, slope, intercept, half)
    a, b, r2, slope, intercept, half = best
    resid = y - (slope * x + intercept)
    cut = float(phys[b - 1]) if b < n else None
    return FitReport(
        dimension=float(slope),
        ci=(float(slope - half), float(slope + half)),
        window=(float(phys[b - 1]), float(phys[a])),
        r2=float(r2),
        n_points=int(v.size),
        delta_cut=cut,
        deltas=phys.tolist(),
        counts=counts.tolist(),
        residuals=resid.tolist(),
        label=label,
    )


def reciprocal_set(n_lo, n_hi):
    """Reference set {1/n : n_lo <= n <= n_hi}."""
    return ScaleSet(1.0 / np.arange(n_lo, n_hi + 1, dtype=float), f"1/n, n in [{n_lo}, {n_hi}]")


def uniform_set(n):
    return ScaleSet(np.arange(1, n + 1, dtype=float) / n, f"uniform grid, {n} points")


def gamma_slice(dom, s_lo, s_hi, m=1, ell=0, k=1, axial_convention="half"):
    """Circulation levels at fixed (m, ell, k) for s in [s_lo, s_hi]."""
    top = n_max(dom)
    if s_lo < 0 or s_hi > top or s_lo > s_hi:
        raise RangeError(f"need 0 <= s_lo <= s_hi <= N_max = {top}, got [{s_lo}, {s_hi}]")
    s = np.arange(s_lo, s_hi + 1, dtype=float)
    top = circulation((0, m, ell, k), dom, axial_convention) * (1.0 + 0.5 * dom.sigma_ph**2)
    gam = top / (1.0 + dom.sigma_ph**2 * (s + 0.5))
    return ScaleSet(gam, f"Gamma_s at (m,ell,k)=({m},{ell},{k}), s in [{s_lo}, {s_hi}]")
