"""Quantized circulation spectrum of a ring confined to a torus-pipe domain.

Circulation levels are

    Gamma_{s;m,l,k} = hbar Rf lambda_{m,l,k} / (mu~0 (1 + sigma_ph^2 (s + 1/2))),

with lambda^2 = (m / 2R1)^2 + (zeta_k^(l) / R0)^2 the Laplacian eigenvalues of
the pipe and R_s = Rf sqrt(1 + sigma_ph^2 (s + 1/2)) the quantized radius.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import json
import math
import os
from typing import NamedTuple

import numpy as np

from .bessel import bessel_zero, bessel_zeros
from .errors import DomainError, RangeError, SizeError

DEFAULT_CAP = 10**7
AXIAL_FACTORS = {"half": 2.0, "periodic": 1.0}
CSV_HEADER = "s,m,ell,k,lambda,gamma,R_s,T_w,v_w"
FIELDS = ("s", "m", "ell", "k", "lambda", "gamma", "R_s", "T_w", "v_w")


class MultiIndex(NamedTuple):
    s: int
    m: int
    ell: int
    k: int


def _axial(axial_convention):
    try:
        return AXIAL_FACTORS[axial_convention]
    except KeyError:
        raise DomainError(f"axial_convention must be one of {sorted(AXIAL_FACTORS)}") from None


def check_index(idx, allow_m0=False):
    s, m, ell, k = idx
    if s < 0 or ell < 0 or k < 1 or m < (0 if allow_m0 else 1):
        raise DomainError(f"invalid multi-index {tuple(idx)}")
    return MultiIndex(int(s), int(m), int(ell), int(k))


def laplacian_eigenvalue(idx, dom, axial_convention="half"):
    """Positive root lambda of lambda^2 = (m / (f R1))^2 + (zeta_k^(l) / R0)^2, f = 2 for "half" and 1 for "periodic"."""
    _, m, ell, k = idx
    axial = m / (_axial(axial_convention) * dom.R1)
    radial = bessel_zero(ell, k) / dom.R0
    return math.hypot(axial, radial)


def n_max(dom):
    """Largest s with R_s <= R0."""
    sig2 = dom.sigma_ph**2
    ratio2 = (dom.R0 / dom.Rf) ** 2
    s = int(math.floor((ratio2 - 1.0) / sig2 - 0.5))
    # floor of a rounded quotient can be off by one either way
    while s >= 0 and _radius(s, dom) > dom.R0:
        s -= 1
    while _radius(s + 1, dom) <= dom.R0:
        s += 1
    return s


def _radius(s, dom):
    return dom.Rf * math.sqrt(1.0 + dom.sigma_ph**2 * (s + 0.5))


def quantized_radius(s, dom):
    """R_s = Rf sqrt(1 + sigma_ph^2 (s + 1/2))."""
    if s < 0:
        raise DomainError(f"s must be >= 0, got {s}")
    return _radius(s, dom)


def circulation(idx, dom, axial_convention="half", allow_m0=False):
    """Positive circulation level for the multi-index (s, m, ell, k)."""
    idx = check_index(idx, allow_m0)
    top = n_max(dom)
    if idx.s > top:
        raise RangeError(f"s = {idx.s} exceeds N_max = {top}: ring would not fit in the pipe")
    lam = laplacian_eigenvalue(idx, dom, axial_convention)
    return dom.hbar * dom.Rf * lam / (dom.mu_tilde * (1.0 + dom.sigma_ph**2 * (idx.s + 0.5)))


def gamma_min(dom):
    """Circulation floor hbar zeta_1^(0) / (rho0 R0^3)."""
    return dom.hbar * bessel_zero(0, 1) / (dom.rho0 * dom.R0**3)


@dataclass(frozen=True)
class LevelGap:
    s: int
    exact: float
    closed_form: float
    relative_deviation: float
    closed_form_valid: bool


def delta_gamma_min(dom, s, axial_convention="half"):
    """Gap between the (1,0,1) levels at s and s+1, against its large-ring closed form.

    The closed form (hbar / mu~0) sigma^2 zeta_1^(0) (Rf / R0)^5 replaces
    (1 + sigma^2 (s + 1/2)) (1 + sigma^2 (s + 3/2)) by (R0 / Rf)^4; it is
    flagged valid when that replacement is accurate to 1%.
    """
    top = n_max(dom)
    if s < 0 or s >= top:
        raise RangeError(f"need 0 <= s < N_max = {top}, got s = {s}")
    sig2 = dom.sigma_ph**2
    d_prod = (1.0 + sig2 * (s + 0.5)) * (1.0 + sig2 * (s + 1.5))
    lam = laplacian_eigenvalue((s, 1, 0, 1), dom, axial_convention)
    # 1/D_s - 1/D_{s+1} = sigma^2 / (D_s D_{s+1}); subtracting the two levels
    # directly would lose about eps * Gamma / gap in relative accuracy
    exact = dom.hbar * dom.Rf * lam / dom.mu_tilde * sig2 / d_prod
    closed = dom.hbar / dom.mu_tilde * sig2 * bessel_zero(0, 1) * (dom.Rf / dom.R0) ** 5
    valid = abs(d_prod / (dom.R0 / dom.Rf) ** 4 - 1.0) <= 1e-2
    return LevelGap(s, exact, closed, (exact - closed) / closed, valid)


@dataclass(frozen=True)
class SpectrumBounds:
    """Inclusive enumeration window; an empty range yields an empty spectrum."""

    s_max: int
    m_max: int
    ell_max: int
    k_max: int
    s_min: int = 0
    m_min: int = 1
    ell_min: int = 0
    k_min: int = 1

    def ranges(self):
        return (
            range(self.s_min, self.s_max + 1),
            range(self.m_min, self.m_max + 1),
            range(self.ell_min, self.ell_max + 1),
            range(self.k_min, self.k_max + 1),
        )

    def count(self):
        return math.prod(len(r) for r in self.ranges())


class SpectrumEntry(NamedTuple):
    idx: MultiIndex
    lam: float
    gamma: float
    R_s: float
    T_w: float
    v_w: float


class Spectrum:
    """Column store of enumerated levels, sorted by circulation then (s, m, ell, k)."""

    def __init__(self, columns, domain=None, beta1=1.0):
        self.columns = {name: np.asarray(columns[name]) for name in FIELDS}
        self.domain = domain
        self.beta1 = beta1
        self._lookup = None

    def __len__(self):
        return int(self.columns["gamma"].size)

    def __getitem__(self, i):
        c = self.columns
        return SpectrumEntry(
            MultiIndex(int(c["s"][i]), int(c["m"][i]), int(c["ell"][i]), int(c["k"][i])),
            float(c["lambda"][i]), float(c["gamma"][i]), float(c["R_s"][i]),
            float(c["T_w"][i]), float(c["v_w"][i]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __getattr__(self, name):
        cols = self.__dict__.get("columns", {})
        if name in cols:
            return cols[name]
        raise AttributeError(name)

    def lookup(self, idx):
        if self._lookup is None:
            c = self.columns
            keys = zip(c["s"].tolist(), c["m"].tolist(), c["ell"].tolist(), c["k"].tolist())
            self._lookup = {key: i for i, key in enumerate(keys)}
        i = self._lookup.get(tuple(int(v) for v in idx))
        return None if i is None else self[i]

    def to_csv(self, path):
        c = self.columns
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for i in range(len(self)):
                fh.write(
                    f"{c['s'][i]},{c['m'][i]},{c['ell'][i]},{c['k'][i]},"
                    + ",".join(format(float(c[f][i]), ".17g") for f in FIELDS[4:])
                    + "\n"
                )

    def to_jsonl(self, path):
        c = self.columns
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for i in range(len(self)):
                row = {f: int(c[f][i]) for f in FIELDS[:4]}
                row.update({f: float(format(float(c[f][i]), ".17g")) for f in FIELDS[4:]})
                fh.write(json.dumps(row) + "\n")

    @classmethod
    def read_csv(cls, path):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, dtype=float)
        cols = {}
        for j, name in enumerate(FIELDS):
            col = data[:, j] if data.size else np.empty(0)
            cols[name] = col.astype(np.int64) if j < 4 else col
        return cls(cols)


def _block(dom, s_vals, lam, m_col, ell_col, k_col, beta1):
    sig2 = dom.sigma_ph**2
    denom = 1.0 + sig2 * (s_vals + 0.5)
    radius = dom.Rf * np.sqrt(denom)
    gamma = (dom.hbar * dom.Rf / dom.mu_tilde) * lam[None, :] / denom[:, None]
    r2 = np.broadcast_to(radius[:, None], gamma.shape)
    t_w = 4.0 * math.pi * r2**2 / gamma
    v_w = beta1 * r2 / t_w
    ns, nl = gamma.shape
    return {
        "s": np.repeat(s_vals, nl),
        "m": np.tile(m_col, ns),
        "ell": np.tile(ell_col, ns),
        "k": np.tile(k_col, ns),
        "lambda": np.tile(lam, ns),
        "gamma": gamma.ravel(),
        "R_s": r2.ravel(),
        "T_w": t_w.ravel(),
        "v_w": v_w.ravel(),
    }


def _threads():
    try:
        return max(1, int(os.environ.get("VORTEX_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_spectrum(dom, bounds, beta1=1.0, cap=DEFAULT_CAP, axial_convention="half", allow_m0=False):
    """Enumerate every level in ``bounds`` and sort by (gamma, s, m, ell, k).

    Raises :class:`SizeError` before allocating when the entry count exceeds
    ``cap`` and :class:`RangeError` when the window reaches beyond N_max.
    """
    total = bounds.count()
    if total > cap:
        raise SizeError(f"{total} spectrum entries exceed the cap {cap}")
    s_rng, m_rng, l_rng, k_rng = bounds.ranges()
    if m_rng and m_rng.start < (0 if allow_m0 else 1):
        raise DomainError("m = 0 requires allow_m0=True")
    if total and s_rng.stop - 1 > n_max(dom):
        raise RangeError(f"s window reaches {s_rng.stop - 1} > N_max = {n_max(dom)}")
    if total == 0:
        return Spectrum({f: np.empty(0, dtype=np.int64 if i < 4 else float) for i, f in enumerate(FIELDS)}, dom, beta1)

    axial = _axial(axial_convention)
    mm, ll, kk = np.meshgrid(np.array(m_rng), np.array(l_rng), np.array(k_rng), indexing="ij")
    mm, ll, kk = mm.ravel(), ll.ravel(), kk.ravel()
    zeta = np.empty(kk.size)
    for ell in l_rng:
        z = bessel_zeros(ell, k_rng.stop - 1)
        sel = ll == ell
        zeta[sel] = z[kk[sel] - 1]
    lam = np.hypot(mm / (axial * dom.R1), zeta / dom.R0)

    s_all = np.arange(s_rng.start, s_rng.stop, dtype=np.int64)
    per_block = max(1, 2_000_000 // max(1, lam.size))
    chunks = [s_all[i:i + per_block] for i in range(0, s_all.size, per_block)]
    work = lambda sv: _block(dom, sv, lam, mm, ll, kk, beta1)
    threads = _threads()
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(sv) for sv in chunks]
    cols = {f: np.concatenate([p[f] for p in parts]) for f in FIELDS}
    order = np.lexsort((cols["k"], cols["ell"], cols["m"], cols["s"], cols["gamma"]))
    return Spectrum({f: cols[f][order] for f in FIELDS}, dom, beta1)


@dataclass(frozen=True)
class AsymptoteFit:
    axis: str
    slope: float
    intercept: float
    r2: float
    mu1: float
    residuals: np.ndarray


def linear_asymptote(dom, axis="m", window=(50, 100), fixed=(0, 1, 0, 1), axial_convention="half"):
    """Least-squares line through Gamma along one quantum number.

    ``fixed`` gives (s, m, ell, k); the entry named by ``axis`` is swept over
    ``window``. The fitted slope defines the mass constant mu1 = hbar / slope.
    """
    names = ("s", "m", "ell", "k")
    pos = names.index(axis)
    if pos == 0:
        raise DomainError("the linear asymptote runs along m, ell or k")
    i_vals = np.arange(window[0], window[1] + 1)
    gam = []
    for i in i_vals:
        idx = list(fixed)
        idx[pos] = int(i)
        gam.append(circulation(tuple(idx), dom, axial_convention))
    gam = np.array(gam)
    slope, intercept = np.polyfit(i_vals, gam, 1)
    resid = gam - (slope * i_vals + intercept)
    ss_tot = np.sum((gam - gam.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot
    return AsymptoteFit(axis, float(slope), float(intercept), float(r2), dom.hbar / slope, resid)
