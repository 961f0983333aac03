"""Vortex creation and annihilation driven by a random-phase 0 <-> 1 Hamiltonian.

Starting from the vortex vacuum, U = i eps sum_w (conj(alpha_w) a_w^+ - alpha_w a_w)
with unit-modulus random alpha_w evolves every mode into a coherent state of
amplitude beta_w = -(eps t / hbar) conj(alpha_w). Occupation numbers are therefore Poisson with mean mu = (eps t / hbar)^2 in each mode,
independently of the phases. Sampling uses this law directly;
:func:`fock_oracle_evolve` certifies it by exponentiating the truncated
single-mode generator.
"""

from dataclasses import dataclass
import hashlib
import itertools
import json
import math

import numpy as np
from scipy.linalg import expm

from .bessel import bessel_i0
from .errors import ConsistencyError, DomainError, SizeError, TruncationError

TAIL_TOL = 1e-9
DEFAULT_COUNT_CAP = 10**6


@dataclass(frozen=True)
class ModeRegister:
    """Ordered, distinct multi-indices (s, m, ell, k) plus optional internal Kelvin occupations."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(tuple(int(v) for v in w) for w in self.indices)
        if len(set(idx)) != len(idx):
            raise DomainError("register indices must be distinct")
        for w in idx:
            if len(w) < 4 or w[0] < 0 or w[1] < 0 or w[2] < 0 or w[3] < 1 or any(v < 0 for v in w[4:]):
                raise DomainError(f"invalid register index {w}")
        object.__setattr__(self, "indices", idx)

    @property
    def size(self):
        return len(self.indices)

    @property
    def K(self):
        return max((max(w) for w in self.indices), default=0)

    @classmethod
    def from_cap(cls, K, s_max=None, internal_modes=0):
        """Every (s, m, ell, k) with all numbers <= K (m, k >= 1), s capped additionally by ``s_max``.

        ``internal_modes`` > 0 appends occupations n_2..n_{M+1} in [0, K] of
        that many internal Kelvin modes; the default keeps them at zero.
        """
        s_top = K if s_max is None else min(K, s_max)
        base = itertools.product(range(s_top + 1), range(1, K + 1), range(K + 1), range(1, K + 1))
        if internal_modes:
            inner = list(itertools.product(range(K + 1), repeat=internal_modes))
            return cls(tuple(b + i for b in base for i in inner))
        return cls(tuple(base))


@dataclass(frozen=True)
class CoherentEnsemble:
    """Register, coupling strength and time, with one random phase angle per mode."""

    register: ModeRegister
    eps_t_over_hbar: float
    phases: np.ndarray
    rng_seed: int = 0

    def __post_init__(self):
        ph = np.array(self.phases, dtype=float).ravel()
        if ph.size != self.register.size:
            raise DomainError("one phase per register mode is required")
        if self.eps_t_over_hbar < 0:
            raise DomainError("eps*t/hbar must be non-negative")
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)

    @classmethod
    def draw(cls, register, eps_t_over_hbar, rng_seed=0):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
        return cls(register, eps_t_over_hbar, rng.uniform(0.0, 2.0 * math.pi, register.size), rng_seed)

    @classmethod
    def from_physical(cls, register, epsilon, t, hbar, rng_seed=0):
        return cls.draw(register, epsilon * t / hbar, rng_seed)

    @property
    def alpha(self):
        return np.exp(1j * self.phases)

    @property
    def mean_occupation(self):
        return self.eps_t_over_hbar**2


def coherent_amplitudes(ens):
    """Displacement amplitudes beta_w = -(eps t / hbar) conj(alpha_w), keyed by multi-index."""
    beta = -ens.eps_t_over_hbar * np.conj(ens.alpha)
    return dict(zip(ens.register.indices, beta.tolist()))


def coherent_state(beta, n_trunc):
    """Number-basis amplitudes exp(-|beta|^2/2) beta^n / sqrt(n!) for n = 0..n_trunc."""
    out = np.empty(n_trunc + 1, dtype=complex)
    out[0] = math.exp(-0.5 * abs(beta) ** 2)
    for n in range(1, n_trunc + 1):
        out[n] = out[n - 1] * beta / math.sqrt(n)
    return out


def poisson_weights(mu, n_trunc):
    w = np.empty(n_trunc + 1)
    w[0] = math.exp(-mu)
    for n in range(1, n_trunc + 1):
        w[n] = w[n - 1] * mu / n
    return w


def poisson_tail(mu, n_trunc):
    """P(N > n_trunc) for N ~ Poisson(mu), summed term by term."""
    if mu == 0.0:
        return 0.0
    term = math.exp(-mu + (n_trunc + 1) * math.log(mu) - math.lgamma(n_trunc + 2))
    acc = 0.0
    n = n_trunc + 1
    while term > 1e-300:
        acc += term
        n += 1
        term *= mu / n
        if term < 1e-18 * acc:
            break
    return acc


def _check_truncation(amp, n_trunc):
    mu = amp * amp
    if n_trunc < 20.0 * mu + 20.0:
        raise TruncationError(f"n_trunc = {n_trunc} is below 20*(eps t/hbar)^2 + 20 = {20 * mu + 20:g}")
    tail = poisson_tail(mu, n_trunc)
    if tail > TAIL_TOL:
        raise TruncationError(f"truncated tail mass {tail:.2e} exceeds {TAIL_TOL:g}")


def fock_oracle_evolve(alpha, eps_t_over_hbar, n_trunc):
    """Vacuum evolved by exp((i/hbar) U t) with U = i eps (conj(alpha) a^+ - alpha a), truncated.

    The matrix exponential is taken with scipy's scaling-and-squaring Pade
    routine on the (n_trunc + 1)-dimensional number basis.
    """
    _check_truncation(eps_t_over_hbar, n_trunc)
    alpha = complex(alpha)
    a = np.diag(np.sqrt(np.arange(1, n_trunc + 1)), k=1).astype(complex)
    # (i/hbar) U t in units where the coupling enters only through eps t / hbar
    gen = -eps_t_over_hbar * (np.conj(alpha) * a.conj().T - alpha * a)
    vac = np.zeros(n_trunc + 1, dtype=complex)
    vac[0] = 1.0
    return expm(gen) @ vac


@dataclass(frozen=True)
class PhaseAveragedDensity:
    weights: np.ndarray
    purity: float
    mu: float


def phase_averaged_density(eps_t_over_hbar, n_trunc):
    """Diagonal Poisson mixture left by averaging a coherent state over a uniform phase."""
    _check_truncation(eps_t_over_hbar, n_trunc)
    mu = eps_t_over_hbar**2
    w = poisson_weights(mu, n_trunc)
    return PhaseAveragedDensity(w, float(np.sum(w * w)), mu)


def purity_closed_form(mu):
    """sum_n p_n^2 = exp(-2 mu) I_0(2 mu) for Poisson weights."""
    return math.exp(-2.0 * mu) * bessel_i0(2.0 * mu)


def monte_carlo_density(eps_t_over_hbar, n_trunc, n_phases, rng_seed=0):
    """Density matrix averaged over ``n_phases`` uniformly drawn coherent-state phases."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    rho = np.zeros((n_trunc + 1, n_trunc + 1), dtype=complex)
    base = coherent_state(eps_t_over_hbar, n_trunc)
    n = np.arange(n_trunc + 1)
    for theta in rng.uniform(0.0, 2.0 * math.pi, n_phases):
        psi = base * np.exp(1j * n * theta)
        rho += np.outer(psi, psi.conj())
    return rho / n_phases


@dataclass(frozen=True)
class NumberBasisState:
    """Vortex counts per register mode for one sample (zero counts omitted)."""

    occupations: dict
    seed: int = 0
    phases_digest: str = ""

    @property
    def total(self):
        return sum(self.occupations.values())

    def to_json(self):
        counts = [
            {"s": w[0], "m": w[1], "ell": w[2], "k": w[3], "n": int(c)}
            for w, c in sorted(self.occupations.items())
        ]
        return json.dumps({"seed": self.seed, "phases_digest": self.phases_digest, "counts": counts}, sort_keys=True)


def _sample_seeds(rng_seed, n_samples):
    return np.random.SeedSequence(rng_seed).generate_state(n_samples, dtype=np.uint64)


def sample_ensemble(ens, n_samples, count_cap=DEFAULT_COUNT_CAP):
    """Yield ``n_samples`` independent vortex configurations.

    Each sample draws fresh uniform phases from its own derived seed, then
    per-mode counts from Poisson(|beta|^2). The stream is a pure function of
    ``ens.rng_seed``.
    """
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    mu = ens.mean_occupation
    W = ens.register.size
    if W * mu > count_cap:
        raise SizeError(f"expected {W * mu:g} vortices per sample exceed the cap {count_cap}")
    indices = ens.register.indices
    for seed in _sample_seeds(ens.rng_seed, n_samples):
        rng = np.random.Generator(np.random.PCG64(int(seed)))
        phases = rng.uniform(0.0, 2.0 * math.pi, W)
        counts = rng.poisson(mu, W)
        digest = hashlib.sha256(phases.tobytes()).hexdigest()[:16]
        occ = {indices[i]: int(c) for i, c in enumerate(counts) if c}
        yield NumberBasisState(occ, int(seed), digest)


def count_matrix(samples, register):
    """Stack sample occupations into an (n_samples, W) integer array."""
    pos = {w: i for i, w in enumerate(register.indices)}
    rows = []
    for smp in samples:
        row = np.zeros(register.size, dtype=np.int64)
        for w, c in smp.occupations.items():
            row[pos[w]] = c
        rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(-1, register.size)


@dataclass
class EventStatistics:
    n_samples: int
    n_vortices: int
    per_mode_counts: dict
    histograms: dict
    quantiles: dict


def _weighted_quantiles(values, weights, qs):
    order = np.argsort(values)
    v = values[order]
    cw = np.cumsum(weights[order])
    return {str(q): float(v[min(np.searchsorted(cw, q * cw[-1]), v.size - 1)]) for q in qs}


def event_statistics(samples, spectrum, bins=20, quantiles=(0.05, 0.5, 0.95)):
    """Count-weighted histograms of Gamma, R_s and T_w over all created vortices.

    ``spectrum`` is a :class:`~qvortex.spectrum.Spectrum` containing every
    register index that occurs; a missing index raises :class:`ConsistencyError`.
    """
    per_mode = {}
    n_samples = 0
    for smp in samples:
        n_samples += 1
        for w, c in smp.occupations.items():
            per_mode[w] = per_mode.get(w, 0) + c
    entries = {}
    for w in per_mode:
        entry = spectrum.lookup(w[:4])
        if entry is None:
            raise ConsistencyError(f"register index {w[:4]} is missing from the spectrum")
        entries[w] = entry
    total = int(sum(per_mode.values()))
    hists, quants = {}, {}
    if total:
        keys = sorted(per_mode)
        weights = np.array([per_mode[w] for w in keys], dtype=float)
        for name, attr in (("gamma", "gamma"), ("R_s", "R_s"), ("T_w", "T_w")):
            vals = np.array([getattr(entries[w], attr) for w in keys])
            lo, hi = float(vals.min()), float(vals.max())
            if lo == hi:
                edges = np.array([lo, hi])
                counts = np.array([weights.sum()])
            else:
                counts, edges = np.histogram(vals, bins=bins, range=(lo, hi), weights=weights)
            hists[name] = {"edges": edges.tolist(), "counts": counts.tolist()}
            quants[name] = _weighted_quantiles(vals, weights, quantiles)
    else:
        for name in ("gamma", "R_s", "T_w"):
            hists[name] = {"edges": [], "counts": []}
            quants[name] = {}
    return EventStatistics(n_samples, total, per_mode, hists, quants)
