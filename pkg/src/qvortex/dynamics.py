"""Ring dynamics under the perturbed local induction equation.

The nonlinear integrator advances the projective curve r(tau, xi) with

    d_tau r = beta1 (r' x r'') + eps*omega (2 r''' + 3 |r''|^2 r'),

primes being xi-derivatives taken spectrally. The linear theory of small
transverse perturbations is handled in mode space (:class:`ModeSpectrum`,
:func:`kelvin_evolve`); :func:`measure_mode_frequency` connects the two.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import _spectral
from .errors import (
    ConfigError,
    ConstraintError,
    DomainError,
    InstabilityError,
    ResolutionError,
    SignalError,
)

ALIAS_TOL = 1e-6
COUPLING_TOL = 1e-10


def kelvin_rate(n):
    """Dimensionless Kelvin phase rate n*sqrt(n^2 - 1) per unit beta1*tau, odd in n."""
    n = int(n)
    if abs(n) <= 1:
        return 0.0
    return math.copysign(abs(n) * math.sqrt(n * n - 1.0), n)


def coupling_factor(n):
    """c_n = 2 (n sqrt(n^2-1) - n^2 + 1/2) in conj(j_{-n}) = c_n j_n."""
    n = abs(int(n))
    return 2.0 * (n * math.sqrt(max(n * n - 1.0, 0.0)) - n * n + 0.5)


@dataclass(frozen=True)
class ModeSpectrum:
    """Transverse amplitude J = sum_n j_n exp(i n xi) - omega*tau, n in [-M, M].

    ``coeffs[n + M]`` holds j_n. ``drift`` is the real n = 0 amplitude j_0(tau).
    """

    coeffs: np.ndarray
    drift: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("coeffs must be a 1-d array of odd length 2M+1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "drift", float(self.drift))

    @property
    def M(self):
        return (self.coeffs.size - 1) // 2

    def __getitem__(self, n):
        return complex(self.coeffs[n + self.M])

    @classmethod
    def from_minus_modes(cls, minus, M=32, drift=0.0):
        """Build from the independent amplitudes j_{-n}, n >= 2; j_n follows from the coupling."""
        c = np.zeros(2 * M + 1, dtype=complex)
        for n, value in minus.items():
            n = int(n)
            if n < 2:
                raise ConstraintError(f"independent amplitudes are j_-n with n >= 2, got n = {n}")
            if n > M:
                raise ValueError(f"mode {n} exceeds cutoff M = {M}")
            c[M - n] = value
            c[M + n] = np.conj(value) / coupling_factor(n)
        return cls(c, drift)

    @classmethod
    def seeded(cls, n, amplitude=1.0, phase=0.0, M=32):
        """Single Kelvin pair with |j_n| = amplitude (the larger member of the pair)."""
        minus = amplitude * abs(coupling_factor(n)) * np.exp(1j * phase)
        return cls.from_minus_modes({n: minus}, M=M)

    def coupling_residual(self):
        M = self.M
        res = 0.0
        for n in range(1, M + 1):
            lhs = np.conj(self.coeffs[M - n])
            rhs = coupling_factor(n) * self.coeffs[M + n]
            res = max(res, abs(lhs - rhs))
        return res

    def validate(self):
        M = self.M
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        if M >= 1 and (abs(self.coeffs[M - 1]) > COUPLING_TOL * scale or abs(self.coeffs[M + 1]) > COUPLING_TOL * scale):
            raise ConstraintError("mode n = 1 must vanish (j_-1 = 0)")
        if abs(self.coeffs[M].imag) > COUPLING_TOL * scale:
            raise ConstraintError("the n = 0 amplitude must be real")
        if self.coupling_residual() > COUPLING_TOL * scale:
            raise ConstraintError(f"conjugate coupling violated by {self.coupling_residual():.3e}")

    def as_dict(self):
        M = self.M
        out = {n: complex(self.coeffs[n + M]) for n in range(-M, M + 1) if self.coeffs[n + M] != 0}
        if self.drift:
            out[0] = out.get(0, 0.0) + self.drift
        return out

    def to_tangent(self, epsilon, n=256, phi0=0.0):
        from .filament import TangentField

        return TangentField.from_modes(self.as_dict(), epsilon, n=n, phi0=phi0)


def kelvin_evolve(modes, tau, beta1, omega):
    """Advance the linear Kelvin modes: j_n -> j_n exp(i n sqrt(n^2-1) beta1 tau), j_0 -> j_0 - omega tau."""
    modes.validate()
    M = modes.M
    n = np.arange(-M, M + 1)
    rates = np.array([kelvin_rate(k) for k in n])
    return ModeSpectrum(modes.coeffs * np.exp(1j * rates * beta1 * tau), modes.drift - omega * tau)


def dispersion_omega(n, R, Gamma, beta1):
    """Angular frequency (beta1 Gamma / 4 pi R) k_n sqrt(R^2 k_n^2 - 1), k_n = n / R."""
    if int(n) != n or n < 2:
        raise DomainError(f"Kelvin dispersion is defined for n >= 2, got n = {n}")
    k = n / R
    return beta1 * Gamma / (4.0 * math.pi * R) * k * math.sqrt(R * R * k * k - 1.0)


@dataclass(frozen=True)
class EvolutionConfig:
    dtau: float = 1e-3
    n_steps: int = 1000
    M: int = 32
    c_stab: float = 0.5
    dealias: bool = True
    save_every: int = 1

    def __post_init__(self):
        if not self.dtau > 0:
            raise ConfigError(f"dtau must be positive, got {self.dtau}")
        if self.n_steps < 0 or self.M < 2 or self.save_every < 1:
            raise ConfigError("n_steps >= 0, M >= 2 and save_every >= 1 are required")

    def max_dtau(self, beta1):
        if beta1 == 0:
            return math.inf
        return self.c_stab / (abs(beta1) * self.M**2)

    def check_stability(self, beta1):
        limit = self.max_dtau(beta1)
        if self.dtau > limit:
            raise ConfigError(
                f"dtau = {self.dtau:g} exceeds the stability limit c_stab/(beta1 M^2) = {limit:.3g}"
            )


def _cutoff(n, M, dealias):
    # Kelvin mode n lives on curve harmonics n -+ 1
    kmax = M + 1
    if dealias:
        kmax = min(kmax, n // 3)
    return kmax


def _rhs_spectral(r, beta1, eps_omega, kmax, n):
    spec = np.fft.rfft(r, axis=-1)
    k = np.fft.rfftfreq(n, d=1.0 / n)
    ik = 1j * k
    d1 = np.fft.irfft(spec * ik, n=n, axis=-1)
    d2 = np.fft.irfft(spec * ik**2, n=n, axis=-1)
    out = beta1 * np.cross(d1, d2, axis=0)
    if eps_omega != 0.0:
        d3 = np.fft.irfft(spec * ik**3, n=n, axis=-1)
        out = out + eps_omega * (2.0 * d3 + 3.0 * np.sum(d2 * d2, axis=0) * d1)
    out_spec = np.fft.rfft(out, axis=-1)
    out_spec[:, k > kmax] = 0.0
    return np.fft.irfft(out_spec, n=n, axis=-1), d1


def lie_rhs(curve, beta1, epsilon, omega, M=None, dealias=True):
    """Right-hand side d_tau r of the perturbed local induction equation.

    ``curve`` is the projective curve sampled on the periodic grid, shape (3, N).
    Raises :class:`ResolutionError` when more than ``ALIAS_TOL`` of the spectral
    energy sits above the dealiasing cutoff, or when the curve is degenerate.
    """
    r = np.asarray(curve, dtype=float)
    n = r.shape[-1]
    kmax = n // 3 if M is None else _cutoff(n, M, dealias)
    frac = _spectral.band_energy_fraction(r, n // 3)
    if frac > ALIAS_TOL:
        raise ResolutionError(f"{frac:.2e} of the curve energy lies above the dealiasing cutoff")
    rhs, d1 = _rhs_spectral(r, beta1, epsilon * omega, kmax, n)
    speed = np.linalg.norm(d1, axis=0)
    if speed.min() < 1e-8:
        raise ResolutionError("degenerate curve: vanishing tangent")
    return rhs


@dataclass
class Trajectory:
    tau: np.ndarray
    curves: np.ndarray
    beta1: float
    epsilon: float
    omega: float
    config: EvolutionConfig
    max_closure_drift: float = 0.0
    max_stretch_drift: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def n_xi(self):
        return self.curves.shape[-1]


def integrate_lie(initial, cfg, beta1, epsilon, omega):
    """Integrate the perturbed local induction equation with fixed-step RK4.

    The state is kept band-limited to curve harmonics |k| <= M + 1 (and below
    N/3 when dealiasing). Returns a :class:`Trajectory` of saved curves.
    """
    cfg.check_stability(beta1)
    r = np.array(initial, dtype=float)
    n = r.shape[-1]
    if r.shape != (3, n):
        raise ValueError(f"initial curve must have shape (3, N), got {r.shape}")
    kmax = _cutoff(n, cfg.M, cfg.dealias)
    frac = _spectral.band_energy_fraction(r, kmax)
    if frac > ALIAS_TOL:
        raise ResolutionError(f"{frac:.2e} of the initial energy lies above the mode cutoff")
    r = _spectral.lowpass(r, kmax)
    eo = epsilon * omega
    h = cfg.dtau

    def f(state):
        return _rhs_spectral(state, beta1, eo, kmax, n)[0]

    speed0 = np.linalg.norm(_spectral.derivative(r), axis=0)
    if speed0.min() < 1e-8:
        raise ResolutionError("degenerate curve: vanishing tangent")
    saved = [r.copy()]
    taus = [0.0]
    closure = 0.0
    stretch = 0.0
    for step in range(1, cfg.n_steps + 1):
        k1 = f(r)
        k2 = f(r + 0.5 * h * k1)
        k3 = f(r + 0.5 * h * k2)
        k4 = f(r + h * k3)
        r = r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(r)):
            raise InstabilityError(step)
        if step % cfg.save_every == 0 or step == cfg.n_steps:
            tangent = _spectral.derivative(r)
            closure = max(closure, float(np.max(np.abs(tangent.mean(axis=1)))))
            stretch = max(stretch, float(np.max(np.abs(np.linalg.norm(tangent, axis=0) - speed0))))
            saved.append(r.copy())
            taus.append(step * h)
    return Trajectory(
        tau=np.array(taus),
        curves=np.array(saved),
        beta1=beta1,
        epsilon=epsilon,
        omega=omega,
        config=cfg,
        max_closure_drift=closure,
        max_stretch_drift=stretch,
    )


def exact_ring(tau, n_xi, beta1, epsilon, omega, q=(0.0, 0.0, 0.0), R=1.0, phi0=0.0):
    """Closed-form rigid solution: translation beta1*tau e_z plus rotation eps*omega*tau."""
    xi = _spectral.grid(n_xi)
    q = np.asarray(q, dtype=float)
    ang = xi + phi0 + epsilon * omega * tau
    return np.array([
        q[0] / R + np.cos(ang),
        q[1] / R + np.sin(ang),
        np.full(n_xi, q[2] / R + beta1 * tau),
    ])


def transverse_amplitude(curve):
    """Fourier coefficients of J = j.e_rho + i j.e_z in the frame of the carrier circle.

    The carrier phase is read off the k = +1 harmonic of x + i y. Returns an
    array ``c`` with ``c[n]`` the coefficient of exp(i n xi) (numpy FFT order).
    """
    r = np.asarray(curve, dtype=float)
    n = r.shape[-1]
    xi = _spectral.grid(n)
    c1 = np.fft.fft(r[0] + 1j * r[1])[1] / n
    phi = math.atan2(c1.imag, c1.real)
    t = _spectral.derivative(r)
    amp = t[0] * np.cos(xi + phi) + t[1] * np.sin(xi + phi) + 1j * t[2]
    return np.fft.fft(amp) / n


def mode_series(trajectory, n):
    """Complex amplitude of exp(i n xi) in J for every saved curve."""
    return np.array([transverse_amplitude(c)[n] for c in trajectory.curves])


def measure_mode_frequency(trajectory, n, allow_constrained=False):
    """Phase rate (per unit tau) of the exp(i n xi) coefficient of J.

    Fits a straight line to the unwrapped phase by least squares. For a seeded
    Kelvin pair in the linear regime the result approaches
    n sqrt(n^2 - 1) beta1.
    """
    if n < 2 and not allow_constrained:
        raise DomainError(f"mode n = {n} is not a Kelvin mode")
    amps = mode_series(trajectory, n)
    floor = 10.0 * trajectory.n_xi * np.finfo(float).eps
    if np.min(np.abs(amps)) < floor:
        raise SignalError(f"mode {n} amplitude {np.min(np.abs(amps)):.2e} is at round-off level")
    phase = np.unwrap(np.angle(amps))
    slope, _ = np.polyfit(trajectory.tau, phase, 1)
    return float(slope)
