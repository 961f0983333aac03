"""Closed-filament geometry in the tangent-field representation.

A closed curve of length 2*pi*R is stored through its unit tangent j(xi) on the
uniform periodic grid xi_i = 2*pi*i/N. The curve itself is recovered as

    r(xi) = q + R * int_0^{2pi} K(xi - eta) j(eta) d eta,

where K is the periodic sawtooth with unit jump at coincidence. The integer-part
kernel floor(x / 2pi) and the zero-mean sawtooth differ by a term whose integral
against j is a constant vector, so the choice only fixes the origin of the
curve; the zero-mean form makes ``q`` the centroid and sends the unperturbed
tangent field to a unit circle centred exactly on ``q``. In Fourier space the
sawtooth has coefficients 1/(i n), which is how it is applied here.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from . import _spectral
from .errors import ClosureError, ConstraintError, DomainError

TOL_CLOSURE = 1e-10
DEFAULT_NXI = 256


@dataclass(frozen=True)
class FluidDomain:
    """Torus-pipe fluid domain plus fluid constants (SI units).

    R0 is the pipe radius, R1 the radius of the torus the pipe is bent into,
    rho0 the density, v0 the speed of sound, Rf the smallest admissible ring
    radius, hbar the action quantum and mu0 the central-charge mass.
    ``sigma_convention`` selects which length enters the time scale t0 used in
    sigma_ph: ``"Rf"`` (default) or ``"R0"``.
    """

    R0: float
    R1: float
    rho0: float
    v0: float
    Rf: float
    hbar: float
    mu0: float
    sigma_convention: str = "Rf"

    def __post_init__(self):
        for name in ("R0", "R1", "rho0", "v0", "Rf", "hbar", "mu0"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a finite positive number, got {value!r}")
        if not self.Rf < self.R0:
            raise DomainError(f"Rf must be smaller than R0 (Rf={self.Rf}, R0={self.R0})")
        if self.sigma_convention not in ("Rf", "R0"):
            raise DomainError(f"sigma_convention must be 'Rf' or 'R0', got {self.sigma_convention!r}")
        if self.R1 < 10.0 * self.R0:
            warnings.warn(
                f"R1/R0 = {self.R1 / self.R0:.3g} < 10: thin-pipe approximations are poor",
                stacklevel=2,
            )

    @classmethod
    def from_sigma(cls, sigma_ph, *, R0, R1, Rf, rho0=1.0, v0=1.0, hbar=1.0, sigma_convention="Rf"):
        """Build a domain whose central-charge mass yields the requested sigma_ph."""
        length = Rf if sigma_convention == "Rf" else R0
        mu0 = hbar / (sigma_ph**2 * v0 * length)
        return cls(R0=R0, R1=R1, rho0=rho0, v0=v0, Rf=Rf, hbar=hbar, mu0=mu0,
                   sigma_convention=sigma_convention)

    @property
    def mu_tilde(self):
        """Natural mass parameter rho0 * Rf**3."""
        return self.rho0 * self.Rf**3

    @property
    def sigma_ph(self):
        length = self.Rf if self.sigma_convention == "Rf" else self.R0
        return math.sqrt(self.hbar / (self.mu0 * self.v0 * length))


@dataclass(frozen=True)
class TangentField:
    """Unit tangent field sampled on the periodic grid; ``samples`` has shape (3, N)."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != 3 or arr.shape[1] < 4:
            raise ValueError(f"tangent samples must have shape (3, N), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def n(self):
        return self.samples.shape[1]

    @property
    def xi(self):
        return _spectral.grid(self.n)

    @classmethod
    def circle(cls, n=DEFAULT_NXI, phi0=0.0):
        """Tangent of the unit circle: (-sin(phi0 + xi), cos(phi0 + xi), 0)."""
        xi = _spectral.grid(n)
        return cls(np.array([-np.sin(phi0 + xi), np.cos(phi0 + xi), np.zeros(n)]))

    @classmethod
    def from_modes(cls, modes, epsilon, n=DEFAULT_NXI, phi0=0.0, allow_n1=False):
        """Perturbed circle j0 + epsilon*(Re(J) e_rho + Im(J) e_z).

        ``modes`` maps integer n to the complex coefficient of exp(i n xi) in
        the transverse amplitude J = j_rho + i j_z.
        """
        if not allow_n1 and (abs(modes.get(1, 0)) > 0 or abs(modes.get(-1, 0)) > 0):
            raise ConstraintError("modes n = +-1 are constrained to zero")
        xi = _spectral.grid(n)
        amp = np.zeros(n, dtype=complex)
        for order, coeff in modes.items():
            if abs(order) >= n // 2:
                raise ValueError(f"mode {order} not representable on N = {n}")
            amp += coeff * np.exp(1j * order * xi)
        e_rho = np.array([np.cos(phi0 + xi), np.sin(phi0 + xi), np.zeros(n)])
        e_z = np.array([np.zeros(n), np.zeros(n), np.ones(n)])
        j0 = cls.circle(n, phi0).samples
        return cls(j0 + epsilon * (amp.real * e_rho + amp.imag * e_z))

    def transverse_modes(self, phi0=0.0, epsilon=1.0):
        """Fourier coefficients of J = (j . e_rho + i j . e_z) / epsilon, keyed by n."""
        xi = self.xi
        e_rho = np.array([np.cos(phi0 + xi), np.sin(phi0 + xi), np.zeros(self.n)])
        amp = (np.einsum("ij,ij->j", self.samples, e_rho) + 1j * self.samples[2]) / epsilon
        coeffs = np.fft.fft(amp) / self.n
        orders = np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)
        return dict(zip(orders.tolist(), coeffs.tolist()))

    def closure_defect(self):
        """Mean of each component over the grid, i.e. (1/2pi) * int j dxi."""
        return self.samples.mean(axis=1)

    def check_closure(self, tol=TOL_CLOSURE):
        for comp, value in zip("xyz", self.closure_defect()):
            if abs(value) > tol:
                raise ClosureError(comp, value, tol)

    def norm_defect(self):
        return float(np.max(np.abs(np.linalg.norm(self.samples, axis=0) - 1.0)))

    def rotated(self, rotation):
        return TangentField(np.asarray(rotation, dtype=float) @ self.samples)


def reconstruct_curve(j, q=(0.0, 0.0, 0.0), R=1.0):
    """Sampled closed curve r(xi_i) of length 2*pi*R with tangent ``j`` and centroid ``q``.

    Returns an array of shape (3, N). Raises :class:`ClosureError` when the mean
    of any tangent component exceeds ``TOL_CLOSURE``.
    """
    j.check_closure()
    q = np.asarray(q, dtype=float).reshape(3, 1)
    return q + R * _spectral.antiderivative(j.samples)


def canonical_momentum(j, R, Gamma, rho0):
    """Canonical momentum p = rho0 R^2 Gamma f of a filament with tangent ``j``.

    f = (1/2) int int [xi - eta] j(eta) x j(xi) d xi d eta; the inner integral is
    the reconstructed projective curve, so f = (1/2) int r(xi) x j(xi) d xi,
    evaluated by the trapezoid rule (spectrally accurate on periodic data).
    """
    j.check_closure()
    r = _spectral.antiderivative(j.samples)
    f = 0.5 * np.cross(r, j.samples, axis=0).sum(axis=1) * (2.0 * math.pi / j.n)
    return rho0 * R**2 * Gamma * f


def circulation_from_state(p, varpi, chi, dom):
    """Positive circulation branch |p| / (pi rho0 Rf^2 (1 + varpi^2 + chi^2))."""
    pnorm = float(np.linalg.norm(np.asarray(p, dtype=float)))
    if pnorm == 0.0:
        raise DomainError("zero momentum: circulation is undefined for a degenerate state")
    return pnorm / (math.pi * dom.rho0 * dom.Rf**2 * (1.0 + varpi**2 + chi**2))


def oscillator_vars(R, j0_phase, omega, tau, Rf):
    """Oscillator pair (varpi, chi) = (dR/Rf)(cos, sin)(j0 + omega tau), dR = sqrt(R^2 - Rf^2)."""
    if R < Rf:
        raise DomainError(f"ring radius R={R} below the minimal radius Rf={Rf}")
    amp = math.sqrt(R * R - Rf * Rf) / Rf
    phase = j0_phase + omega * tau
    return amp * math.cos(phase), amp * math.sin(phase)


def radius_from_oscillator(varpi, chi, Rf):
    return Rf * math.sqrt(1.0 + varpi * varpi + chi * chi)


@dataclass(frozen=True)
class RingState:
    """Classical state of one perturbed ring.

    ``modes`` maps n >= 2 to the complex Kelvin amplitude of exp(-i n xi); the
    n = 1 amplitude has no slot because it is constrained to zero.
    """

    q: np.ndarray
    p: np.ndarray
    phi0: float
    varpi: float
    chi: float
    R: float
    Rf: float
    beta1: float = 1.0
    epsilon: float = 0.0
    omega: float = 0.0
    modes: dict = field(default_factory=dict)

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(3)
        p = np.array(self.p, dtype=float).reshape(3)
        q.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "modes", dict(self.modes))
        if self.R < self.Rf:
            raise DomainError(f"R={self.R} below Rf={self.Rf}")
        bad = [n for n in self.modes if int(n) < 2]
        if bad:
            raise ConstraintError(f"RingState carries Kelvin modes n >= 2 only, got {sorted(bad)}")
        lhs = self.varpi**2 + self.chi**2
        rhs = (self.R**2 - self.Rf**2) / self.Rf**2
        if abs(lhs - rhs) > 1e-9 * max(1.0, rhs):
            raise ConstraintError(f"varpi^2 + chi^2 = {lhs} but (R^2 - Rf^2)/Rf^2 = {rhs}")

    @classmethod
    def ring(cls, R, Rf, Gamma, rho0, *, q=(0.0, 0.0, 0.0), phi0=0.0, axis=(0.0, 0.0, 1.0),
             j0_phase=0.0, beta1=1.0, epsilon=0.0, omega=0.0, tau=0.0, modes=None):
        """State of a ring of radius R with momentum pi rho0 R^2 Gamma along ``axis``."""
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        varpi, chi = oscillator_vars(R, j0_phase, omega, tau, Rf)
        p = math.pi * rho0 * R**2 * Gamma * axis
        return cls(q=q, p=p, phi0=phi0, varpi=varpi, chi=chi, R=R, Rf=Rf, beta1=beta1,
                   epsilon=epsilon, omega=omega, modes=modes or {})

    def circulation(self, rho0):
        return float(np.linalg.norm(self.p)) / (math.pi * rho0 * self.R**2)
