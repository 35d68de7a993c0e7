"""Characteristic dynamics of 1D relativistic cold-plasma oscillations.

Along a characteristic ``d rho/d theta = V`` the plasma equations reduce to

    dP/dtheta = -E,     dE/dtheta = V,     V = P / sqrt(1 + P^2),

and the spatial derivatives ``p = P_rho``, ``e = E_rho`` follow from the
linear system

    dp_bar/dtheta = -e_bar,   dq/dtheta = K p_bar,   K = (1 + P^2)^(-3/2),

with ``p = p_bar/q``, ``e = e_bar/q`` and ``e_bar = q + e0 - 1``. The
derivatives blow up exactly when ``q`` reaches zero.
"""
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
import math

import numpy as np

from ._fallback import rhs_array, rk4_array
from .errors import DomainError
from .sweep import Sweep

DEFAULT_DTHETA = 1e-3


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise DomainError("non-finite input")


def lorentz_gamma(P):
    """Lorentz factor sqrt(1 + P^2)."""
    _check_finite(P)
    return np.sqrt(1.0 + np.square(P))


def conserved_c(P, E):
    """First integral C = 2 sqrt(1 + P^2) + E^2 (C >= 2, equality at rest)."""
    _check_finite(P, E)
    return 2.0 * np.sqrt(1.0 + np.square(P)) + np.square(E)


def k_minus(C):
    """Lower bound K_- = 8/C^3 of K(theta) along a characteristic with first
    integral C."""
    _check_finite(C)
    if np.any(np.asarray(C) < 2.0):
        raise DomainError("C must be >= 2 (first-integral lower bound)")
    return 8.0 / np.power(C, 3)


@dataclass(frozen=True)
class CharacteristicState:
    """Full state of one Lagrangian particle at time ``theta``.

    ``rho`` is the current Eulerian position, ``rho0`` the label. ``q`` is
    the Jacobian d rho / d rho0; ``e0`` is constant along the trajectory.
    """

    theta: float
    rho: float
    P: float
    E: float
    p_bar: float
    q: float
    e0: float
    rho0: float

    @classmethod
    def from_array(cls, theta, y, e0, rho0):
        return cls(float(theta), *(float(v) for v in y), float(e0), float(rho0))

    def as_array(self):
        return np.array([self.rho, self.P, self.E, self.p_bar, self.q])

    @property
    def gamma(self):
        return math.sqrt(1.0 + self.P * self.P)

    @property
    def V(self):
        return self.P / self.gamma

    @property
    def K(self):
        return self.gamma ** -3

    @property
    def e_bar(self):
        return (self.q + self.e0) - 1.0

    @property
    def p(self):
        return self.p_bar / self.q

    @property
    def e(self):
        return self.e_bar / self.q

    @property
    def N(self):
        return 1.0 - self.e

    @property
    def C(self):
        return 2.0 * self.gamma + self.E * self.E


def rhs(state):
    """Time derivative of ``(rho, P, E, p_bar, q)`` at ``state``."""
    return rhs_array(state.as_array(), state.e0)


def rk4_step(state, dtheta):
    """One classical fourth-order Runge-Kutta step of length ``dtheta``."""
    if not dtheta > 0:
        raise DomainError("dtheta must be positive")
    y = rk4_array(state.as_array(), state.e0, dtheta)
    return CharacteristicState.from_array(state.theta + dtheta, y, state.e0, state.rho0)


@dataclass
class Trajectory:
    """Time-ordered states of one characteristic.

    ``blowup`` is ``(theta_star, rho_star)`` when ``q`` vanished before the
    requested horizon; the last state is then the refined crossing point.
    """

    states: list = dc_field(default_factory=list)
    blowup: tuple | None = None

    @property
    def theta(self):
        return np.array([s.theta for s in self.states])

    def column(self, name):
        return np.array([getattr(s, name) for s in self.states])


def integrate_characteristic(rho0, field, dtheta=DEFAULT_DTHETA, theta_max=60.0,
                             cadence=1, backend=None):
    """Integrate the characteristic starting at ``rho0`` up to ``theta_max``
    or the first zero of ``q``, whichever comes first.

    States are recorded every ``cadence`` steps. A sign change of ``q`` is
    refined to ~1e-14 in time and appended as the final state.
    """
    if not theta_max > 0:
        raise DomainError("theta_max must be positive")
    sw = Sweep([rho0], field, dtheta, backend=backend)
    e0 = sw.e0[0]

    def snap():
        return CharacteristicState.from_array(sw.theta, sw.state[0], e0, rho0)

    traj = Trajectory([snap()])
    n_full = int(np.floor(theta_max / dtheta * (1 + 1e-12)))
    while sw.steps < n_full and sw.status[0] == 1:
        sw.step(min(cadence, n_full - sw.steps))
        if sw.status[0] == 1:
            traj.states.append(snap())
    if sw.status[0] == 1 and theta_max - sw.theta > 1e-15:
        sw.finish_at(theta_max)
        if sw.status[0] == 1:
            traj.states.append(snap())
    if sw.status[0] == 0:
        t_star = float(sw.event_theta[0])
        traj.states.append(CharacteristicState.from_array(t_star, sw.event_y[0], e0, rho0))
        traj.blowup = (t_star, float(sw.event_rho[0]))
    return traj


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def period(C, tol=1e-13, max_nodes=4096):
    """Oscillation period of the characteristic with first integral ``C``.

    The integral ``2 * int_{P-}^{P+} dP / sqrt(C - 2 sqrt(1 + P^2))`` is
    rewritten with ``P = P+ sin(psi)``, which turns it into the smooth
    integral ``int_{-pi/2}^{pi/2} sqrt(C + 2 sqrt(1 + P+^2 sin^2 psi)) dpsi``,
    then evaluated by Gauss-Legendre with node doubling until two successive
    values agree to relative ``tol``.
    """
    _check_finite(C)
    if C < 2.0:
        raise DomainError("C must be >= 2")
    if C == 2.0:
        return 2.0 * math.pi
    p_plus_sq = (C - 2.0) * (C + 2.0) / 4.0

    def integral(n):
        x, w = _gauss_legendre(n)
        psi = 0.5 * math.pi * x  # [-1, 1] -> [-pi/2, pi/2]
        f = np.sqrt(C + 2.0 * np.sqrt(1.0 + p_plus_sq * np.sin(psi) ** 2))
        return 0.5 * math.pi * float(np.dot(w, f))

    n = 8
    prev = integral(n)
    while n < max_nodes:
        n *= 2
        cur = integral(n)
        if abs(cur - prev) <= tol * abs(cur):
            return cur
        prev = cur
    return prev
