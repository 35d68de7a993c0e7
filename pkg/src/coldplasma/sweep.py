"""Lockstep integration of many characteristics with q-zero event capture.

Characteristics are independent, so a sweep is just the batch kernel applied
to an ``(M, 5)`` state array. Whenever a characteristic's ``q`` changes sign
inside a step, the kernel freezes it at the pre-step state and the crossing
time is refined here by re-integrating that single step with a shorter
length.
"""
import numpy as np
from scipy.optimize import brentq

from ._fallback import rhs_array, rk4_array
from .errors import IntegratorFailure
from .kernels import get_advance

EVENT_TOL = 1e-14


def _hermite_seed(q0, q1, d0, d1, h):
    """Root in (0, h) of the cubic Hermite interpolant of q over one step."""
    # q(s) on s in [0, 1] with slopes scaled by h
    a = 2 * q0 - 2 * q1 + h * d0 + h * d1
    b = -3 * q0 + 3 * q1 - 2 * h * d0 - h * d1
    c = h * d0
    roots = np.roots([a, b, c, q0])
    real = [r.real for r in roots if abs(r.imag) < 1e-12 and 0.0 <= r.real <= 1.0]
    if not real:
        return h * q0 / (q0 - q1)
    return h * min(real)


def refine_crossing(y, e0, h):
    """Locate the zero of q inside one RK4 step.

    Parameters
    ----------
    y : array of shape (5,)
        State at the start of the step, with ``q > 0``.
    e0 : float
        Initial field derivative of the characteristic.
    h : float
        Step length over which ``q`` became non-positive.

    Returns
    -------
    tau : float
        Offset from the step start at which ``q`` vanishes (to ~1e-14).
    y_star : ndarray
        State at ``tau``.
    """

    def q_at(tau):
        return rk4_array(y, e0, tau)[4]

    y1 = rk4_array(y, e0, h)
    hi = h
    # the compiled and numpy steps agree bitwise; this only guards q(h) == +0
    while q_at(hi) > 0.0:
        hi *= 1.5
    seed = _hermite_seed(y[4], y1[4], rhs_array(y, e0)[4], rhs_array(y1, e0)[4], h)
    seed = min(max(seed, 0.0), hi)
    w = 1e-6 * h
    lo_b, hi_b = 0.0, hi
    while w < hi:
        a, b = max(seed - w, 0.0), min(seed + w, hi)
        if q_at(a) > 0.0 >= q_at(b):
            lo_b, hi_b = a, b
            break
        w *= 10.0
    tau = brentq(q_at, lo_b, hi_b, xtol=EVENT_TOL, rtol=4 * np.finfo(float).eps)
    return tau, rk4_array(y, e0, tau)


class Sweep:
    """A batch of characteristics advanced together at a fixed step.

    Parameters
    ----------
    labels : array_like
        Lagrangian labels rho0.
    field : InitialDataField
        Anything exposing vectorized ``P0, E0, p0, e0`` callables.
    dtheta : float
        Time step.
    backend : str, optional
        ``"cython"`` or ``"python"``; default picks the compiled kernel when
        available.
    """

    def __init__(self, labels, field, dtheta=1e-3, backend=None):
        if not dtheta > 0:
            raise ValueError("dtheta must be positive")
        self.labels = np.ascontiguousarray(np.atleast_1d(labels), dtype=float)
        rho = self.labels
        P0 = np.asarray(field.P0(rho), float) * np.ones_like(rho)
        E0 = np.asarray(field.E0(rho), float) * np.ones_like(rho)
        p0 = np.asarray(field.p0(rho), float) * np.ones_like(rho)
        self.e0 = np.ascontiguousarray(np.asarray(field.e0(rho), float) * np.ones_like(rho))
        self.C = 2.0 * np.sqrt(1.0 + P0 * P0) + E0 * E0
        self.state = np.ascontiguousarray(np.column_stack([rho, P0, E0, p0, np.ones_like(rho)]))
        m = rho.size
        self.status = np.ones(m, dtype=np.int8)
        self.event_theta = np.full(m, np.nan)
        self.event_rho = np.full(m, np.nan)
        self.event_y = np.full((m, 5), np.nan)
        self._event_step = np.full(m, -1, dtype=np.int64)
        self._event_state = np.zeros((m, 5))
        self.dtheta = float(dtheta)
        self.steps = 0
        self.theta = 0.0
        self._partial = False
        self._advance = get_advance(backend)

    @property
    def alive(self):
        return self.status == 1

    @property
    def first_event(self):
        """Earliest refined crossing time so far, or ``None``."""
        if np.isnan(self.event_theta).all():
            return None
        return float(np.nanmin(self.event_theta))

    def _collect(self, base_steps, base_theta, h):
        new = np.flatnonzero(self._event_step >= 0)
        for m in new:
            i = int(self._event_step[m])
            t_start = (base_steps + i) * self.dtheta if h == self.dtheta else base_theta
            if self.status[m] == 2:
                raise IntegratorFailure(self.labels[m], t_start, self._event_state[m].copy())
            tau, y_star = refine_crossing(self._event_state[m], self.e0[m], h)
            self.event_theta[m] = t_start + tau
            self.event_rho[m] = y_star[0]
            self.event_y[m] = y_star
        self._event_step[new] = -1
        return new

    def step(self, nsteps=1):
        """Advance ``nsteps`` full steps; returns indices of new crossings."""
        if self._partial:
            raise RuntimeError("sweep already finished with a partial step")
        base = self.steps
        self._advance(self.state, self.e0, self.status, self.dtheta, int(nsteps),
                      self._event_step, self._event_state)
        self.steps += int(nsteps)
        self.theta = self.steps * self.dtheta
        return self._collect(base, None, self.dtheta)

    def finish_at(self, theta):
        """Advance to exactly ``theta`` with full steps plus one short step."""
        n_full = int(np.floor((theta - self.theta) / self.dtheta * (1 + 1e-12)))
        new = list(self.step(n_full)) if n_full > 0 else []
        rest = theta - self.theta
        if rest > 1e-15:
            base_theta = self.theta
            self._advance(self.state, self.e0, self.status, rest, 1,
                          self._event_step, self._event_state)
            new += list(self._collect(None, base_theta, rest))
            self.theta = float(theta)
            self._partial = True
        return np.asarray(new, dtype=int)

    def run(self, theta_cap, cadence=10, stop=None):
        """Yield after every ``cadence`` steps (and once at the start).

        Stops when ``theta_cap`` is reached, when no characteristic is left,
        or when ``stop(self)`` returns true.
        """
        n_cap = int(np.floor(theta_cap / self.dtheta * (1 + 1e-12)))
        yield self
        while self.steps < n_cap and self.alive.any():
            self.step(min(cadence, n_cap - self.steps))
            yield self
            if stop is not None and stop(self):
                return

    # derived per-characteristic quantities at the current time
    def derivatives(self):
        """Return ``(p, e)`` = ``(p_bar/q, e_bar/q)`` for every row."""
        q = self.state[:, 4]
        return self.state[:, 3] / q, ((q + self.e0) - 1.0) / q

    def density(self):
        """Electron density N = 1 - e = (1 - e0)/q for every row."""
        return (1.0 - self.e0) / self.state[:, 4]
