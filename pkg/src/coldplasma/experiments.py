"""Numerical experiments on Gaussian pulse data.

All diagnostics share one engine: a lockstep sweep over a uniform grid of
Lagrangian labels. Trackers observe the sweep at the output cadence and
reduce over characteristics (minima of the smoothness condition, density
extrema), so a full scenario needs a single coarse pass plus a local fine
pass around the blow-up label.
"""
from dataclasses import dataclass, field as dc_field
import math

import numpy as np
from scipy.integrate import trapezoid

from .certifier import condn_lhs
from .errors import DomainError, SimpleWaveError
from .sweep import Sweep

DEFAULT_D_RHO_COARSE = 1e-2
DEFAULT_D_RHO_FINE = 1e-3
DEFAULT_DTHETA = 1e-3
OUTPUT_CADENCE = 10
FINE_HALF_WINDOW = 10  # in coarse cells


@dataclass(frozen=True)
class InitialDataField:
    """Cauchy data ``P(rho, 0) = P0``, ``E(rho, 0) = E0`` with exact
    derivatives ``p0 = P0'``, ``e0 = E0'``. All four callables must accept
    numpy arrays."""

    P0: object
    E0: object
    p0: object
    e0: object
    params: dict | None = None

    def sample(self, rho):
        rho = np.asarray(rho, dtype=float)

        def ev(f):
            return np.asarray(f(rho), float) * np.ones_like(rho)

        P0, E0 = ev(self.P0), ev(self.E0)
        return Samples(rho=rho, P0=P0, E0=E0, p0=ev(self.p0), e0=ev(self.e0),
                       C=2.0 * np.sqrt(1.0 + P0 * P0) + E0 * E0)


@dataclass(frozen=True)
class Samples:
    rho: np.ndarray
    P0: np.ndarray
    E0: np.ndarray
    p0: np.ndarray
    e0: np.ndarray
    C: np.ndarray


def gaussian_pulse(alpha, beta, rho_star):
    """``E0 = alpha rho exp(-2 rho^2/rho*^2)``, ``P0 = beta rho exp(...)``."""
    if not rho_star > 0:
        raise DomainError("rho_star must be positive")
    w2 = float(rho_star) ** 2

    def envelope(r):
        return np.exp(-2.0 * np.square(r) / w2)

    def slope(r):
        return (1.0 - 4.0 * np.square(r) / w2) * envelope(r)

    return InitialDataField(
        P0=lambda r: beta * r * envelope(r),
        E0=lambda r: alpha * r * envelope(r),
        p0=lambda r: beta * slope(r),
        e0=lambda r: alpha * slope(r),
        params={"alpha": float(alpha), "beta": float(beta), "rho_star": float(rho_star)},
    )


def default_half_width(field, fallback=10.0):
    """Truncate at ``max(4.5 rho*, 10)`` for Gaussian data."""
    if field.params and "rho_star" in field.params:
        return max(4.5 * field.params["rho_star"], fallback)
    return fallback


def label_grid(half_width, step):
    """Uniform labels ``step * k`` for ``|k| <= half_width/step``; mirrored
    labels are exact negatives of each other."""
    m = int(round(half_width / step))
    return step * np.arange(-m, m + 1, dtype=float)


def detect_simple_wave(samples):
    """True when C is constant over the samples (relative spread < 1e-12)."""
    C = np.asarray(samples.C if hasattr(samples, "C") else samples, dtype=float)
    if C.size < 2:
        raise DomainError("need at least two samples")
    return float(C.max() - C.min()) < 1e-12 * max(1.0, float(C.max()))


def is_rest_state(samples):
    return all(not np.any(getattr(samples, a)) for a in ("P0", "E0", "p0", "e0"))


def _screen(samples):
    # the rest state has C == 2 everywhere but is a trivially smooth solution
    if detect_simple_wave(samples) and not is_rest_state(samples):
        raise SimpleWaveError(
            "C(rho) is constant over the data (simple wave); not supported")


# ---------------------------------------------------------------------------
# blow-up search


@dataclass
class BlowupReport:
    """First gradient catastrophe over all characteristics.

    ``rho_br`` and ``rho0_star`` are ``(plus, minus)`` pairs: the Eulerian
    blow-up points on either side of the origin and their labels. A side
    without a simultaneous blow-up holds ``nan``.
    """

    T_br: float | None
    rho_br: tuple = (math.nan, math.nan)
    rho0_star: tuple = (math.nan, math.nan)
    refined: bool = False
    grid_used: tuple = ()
    coarse_min: float | None = None

    @property
    def detected(self):
        return self.T_br is not None


def _parabola_min(x, t):
    """Vertex of the parabola through three equally spaced points."""
    h = x[1] - x[0]
    denom = t[0] - 2.0 * t[1] + t[2]
    if denom <= 0.0:
        return x[1], t[1], 0.0
    s = 0.5 * (t[0] - t[2]) / denom  # vertex offset in units of h
    s = min(max(s, -1.0), 1.0)
    t_min = t[1] + 0.5 * s * (t[2] - t[0]) + 0.5 * s * s * denom
    return x[1] + s * h, t_min, s


def _quad_interp(v, s):
    """Value at offset ``s`` (units of h) of the parabola through v[-1, 0, 1]."""
    return v[1] + 0.5 * s * (v[2] - v[0]) + 0.5 * s * s * (v[0] - 2.0 * v[1] + v[2])


def _neighbours_done(sw, mask=None):
    t = sw.event_theta if mask is None else np.where(mask, sw.event_theta, np.nan)
    if np.isnan(t).all():
        return False
    i = int(np.nanargmin(t))
    lo, hi = max(i - 1, 0), min(i + 1, t.size - 1)
    return not (np.isnan(sw.event_theta[lo]) or np.isnan(sw.event_theta[hi]))


def _local_refine(field, center, d_rho_fine, half_cells, dtheta, theta_cap, backend):
    """Fine scan around ``center``; returns (T, rho_star, label) or None."""
    labels = center + d_rho_fine * np.arange(-half_cells, half_cells + 1, dtype=float)
    for _ in range(3):
        sw = Sweep(labels, field, dtheta, backend=backend)
        for _ in sw.run(theta_cap, OUTPUT_CADENCE, stop=_neighbours_done):
            pass
        if sw.first_event is None:
            return None
        i = int(np.nanargmin(sw.event_theta))
        if 0 < i < labels.size - 1:
            break
        labels = labels[i] + d_rho_fine * np.arange(-half_cells, half_cells + 1, dtype=float)
    else:
        return float(sw.event_theta[i]), float(sw.event_rho[i]), float(labels[i])
    sl = slice(i - 1, i + 2)
    t3, r3 = sw.event_theta[sl], sw.event_rho[sl]
    if np.isnan(t3).any():
        return float(sw.event_theta[i]), float(sw.event_rho[i]), float(labels[i])
    label, t_min, s = _parabola_min(labels[sl], t3)
    return float(t_min), float(_quad_interp(r3, s)), float(label)


def find_blowup(field, domain_half_width=None, d_rho_coarse=DEFAULT_D_RHO_COARSE,
                d_rho_fine=DEFAULT_D_RHO_FINE, dtheta=DEFAULT_DTHETA, theta_cap=100.0,
                *, observers=(), backend=None):
    """Locate the first blow-up ``(T_br, rho_br)``.

    A coarse sweep brackets the earliest crossing label on each side of the
    origin; a fine sweep over +-10 coarse cells around each bracket and a
    parabolic fit through the three earliest fine crossings give the
    refined time, Eulerian position and label. ``observers`` are called as
    ``obs(sweep)`` at every coarse output step.
    """
    if domain_half_width is None:
        domain_half_width = default_half_width(field)
    labels = label_grid(domain_half_width, d_rho_coarse)
    _screen(field.sample(labels))
    grid_used = (d_rho_coarse, d_rho_fine, dtheta)

    sw = Sweep(labels, field, dtheta, backend=backend)
    for s in sw.run(theta_cap, OUTPUT_CADENCE, stop=_neighbours_done):
        for obs in observers:
            obs(s)
    if sw.first_event is None:
        return BlowupReport(T_br=None, grid_used=grid_used)

    t_global = sw.first_event
    half_cells = int(round(FINE_HALF_WINDOW * d_rho_coarse / d_rho_fine))
    found = []
    for side in (labels >= 0.0, labels < 0.0):
        t_side = np.where(side, sw.event_theta, np.nan)
        if np.isnan(t_side).all():
            continue
        i = int(np.nanargmin(t_side))
        # only sides that break together with the global minimum
        if t_side[i] > t_global + 1e-9 * max(1.0, t_global):
            continue
        res = _local_refine(field, labels[i], d_rho_fine, half_cells, dtheta,
                            theta_cap, backend)
        if res is not None:
            found.append(res)
    T_br = min(r[0] for r in found)
    tol = 1e-8 * max(1.0, T_br)
    plus = [r for r in found if r[0] <= T_br + tol and r[1] >= 0.0]
    minus = [r for r in found if r[0] <= T_br + tol and r[1] < 0.0]
    rho_br = (plus[0][1] if plus else math.nan, minus[0][1] if minus else math.nan)
    rho0 = (plus[0][2] if plus else math.nan, minus[0][2] if minus else math.nan)
    return BlowupReport(T_br=T_br, rho_br=rho_br, rho0_star=rho0, refined=True,
                        grid_used=grid_used, coarse_min=t_global)


# ---------------------------------------------------------------------------
# condition dynamics


@dataclass
class ConditionDynamics:
    """Time series of ``Phi_n = min over characteristics of the smoothness
    condition evaluated on the current state``.

    ``theta_n`` is the end of the first positive episode of ``Phi_n`` (its
    first positive-to-negative transition); ``theta_n_last`` is the last
    such transition before blow-up. Both are ``None`` if ``Phi_n`` never
    changes from positive to negative.
    """

    n: int
    theta: np.ndarray
    phi: np.ndarray
    argmin_rho0: np.ndarray
    sign_changes: list = dc_field(default_factory=list)
    theta_n: float | None = None
    theta_n_last: float | None = None

    @property
    def T_n_sm(self):
        return None if self.theta_n is None else self.theta_n + self.n * math.pi

    @property
    def T_n_sm_last(self):
        return None if self.theta_n_last is None else self.theta_n_last + self.n * math.pi


def sign_changes(theta, phi):
    """Linearly interpolated sign changes of a sampled series.

    Returns ``(theta_c, direction)`` pairs, direction -1 for a positive to
    non-positive transition and +1 for the reverse.
    """
    out = []
    pos = phi > 0.0
    for i in np.flatnonzero(pos[:-1] != pos[1:]):
        a, b = phi[i], phi[i + 1]
        t = theta[i] + (theta[i + 1] - theta[i]) * a / (a - b)
        out.append((float(t), -1 if pos[i] else 1))
    return out


def dynamics_from_series(n, theta, phi, argmin, t_cut=None):
    theta, phi, argmin = map(np.asarray, (theta, phi, argmin))
    if t_cut is not None:
        keep = theta < t_cut
        theta, phi, argmin = theta[keep], phi[keep], argmin[keep]
    changes = sign_changes(theta, phi)
    downs = [t for t, d in changes if d < 0]
    return ConditionDynamics(
        n=n, theta=theta, phi=phi, argmin_rho0=argmin, sign_changes=changes,
        theta_n=downs[0] if downs else None, theta_n_last=downs[-1] if downs else None)


class PhiTracker:
    """Accumulates ``Phi_n`` for several n while a sweep runs.

    Each characteristic keeps ``K_- = 8/C^3`` from its (conserved) C; the
    current ``(p, e)`` replace ``(p0, e0)``. Tracking stops at the first
    crossing seen by the sweep.
    """

    def __init__(self, n_list):
        self.n_list = [int(n) for n in n_list]
        self.theta = []
        self.phi = {n: [] for n in self.n_list}
        self.argmin = {n: [] for n in self.n_list}

    def __call__(self, sw):
        if sw.first_event is not None:
            return
        alive = sw.alive
        p, e = sw.derivatives()
        km = 8.0 / sw.C ** 3
        self.theta.append(sw.theta)
        for n in self.n_list:
            vals = np.where(alive, condn_lhs(p, e, km, n), np.inf)
            i = int(np.argmin(vals))
            self.phi[n].append(float(vals[i]))
            self.argmin[n].append(float(sw.labels[i]))

    def result(self, t_cut=None):
        return {n: dynamics_from_series(n, self.theta, self.phi[n], self.argmin[n], t_cut)
                for n in self.n_list}


def condition_dynamics(field, grid=None, dtheta=DEFAULT_DTHETA, n=1, theta_cap=100.0,
                       *, t_br=None, backend=None):
    """Track ``Phi_n(theta)`` over the labels ``grid`` until blow-up.

    ``t_br`` cuts the series; by default the first crossing on ``grid`` is
    used. Returns a :class:`ConditionDynamics`.
    """
    if grid is None:
        grid = label_grid(default_half_width(field), DEFAULT_D_RHO_COARSE)
    _screen(field.sample(grid))
    tracker = PhiTracker([n])
    sw = Sweep(grid, field, dtheta, backend=backend)
    for s in sw.run(theta_cap, OUTPUT_CADENCE, stop=lambda s: s.first_event is not None):
        tracker(s)
    cut = t_br if t_br is not None else sw.first_event
    return tracker.result(cut)[n]


# ---------------------------------------------------------------------------
# density


@dataclass
class DensitySeries:
    theta: np.ndarray
    N_origin: np.ndarray
    N_max: np.ndarray
    rho_at_max: np.ndarray
    nonpositive: list = dc_field(default_factory=list)

    @property
    def at_origin(self):
        return np.column_stack([self.theta, self.N_origin])

    @property
    def max_over_domain(self):
        return np.column_stack([self.theta, self.N_max, self.rho_at_max])


class DensityTracker:
    """Samples the density at the origin and its maximum over the domain."""

    def __init__(self):
        self.rows = []
        self.nonpositive = []

    def __call__(self, sw):
        if sw.first_event is not None:
            return
        alive = sw.alive
        rho = sw.state[alive, 0]
        N = sw.density()[alive]
        if N.min() <= 0.0:
            self.nonpositive.append(sw.theta)
        # positions are increasing in the label while q > 0
        n_origin = float(np.interp(0.0, rho, N)) if rho[0] <= 0.0 <= rho[-1] else math.nan
        i = int(np.argmax(N))
        self.rows.append((sw.theta, n_origin, float(N[i]), float(rho[i])))

    def result(self, t_cut=None):
        rows = np.array(self.rows, dtype=float).reshape(-1, 4)
        if t_cut is not None:
            rows = rows[rows[:, 0] < t_cut]
        return DensitySeries(*rows.T, nonpositive=list(self.nonpositive))


def density_diagnostics(field, grid=None, dtheta=DEFAULT_DTHETA, theta_cap=100.0,
                        *, backend=None):
    """Density ``N = 1 - e`` at the origin and its domain maximum over time,
    until the first crossing on ``grid`` or ``theta_cap``."""
    if grid is None:
        grid = label_grid(default_half_width(field), DEFAULT_D_RHO_COARSE)
    tracker = DensityTracker()
    sw = Sweep(grid, field, dtheta, backend=backend)
    for s in sw.run(theta_cap, OUTPUT_CADENCE, stop=lambda s: s.first_event is not None):
        tracker(s)
    return tracker.result(sw.first_event)


# ---------------------------------------------------------------------------
# Eulerian profiles

PROFILE_COLUMNS = ("rho", "P", "E", "p", "e", "N")


@dataclass
class Profile:
    """Snapshot of the solution at the current positions of the characteristics,
    sorted by position."""

    theta: float
    rho0: np.ndarray
    rho: np.ndarray
    P: np.ndarray
    E: np.ndarray
    p: np.ndarray
    e: np.ndarray
    N: np.ndarray
    q: np.ndarray

    def table(self):
        return np.column_stack([getattr(self, c) for c in PROFILE_COLUMNS])

    def interpolate(self, name, at):
        """Piecewise-linear value of column ``name`` at positions ``at``."""
        return np.interp(at, self.rho, getattr(self, name))


def eulerian_profiles(field, grid, dtheta=DEFAULT_DTHETA, theta_snapshot=0.0,
                      *, backend=None):
    """Integrate the labels ``grid`` to ``theta_snapshot`` and tabulate
    ``(rho, P, E, p, e, N)``. Characteristics that already broke are left out."""
    sw = Sweep(np.sort(np.asarray(grid, float)), field, dtheta, backend=backend)
    if theta_snapshot > 0:
        sw.finish_at(theta_snapshot)
    alive = sw.alive
    p, e = sw.derivatives()
    st = sw.state[alive]
    order = np.argsort(st[:, 0], kind="stable")
    return Profile(theta=float(theta_snapshot), rho0=sw.labels[alive][order],
                   rho=st[order, 0], P=st[order, 1], E=st[order, 2],
                   p=p[alive][order], e=e[alive][order], N=(1.0 - e[alive])[order],
                   q=st[order, 4])


def excess_charge(profile):
    """Total charge ``int (N - 1) d rho`` of a profile.

    The trapezoid rule runs over the labels, where ``d rho = q d rho0`` and
    the integrand ``(N - 1) q`` stays smooth up to blow-up. On the Eulerian
    positions the same rule loses accuracy wherever the mapping compresses
    (about 1e-4 at moderate times, 1e-2 near breaking). Assumes the profile
    holds a contiguous block of labels, which is the case before blow-up.
    On uniformly spaced labels the rule is spectrally accurate for decaying
    data; merged coarse and fine grids fall back to second order.
    """
    order = np.argsort(profile.rho0)
    f = (profile.N[order] - 1.0) * profile.q[order]
    return float(trapezoid(f, profile.rho0[order]))
