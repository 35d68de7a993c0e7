"""Smoothness certificates for relativistic cold-plasma data.

Along each characteristic the pair ``(q, p_bar)`` obeys

    dq/dtheta = K p_bar,    dp_bar/dtheta = -(q - (1 - e0)),

with ``K_- <= K(theta) <= 1``. Writing ``x = q - (1 - e0)``, the quantity
``k p_bar^2 + x^2`` is non-increasing for ``k = 1`` in the quadrants where
``x p_bar > 0`` and for ``k = K_-`` where ``x p_bar < 0``. Chaining these
ellipse arcs quadrant by quadrant bounds how far left (towards ``q = 0``)
the phase point can travel. The closed-form consequence is the test

    inf_rho [K_-^(n-1) (1 - e0)^2 - e0^2 / K_- - p0^2] > 0,

which keeps the solution smooth for a time of at least ``n pi``.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError, UsageError


def _check_k(k_minus):
    k = np.asarray(k_minus, dtype=float)
    if np.any(~np.isfinite(k)) or np.any(k <= 0.0) or np.any(k > 1.0):
        raise DomainError("k_minus must lie in (0, 1]")


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    return int(n)


def condn_lhs(p0, e0, k_minus, n):
    """Left-hand side ``K_-^(n-1) (1-e0)^2 - e0^2/K_- - p0^2`` (vectorized)."""
    _check_k(k_minus)
    n = _check_n(n)
    k = np.asarray(k_minus, dtype=float)
    e0 = np.asarray(e0, dtype=float)
    # (1-e0)^2 - e0^2 = 1 - 2 e0 is split off so that k = 1 reduces exactly
    # to the non-relativistic expression 1 - 2 e0 - p0^2
    rel = (k ** (n - 1) - 1.0) * (1.0 - e0) ** 2 + np.square(e0) * (1.0 - 1.0 / k)
    return ((1.0 - 2.0 * e0) + rel) - np.square(p0)


def nonrelativistic_criterion(p0, e0):
    """Smoothness criterion for non-relativistic data, ``p0^2 + 2 e0 - 1 < 0``."""
    return p0 * p0 + 2.0 * e0 - 1.0 < 0.0


def floor_turns(T):
    """``[T / pi]``: the integer attached to a horizon T as usually quoted."""
    return int(math.floor(T / math.pi))


def required_n(T):
    """Smallest n whose guaranteed horizon ``n pi`` covers T."""
    if not T > 0:
        raise DomainError("T must be positive")
    return max(1, int(math.ceil(T / math.pi)))


@dataclass(frozen=True)
class Certificate:
    n: int
    infimum: float
    holds: bool
    horizon: float
    argmin_rho: float

    @property
    def margin(self):
        """Signed distance of the infimum from the strict threshold 0."""
        return self.infimum


def _sample_columns(samples):
    if hasattr(samples, "rho"):
        cols = [np.atleast_1d(np.asarray(getattr(samples, a), float))
                for a in ("rho", "p0", "e0", "C")]
    else:
        arr = np.asarray(samples, dtype=float)
        if arr.size == 0:
            raise UsageError("certify needs at least one sample")
        arr = np.atleast_2d(arr)
        if arr.shape[1] != 4:
            raise UsageError("samples must be (rho, p0, e0, C) rows")
        cols = [arr[:, i] for i in range(4)]
    if cols[0].size == 0:
        raise UsageError("certify needs at least one sample")
    return cols


def certify(samples, n):
    """Evaluate the smoothness condition over a set of samples.

    ``samples`` is either an object with array attributes ``rho, p0, e0, C``
    or a sequence of ``(rho, p0, e0, C)`` rows. Each sample uses its own
    ``K_- = 8/C^3``. For re-certification at a later time pass the current
    derivatives ``(p, e)`` in place of ``(p0, e0)``; C is conserved.
    """
    n = _check_n(n)
    rho, p0, e0, C = _sample_columns(samples)
    if np.any(C < 2.0):
        raise DomainError("C must be >= 2")
    values = condn_lhs(p0, e0, 8.0 / C ** 3, n)
    i = int(np.argmin(values))
    inf = float(values[i])
    return Certificate(n=n, infimum=inf, holds=inf > 0.0, horizon=n * math.pi,
                       argmin_rho=float(rho[i]))


@dataclass(frozen=True)
class Arc:
    """One ellipse piece ``k p_bar^2 + q^2 - 2 (1 - e0) q = const``."""

    kind: str  # "L+" (k = 1) or "L-" (k = K_-)
    k: float
    const: float
    start: tuple
    end: tuple


@dataclass
class BoundCurve:
    """Piecewise-ellipse bound on the ``(q, p_bar)`` phase trajectory.

    The curve covers a clockwise angular sweep of ``n pi`` around the centre
    ``(1 - e0, 0)``. Since the phase point never turns faster than one radian
    per unit time, this sweep contains everything reachable within time
    ``n pi``. ``min_q`` is a lower bound for ``q`` over that time.
    """

    center: float
    n: int
    arcs: list = field(default_factory=list)
    min_q: float = 1.0
    survives: bool = True

    def gluing_points(self):
        return [a.end for a in self.arcs[:-1]]

    def extrema(self):
        """End points of arcs that finish on the line ``q = 1 - e0``."""
        return [a.end for a in self.arcs if a.end[0] == self.center]


_QUARTER = 0.5 * math.pi


def _axis_index(x, y):
    """Boundary index j (angle j*pi/2) for a point on an axis, else None."""
    if y == 0.0:
        return 0 if x > 0 else 2
    if x == 0.0:
        return 1 if y > 0 else -1
    return None


def glue_bound(p0, e0, k_minus, n):
    """Glue the bounding curve for ``n`` half-turns starting at ``(1, p0)``.

    Arc selection: in quadrants with ``x p_bar > 0`` the K = 1 ellipse (L+)
    bounds the orbit, where ``x p_bar < 0`` the K = K_- ellipse (L-) does.
    Each arc starts from the previous gluing point, which lies on ``p_bar = 0``
    or on ``q = 1 - e0``. Starts in the upper half-plane are handled by the
    same rule; the curve then spends its first part above the axis.
    """
    _check_k(k_minus)
    n = _check_n(n)
    km = float(k_minus)
    c = 1.0 - e0
    x, y = 1.0 - c, float(p0)
    curve = BoundCurve(center=c, n=n)
    if x == 0.0 and y == 0.0:
        return curve

    def point(xx, yy):
        return (c + xx, yy)

    # list of (j, truncated): arc spans angles (j q, (j+1) q) clockwise
    j_axis = _axis_index(x, y)
    if j_axis is not None:
        plan = [(j_axis - 1 - i, False) for i in range(2 * n)]
    else:
        j0 = math.floor(math.atan2(y, x) / _QUARTER)
        plan = [(j0 - i, False) for i in range(2 * n)] + [(j0 - 2 * n, True)]
    sign_n = -1.0 if n % 2 else 1.0
    r0 = math.hypot(x, y)
    cos_end, sin_end = sign_n * x / r0, sign_n * y / r0

    xs = [x]
    for j, truncated in plan:
        k = 1.0 if j % 2 == 0 else km
        h = k * y * y + x * x
        start = point(x, y)
        if truncated:
            r = math.sqrt(h / (k * sin_end ** 2 + cos_end ** 2))
            x, y = r * cos_end, r * sin_end
        elif j % 2 == 0:
            # lower boundary of the arc is the p_bar = 0 axis
            x, y = (1.0 if j % 4 == 0 else -1.0) * math.sqrt(h), 0.0
        else:
            x, y = 0.0, (1.0 if j % 4 == 1 else -1.0) * math.sqrt(h / k)
        curve.arcs.append(Arc("L+" if k == 1.0 else "L-", k, h - c * c, start, point(x, y)))
        xs.append(x)
    curve.min_q = c + min(0.0, min(xs))
    curve.survives = curve.min_q > 0.0
    return curve


def asymptotic_turns(E0_at_point, e0_at_point):
    """Small-amplitude estimate ``n ~ (4/3) (1 - 2 e0) / (E0^2 e0)``."""
    E0, e0 = float(E0_at_point), float(e0_at_point)
    if E0 == 0.0 or not 0.0 < e0:
        raise DomainError("estimate needs E0 != 0 and e0 > 0")
    return 4.0 / 3.0 * (1.0 - 2.0 * e0) / (E0 * E0 * e0)


def breakup_order(E0_at_point, N0_at_point):
    """Order of magnitude ``1 / (E0^2 (1 - N0))`` of the breaking time.

    Only the order is meaningful; this is not a prediction of the time.
    """
    E0, N0 = float(E0_at_point), float(N0_at_point)
    if E0 == 0.0 or N0 == 1.0:
        raise DomainError("order undefined for E0 = 0 or N0 = 1")
    return 1.0 / (E0 * E0 * (1.0 - N0))
