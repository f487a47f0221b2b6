"""Reduction algorithms on the cubic surfaces.

Three reducers, all returning a replayable move-word certificate:

* reduce_min_complex_11: complex descent on the torus surface driving the
  smallest coordinate modulus below an explicit bound.  Whenever the
  minimum exceeds

      B(k) = max(8, (8*(2+|k|))**(1/4), (4*(2+|k|))**(1/3)),

  the Vieta move on the largest-modulus axis strictly shrinks it (the
  threshold 8 and the two root terms fall out of the case analysis of the
  shrink-failure configuration |x| <= |y| <= |z| <= |x*y - z|), so sorting
  and applying that move terminates with min <= B(k).

* reduce_min_complex_04: the four-holed sphere analogue.  Terminates when
  one of five conditions holds with C = 48, a documented over-approximation
  of the constants arising case by case (threshold 8, factors up to
  4*max{...} and a /6):

      (1) min(|x|, |y|, |z|) <= C
      (2) |y*z| <= C * max(1, |a|)
      (3) |x*z| <= C * max(1, |b|)
      (4) |x*y| <= C * max(1, |c|)
      (5) |x*y*z| <= C * max(1, |d|)

* reduce_compact: greedy descent of the sup-norm over the three Vieta
  moves, stopping at a local minimum.  In integer-star mode any visited
  coordinate equal to +2 or -2 stops the reduction with an exceptional
  hit; otherwise strict integer decrease guarantees termination.  Exact
  torus results are put in canonical form (sorted moduli, at most one
  trailing negative) before returning.

Ties between axes are broken in the fixed order z, y, x.  A capped run is
reported as a first-class cap_hit outcome, never an exception.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional

from .surfaces import (
    APPROX,
    Cubic04,
    DomainMismatch,
    EXACT,
    Markoff11,
    NonFiniteScalar,
    Point3,
    Surface,
    linf_height,
    point_domain,
)
from .moves import (
    MoveWord,
    apply_move,
    normalize_11,
    permute,
    vieta,
)

REDUCED = "reduced"
CAP_HIT = "cap_hit"
EXCEPTIONAL_HIT = "exceptional_hit"

REAL_AWAY2 = "real_away2"
COMPLEX_AWAY_INTERVAL = "complex_away_interval"
INTEGER_STAR = "integer_star"

DEFAULT_STEP_CAP = 10**4

# Relative shrink required to count as progress in the approx domain.
APPROX_DECREASE = 1e-6

SPHERE_DESCENT_C = 48


@dataclass(frozen=True)
class AConfig:
    """Which trace set A the compact reduction targets.

    real_away2:             A in R with dist(A, {+2, -2}) >= delta
    complex_away_interval:  A in C with dist(A, [-2, 2]) >= delta
    integer_star:           A = Z minus {+2, -2} (delta implicitly 1)
    """

    mode: str
    delta: float = 1.0

    def __post_init__(self):
        if self.mode not in (REAL_AWAY2, COMPLEX_AWAY_INTERVAL, INTEGER_STAR):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.delta <= 0:
            raise ValueError("delta must be positive")


@dataclass(frozen=True)
class DescentResult:
    reduced: Point3
    word: MoveWord
    steps: int
    status: str
    exceptional_axis: Optional[int] = None
    exceptional_value: Optional[int] = None
    terminal_condition: Optional[int] = None
    bound: Optional[float] = None


def min_bound_11(k) -> float:
    """The explicit descent target B(k) for the torus surface."""
    t = 2 + abs(k)
    return max(8.0, (8 * t) ** 0.25, (4 * t) ** (1 / 3))


def _require_finite_approx(p: Point3) -> None:
    if point_domain(p) != APPROX:
        raise DomainMismatch("complex descent requires an approx-domain point")
    for v in p:
        if not cmath.isfinite(complex(v)):
            raise NonFiniteScalar(f"non-finite coordinate {v!r}")


_AXIS_ORDER = (2, 1, 0)  # tie-break order z, y, x


def _max_axis(p: Point3) -> int:
    best = 2
    for axis in (1, 0):
        if abs(p[axis]) > abs(p[best]):
            best = axis
    return best


def reduce_min_complex_11(
    surface: Markoff11, p: Point3, step_cap: int = DEFAULT_STEP_CAP
) -> DescentResult:
    """Drive min(|x|,|y|,|z|) below B(k) on a torus surface point."""
    _require_finite_approx(p)
    bound = min_bound_11(surface.k)
    moves = []
    steps = 0
    while True:
        if min(abs(v) for v in p) <= bound:
            status = REDUCED
            break
        if steps >= step_cap:
            status = CAP_HIT
            break
        order = sorted(range(3), key=lambda i: abs(p[i]))
        if order != [0, 1, 2]:
            m = permute(tuple(order))
            moves.append(m)
            p = apply_move(surface, m, p)
        x, y, z = p
        znew = x * y - z
        if not cmath.isfinite(complex(znew)) or abs(znew) >= abs(z):
            # Shrink failure with min > B(k) cannot occur for finite data;
            # treat a numerical stall as a capped run.
            status = CAP_HIT
            break
        m = vieta(2)
        moves.append(m)
        p = Point3(x, y, znew)
        steps += 1
    return DescentResult(p, MoveWord("11", tuple(moves)), steps, status, bound=bound)


def sphere_terminal_condition(surface: Cubic04, p: Point3) -> Optional[int]:
    """First of the five stopping conditions satisfied at p, if any."""
    x, y, z = p
    c = SPHERE_DESCENT_C
    if min(abs(x), abs(y), abs(z)) <= c:
        return 1
    if abs(y * z) <= c * max(1, abs(surface.a)):
        return 2
    if abs(x * z) <= c * max(1, abs(surface.b)):
        return 3
    if abs(x * y) <= c * max(1, abs(surface.c)):
        return 4
    if abs(x * y * z) <= c * max(1, abs(surface.d)):
        return 5
    return None


def reduce_min_complex_04(
    surface: Cubic04, p: Point3, step_cap: int = DEFAULT_STEP_CAP
) -> DescentResult:
    """Vieta descent on a four-holed sphere point until a stopping
    condition (1)-(5) fires; the result records which one."""
    _require_finite_approx(p)
    moves = []
    steps = 0
    while True:
        cond = sphere_terminal_condition(surface, p)
        if cond is not None:
            return DescentResult(
                p, MoveWord("04", tuple(moves)), steps, REDUCED, terminal_condition=cond
            )
        if steps >= step_cap:
            return DescentResult(p, MoveWord("04", tuple(moves)), steps, CAP_HIT)
        axis = _max_axis(p)
        m = vieta(axis)
        q = apply_move(surface, m, p)
        if not cmath.isfinite(complex(q[axis])) or abs(q[axis]) >= abs(p[axis]):
            return DescentResult(p, MoveWord("04", tuple(moves)), steps, CAP_HIT)
        moves.append(m)
        p = q
        steps += 1


def exceptional_axis(p: Point3) -> Optional[int]:
    for axis in range(3):
        if p[axis] == 2 or p[axis] == -2:
            return axis
    return None


def reduce_compact(
    surface: Surface,
    cfg: AConfig,
    p: Point3,
    step_cap: int = DEFAULT_STEP_CAP,
) -> DescentResult:
    """Greedy sup-norm reduction to a local minimum of the Vieta moves."""
    domain = point_domain(p)
    if cfg.mode == INTEGER_STAR:
        if domain != EXACT or surface.domain != EXACT:
            raise DomainMismatch("integer_star mode requires the exact domain")
    else:
        if domain != APPROX:
            raise DomainMismatch(f"{cfg.mode} mode requires the approx domain")
    star = cfg.mode == INTEGER_STAR
    moves = []
    steps = 0

    def result(point, status, axis=None):
        word = MoveWord(surface.kind, tuple(moves))
        value = None if axis is None else point[axis]
        return DescentResult(point, word, steps, status, axis, value)

    if star:
        axis = exceptional_axis(p)
        if axis is not None:
            return result(p, EXCEPTIONAL_HIT, axis)
    while True:
        if steps >= step_cap:
            return result(p, CAP_HIT)
        cur = linf_height(p)
        best_axis = None
        best_height = None
        for axis in _AXIS_ORDER:
            q = apply_move(surface, vieta(axis), p)
            h = linf_height(q)
            if best_height is None or h < best_height:
                best_axis, best_height = axis, h
        if star:
            improved = best_height < cur
        else:
            improved = best_height < cur * (1 - APPROX_DECREASE)
        if not improved:
            break
        m = vieta(best_axis)
        moves.append(m)
        p = apply_move(surface, m, p)
        steps += 1
        if star:
            axis = exceptional_axis(p)
            if axis is not None:
                return result(p, EXCEPTIONAL_HIT, axis)
    if star and isinstance(surface, Markoff11):
        normal, word = normalize_11(p)
        moves.extend(word.moves)
        p = normal
    return result(p, REDUCED)


def ellipse_bound_04(surface: Cubic04, z0) -> float:
    """Finite M with max(|x|, |y|) <= M on the real slice z = z0, |z0| < 2.

    The slice is the conic x^2 + y^2 + z0*x*y = a*x + b*y + e with
    e = c*z0 + d - z0^2, an ellipse (possibly degenerate) since the
    quadratic part is positive definite for |z0| < 2.  M comes from the
    exact x- and y-extremes of the conic; an empty slice returns 0.
    """
    coeffs = []
    for v in (surface.a, surface.b, surface.c, surface.d):
        if isinstance(v, complex):
            if v.imag != 0:
                raise ValueError("ellipse bound requires real coefficients")
            v = v.real
        coeffs.append(v)
    a, b, c, d = coeffs
    if isinstance(z0, complex):
        if z0.imag != 0:
            raise ValueError("z0 must be real")
        z0 = z0.real
    if abs(z0) >= 2:
        raise ValueError(f"|z0| must be < 2, got {z0!r}")
    e = c * z0 + d - z0 * z0
    lead = 1 - z0 * z0 / 4

    def axis_bound(u, v):
        # extremes of the first coordinate: lead*t^2 + (v*z0/2 - u)*t - (v^2/4 + e) = 0
        lin = v * z0 / 2 - u
        disc = lin * lin + 4 * lead * (v * v / 4 + e)
        if disc < 0:
            return None
        return (abs(lin) + disc**0.5) / (2 * lead)

    bx = axis_bound(a, b)
    by = axis_bound(b, a)
    if bx is None and by is None:
        return 0.0
    return float(max(v for v in (bx, by) if v is not None))
