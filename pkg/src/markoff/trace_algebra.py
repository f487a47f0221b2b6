"""Exact 2x2 matrix algebra: the representation-level ground truth.

Everything downstream of this module is a polynomial shadow of identities
that hold for determinant-one 2x2 matrices.  Here we keep the matrices
themselves: trace identities, Fricke coordinates (tr A, tr B, tr AB),
the two defining relations of the rank-3 free group trace ring, boundary
data of four-holed sphere representations, and matrix-level lifts of the
Dehn twists that must descend to the polynomial maps in `moves`.

Inverses are adjugates (swap diagonal, negate off-diagonal), so all of
this is exact over the integers.

Twist lift conventions, frozen after checking the commuting square
fricke o lift == twist o fricke on random exact inputs:

    torus, curve a : (A, B) -> (A, A B)        inverse (A, A^-1 B)
    torus, curve b : (A, B) -> (A B^-1, B)     inverse (A B, B)
    torus, curve ab: (A, B) -> (B^-1, B A B)   inverse (A B A, A^-1)

    sphere, index 1: conjugate (C1, C2) by D = C1 C2 (inverse: by D^-1)
    sphere, index 2: conjugate (C2, C3) by D = C2 C3 (inverse: by D^-1)
    sphere, index 3: the index-1 lift transported by the braid move
                     (C1, C2, C3, C4) -> (C1, C3, C3^-1 C2 C3, C4), which
                     brings the pair with product C1 C3 adjacent

Each lift preserves the defining product relation and all boundary
traces, and the direction signs below are the ones that make the
commuting square hold with `dehn_twist_11` / `dehn_twist_04` direction +1.
"""

from __future__ import annotations

from typing import NamedTuple

from .surfaces import (
    Point3,
    RelationViolation,
    Scalar,
    common_domain,
    make_cubic04,
)

DET_TOL = 1e-9


class Mat2(NamedTuple):
    """A 2x2 matrix (m11, m12, m21, m22), normally of determinant one."""

    m11: Scalar
    m12: Scalar
    m21: Scalar
    m22: Scalar


IDENTITY = Mat2(1, 0, 0, 1)

# The two standard unipotent generators of SL2(Z).
UNIPOTENT_UPPER = Mat2(1, 1, 0, 1)
UNIPOTENT_LOWER = Mat2(1, 0, 1, 1)


def mat_mul(m: Mat2, n: Mat2) -> Mat2:
    return Mat2(
        m.m11 * n.m11 + m.m12 * n.m21,
        m.m11 * n.m12 + m.m12 * n.m22,
        m.m21 * n.m11 + m.m22 * n.m21,
        m.m21 * n.m12 + m.m22 * n.m22,
    )


def mat_inv(m: Mat2) -> Mat2:
    """Adjugate inverse; exact, valid only for determinant one."""
    return Mat2(m.m22, -m.m12, -m.m21, m.m11)


def mat_trace(m: Mat2) -> Scalar:
    return m.m11 + m.m22


def mat_det(m: Mat2) -> Scalar:
    return m.m11 * m.m22 - m.m12 * m.m21


def check_sl2(m: Mat2) -> Mat2:
    """Validate det(m) = 1 (exactly, or within DET_TOL in the approx domain)."""
    d = mat_det(m)
    if common_domain(m) == "exact":
        ok = d == 1
    else:
        ok = abs(d - 1) <= DET_TOL
    if not ok:
        raise RelationViolation(f"matrix has determinant {d!r}, expected 1")
    return m


class Pair(NamedTuple):
    """A torus representation: monodromies (A, B) of the two core loops."""

    A: Mat2
    B: Mat2


class Quad(NamedTuple):
    """A four-holed sphere representation: boundary monodromies with
    C1*C2*C3*C4 = identity."""

    C1: Mat2
    C2: Mat2
    C3: Mat2
    C4: Mat2


def make_pair(A: Mat2, B: Mat2) -> Pair:
    return Pair(check_sl2(A), check_sl2(B))


def make_quad(C1: Mat2, C2: Mat2, C3: Mat2, C4: Mat2 | None = None) -> Quad:
    """Build a quad; C4 defaults to (C1 C2 C3)^-1.  Validates the relation."""
    for m in (C1, C2, C3):
        check_sl2(m)
    if C4 is None:
        C4 = mat_inv(mat_mul(mat_mul(C1, C2), C3))
    else:
        check_sl2(C4)
    prod = mat_mul(mat_mul(C1, C2), mat_mul(C3, C4))
    if common_domain(prod) == "exact":
        ok = prod == IDENTITY
    else:
        ok = all(abs(u - v) <= DET_TOL for u, v in zip(prod, IDENTITY))
    if not ok:
        raise RelationViolation("C1*C2*C3*C4 is not the identity")
    return Quad(C1, C2, C3, C4)


def trace_product_identity(A: Mat2, B: Mat2) -> Scalar:
    """tr(A)tr(B) - tr(AB) - tr(AB^-1); identically zero on SL2."""
    return (
        mat_trace(A) * mat_trace(B)
        - mat_trace(mat_mul(A, B))
        - mat_trace(mat_mul(A, mat_inv(B)))
    )


def fricke_coords(A: Mat2, B: Mat2) -> Point3:
    """(tr A, tr B, tr AB), the coordinates of the torus trace surface."""
    return Point3(mat_trace(A), mat_trace(B), mat_trace(mat_mul(A, B)))


def commutator_trace(A: Mat2, B: Mat2) -> Scalar:
    """tr(A B A^-1 B^-1): equals boundary_trace_11(fricke_coords(A, B))."""
    return mat_trace(
        mat_mul(mat_mul(A, B), mat_mul(mat_inv(A), mat_inv(B)))
    )


def f3_relations(A1: Mat2, A2: Mat2, A3: Mat2) -> tuple:
    """Residuals of the two defining relations of the rank-3 trace ring.

    In the nine trace coordinates t_i = tr A_i, t_ij = tr A_i A_j,
    t_123 = tr A_1 A_2 A_3, t_132 = tr A_1 A_3 A_2:

      r1 = t123 + t132 - (t12 t3 + t13 t2 + t23 t1 - t1 t2 t3)
      r2 = t123 * t132 - { (t1^2 + t2^2 + t3^2) + (t12^2 + t23^2 + t13^2)
             - (t1 t2 t12 + t2 t3 t23 + t1 t3 t13) + t12 t23 t13 - 4 }

    Both vanish for every SL2 triple.
    """
    t1, t2, t3 = mat_trace(A1), mat_trace(A2), mat_trace(A3)
    a12 = mat_mul(A1, A2)
    t12 = mat_trace(a12)
    t23 = mat_trace(mat_mul(A2, A3))
    t13 = mat_trace(mat_mul(A1, A3))
    t123 = mat_trace(mat_mul(a12, A3))
    t132 = mat_trace(mat_mul(mat_mul(A1, A3), A2))
    r1 = t123 + t132 - (t12 * t3 + t13 * t2 + t23 * t1 - t1 * t2 * t3)
    r2 = t123 * t132 - (
        (t1 * t1 + t2 * t2 + t3 * t3)
        + (t12 * t12 + t23 * t23 + t13 * t13)
        - (t1 * t2 * t12 + t2 * t3 * t23 + t1 * t3 * t13)
        + t12 * t23 * t13
        - 4
    )
    return r1, r2


def quad_to_04_point(q: Quad) -> tuple:
    """Surface with parameters k_i = tr C_i and the point
    (tr C1C2, tr C2C3, tr C1C3); the point always satisfies residual 0."""
    surface = make_cubic04(*(mat_trace(m) for m in q))
    p = Point3(
        mat_trace(mat_mul(q.C1, q.C2)),
        mat_trace(mat_mul(q.C2, q.C3)),
        mat_trace(mat_mul(q.C1, q.C3)),
    )
    return surface, p


def lift_twist_11(which: str, pair: Pair, direction: int = 1) -> Pair:
    """Matrix-level torus Dehn twist; descends to dehn_twist_11."""
    A, B = pair
    if which == "a":
        if direction > 0:
            return Pair(A, mat_mul(A, B))
        return Pair(A, mat_mul(mat_inv(A), B))
    if which == "b":
        if direction > 0:
            return Pair(mat_mul(A, mat_inv(B)), B)
        return Pair(mat_mul(A, B), B)
    if which == "ab":
        if direction > 0:
            return Pair(mat_inv(B), mat_mul(mat_mul(B, A), B))
        return Pair(mat_mul(mat_mul(A, B), A), mat_inv(A))
    raise ValueError(f"unknown torus twist curve {which!r}")


def _conjugate(D: Mat2, m: Mat2) -> Mat2:
    return mat_mul(mat_mul(D, m), mat_inv(D))


def _lift_04_adjacent(first: int, q: Quad, direction: int) -> Quad:
    """Conjugate the adjacent pair (C_first, C_first+1) by its product."""
    ms = list(q)
    D = mat_mul(ms[first], ms[first + 1])
    if direction < 0:
        D = mat_inv(D)
    ms[first] = _conjugate(D, ms[first])
    ms[first + 1] = _conjugate(D, ms[first + 1])
    return Quad(*ms)


def _braid_23(q: Quad) -> Quad:
    """(C1, C2, C3, C4) -> (C1, C2 C3 C2^-1, C2, C4); preserves the relation."""
    return Quad(q.C1, _conjugate(q.C2, q.C3), q.C2, q.C4)


def _braid_23_inv(q: Quad) -> Quad:
    return Quad(q.C1, q.C3, _conjugate(mat_inv(q.C3), q.C2), q.C4)


def lift_twist_04(index: int, q: Quad, direction: int = 1) -> Quad:
    """Matrix-level four-holed sphere Dehn twist; descends to dehn_twist_04.

    Indices 1 and 2 conjugate the adjacent boundary pair (C1, C2)
    resp. (C2, C3) by its product.  Index 3 is the index-1 lift
    transported by the braid move, so that it twists along the curve with
    trace tr C1C3.  Direction signs are the frozen empirical conventions.
    """
    if index == 1:
        return _lift_04_adjacent(0, q, direction)
    if index == 2:
        return _lift_04_adjacent(1, q, direction)
    if index == 3:
        return _braid_23(_lift_04_adjacent(0, _braid_23_inv(q), direction))
    raise ValueError(f"unknown sphere twist index {index!r}")


def random_sl2(rng, max_len: int = 10) -> Mat2:
    """Random exact SL2(Z) matrix: a bounded word in the two standard
    unipotents and their inverses."""
    gens = (
        UNIPOTENT_UPPER,
        UNIPOTENT_LOWER,
        mat_inv(UNIPOTENT_UPPER),
        mat_inv(UNIPOTENT_LOWER),
    )
    m = IDENTITY
    for _ in range(rng.randint(0, max_len)):
        m = mat_mul(m, gens[rng.randrange(4)])
    return m


def random_quad(rng, max_len: int = 8) -> Quad:
    """Random exact quad with C4 forced by the product relation."""
    return make_quad(
        random_sl2(rng, max_len), random_sl2(rng, max_len), random_sl2(rng, max_len)
    )
