"""The elementary move group acting on points of the two cubic surfaces.

Generators come in two flavours per surface type:

* "gamma_prime": Vieta involutions, and (torus case only) coordinate
  transpositions and even sign changes.  On the torus the Vieta move on the
  z-axis is z -> x*y - z; on the four-holed sphere it is z -> c - x*y - z
  (and cyclically for the other axes, reading the matching coefficient).
* "gamma_poly": the polynomial Dehn-twist maps and their inverses.  On the
  torus these are

      twist a : (x, y, z) -> (x, z, x*z - y)
      twist b : (x, y, z) -> (x*y - z, y, x)
      twist ab: (x, y, z) -> (y, y*z - x, z)

  and on the four-holed sphere the three composites of two Vieta
  involutions (index 1 fixes x, index 2 fixes y, index 3 fixes z).

Words of moves are descent certificates.  They serialize to a compact
token string, one token per generator, e.g. "Vz Pyz Ta+ Ta+ Sxy":

    Vx Vy Vz           Vieta involution on an axis
    Pxy Pyz Pxz        transposition of two coordinates
    Pxyz Pxzy          3-cycles (x->y->z->x resp. x->z->y->x)
    Sxy Syz Sxz        even sign change of a coordinate pair
    Ta+ Tb- Tab+ ...   torus Dehn twists (sign = direction)
    T1+ T2- T3+ ...    four-holed sphere Dehn twists

Twist powers compose additively; serialization expands a power-n twist to
|n| unit tokens, and parsing returns unit-power moves.
"""

from __future__ import annotations

from typing import NamedTuple

from .surfaces import (
    Cubic04,
    DomainMismatch,
    EXACT,
    Markoff11,
    MoveMismatch,
    Point3,
    Surface,
    point_domain,
)

AXES = "xyz"

# sigma acts by new[i] = p[sigma[i]]
_PERM_TOKENS = {
    (1, 0, 2): "Pxy",
    (0, 2, 1): "Pyz",
    (2, 1, 0): "Pxz",
    (2, 0, 1): "Pxyz",
    (1, 2, 0): "Pxzy",
}
_TOKEN_PERMS = {tok: sigma for sigma, tok in _PERM_TOKENS.items()}
_PERM_INVERSE = {
    (1, 0, 2): (1, 0, 2),
    (0, 2, 1): (0, 2, 1),
    (2, 1, 0): (2, 1, 0),
    (2, 0, 1): (1, 2, 0),
    (1, 2, 0): (2, 0, 1),
}

_SIGN_TOKENS = {(0, 1): "Sxy", (1, 2): "Syz", (0, 2): "Sxz"}
_TOKEN_SIGNS = {tok: pair for pair, tok in _SIGN_TOKENS.items()}

TWIST_CURVES_11 = ("a", "b", "ab")
TWIST_INDICES_04 = (1, 2, 3)


class Move(NamedTuple):
    """One generator: kind is 'V', 'P', 'S', 'T11' or 'T04'."""

    kind: str
    arg: object
    power: int = 1


class MoveWord(NamedTuple):
    """An ordered word of moves tagged with its surface type ('11'/'04')."""

    surface_kind: str
    moves: tuple

    def __str__(self) -> str:
        return word_to_text(self)

    def inverse(self) -> "MoveWord":
        inv = tuple(inverse_move(m) for m in reversed(self.moves))
        return MoveWord(self.surface_kind, inv)


def vieta(axis: int) -> Move:
    if axis not in (0, 1, 2):
        raise ValueError(f"axis must be 0, 1 or 2, got {axis!r}")
    return Move("V", axis)


def permute(sigma) -> Move:
    sigma = tuple(sigma)
    if sorted(sigma) != [0, 1, 2]:
        raise ValueError(f"not a permutation of (0, 1, 2): {sigma!r}")
    if sigma == (0, 1, 2):
        raise ValueError("identity permutation is not a move")
    return Move("P", sigma)


def transposition(i: int, j: int) -> Move:
    sigma = [0, 1, 2]
    sigma[i], sigma[j] = sigma[j], sigma[i]
    return permute(sigma)


def even_sign(i: int, j: int) -> Move:
    pair = (min(i, j), max(i, j))
    if pair not in _SIGN_TOKENS:
        raise ValueError(f"invalid sign-change pair {(i, j)!r}")
    return Move("S", pair)


def twist11(curve: str, power: int = 1) -> Move:
    if curve not in TWIST_CURVES_11:
        raise ValueError(f"curve must be one of {TWIST_CURVES_11}, got {curve!r}")
    if power == 0:
        raise ValueError("twist power must be nonzero")
    return Move("T11", curve, power)


def twist04(index: int, power: int = 1) -> Move:
    if index not in TWIST_INDICES_04:
        raise ValueError(f"index must be 1, 2 or 3, got {index!r}")
    if power == 0:
        raise ValueError("twist power must be nonzero")
    return Move("T04", index, power)


def inverse_move(m: Move) -> Move:
    if m.kind in ("V", "S"):
        return m
    if m.kind == "P":
        return Move("P", _PERM_INVERSE[m.arg])
    return Move(m.kind, m.arg, -m.power)


def dehn_twist_11(which: str, direction: int, p: Point3) -> Point3:
    """One torus Dehn twist (direction +1) or its inverse (-1)."""
    x, y, z = p
    if which == "a":
        return Point3(x, z, x * z - y) if direction > 0 else Point3(x, x * y - z, y)
    if which == "b":
        return Point3(x * y - z, y, x) if direction > 0 else Point3(z, y, y * z - x)
    if which == "ab":
        return Point3(y, y * z - x, z) if direction > 0 else Point3(x * z - y, x, z)
    raise ValueError(f"unknown torus twist curve {which!r}")


def dehn_twist_04(surface: Cubic04, index: int, direction: int, p: Point3) -> Point3:
    """One four-holed sphere Dehn twist; each is two Vieta involutions."""
    a, b, c = surface.a, surface.b, surface.c
    x, y, z = p
    if index == 1:
        if direction > 0:
            y1 = b - x * z - y
            return Point3(x, y1, c - x * y1 - z)
        z1 = c - x * y - z
        return Point3(x, b - x * z1 - y, z1)
    if index == 2:
        if direction > 0:
            z1 = c - x * y - z
            return Point3(a - y * z1 - x, y, z1)
        x1 = a - y * z - x
        return Point3(x1, y, c - x1 * y - z)
    if index == 3:
        if direction > 0:
            x1 = a - y * z - x
            return Point3(x1, b - x1 * z - y, z)
        y1 = b - x * z - y
        return Point3(a - y1 * z - x, y1, z)
    raise ValueError(f"unknown sphere twist index {index!r}")


def apply_move(surface: Surface, m: Move, p: Point3) -> Point3:
    """Apply one move; raises MoveMismatch if it is undefined on the surface."""
    kind = m.kind
    if kind == "V":
        x, y, z = p
        axis = m.arg
        if isinstance(surface, Markoff11):
            if axis == 0:
                return Point3(y * z - x, y, z)
            if axis == 1:
                return Point3(x, x * z - y, z)
            return Point3(x, y, x * y - z)
        if axis == 0:
            return Point3(surface.a - y * z - x, y, z)
        if axis == 1:
            return Point3(x, surface.b - x * z - y, z)
        return Point3(x, y, surface.c - x * y - z)
    if kind == "P":
        if not isinstance(surface, Markoff11):
            raise MoveMismatch("permutations act only on the torus surface")
        s = m.arg
        return Point3(p[s[0]], p[s[1]], p[s[2]])
    if kind == "S":
        if not isinstance(surface, Markoff11):
            raise MoveMismatch("sign changes act only on the torus surface")
        i, j = m.arg
        q = list(p)
        q[i] = -q[i]
        q[j] = -q[j]
        return Point3(*q)
    if kind == "T11":
        if not isinstance(surface, Markoff11):
            raise MoveMismatch("torus twists act only on the torus surface")
        direction = 1 if m.power > 0 else -1
        for _ in range(abs(m.power)):
            p = dehn_twist_11(m.arg, direction, p)
        return p
    if kind == "T04":
        if not isinstance(surface, Cubic04):
            raise MoveMismatch("sphere twists act only on the four-holed sphere")
        direction = 1 if m.power > 0 else -1
        for _ in range(abs(m.power)):
            p = dehn_twist_04(surface, m.arg, direction, p)
        return p
    raise ValueError(f"unknown move kind {kind!r}")


def apply_word(surface: Surface, w: MoveWord, p: Point3) -> Point3:
    """Left-to-right application of a move word."""
    if w.surface_kind != surface.kind:
        raise MoveMismatch(
            f"word tagged for surface type {w.surface_kind}, got {surface.kind}"
        )
    for m in w.moves:
        p = apply_move(surface, m, p)
    return p


def _move_tokens(m: Move):
    if m.kind == "V":
        yield "V" + AXES[m.arg]
    elif m.kind == "P":
        yield _PERM_TOKENS[m.arg]
    elif m.kind == "S":
        yield _SIGN_TOKENS[m.arg]
    elif m.kind == "T11":
        tok = "T" + m.arg + ("+" if m.power > 0 else "-")
        for _ in range(abs(m.power)):
            yield tok
    elif m.kind == "T04":
        tok = "T" + str(m.arg) + ("+" if m.power > 0 else "-")
        for _ in range(abs(m.power)):
            yield tok
    else:
        raise ValueError(f"unknown move kind {m.kind!r}")


def word_to_text(w: MoveWord) -> str:
    return " ".join(tok for m in w.moves for tok in _move_tokens(m))


def _parse_token(tok: str, surface_kind: str) -> Move:
    if tok.startswith("V") and len(tok) == 2 and tok[1] in AXES:
        return vieta(AXES.index(tok[1]))
    if tok in _TOKEN_PERMS:
        return Move("P", _TOKEN_PERMS[tok])
    if tok in _TOKEN_SIGNS:
        return Move("S", _TOKEN_SIGNS[tok])
    if tok.startswith("T") and tok[-1] in "+-":
        power = 1 if tok[-1] == "+" else -1
        name = tok[1:-1]
        if surface_kind == "11" and name in TWIST_CURVES_11:
            return Move("T11", name, power)
        if surface_kind == "04" and name in ("1", "2", "3"):
            return Move("T04", int(name), power)
    raise ValueError(f"unparseable move token {tok!r} for surface type {surface_kind}")


def parse_word(text: str, surface_kind: str) -> MoveWord:
    """Inverse of str(word); twist powers come back as unit moves."""
    moves = tuple(_parse_token(tok, surface_kind) for tok in text.split())
    return MoveWord(surface_kind, moves)


def concat_words(w1: MoveWord, w2: MoveWord) -> MoveWord:
    if w1.surface_kind != w2.surface_kind:
        raise MoveMismatch("cannot concatenate words for different surface types")
    return MoveWord(w1.surface_kind, w1.moves + w2.moves)


def identity_word(surface_kind: str) -> MoveWord:
    return MoveWord(surface_kind, ())


# The 24-element group of coordinate permutations and even sign changes,
# enumerated once as (word, action) pairs.  Sign patterns with an even
# number of minus signs are exactly: none, or one even_sign move.
_SIGN_ELEMENTS = (((), (1, 1, 1)),) + tuple(
    ((Move("S", pair),), tuple(-1 if i in pair else 1 for i in range(3)))
    for pair in ((0, 1), (1, 2), (0, 2))
)
_PERM_ELEMENTS = (((), (0, 1, 2)),) + tuple(
    ((Move("P", sigma),), sigma) for sigma in _PERM_TOKENS
)


def normalize_11(p: Point3) -> tuple:
    """Canonical representative of p under permutations and even sign changes.

    Chosen as the minimum over all 24 group images of the key
    (is-unsorted-by-modulus, number of negatives, negative positions,
    coordinates), which realizes: |x| <= |y| <= |z|, at most one negative
    coordinate, a negative coordinate (if any) placed last, remaining ties
    broken by lexicographic order.  Returns (canonical point, word).
    """
    if point_domain(p) != EXACT:
        raise DomainMismatch("normalize_11 requires an exact point")
    best = None
    best_word = None
    best_key = None
    for perm_word, sigma in _PERM_ELEMENTS:
        q0 = (p[sigma[0]], p[sigma[1]], p[sigma[2]])
        for sign_word, signs in _SIGN_ELEMENTS:
            q = (q0[0] * signs[0], q0[1] * signs[1], q0[2] * signs[2])
            word = perm_word + sign_word
            key = (
                0 if abs(q[0]) <= abs(q[1]) <= abs(q[2]) else 1,
                sum(1 for v in q if v < 0),
                tuple(1 if v < 0 else 0 for v in q),
                q,
                len(word),
            )
            if best_key is None or key < best_key:
                best_key = key
                best = q
                best_word = word
    return Point3(*best), MoveWord("11", best_word)


def gamma_prime_generators(surface_kind: str) -> tuple:
    """Vieta involutions, plus transpositions and sign changes on the torus."""
    vietas = tuple(vieta(i) for i in range(3))
    if surface_kind == "04":
        return vietas
    perms = (transposition(0, 1), transposition(1, 2), transposition(0, 2))
    signs = (even_sign(0, 1), even_sign(1, 2), even_sign(0, 2))
    return vietas + perms + signs


def gamma_poly_generators(surface_kind: str) -> tuple:
    """The Dehn-twist maps and their inverses."""
    if surface_kind == "11":
        return tuple(
            twist11(curve, power)
            for curve in TWIST_CURVES_11
            for power in (1, -1)
        )
    return tuple(
        twist04(index, power) for index in TWIST_INDICES_04 for power in (1, -1)
    )


GENERATOR_SETS = ("gamma_prime", "gamma_poly")


def generators(surface_kind: str, name: str) -> tuple:
    if name == "gamma_prime":
        return gamma_prime_generators(surface_kind)
    if name == "gamma_poly":
        return gamma_poly_generators(surface_kind)
    raise ValueError(f"unknown generator set {name!r}")
