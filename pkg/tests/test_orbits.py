import random

import pytest

from markoff.surfaces import (
    DomainMismatch,
    Markoff11,
    MarkoffError,
    Point3,
    make_cubic04,
    residual,
)
from markoff.moves import apply_move, apply_word, generators
from markoff.orbits import (
    Caps,
    class_number,
    enumerate_points,
    equivalent,
    is_exceptional,
    lines_cover_point,
    orbit_bfs,
    parabolic_lines_11,
)

MARKOFF = Markoff11(-2)


# --- enumeration ------------------------------------------------------------


def _naive_enumerate(surface, B):
    out = []
    for x in range(-B, B + 1):
        for y in range(-B, B + 1):
            for z in range(-B, B + 1):
                if residual(surface, Point3(x, y, z)) == 0:
                    out.append(Point3(x, y, z))
    return out


def test_enumerate_markoff_box3():
    pts = enumerate_points(MARKOFF, 3)
    assert pts == [
        Point3(-3, -3, 3),
        Point3(-3, 3, -3),
        Point3(0, 0, 0),
        Point3(3, -3, -3),
        Point3(3, 3, 3),
    ]
    assert all(p == Point3(0, 0, 0) or p.x * p.y * p.z > 0 for p in pts)


def test_enumerate_empty_box():
    assert enumerate_points(Markoff11(10**6 + 1), 0) == []
    assert enumerate_points(Markoff11(-2), 0) == [Point3(0, 0, 0)]


def test_enumerate_cubic04_small():
    pts = enumerate_points(make_cubic04(0, 0, 0, 0), 2)
    for p in [(2, 0, 0), (-2, 0, 0), (0, 2, 0), (0, -2, 0), (0, 0, 2), (0, 0, -2)]:
        assert Point3(*p) in pts


@pytest.mark.parametrize("k", [-4, -2, 0, 2, 5, 18])
def test_enumerate_matches_naive_11(k):
    s = Markoff11(k)
    for B in (5, 11):
        assert enumerate_points(s, B) == sorted(_naive_enumerate(s, B))


@pytest.mark.parametrize("k", [-2, 6])
def test_enumerate_matches_naive_box30(k):
    s = Markoff11(k)
    assert enumerate_points(s, 30) == sorted(_naive_enumerate(s, 30))


@pytest.mark.parametrize("ks", [(0, 0, 0, 0), (1, 1, 1, 1), (2, 0, -1, 3), (-2, 1, 0, 2)])
def test_enumerate_matches_naive_04(ks):
    s = make_cubic04(*ks)
    assert enumerate_points(s, 7) == sorted(_naive_enumerate(s, 7))


def test_enumerate_large_params_fallback():
    # parameters big enough to leave the vectorized regime
    s = Markoff11(2**40)
    assert enumerate_points(s, 2) == sorted(_naive_enumerate(s, 2))


def test_enumerate_requires_exact():
    with pytest.raises(DomainMismatch):
        enumerate_points(Markoff11(-2.0), 3)


# --- orbit BFS --------------------------------------------------------------


def test_orbit_bfs_fixed_point():
    run = orbit_bfs(MARKOFF, "gamma_poly", Point3(0, 0, 0), cap_height=1000)
    assert run.points() == [Point3(0, 0, 0)]
    assert not run.caps_hit


def test_orbit_bfs_markoff_tree():
    run = orbit_bfs(MARKOFF, "gamma_poly", Point3(3, 3, 3), cap_height=100)
    pts = set(run.points())
    for expected in [(3, 3, 6), (3, 6, 15), (6, 15, 87)]:
        assert Point3(*expected) in pts
    assert run.caps_hit  # the tree continues above height 100
    for p in run.points():
        assert apply_word(MARKOFF, run.word_to(p), Point3(3, 3, 3)) == p


def test_orbit_bfs_start_above_cap():
    run = orbit_bfs(MARKOFF, "gamma_prime", Point3(3, 6, 15), cap_height=2)
    assert run.points() == [Point3(3, 6, 15)]
    assert run.caps_hit


def test_orbit_bfs_rejects_off_surface():
    with pytest.raises(MarkoffError):
        orbit_bfs(MARKOFF, "gamma_prime", Point3(1, 1, 1), cap_height=10)


# --- equivalence ------------------------------------------------------------


def test_equivalent_reflexive():
    res = equivalent(MARKOFF, "gamma_prime", Point3(3, 3, 3), Point3(3, 3, 3))
    assert res.equivalent and res.word.moves == ()


def test_equivalent_markoff_pair():
    res = equivalent(
        MARKOFF, "gamma_prime", Point3(3, 3, 3), Point3(3, 6, 15), Caps(height=100)
    )
    assert res.equivalent
    assert apply_word(MARKOFF, res.word, Point3(3, 3, 3)) == Point3(3, 6, 15)


def test_equivalent_origin_vs_markoff():
    res = equivalent(
        MARKOFF, "gamma_prime", Point3(0, 0, 0), Point3(3, 3, 3), Caps(height=10**6)
    )
    assert not res.equivalent
    assert res.exhausted  # the origin orbit is a single point


def test_equivalent_respects_count_cap():
    res = equivalent(
        MARKOFF,
        "gamma_prime",
        Point3(3, 3, 3),
        Point3(6, 15, 87),
        Caps(height=10**9, count=10),
    )
    assert not res.equivalent and not res.exhausted


# --- exceptional search -----------------------------------------------------


def test_is_exceptional_immediate():
    res = is_exceptional(Markoff11(6), Point3(2, 3, 1), Caps(height=100, count=10**4))
    assert res.found and res.word.moves == ()


def test_is_exceptional_one_step():
    # (1, 3, 1) on k = 6 reaches (1, -2, 1) by one Vieta move
    s = Markoff11(6)
    res = is_exceptional(s, Point3(1, 3, 1), Caps(height=100, count=10**4))
    assert res.found
    hit = apply_word(s, res.word, Point3(1, 3, 1))
    assert 2 in (abs(hit.x), abs(hit.y), abs(hit.z))


def test_is_exceptional_origin():
    res = is_exceptional(MARKOFF, Point3(0, 0, 0), Caps(height=100, count=10**4))
    assert not res.found and res.exhausted


def test_is_exceptional_markoff_point_no_within_caps():
    res = is_exceptional(MARKOFF, Point3(3, 3, 3), Caps(height=60, count=10**4))
    assert not res.found
    assert res.pruned  # orbit continues above the cap


# --- class numbers ----------------------------------------------------------


def _inbox_component_oracle(surface, gens_name, B):
    """Independent union-find over the raw box graph (no descent).

    A component counts iff no member has a coordinate +-2.
    """
    pts = enumerate_points(surface, B)
    index = {p: i for i, p in enumerate(pts)}
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    gens = generators(surface.kind, gens_name)
    for p, i in index.items():
        for g in gens:
            q = apply_move(surface, g, p)
            j = index.get(q)
            if j is not None:
                parent[find(i)] = find(j)
    classes = {}
    for p, i in index.items():
        classes.setdefault(find(i), []).append(p)
    good = sum(
        1
        for members in classes.values()
        if not any(2 in (abs(v) for v in p) for p in members)
    )
    return good, len(classes)


def test_class_number_markoff():
    report = class_number(MARKOFF, "gamma_prime", 100)
    assert report.class_number_star == 2
    reps = [p for p, _ in report.representatives]
    assert Point3(0, 0, 0) in reps
    assert Point3(3, 3, 3) in reps
    assert report.exceptional == ()
    sizes = dict(report.representatives)
    assert sizes[Point3(0, 0, 0)] == 1


def test_class_number_empty_box():
    report = class_number(Markoff11(7), "gamma_prime", 1)
    assert report.class_number_star == 0
    assert report.representatives == ()
    assert report.exceptional == ()


def test_class_number_exceptional_accounting():
    # k = 6 has integral parabolic lines; every box point sits in a component
    # touching a +-2 coordinate, classes plus exceptional partition the box
    s = Markoff11(6)
    B = 60
    report = class_number(s, "gamma_prime", B)
    pts = enumerate_points(s, B)
    counted = sum(n for _, n in report.representatives) + len(report.exceptional)
    assert counted == len(pts)
    for p, word in report.exceptional:
        hit = apply_word(s, word, p)
        assert any(v in (2, -2) for v in hit)
    oracle_good, _ = _inbox_component_oracle(s, "gamma_prime", B)
    assert report.class_number_star == oracle_good


@pytest.mark.parametrize("k", [-2, -1, 0, 2, 3, 5, 6])
@pytest.mark.parametrize("gens", ["gamma_prime", "gamma_poly"])
def test_class_number_matches_inbox_oracle(k, gens):
    s = Markoff11(k)
    B = 40
    report = class_number(s, gens, B)
    oracle_good, _ = _inbox_component_oracle(s, gens, B)
    assert report.class_number_star == oracle_good


@pytest.mark.parametrize("gens", ["gamma_prime", "gamma_poly"])
@pytest.mark.parametrize("ks", [(1, 1, 1, 1), (0, 0, 0, 0), (2, 0, -1, 3)])
def test_class_number_04_oracle(ks, gens):
    s = make_cubic04(*ks)
    report = class_number(s, gens, 20)
    oracle_good, _ = _inbox_component_oracle(s, gens, 20)
    assert report.class_number_star == oracle_good


def test_class_number_small_scale_stability():
    for k in (-2, 0, 5):
        a = class_number(Markoff11(k), "gamma_prime", 50).class_number_star
        b = class_number(Markoff11(k), "gamma_prime", 100).class_number_star
        assert a == b


# --- parabolic lines --------------------------------------------------------


def test_parabolic_lines_k6():
    report = parabolic_lines_11(6)
    assert report.square_root == 2
    assert len(report.lines) == 4
    # (2, 3, 1) sits on the line t -> (2, t, t - 2) at t = 3
    line = report.lines[0]
    assert line.point_at(3) == Point3(2, 3, 1)
    assert residual(Markoff11(6), Point3(2, 3, 1)) == 0
    assert lines_cover_point(report, Point3(2, 3, 1))


def test_parabolic_lines_k2_deduplicated():
    report = parabolic_lines_11(2)
    assert report.square_root == 0
    assert len(report.lines) == 2


def test_parabolic_lines_no_integral():
    assert parabolic_lines_11(1).lines == ()
    assert parabolic_lines_11(1).note != ""
    assert parabolic_lines_11(7).lines == ()  # k - 2 = 5 is not a square


def test_parabolic_lines_validity():
    # residual vanishes identically in t: check five integer values per line
    for k in (2, 3, 6, 11, 18):
        s = Markoff11(k)
        report = parabolic_lines_11(k)
        for line in report.lines:
            for t in (-7, -1, 0, 3, 12):
                assert residual(s, line.point_at(t)) == 0


def test_parabolic_lines_cover_box_points():
    for k in (2, 3, 6, 11):
        s = Markoff11(k)
        report = parabolic_lines_11(k)
        for p in enumerate_points(s, 25):
            if any(v in (2, -2) for v in p):
                assert lines_cover_point(report, p)


def test_no_exceptional_points_for_nonsquare_k():
    for k in (-2, 0, 4, 7, 13):
        assert parabolic_lines_11(k).lines == ()
        for p in enumerate_points(Markoff11(k), 25):
            assert not any(v in (2, -2) for v in p)


def test_representatives_pairwise_inequivalent():
    # class partition soundness: representatives never merge at the run caps
    for k in (-2, 0, 5):
        s = Markoff11(k)
        report = class_number(s, "gamma_prime", 60)
        reps = [p for p, _ in report.representatives]
        caps = Caps(height=60)
        for i, p in enumerate(reps):
            for q in reps[i + 1 :]:
                assert not equivalent(s, "gamma_prime", p, q, caps).equivalent


def test_class_number_04_exceptional_accounting():
    # boundary parameters 2,2,2,2 put many +-2 coordinates in the box
    s = make_cubic04(2, 2, 2, 2)
    B = 25
    report = class_number(s, "gamma_prime", B)
    pts = enumerate_points(s, B)
    counted = sum(n for _, n in report.representatives) + len(report.exceptional)
    assert counted == len(pts)
    assert report.exceptional  # the locus is inhabited here
    for p, word in report.exceptional:
        hit = apply_word(s, word, p)
        assert any(v in (2, -2) for v in hit)
    oracle_good, _ = _inbox_component_oracle(s, "gamma_prime", B)
    assert report.class_number_star == oracle_good


def test_enumerate_dispatch_regimes():
    from markoff.orbits import _enumerate_slow, _enumeration_fits_int64

    cases = [
        (Markoff11(2**30), 4),
        (make_cubic04(2**13, 3, -5, 7), 6),
        (make_cubic04(2**26, 1, 1, 1), 2),  # falls back to exact big-int scan
        (make_cubic04(2, 2, 2, 2), 10),
    ]
    seen = set()
    for s, B in cases:
        seen.add(_enumeration_fits_int64(s, B))
        assert enumerate_points(s, B) == sorted(_enumerate_slow(s, B))
    assert seen == {True, False}


def test_class_number_golden_box100():
    # frozen from an oracle-verified run: (k, h*_gamma_poly, h*_gamma_prime,
    # exceptional count under gamma_prime) at box 100
    golden = [
        (-2, 3, 2, 0),
        (-1, 1, 1, 0),
        (0, 1, 1, 0),
        (1, 0, 0, 0),
        (2, 0, 0, 1370),
        (3, 0, 0, 2664),
        (4, 0, 0, 0),
        (5, 0, 0, 0),
        (6, 0, 0, 2640),
    ]
    for k, h_poly, h_prime, n_exc in golden:
        s = Markoff11(k)
        prime = class_number(s, "gamma_prime", 100)
        poly = class_number(s, "gamma_poly", 100)
        assert (poly.class_number_star, prime.class_number_star) == (h_poly, h_prime)
        assert len(prime.exceptional) == n_exc
