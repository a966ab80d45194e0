import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wmgsynth.acyclic import (
    LatticePointSet,
    WmgRegion,
    check_lattice_convex,
    embed,
    find_separating_region,
    region_place_name,
    synthesize_acyclic,
)
from wmgsynth.errors import (
    CertificationFailed,
    InconsistentDistances,
    NoRegionExists,
    NonConvex,
    PreconditionViolated,
    PropertyBViolated,
    Unsolvable,
)
from wmgsynth.lts import Lts, circular_lts_from_word, lts_isomorphic
from wmgsynth.net import reachability_graph
from wmgsynth.search import bounded_net_search

from generators import arc_deletions
from figures import bounded_region_lts, bounded_region_points, grid_lts, staircase_lts


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def in_hull_2d(x, points) -> bool:
    """Carathéodory: x is in the hull iff it lies in a triangle (possibly
    degenerate) spanned by three of the points."""
    pts = sorted(set(points))
    if x in pts:
        return True
    for p, q in itertools.combinations(pts, 2):
        if _cross(p, q, x) == 0 and min(p[0], q[0]) <= x[0] <= max(p[0], q[0]) \
                and min(p[1], q[1]) <= x[1] <= max(p[1], q[1]):
            return True
    for p, q, r in itertools.combinations(pts, 3):
        d1, d2, d3 = _cross(p, q, x), _cross(q, r, x), _cross(r, p, x)
        if (d1 >= 0 and d2 >= 0 and d3 >= 0) or (d1 <= 0 and d2 <= 0 and d3 <= 0):
            if _cross(p, q, r) != 0:
                return True
    return False


def convex_by_triangles(points) -> bool:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return all(x in points or not in_hull_2d(x, points)
               for x in itertools.product(range(min(xs), max(xs) + 1), range(min(ys), max(ys) + 1)))


point_sets = st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=9)


def half_plane_points(cuts, size=7):
    """Lattice points of [0,size)^2 satisfying k + h*x - l*y >= 0 style cuts
    (arbitrary signs), which are convex by construction."""
    return {(x, y) for x in range(size) for y in range(size)
            if all(c + a * x + b * y >= 0 for a, b, c in cuts)}


cut_lists = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 12)), max_size=4)


# -- convexity ------------------------------------------------------------------------

def test_convexity_examples():
    assert check_lattice_convex(LatticePointSet(("a", "b"), frozenset({(0, 0), (1, 0), (2, 1)})))
    verdict = check_lattice_convex(LatticePointSet(("a", "b"), frozenset({(0, 0), (2, 0)})))
    assert not verdict and verdict.witness == (1, 0)
    stair = frozenset({(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)})
    assert check_lattice_convex(LatticePointSet(("a", "b"), stair)).witness == (1, 1)
    assert check_lattice_convex(LatticePointSet(("a", "b"), frozenset()))


def test_convexity_in_three_dimensions():
    cube = frozenset(itertools.product(range(2), repeat=3))
    assert check_lattice_convex(LatticePointSet(("a", "b", "c"), cube))
    hollow = frozenset({(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 0, 0), (0, 1, 0), (0, 0, 1),
                        (1, 1, 0), (1, 0, 1), (0, 1, 1)})
    assert check_lattice_convex(LatticePointSet(("a", "b", "c"), hollow))
    assert not check_lattice_convex(LatticePointSet(("a", "b", "c"), hollow - {(1, 0, 0)}))


@settings(max_examples=150, deadline=None)
@given(point_sets)
def test_convexity_matches_triangle_oracle(points):
    ps = LatticePointSet(("a", "b"), frozenset(points))
    assert bool(check_lattice_convex(ps)) == convex_by_triangles(points)


@settings(max_examples=60, deadline=None)
@given(cut_lists)
def test_half_plane_intersections_are_convex(cuts):
    points = half_plane_points(cuts)
    assert check_lattice_convex(LatticePointSet(("a", "b"), frozenset(points)))


def test_lattice_point_set_validation():
    with pytest.raises(ValueError):
        LatticePointSet(("a", "b"), frozenset({(0, -1)}))
    with pytest.raises(ValueError):
        LatticePointSet(("a", "b"), frozenset({(0,)}))


# -- regions ------------------------------------------------------------------------------

def test_region_value_and_rendering():
    r = WmgRegion("a", "b", 2, 1, 1)
    assert r.value(("a", "b"), (3, 2)) == 5
    assert str(r) == "1 + 2*a - 1*b >= 0"
    assert r.descriptor().input == "a" and r.descriptor().output == "b"
    assert region_place_name(WmgRegion(None, "a", 0, 1, 10)) == "p(*,a)"
    with pytest.raises(ValueError):
        WmgRegion("a", "a", 1, 1, 0)
    with pytest.raises(ValueError):
        WmgRegion(None, "a", 2, 1, 0)
    with pytest.raises(ValueError):
        WmgRegion("b", "a", 1, 0, 0)


def _check_region(region, ps, point, label):
    labels = ps.labels
    i = labels.index(label)
    for p in ps.points:
        assert region.value(labels, p) >= 0
        q = p[:i] + (p[i] + 1,) + p[i + 1:]
        if q in ps.points:
            assert region.value(labels, p) >= region.l
    assert region.value(labels, point) < region.l


@settings(max_examples=80, deadline=None)
@given(cut_lists)
def test_separating_regions_satisfy_their_inequalities(cuts):
    points = half_plane_points(cuts)
    assume((0, 0) in points)
    ps = LatticePointSet(("a", "b"), frozenset(points))
    for p in sorted(points):
        for i, label in enumerate("ab"):
            q = p[:i] + (p[i] + 1,) + p[i + 1:]
            if q in points:
                continue
            try:
                region = find_separating_region(ps, (p, label))
            except NoRegionExists:
                continue
            _check_region(region, ps, p, label)


def test_separating_region_precondition():
    ps = LatticePointSet(("a", "b"), frozenset({(0, 0), (1, 0)}))
    with pytest.raises(PreconditionViolated):
        find_separating_region(ps, ((0, 0), "a"))
    region = find_separating_region(ps, ((1, 0), "a"))
    assert region == WmgRegion(None, "a", 0, 1, 1)


# -- synthesis --------------------------------------------------------------------------------

def test_bounded_region_gives_the_four_boundary_places():
    lts = bounded_region_lts()
    assert len(lts.states) == len(bounded_region_points()) == 51
    solution = synthesize_acyclic(lts)
    assert set(solution.regions) == {
        WmgRegion("a", "b", 2, 1, 1),
        WmgRegion(None, "a", 0, 1, 10),
        WmgRegion("b", "a", 7, 2, 6),
        WmgRegion("a", "b", 1, 7, 33),
    }
    assert solution.counters == ()
    assert lts_isomorphic(reachability_graph(solution.system), lts) is not None


def test_synthesis_rejections():
    with pytest.raises(NonConvex):
        synthesize_acyclic(staircase_lts())
    with pytest.raises(PreconditionViolated):
        synthesize_acyclic(circular_lts_from_word("ab"))
    with pytest.raises(PropertyBViolated):
        synthesize_acyclic(Lts.build("i", [("i", "a", "x"), ("i", "b", "y")]))


def test_embedding_detects_disagreeing_paths():
    lts = Lts.build("i", [("i", "a", "x"), ("x", "b", "z"), ("i", "b", "y"), ("y", "a", "w")])
    ps, coords = embed(grid_lts({(0, 0), (1, 0), (0, 1)}))
    assert ps.points == frozenset({(0, 0), (1, 0), (0, 1)})
    with pytest.raises(InconsistentDistances):
        embed(lts)


def test_single_state_and_path_lts():
    single = Lts.build("s", [], labels=["a"])
    assert len(reachability_graph(synthesize_acyclic(single).system).states) == 1
    path = grid_lts({(0, 0), (1, 0), (2, 0)})
    assert len(synthesize_acyclic(path).system.net.places) >= 1


@settings(max_examples=60, deadline=None)
@given(cut_lists)
def test_synthesis_agrees_with_bounded_search_on_random_regions(cuts):
    points = half_plane_points(cuts, size=5)
    assume((0, 0) in points and len(points) <= 14)
    base = grid_lts(points)
    for lts in [base, *list(arc_deletions(base))[:3]]:
        try:
            ours = synthesize_acyclic(lts).system
        except (Unsolvable, CertificationFailed):
            ours = None
        except PreconditionViolated:
            continue
        theirs = bounded_net_search(lts, max_weight=4, max_tokens=8).solvable
        if theirs:
            assert ours is not None, sorted(lts.arcs)
        if ours is not None:
            assert lts_isomorphic(reachability_graph(ours), lts) is not None
            if not theirs:
                weights = list(ours.net.pre.values()) + list(ours.net.post.values())
                assert max(weights) > 4 or max(ours.initial) > 8
