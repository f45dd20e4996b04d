import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdcodes.errors import InvalidDimension, InvalidLattice, InvalidLeafDim, NodeNotInLeaf
from tdcodes.lattice import (
    OPEN,
    PERIODIC,
    STAR,
    Cube,
    Lattice,
    LatticeSpec,
    Leaf,
    cofaces_in_leaf,
    enumerate_cubes,
    expected_cube_count,
    faces,
    leaves_through,
    make_lattice,
    star_expand,
)


def box(*L):
    return Lattice.periodic_box(*L)


def cyclic_gap(a, b, period):
    gap = abs(a - b) % period
    return min(gap, period - gap)


def brute_faces(lat, gamma, d):
    """d-cubes whose closure sits inside gamma, found by scanning every d-cube."""
    out = []
    for c in lat.cubes(d):
        ok = True
        for i in range(lat.D):
            period = 2 * lat.L[i]
            if c[i] & 1:
                ok &= c[i] == gamma[i]
            elif gamma[i] & 1:
                ok &= cyclic_gap(c[i], gamma[i], period) == 1 if lat.periodic[i] else abs(c[i] - gamma[i]) == 1
            else:
                ok &= c[i] == gamma[i]
        if ok:
            out.append(c)
    return out


def test_counts_on_4x4():
    lat = make_lattice(LatticeSpec(2, (4, 4)))
    assert [lat.count(n) for n in range(3)] == [16, 32, 16]


def test_xcube_box_counts():
    lat = box(2, 3, 3)
    assert lat.count(3) == 18
    assert len(enumerate_cubes(lat, 1)) == 54


@pytest.mark.parametrize("L", [(2,), (3, 2), (2, 3, 3), (2, 2, 2, 2), (3, 2, 4)])
def test_periodic_count_formula(L):
    lat = box(*L)
    for n in range(len(L) + 1):
        assert lat.count(n) == expected_cube_count(lat, n) == math.comb(len(L), n) * math.prod(L)


def test_open_count_formula():
    lat = Lattice(LatticeSpec(3, (2, 3, 2), (OPEN, PERIODIC, OPEN)))
    for n in range(4):
        expected = 0
        for S in itertools.combinations(range(3), n):
            expected += math.prod(
                lat.L[i] if i in S else lat.L[i] + (0 if lat.periodic[i] else 1) for i in range(3)
            )
        assert lat.count(n) == expected


def test_invalid_lattices():
    with pytest.raises(InvalidLattice):
        make_lattice(LatticeSpec(1, (1,)))
    with pytest.raises(InvalidLattice):
        make_lattice(LatticeSpec(2, (0, 3), (OPEN, PERIODIC)))
    with pytest.raises(InvalidLattice):
        make_lattice(LatticeSpec(2, (3,)))
    with pytest.raises(InvalidLattice):
        make_lattice(LatticeSpec(1, (3,), ("twisted",)))
    # An open direction may have a single cell.
    assert make_lattice(LatticeSpec(1, (1,), (OPEN,))).count(1) == 1


def test_dimension_out_of_range():
    lat = box(3, 3)
    with pytest.raises(InvalidDimension):
        lat.cubes(3)
    with pytest.raises(InvalidDimension):
        lat.cubes(-1)


def test_cube_notation_and_parsing():
    lat = box(3, 3)
    c = lat.cube(-0.5, 0)
    assert c == (5, 0)
    assert c.dim == 1 and c.half_axes == (0,)
    assert repr(c) == "Cube[5/2, 0]"
    assert lat.cube(0.5, 1.5).dim == 2
    with pytest.raises(ValueError):
        lat.cube(0.25, 0)


def test_open_normalize_drops_outside():
    lat = Lattice(LatticeSpec(2, (2, 2), (OPEN, PERIODIC)))
    assert lat.normalize((-1, 0)) is None
    assert lat.normalize((5, 0)) is None
    assert lat.normalize((4, 5)) == (4, 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 4), min_size=1, max_size=3), st.data())
def test_enumeration_is_bijective(L, data):
    lat = box(*L)
    n = data.draw(st.integers(0, len(L)))
    cubes = lat.cubes(n)
    assert len(set(cubes)) == len(cubes)
    assert cubes == sorted(cubes)
    for i in range(len(cubes)):
        assert lat.index_of(lat.cube_at(n, i)) == i


@pytest.mark.parametrize("D,d,expected", [(3, 1, 12), (4, 1, 32), (4, 2, 24)])
def test_face_counts_of_top_cubes(D, d, expected):
    lat = box(*([2] * D))
    gamma = lat.cubes(D)[0]
    assert len(faces(lat, gamma, d)) == expected


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(2, 3), min_size=1, max_size=4), st.data())
def test_faces_match_neighbourhood_search(L, data):
    lat = box(*L)
    D = len(L)
    gamma = data.draw(st.sampled_from(lat.cubes(D)))
    d = data.draw(st.integers(0, D))
    found = faces(lat, gamma, d)
    assert found == brute_faces(lat, gamma, d)
    assert len(found) == math.comb(D, d) * 2 ** (D - d)


def test_faces_edge_cases():
    lat = box(3, 3)
    edge = lat.cube(0.5, 0)
    assert faces(lat, edge, 1) == [edge]
    assert faces(lat, edge, 2) == []


def test_faces_on_open_lattice_match_search():
    lat = Lattice(LatticeSpec(2, (2, 3), (OPEN, PERIODIC)))
    for gamma in lat.cubes(2):
        for d in range(3):
            assert faces(lat, gamma, d) == brute_faces(lat, gamma, d)


def test_leaves_through_examples():
    lat3 = box(3, 3, 3)
    v = lat3.cube(0, 0, 0)
    leaves = leaves_through(lat3, v, 2)
    assert len(leaves) == 3
    assert {frozenset(l.axes) for l in leaves} == {frozenset(p) for p in itertools.combinations(range(3), 2)}
    lat4 = box(2, 2, 2, 2)
    assert len(leaves_through(lat4, lat4.cube(0, 0, 0, 0), 2)) == 6
    edge = lat4.cube(0.5, 0, 0, 0)
    through_edge = leaves_through(lat4, edge, 3)
    assert len(through_edge) == 3
    assert all(0 in l.axes for l in through_edge)


@pytest.mark.parametrize("D,d_n,d_l", [(3, 0, 1), (3, 1, 2), (4, 0, 3), (4, 2, 3), (2, 1, 2)])
def test_leaf_count_formula(D, d_n, d_l):
    lat = box(*([3] * D))
    node = next(c for c in lat.cubes(d_n))
    leaves = leaves_through(lat, node, d_l)
    assert len(leaves) == math.comb(D - d_n, d_l - d_n)
    assert all(l.contains(node) for l in leaves)


def test_leaf_dim_below_node():
    lat = box(3, 3)
    with pytest.raises(InvalidLeafDim):
        leaves_through(lat, lat.cube(0.5, 0.5), 1)


def test_leaf_equality_ignores_coordinates_along_axes():
    assert Leaf({0}, Cube((2, 4))) == Leaf({0}, Cube((0, 4)))
    assert Leaf({0}, Cube((2, 4))) != Leaf({0}, Cube((2, 2)))


def test_cofaces_examples():
    lat3 = box(3, 3, 3)
    v = lat3.cube(1, 1, 1)
    xy = next(l for l in leaves_through(lat3, v, 2) if l.axes == frozenset({0, 1}))
    edges = cofaces_in_leaf(lat3, v, 1, xy)
    assert len(edges) == 4
    assert all(e[2] == v[2] for e in edges)

    edge = lat3.cube(0.5, 0, 0)
    (whole,) = leaves_through(lat3, edge, 3)
    assert len(cofaces_in_leaf(lat3, edge, 2, whole)) == 4

    lat2 = box(4, 4)
    (plane,) = leaves_through(lat2, lat2.cube(0, 0), 2)
    assert len(cofaces_in_leaf(lat2, lat2.cube(0, 0), 1, plane)) == 4


def test_cofaces_node_outside_leaf():
    lat = box(3, 3, 3)
    leaf = leaves_through(lat, lat.cube(0, 0, 0), 2)[0]
    with pytest.raises(NodeNotInLeaf):
        cofaces_in_leaf(lat, lat.cube(0, 0, 2), 1, leaf)


def test_cofaces_truncated_at_open_edge():
    lat = Lattice(LatticeSpec(2, (2, 2), (OPEN, OPEN)))
    (plane,) = leaves_through(lat, lat.cube(0, 0), 2)
    assert len(cofaces_in_leaf(lat, lat.cube(0, 0), 1, plane)) == 2
    assert len(cofaces_in_leaf(lat, lat.cube(1, 0), 1, plane)) == 3


def test_cofaces_match_face_relation():
    lat = box(2, 3, 2)
    for node in lat.cubes(1)[:12]:
        for leaf in leaves_through(lat, node, 2):
            found = set(cofaces_in_leaf(lat, node, 2, leaf))
            brute = {c for c in lat.cubes(2) if leaf.contains(c) and set(c.half_axes) <= leaf.axes and node in faces(lat, c, 1)}
            assert found == brute


def test_star_expand_examples():
    lat = box(2, 3, 3)
    slab = star_expand(lat, [1, STAR, STAR], dim=3)
    assert len(slab) == 3 * 3
    assert all(c[0] == 1 for c in slab)
    assert star_expand(lat, [1, 3, 5]) == [Cube((1, 3, 5))]
    lat2 = box(4, 4)
    assert star_expand(lat2, [STAR, STAR], dim=2) == lat2.cubes(2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(2, 3), min_size=1, max_size=3), st.data())
def test_star_expand_monotone(L, data):
    lat = box(*L)
    D = len(L)
    base = [data.draw(st.integers(0, 2 * n - 1)) for n in L]
    mask = data.draw(st.lists(st.booleans(), min_size=D, max_size=D))
    pattern = [STAR if m else v for m, v in zip(mask, base)]
    widen = data.draw(st.integers(0, D - 1))
    wider = list(pattern)
    wider[widen] = STAR
    dim = data.draw(st.none() | st.integers(0, D))
    assert set(lat.star_expand(pattern, dim)) <= set(lat.star_expand(wider, dim))
    assert lat.star_expand(base) == [Cube(base)]
