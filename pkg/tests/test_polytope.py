import json

import pytest
from gmpy2 import mpq

from conftest import cross_polytope, cube, random_spiky_body, simplex
from covercert.errors import (
    EmptySection,
    MissingRepresentation,
    UnboundedPolytope,
    ZeroNotInterior,
)
from covercert.polytope import Polytope, general_section
from covercert.rationals import factorial


def test_known_volumes():
    for n in range(1, 6):
        assert cross_polytope(n).volume() == mpq(2**n, factorial(n))
        assert simplex(n).volume() == mpq(1, factorial(n))
    for n in range(1, 5):
        assert cube(n).volume() == 2**n


def test_vertex_hull_drops_interior_points():
    p = Polytope.from_vertices([(0, 0), (1, 0), (0, 1), (1, 1), (mpq(1, 2), mpq(1, 2))])
    assert len(p.vertices) == 4
    assert p.volume() == 1


def test_halfspace_roundtrip():
    p = cube(3)
    q = Polytope.from_halfspaces(p.halfspaces, 3)
    assert sorted(q.vertices) == sorted(p.vertices)
    assert q.volume() == 8


def test_unbounded_halfspaces_rejected():
    with pytest.raises(UnboundedPolytope):
        Polytope.from_halfspaces([((mpq(1), mpq(0)), mpq(1))], 2).convert()


def test_missing_representation():
    with pytest.raises(MissingRepresentation):
        Polytope(2)


def test_sections_of_cross_polytope():
    p = cross_polytope(3)
    # every coordinate section of B1^3 is a lower-dimensional B1
    assert p.section_volume((0,)) == 2
    assert p.section_volume((0, 1)) == 2
    assert p.section_volume((0, 1, 2)) == mpq(4, 3)


def test_projections_of_cross_polytope():
    p = cross_polytope(3)
    assert p.projection_volume((0,)) == 2
    assert p.projection_volume((0, 1)) == 2


def test_section_requires_zero_on_slice():
    shifted = cube(2).translate((mpq(5), mpq(5)))
    with pytest.raises(EmptySection):
        shifted.coordinate_section((0,))


def test_degenerate_section_volume_zero():
    # triangle touching the y-axis only at the origin
    p = Polytope.from_vertices([(0, 0), (1, 1), (1, -1)])
    assert p.section_volume((1,)) == 0


def test_minkowski_functional():
    p = cube(2)
    assert p.minkowski_functional((mpq(1, 2), mpq(0))) == mpq(1, 2)
    assert p.minkowski_functional((2, 2)) == 2
    shifted = cube(2).translate((mpq(5), mpq(5)))
    with pytest.raises(ZeroNotInterior):
        shifted.minkowski_functional((1, 1))


def test_support_and_contains():
    p = cross_polytope(2)
    assert p.support((1, 0)) == 1
    assert p.support((1, 1)) == 1
    assert p.contains((mpq(1, 2), mpq(1, 2)))
    assert not p.contains((1, 1))


def test_linear_image_and_translate_volume():
    p = cube(2)
    image = p.linear_image([[mpq(2), mpq(0)], [mpq(0), mpq(3)]])
    assert image.volume() == 6 * p.volume()
    assert p.translate((1, 1)).volume() == p.volume()


def test_permute_coordinates_preserves_sections():
    rngless = random_spiky_body(3, __import__("random").Random(7))
    perm = [2, 0, 1]
    permuted = rngless.permute_coordinates(perm)
    assert permuted.volume() == rngless.volume()
    # new coordinate i reads old coordinate perm[i]
    assert permuted.section_volume((0, 1)) == rngless.section_volume(
        tuple(sorted((perm[0], perm[1])))
    )


def test_json_roundtrip():
    p = cross_polytope(3)
    q = Polytope.from_json(p.to_json())
    assert sorted(q.vertices) == sorted(p.vertices)
    data = json.loads(p.to_json())
    assert set(data) >= {"dim", "vertices"}


def test_json_consistency_check():
    bad = {
        "dim": 2,
        "vertices": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"]],
        "halfspaces": [{"a": ["1", "0"], "b": "1/2"}],
    }
    with pytest.raises(ValueError):
        Polytope.from_dict(bad)


def test_random_bodies_volume_positive(rng):
    for n in (2, 3):
        for _ in range(5):
            p = random_spiky_body(n, rng)
            assert p.volume() > 0
            assert p.has_zero_interior()


def test_float_general_section_matches_exact():
    import numpy as np

    p = cube(3)
    basis = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    fs = general_section(p, basis)
    assert abs(fs.volume() - float(p.section_volume((0, 1)))) < 1e-9
