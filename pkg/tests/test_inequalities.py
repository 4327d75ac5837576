import pytest
from gmpy2 import mpq

from conftest import cross_polytope, cube, random_box, random_spiky_body, simplex
from covercert.covers import Cover, WeightedCover, parse_cover
from covercert.errors import NotUniform, WeightsInvalid, ZeroNotInterior
from covercert.inequalities import (
    check_bt,
    check_dual_bt,
    check_lw,
    check_meyer,
    check_weighted_bt,
    check_weighted_dual_bt,
    meyer_constant,
)
from covercert.rationals import factorial


COMPLEMENT_3 = parse_cover("1,2;1,3;2,3")


def test_dual_bt_equality_on_cross_polytope():
    rep = check_dual_bt(cross_polytope(3), COMPLEMENT_3)
    assert rep.passed and rep.exact
    assert rep.slack == 1
    assert rep.is_equality


def test_dual_bt_strict_on_cube():
    rep = check_dual_bt(cube(2), parse_cover("1;2"))
    assert rep.passed
    assert rep.slack == 2


def test_dual_bt_requires_zero_interior():
    with pytest.raises(ZeroNotInterior):
        check_dual_bt(cube(2).translate((5, 5)), parse_cover("1;2"))


def test_dual_bt_rejects_nonuniform():
    with pytest.raises(NotUniform):
        check_dual_bt(cube(2), Cover(2, [[0], [0, 1]]))


def test_dual_bt_degenerate_section_warns():
    # a zero-volume section cannot arise when 0 is interior; exercise the
    # defensive rhs = 0 branch through the section cache
    cache = {(0,): mpq(0), (1,): mpq(2)}
    rep = check_dual_bt(cube(2), Cover(2, [[0], [1]]), cache=cache)
    assert rep.rhs == 0
    assert rep.passed
    assert rep.slack is None
    assert rep.warning is not None


def test_bt_equality_on_boxes():
    rep = check_bt(cube(3), COMPLEMENT_3)
    assert rep.passed and rep.slack == 1


def test_bt_on_cross_polytope_strict():
    rep = check_bt(cross_polytope(3), COMPLEMENT_3)
    # projections of B1^3 on coordinate planes are B1^2: lhs = 8, rhs = (4/3)^2
    assert rep.lhs == 8
    assert rep.rhs == mpq(16, 9)
    assert rep.passed


def test_meyer_and_lw_on_random_bodies(rng):
    for _ in range(5):
        p = random_spiky_body(3, rng)
        assert check_meyer(p).passed
        assert check_lw(p).passed


def test_lw_equality_on_boxes(rng):
    for _ in range(5):
        b = random_box(2, rng)
        assert check_lw(b).slack == 1


def test_meyer_equality_on_cross_polytopes():
    for n in (2, 3, 4):
        rep = check_meyer(cross_polytope(n))
        assert rep.slack == 1
        assert rep.constant == meyer_constant(n)


def test_meyer_constant_identity():
    for n in range(1, 13):
        assert meyer_constant(n) == mpq(factorial(n), n**n)


def test_weighted_reduces_to_unweighted():
    wc = WeightedCover.from_cover(COMPLEMENT_3)
    p = cross_polytope(3)
    assert check_weighted_dual_bt(p, wc).passed
    assert check_weighted_bt(p, wc).passed


def test_weighted_fractional_weights_exact():
    # cover of [2] by {1}, {2}, {1,2} with weights 1/2, 1/2, 1/2 and s = 1
    wc = WeightedCover(
        2, [[0], [1], [0, 1]], [mpq(1, 2), mpq(1, 2), mpq(1, 2)], mpq(1)
    )
    p = cross_polytope(2)
    rep = check_weighted_dual_bt(p, wc)
    assert rep.passed and rep.exact
    rep = check_weighted_bt(p, wc)
    assert rep.passed


def test_weighted_rejects_invalid_weights():
    wc = WeightedCover(2, [[0], [1]], [mpq(1), mpq(2)], mpq(1))
    with pytest.raises(WeightsInvalid):
        check_weighted_dual_bt(cube(2), wc)


def test_exact_verdict_near_equality():
    # scaled cross-polytope: slack must be exactly 1, not approximately
    p = cross_polytope(3, lam=mpq(7, 5))
    rep = check_dual_bt(p, COMPLEMENT_3)
    assert rep.slack == 1


def test_report_serialization():
    rep = check_dual_bt(cross_polytope(2), parse_cover("1;2"))
    d = rep.to_dict()
    assert d["pass"] is True
    assert d["slack"] == "1"
    assert d["factors"][0]["sigma"] == "1"


def test_simplex_with_interior_shift():
    # simplex shifted so 0 is interior: dual BT still holds on all 1-covers
    p = simplex(2).translate((mpq(-1, 4), mpq(-1, 4)))
    for cover_text in ("1;2", "1,2"):
        assert check_dual_bt(p, parse_cover(cover_text, 2)).passed
