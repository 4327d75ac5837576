import pytest
from gmpy2 import mpq

from covercert.covers import (
    Cover,
    WeightedCover,
    decompose_irreducible,
    enumerate_irreducible,
    enumerate_uniform_covers,
    format_cover,
    is_irreducible,
    parse_cover,
    solve_weights,
    verify_weighted,
)
from covercert.errors import BudgetExceeded


def test_parse_and_format_roundtrip():
    c = parse_cover("1,2;1,3;2,3")
    assert c.n == 3
    assert c.uniformity() == 2
    assert format_cover(c) == "1,2;1,3;2,3"


def test_canonical_ordering_is_input_independent():
    a = Cover(3, [[2, 1], [0, 2], [0, 1]])
    b = Cover(3, [[0, 1], [1, 2], [0, 2]])
    assert a == b
    assert a.parts == b.parts


def test_uniformity_detection():
    assert Cover(2, [[0], [1]]).uniformity() == 1
    assert Cover(2, [[0], [0, 1]]).uniformity() is None
    assert Cover(3, [[0, 1, 2], [0, 1, 2]]).uniformity() == 2


def test_enumerate_small_counts():
    # n=2: s=1 gives {12} and {1;2}
    assert len(list(enumerate_uniform_covers(2, 1, 4))) == 2
    # n=1, s=1: the single cover "1"
    covers = list(enumerate_uniform_covers(1, 1, 2))
    assert [format_cover(c) for c in covers] == ["1"]


def test_enumerate_yields_only_uniform(rng):
    for c in enumerate_uniform_covers(4, 2, 6):
        assert c.uniformity() == 2


def test_enumerate_no_duplicates():
    seen = list(enumerate_uniform_covers(3, 2, 6))
    assert len(seen) == len(set(seen))


def test_enumerate_includes_complement_cover():
    target = Cover(3, [[1, 2], [0, 2], [0, 1]])
    assert target in set(enumerate_uniform_covers(3, 2, 3))


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        list(enumerate_uniform_covers(6, 3, 12, budget=10))


def test_irreducibility():
    assert is_irreducible(parse_cover("1,2;1,3;2,3"))
    # disjoint union of {12} with itself
    assert not is_irreducible(Cover(2, [[0, 1], [0, 1]]))
    assert not is_irreducible(Cover(2, [[0], [1], [0, 1]]))


def test_decompose_irreducible_recovers_parts():
    c = Cover(2, [[0], [1], [0, 1]])
    pieces = decompose_irreducible(c)
    assert all(is_irreducible(p) for p in pieces)
    merged = pieces[0]
    for p in pieces[1:]:
        merged = merged.concat(p)
    assert merged == c


def test_enumerate_irreducible_n2():
    found = {format_cover(c) for c in enumerate_irreducible(2)}
    assert found == {"1,2", "1;2"}


def test_weighted_cover_roundtrip():
    wc = WeightedCover(3, [[0, 1], [0, 2], [1, 2]], [mpq(1)] * 3, mpq(2))
    assert verify_weighted(wc)
    again = WeightedCover.from_dict(wc.to_dict())
    assert again.parts == wc.parts
    assert again.weights == wc.weights
    assert again.s == wc.s


def test_verify_weighted_rejects_bad_sums():
    wc = WeightedCover(2, [[0], [1]], [mpq(1), mpq(2)], mpq(1))
    assert not verify_weighted(wc)


def test_solve_weights_complement_cover():
    wc = solve_weights([[1, 2], [0, 2], [0, 1]], 2)
    assert wc is not None
    assert wc.weights == (mpq(1), mpq(1), mpq(1))
    assert verify_weighted(wc)


def test_solve_weights_fractional():
    # three parts covering [2] asymmetrically: {1}, {2}, {1,2} with s = 1
    wc = solve_weights([[0], [1], [0, 1]], 1)
    assert wc is not None
    assert verify_weighted(wc)
    assert all(w > 0 for w in wc.weights)


def test_solve_weights_infeasible():
    # single part missing an index can never cover with positive weight
    assert solve_weights([[0]], 1, n=2) is None


def test_solve_weights_deterministic():
    a = solve_weights([[0], [1], [0, 1]], 2)
    b = solve_weights([[0], [1], [0, 1]], 2)
    assert a.weights == b.weights
