"""Uniform covers of [n]: verification, enumeration, irreducibility, weights.

A cover is a multiset of nonempty subsets of {1..n} (0-based internally,
1-based on every external surface).  It is s-uniform when every coordinate
lies in exactly s parts.  Weighted covers generalize this to rational weights
c_i with per-coordinate sums s, realizing s*I_n = sum c_i P_i for coordinate
subspaces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

from gmpy2 import mpq

from .errors import BudgetExceeded, NotUniform
from .rationals import rat, rat_str

#: default cap on the number of covers an enumeration may emit
DEFAULT_ENUM_BUDGET = 2_000_000


def _canonical_parts(parts) -> tuple:
    norm = []
    for p in parts:
        t = tuple(sorted(set(int(i) for i in p)))
        if not t:
            raise ValueError("cover parts must be nonempty")
        norm.append(t)
    return tuple(sorted(norm, key=lambda t: (len(t), t)))


@dataclass(frozen=True)
class Cover:
    """Multiset of coordinate index sets, kept in canonical sorted form."""

    n: int
    parts: tuple

    def __init__(self, n: int, parts):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "parts", _canonical_parts(parts))
        for p in self.parts:
            if p[0] < 0 or p[-1] >= self.n:
                raise ValueError(f"part {p} out of range for n={self.n}")

    @property
    def r(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> list:
        counts = [0] * self.n
        for p in self.parts:
            for j in p:
                counts[j] += 1
        return counts

    def uniformity(self) -> Optional[int]:
        counts = self.multiplicities()
        s = counts[0]
        if s >= 1 and all(c == s for c in counts):
            return s
        return None

    def concat(self, other: "Cover") -> "Cover":
        if self.n != other.n:
            raise ValueError("covers live on different ground sets")
        return Cover(self.n, self.parts + other.parts)

    def permute(self, perm: Sequence[int]) -> "Cover":
        """Relabel coordinates: index j becomes perm[j]."""
        return Cover(self.n, [[perm[j] for j in p] for p in self.parts])

    def __str__(self) -> str:
        return format_cover(self)


def parse_cover(text: str, n: Optional[int] = None) -> Cover:
    """Parse "1,2;1,3;2,3" (1-based indices, ';'-separated parts)."""
    parts = []
    for chunk in text.strip().split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        idx = [int(t) - 1 for t in chunk.split(",")]
        if any(i < 0 for i in idx):
            raise ValueError(f"cover indices are 1-based, got part {chunk!r}")
        parts.append(idx)
    if not parts:
        raise ValueError("empty cover spec")
    if n is None:
        n = 1 + max(max(p) for p in parts)
    return Cover(n, parts)


def format_cover(c: Cover) -> str:
    return ";".join(",".join(str(i + 1) for i in p) for p in c.parts)


def uniformity(c: Cover) -> Optional[int]:
    return c.uniformity()


def enumerate_uniform_covers(
    n: int,
    s: int,
    max_parts: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> Iterator[Cover]:
    """Yield every s-uniform cover of [n] with at most max_parts parts.

    Each multiset is emitted exactly once, in canonical order.  The search
    walks subsets largest-first with multiplicity pruning; once only the
    singleton block remains the completion is forced, which collapses the
    deepest n levels of the tree.  Raises BudgetExceeded past `budget`.
    """
    if n < 1 or s < 1 or max_parts < 1:
        return
    subsets = []
    for size in range(n, 1, -1):
        for c in combinations(range(n), size):
            subsets.append(c)
    # singletons are handled by the forced tail
    N = len(subsets)
    counts = [0] * n
    stack: list = []
    emitted = 0

    def emit():
        nonlocal emitted
        tail = []
        used = len(stack)
        for j in range(n):
            need = s - counts[j]
            if used + need > max_parts:
                return None
            used += need
            tail.extend([(j,)] * need)
        emitted += 1
        if emitted > budget:
            raise BudgetExceeded(
                f"more than {budget} covers for n={n}, s={s}, max_parts={max_parts}"
            )
        return Cover(n, list(stack) + tail)

    def dfs(i: int) -> Iterator[Cover]:
        if i == N:
            c = emit()
            if c is not None:
                yield c
            return
        # forced-tail feasibility: coordinates with no later subset must be
        # completable by singletons alone, which is always possible, so the
        # only prunes are the budget ones below.
        deficit = sum(s - c for c in counts)
        if deficit == 0:
            c = emit()
            if c is not None:
                yield c
            return
        if len(stack) >= max_parts:
            # only the forced singleton tail could finish, and it needs parts
            return
        sub = subsets[i]
        mmax = min(s - counts[j] for j in sub)
        mmax = min(mmax, max_parts - len(stack))
        for mult in range(mmax, -1, -1):
            for j in sub:
                counts[j] += mult
            stack.extend([sub] * mult)
            yield from dfs(i + 1)
            if mult:
                del stack[-mult:]
            for j in sub:
                counts[j] -= mult

    yield from dfs(0)


def _submultisets(mult_vector):
    """All proper nonempty sub-multiplicity vectors."""
    ranges = [range(m + 1) for m in mult_vector]
    full = tuple(mult_vector)
    for combo in product(*ranges):
        if any(combo) and combo != full:
            yield combo


def is_irreducible(c: Cover) -> bool:
    """True iff no proper nonempty sub-multiset of parts is a uniform cover."""
    s = c.uniformity()
    if s is None:
        raise NotUniform(f"cover {c} is not uniform")
    distinct = sorted(set(c.parts), key=lambda t: (len(t), t))
    mult = [c.parts.count(p) for p in distinct]
    for combo in _submultisets(mult):
        counts = [0] * c.n
        for p, m in zip(distinct, combo):
            for j in p:
                counts[j] += m
        t = counts[0]
        if t >= 1 and all(v == t for v in counts):
            return False
    return True


def decompose_irreducible(c: Cover) -> list:
    """Split a uniform cover into irreducible uniform covers (constructive)."""
    s = c.uniformity()
    if s is None:
        raise NotUniform(f"cover {c} is not uniform")
    pieces = []
    remaining = list(c.parts)
    while remaining:
        rem = Cover(c.n, remaining)
        if is_irreducible(rem):
            pieces.append(rem)
            break
        distinct = sorted(set(rem.parts), key=lambda t: (len(t), t))
        mult = [rem.parts.count(p) for p in distinct]
        best = None
        for combo in _submultisets(mult):
            counts = [0] * c.n
            size = sum(combo)
            for p, m in zip(distinct, combo):
                for j in p:
                    counts[j] += m
            t = counts[0]
            if t >= 1 and all(v == t for v in counts):
                if best is None or size < best[0]:
                    best = (size, combo)
        assert best is not None
        _, combo = best
        piece_parts = []
        for p, m in zip(distinct, combo):
            piece_parts.extend([p] * m)
        pieces.append(Cover(c.n, piece_parts))
        for p in piece_parts:
            remaining.remove(p)
    return pieces


def enumerate_irreducible(
    n: int,
    *,
    s_max: Optional[int] = None,
    max_parts: Optional[int] = None,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> list:
    """All irreducible uniform covers of [n] within the enumeration budget.

    Finiteness of the full list is known but without an effective bound, so
    the search is capped at s <= s_max (default n) and max_parts (default
    2^n - 1); both are overridable.
    """
    if s_max is None:
        s_max = n
    if max_parts is None:
        max_parts = 2**n - 1
    out = []
    for s in range(1, s_max + 1):
        for c in enumerate_uniform_covers(n, s, max_parts, budget=budget):
            if is_irreducible(c):
                out.append(c)
    return out


# ---------------------------------------------------------------------------
# weighted covers


@dataclass(frozen=True)
class WeightedCover:
    """Coordinate subspaces with positive rational weights, sum_j = s."""

    n: int
    parts: tuple
    weights: tuple
    s: mpq

    def __init__(self, n, parts, weights, s):
        parts = tuple(tuple(sorted(set(int(i) for i in p))) for p in parts)
        if len(parts) != len(tuple(weights)):
            raise ValueError("parts and weights length mismatch")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "weights", tuple(rat(w) for w in weights))
        object.__setattr__(self, "s", rat(s))

    @classmethod
    def from_cover(cls, c: Cover) -> "WeightedCover":
        s = c.uniformity()
        if s is None:
            raise NotUniform(f"cover {c} is not uniform")
        return cls(c.n, c.parts, [mpq(1)] * len(c.parts), mpq(s))

    @property
    def dims(self) -> tuple:
        return tuple(len(p) for p in self.parts)

    def to_dict(self) -> dict:
        return {
            "parts": [[i + 1 for i in p] for p in self.parts],
            "weights": [rat_str(w) for w in self.weights],
            "s": rat_str(self.s),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "WeightedCover":
        parts = [[int(i) - 1 for i in p] for p in data["parts"]]
        n = data.get("n", 1 + max(max(p) for p in parts))
        return cls(n, parts, [rat(w) for w in data["weights"]], rat(data["s"]))

    @classmethod
    def from_json(cls, text: str) -> "WeightedCover":
        return cls.from_dict(json.loads(text))


def verify_weighted(wc: WeightedCover) -> bool:
    """Exact check of the per-coordinate sums and the trace identity."""
    if wc.s <= 0 or any(w <= 0 for w in wc.weights):
        return False
    for j in range(wc.n):
        total = sum(
            (w for p, w in zip(wc.parts, wc.weights) if j in p), mpq(0)
        )
        if total != wc.s:
            return False
    trace = sum((w * len(p) for p, w in zip(wc.parts, wc.weights)), mpq(0))
    assert trace == wc.n * wc.s  # implied by the column sums
    return True


def solve_weights(parts, s, n: Optional[int] = None):
    """Positive rational weights with per-coordinate sums s, if any.

    Among feasible solutions, maximizes the minimum weight (exact LP), then
    breaks ties lexicographically (smallest c_1, then c_2, ...).  Returns a
    WeightedCover or None.
    """
    from .linprog import LPStatus, solve_lp

    parts = [tuple(sorted(set(int(i) for i in p))) for p in parts]
    if not parts:
        return None
    s = rat(s)
    if n is None:
        n = 1 + max(max(p) for p in parts)
    r = len(parts)
    A_eq = []
    b_eq = []
    for j in range(n):
        A_eq.append([mpq(1) if j in p else mpq(0) for p in parts] + [mpq(0)])
        b_eq.append(s)
    # stage 1: maximize t subject to c_i - t >= 0, c >= 0, t >= 0
    A_ub = []
    b_ub = []
    for i in range(r):
        row = [mpq(0)] * (r + 1)
        row[i] = mpq(-1)
        row[r] = mpq(1)
        A_ub.append(row)
        b_ub.append(mpq(0))
    obj = [mpq(0)] * r + [mpq(1)]
    res = solve_lp(obj, A_ub, b_ub, A_eq, b_eq, maximize=True, nonneg=True)
    if res.status is not LPStatus.OPTIMAL or res.value <= 0:
        return None
    t_star = res.value
    # stages 2..: lexicographic minimization with min-weight pinned at t*
    A_lex = [list(row) for row in A_ub]
    b_lex = list(b_ub)
    A_eq_lex = [list(row) for row in A_eq]
    b_eq_lex = list(b_eq)
    row = [mpq(0)] * (r + 1)
    row[r] = mpq(1)
    A_eq_lex.append(row)
    b_eq_lex.append(t_star)
    weights = []
    for i in range(r):
        obj = [mpq(0)] * (r + 1)
        obj[i] = mpq(1)
        res = solve_lp(obj, A_lex, b_lex, A_eq_lex, b_eq_lex, nonneg=True)
        assert res.status is LPStatus.OPTIMAL
        ci = res.x[i]
        weights.append(ci)
        pin = [mpq(0)] * (r + 1)
        pin[i] = mpq(1)
        A_eq_lex.append(pin)
        b_eq_lex.append(ci)
    return WeightedCover(n, parts, weights, s)
