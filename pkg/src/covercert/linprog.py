"""Exact rational linear programming via a dense two-phase simplex.

Everything runs on gmpy2.mpq, so feasibility, optimality and unboundedness
verdicts are exact.  Bland's rule guarantees termination.  Problem sizes in
this package are tiny (tens of variables and constraints), so no effort is
spent on sparsity or revised-simplex bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from gmpy2 import mpq

from .rationals import rat


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: LPStatus
    x: Optional[tuple]  # values of the original variables
    value: Optional[mpq]  # objective at x (in the caller's orientation)


def solve_lp(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    *,
    maximize: bool = False,
    nonneg: bool = False,
) -> LPResult:
    """Solve min (or max) c.x subject to A_ub x <= b_ub and A_eq x = b_eq.

    Variables are free unless ``nonneg`` is set.  All data is coerced to mpq.
    """
    n = len(c)
    c = [rat(v) for v in c]
    if maximize:
        c = [-v for v in c]

    # Map original variables to standard-form columns (x >= 0).
    # Free variable x_j = u_j - v_j with u, v >= 0.
    if nonneg:
        ncols = n
        def expand(row):
            return [rat(v) for v in row]
        cost = list(c)
    else:
        ncols = 2 * n
        def expand(row):
            out = []
            for v in row:
                v = rat(v)
                out.append(v)
                out.append(-v)
            return out
        cost = []
        for v in c:
            cost.append(v)
            cost.append(-v)

    rows = []
    rhs = []
    n_slack = len(A_ub)
    for i, row in enumerate(A_ub):
        r = expand(row) + [mpq(0)] * n_slack
        r[ncols + i] = mpq(1)
        rows.append(r)
        rhs.append(rat(b_ub[i]))
    for i, row in enumerate(A_eq):
        rows.append(expand(row) + [mpq(0)] * n_slack)
        rhs.append(rat(b_eq[i]))
    cost = cost + [mpq(0)] * n_slack

    status, x_std = _two_phase(rows, rhs, cost)
    if status is not LPStatus.OPTIMAL:
        return LPResult(status, None, None)

    if nonneg:
        x = tuple(x_std[:n])
    else:
        x = tuple(x_std[2 * j] - x_std[2 * j + 1] for j in range(n))
    value = sum((ci * xi for ci, xi in zip(c, x)), mpq(0))
    if maximize:
        value = -value
    return LPResult(LPStatus.OPTIMAL, x, value)


def _two_phase(rows, rhs, cost):
    """Simplex on min cost.y, rows.y = rhs, y >= 0. Returns (status, y)."""
    m = len(rows)
    N = len(cost)
    # Normalize to rhs >= 0.
    T = []
    for i in range(m):
        if rhs[i] < 0:
            T.append([-v for v in rows[i]] + [-rhs[i]])
        else:
            T.append(list(rows[i]) + [rhs[i]])

    # Phase 1: artificial variable per row.
    for i in range(m):
        art = [mpq(0)] * m
        art[i] = mpq(1)
        T[i] = T[i][:N] + art + [T[i][N]]
    basis = [N + i for i in range(m)]
    z = [mpq(0)] * (N + m + 1)
    for i in range(m):
        for j in range(N + m + 1):
            z[j] -= T[i][j]
    for i in range(m):
        z[N + i] = mpq(0)  # reduced cost of basic artificials
    if _iterate(T, z, basis, N + m) is LPStatus.UNBOUNDED:  # cannot happen
        raise AssertionError("phase-1 unbounded")
    if -z[N + m] != 0:
        return LPStatus.INFEASIBLE, None

    # Drive artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] < N:
            keep.append(i)
            continue
        piv = next((j for j in range(N) if T[i][j] != 0), None)
        if piv is None:
            continue  # redundant row
        _pivot(T, z, basis, i, piv)
        keep.append(i)
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2: rebuild the cost row for the true objective.
    T = [row[:N] + [row[N + m]] for row in T]
    z = list(cost) + [mpq(0)]
    for i, bi in enumerate(basis):
        if z[bi] != 0:
            coef = z[bi]
            for j in range(N + 1):
                z[j] -= coef * T[i][j]
    status = _iterate(T, z, basis, N)
    if status is LPStatus.UNBOUNDED:
        return LPStatus.UNBOUNDED, None
    y = [mpq(0)] * N
    for i, bi in enumerate(basis):
        y[bi] = T[i][N]
    return LPStatus.OPTIMAL, y


def _iterate(T, z, basis, ncols):
    """Run simplex pivots (Bland's rule) until optimal or unbounded."""
    m = len(T)
    while True:
        enter = next((j for j in range(ncols) if z[j] < 0), None)
        if enter is None:
            return LPStatus.OPTIMAL
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            return LPStatus.UNBOUNDED
        _pivot(T, z, basis, leave, enter)


def _pivot(T, z, basis, row, col):
    piv = T[row][col]
    T[row] = [v / piv for v in T[row]]
    for i in range(len(T)):
        if i != row and T[i][col] != 0:
            coef = T[i][col]
            T[i] = [a - coef * b for a, b in zip(T[i], T[row])]
    if z[col] != 0:
        coef = z[col]
        for j in range(len(z)):
            z[j] -= coef * T[row][j]
    basis[row] = col
