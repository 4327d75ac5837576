"""Exact rational scalars and small helpers shared across the exact path.

All exact arithmetic in this package runs on ``gmpy2.mpq``, which keeps
numerator/denominator in canonical form (positive denominator, gcd 1) and is
substantially faster than ``fractions.Fraction`` for the pivot-heavy linear
algebra below.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

QQ = mpq

Vector = tuple  # tuple of mpq


def rat(x) -> mpq:
    """Coerce ints, strings like "p/q" or "p", Fractions and mpq to mpq."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, float):
        raise TypeError(f"refusing to coerce float {x!r} to an exact rational")
    return mpq(x)


def rat_str(x: mpq) -> str:
    """Serialize to the wire format: "p" or "p/q" decimal strings."""
    return str(mpq(x))


def vec(xs: Iterable) -> Vector:
    return tuple(rat(x) for x in xs)


def dot(a: Sequence, b: Sequence) -> mpq:
    s = mpq(0)
    for x, y in zip(a, b):
        s += x * y
    return s


def factorial(n: int) -> mpz:
    return mpz(math.factorial(n))


def qpow(base: mpq, exp: int) -> mpq:
    """base**exp for integer exp (negative allowed, base nonzero then)."""
    if exp >= 0:
        return mpq(base) ** exp
    return 1 / (mpq(base) ** (-exp))
