"""Shared fixtures: canonical bodies and deterministic random body generators."""

from __future__ import annotations

import random
from itertools import product

import pytest
from gmpy2 import mpq

from covercert.polytope import Polytope


def cross_polytope(n: int, lam=1) -> Polytope:
    verts = []
    for i in range(n):
        for sign in (1, -1):
            e = [mpq(0)] * n
            e[i] = sign * mpq(lam)
            verts.append(e)
    return Polytope.from_vertices(verts)


def cube(n: int, half=1) -> Polytope:
    return Polytope.from_vertices(
        [[mpq(half) * s for s in signs] for signs in product([1, -1], repeat=n)]
    )


def simplex(n: int) -> Polytope:
    verts = [[mpq(0)] * n]
    for i in range(n):
        e = [mpq(0)] * n
        e[i] = mpq(1)
        verts.append(e)
    return Polytope.from_vertices(verts)


def random_rational(rng: random.Random, lo=-1, hi=1, denom=64) -> mpq:
    return mpq(rng.randint(lo * denom, hi * denom), denom)


def random_spiky_body(n: int, rng: random.Random, extra_vertices: int = 6) -> Polytope:
    """Random rational V-polytope with 0 interior: random vertices in
    [-1, 1]^n plus +-rho e_i spikes, rho in [1/4, 1]."""
    verts = []
    for _ in range(extra_vertices):
        verts.append([random_rational(rng) for _ in range(n)])
    for i in range(n):
        for sign in (1, -1):
            rho = mpq(rng.randint(16, 64), 64)  # in [1/4, 1]
            e = [mpq(0)] * n
            e[i] = sign * rho
            verts.append(e)
    return Polytope.from_vertices(verts)


def random_box(n: int, rng: random.Random) -> Polytope:
    """Random centered coordinate box with rational half-widths."""
    halves = [mpq(rng.randint(8, 64), 32) for _ in range(n)]
    return Polytope.from_vertices(
        [[h * s for h, s in zip(halves, signs)] for signs in product([1, -1], repeat=n)]
    )


@pytest.fixture
def rng():
    return random.Random(20260823)
