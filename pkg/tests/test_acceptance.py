"""Acceptance suite: one criterion per test, one printed pass/fail line each.

Tolerances are pinned constants; exact criteria use zero tolerance (rational
equality).  Bodies and section tables are shared across criteria through
session fixtures to stay inside the runtime budgets.
"""

import random
from itertools import combinations

import numpy as np
import pytest
from gmpy2 import mpq

from conftest import cross_polytope, cube, random_box, random_spiky_body
from covercert.certifier import certify, section_volume_table, verify_certificate
from covercert.covers import WeightedCover, enumerate_uniform_covers
from covercert.functional import (
    QuadratureSpec,
    check_dual_functional,
    exp_l1,
    exp_minkowski,
    exp_norm_integral,
    gaussian,
    gaussian_bl_extremal_check,
    integrate,
    pointwise_lemma_check,
)
from covercert.inequalities import (
    check_bt,
    check_dual_bt,
    check_lw,
    check_meyer,
    meyer_constant,
)
from covercert.isotropic import (
    angle_system,
    check_dual_ball,
    john_check,
    renormalize_to_isotropic,
    standard_system,
    SphereMeasure,
)
from covercert.rationals import factorial, qpow

# pinned tolerances; exact criteria compare rationals with ==, no tolerance
CERT_TOL = 1e-9
QUAD_REL_TOL = 1e-2
FUNC_EQ_TOL = 1e-6
POINTWISE_TOL = 1e-10
GAUSS_REL_TOL = 1e-2
GAUSS_REVERSE_LB = 0.999
ISO_RESIDUAL_TOL = 1e-12
ISO_RENORM_TOL = 1e-11
ISO_AGREE_TOL = 1e-9
ISO_FLOAT_TOL = 1e-6


def _line(capsys, idx: int, ok: bool, text: str) -> None:
    with capsys.disabled():
        print(f"criterion {idx:2d}: {'PASS' if ok else 'FAIL'} - {text}", flush=True)


@pytest.fixture(scope="session")
def suite_bodies():
    """Criterion-2 body suite: 100 spiky bodies per n in {2,3,4}."""
    rng = random.Random(424242)
    return {n: [random_spiky_body(n, rng) for _ in range(100)] for n in (2, 3, 4)}


@pytest.fixture(scope="session")
def suite_sections(suite_bodies):
    """Exact section tables, computed once and shared (criteria 2 and 5)."""
    cache = {}

    def get(n, i):
        if (n, i) not in cache:
            cache[(n, i)] = section_volume_table(suite_bodies[n][i])
        return cache[(n, i)]

    return get


@pytest.fixture(scope="session")
def suite_covers():
    """All uniform covers with s <= 2 and at most 6 parts, per n."""
    out = {}
    for n in (2, 3, 4):
        covers = []
        for s in (1, 2):
            covers.extend(enumerate_uniform_covers(n, s, 6))
        out[n] = covers
    return out


def test_criterion_1_dual_bt_sharpness(capsys):
    """B1^n is an equality case of the dual inequality for every uniform
    cover: slack exactly 1, zero tolerance.  s ranges over the enumerable
    regime (s <= 4); parts capped at 2n."""
    ok = True
    for n in (2, 3, 4, 5):
        k = cross_polytope(n)
        vol = k.volume()
        # |B1 cap F_sigma| depends only on |sigma|; exact values, no shortcut
        sections = {}
        for r in range(1, n + 1):
            for sigma in combinations(range(n), r):
                sections[sigma] = k.section_volume(sigma)
        nfact_pow = {}
        vol_pow = {}
        for s in range(1, min(n, 4) + 1):
            nfact_pow[s] = qpow(mpq(factorial(n)), s)
            vol_pow[s] = qpow(vol, s)
        for s in range(1, min(n, 4) + 1):
            target = vol_pow[s] * nfact_pow[s]  # = prod |sigma|! |K cap F_sigma|
            for c in enumerate_uniform_covers(n, s, 2 * n):
                rhs = mpq(1)
                for sigma in c.parts:
                    rhs *= factorial(len(sigma)) * sections[sigma]
                if rhs != target:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            break
    # spot-check through the public checker as well
    if ok:
        for n in (2, 3, 4, 5):
            rep = check_dual_bt(
                cross_polytope(n),
                next(iter(enumerate_uniform_covers(n, 1, 2 * n))),
            )
            ok = ok and rep.slack == 1
    _line(capsys, 1, ok, "dual BT slack exactly 1 on B1^n, n=2..5, all covers")
    assert ok


def test_criterion_2_dual_bt_property_suite(capsys, suite_bodies, suite_covers, suite_sections):
    """100 random spiky bodies per n in {2,3,4}; every s<=2 cover with at
    most 6 parts: check_dual_bt passes exactly."""
    ok = True
    for n in (2, 3, 4):
        covers = suite_covers[n]
        for i, body in enumerate(suite_bodies[n]):
            cache = dict(suite_sections(n, i))
            for c in covers:
                rep = check_dual_bt(body, c, cache=cache)
                if not (rep.passed and rep.exact):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            break
    _line(capsys, 2, ok, "dual BT exact pass on 300 random bodies, all s<=2 covers")
    assert ok


def test_criterion_3_bt_property_suite(capsys, suite_bodies, suite_covers):
    """Same bodies and covers through the primal inequality, plus exact
    Loomis-Whitney equality on 20 random coordinate boxes."""
    ok = True
    for n in (2, 3, 4):
        covers = suite_covers[n]
        for body in suite_bodies[n]:
            cache = {}
            for c in covers:
                rep = check_bt(body, c, cache=cache)
                if not (rep.passed and rep.exact):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            break
    rng = random.Random(77)
    for _ in range(10):
        for n in (2, 3):
            if check_lw(random_box(n, rng)).slack != 1:
                ok = False
    _line(capsys, 3, ok, "BT exact pass on suite; LW equality on 20 boxes")
    assert ok


def test_criterion_4_meyer_constant(capsys):
    """(1/(n!)^(n-1)) * ((n-1)!)^n equals n!/n^n as exact rationals."""
    ok = all(
        qpow(mpq(factorial(n - 1)), n) / qpow(mpq(factorial(n)), n - 1)
        == mpq(factorial(n), n**n)
        == meyer_constant(n)
        for n in range(1, 13)
    )
    _line(capsys, 4, ok, "Meyer constant identity exact for n <= 12")
    assert ok


def test_criterion_5_certifier(capsys, suite_bodies, suite_sections):
    """certify + verify_certificate on the criterion-2 suite: volume residual
    <= 1e-9 and min section slack >= -1e-9; all B1^n slacks <= 1e-9."""
    ok = True
    for n in (2, 3, 4):
        for i, body in enumerate(suite_bodies[n]):
            sections = suite_sections(n, i)
            cert = certify(body, tol=CERT_TOL, sections=sections)
            report = verify_certificate(body, cert, CERT_TOL, sections=sections)
            if not (
                report.passed
                and report.volume_residual <= CERT_TOL
                and report.min_slack >= -CERT_TOL
            ):
                ok = False
                break
        if not ok:
            break
    if ok:
        for n in (2, 3, 4):
            cert = certify(cross_polytope(n), tol=CERT_TOL)
            if cert.volume_residual > CERT_TOL or any(
                abs(s) > CERT_TOL for s in cert.section_slacks.values()
            ):
                ok = False
    _line(capsys, 5, ok, "certificates verified on suite; B1^n slacks <= 1e-9")
    assert ok


def test_criterion_6_functional_identity(capsys):
    """Exact closed form of the exponential-norm integral on 50 random
    bodies (n <= 3); tensor-grid quadrature within 1% at 64 points/axis."""
    rng = random.Random(99)
    ok = True
    for j in range(50):
        n = 2 if j % 2 == 0 else 3
        body = random_spiky_body(n, rng)
        if exp_norm_integral(body) != factorial(n) * body.volume():
            ok = False
            break
        res = integrate(exp_minkowski(body), q=QuadratureSpec(points_per_axis=64))
        if abs(res.estimate / float(res.exact) - 1.0) > QUAD_REL_TOL:
            ok = False
            break
    _line(capsys, 6, ok, "exp-norm integral exact; quadrature within 1%")
    assert ok


def test_criterion_7_dual_functional_equality(capsys):
    """e^{-|x|_1} with the singleton cover: both sides 2^n, slack within
    1e-6 of 1 for n in {1,2,3}."""
    ok = True
    for n in (1, 2, 3):
        wc = WeightedCover(n, [[i] for i in range(n)], [mpq(1)] * n, mpq(1))
        rep = check_dual_functional(exp_l1(n), wc)
        if not rep.passed or abs(rep.slack - 1.0) > FUNC_EQ_TOL:
            ok = False
        if abs(rep.lhs - 2.0**n * 1.0) > 1e-9 * 2.0**n:
            ok = False
    _line(capsys, 7, ok, "dual functional equality 2^n = 2^n, n = 1..3")
    assert ok


def test_criterion_8_pointwise_lemma(capsys):
    """10^4 sampled decompositions per configuration, 6 configurations,
    zero violations beyond 1e-10."""

    def singletons(n):
        return WeightedCover(n, [[i] for i in range(n)], [mpq(1)] * n, mpq(1))

    complement3 = WeightedCover(
        3, [[1, 2], [0, 2], [0, 1]], [mpq(1)] * 3, mpq(2)
    )
    configs = [
        (exp_l1(2), singletons(2)),
        (exp_l1(3), complement3),
        (gaussian(np.eye(2)), singletons(2)),
        (gaussian(np.diag([1.0, 2.0, 3.0])), complement3),
        (exp_minkowski(cross_polytope(2)), singletons(2)),
        (exp_minkowski(cube(3)), complement3),
    ]
    ok = True
    for f, wc in configs:
        rep = pointwise_lemma_check(f, wc, samples=10_000, tol=POINTWISE_TOL)
        if not rep.passed:
            ok = False
    _line(capsys, 8, ok, "pointwise lemma: zero violations, 6 configurations")
    assert ok


def test_criterion_9_gaussian_extremality(capsys):
    """f_i = exp(-pi |x|^2) on geometric data: direct sides within 1% of 1,
    reverse feasible-decomposition bound >= 0.999."""

    def singletons(n):
        return WeightedCover(n, [[i] for i in range(n)], [mpq(1)] * n, mpq(1))

    configs = [
        singletons(2),
        singletons(3),
        WeightedCover(3, [[1, 2], [0, 2], [0, 1]], [mpq(1)] * 3, mpq(2)),
        WeightedCover(2, [[0], [1], [0, 1]], [mpq(1, 2)] * 3, mpq(1)),
    ]
    ok = True
    for wc in configs:
        rep = gaussian_bl_extremal_check(wc, tol=GAUSS_REL_TOL)
        if not rep.passed:
            ok = False
        if abs(rep.direct_lhs / rep.direct_rhs - 1.0) > GAUSS_REL_TOL:
            ok = False
        if rep.reverse_lower_bound < GAUSS_REVERSE_LB:
            ok = False
    _line(capsys, 9, ok, "Gaussian extremality within 1%; reverse bound >= 0.999")
    assert ok


def test_criterion_10_isotropic_lab(capsys):
    ok = True
    # 120-degree triple residual
    triple = angle_system([90, 210, 330], 2 / 3)
    if john_check(triple, ISO_RESIDUAL_TOL).residual >= ISO_RESIDUAL_TOL:
        ok = False
    # renormalization on random 10-atom measures
    gen = np.random.default_rng(5)
    for _ in range(10):
        vs = gen.normal(size=(10, 3))
        vs /= np.linalg.norm(vs, axis=1)[:, None]
        m = SphereMeasure(3, list(zip(vs, gen.uniform(0.1, 1.0, 10))))
        if renormalize_to_isotropic(m).residual() >= ISO_RENORM_TOL:
            ok = False
    # agreement with the exact Meyer check at the coordinate system
    for n in (2, 3):
        body = cross_polytope(n)
        ball = check_dual_ball(body, standard_system(n))
        meyer = check_meyer(body)
        if abs(ball.lhs / float(meyer.lhs) - 1.0) > ISO_AGREE_TOL:
            ok = False
        if abs(ball.rhs / float(meyer.rhs) - 1.0) > ISO_AGREE_TOL:
            ok = False
    # dual Ball on 50 random centered polygons
    rng = random.Random(123)
    for _ in range(50):
        p = random_spiky_body(2, rng)
        if not check_dual_ball(p, triple, tol=ISO_FLOAT_TOL).passed:
            ok = False
    _line(capsys, 10, ok, "isotropic lab: residuals, Meyer agreement, dual Ball")
    assert ok
