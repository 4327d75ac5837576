import math

import pytest
from gmpy2 import mpq

from conftest import cross_polytope, cube, random_spiky_body
from covercert.certifier import (
    box_form,
    box_volume,
    certify,
    section_volume_table,
    verify_certificate,
)
from covercert.errors import ZeroNotInterior
from covercert.rationals import factorial

TOL = 1e-9


def test_cross_polytope_is_its_own_certificate():
    for n in (2, 3, 4):
        cert = certify(cross_polytope(n))
        assert all(abs(lam - 1.0) <= 1e-9 for lam in cert.lambdas)
        assert cert.volume_residual <= TOL
        # equality case: every slack vanishes
        assert all(abs(s) <= 1e-9 for s in cert.section_slacks.values())


def test_cube_certificate_lambdas():
    cert = certify(cube(2))
    assert all(abs(lam - math.sqrt(2)) <= 1e-9 for lam in cert.lambdas)


def test_scaled_cross_polytope_recovers_scales():
    p = cross_polytope(3).linear_image(
        [[mpq(2), 0, 0], [0, mpq(1, 2), 0], [0, 0, mpq(3)]]
    )
    cert = certify(p)
    assert sorted(round(l, 9) for l in cert.lambdas) == [0.5, 2.0, 3.0]


def test_verify_matches_certify(rng):
    for n in (2, 3):
        for _ in range(3):
            p = random_spiky_body(n, rng)
            sections = section_volume_table(p)
            cert = certify(p, sections=sections)
            report = verify_certificate(p, cert, TOL, sections=sections)
            assert report.passed
            assert report.volume_residual <= TOL
            assert report.min_slack >= -TOL


def test_requires_zero_interior():
    with pytest.raises(ZeroNotInterior):
        certify(cube(2).translate((5, 5)))


def test_box_chain():
    # the proof's intermediate box: |B| = n! |K| and cross volume = |K|
    p = cube(2)
    cert = certify(p)
    assert abs(box_volume(cert) - float(factorial(2) * p.volume())) <= 1e-8
    assert box_form(cert) == tuple((0.0, t) for t in cert.t)


def test_certificate_serialization():
    cert = certify(cross_polytope(2))
    d = cert.to_dict()
    assert set(d) == {"lambdas", "volume_residual", "min_slack", "per_sigma"}
    assert "1" in d["per_sigma"] and "2" in d["per_sigma"]


def test_tampered_certificate_fails_verification():
    p = cube(2)
    cert = certify(p)
    cert.lambdas = tuple(l * 1.01 for l in cert.lambdas)
    report = verify_certificate(p, cert, TOL)
    assert not report.passed
