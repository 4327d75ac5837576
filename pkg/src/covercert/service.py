"""FastAPI surface over the core package.

Every endpoint is a stateless wrapper: parse the pydantic request, call the
corresponding core operation, serialize its report.  Precondition and
geometry failures (CoverCertError and bad values) map to HTTP 422 with
{"error": <class>, "message": <detail>}; an inequality that simply fails
still returns 200 with "pass": false.
"""

from __future__ import annotations

import os

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, certifier, functional, inequalities, isotropic
from .covers import (
    DEFAULT_ENUM_BUDGET,
    WeightedCover,
    enumerate_irreducible,
    enumerate_uniform_covers,
    format_cover,
    parse_cover,
    solve_weights,
)
from .errors import CoverCertError
from .polytope import Polytope
from .rationals import rat_str
from .schemas import (
    CertifyRequest,
    CheckRequest,
    CoversRequest,
    DiscretizeRequest,
    FunctionalCheckRequest,
    GaussianExtremalRequest,
    HealthResponse,
    IntegrateRequest,
    IntegrateResponse,
    JohnRequest,
    JohnResponse,
    MeasureResponse,
    PointwiseRequest,
    RenormalizeRequest,
    SolveWeightsRequest,
    VolumeRequest,
    VolumeResponse,
    CoversResponse,
    WeightsResponse,
)

app = FastAPI(title="covercert", version=__version__)

CHECK_KINDS = (
    "bt",
    "dual-bt",
    "lw",
    "meyer",
    "weighted-bt",
    "weighted-dual-bt",
    "ball",
    "dual-ball",
)


@app.exception_handler(CoverCertError)
async def _domain_error(request: Request, exc: CoverCertError):
    return JSONResponse(
        status_code=422,
        content={"error": type(exc).__name__, "message": str(exc)},
    )


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError):
    return JSONResponse(
        status_code=422,
        content={"error": "ValueError", "message": str(exc)},
    )


def _body(model) -> Polytope:
    return Polytope.from_dict(model.model_dump(exclude_none=True))


def _weighted(model) -> WeightedCover:
    return WeightedCover.from_dict(model.model_dump(exclude_none=True))


def _system(model) -> isotropic.UnitVectorSystem:
    return isotropic.UnitVectorSystem.from_dict(model.model_dump())


def _density(model) -> functional.LogConcaveSpec:
    if model.variant == "gaussian":
        if model.q_matrix is None:
            raise ValueError("gaussian density needs q_matrix")
        return functional.gaussian(np.asarray(model.q_matrix))
    if model.variant == "exp_minkowski":
        if model.body is None:
            raise ValueError("exp_minkowski density needs a body")
        return functional.exp_minkowski(_body(model.body))
    if model.variant == "exp_l1":
        if model.dim is None:
            raise ValueError("exp_l1 density needs dim")
        return functional.exp_l1(model.dim, model.scale)
    raise ValueError(f"unknown density variant {model.variant!r}")


def _quadrature(model) -> functional.QuadratureSpec:
    return functional.QuadratureSpec(**model.model_dump())


@app.get("/health", response_model=HealthResponse)
def health():
    return {"status": "ok", "version": __version__}


@app.post("/volume", response_model=VolumeResponse)
def volume(req: VolumeRequest):
    v = _body(req.body).volume()
    return {"volume": rat_str(v), "decimal": float(v)}


@app.post("/check/{kind}")
def check(kind: str, req: CheckRequest) -> dict:
    if kind not in CHECK_KINDS:
        raise ValueError(f"unknown check kind {kind!r}; one of {CHECK_KINDS}")
    k = _body(req.body)
    if kind in ("bt", "dual-bt"):
        if req.cover is None:
            raise ValueError(f"check {kind} needs a cover")
        c = parse_cover(req.cover, k.dim)
        fn = inequalities.check_bt if kind == "bt" else inequalities.check_dual_bt
        return fn(k, c).to_dict()
    if kind == "lw":
        return inequalities.check_lw(k).to_dict()
    if kind == "meyer":
        return inequalities.check_meyer(k).to_dict()
    if kind in ("weighted-bt", "weighted-dual-bt"):
        if req.weighted is None:
            raise ValueError(f"check {kind} needs a weighted cover")
        wc = _weighted(req.weighted)
        fn = (
            inequalities.check_weighted_bt
            if kind == "weighted-bt"
            else inequalities.check_weighted_dual_bt
        )
        return fn(k, wc).to_dict()
    if req.system is None:
        raise ValueError(f"check {kind} needs a vector system")
    sys = _system(req.system)
    fn = isotropic.check_ball if kind == "ball" else isotropic.check_dual_ball
    return fn(k, sys, tol=req.tol).to_dict()


@app.post("/certify")
def certify(req: CertifyRequest) -> dict:
    k = _body(req.body)
    sections = certifier.section_volume_table(k)
    cert = certifier.certify(k, tol=req.tol, sections=sections)
    report = certifier.verify_certificate(k, cert, req.tol, sections=sections)
    return {
        "certificate": cert.to_dict(),
        "verification": report.to_dict(),
        "pass": report.passed,
    }


@app.post("/covers", response_model=CoversResponse)
def covers(req: CoversRequest):
    budget = req.budget or int(os.environ.get("COVERCERT_BUDGET", DEFAULT_ENUM_BUDGET))
    if req.irreducible:
        found = enumerate_irreducible(
            req.n, s_max=req.s, max_parts=req.max_parts, budget=budget
        )
    else:
        if req.s is None:
            raise ValueError("s is required unless irreducible")
        max_parts = req.max_parts if req.max_parts is not None else 2 * req.n
        found = enumerate_uniform_covers(req.n, req.s, max_parts, budget=budget)
    listing = [format_cover(c) for c in found]
    return {"covers": listing, "count": len(listing)}


@app.post("/covers/weights", response_model=WeightsResponse)
def covers_weights(req: SolveWeightsRequest):
    parts = [[i - 1 for i in p] for p in req.parts]
    wc = solve_weights(parts, req.s, req.n)
    if wc is None:
        return {"found": False, "cover": None}
    return {"found": True, "cover": wc.to_dict()}


@app.post("/functional/integrate", response_model=IntegrateResponse)
def functional_integrate(req: IntegrateRequest):
    f = _density(req.density)
    sigma = None if req.sigma is None else [i - 1 for i in req.sigma]
    res = functional.integrate(f, sigma, _quadrature(req.quadrature), power=req.power)
    return {
        "estimate": res.estimate,
        "closed_form": res.closed_form,
        "exact": None if res.exact is None else rat_str(res.exact),
    }


@app.post("/functional/check")
def functional_check(req: FunctionalCheckRequest) -> dict:
    rep = functional.check_dual_functional(
        _density(req.density),
        _weighted(req.weighted),
        _quadrature(req.quadrature),
        tol=req.tol,
    )
    return rep.to_dict()


@app.post("/functional/pointwise")
def functional_pointwise(req: PointwiseRequest) -> dict:
    rep = functional.pointwise_lemma_check(
        _density(req.density), _weighted(req.weighted), req.samples, tol=req.tol
    )
    return {
        "pass": rep.passed,
        "samples": rep.samples,
        "worst_violation": rep.worst_violation,
        "worst_intermediate": rep.worst_intermediate,
    }


@app.post("/functional/gaussian-extremal")
def functional_gaussian(req: GaussianExtremalRequest) -> dict:
    return functional.gaussian_bl_extremal_check(
        _weighted(req.weighted), tol=req.tol
    ).to_dict()


@app.post("/isotropic/john", response_model=JohnResponse)
def isotropic_john(req: JohnRequest):
    return isotropic.john_check(_system(req.system), req.tol).to_dict()


def _measure_response(m: isotropic.SphereMeasure) -> dict:
    return {
        "measure": m.to_dict(),
        "residual": m.residual(),
        "total_mass": m.total_mass,
    }


@app.post("/isotropic/renormalize", response_model=MeasureResponse)
def isotropic_renormalize(req: RenormalizeRequest):
    m = isotropic.SphereMeasure.from_dict(req.measure.model_dump())
    return _measure_response(isotropic.renormalize_to_isotropic(m))


@app.post("/isotropic/discretize", response_model=MeasureResponse)
def isotropic_discretize(req: DiscretizeRequest):
    density = isotropic.builtin_density(req.density, req.n, **req.params)
    m = isotropic.discretize_sphere_measure(density, req.eps, n=req.n)
    if req.renormalize:
        m = isotropic.renormalize_to_isotropic(m)
    return _measure_response(m)
