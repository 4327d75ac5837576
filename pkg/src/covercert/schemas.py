"""Pydantic request/response models for the HTTP service.

Rational numbers travel as strings ("p" or "p/q") to avoid precision loss;
floats are plain JSON numbers.  Cover parts and sigma indices are 1-based on
the wire, matching the text grammar "1,2;1,3;2,3".
"""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class HalfspaceModel(BaseModel):
    a: List[str]
    b: str


class BodyModel(BaseModel):
    """Polytope in V- and/or H-representation with rational coordinates."""

    dim: Optional[int] = None
    vertices: Optional[List[List[str]]] = None
    halfspaces: Optional[List[HalfspaceModel]] = None


class WeightedCoverModel(BaseModel):
    parts: List[List[int]]  # 1-based indices
    weights: List[str]
    s: str
    n: Optional[int] = None


class SystemModel(BaseModel):
    vectors: List[List[float]]
    weights: List[float]


class AtomModel(BaseModel):
    u: List[float]
    mass: float


class MeasureModel(BaseModel):
    atoms: List[AtomModel]


class DensityModel(BaseModel):
    """A log-concave density: gaussian, exp_minkowski, or exp_l1."""

    variant: str
    dim: Optional[int] = None
    q_matrix: Optional[List[List[float]]] = None
    body: Optional[BodyModel] = None
    scale: float = 1.0


class QuadratureModel(BaseModel):
    scheme: str = "tensor-grid"
    points_per_axis: int = 64
    total_points: int = 65536
    cutoff: float = 1e-4
    truncation_radius: Optional[float] = None


# -- requests ----------------------------------------------------------------


class VolumeRequest(BaseModel):
    body: BodyModel


class CheckRequest(BaseModel):
    body: BodyModel
    cover: Optional[str] = None  # text grammar, for bt/dual-bt
    weighted: Optional[WeightedCoverModel] = None  # for weighted variants
    system: Optional[SystemModel] = None  # for ball/dual-ball
    tol: float = 1e-6


class CertifyRequest(BaseModel):
    body: BodyModel
    tol: float = 1e-9


class CoversRequest(BaseModel):
    n: int = Field(ge=1)
    s: Optional[int] = None  # required unless irreducible
    max_parts: Optional[int] = None
    irreducible: bool = False
    budget: Optional[int] = None


class SolveWeightsRequest(BaseModel):
    parts: List[List[int]]  # 1-based
    s: str
    n: Optional[int] = None


class IntegrateRequest(BaseModel):
    density: DensityModel
    sigma: Optional[List[int]] = None  # 1-based
    quadrature: QuadratureModel = QuadratureModel()
    power: int = 1


class FunctionalCheckRequest(BaseModel):
    density: DensityModel
    weighted: WeightedCoverModel
    quadrature: QuadratureModel = QuadratureModel()
    tol: float = 1e-6


class PointwiseRequest(BaseModel):
    density: DensityModel
    weighted: WeightedCoverModel
    samples: int = 10_000
    tol: float = 1e-10


class GaussianExtremalRequest(BaseModel):
    weighted: WeightedCoverModel
    tol: float = 1e-2


class JohnRequest(BaseModel):
    system: SystemModel
    tol: float = 1e-9


class RenormalizeRequest(BaseModel):
    measure: MeasureModel


class DiscretizeRequest(BaseModel):
    density: str = "uniform"  # named built-in
    n: int = 2
    eps: float
    params: Dict[str, object] = {}
    renormalize: bool = True


# -- responses ----------------------------------------------------------------


class VolumeResponse(BaseModel):
    volume: str
    decimal: float


class CoversResponse(BaseModel):
    covers: List[str]
    count: int


class WeightsResponse(BaseModel):
    found: bool
    cover: Optional[WeightedCoverModel] = None


class IntegrateResponse(BaseModel):
    estimate: float
    closed_form: Optional[float] = None
    exact: Optional[str] = None


class JohnResponse(BaseModel):
    passed: bool = Field(alias="pass")
    residual: float
    trace: float
    trace_residual: float

    model_config = {"populate_by_name": True}


class MeasureResponse(BaseModel):
    measure: MeasureModel
    residual: float
    total_mass: float


class HealthResponse(BaseModel):
    status: str
    version: str
