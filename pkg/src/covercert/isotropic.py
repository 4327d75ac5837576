"""Float-path applications of isotropic vector systems.

Everything here runs in floating point (general subspaces force irrational
orthonormal frames), so every report carries exact = False:

* John's condition I_n = sum c_i u_i (x) u_i and its residual
* the induced (n-1)-uniform cover of R^n by the hyperplanes u_i^perp
* Ball's projection inequality and its dual (discrete Li-Huang) form
* discretization of sphere measures on S^1/S^2 and renormalization of a
  discrete measure to exact isotropy via T^{-1/2}
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from .errors import (
    DegenerateMeasure,
    NotIsotropic,
    UnsupportedDimension,
    ZeroNotInterior,
)
from .inequalities import Factor, InequalityReport, meyer_constant
from .polytope import Polytope, general_section

DEFAULT_TOL = 1e-9

#: angular grid sizes backing the greedy net construction
GRID_S1 = 4096
GRID_S2 = 20000


@dataclass
class UnitVectorSystem:
    """Unit vectors u_i with positive weights c_i, candidate John system."""

    n: int
    vectors: np.ndarray  # shape (m, n)
    weights: np.ndarray  # shape (m,)

    def __post_init__(self):
        self.vectors = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float)
        if self.vectors.shape[1] != self.n:
            raise ValueError("vectors must be n-dimensional")
        if self.weights.shape != (self.vectors.shape[0],):
            raise ValueError("one weight per vector required")
        norms = np.linalg.norm(self.vectors, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValueError("vectors must be unit within 1e-12")
        if np.min(self.weights) <= 0:
            raise ValueError("weights must be positive")

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    def second_moment(self) -> np.ndarray:
        """sum c_i u_i u_i^T."""
        return (self.vectors.T * self.weights) @ self.vectors

    def residual(self) -> float:
        """Frobenius distance of the second moment from I_n."""
        return float(np.linalg.norm(self.second_moment() - np.eye(self.n)))

    def to_dict(self) -> dict:
        return {
            "vectors": self.vectors.tolist(),
            "weights": self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UnitVectorSystem":
        vectors = np.asarray(data["vectors"], dtype=float)
        return cls(n=vectors.shape[1], vectors=vectors, weights=data["weights"])


def standard_system(n: int) -> UnitVectorSystem:
    """The coordinate system {e_i, c_i = 1}."""
    return UnitVectorSystem(n, np.eye(n), np.ones(n))


def angle_system(angles_deg: Sequence[float], weight: float) -> UnitVectorSystem:
    """Planar unit vectors at the given angles, equal weights."""
    rad = np.deg2rad(np.asarray(angles_deg, dtype=float))
    vecs = np.stack([np.cos(rad), np.sin(rad)], axis=1)
    return UnitVectorSystem(2, vecs, np.full(len(angles_deg), weight))


@dataclass
class JohnReport:
    passed: bool
    residual: float
    trace: float
    trace_residual: float

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "residual": self.residual,
            "trace": self.trace,
            "trace_residual": self.trace_residual,
        }


def john_check(sys: UnitVectorSystem, tol: float = DEFAULT_TOL) -> JohnReport:
    """Does sum c_i u_i u_i^T = I_n hold at tol?  Also checks sum c_i = n."""
    r = sys.residual()
    trace = float(np.sum(sys.weights))
    return JohnReport(
        passed=r <= tol,
        residual=r,
        trace=trace,
        trace_residual=abs(trace - sys.n),
    )


def cover_from_john(
    sys: UnitVectorSystem, tol: float = DEFAULT_TOL
) -> List[Tuple[np.ndarray, float]]:
    """The weighted cover {(P_i, c_i)} of R^n by hyperplanes, s = n - 1.

    P_i = I - u_i u_i^T projects onto u_i^perp; isotropy of the u_i gives
    sum c_i P_i = (n - 1) I, asserted on exit.
    """
    report = john_check(sys, tol)
    if not report.passed:
        raise NotIsotropic(f"John residual {report.residual:.3e} exceeds {tol:.1e}")
    eye = np.eye(sys.n)
    cover = [
        (eye - np.outer(u, u), float(c))
        for u, c in zip(sys.vectors, sys.weights)
    ]
    total = sum(c * p for p, c in cover)
    resid = float(np.linalg.norm(total - (sys.n - 1) * eye))
    assert resid <= np.sum(sys.weights) * max(tol, 1e-12)
    return cover


def _complement_basis(u: np.ndarray) -> np.ndarray:
    """Orthonormal basis of u^perp as rows, shape (n-1, n)."""
    n = u.shape[0]
    _, _, vt = np.linalg.svd(u.reshape(1, n))
    return vt[1:]


def _hull_volume(points: np.ndarray) -> float:
    d = points.shape[1]
    if d == 1:
        return float(points.max() - points.min())
    return float(ConvexHull(points).volume)


def projection_volume_float(k: Polytope, u: np.ndarray) -> float:
    """|P_{u^perp}(K)| by projecting the vertices and taking the hull."""
    basis = _complement_basis(np.asarray(u, dtype=float))
    verts = np.array([[float(x) for x in v] for v in k.vertices])
    return _hull_volume(verts @ basis.T)


def section_volume_float(k: Polytope, u: np.ndarray) -> float:
    """|K cap u^perp| through the float section pipeline."""
    basis = _complement_basis(np.asarray(u, dtype=float))
    return general_section(k, basis).volume()


def check_ball(
    k: Polytope, sys: UnitVectorSystem, *, tol: float = 1e-6
) -> InequalityReport:
    """Ball's inequality prod |P_{u_i^perp}(K)|^{c_i} >= |K|^{n-1} (float)."""
    cover_from_john(sys)  # raises NotIsotropic on bad systems
    n = k.dim
    vol = float(k.volume())
    lhs = 1.0
    factors = []
    for u, c in zip(sys.vectors, sys.weights):
        pv = projection_volume_float(k, u)
        factors.append(Factor(tuple(np.round(u, 12)), pv, float(c)))
        lhs *= pv ** float(c)
    rhs = vol ** (n - 1)
    slack = lhs / rhs
    return InequalityReport(
        name="ball",
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        passed=slack >= 1.0 - tol,
        exact=False,
        factors=factors,
    )


def check_dual_ball(
    k: Polytope, sys: UnitVectorSystem, *, tol: float = 1e-6
) -> InequalityReport:
    """Dual Ball: |K|^{n-1} >= (n!/n^n) prod |K cap u_i^perp|^{c_i} (float).

    Also emits the equivalent log-integral form
    exp(sum c_i log |K cap u_i^perp|) in ``log_form``.
    """
    if not k.has_zero_interior():
        raise ZeroNotInterior("dual Ball requires 0 in int(K)")
    cover_from_john(sys)
    n = k.dim
    vol = float(k.volume())
    factors = []
    log_sum = 0.0
    for u, c in zip(sys.vectors, sys.weights):
        sv = section_volume_float(k, u)
        factors.append(Factor(tuple(np.round(u, 12)), sv, float(c)))
        log_sum += float(c) * math.log(sv)
    const = meyer_constant(n)
    log_form = math.exp(log_sum)
    lhs = vol ** (n - 1)
    rhs = float(const) * log_form
    slack = lhs / rhs
    return InequalityReport(
        name="dual-ball",
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        passed=slack >= 1.0 - tol,
        exact=False,
        factors=factors,
        constant=const,
        log_form=log_form,
    )


# -- sphere measures ---------------------------------------------------------


@dataclass
class SphereMeasure:
    """Discrete Borel measure on S^{n-1}: unit-vector atoms with masses."""

    n: int
    atoms: List[Tuple[np.ndarray, float]]

    def __post_init__(self):
        cleaned = []
        for u, mass in self.atoms:
            u = np.asarray(u, dtype=float)
            if abs(np.linalg.norm(u) - 1.0) > 1e-10:
                raise ValueError("atoms must sit on the unit sphere")
            if mass < 0:
                raise ValueError("masses must be nonnegative")
            cleaned.append((u, float(mass)))
        self.atoms = cleaned

    @property
    def total_mass(self) -> float:
        return sum(m for _, m in self.atoms)

    def second_moment(self) -> np.ndarray:
        t = np.zeros((self.n, self.n))
        for u, m in self.atoms:
            t += m * np.outer(u, u)
        return t

    def residual(self) -> float:
        return float(np.linalg.norm(self.second_moment() - np.eye(self.n)))

    def to_system(self) -> UnitVectorSystem:
        """Drop zero-mass atoms and repackage as a weighted vector system."""
        live = [(u, m) for u, m in self.atoms if m > 0]
        if not live:
            raise DegenerateMeasure("measure has no mass")
        vectors = np.stack([u for u, _ in live])
        weights = np.array([m for _, m in live])
        return UnitVectorSystem(self.n, vectors, weights)

    def to_dict(self) -> dict:
        return {
            "atoms": [{"u": u.tolist(), "mass": m} for u, m in self.atoms]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SphereMeasure":
        atoms = [(np.asarray(a["u"], dtype=float), a["mass"]) for a in data["atoms"]]
        return cls(n=len(atoms[0][0]), atoms=atoms)


def renormalize_to_isotropic(m: SphereMeasure) -> SphereMeasure:
    """Push m forward by T^{-1/2} so the result is exactly isotropic.

    With T = sum mass * u u^T, each atom moves to v = T^{-1/2}u / |T^{-1/2}u|
    with mass mass * |T^{-1/2}u|^2; then sum mass' v v^T = I_n identically.
    """
    t = m.second_moment()
    eigvals, eigvecs = np.linalg.eigh(t)
    if np.min(eigvals) < 1e-12:
        raise DegenerateMeasure(
            f"second moment nearly singular (min eigenvalue {np.min(eigvals):.3e})"
        )
    w = eigvecs @ np.diag(1.0 / np.sqrt(eigvals)) @ eigvecs.T
    atoms = []
    for u, mass in m.atoms:
        wu = w @ u
        norm = float(np.linalg.norm(wu))
        if mass == 0 or norm == 0:
            continue
        atoms.append((wu / norm, mass * norm * norm))
    return SphereMeasure(m.n, atoms)


# -- discretization ----------------------------------------------------------


def _sphere_grid(n: int, count: int) -> np.ndarray:
    """Deterministic quasi-uniform grid on S^{n-1}, n in {2, 3}."""
    if n == 2:
        theta = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    if n == 3:
        # Fibonacci lattice
        i = np.arange(count) + 0.5
        phi = math.pi * (3.0 - math.sqrt(5.0)) * i
        z = 1.0 - 2.0 * i / count
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    raise UnsupportedDimension("sphere discretization supports n in {2, 3}")


def _greedy_net(grid: np.ndarray, eps: float) -> np.ndarray:
    """Indices of a maximal eps-separated subset, greedily in grid order."""
    # separation of exactly eps counts as separated (within round-off)
    cos_eps = math.cos(eps) + 1e-12
    net: List[int] = []
    for i, u in enumerate(grid):
        if all(float(grid[j] @ u) < cos_eps for j in net):
            net.append(i)
    return np.array(net, dtype=int)


def builtin_density(name: str, n: int, **params) -> Callable[[np.ndarray], np.ndarray]:
    """Named densities for the CLI surface: "uniform" or "von-mises-fisher".

    Both are scaled so the total mass over the sphere is n (the isotropic
    normalization); von-mises-fisher takes mu (unit vector) and kappa > 0.
    """
    if name == "uniform":
        surface = 2 * math.pi if n == 2 else 4 * math.pi
        return lambda u: np.full(np.atleast_2d(u).shape[0], n / surface)
    if name == "von-mises-fisher":
        mu = np.asarray(params["mu"], dtype=float)
        mu = mu / np.linalg.norm(mu)
        kappa = float(params.get("kappa", 1.0))
        return lambda u: np.exp(kappa * (np.atleast_2d(u) @ mu))
    raise ValueError(f"unknown density {name!r}")


def discretize_sphere_measure(
    density: Callable[[np.ndarray], np.ndarray],
    eps: float,
    *,
    n: int = 2,
    grid_size: Optional[int] = None,
) -> SphereMeasure:
    """Discretize a density on S^{n-1} onto a maximal eps-net, n in {2, 3}.

    A greedy eps-separated net is selected over a fixed angular grid
    (S^1: uniform angles, S^2: Fibonacci lattice); each grid point joins the
    cell of its nearest net point (ties to the lower index) and contributes
    density * (surface / grid_size) to that atom's mass.
    """
    if n not in (2, 3):
        raise UnsupportedDimension("sphere discretization supports n in {2, 3}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    count = grid_size or (GRID_S1 if n == 2 else GRID_S2)
    grid = _sphere_grid(n, count)
    net_idx = _greedy_net(grid, eps)
    net = grid[net_idx]
    # nearest net point = max inner product; argmax takes the lowest index
    owner = np.argmax(grid @ net.T, axis=1)
    vals = np.asarray(density(grid), dtype=float).reshape(-1)
    if np.min(vals) < 0:
        raise ValueError("density must be nonnegative")
    surface = 2 * math.pi if n == 2 else 4 * math.pi
    cell_weight = surface / count
    masses = np.zeros(len(net))
    np.add.at(masses, owner, vals * cell_weight)
    return SphereMeasure(n, [(net[i], float(masses[i])) for i in range(len(net))])
