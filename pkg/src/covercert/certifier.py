"""Affine cross-polytope certificates.

For a body K with 0 interior, finds C = conv{±λ_i e_i} with |C| = |K| and
|C ∩ F_σ| >= |K ∩ F_σ| for every nonempty σ ⊆ [n].  In log variables
x_i = log t_i (t_i = 2 λ_i) the conditions are linear:

    sum_i x_i = log(n! |K|)
    sum_{i in σ} x_i >= log(|σ|! |K ∩ F_σ|)   for every proper σ,

using the closed forms |C| = (1/n!) prod t_i and
|C ∩ F_σ| = (1/|σ|!) prod_{i in σ} t_i.  Existence of a feasible point is
the theorem being exercised; we select the Chebyshev point (maximal minimum
constraint slack), which is deterministic and maximally robust to round-off.
The log-space coefficients are irrational, so this is the one float LP in
the exact pipeline.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Optional, Tuple

import numpy as np
from gmpy2 import mpq
from scipy.optimize import linprog

from .errors import Infeasible, ZeroNotInterior
from .polytope import Polytope
from .rationals import factorial

DEFAULT_TOL = 1e-9


def _all_sigmas(n: int):
    for r in range(1, n + 1):
        yield from combinations(range(n), r)


def section_volume_table(k: Polytope) -> Dict[Tuple[int, ...], mpq]:
    """Exact |K ∩ F_σ| for every nonempty σ (σ = [n] gives |K|)."""
    return {sigma: k.section_volume(sigma) for sigma in _all_sigmas(k.dim)}


@dataclass
class CrossPolytopeCertificate:
    n: int
    lambdas: Tuple[float, ...]
    target_volume: mpq
    section_slacks: Dict[Tuple[int, ...], float]
    volume_residual: float

    @property
    def t(self) -> Tuple[float, ...]:
        return tuple(2.0 * lam for lam in self.lambdas)

    @property
    def min_slack(self) -> float:
        return min(self.section_slacks.values())

    def cross_polytope_volume(self) -> float:
        vol = 1.0 / math.factorial(self.n)
        for ti in self.t:
            vol *= ti
        return vol

    def section_closed_form(self, sigma) -> float:
        """|C ∩ F_σ| = (1/|σ|!) prod_{i in σ} t_i."""
        v = 1.0 / math.factorial(len(sigma))
        t = self.t
        for i in sigma:
            v *= t[i]
        return v

    def to_dict(self) -> dict:
        return {
            "lambdas": list(self.lambdas),
            "volume_residual": self.volume_residual,
            "min_slack": self.min_slack,
            "per_sigma": {
                ",".join(str(i + 1) for i in sigma): slack
                for sigma, slack in sorted(self.section_slacks.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def certify(
    k: Polytope,
    *,
    tol: float = DEFAULT_TOL,
    sections: Optional[Dict[Tuple[int, ...], mpq]] = None,
) -> CrossPolytopeCertificate:
    """Construct the cross-polytope certificate for K (0 must be interior).

    `sections` may carry precomputed exact section volumes to avoid
    recomputation; missing entries are filled in.
    """
    if not k.has_zero_interior():
        raise ZeroNotInterior("certification requires 0 in int(K)")
    n = k.dim
    if sections is None:
        sections = {}
    for sigma in _all_sigmas(n):
        if sigma not in sections:
            sections[sigma] = k.section_volume(sigma)
    full = tuple(range(n))
    vol = sections[full]

    # max t  s.t.  -sum_{i in sigma} x_i + t <= -log(|sigma|! |K∩F_sigma|),
    #              sum_i x_i = log(n! |K|)
    sigmas = [s for s in _all_sigmas(n) if len(s) < n]
    A_ub = np.zeros((len(sigmas), n + 1))
    b_ub = np.zeros(len(sigmas))
    for row, sigma in enumerate(sigmas):
        for i in sigma:
            A_ub[row, i] = -1.0
        A_ub[row, n] = 1.0
        sv = sections[sigma]
        if sv == 0:
            # empty-interior section: constraint is vacuous (log -inf)
            b_ub[row] = 1e30
        else:
            b_ub[row] = -math.log(math.factorial(len(sigma)) * float(sv))
    A_eq = np.zeros((1, n + 1))
    A_eq[0, :n] = 1.0
    b_eq = np.array([math.log(math.factorial(n) * float(vol))])
    c = np.zeros(n + 1)
    c[n] = -1.0  # maximize t
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=b_eq,
        bounds=[(None, None)] * (n + 1),
        method="highs",
    )
    if not res.success:
        raise Infeasible(f"certificate LP failed: {res.message}")
    x = res.x[:n]
    t_star = res.x[n]
    if t_star < -10 * tol:
        # Theorem guarantees feasibility; reaching here indicates a bug.
        raise Infeasible(
            f"certificate LP infeasible beyond tolerance (min slack {t_star:.3e})"
        )
    lambdas = tuple(math.exp(xi) / 2.0 for xi in x)
    return _build_certificate(n, lambdas, sections)


def _build_certificate(n, lambdas, sections) -> CrossPolytopeCertificate:
    full = tuple(range(n))
    vol = sections[full]
    cert = CrossPolytopeCertificate(
        n=n,
        lambdas=lambdas,
        target_volume=vol,
        section_slacks={},
        volume_residual=0.0,
    )
    cert.volume_residual = abs(cert.cross_polytope_volume() / float(vol) - 1.0)
    for sigma in _all_sigmas(n):
        if len(sigma) == n:
            continue
        kv = float(sections[sigma])
        cv = cert.section_closed_form(sigma)
        if kv == 0.0:
            cert.section_slacks[sigma] = math.inf
        else:
            cert.section_slacks[sigma] = (cv - kv) / kv
    return cert


@dataclass
class VerificationReport:
    passed: bool
    volume_residual: float
    min_slack: float
    per_sigma: Dict[Tuple[int, ...], float]

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "volume_residual": self.volume_residual,
            "min_slack": self.min_slack,
            "per_sigma": {
                ",".join(str(i + 1) for i in s): v
                for s, v in sorted(self.per_sigma.items())
            },
        }


def verify_certificate(
    k: Polytope,
    cert: CrossPolytopeCertificate,
    tol: float = DEFAULT_TOL,
    *,
    sections: Optional[Dict[Tuple[int, ...], mpq]] = None,
) -> VerificationReport:
    """Recompute every |K ∩ F_σ| exactly and check the certificate claims."""
    n = k.dim
    if sections is None:
        sections = {}
    for sigma in _all_sigmas(n):
        if sigma not in sections:
            sections[sigma] = k.section_volume(sigma)
    vol = sections[tuple(range(n))]
    residual = abs(cert.cross_polytope_volume() / float(vol) - 1.0)
    per_sigma = {}
    for sigma in _all_sigmas(n):
        if len(sigma) == n:
            continue
        kv = float(sections[sigma])
        cv = cert.section_closed_form(sigma)
        per_sigma[sigma] = math.inf if kv == 0.0 else (cv - kv) / kv
    min_slack = min(per_sigma.values()) if per_sigma else 0.0
    passed = residual <= tol and min_slack >= -tol
    return VerificationReport(passed, residual, min_slack, per_sigma)


def box_form(cert: CrossPolytopeCertificate):
    """The intermediate box B = prod [0, t_i] with |B| = n! |K| and
    |B ∩ F_σ| = prod_{i in σ} t_i; exposed for testing the proof chain."""
    return tuple((0.0, ti) for ti in cert.t)


def box_volume(cert: CrossPolytopeCertificate) -> float:
    v = 1.0
    for ti in cert.t:
        v *= ti
    return v
