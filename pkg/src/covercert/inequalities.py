"""Volume inequality checkers: primal/dual uniform-cover, weighted, Meyer, LW.

Every checker returns an :class:`InequalityReport`.  On the exact path the
verdict is a rational comparison with zero tolerance; weighted variants with
rational exponents are decided by clearing denominators and comparing integer
powers, never through logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq

from .covers import Cover, WeightedCover, verify_weighted
from .errors import NotUniform, WeightsInvalid, ZeroNotInterior
from .polytope import Polytope
from .rationals import factorial, qpow, rat_str


@dataclass
class Factor:
    sigma: tuple  # 0-based coordinate indices, or a unit vector on float paths
    volume: mpq
    exponent: mpq

    def to_dict(self) -> dict:
        if any(isinstance(i, float) for i in self.sigma):
            label = ",".join(f"{float(i):g}" for i in self.sigma)
        else:
            label = ",".join(str(i + 1) for i in self.sigma)
        return {
            "sigma": label,
            "volume": _num_str(self.volume),
            "exponent": _num_str(self.exponent),
        }


def _num_str(x):
    if isinstance(x, float):
        return x
    return rat_str(x)


@dataclass
class InequalityReport:
    name: str
    lhs: object  # mpq on the exact path, float otherwise
    rhs: object
    slack: object  # lhs/rhs; None when rhs degenerates to 0
    passed: bool
    exact: bool
    factors: list = field(default_factory=list)
    warning: Optional[str] = None
    constant: Optional[mpq] = None
    log_form: Optional[float] = None  # exp(integral of log-volumes), when emitted

    @property
    def is_equality(self) -> bool:
        return self.slack is not None and self.slack == 1

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "lhs": _num_str(self.lhs),
            "rhs": _num_str(self.rhs),
            "slack": None if self.slack is None else _num_str(self.slack),
            "pass": self.passed,
            "exact": self.exact,
            "factors": [f.to_dict() for f in self.factors],
        }
        if self.warning:
            d["warning"] = self.warning
        if self.constant is not None:
            d["constant"] = _num_str(self.constant)
        if self.log_form is not None:
            d["log_form"] = self.log_form
        return d


def _uniformity_or_raise(c: Cover) -> int:
    s = c.uniformity()
    if s is None:
        raise NotUniform(f"cover {c} is not uniform")
    return s


def _section_volume(k: Polytope, sigma, cache) -> mpq:
    if cache is not None:
        if sigma not in cache:
            cache[sigma] = k.section_volume(sigma)
        return cache[sigma]
    return k.section_volume(sigma)


def check_bt(k: Polytope, c: Cover, *, cache: Optional[dict] = None) -> InequalityReport:
    """Bollobas-Thomason: prod |P_sigma(K)| >= |K|^s, exact."""
    s = _uniformity_or_raise(c)
    vol = k.volume()
    factors = []
    lhs = mpq(1)
    for sigma in c.parts:
        if cache is not None and ("proj", sigma) in cache:
            pv = cache[("proj", sigma)]
        else:
            pv = k.projection_volume(sigma)
            if cache is not None:
                cache[("proj", sigma)] = pv
        factors.append(Factor(sigma, pv, mpq(1)))
        lhs *= pv
    rhs = qpow(vol, s)
    return InequalityReport(
        name="bt",
        lhs=lhs,
        rhs=rhs,
        slack=lhs / rhs,
        passed=lhs >= rhs,
        exact=True,
        factors=factors,
    )


def check_dual_bt(
    k: Polytope, c: Cover, *, cache: Optional[dict] = None
) -> InequalityReport:
    """Dual Bollobas-Thomason:

    |K|^s >= (1/(n!)^s) * prod |sigma_i|! * prod |K cap F_sigma_i|, exact.
    """
    if not k.has_zero_interior():
        raise ZeroNotInterior("dual BT requires 0 in int(K)")
    s = _uniformity_or_raise(c)
    n = k.dim
    lhs = qpow(k.volume(), s)
    rhs = 1 / qpow(mpq(factorial(n)), s)
    factors = []
    for sigma in c.parts:
        sv = _section_volume(k, sigma, cache)
        factors.append(Factor(sigma, sv, mpq(1)))
        rhs *= factorial(len(sigma)) * sv
    if rhs == 0:
        return InequalityReport(
            name="dual-bt",
            lhs=lhs,
            rhs=rhs,
            slack=None,
            passed=True,
            exact=True,
            factors=factors,
            warning="degenerate section: rhs = 0, inequality trivially holds",
        )
    return InequalityReport(
        name="dual-bt",
        lhs=lhs,
        rhs=rhs,
        slack=lhs / rhs,
        passed=lhs >= rhs,
        exact=True,
        factors=factors,
    )


def _common_denominator(values) -> int:
    from gmpy2 import gcd, mpz

    L = mpz(1)
    for v in values:
        d = v.denominator
        L = L * d // gcd(L, d)
    return int(L)


def _power_compare(lhs_base_exp, rhs_base_exp) -> int:
    """Compare prod b^e on each side (integer exponents); returns -1/0/1.

    Zero bases are rejected by the callers; everything here is positive.
    """
    left = mpq(1)
    for b, e in lhs_base_exp:
        left *= qpow(b, e)
    right = mpq(1)
    for b, e in rhs_base_exp:
        right *= qpow(b, e)
    if left < right:
        return -1
    if left > right:
        return 1
    return 0


def check_weighted_bt(k: Polytope, wc: WeightedCover) -> InequalityReport:
    """Weighted uniform-cover inequality |K|^s <= prod |P_i(K)|^{c_i}.

    Rational exponents are compared exactly after clearing denominators.
    """
    if not verify_weighted(wc):
        raise WeightsInvalid("weights do not satisfy the cover identity")
    vol = k.volume()
    factors = []
    proj = []
    for sigma, ci in zip(wc.parts, wc.weights):
        pv = k.projection_volume(sigma)
        factors.append(Factor(sigma, pv, ci))
        proj.append((pv, ci))
    m = _common_denominator([wc.s] + list(wc.weights))
    cmp = _power_compare(
        [(pv, int(ci * m)) for pv, ci in proj],
        [(vol, int(wc.s * m))],
    )
    lhs = 1.0
    for pv, ci in proj:
        lhs *= float(pv) ** float(ci)
    rhs = float(vol) ** float(wc.s)
    return InequalityReport(
        name="weighted-bt",
        lhs=lhs,
        rhs=rhs,
        slack=lhs / rhs,
        passed=cmp >= 0,
        exact=True,
        factors=factors,
    )


def check_weighted_dual_bt(k: Polytope, wc: WeightedCover) -> InequalityReport:
    """Weighted dual inequality, exact via common-denominator powering:

    |K|^s >= (1/(n!)^s) * prod (d_i!)^{c_i} * prod |K cap F_i|^{c_i}.
    """
    if not k.has_zero_interior():
        raise ZeroNotInterior("weighted dual BT requires 0 in int(K)")
    if not verify_weighted(wc):
        raise WeightsInvalid("weights do not satisfy the cover identity")
    n = k.dim
    vol = k.volume()
    factors = []
    secs = []
    degenerate = False
    for sigma, ci in zip(wc.parts, wc.weights):
        sv = k.section_volume(sigma)
        factors.append(Factor(sigma, sv, ci))
        if sv == 0:
            degenerate = True
        secs.append((sv, ci))
    lhs = float(vol) ** float(wc.s)
    if degenerate:
        return InequalityReport(
            name="weighted-dual-bt",
            lhs=lhs,
            rhs=0.0,
            slack=None,
            passed=True,
            exact=True,
            factors=factors,
            warning="degenerate section: rhs = 0, inequality trivially holds",
        )
    m = _common_denominator([wc.s] + list(wc.weights))
    nfact = mpq(factorial(n))
    cmp = _power_compare(
        [(vol, int(wc.s * m)), (nfact, int(wc.s * m))],
        [
            (mpq(factorial(len(sigma))) * sv, int(ci * m))
            for (sv, ci), sigma in zip(secs, wc.parts)
        ],
    )
    rhs = float(1 / nfact) ** float(wc.s)
    for (sv, ci), sigma in zip(secs, wc.parts):
        rhs *= (float(factorial(len(sigma))) * float(sv)) ** float(ci)
    return InequalityReport(
        name="weighted-dual-bt",
        lhs=lhs,
        rhs=rhs,
        slack=lhs / rhs,
        passed=cmp >= 0,
        exact=True,
        factors=factors,
    )


def meyer_constant(n: int) -> mpq:
    """n!/n^n, asserted equal to the (1/(n!)^{n-1}) * [(n-1)!]^n chain."""
    if n < 1:
        raise ValueError("n must be >= 1")
    direct = mpq(factorial(n), n**n)
    chain = qpow(mpq(factorial(n - 1)), n) / qpow(mpq(factorial(n)), n - 1)
    assert chain == direct
    return direct


def _lw_cover(n: int) -> Cover:
    return Cover(n, [[j for j in range(n) if j != i] for i in range(n)])


def check_meyer(k: Polytope, *, cache: Optional[dict] = None) -> InequalityReport:
    """Meyer's dual Loomis-Whitney: the (n-1)-uniform cover of complements."""
    rep = check_dual_bt(k, _lw_cover(k.dim), cache=cache)
    rep.name = "meyer"
    rep.constant = meyer_constant(k.dim)
    return rep


def check_lw(k: Polytope, *, cache: Optional[dict] = None) -> InequalityReport:
    """Loomis-Whitney: BT with the cover of coordinate complements."""
    rep = check_bt(k, _lw_cover(k.dim), cache=cache)
    rep.name = "loomis-whitney"
    return rep
