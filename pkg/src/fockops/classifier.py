"""Growth analysis of m_z(psi, phi) and boundedness/compactness verdicts.

    m_z(psi, phi) = |psi(z)| exp((|phi(z)|^2 - |z|^2) / 2)

For phi(z) = a z + b,

    |a z + b|^2 - |z|^2 = (|a|^2 - 1)|z|^2 + 2 Re(a conj(b) z) + |b|^2,

so log m_z = quad_coeff |z|^2 + log|h(z)| + |b|^2/2 with
h(z) = psi(z) exp(a conj(b) z), again an exp-poly symbol whose frequencies
are s_j + a conj(b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Real

import numpy as np

from ._search import maximize_polar, search_radius
from .errors import UnsupportedExponents, ZeroWeight
from .symbols import (
    MERGE_RTOL,
    AffineMap,
    ExpPolySymbol,
    ExpPolyTerm,
    OperatorSpec,
    PairSpec,
    log_abs,
    subtract,
)

UNIT_TOL = 1e-12


class Verdict(str, Enum):
    UNBOUNDED = "unbounded"
    BOUNDED_NOT_COMPACT = "bounded-not-compact"
    COMPACT = "compact"
    INDETERMINATE = "indeterminate-symbolic"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    reason: str
    branch: str
    evidence: dict = field(default_factory=dict)

    @property
    def bounded(self) -> bool:
        return self.verdict in (Verdict.COMPACT, Verdict.BOUNDED_NOT_COMPACT)


@dataclass(frozen=True)
class GrowthProfile:
    quad_coeff: float
    shifted: ExpPolySymbol  # h(z) = psi(z) exp(a conj(b) z)
    log_const: float
    slope_class: int  # -1: |a| < 1, 0: |a| = 1, +1: |a| > 1

    @property
    def frequencies(self) -> tuple[complex, ...]:
        return self.shifted.frequencies

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(t.degree for t in self.shifted.terms)

    def constant_modulus(self) -> float | None:
        """|c| e^{|b|^2/2} when h is a nonzero constant c, else None."""
        terms = self.shifted.terms
        if len(terms) == 1 and terms[0].degree == 0 and abs(terms[0].s) <= MERGE_RTOL:
            return abs(terms[0].coeffs[0]) * math.exp(self.log_const)
        return None


def slope_class(a: complex) -> int:
    m = abs(a)
    if abs(m - 1) <= UNIT_TOL:
        return 0
    return -1 if m < 1 else 1


def as_exponent(x) -> Real:
    """Exponent from a number or an exact string such as "3/2"."""
    if isinstance(x, str):
        x = Fraction(x.strip())
    if isinstance(x, bool) or not isinstance(x, Real):
        raise TypeError(f"exponent must be a real number, got {x!r}")
    if isinstance(x, int):
        x = Fraction(x)
    if not x > 0:
        raise ValueError("exponent must be positive")
    return x


def _check_exponents(p, q):
    p, q = as_exponent(p), as_exponent(q)
    if not (math.isfinite(p) and math.isfinite(q)):
        raise UnsupportedExponents("p and q must be finite")
    return p, q


def m_value(psi: ExpPolySymbol, phi: AffineMap, z):
    """m_z(psi, phi), computed from logarithms."""
    z_arr = np.asarray(z, dtype=complex)
    with np.errstate(over="ignore"):
        out = np.exp(log_m(psi, phi, z_arr))
    return float(out) if np.ndim(z) == 0 else out


def log_m(psi: ExpPolySymbol, phi: AffineMap, z):
    z = np.asarray(z, dtype=complex)
    return log_abs(psi, z) + 0.5 * (np.abs(phi(z)) ** 2 - np.abs(z) ** 2)


def growth_profile(psi: ExpPolySymbol, phi: AffineMap) -> GrowthProfile:
    if psi.is_zero:
        raise ZeroWeight("growth profile of the zero weight")
    a, b = phi.a, phi.b
    shift = a * b.conjugate()
    shifted = ExpPolySymbol(tuple(ExpPolyTerm(t.coeffs, t.s + shift) for t in psi.terms))
    cls = slope_class(a)
    quad = 0.0 if cls == 0 else (abs(a) ** 2 - 1) / 2
    return GrowthProfile(quad, shifted, abs(b) ** 2 / 2, cls)


def _numeric_sup_log_m(psi: ExpPolySymbol, phi: AffineMap, seeds=()) -> float:
    C, d, sigma = psi.growth_constants()
    log_c = math.log(C)
    am, bm = abs(phi.a), abs(phi.b)

    def logfun(z):
        return log_m(psi, phi, z)

    def bound(r):
        return log_c + d * math.log1p(r) + sigma * r + 0.5 * ((am * r + bm) ** 2 - r * r)

    radius = search_radius(logfun, bound, seeds)
    val, _ = maximize_polar(logfun, radius, seeds, n_r=256, n_theta=128)
    return val


def sup_m(psi: ExpPolySymbol, phi: AffineMap) -> float:
    """m(psi, phi) = sup_z m_z(psi, phi); ``math.inf`` when infinite.

    For |a| = 1 the quantity is |h(z)| e^{|b|^2/2} with h entire, so by
    Liouville it is finite exactly when h is constant.
    """
    prof = growth_profile(psi, phi)
    if prof.slope_class > 0:
        return math.inf
    if prof.slope_class == 0:
        const = prof.constant_modulus()
        return math.inf if const is None else const
    return math.exp(_numeric_sup_log_m(psi, phi))


def limsup_m(psi: ExpPolySymbol, phi: AffineMap) -> float:
    """limsup_{|z| -> inf} m_z(psi, phi)."""
    prof = growth_profile(psi, phi)
    if prof.slope_class < 0:
        return 0.0
    if prof.slope_class == 0:
        const = prof.constant_modulus()
        return math.inf if const is None else const
    return math.inf


def integrable_m(psi: ExpPolySymbol, phi: AffineMap, r: float) -> bool:
    """Whether m_z(psi, phi) lies in L^r(C, dA)."""
    if not r > 0:
        raise ValueError("r must be positive")
    # for |a| = 1 m_z is a positive constant or unbounded; neither is integrable
    return growth_profile(psi, phi).slope_class < 0


def classify_single(spec: OperatorSpec, p, q) -> Classification:
    p, q = _check_exponents(p, q)
    psi, phi = spec.psi, spec.phi
    if psi.is_zero:
        return Classification(Verdict.COMPACT, "zero operator", "single:zero-weight")
    if phi.a == 0:
        # every exp-poly weight lies in every F^q
        return Classification(Verdict.COMPACT, "constant map with weight in F^q", "single:constant-map")
    if slope_class(phi.a) > 0:
        return Classification(Verdict.UNBOUNDED, "|a| > 1: m_z grows like a Gaussian",
                              "single:slope-exceeds-one")
    if p <= q:
        sup = sup_m(psi, phi)
        if math.isinf(sup):
            return Classification(Verdict.UNBOUNDED, "m(psi, phi) is infinite", "single:p<=q:sup-infinite",
                                  {"sup_m": sup})
        lim = limsup_m(psi, phi)
        if lim == 0:
            assert math.isfinite(sup)
            return Classification(Verdict.COMPACT, "m_z -> 0 as |z| -> inf", "single:p<=q:limsup-zero",
                                  {"sup_m": sup, "limsup_m": lim})
        return Classification(Verdict.BOUNDED_NOT_COMPACT, "m(psi, phi) finite, m_z does not tend to 0",
                              "single:p<=q:limsup-positive", {"sup_m": sup, "limsup_m": lim})
    r = float(p) * float(q) / (float(p) - float(q))
    if integrable_m(psi, phi, r):
        return Classification(Verdict.COMPACT, f"m_z in L^{r:g}", "single:q<p:m-integrable")
    return Classification(Verdict.UNBOUNDED, f"m_z not in L^{r:g}", "single:q<p:m-not-integrable")


def meet(v1: Verdict, v2: Verdict) -> Verdict:
    if Verdict.UNBOUNDED in (v1, v2):
        return Verdict.UNBOUNDED
    if Verdict.INDETERMINATE in (v1, v2):
        return Verdict.INDETERMINATE
    if v1 == v2 == Verdict.COMPACT:
        return Verdict.COMPACT
    return Verdict.BOUNDED_NOT_COMPACT


def classify_difference(pair: PairSpec, p, q) -> Classification:
    """Verdict for W_1 - W_2.  For p <= q it is bounded (compact) iff both are."""
    p, q = _check_exponents(p, q)
    s1, s2 = pair.first, pair.second
    if s1.phi == s2.phi:
        inner = classify_single(OperatorSpec(subtract(s1.psi, s2.psi), s1.phi), p, q)
        return Classification(inner.verdict, f"equal maps; weight psi1 - psi2: {inner.reason}",
                              "difference:equal-maps", {"single": inner.branch})
    if s1.psi.is_zero or s2.psi.is_zero:
        other = s2 if s1.psi.is_zero else s1
        inner = classify_single(other, p, q)
        return Classification(inner.verdict, f"one weight vanishes: {inner.reason}",
                              "difference:zero-weight", {"single": inner.branch})
    if q < p:
        c1, c2 = s1.psi.constant_value(), s2.psi.constant_value()
        if c1 is None or c2 is None:
            raise UnsupportedExponents(
                "q < p is only decided for linear combinations of composition operators")
        inner = classify_combination(c1, s1.phi, -c2, s2.phi, p, q)
        return Classification(inner.verdict, inner.reason, inner.branch, inner.evidence)
    v1 = classify_single(s1, p, q)
    v2 = classify_single(s2, p, q)
    verdict = meet(v1.verdict, v2.verdict)
    tag = {Verdict.UNBOUNDED: "not-both-bounded", Verdict.COMPACT: "both-compact",
           Verdict.BOUNDED_NOT_COMPACT: "both-bounded", Verdict.INDETERMINATE: "indeterminate"}[verdict]
    return Classification(verdict, f"first: {v1.verdict.value}; second: {v2.verdict.value}",
                          f"difference:p<=q:{tag}",
                          {"first": v1.verdict.value, "second": v2.verdict.value})


def classify_combination(c1, phi1: AffineMap, c2, phi2: AffineMap, p, q) -> Classification:
    """Verdict for c1 C_phi1 + c2 C_phi2 with q < p: compact iff |a1|, |a2| < 1,
    and bounded iff compact."""
    p, q = _check_exponents(p, q)
    if p <= q:
        raise UnsupportedExponents("combination criterion needs q < p; use classify_difference")
    c1, c2 = complex(c1), complex(c2)
    if phi1 == phi2 or c1 == 0 or c2 == 0:
        if phi1 == phi2:
            spec, why = OperatorSpec(ExpPolySymbol.constant(c1 + c2), phi1), "equal maps"
        else:
            spec, why = ((OperatorSpec(ExpPolySymbol.constant(c2), phi2), "c1 = 0") if c1 == 0
                         else (OperatorSpec(ExpPolySymbol.constant(c1), phi1), "c2 = 0"))
        inner = classify_single(spec, p, q)
        return Classification(inner.verdict, f"{why}: {inner.reason}", "combination:reduced",
                              {"single": inner.branch})
    inside = slope_class(phi1.a) < 0 and slope_class(phi2.a) < 0
    if inside:
        return Classification(Verdict.COMPACT, "|a1| < 1 and |a2| < 1", "combination:q<p:both-compact")
    return Classification(Verdict.UNBOUNDED, "some |a_j| >= 1", "combination:q<p:unbounded")
