"""Two-sided essential-norm estimates for W_1 - W_2 : F^p -> F^q, 1 < p <= q < inf.

    alpha * limsup (m_z(psi1, phi1) + m_z(psi2, phi2))
        <= ||W_1 - W_2||_e <=
    sum_j 2 (q / (p |a_j|^2))^(1/q) limsup m_z(psi_j, phi_j)

with alpha = 1/2 when a1 != a2 and alpha = rho(b1, b2) when a1 = a2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .classifier import Verdict, _check_exponents, classify_difference, limsup_m
from .errors import IdenticalMaps, NotBounded, ReducesToSingle, UnsupportedExponents
from .symbols import AffineMap, OperatorSpec, PairSpec


@dataclass(frozen=True)
class EssBounds:
    lower: float
    upper: float
    alpha: float
    limsup1: float
    limsup2: float


def rho(w1, w2) -> float:
    """|w1 - w2|^2 / (2 (2 + |w1 - w2|^2)), a value in [0, 1/2)."""
    d2 = abs(complex(w1) - complex(w2)) ** 2
    return d2 / (2 * (2 + d2))


def alpha_pair(phi1: AffineMap, phi2: AffineMap) -> float:
    if phi1 == phi2:
        raise IdenticalMaps("alpha is undefined for identical maps")
    if phi1.a != phi2.a:
        return 0.5
    return rho(phi1.b, phi2.b)


def _check_range(p, q):
    p, q = _check_exponents(p, q)
    if not (1 < p <= q):
        raise UnsupportedExponents(f"essential-norm bounds need 1 < p <= q < inf, got p={p}, q={q}")
    return p, q


def essnorm_upper_single(spec: OperatorSpec, p, q) -> float:
    """2 (q / (p |a|^2))^(1/q) limsup m_z(psi, phi)."""
    p, q = _check_range(p, q)
    if spec.phi.a == 0:
        raise ReducesToSingle("a = 0: the operator is compact, no estimate of this form")
    lim = limsup_m(spec.psi, spec.phi)
    if lim == 0 or math.isinf(lim):
        return lim
    p, q = float(p), float(q)
    return 2 * (q / (p * abs(spec.phi.a) ** 2)) ** (1 / q) * lim


def essnorm_bounds_difference(pair: PairSpec, p, q) -> EssBounds:
    p, q = _check_range(p, q)
    s1, s2 = pair.first, pair.second
    if s1.phi == s2.phi:
        raise IdenticalMaps("phi1 and phi2 coincide")
    if s1.phi.a == 0 or s2.phi.a == 0:
        raise ReducesToSingle("a constant map gives a compact summand; use the single-operator estimate")
    if s1.psi.is_zero or s2.psi.is_zero:
        raise ReducesToSingle("a zero weight leaves a single operator")
    if classify_difference(pair, p, q).verdict == Verdict.UNBOUNDED:
        raise NotBounded("the difference is unbounded")
    lim1 = limsup_m(s1.psi, s1.phi)
    lim2 = limsup_m(s2.psi, s2.phi)
    alpha = alpha_pair(s1.phi, s2.phi)
    # each m_z has a genuine limit in this family, so limsup of the sum is the sum
    lower = alpha * (lim1 + lim2)
    upper = essnorm_upper_single(s1, p, q) + essnorm_upper_single(s2, p, q)
    return EssBounds(lower, upper, alpha, lim1, lim2)
