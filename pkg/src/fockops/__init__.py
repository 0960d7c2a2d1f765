"""Weighted composition operators W f = psi * (f o phi) on Fock spaces.

Symbols are finite sums of polynomial-times-exponential terms and maps are
affine, phi(z) = a z + b.  The package decides boundedness and compactness
of W and of differences W_1 - W_2 between F^p and F^q, brackets the
essential norm of a difference, and supplies numerical oracles (quadrature
norms, kernel probes, truncated matrices) to cross-check the verdicts.
"""

__version__ = "0.1.0"

from .classifier import (
    Classification,
    Verdict,
    classify_combination,
    classify_difference,
    classify_single,
    growth_profile,
    limsup_m,
    m_value,
    sup_m,
)
from .essnorm import EssBounds, alpha_pair, essnorm_bounds_difference, essnorm_upper_single, rho
from .norms import QuadConfig, monomial_norm, norm_p, norm_sup
from .symbols import AffineMap, ExpPolySymbol, ExpPolyTerm, OperatorSpec, PairSpec

__all__ = [
    "AffineMap", "Classification", "EssBounds", "ExpPolySymbol", "ExpPolyTerm", "OperatorSpec",
    "PairSpec", "QuadConfig", "Verdict", "alpha_pair", "classify_combination", "classify_difference",
    "classify_single", "essnorm_bounds_difference", "essnorm_upper_single", "growth_profile",
    "limsup_m", "m_value", "monomial_norm", "norm_p", "norm_sup", "rho", "sup_m",
]
