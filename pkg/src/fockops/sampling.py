"""Seeded random draws of symbols, operators and pairs for property checks."""

from __future__ import annotations

import numpy as np

from .symbols import AffineMap, ExpPolySymbol, ExpPolyTerm, OperatorSpec, PairSpec


def random_complex(rng: np.random.Generator, scale: float = 1.0) -> complex:
    return complex(*rng.uniform(-scale, scale, 2))


def random_symbol(rng: np.random.Generator, max_terms: int = 2, max_degree: int = 1,
                  freq_scale: float = 1.0) -> ExpPolySymbol:
    """Nonzero exp-poly symbol with coefficients in the unit square."""
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        deg = int(rng.integers(0, max_degree + 1))
        coeffs = tuple(random_complex(rng) for _ in range(deg + 1))
        terms.append(ExpPolyTerm(coeffs, random_complex(rng, freq_scale)))
    sym = ExpPolySymbol(tuple(terms))
    return sym if not sym.is_zero else ExpPolySymbol.constant(1)


def random_unit(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def random_contraction_spec(rng: np.random.Generator, max_modulus: float = 0.7) -> OperatorSpec:
    """|a| in (0, max_modulus): compact for every p, q."""
    a = max_modulus * rng.uniform(0.1, 1) * random_unit(rng)
    return OperatorSpec(random_symbol(rng, freq_scale=0.5), AffineMap(a, random_complex(rng, 0.5)))


def random_unitary_spec(rng: np.random.Generator) -> OperatorSpec:
    """|a| = 1 with the weight c exp(-a conj(b) z): m_z is the constant |c| e^{|b|^2/2}."""
    a, b = random_unit(rng), random_complex(rng)
    c = complex(*rng.uniform(0.2, 1.5, 2))
    return OperatorSpec(ExpPolySymbol.term((c,), -a * b.conjugate()), AffineMap(a, b))


def random_bounded_spec(rng: np.random.Generator) -> OperatorSpec:
    """Bounded F^p -> F^q for p <= q; compact or not with equal odds."""
    return random_contraction_spec(rng) if rng.uniform() < 0.5 else random_unitary_spec(rng)


def random_unbounded_spec(rng: np.random.Generator) -> OperatorSpec:
    """|a| = 1 with a weight whose shifted frequency is nonzero, or |a| > 1."""
    if rng.uniform() < 0.5:
        a = rng.uniform(1.1, 2) * random_unit(rng)
        return OperatorSpec(random_symbol(rng), AffineMap(a, random_complex(rng)))
    a, b = random_unit(rng), random_complex(rng)
    shift = -a * b.conjugate() + random_complex(rng) + 0.3
    return OperatorSpec(ExpPolySymbol.term(tuple(random_complex(rng) + 0.1 for _ in range(2)), shift),
                        AffineMap(a, b))


def random_spec(rng: np.random.Generator) -> OperatorSpec:
    return random_bounded_spec(rng) if rng.uniform() < 0.7 else random_unbounded_spec(rng)


def random_bounded_pair(rng: np.random.Generator) -> PairSpec:
    return PairSpec(random_bounded_spec(rng), random_bounded_spec(rng))
