"""Exp-poly symbols and affine maps.

Every weight and test function lives in the family

    f(z) = sum_j Q_j(z) exp(s_j z),

finite sums of polynomials times exponentials.  The family is closed under
``f -> psi * (f o phi)`` for affine ``phi`` and under subtraction, so
weighted composition operators act on it exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MERGE_RTOL = 1e-12


def _as_complex(x, name: str = "value") -> complex:
    z = complex(x)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return z


def _trim(coeffs: Iterable) -> tuple[complex, ...]:
    c = [_as_complex(v, "coefficient") for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul(p: Sequence[complex], q: Sequence[complex]) -> list[complex]:
    if not p or not q:
        return []
    return list(np.convolve(np.asarray(p, complex), np.asarray(q, complex)))


def _poly_compose_affine(coeffs: Sequence[complex], a: complex, b: complex) -> list[complex]:
    """Coefficients of Q(a z + b), lowest degree first (Horner in polynomials)."""
    if not coeffs:
        return []
    out = [complex(coeffs[-1])]
    for c in reversed(coeffs[:-1]):
        out = _poly_mul(out, [b, a])
        out[0] += c
    return out


@dataclass(frozen=True)
class AffineMap:
    """phi(z) = a z + b.  No constraint on |a|; classification decides that."""

    a: complex
    b: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "a", _as_complex(self.a, "a"))
        object.__setattr__(self, "b", _as_complex(self.b, "b"))

    def __call__(self, z):
        return self.a * z + self.b


IDENTITY = AffineMap(1, 0)


@dataclass(frozen=True)
class ExpPolyTerm:
    """Q(z) exp(s z) with ``coeffs`` listed from degree 0 upward."""

    coeffs: tuple[complex, ...]
    s: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))
        object.__setattr__(self, "s", _as_complex(self.s, "frequency"))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        return np.polyval(self.coeffs[::-1], z) * np.exp(self.s * z)


def _same_frequency(s: complex, t: complex) -> bool:
    return abs(s - t) <= MERGE_RTOL * (1 + abs(s))


def _normalize(terms: Iterable[ExpPolyTerm]) -> tuple[ExpPolyTerm, ...]:
    buckets: list[list] = []  # [frequency, coefficient list]
    for t in terms:
        if t.is_zero:
            continue
        for bucket in buckets:
            if _same_frequency(bucket[0], t.s):
                acc = bucket[1]
                if len(acc) < len(t.coeffs):
                    acc.extend([0j] * (len(t.coeffs) - len(acc)))
                for k, c in enumerate(t.coeffs):
                    acc[k] += c
                break
        else:
            buckets.append([t.s, list(t.coeffs)])
    out = [ExpPolyTerm(tuple(c), s) for s, c in buckets]
    out = [t for t in out if not t.is_zero]
    out.sort(key=lambda t: (t.s.real, t.s.imag))
    return tuple(out)


@dataclass(frozen=True)
class ExpPolySymbol:
    """Normalized finite sum of :class:`ExpPolyTerm`; no terms means the zero function."""

    terms: tuple[ExpPolyTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", _normalize(self.terms))

    # constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c) -> "ExpPolySymbol":
        return cls((ExpPolyTerm((c,)),))

    @classmethod
    def monomial(cls, n: int, c=1) -> "ExpPolySymbol":
        return cls((ExpPolyTerm((0,) * n + (c,)),))

    @classmethod
    def term(cls, coeffs, s=0) -> "ExpPolySymbol":
        return cls((ExpPolyTerm(tuple(coeffs), s),))

    # queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def frequencies(self) -> tuple[complex, ...]:
        return tuple(t.s for t in self.terms)

    @property
    def degree(self) -> int:
        return max((t.degree for t in self.terms), default=-1)

    def constant_value(self) -> complex | None:
        """The value c if the symbol is the constant c (including 0), else None."""
        if self.is_zero:
            return 0j
        if len(self.terms) == 1 and self.terms[0].degree == 0 and self.terms[0].s == 0:
            return self.terms[0].coeffs[0]
        return None

    def growth_constants(self) -> tuple[float, int, float]:
        """(C, d, sigma) with |f(z)| <= C (1+|z|)^d exp(sigma |z|) for all z."""
        c = sum(sum(abs(v) for v in t.coeffs) for t in self.terms)
        return c, max(self.degree, 0), max((abs(t.s) for t in self.terms), default=0.0)

    # arithmetic -------------------------------------------------------

    def __call__(self, z):
        return eval_symbol(self, z)

    def __add__(self, other: "ExpPolySymbol") -> "ExpPolySymbol":
        return ExpPolySymbol(self.terms + other.terms)

    def __neg__(self) -> "ExpPolySymbol":
        return self.scale(-1)

    def __sub__(self, other: "ExpPolySymbol") -> "ExpPolySymbol":
        return subtract(self, other)

    def scale(self, c) -> "ExpPolySymbol":
        c = _as_complex(c)
        return ExpPolySymbol(tuple(ExpPolyTerm(tuple(c * v for v in t.coeffs), t.s) for t in self.terms))


ZERO = ExpPolySymbol()
ONE = ExpPolySymbol.constant(1)


def kernel(w) -> ExpPolySymbol:
    """K_w(z) = exp(conj(w) z)."""
    return ExpPolySymbol.term((1,), complex(w).conjugate())


def normalized_kernel(w) -> ExpPolySymbol:
    """k_w(z) = exp(conj(w) z - |w|^2 / 2)."""
    w = complex(w)
    return ExpPolySymbol.term((math.exp(-abs(w) ** 2 / 2),), w.conjugate())


@dataclass(frozen=True)
class OperatorSpec:
    """W_{psi, phi} f = psi * (f o phi)."""

    psi: ExpPolySymbol
    phi: AffineMap


@dataclass(frozen=True)
class PairSpec:
    """The difference W_first - W_second."""

    first: OperatorSpec
    second: OperatorSpec


def eval_symbol(f: ExpPolySymbol, z):
    """Evaluate f at a scalar or array of points."""
    z_arr = np.asarray(z, dtype=complex)
    out = np.zeros_like(z_arr)
    for t in f.terms:
        out = out + t(z_arr)
    return complex(out) if np.ndim(z) == 0 else out


def log_abs(f: ExpPolySymbol, z):
    """log |f(z)| without overflow in the exponentials; -inf at zeros."""
    z = np.asarray(z, dtype=complex)
    if f.is_zero:
        return np.full(z.shape, -np.inf)
    shift = np.max([np.real(t.s * z) for t in f.terms], axis=0)
    acc = np.zeros(z.shape, dtype=complex)
    for t in f.terms:
        acc = acc + np.polyval(t.coeffs[::-1], z) * np.exp(t.s * z - shift)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(acc)) + shift


def eval_affine(phi: AffineMap, z):
    return phi(z)


def apply_operator(spec: OperatorSpec, f: ExpPolySymbol) -> ExpPolySymbol:
    """psi * (f o phi), exactly, inside the family."""
    a, b = spec.phi.a, spec.phi.b
    out = []
    for t in f.terms:
        q = [c * cmath.exp(t.s * b) for c in _poly_compose_affine(t.coeffs, a, b)]
        freq = t.s * a
        for u in spec.psi.terms:
            out.append(ExpPolyTerm(tuple(_poly_mul(u.coeffs, q)), u.s + freq))
    return ExpPolySymbol(tuple(out))


def subtract(f: ExpPolySymbol, g: ExpPolySymbol) -> ExpPolySymbol:
    neg = tuple(ExpPolyTerm(tuple(-c for c in t.coeffs), t.s) for t in g.terms)
    return ExpPolySymbol(f.terms + neg)


def diff_kernel_image(pair: PairSpec, w) -> ExpPolySymbol:
    """(W_1 - W_2) k_w."""
    k = normalized_kernel(w)
    return subtract(apply_operator(pair.first, k), apply_operator(pair.second, k))
