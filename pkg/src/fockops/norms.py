"""Norms on the Fock spaces F^p and F^infinity.

    ||f||_p   = ( p/(2 pi) * int_C |f(z)|^p exp(-p |z|^2 / 2) dA(z) )^(1/p)
    ||f||_inf = sup_z |f(z)| exp(-|z|^2 / 2)

The integral is done in polar coordinates: Gauss-Legendre in r on
[0, radial_max] and the trapezoid rule in theta (spectrally accurate for
periodic integrands).  The part of the plane outside radial_max is bounded
analytically from the growth constants of the symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._search import maximize_polar, search_radius
from .errors import TailNotNegligible
from .symbols import ExpPolySymbol, eval_symbol, log_abs


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature settings.  ``radial_max=None`` picks the radius per symbol."""

    radial_max: float | None = None
    radial_nodes: int = 256
    angular_nodes: int = 128
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.radial_max is not None and not self.radial_max > 0:
            raise ValueError("radial_max must be positive")
        if self.radial_nodes < 16 or self.angular_nodes < 16:
            raise ValueError("radial_nodes and angular_nodes must be at least 16")
        if not 0 < self.rel_tol <= 1e-2:
            raise ValueError("rel_tol must lie in (0, 1e-2]")


DEFAULT_QUAD = QuadConfig()


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def log_monomial_norm(n: int, p: float) -> float:
    p = float(p)
    return 0.5 * n * math.log(2 / p) + log_gamma(n * p / 2 + 1) / p


def monomial_norm(n: int, p: float) -> float:
    """||z^n||_p = (2/p)^(n/2) Gamma(n p / 2 + 1)^(1/p)."""
    return math.exp(log_monomial_norm(n, p))


def log_monomial_norm_asymptotic(n: int, p: float) -> float:
    if n < 1:
        raise ValueError("asymptotic form needs n >= 1")
    p = float(p)
    return 0.5 * n * (math.log(n) - 1) + math.log(math.pi * p * n) / (2 * p)


def monomial_norm_asymptotic(n: int, p: float) -> float:
    """Stirling form (n/e)^(n/2) (pi p n)^(1/(2p)) of ||z^n||_p."""
    return math.exp(log_monomial_norm_asymptotic(n, p))


def default_radius(f: ExpPolySymbol, p: float) -> float:
    _, d, sigma = f.growth_constants()
    p = float(p)
    return max(8.0, 2 * sigma / p + 2 * math.sqrt(2 * d / p) + 6)


def log_tail_bound(f: ExpPolySymbol, p: float, radius: float) -> float:
    """log of an upper bound for p * int_{|z|>R} |f|^p exp(-p|z|^2/2) dA / (2 pi).

    With |f(z)| <= C (1+r)^d exp(sigma r) and r <= 1+r the radial integrand is
    at most C^p exp(g(r)), g(r) = (dp+1) log(1+r) + p sigma r - p r^2/2.
    g is concave, so g(r) <= g(R) + g'(R)(r-R) and the tail is at most
    p C^p exp(g(R)) / (-g'(R)) when g'(R) < 0.  Returns +inf otherwise.
    """
    C, d, sigma = f.growth_constants()
    p = float(p)
    g = (d * p + 1) * math.log1p(radius) + p * sigma * radius - p * radius**2 / 2
    dg = (d * p + 1) / (1 + radius) + p * sigma - p * radius
    if dg >= 0:
        return math.inf
    return math.log(p) + p * math.log(C) + g - math.log(-dg)


@lru_cache(maxsize=32)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _log_integral(f: ExpPolySymbol, p: float, radius: float, cfg: QuadConfig) -> float:
    x, w = _gauss_legendre(cfg.radial_nodes)
    r = radius * (x + 1) / 2
    wr = w * radius / 2
    theta = 2 * np.pi * np.arange(cfg.angular_nodes) / cfg.angular_nodes
    z = r[:, None] * np.exp(1j * theta)[None, :]
    logv = p * (log_abs(f, z) - 0.5 * r[:, None] ** 2) + np.log(r)[:, None]
    top = np.max(logv)
    s = np.sum(wr * np.mean(np.exp(logv - top), axis=1))
    return math.log(p) + top + math.log(s)


def log_norm_p(f: ExpPolySymbol, p: float, cfg: QuadConfig | None = None) -> float:
    """log ||f||_p; -inf for the zero symbol."""
    cfg = cfg or DEFAULT_QUAD
    p = float(p)
    if not (p > 0 and math.isfinite(p)):
        raise ValueError("norm_p needs a finite p > 0")
    if f.is_zero:
        return -math.inf
    fixed = cfg.radial_max is not None
    radius = cfg.radial_max if fixed else default_radius(f, p)
    for _ in range(40):
        log_i = _log_integral(f, p, radius, cfg)
        log_t = log_tail_bound(f, p, radius)
        # (I + T)^(1/p) / I^(1/p) - 1 ~ T / (p I)
        if log_t <= math.log(p * cfg.rel_tol) + log_i:
            return log_i / p
        if fixed:
            raise TailNotNegligible(
                f"tail bound exp({log_t:.3g}) exceeds rel_tol at radial_max={radius:g}; raise radial_max")
        radius *= 1.25
    raise TailNotNegligible(f"no admissible radius found (last tried {radius:g})")


def norm_p(f: ExpPolySymbol, p: float, cfg: QuadConfig | None = None) -> float:
    return math.exp(log_norm_p(f, p, cfg))


def log_norm_sup(f: ExpPolySymbol, cfg: QuadConfig | None = None, seeds=()) -> float:
    cfg = cfg or DEFAULT_QUAD
    if f.is_zero:
        return -math.inf
    C, d, sigma = f.growth_constants()
    log_c = math.log(C)

    def logfun(z):
        return log_abs(f, z) - 0.5 * np.abs(z) ** 2

    def bound(r):
        return log_c + d * math.log1p(r) + sigma * r - r * r / 2

    radius = cfg.radial_max or search_radius(logfun, bound, seeds)
    val, _ = maximize_polar(logfun, radius, seeds, n_r=cfg.radial_nodes, n_theta=cfg.angular_nodes)
    return val


def norm_sup(f: ExpPolySymbol, cfg: QuadConfig | None = None, seeds=()) -> float:
    """sup_z |f(z)| exp(-|z|^2/2).

    Finite for every symbol in the family: the Gaussian factor beats
    polynomial-times-exponential growth.  ``seeds`` are extra candidate points
    handed to the local ascent.
    """
    return math.exp(log_norm_sup(f, cfg, seeds))


def pointwise_bound_margin(f: ExpPolySymbol, p: float, z: complex,
                           cfg: QuadConfig | None = None) -> float:
    """exp(|z|^2/2) ||f||_p - |f(z)|, which is never negative."""
    z = complex(z)
    return math.exp(abs(z) ** 2 / 2 + log_norm_p(f, p, cfg)) - abs(eval_symbol(f, z))
