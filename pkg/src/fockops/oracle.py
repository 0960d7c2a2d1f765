"""Independent numerical evidence for the symbolic verdicts.

Kernel probes (||L k_w||_q with ||k_w||_p = 1), inequality checkers,
the monomial divergence sequence, and truncated matrices of W on F^2 in the
orthonormal basis e_n = z^n / sqrt(n!).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classifier import Verdict, classify_single, m_value
from .errors import NoConvergence, NonzeroOffsets, UnsupportedExponents
from .essnorm import rho
from .norms import QuadConfig, log_monomial_norm, norm_p, norm_sup
from .symbols import (
    ZERO,
    AffineMap,
    ExpPolySymbol,
    OperatorSpec,
    PairSpec,
    apply_operator,
    diff_kernel_image,
    eval_symbol,
    kernel,
    normalized_kernel,
)

DEFAULT_PROBES = tuple(
    [0j] + [r * complex(math.cos(math.pi * k / 8), math.sin(math.pi * k / 8))
            for r in (1, 2, 3, 4) for k in range(16)]
)


@dataclass(frozen=True)
class CheckResult:
    lhs: float
    rhs: float
    tol: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tol

    def as_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "margin": self.margin, "tol": self.tol,
                "pass": self.passed}


@dataclass(frozen=True)
class TruncatedMatrix:
    dim: int
    entries: np.ndarray


def _two_kernels(alpha1, alpha2, w1, w2) -> ExpPolySymbol:
    return kernel(w1).scale(alpha1) + kernel(w2).scale(alpha2)


def supnorm_two_kernels(alpha1, alpha2, w1, w2, cfg: QuadConfig | None = None) -> float:
    """|| alpha1 K_w1 + alpha2 K_w2 ||_inf."""
    return norm_sup(_two_kernels(alpha1, alpha2, w1, w2), cfg, seeds=(complex(w1), complex(w2)))


def _kernel_sup_norms(alpha1, alpha2, w1, w2) -> tuple[float, float]:
    return (abs(alpha1) * math.exp(abs(w1) ** 2 / 2), abs(alpha2) * math.exp(abs(w2) ** 2 / 2))


def lemma_est_check(alpha1, alpha2, w1, w2, cfg: QuadConfig | None = None) -> CheckResult:
    """||a1 K_w1 + a2 K_w2||_inf >= rho(w1, w2) (|a1| ||K_w1||_inf + |a2| ||K_w2||_inf)."""
    A1, A2 = _kernel_sup_norms(alpha1, alpha2, w1, w2)
    lhs = supnorm_two_kernels(alpha1, alpha2, w1, w2, cfg)
    rhs = rho(w1, w2) * (A1 + A2)
    return CheckResult(lhs, rhs, 1e-9 * (1 + rhs))


def two_point_check(alpha1, alpha2, w1, w2) -> CheckResult:
    """Sum of the weighted values at z = w1 and z = w2 against
    (|a1| ||K_w1|| + |a2| ||K_w2||)(1 - exp(-|w1 - w2|^2 / 2)).

    Since 1 - e^{-x} >= x / (1 + x) the right side dominates
    2 rho(w1, w2) (...), so this is the sharper intermediate step."""
    f = _two_kernels(alpha1, alpha2, w1, w2)
    w1, w2 = complex(w1), complex(w2)
    v1 = abs(eval_symbol(f, w1)) * math.exp(-abs(w1) ** 2 / 2)
    v2 = abs(eval_symbol(f, w2)) * math.exp(-abs(w2) ** 2 / 2)
    A1, A2 = _kernel_sup_norms(alpha1, alpha2, w1, w2)
    rhs = (A1 + A2) * -math.expm1(-abs(w1 - w2) ** 2 / 2)
    return CheckResult(v1 + v2, rhs, 1e-9 * (1 + rhs))


def probe_lower_bound(pair: PairSpec, p, q, probes=None, cfg: QuadConfig | None = None) -> float:
    """max_w ||(W_1 - W_2) k_w||_q, a lower bound for ||W_1 - W_2 : F^p -> F^q||."""
    values = probe_values(pair, q, probes, cfg)
    return max(values) if values else 0.0


def probe_values(pair: PairSpec, q, probes=None, cfg: QuadConfig | None = None) -> list[float]:
    probes = DEFAULT_PROBES if probes is None else probes
    return [norm_p(diff_kernel_image(pair, w), q, cfg) for w in probes]


def essential_part(pair: PairSpec, p, q) -> PairSpec:
    """The pair with every compact constituent replaced by the zero operator.

    Removing compact summands leaves the essential norm unchanged."""
    def keep(spec):
        if classify_single(spec, p, q).verdict == Verdict.COMPACT:
            return OperatorSpec(ZERO, spec.phi)
        return spec
    return PairSpec(keep(pair.first), keep(pair.second))


def essential_probe(pair: PairSpec, p, q, probes=None, cfg: QuadConfig | None = None) -> float:
    """Kernel probe of the non-compact part of W_1 - W_2."""
    return probe_lower_bound(essential_part(pair, p, q), p, q, probes, cfg)


def eq1_check(pair: PairSpec, q, z, cfg: QuadConfig | None = None) -> CheckResult:
    """max(||L k_{phi1(z)}||_q, ||L k_{phi2(z)}||_q) >= rho(phi1(z), phi2(z)) (m_z1 + m_z2)."""
    z = complex(z)
    s1, s2 = pair.first, pair.second
    w1, w2 = s1.phi(z), s2.phi(z)
    lhs = max(norm_p(diff_kernel_image(pair, w), q, cfg) for w in (w1, w2))
    m1 = m_value(s1.psi, s1.phi, z) if not s1.psi.is_zero else 0.0
    m2 = m_value(s2.psi, s2.phi, z) if not s2.psi.is_zero else 0.0
    rhs = rho(w1, w2) * (m1 + m2)
    return CheckResult(lhs, rhs, 1e-9 * (1 + rhs))


def pointwise_check(f: ExpPolySymbol, p, z, cfg: QuadConfig | None = None) -> CheckResult:
    """exp(|z|^2/2) ||f||_p >= |f(z)|."""
    z = complex(z)
    lhs = math.exp(abs(z) ** 2 / 2) * norm_p(f, p, cfg)
    rhs = abs(eval_symbol(f, z))
    return CheckResult(lhs, rhs, 1e-9 * (1 + rhs))


def divergence_sequence(c1, phi1: AffineMap, c2, phi2: AffineMap, p, q, N: int) -> list[float]:
    """r_n = |c1 a1^n + c2 a2^n| ||z^n||_q / ||z^n||_p for n = 0..N."""
    if phi1.b != 0 or phi2.b != 0:
        raise NonzeroOffsets("divergence sequence needs phi_j(z) = a_j z")
    if not float(q) < float(p):
        raise UnsupportedExponents("divergence sequence is for q < p")
    c1, c2 = complex(c1), complex(c2)
    out = []
    for n in range(N + 1):
        amp = abs(c1 * phi1.a ** n + c2 * phi2.a ** n)
        out.append(amp * math.exp(log_monomial_norm(n, q) - log_monomial_norm(n, p)) if amp else 0.0)
    return out


def compactness_decay_probe(spec: OperatorSpec, q, direction, radii, cfg: QuadConfig | None = None) -> list[float]:
    """||W k_{r u}||_q along the ray with unit direction u."""
    u = complex(direction)
    if abs(abs(u) - 1) > 1e-12:
        raise ValueError("direction must have modulus 1")
    return [norm_p(apply_operator(spec, normalized_kernel(r * u)), q, cfg) if not spec.psi.is_zero else 0.0
            for r in radii]


def _taylor(psi: ExpPolySymbol, N: int) -> np.ndarray:
    """First N Taylor coefficients of psi (exact: only degrees < N are needed)."""
    out = np.zeros(N, dtype=np.clongdouble)
    for t in psi.terms:
        # e^{s z} = sum_k s^k z^k / k!
        ex = np.empty(N, dtype=np.clongdouble)
        ex[0] = 1
        s = np.clongdouble(t.s)
        for k in range(1, N):
            ex[k] = ex[k - 1] * s / k
        for i, c in enumerate(t.coeffs[:N]):
            out[i:] += np.clongdouble(c) * ex[: N - i]
    return out


def hilbert_matrix(spec: OperatorSpec, N: int) -> TruncatedMatrix:
    """Leading N x N block of W_{psi,phi} on F^2.

    Entry (m, n) = sqrt(m!/n!) [z^m] psi(z) phi(z)^n, built as the product of
    the (lower-triangular) multiplication matrix of psi and the
    (upper-triangular) matrix of C_phi, whose truncations are exact.
    Entry sums cancel heavily when |a| = 1, so everything is accumulated in
    extended precision in a fixed order; each block is then also exactly the
    leading block of every larger truncation.
    """
    if N < 1:
        raise ValueError("N must be positive")
    a, b = np.clongdouble(spec.phi.a), np.clongdouble(spec.phi.b)
    j = np.arange(N, dtype=np.longdouble)
    sqrt_fact = np.cumprod(np.sqrt(np.maximum(j, 1)))
    fact = sqrt_fact ** 2
    coeffs = _taylor(spec.psi, N)
    a_pow = a ** np.arange(N)
    b_pow = b ** np.arange(N)
    mult = np.zeros((N, N), dtype=np.clongdouble)
    comp = np.zeros((N, N), dtype=np.clongdouble)
    for m in range(N):
        k = np.arange(m + 1)
        mult[m, k] = coeffs[m - k] * sqrt_fact[m] / sqrt_fact[k]
    for n in range(N):
        k = np.arange(n + 1)
        # sqrt(n!/k!) a^k b^(n-k) / (n-k)!
        comp[k, n] = a_pow[k] * b_pow[n - k] * sqrt_fact[n] / (sqrt_fact[k] * fact[n - k])
    prod = np.einsum("mk,kn->mn", mult, comp, optimize=False)
    return TruncatedMatrix(N, prod.astype(complex))


def matrix_norm_estimate(M: TruncatedMatrix, tol: float = 1e-12, max_iter: int = 10_000) -> float:
    """Largest singular value of M from the Gram matrix G = M^H M.

    Power iteration accelerated by keeping every iterate: the top Ritz value of
    G on the Krylov space span{x, Gx, G^2 x, ...} (x the all-ones vector),
    built by Lanczos with full reorthogonalization.  Plain power iteration
    stalls when the top of the spectrum is clustered, which happens for the
    near-unitary truncations of |a| = 1 operators.  Stops once the Ritz
    residual is below tol * value, or when the Krylov space is exhausted.
    """
    A = np.asarray(M.entries, dtype=complex)
    n = A.shape[1]
    G = A.conj().T @ A
    g_scale = float(np.max(np.abs(G))) if G.size else 0.0
    if g_scale == 0:
        return 0.0
    q = np.ones(n, dtype=complex) / math.sqrt(n)
    basis = [q]
    alphas: list[float] = []
    betas: list[float] = []
    theta = 0.0
    for k in range(min(max_iter, n)):
        w = G @ basis[-1]
        alphas.append(float(np.vdot(basis[-1], w).real))
        Q = np.array(basis).T
        for _ in range(2):
            w = w - Q @ (Q.conj().T @ w)
        beta = float(np.linalg.norm(w))
        T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        vals, vecs = np.linalg.eigh(T)
        theta = float(vals[-1])
        residual = beta * abs(vecs[-1, -1])
        if residual <= tol * theta or beta <= 1e-15 * g_scale * n or k == n - 1:
            return math.sqrt(max(theta, 0.0))
        betas.append(beta)
        basis.append(w / beta)
    raise NoConvergence(f"Krylov iteration did not reach tol={tol} in {max_iter} steps")
