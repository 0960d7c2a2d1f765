"""Acceptance criteria, one marked group per criterion.

The terminal summary (see conftest.py) prints one PASS/FAIL line per
criterion.  Tests run in file order; the last one times the whole module.
"""

import json
import math
import time

import numpy as np
import pytest

from conftest import load_corpus
from fockops.classifier import Verdict, classify_single, limsup_m, m_value, sup_m
from fockops.cli import main
from fockops.essnorm import essnorm_bounds_difference
from fockops.norms import (
    QuadConfig,
    monomial_norm,
    monomial_norm_asymptotic,
    norm_p,
)
from fockops.oracle import (
    DEFAULT_PROBES,
    compactness_decay_probe,
    divergence_sequence,
    eq1_check,
    essential_probe,
    hilbert_matrix,
    lemma_est_check,
    matrix_norm_estimate,
    pointwise_check,
    probe_lower_bound,
    probe_values,
    two_point_check,
)
from fockops.sampling import random_bounded_pair, random_bounded_spec, random_complex, random_symbol
from fockops.symbols import ONE, ZERO, AffineMap, ExpPolySymbol, OperatorSpec, PairSpec, kernel, normalized_kernel

MODULE_START = time.perf_counter()
CORPUS = load_corpus()
SEED = 20240611
# probes only need 1e-3; this grid agrees with the default one to ~1e-14 on the family
PROBE_QUAD = QuadConfig(radial_nodes=128, angular_nodes=64)
RADII = (2, 4, 6, 8)


def single(psi, a, b=0):
    return OperatorSpec(psi, AffineMap(a, b))


# 1 -------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_c01_norm_identities():
    t0 = time.perf_counter()
    worst = 0.0
    for p in (0.5, 1, 2, 3.7):
        for n in range(21):
            ref = monomial_norm(n, p)
            worst = max(worst, abs(norm_p(ExpPolySymbol.monomial(n), p) - ref) / ref)
    for p in (1, 2, 4):
        for r in (0, 0.5, 1, 1.5, 2, 2.5):
            for k in range(8):
                w = r * np.exp(1j * np.pi * k / 4)
                ref = math.exp(abs(w) ** 2 / 2)
                worst = max(worst, abs(norm_p(kernel(w), p) - ref) / ref)
    elapsed = time.perf_counter() - t0
    print(f"worst relative error {worst:.3e}, {elapsed:.2f} s")
    assert worst <= 1e-6
    assert elapsed < 10


# 2 -------------------------------------------------------------------------

@pytest.mark.criterion(2)
@pytest.mark.parametrize("p", [2, 4])
def test_c02_stirling(p):
    ratio = monomial_norm(200, p) / monomial_norm_asymptotic(200, p)
    assert 0.99 <= ratio <= 1.01


# 3 -------------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_c03_pointwise_bound_random():
    rng = np.random.default_rng(SEED)
    failures = 0
    for _ in range(1000):
        f = random_symbol(rng, max_terms=3, max_degree=2)
        p = float(rng.choice([0.5, 1, 2, 3.7]))
        res = pointwise_check(f, p, random_complex(rng, 2.5))
        failures += res.margin < -1e-9 * (1 + res.lhs)
    assert failures == 0


@pytest.mark.criterion(3)
def test_c03_pointwise_equality_at_kernel():
    for w in (0, 1, 1 + 1j, -2j, 2.2 - 0.7j):
        for p in (0.5, 2, 3.7):
            res = pointwise_check(normalized_kernel(w), p, w)
            assert abs(res.margin) <= 1e-9 * (1 + res.lhs)


# 4 -------------------------------------------------------------------------

@pytest.mark.criterion(4)
def test_c04_two_kernel_estimate():
    rng = np.random.default_rng(SEED + 1)
    failed, failed_two_point = [], []
    for _ in range(1000):
        a1, a2 = random_complex(rng, 3), random_complex(rng, 3)
        w1, w2 = random_complex(rng, 2.1), random_complex(rng, 2.1)
        if not lemma_est_check(a1, a2, w1, w2).passed:
            failed.append((a1, a2, w1, w2))
        if not two_point_check(a1, a2, w1, w2).passed:
            failed_two_point.append((a1, a2, w1, w2))
    assert failed == [] and failed_two_point == []


# 5 -------------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_c05_kernel_pointwise_estimate():
    rng = np.random.default_rng(SEED + 2)
    failures = 0
    for _ in range(200):
        pair = random_bounded_pair(rng)
        q = float(rng.choice([1.5, 2, 3]))
        for _ in range(5):
            res = eq1_check(pair, q, random_complex(rng, 2))
            failures += res.margin < -1e-9 * (1 + res.rhs)
    assert failures == 0


# 6 -------------------------------------------------------------------------

def ray_max(spec, r, n=16):
    z = r * np.exp(2j * np.pi * np.arange(n) / n)
    return float(np.max(m_value(spec.psi, spec.phi, z)))


def disk_integral(spec, power, R):
    """int_{|z|<R} m_z^power dA by Gauss-Legendre x trapezoid."""
    x, w = np.polynomial.legendre.leggauss(200)
    r = R * (x + 1) / 2
    th = 2 * np.pi * np.arange(128) / 128
    z = r[:, None] * np.exp(1j * th)[None, :]
    vals = m_value(spec.psi, spec.phi, z) ** power
    return float(np.sum(w * R / 2 * r * 2 * np.pi * np.mean(vals, axis=1)))


def evidence_consistent(spec, p, q, verdict):
    """Numeric evidence that agrees with ``verdict``; returns a list of violations."""
    bad = []
    psi, phi = spec.psi, spec.phi
    grid = np.linspace(0, 12, 64)[:, None] * np.exp(2j * np.pi * np.arange(64) / 64)[None, :]
    sup = sup_m(psi, phi)
    if math.isfinite(sup) and np.max(m_value(psi, phi, grid)) > sup * (1 + 1e-6):
        bad.append("grid exceeds sup")
    if verdict == Verdict.COMPACT:
        if ray_max(spec, 12, 20) > 1e-6:
            bad.append("m_z not small at |z| = 12")
        if q < p:
            r = float(p) * float(q) / (float(p) - float(q))
            i8, i12 = disk_integral(spec, r, 8), disk_integral(spec, r, 12)
            if abs(i12 - i8) > 1e-6 * i12:
                bad.append("m_z^r integral not converged")
    elif verdict == Verdict.BOUNDED_NOT_COMPACT:
        lim = limsup_m(psi, phi)
        for r in (6, 12, 24):
            if abs(ray_max(spec, r) - lim) > 1e-9 * lim:
                bad.append(f"m_z not constant at {r}")
        decay = compactness_decay_probe(spec, q, 1, RADII)
        if any(abs(v - lim) > 1e-8 * lim for v in decay):
            bad.append("kernel images decay")
    else:
        m6, m24 = ray_max(spec, 6), ray_max(spec, 24)
        if m24 < m6 * (1 - 1e-9):
            bad.append("m_z decays")
        if q < p:
            r = float(p) * float(q) / (float(p) - float(q))
            if disk_integral(spec, r, 12) < 1.5 * disk_integral(spec, r, 8):
                bad.append("m_z^r integral looks convergent")
        elif m24 < 2 * m6:
            bad.append("m_z does not grow")
    return bad


def test_c06_corpus_covers_all_cells():
    cells = {tuple(e["cell"]) for e in CORPUS}
    for slope in ("|a|<1", "|a|=1 bounded", "|a|=1 unbounded", "a=0"):
        for exps in ("p<q", "p=q", "q<p"):
            assert (slope, exps) in cells
    assert len(CORPUS) >= 24


@pytest.mark.criterion(6)
@pytest.mark.parametrize("entry", CORPUS, ids=[e["id"] for e in CORPUS])
def test_c06_classification_battery(entry):
    spec, p, q = entry["spec"], entry["p"], entry["q"]
    verdict = classify_single(spec, p, q).verdict
    assert verdict.value == entry["expected"]
    assert evidence_consistent(spec, p, q, verdict) == []


# 7 -------------------------------------------------------------------------

DIV_ARGS = (1, AffineMap(1, 0), 1, AffineMap(-1, 0), 4, 2, 200)


@pytest.mark.criterion(7)
def test_c07_even_growth_matches_asymptotics():
    seq = divergence_sequence(*DIV_ARGS)
    p, q, n = 4, 2, 200
    # 2 ||z^n||_q / ||z^n||_p with the (n/e)^{n/2} factors cancelled
    predicted = 2 * (math.pi * q * n) ** (1 / (2 * q)) / (math.pi * p * n) ** (1 / (2 * p))
    assert abs(seq[n] / predicted - 1) <= 0.05
    even = seq[2::2]
    assert all(b > a for a, b in zip(even, even[1:]))
    # growth exponent 1/(2q) - 1/(2p) = 1/8 from the last two even samples
    slope = math.log(seq[200] / seq[100]) / math.log(2)
    assert abs(slope - 0.125) < 0.01


@pytest.mark.criterion(7)
def test_c07_max_reaches_ten_times_r0():
    seq = divergence_sequence(*DIV_ARGS)
    print(f"r0 = {seq[0]:.6g}, max r_n = {max(seq):.6g}, ratio = {max(seq) / seq[0]:.4f}")
    assert max(seq) >= 10 * seq[0]


# 8 -------------------------------------------------------------------------

@pytest.mark.criterion(8)
def test_c08_flip_pair_sandwich():
    pair = PairSpec(single(ONE, 1), single(ONE, -1))
    b = essnorm_bounds_difference(pair, 2, 2)
    assert (b.lower, b.upper) == (1.0, 4.0)
    values = probe_values(pair, 2)
    for w, v in zip(DEFAULT_PROBES, values):
        assert abs(v - math.sqrt(2 - 2 * math.exp(-2 * abs(w) ** 2))) <= 1e-8
    probe = max(values)
    assert probe >= math.sqrt(2) - 1e-6
    assert b.lower <= probe <= b.upper


@pytest.mark.criterion(8)
def test_c08_random_bounded_pairs():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(200):
        pair = random_bounded_pair(rng)
        p, q = sorted(rng.choice([1.5, 2, 3], size=2))
        b = essnorm_bounds_difference(pair, p, q)
        assert b.lower <= b.upper
        assert essential_probe(pair, p, q, cfg=PROBE_QUAD) <= b.upper * (1 + 1e-3)


# 9 -------------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_c09_exact_cases():
    ident = hilbert_matrix(single(ONE, 1), 32)
    assert np.array_equal(ident.entries, np.eye(32))
    assert matrix_norm_estimate(ident) == pytest.approx(1, abs=1e-14)
    diag = hilbert_matrix(single(ONE, 0.5j), 3)
    assert np.allclose(diag.entries, np.diag([1, 0.5j, -0.25]), rtol=0, atol=1e-16)
    assert matrix_norm_estimate(diag) == pytest.approx(1, abs=1e-14)


@pytest.mark.criterion(9)
@pytest.mark.parametrize("b", [0.3, 1, 1.5j, 1.06 + 1.06j])
def test_c09_point_evaluation(b):
    M = hilbert_matrix(single(ONE, 0, b), 20)
    assert abs(matrix_norm_estimate(M) - math.exp(abs(b) ** 2 / 2)) <= 1e-6


@pytest.mark.criterion(9)
def test_c09_truncations_monotone_and_stable():
    rng = np.random.default_rng(SEED + 4)
    for _ in range(20):
        spec = random_bounded_spec(rng)
        norms = [matrix_norm_estimate(hilbert_matrix(spec, n)) for n in (16, 32, 48, 64)]
        assert all(b >= a * (1 - 1e-12) for a, b in zip(norms, norms[1:]))
        assert abs(norms[3] - norms[2]) <= 1e-4 * norms[3]
        # kernel probe of the single operator is a lower bound for its norm
        probe = probe_lower_bound(PairSpec(spec, single(ZERO, 0)), 2, 2, cfg=PROBE_QUAD)
        assert probe <= norms[3] * (1 + 1e-3)


# 10 ------------------------------------------------------------------------

COMPACT = [e for e in CORPUS if e["expected"] == "compact" and e["spec"].phi.a != 0]


@pytest.mark.criterion(10)
@pytest.mark.parametrize("entry", COMPACT, ids=[e["id"] for e in COMPACT])
def test_c10_compact_kernel_decay(entry):
    for direction in (1, 1j):
        vals = compactness_decay_probe(entry["spec"], entry["q"], direction, RADII)
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= 1e-3 * vals[0]


# 11 ------------------------------------------------------------------------

CLI_JOBS = {
    "classify": {"kind": "classify-difference", "p": 2, "q": "3",
                 "pair": {"first": {"psi": [{"coeffs": [1], "s": -1}], "phi": {"a": 1, "b": 1}},
                          "second": {"psi": 1, "phi": {"a": 1, "b": 0}}}},
    "ess": {"kind": "ess-bounds", "p": 2, "q": 2,
            "pair": {"first": {"psi": 1, "phi": {"a": 1}}, "second": {"psi": 1, "phi": {"a": -1}}}},
    "verify": {"kind": "verify-lemmas",
               "draws": {"lemma_est": 30, "eq1_pairs": 5, "eq1_points": 2, "pointwise": 30}},
    "matrix": {"kind": "matrix", "p": 2, "q": 2, "sizes": [16, 32],
               "operator": {"psi": [{"coeffs": [1], "s": -1}], "phi": {"a": 1, "b": 1}}},
    "diverge": {"kind": "divergence", "p": 4, "q": 2, "c1": 1, "c2": 1,
                "phi1": {"a": 1}, "phi2": {"a": -1}, "N": 50},
}


@pytest.mark.criterion(11)
@pytest.mark.parametrize("command", sorted(CLI_JOBS))
def test_c11_cli_byte_identical(command, tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps(CLI_JOBS[command]))
    outs = []
    for fmt in ("json", "text"):
        for k in range(2):
            out = tmp_path / f"{fmt}{k}.out"
            assert main([command, "--config", str(cfg), "--seed", "42", "--format", fmt, "--out", str(out)]) == 0
            outs.append(out.read_bytes())
    assert outs[0] == outs[1] and outs[2] == outs[3]


@pytest.mark.criterion(11)
def test_c11_suite_runtime():
    elapsed = time.perf_counter() - MODULE_START
    print(f"acceptance module wall time {elapsed:.1f} s")
    assert elapsed < 120
