"""Batch front end.

Usage:
    fockops classify --config job.json [--format json|text] [--out PATH]
    fockops ess      --config job.json
    fockops verify   --config job.json --seed 42
    fockops probe    --config job.json
    fockops matrix   --config job.json
    fockops diverge  --config job.json

A job file is a JSON document.  Complex numbers are ``[re, im]`` pairs (a
bare real number is accepted too); exponents are numbers or exact strings
such as ``"3/2"``.  Symbols are lists of ``{"coeffs": [...], "s": [re, im]}``
terms, affine maps are ``{"a": ..., "b": ...}``.  Example::

    {"kind": "classify-single", "p": 2, "q": 2,
     "operator": {"psi": [{"coeffs": [[1, 0]], "s": [0, 0]}],
                  "phi": {"a": [0.5, 0], "b": [0, 0]}}}

Exit codes: 0 all mandatory checks pass, 1 a check failed or a module error
was embedded in the report, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .classifier import (
    Verdict,
    as_exponent,
    classify_combination,
    classify_difference,
    classify_single,
    limsup_m,
    m_value,
    slope_class,
    sup_m,
)
from .errors import ConfigError, FockError
from .essnorm import essnorm_bounds_difference
from .norms import QuadConfig
from .oracle import (
    DEFAULT_PROBES,
    compactness_decay_probe,
    divergence_sequence,
    eq1_check,
    essential_probe,
    hilbert_matrix,
    lemma_est_check,
    matrix_norm_estimate,
    pointwise_check,
    probe_values,
    two_point_check,
)
from .sampling import random_bounded_pair, random_symbol
from .symbols import AffineMap, ExpPolySymbol, ExpPolyTerm, OperatorSpec, PairSpec

KINDS = ("classify-single", "classify-difference", "classify-combination", "ess-bounds",
         "verify-lemmas", "probe", "matrix", "divergence")

SUBCOMMANDS = {
    "classify": ("classify-single", "classify-difference", "classify-combination"),
    "ess": ("ess-bounds",),
    "verify": ("verify-lemmas",),
    "probe": ("probe",),
    "matrix": ("matrix",),
    "diverge": ("divergence",),
}

VERIFY_DEFAULTS = {"lemma_est": 200, "eq1_pairs": 40, "eq1_points": 5, "pointwise": 200}


@dataclass
class Job:
    kind: str
    payload: dict
    echo: dict
    quad: QuadConfig = field(default_factory=QuadConfig)
    seed: int | None = None


@dataclass
class Report:
    job: dict
    seed: int | None
    results: dict = field(default_factory=dict)
    evidence: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    timing: float | None = None

    @property
    def ok(self) -> bool:
        return not self.errors and all(c["pass"] for c in self.checks if c.get("mandatory", True))

    def add_check(self, name, lhs, rhs, tol, oracle, mandatory=True, relation=">="):
        """Record ``lhs relation rhs`` up to ``tol``."""
        margin = lhs - rhs if relation == ">=" else rhs - lhs
        self.checks.append({"name": name, "lhs": lhs, "rhs": rhs, "relation": relation, "margin": margin,
                            "tol": tol, "oracle": oracle, "mandatory": mandatory,
                            "pass": bool(margin >= -tol)})

    def to_dict(self, with_timing: bool = False) -> dict:
        out = {"tool": {"name": "fockops", "version": __version__}, "job": self.job, "seed": self.seed,
               "results": self.results, "evidence": self.evidence, "checks": self.checks,
               "errors": self.errors, "ok": self.ok}
        if with_timing and self.timing is not None:
            out["timing_s"] = self.timing
        return out


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _complex(x, where: str) -> complex:
    if isinstance(x, bool):
        raise ConfigError(f"{where}: expected a number or [re, im]")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                                                   for v in x):
        return complex(x[0], x[1])
    raise ConfigError(f"{where}: expected a number or [re, im], got {x!r}")


def _symbol(x, where: str) -> ExpPolySymbol:
    if isinstance(x, (int, float, list)) and not (isinstance(x, list) and x and isinstance(x[0], dict)):
        if isinstance(x, list) and not x:
            return ExpPolySymbol()
        return ExpPolySymbol.constant(_complex(x, where))
    if not isinstance(x, list):
        raise ConfigError(f"{where}: expected a list of terms")
    terms = []
    for i, t in enumerate(x):
        if not isinstance(t, dict) or "coeffs" not in t:
            raise ConfigError(f"{where}[{i}]: each term needs 'coeffs'")
        coeffs = [_complex(c, f"{where}[{i}].coeffs[{k}]") for k, c in enumerate(t["coeffs"])]
        terms.append(ExpPolyTerm(tuple(coeffs), _complex(t.get("s", 0), f"{where}[{i}].s")))
    return ExpPolySymbol(tuple(terms))


def _affine(x, where: str) -> AffineMap:
    if not isinstance(x, dict) or "a" not in x:
        raise ConfigError(f"{where}: expected {{'a': ..., 'b': ...}}")
    return AffineMap(_complex(x["a"], f"{where}.a"), _complex(x.get("b", 0), f"{where}.b"))


def parse_operator(x, where: str) -> OperatorSpec:
    if not isinstance(x, dict) or "phi" not in x:
        raise ConfigError(f"{where}: expected {{'psi': ..., 'phi': ...}}")
    return OperatorSpec(_symbol(x.get("psi", 1), f"{where}.psi"), _affine(x["phi"], f"{where}.phi"))


def _exponent(x, name: str):
    try:
        return as_exponent(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{name} must be positive: {exc}") from None


def _require(doc: dict, key: str, kind: str):
    if key not in doc:
        raise ConfigError(f"{kind} job needs '{key}'")
    return doc[key]


def parse_config(text: str, default_kind: str | None = None) -> Job:
    """Parse and validate a job file."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ""
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}\n  {context}") from None
    if not isinstance(doc, dict):
        raise ConfigError("job file must be a JSON object")
    kind = doc.get("kind", default_kind)
    if kind not in KINDS:
        raise ConfigError(f"unknown or missing kind {kind!r}; expected one of {', '.join(KINDS)}")

    payload: dict = {}
    if "p" in doc or kind not in ("verify-lemmas",):
        payload["p"] = _exponent(_require(doc, "p", kind), "p")
        payload["q"] = _exponent(_require(doc, "q", kind), "q")

    if kind in ("classify-single", "matrix"):
        payload["operator"] = parse_operator(_require(doc, "operator", kind), "operator")
    if kind in ("classify-difference", "ess-bounds", "probe"):
        pair = _require(doc, "pair", kind)
        if not isinstance(pair, dict):
            raise ConfigError("pair: expected {'first': ..., 'second': ...}")
        payload["pair"] = PairSpec(parse_operator(_require(pair, "first", kind), "pair.first"),
                                   parse_operator(_require(pair, "second", kind), "pair.second"))
    if kind in ("classify-combination", "divergence"):
        for key in ("c1", "c2"):
            payload[key] = _complex(_require(doc, key, kind), key)
        for key in ("phi1", "phi2"):
            payload[key] = _affine(_require(doc, key, kind), key)
        if not payload["q"] < payload["p"]:
            raise ConfigError("UnsupportedExponents: combinations of composition operators are "
                              "classified here only for q < p; use classify-difference for p <= q")
    if kind == "divergence":
        payload["N"] = int(doc.get("N", 200))
    if kind == "probe":
        if "probes" in doc:
            payload["probes"] = [_complex(w, f"probes[{i}]") for i, w in enumerate(doc["probes"])]
    if kind == "matrix":
        sizes = doc.get("sizes", [16, 32, 48, 64])
        if not sizes or not all(isinstance(n, int) and n >= 1 for n in sizes):
            raise ConfigError("sizes must be a list of positive integers")
        payload["sizes"] = sorted(sizes)
        payload["tol"] = float(doc.get("tol", 1e-12))
    if kind == "verify-lemmas":
        draws = dict(VERIFY_DEFAULTS)
        draws.update(doc.get("draws", {}))
        payload["draws"] = {k: int(v) for k, v in draws.items()}

    quad = doc.get("quad", {})
    try:
        cfg = QuadConfig(**quad)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"quad: {exc}") from None
    seed = doc.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    echo = dict(doc)
    echo["kind"] = kind
    return Job(kind, payload, echo, cfg, seed)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _ray_values(psi, phi, radius):
    th = 2 * np.pi * np.arange(16) / 16
    return m_value(psi, phi, radius * np.exp(1j * th))


def _single_evidence(report: Report, spec: OperatorSpec, q, label: str):
    """Numeric m_z evidence backing a single-operator verdict."""
    psi, phi = spec.psi, spec.phi
    if psi.is_zero:
        return
    grid_r = np.linspace(0, 12, 64)[:, None]
    grid = grid_r * np.exp(2j * np.pi * np.arange(64) / 64)[None, :]
    grid_max = float(np.max(m_value(psi, phi, grid)))
    sup = sup_m(psi, phi)
    report.evidence.append({"name": f"{label}:m-grid", "oracle": "max of m_z on a 64x64 polar grid, |z|<=12",
                            "tolerance": 1e-6, "grid_max": grid_max, "sup_m": sup})
    if math.isfinite(sup):
        report.add_check(f"{label}:grid-below-sup", grid_max, sup * (1 + 1e-6), 0.0,
                         "polar grid", relation="<=")
    if phi.a == 0:
        return
    rays = {r: float(np.max(_ray_values(psi, phi, r))) for r in (6.0, 12.0, 24.0)}
    report.evidence.append({"name": f"{label}:m-rays", "oracle": "max of m_z over 16 directions",
                            "tolerance": 0.0, "radius": list(rays), "max_m": list(rays.values())})
    sc = slope_class(phi.a)
    lim = limsup_m(psi, phi)
    if sc < 0:
        report.add_check(f"{label}:m-decays", rays[6.0], rays[24.0], 0.0, "m_z rays", relation=">=")
    elif math.isfinite(lim):
        for r, v in rays.items():
            report.add_check(f"{label}:m-constant@{r:g}", v, lim, 1e-9 * lim, "m_z rays", relation="<=")
            report.add_check(f"{label}:m-constant-below@{r:g}", v, lim, 1e-9 * lim, "m_z rays")
    else:
        report.add_check(f"{label}:m-grows", rays[24.0], rays[6.0], 0.0, "m_z rays")
    radii = [2.0, 4.0, 6.0, 8.0]
    decay = compactness_decay_probe(spec, q, 1, radii)
    report.evidence.append({"name": f"{label}:kernel-decay", "oracle": "||W k_{r}||_q by quadrature",
                            "tolerance": 1e-8, "radius": radii, "norm": decay})


def _run_classify(job: Job, report: Report):
    pl = job.payload
    p, q = pl["p"], pl["q"]
    if job.kind == "classify-single":
        cls = classify_single(pl["operator"], p, q)
        _single_evidence(report, pl["operator"], q, "operator")
    elif job.kind == "classify-difference":
        cls = classify_difference(pl["pair"], p, q)
        for label, spec in (("first", pl["pair"].first), ("second", pl["pair"].second)):
            _single_evidence(report, spec, q, label)
    else:
        cls = classify_combination(pl["c1"], pl["phi1"], pl["c2"], pl["phi2"], p, q)
        for label, c, phi in (("first", pl["c1"], pl["phi1"]), ("second", pl["c2"], pl["phi2"])):
            _single_evidence(report, OperatorSpec(ExpPolySymbol.constant(c), phi), q, label)
        if pl["phi1"].b == 0 and pl["phi2"].b == 0:
            seq = divergence_sequence(pl["c1"], pl["phi1"], pl["c2"], pl["phi2"], p, q, 200)
            report.evidence.append({"name": "divergence", "oracle": "monomial norms via log-gamma",
                                    "tolerance": 1e-12, "r0": seq[0], "r_max": max(seq), "r_last": seq[-1]})
    report.results.update({"verdict": cls.verdict.value, "reason": cls.reason, "branch": cls.branch,
                           "details": cls.evidence})


def _run_ess(job: Job, report: Report):
    pl = job.payload
    pair, p, q = pl["pair"], pl["p"], pl["q"]
    b = essnorm_bounds_difference(pair, p, q)
    report.results.update({"lower": b.lower, "upper": b.upper, "alpha": b.alpha,
                           "limsup1": b.limsup1, "limsup2": b.limsup2,
                           "branch": "essential-norm:sandwich"})
    probe = essential_probe(pair, p, q, cfg=job.quad)
    report.evidence.append({"name": "kernel-probe", "oracle": "max_w ||L' k_w||_q, L' = non-compact part",
                            "tolerance": job.quad.rel_tol, "value": probe})
    report.add_check("lower<=upper", b.lower, b.upper, 0.0, "closed form", relation="<=")
    report.add_check("probe<=upper", probe, b.upper * (1 + 1e-6), 0.0, "kernel probe", relation="<=")


def _summary(name, results, oracle):
    worst = min((r.margin + r.tol for r in results), default=0.0)
    return {"name": name, "oracle": oracle, "count": len(results),
            "passed": sum(r.passed for r in results), "worst_slack": worst}


def _run_verify(job: Job, report: Report):
    seed = 0 if job.seed is None else job.seed
    rng = np.random.default_rng(seed)
    draws = job.payload["draws"]
    lem, tp = [], []
    for _ in range(draws["lemma_est"]):
        a1, a2 = (complex(*rng.uniform(-3, 3, 2)) for _ in range(2))
        w1, w2 = (complex(*rng.uniform(-2.1, 2.1, 2)) for _ in range(2))
        lem.append(lemma_est_check(a1, a2, w1, w2, job.quad))
        tp.append(two_point_check(a1, a2, w1, w2))
    eq1 = []
    for _ in range(draws["eq1_pairs"]):
        pair = random_bounded_pair(rng)
        q = float(rng.choice([1.5, 2.0, 3.0]))
        for _ in range(draws["eq1_points"]):
            eq1.append(eq1_check(pair, q, complex(*rng.uniform(-2, 2, 2)), job.quad))
    pw = []
    for _ in range(draws["pointwise"]):
        f = random_symbol(rng, max_terms=3, max_degree=2)
        p = float(rng.choice([0.5, 1.0, 2.0, 3.7]))
        pw.append(pointwise_check(f, p, complex(*rng.uniform(-2.5, 2.5, 2)), job.quad))
    for name, res, oracle in (("two-kernel-estimate", lem, "sup-norm grid + ascent"),
                              ("two-point-estimate", tp, "point evaluation"),
                              ("kernel-pointwise-estimate", eq1, "quadrature norms + m_z"),
                              ("pointwise-growth-bound", pw, "quadrature norm")):
        s = _summary(name, res, oracle)
        report.evidence.append(s)
        report.add_check(name, s["passed"], s["count"], 0.0, oracle)
    report.results["seed"] = seed
    report.results["all_pass"] = all(c["pass"] for c in report.checks)


def _run_probe(job: Job, report: Report):
    pl = job.payload
    probes = pl.get("probes")
    pts = list(DEFAULT_PROBES if probes is None else probes)
    vals = probe_values(pl["pair"], pl["q"], pts, job.quad)
    k = int(np.argmax(vals)) if vals else 0
    report.results.update({"probe_lower_bound": max(vals) if vals else 0.0,
                           "argmax": pts[k] if pts else None})
    report.evidence.append({"name": "kernel-probe-values", "oracle": "||L k_w||_q by quadrature",
                            "tolerance": job.quad.rel_tol, "w": pts, "norm": vals})


def _run_matrix(job: Job, report: Report):
    pl = job.payload
    norms = [matrix_norm_estimate(hilbert_matrix(pl["operator"], n), pl["tol"]) for n in pl["sizes"]]
    report.results.update({"sizes": pl["sizes"], "norms": norms})
    report.evidence.append({"name": "truncated-norms", "oracle": "power iteration on M^H M",
                            "tolerance": pl["tol"], "sizes": pl["sizes"], "norms": norms})
    for n0, n1, v0, v1 in zip(pl["sizes"], pl["sizes"][1:], norms, norms[1:]):
        report.add_check(f"nondecreasing:{n0}->{n1}", v1, v0, pl["tol"] * max(v0, 1.0), "truncation monotonicity")


def _run_divergence(job: Job, report: Report):
    pl = job.payload
    seq = divergence_sequence(pl["c1"], pl["phi1"], pl["c2"], pl["phi2"], pl["p"], pl["q"], pl["N"])
    report.results.update({"r0": seq[0], "r_max": max(seq), "r_last": seq[-1]})
    report.evidence.append({"name": "divergence-sequence", "oracle": "monomial norms via log-gamma",
                            "tolerance": 1e-12, "n": list(range(len(seq))), "r": seq})


RUNNERS = {
    "classify-single": _run_classify, "classify-difference": _run_classify,
    "classify-combination": _run_classify, "ess-bounds": _run_ess, "verify-lemmas": _run_verify,
    "probe": _run_probe, "matrix": _run_matrix, "divergence": _run_divergence,
}


def run_job(job: Job) -> Report:
    report = Report(job=job.echo, seed=job.seed)
    t0 = time.perf_counter()
    try:
        RUNNERS[job.kind](job, report)
    except FockError as exc:
        report.errors.append({"type": type(exc).__name__, "message": str(exc)})
    report.timing = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _plain(x):
    """JSON-ready copy with floats at 12 significant digits."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12g}")
    if isinstance(x, (complex, np.complexfloating)):
        return [_plain(x.real), _plain(x.imag)]
    if isinstance(x, Verdict):
        return x.value
    return x


def render_report(report: Report, fmt: str = "json", with_timing: bool = False) -> str:
    doc = _plain(report.to_dict(with_timing))
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"fockops {doc['tool']['version']}  job: {doc['job']['kind']}  seed: {doc['seed']}"]
    res = doc["results"]
    if "branch" in res:
        lines.append(f"branch: {res['branch']}")
    for key in sorted(res):
        if key != "branch":
            lines.append(f"  {key}: {json.dumps(res[key], sort_keys=True)}")
    for ev in doc["evidence"]:
        lines.append(f"evidence {ev['name']} [{ev.get('oracle', '')}]")
    for c in doc["checks"]:
        mark = "PASS" if c["pass"] else "FAIL"
        lines.append(f"[{mark}] {c['name']}: {c['lhs']} {c['relation']} {c['rhs']} (tol {c['tol']})")
    for e in doc["errors"]:
        lines.append(f"[ERROR] {e['type']}: {e['message']}")
    lines.append("OK" if doc["ok"] else "NOT OK")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="job file (JSON)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None, help="overrides the job seed")
    common.add_argument("--radial-max", type=float, default=None, help="overrides quad.radial_max")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")
    parser = argparse.ArgumentParser(prog="fockops", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0

    try:
        text = Path(args.config).read_text(encoding="utf-8")
        allowed = SUBCOMMANDS[args.command]
        job = parse_config(text, default_kind=allowed[0] if len(allowed) == 1 else None)
        if job.kind not in allowed:
            raise ConfigError(f"kind {job.kind!r} does not belong to subcommand {args.command!r}")
        if args.seed is not None:
            job.seed = args.seed
            job.echo["seed"] = args.seed
        if args.radial_max is not None:
            job.quad = replace(job.quad, radial_max=args.radial_max)
    except (OSError, ConfigError, ValueError) as exc:
        print(f"fockops: {exc}", file=sys.stderr)
        return 2

    report = run_job(job)
    out = render_report(report, args.format, args.timing)
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
