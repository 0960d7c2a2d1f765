import json
from collections import defaultdict
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from fockops.cli import parse_operator
from fockops.classifier import as_exponent
from fockops.symbols import ExpPolySymbol, ExpPolyTerm

DATA = Path(__file__).parent / "data"

_criteria: dict[int, list[tuple[str, str]]] = defaultdict(list)


def load_corpus():
    doc = json.loads((DATA / "classification_corpus.json").read_text())
    out = []
    for entry in doc["specs"]:
        out.append({**entry, "spec": parse_operator(entry["operator"], entry["id"]),
                    "p": as_exponent(entry["p"]), "q": as_exponent(entry["q"])})
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# hypothesis strategies

def bounded_complex(scale=2.0):
    return st.builds(complex,
                     st.floats(-scale, scale, allow_nan=False, allow_infinity=False),
                     st.floats(-scale, scale, allow_nan=False, allow_infinity=False))


@st.composite
def exp_poly_terms(draw, max_degree=2, freq_scale=1.0):
    coeffs = draw(st.lists(bounded_complex(1.0), min_size=1, max_size=max_degree + 1))
    return ExpPolyTerm(tuple(coeffs), draw(bounded_complex(freq_scale)))


@st.composite
def exp_poly_symbols(draw, max_terms=3, max_degree=2, freq_scale=1.0):
    terms = draw(st.lists(exp_poly_terms(max_degree, freq_scale), min_size=0, max_size=max_terms))
    return ExpPolySymbol(tuple(terms))


# one line per acceptance criterion

def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for mark in report.keywords:
        if mark.startswith("criterion_"):
            _criteria[int(mark.split("_")[1])].append((report.nodeid, report.outcome))


def pytest_collection_modifyitems(items):
    for item in items:
        for mark in item.iter_markers("criterion"):
            item.keywords[f"criterion_{mark.args[0]}"] = True


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        runs = _criteria[n]
        failed = [nid for nid, outcome in runs if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n:2d}: {status} ({len(runs) - len(failed)}/{len(runs)} tests)"
        if failed:
            line += "  failing: " + ", ".join(nid.split("::")[-1] for nid in failed)
        terminalreporter.write_line(line)
