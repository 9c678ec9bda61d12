import os
import sys
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from flatlas.diagrams import enumerate_diagrams, parse_diagram  # noqa: E402
from flatlas.origami import Origami, StratumSignature  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GENUS3 = ("2,1,1", "1,1,1,1")

H2 = Origami.from_cycles(3, [(0, 1)], [(0, 2)])
H11 = Origami.from_cycles(4, [(0, 1, 2, 3)], [(0, 2)])
TORUS = Origami.from_cycles(1, [], [])

# Named diagrams for each case; cylinder i is C(i+1) of the usual drawing.
NAMED_DIAGRAMS = {
    "6.a": "0-5 1-6 2-0,1 5,3-2,7 6,4-3 7-4",
    "6.b": "3-1 5-2 4-0,3 2,6-4,5 7,1-6 0-7",
    "6.c": "6-1 7-2 5,2-6,7 3-0 4-5 0,1-3,4",
    "6.d": "6-1 7-2 5,0-6,7 3-0 4-5 1,2-3,4",
    "4.I.a (A)": "2,0,4,1-5,6,3,7 3,5-0,1 6-2 7-4",
    "4.I.a (B)": "2,4,1,0-5,6,3,7 3,5-0 6-1,2 7-4",
    "4.I.b (A)": "1,3-6 0,2-4,5 5,6-2,3 4-0,1",
    "4.I.b (B)": "1-4 2,3,0-5,6 6-3 4,5-0,1,2",
    "4.I.b (C)": "1-6 2,3,0-4,5 5,6-3 4-0,1,2",
    "5.I.a": "1-4 2,3,0-5 4,5-6,7 6-0,1,2 7-3",
    "5.I.b": "3,0-4 2,1-5 4,5-6,7 6-0,1 7-2,3",
    "5.II simple C5": "0,4-1,3 6,2-0,5 3-2 1-6 5-4",
    "5.II non-simple C5": "4-1,3 6,2-5 3-2 1-6 5,0-4,0",
}


@lru_cache(maxsize=None)
def corpus_keys(stratum: str, k: int, up_to_symmetry: bool = False) -> tuple[str, ...]:
    return tuple(enumerate_diagrams(StratumSignature.parse(stratum), k, up_to_symmetry=up_to_symmetry))


def max_cylinders(stratum: str) -> int:
    sig = StratumSignature.parse(stratum)
    return sig.genus + sig.n_zeros - 1


@lru_cache(maxsize=None)
def genus3_corpus() -> tuple[tuple[str, int, str], ...]:
    """Every genus-3 diagram as (stratum, k, key)."""
    out = []
    for s in GENUS3:
        for k in range(1, max_cylinders(s) + 1):
            out.extend((s, k, key) for key in corpus_keys(s, k))
    return tuple(out)


@pytest.fixture(scope="session")
def corpus():
    return genus3_corpus()


@pytest.fixture(scope="session")
def named():
    return {name: parse_diagram(text) for name, text in NAMED_DIAGRAMS.items()}


_CRITERIA: dict[int, str] = {}


def record_criterion(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    _CRITERIA[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
