"""Acceptance gate: every verification criterion at zero tolerance.

All arithmetic here is exact, so each criterion either holds on the nose
or fails; there are no tolerances to calibrate.  Each test prints one
PASS/FAIL line so the suite doubles as a checklist.
"""

import pytest

from denomlab import catalan
from denomlab.verify import (
    run_build_strong,
    run_injectivity,
    run_lemma_suite,
    run_negative_control,
    run_oracle,
    run_segments,
)


def _announce(name: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"[{verdict}] {name}{suffix}")


def _failures(report) -> list:
    return [c["name"] for c in report["checks"] if not c["pass"]]


@pytest.mark.parametrize("rank", [2, 3, 4, 5, 6])
def test_unpunctured_family_injectivity(rank):
    """Full closure of the (rank+3)-gon: monomials of degree <= 3 have
    pairwise distinct denominator vectors and the cluster count is the
    Catalan number."""
    report = run_injectivity({"genus": 0, "boundary": [rank + 3], "punctures": 0},
                             max_degree=3)
    expected = catalan(rank + 1)
    ok = report["pass"] and report["counts"]["clusters"] == expected
    _announce(f"A-family injectivity n={rank}", ok,
              f"clusters={report['counts']['clusters']} (catalan {expected}), "
              f"monomials={report['counts']['monomials']}")
    assert ok, _failures(report)


@pytest.mark.parametrize("sides", [3, 4, 5])
def test_punctured_family_injectivity(sides):
    """Once-punctured n-gons, monomial degree <= 2, zero collisions; for the
    square both enumeration routes must agree (16 variables, 50 clusters)."""
    report = run_injectivity({"genus": 0, "boundary": [sides], "punctures": 1},
                             max_degree=2)
    ok = report["pass"]
    if sides == 4:
        ok = ok and report["counts"]["arcs"] == 16
        ok = ok and report["counts"]["clusters"] == 50
    _announce(f"D-family injectivity n={sides}", ok,
              f"variables={report['counts']['arcs']}, "
              f"clusters={report['counts']['clusters']}, "
              f"monomials={report['counts']['monomials']}")
    assert ok, _failures(report)


@pytest.mark.parametrize("boundary,punctures", [
    (5, 0), (6, 0), (7, 0), (3, 1), (4, 1), (5, 1),
])
def test_oracle_equivalence(boundary, punctures):
    """Lockstep bijection: every enumerated tagged arc's denominator vector
    equals its intersection vector, and cluster counts agree."""
    report = run_oracle({"genus": 0, "boundary": [boundary],
                         "punctures": punctures})
    ok = report["pass"]
    _announce(f"oracle equivalence b={boundary} p={punctures}", ok,
              f"arcs={report['counts']['arcs']}, "
              f"clusters={report['counts']['clusters']}")
    assert ok, _failures(report)


@pytest.mark.parametrize("punctures", [1, 2])
def test_lemma_suites(punctures):
    """Wrapping-loop identities, projection identities and recovery hold
    for every eligible enumerated configuration (two-puncture case capped
    at 10^4 configurations)."""
    report = run_lemma_suite({"genus": 0, "boundary": [4],
                              "punctures": punctures}, cap=10 ** 4)
    cases = sum(c["cases"] for c in report["checks"])
    _announce(f"lemma suites on the {punctures}-punctured square",
              report["pass"], f"{cases} cases")
    assert report["pass"], _failures(report)


@pytest.mark.parametrize("boundary,punctures", [(6, 0), (4, 1)])
def test_segment_uniqueness(boundary, punctures):
    """Segment multisets determine compatible multisets of degree <= 2."""
    report = run_segments({"genus": 0, "boundary": [boundary],
                           "punctures": punctures}, max_degree=2)
    _announce(f"segment uniqueness b={boundary} p={punctures}",
              report["pass"], f"multisets={report['counts']['monomials']}")
    assert report["pass"], _failures(report)


@pytest.mark.parametrize("boundary,punctures,count", [
    (4, 1, 100), (4, 2, 100), (5, 2, 100), (6, 3, 100),
])
def test_strong_admissible_builder(boundary, punctures, count):
    """100 randomized admissible triangulations per surface all convert,
    with strictly decreasing type II loop counts and bounded flip logs."""
    report = run_build_strong({"genus": 0, "boundary": [boundary],
                               "punctures": punctures}, count=count)
    _announce(f"strong-admissible builder b={boundary} p={punctures}",
              report["pass"],
              f"{count} runs, {report['inputs_with_type_ii_loops']} had "
              "type II loops")
    assert report["pass"], _failures(report)


def test_infinite_type_smoke():
    """Annulus-type rank-4 seed, depth-6 walk: no collisions among degree
    <= 2 monomials inside the explored set (bounded evidence only)."""
    report = run_injectivity({"genus": 0, "boundary": [3, 1], "punctures": 0},
                             max_degree=2, depth=6)
    ok = report["pass"] and "bounded-evidence" in report["flags"]
    _announce("infinite-type smoke (annulus rank 4, depth 6)", ok,
              f"clusters explored={report['counts']['clusters']}, "
              f"monomials={report['counts']['monomials']}")
    assert ok, _failures(report)


def test_negative_control():
    """Dropping one coordinate from every denominator vector must produce a
    collision with a serialized witness: the harness can fail."""
    report = run_negative_control()
    failing = [c for c in report["checks"] if not c["pass"]]
    ok = (not report["pass"]) and failing and "witness" in failing[0]
    witness_ok = ok and len(failing[0]["witness"]["monomials"]) == 2
    _announce("negative control (weakened vectors collide)", witness_ok)
    assert witness_ok
