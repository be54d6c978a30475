"""Acceptance battery: the eleven numbered criteria, one test each.

Every test prints its full report and asserts that every item inside it
passed, with the tolerances pinned where the criteria state them. Four of
the criteria (2, 3, 4, 5) compare against tabulated coefficient values
that the measured expansions contradict; those tests fail and are expected
to keep failing until the tabulated values themselves change. The derived
companion items inside the same reports, checked against independent
closed forms and finite differences, all pass. Nothing here is marked
xfail: a red criterion is a finding, not a broken test.
"""

from meanlab import CRITERIA


def _run(number: int) -> None:
    rep = CRITERIA[number]()
    for line in rep.lines():
        print(line)
    failing = [item.name for item in rep.items if not item.passed]
    assert rep.all_pass, f"criterion {number}, failing items: {failing}"


def test_criterion_01():
    """Unitary commutation of every studied mean on the perturbed pair."""
    _run(1)


def test_criterion_02():
    """Power-mean expansion coefficients against the tabulated table."""
    _run(2)


def test_criterion_03():
    """Wasserstein expansion coefficients against the tabulated table."""
    _run(3)


def test_criterion_04():
    """Scalar profile derivatives: exact slope and both second-order
    anchors against central differences."""
    _run(4)


def test_criterion_05():
    """Forced constancy: does the second-order row pin c_I to zero."""
    _run(5)


def test_criterion_06():
    """Preserver separation: constants and positive linear functionals
    pass, the trace-power functional visibly fails."""
    _run(6)


def test_criterion_07():
    """Kubo-Ando axiom battery, two hundred samples per axiom."""
    _run(7)


def test_criterion_08():
    """Commuting reductions and the two Wasserstein formulas."""
    _run(8)


def test_criterion_09():
    """Centrality probes and both identity chains on all pair classes."""
    _run(9)


def test_criterion_10():
    """Metric axioms, geodesic endpoints, midpoints and additivity."""
    _run(10)


def test_criterion_11():
    """Grid-doubling residual scaling for the power family."""
    _run(11)
