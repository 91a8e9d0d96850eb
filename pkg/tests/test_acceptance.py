"""Acceptance gate: runs every criterion at its stated tolerance.

One test per named check; each prints its PASS/FAIL line (run with -s to see
them as they come). The full suite takes about a minute at the default
cutoffs (80 for one mode, 40 per mode for two).

Known red: entanglement[lin-coupled-printed-eqs]. The printed ground-state
purity/entropy equations of the linearly coupled system are inconsistent with
that system's own reduced covariance (which three independent pathways here
agree on to machine precision), so the faithful transcription check cannot
pass. It is kept failing rather than weakened; see README "Known source
inconsistency" for the analysis.
"""

import pytest

from qgeom.acceptance import (AcceptanceConfig, CHECK_NAMES,
                              KNOWN_SOURCE_INCONSISTENT, run_checks)


@pytest.fixture(scope="session")
def outcomes():
    results = run_checks(AcceptanceConfig())
    return {r.name: r for r in results}


@pytest.mark.parametrize("name", CHECK_NAMES)
def test_criterion(outcomes, name):
    outcome = outcomes[name]
    mark = "PASS" if outcome.passed else "FAIL"
    print(f"[{mark}] criterion {outcome.criterion} | {name}: {outcome.detail}")
    note = ("; this transcription check is expected to fail - the printed "
            "source equations are inconsistent (see README)"
            if name in KNOWN_SOURCE_INCONSISTENT else "")
    assert outcome.passed, f"criterion {outcome.criterion} {name}: {outcome.detail}{note}"


def test_every_criterion_is_covered(outcomes):
    criteria = {o.criterion for o in outcomes.values()}
    assert criteria == {str(k) for k in range(1, 9)}


def test_convergence_check_fails_when_under_resolved():
    # cutoff 12 leaves the probes unconverged; the doubling check must say so
    from qgeom.acceptance import _prop_truncation
    degraded = AcceptanceConfig(cutoff_1mode=12, cutoff_2mode=12)
    outcome = _prop_truncation(degraded)[0]
    assert not outcome.passed
    healthy = _prop_truncation(AcceptanceConfig())[0]
    assert healthy.passed
