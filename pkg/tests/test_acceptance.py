"""The nine primary acceptance criteria at their stated sizes, tolerances and time budgets.

Run with ``pytest -s tests/test_acceptance.py`` to see one PASS/FAIL line per criterion.
"""

import pytest

from zrigid.acceptance import CRITERIA
from zrigid.cli import main


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"{i}-{c.__name__}" for i, c in
                                                     enumerate(CRITERIA, 1)])
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()


def test_selftest_exit_code(capsys):
    assert main(["selftest"]) == 0
    err = capsys.readouterr().err
    assert err.count("[PASS]") == len(CRITERIA)
