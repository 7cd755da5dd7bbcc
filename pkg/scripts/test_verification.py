"""
Tests for the verification suite registry and the bundled invariant checks
"""

import pytest

from laguerre.errors import PoleError
from laguerre.services import checks  # noqa: F401
from laguerre.services.verification import VerificationSuite, suite


@pytest.fixture
def toy_suite() -> VerificationSuite:
    toy = VerificationSuite()

    @toy.register("always", "a")
    def always() -> tuple[bool, str]:
        return True, "ok"

    @toy.register("never", "a")
    def never() -> tuple[bool, str]:
        return False, "deviation 1"

    @toy.register("raises", "b")
    def raises() -> tuple[bool, str]:
        raise PoleError("Gamma pole at 0")

    return toy


def test_outcomes_are_recorded(toy_suite):
    execution = toy_suite.run()
    assert [r.status for r in execution.results.values()] == ["passed", "failed", "error"]
    assert execution.results["raises"].detail == "PoleError: Gamma pole at 0"
    assert not execution.all_passed
    assert execution.get_progress_summary() == "1/3 checks passed, 1 failed, 1 errored"


def test_group_selection(toy_suite):
    execution = toy_suite.run(groups=["b"])
    assert list(execution.results) == ["raises"]


def test_table_labels(toy_suite):
    table = toy_suite.run().format_table()
    assert "PASS" in table and "FAIL" in table and "ERROR" in table
    assert table.splitlines()[-1] == "1/3 checks passed, 1 failed, 1 errored"


def test_duplicate_names_are_rejected(toy_suite):
    with pytest.raises(ValueError):
        toy_suite.register("always", "c")(lambda: (True, ""))


def test_bundled_checks_cover_every_group():
    groups = {group for group, _ in suite.checks.values()}
    assert groups == {"specfun", "kernels", "operators", "mellin", "volterra"}


@pytest.mark.parametrize("group", ["specfun", "kernels"])
def test_fast_groups_pass(group):
    execution = suite.run(groups=[group])
    assert execution.all_passed, execution.format_table()


@pytest.mark.parametrize("name", ["mellin-round-trip", "multiplier-semigroup", "right-fractional-inversion"])
def test_selected_checks_pass(name):
    _, check = suite.checks[name]
    passed, detail = check()
    assert passed, detail
