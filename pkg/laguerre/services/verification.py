"""
Verification suite registry and execution tracking

Checks register themselves by name and group; a run executes them in
registration order, records each outcome and renders a PASS/FAIL table.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from laguerre.errors import LaguerreError

logger = logging.getLogger(__name__)

CheckFunction = Callable[[], tuple[bool, str]]


@dataclass
class CheckResult:
    """Outcome of a single named check"""

    name: str
    group: str
    status: str = "pending"  # pending, passed, failed, error
    detail: str = ""
    seconds: float = 0.0


@dataclass
class SuiteExecution:
    """Tracks the outcomes of one verify run"""

    total_checks: int
    results: dict[str, CheckResult] = field(default_factory=dict)

    def mark_passed(self, name: str, detail: str, seconds: float) -> None:
        result = self.results[name]
        result.status, result.detail, result.seconds = "passed", detail, seconds
        logger.info(f"Check {name} passed in {seconds:.2f}s. Progress: {self.get_progress_summary()}")

    def mark_failed(self, name: str, detail: str, seconds: float) -> None:
        result = self.results[name]
        result.status, result.detail, result.seconds = "failed", detail, seconds
        logger.warning(f"Check {name} failed: {detail}")

    def mark_error(self, name: str, error: str, seconds: float) -> None:
        """A check that raised instead of returning a verdict"""
        result = self.results[name]
        result.status, result.detail, result.seconds = "error", error, seconds
        logger.warning(f"Check {name} raised: {error}")

    @property
    def all_passed(self) -> bool:
        return all(r.status == "passed" for r in self.results.values())

    def get_progress_summary(self) -> str:
        """Get a human-readable progress summary"""
        passed = sum(1 for r in self.results.values() if r.status == "passed")
        failed = sum(1 for r in self.results.values() if r.status == "failed")
        errored = sum(1 for r in self.results.values() if r.status == "error")

        summary_parts = [f"{passed}/{self.total_checks} checks passed"]
        if failed > 0:
            summary_parts.append(f"{failed} failed")
        if errored > 0:
            summary_parts.append(f"{errored} errored")
        return ", ".join(summary_parts)

    def format_table(self) -> str:
        width = max([len(name) for name in self.results] + [5])
        lines = [f"{'check'.ljust(width)}  {'group'.ljust(10)}  status  seconds  detail"]
        for result in self.results.values():
            label = {"passed": "PASS", "failed": "FAIL", "error": "ERROR"}.get(result.status, "-")
            lines.append(
                f"{result.name.ljust(width)}  {result.group.ljust(10)}  {label.ljust(6)}  "
                f"{result.seconds:7.2f}  {result.detail}"
            )
        lines.append(self.get_progress_summary())
        return "\n".join(lines)


class VerificationSuite:
    """Registry of named invariant checks

    Checks return (passed, detail). Any LaguerreError raised by a check is
    recorded as an error outcome instead of aborting the run.
    """

    def __init__(self) -> None:
        self.checks: dict[str, tuple[str, CheckFunction]] = {}

    def register(self, name: str, group: str) -> Callable[[CheckFunction], CheckFunction]:
        def decorator(func: CheckFunction) -> CheckFunction:
            if name in self.checks:
                raise ValueError(f"check '{name}' registered twice")
            self.checks[name] = (group, func)
            return func

        return decorator

    def run(self, groups: Optional[list[str]] = None) -> SuiteExecution:
        """Run every registered check, optionally restricted to some groups

        Args:
            groups: Group names to run; None runs everything

        Returns:
            SuiteExecution with one result per executed check
        """
        selected = {
            name: entry for name, entry in self.checks.items() if groups is None or entry[0] in groups
        }
        execution = SuiteExecution(total_checks=len(selected))
        for name, (group, _) in selected.items():
            execution.results[name] = CheckResult(name=name, group=group)

        logger.info(f"Running {len(selected)} verification checks")
        for name, (group, func) in selected.items():
            start = time.perf_counter()
            try:
                passed, detail = func()
            except (LaguerreError, ArithmeticError) as exc:
                execution.mark_error(name, f"{type(exc).__name__}: {exc}", time.perf_counter() - start)
                continue
            elapsed = time.perf_counter() - start
            if passed:
                execution.mark_passed(name, detail, elapsed)
            else:
                execution.mark_failed(name, detail, elapsed)
        return execution


# Global registry instance
suite = VerificationSuite()
