import logging

from laguerre.models.schemas import RunConfig
from laguerre.output import write_table
from laguerre.services import checks  # noqa: F401  (registers the checks)
from laguerre.services.verification import suite

logger = logging.getLogger(__name__)


def run(cfg: RunConfig) -> int:
    """Run every registered check; exit 0 only when all pass"""
    execution = suite.run()
    print(execution.format_table())
    if cfg.output:
        rows = [(r.name, r.group, r.status, r.seconds, r.detail) for r in execution.results.values()]
        write_table(
            cfg.output, cfg.command.value, {"summary": execution.get_progress_summary()},
            ["check", "group", "status", "seconds", "detail"], rows,
        )
    return 0 if execution.all_passed else 1
