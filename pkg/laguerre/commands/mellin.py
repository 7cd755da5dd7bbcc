import logging

import numpy as np

from laguerre.commands.common import run_metadata
from laguerre.models.schemas import MultiplierDescriptor, RunConfig
from laguerre.output import write_table
from laguerre.services import mellin

logger = logging.getLogger(__name__)


def run(cfg: RunConfig) -> int:
    """Tabulate the operator's Mellin multiplier along Re s = nu"""
    kind = cfg.operator.multiplier_kind
    assert kind is not None
    md = MultiplierDescriptor(kind=kind, alpha=cfg.alpha)
    tau, values = mellin.multiplier_table(md, cfg.nu, cfg.tau_max, cfg.grid_n)
    logger.info(f"Tabulated {kind.value}({cfg.alpha:g}) at {len(tau)} points on Re s = {cfg.nu:g}")
    rows = zip(tau, values.real, values.imag, np.abs(values))
    write_table(
        cfg.output, cfg.command.value, run_metadata(cfg, multiplier=kind.value, shift=md.shift),
        ["tau", "re", "im", "abs"], rows,
    )
    return 0
