import logging

import numpy as np

from laguerre.commands.common import run_metadata
from laguerre.models.catalog import GridFunction
from laguerre.models.schemas import Method, MultiplierDescriptor, RunConfig
from laguerre.output import write_table
from laguerre.parser import parse_descriptor
from laguerre.services import mellin, operators

logger = logging.getLogger(__name__)


def run(cfg: RunConfig) -> int:
    """Evaluate the selected operator on the graded grid"""
    f = parse_descriptor(cfg.func)
    nodes = GridFunction.graded_nodes(cfg.length, cfg.grid_n, cfg.grading)
    logger.info(f"Applying {cfg.operator.value} of order {cfg.alpha:g} to {f.descriptor} on {len(nodes)} nodes")

    columns: list[np.ndarray] = [nodes]
    header = ["x"]
    if cfg.method in (Method.QUADRATURE, Method.BOTH):
        columns.append(operators.apply_operator(cfg.operator, f, cfg.alpha, nodes))
        header.append("value")
    if cfg.method in (Method.MELLIN, Method.BOTH):
        kind = cfg.operator.multiplier_kind
        assert kind is not None
        md = MultiplierDescriptor(kind=kind, alpha=cfg.alpha)
        values, errors = mellin.apply_multiplier_with_error(f, md, None, nodes)
        columns.extend([values, errors])
        header.extend(["value_mellin", "mellin_error"])
    if cfg.method == Method.BOTH:
        quad, spectral = columns[1], columns[2]
        columns.append(np.abs(quad - spectral) / np.maximum(np.abs(quad), 1e-300))
        header.append("agreement")
        logger.info(f"Largest relative route disagreement {float(columns[-1].max()):.2e}")

    write_table(cfg.output, cfg.command.value, run_metadata(cfg), header, zip(*columns))
    return 0
