import logging

import numpy as np

from laguerre.commands.common import run_metadata
from laguerre.errors import ParameterDomainError
from laguerre.models.schemas import RunConfig
from laguerre.output import write_table
from laguerre.services import kernels

logger = logging.getLogger(__name__)

# k- is tabulated on (10^-DECADES, 1), k+ on (1, 10^DECADES)
DECADES = 3.0


def run(cfg: RunConfig) -> int:
    """Tabulate k+ and k- on a log grid together with C+ and C-"""
    ke = kernels.kernel_eval(cfg.alpha)
    v = np.geomspace(10.0**-DECADES, 10.0**DECADES, cfg.grid_n)
    v = v[v != 1.0]
    plus = np.asarray(kernels.k_plus(ke, v))
    minus = np.asarray(kernels.k_minus(ke, v))

    extra: dict[str, object] = {}
    for name, constant in (("C_plus", kernels.c_plus), ("C_minus", kernels.c_minus)):
        try:
            extra[name] = constant(cfg.alpha, cfg.nu)
        except ParameterDomainError as exc:
            logger.warning(f"{name} skipped: {exc}")
            extra[name] = "undefined"

    write_table(cfg.output, cfg.command.value, run_metadata(cfg, **extra), ["v", "k_plus", "k_minus"], zip(v, plus, minus))
    return 0
