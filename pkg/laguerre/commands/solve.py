import logging

from laguerre.commands.common import run_metadata
from laguerre.models.catalog import GridFunction
from laguerre.models.schemas import NeumannSolveConfig, RunConfig, SolverKind
from laguerre.output import write_table
from laguerre.parser import parse_descriptor
from laguerre.services import volterra

logger = logging.getLogger(__name__)


def solver_config(cfg: RunConfig) -> NeumannSolveConfig:
    return NeumannSolveConfig(
        alpha=cfg.alpha, lam=cfg.lam, nu=cfg.nu, length=cfg.length, tol=cfg.tol,
    )


def run(cfg: RunConfig) -> int:
    """Solve f = g + lambda L0+^alpha f and report the residual"""
    g = parse_descriptor(cfg.func)
    solve_cfg = solver_config(cfg)
    if cfg.solver == SolverKind.DIRECT:
        solution = volterra.direct_solve(g, solve_cfg, n=cfg.grid_n, grading=cfg.grading)
    else:
        nodes = GridFunction.graded_nodes(cfg.length, cfg.grid_n, cfg.grading)
        route = volterra.neumann_solve if cfg.solver == SolverKind.NEUMANN else volterra.resolvent_solve
        solution = route(g, solve_cfg, nodes)

    check = volterra.residual(solution, g, solve_cfg)
    worst = check.norm(0.0, float("inf"))
    logger.info(f"{cfg.solver.value} solve done, residual sup-norm {worst:.2e}")
    write_table(
        cfg.output, cfg.command.value,
        run_metadata(cfg, disk_radius=solve_cfg.disk_radius, residual_sup=worst),
        ["x", "f", "residual"], zip(solution.nodes, solution.values, check.values),
    )
    return 0
