"""
Solver for the Volterra equation f(x) = g(x) + lambda L0+^alpha f(x) on (0, l].

Three routes are provided and cross-checked:
  - Neumann series f = sum lambda^n L^(alpha n) g;
  - the resolvent R(x, u) = sum lambda^n K_{alpha n}(x, u), in single-series
    form (iterated kernels) or double-series form (closed coefficients);
  - direct product integration on the graded grid.

Iterated kernels are K_{beta}(x, u) = u^(beta - 1) k+^{(beta)}(x / u).
"""

import logging
import math
from typing import Any, Optional, Union

import numpy as np
from numpy.typing import NDArray
from scipy import integrate, linalg, special

from laguerre.config import DEFAULT_GRADING, DEFAULT_GRID_N
from laguerre.errors import (
    ConvergenceDiskError,
    NonConvergenceError,
    ParameterDomainError,
    TruncationBudgetError,
)
from laguerre.models.catalog import GridFunction, Tabulated
from laguerre.models.schemas import NeumannSolveConfig, ResolventForm, ResolventTermParams
from laguerre.services import quadrature
from laguerre.services.kernels import k_plus, kernel_eval, log_k_plus
from laguerre.services.operators import (
    DENSE_BREAKPOINTS,
    DENSE_PANEL_POINTS,
    FunctionLike,
    as_integrand,
    laguerre_L_left,
)

logger = logging.getLogger(__name__)

# Below u/x = SINGLE_SERIES_SWITCH the double series converges too slowly in k
SINGLE_SERIES_SWITCH = 0.25
MAX_SERIES_INDEX = 10_000
MAX_RESOLVENT_TERMS = 400
DOUBLE_SERIES_START = (8, 64)
PRODUCT_POINTS = 8
MAX_CORRECTIONS = 8


def _check_disk(cfg: NeumannSolveConfig) -> None:
    radius = cfg.disk_radius
    if not abs(cfg.lam) < radius:
        raise ConvergenceDiskError(f"|lambda| = {abs(cfg.lam):.6g} outside the disk of radius {radius:.6g}")


def _result_dtype(cfg: NeumannSolveConfig) -> Any:
    return complex if isinstance(cfg.lam, complex) else float


def grid_for(cfg: NeumannSolveConfig, n: int = DEFAULT_GRID_N, grading: float = DEFAULT_GRADING) -> NDArray[np.float64]:
    return GridFunction.graded_nodes(cfg.length, n, grading)


def neumann_solve(
    g: FunctionLike, cfg: NeumannSolveConfig, nodes: Optional[NDArray[np.float64]] = None
) -> GridFunction:
    """
    Sum lambda^n L^(alpha n) g on the grid until the sup-norm of a term drops
    below cfg.tol.
    """
    _check_disk(cfg)
    x = grid_for(cfg) if nodes is None else np.asarray(nodes, dtype=float)
    source = as_integrand(g)
    total = np.asarray(source(x), dtype=_result_dtype(cfg)).copy()
    for n in range(1, cfg.max_terms + 1):
        term = cfg.lam**n * np.asarray(laguerre_L_left(source, cfg.alpha * n, x))
        total = total + term
        size = float(np.max(np.abs(term)))
        if size < cfg.tol:
            logger.info(f"Neumann series converged after {n} terms (last term {size:.2e})")
            return GridFunction(x, total, cfg.length, DEFAULT_GRADING)
    raise TruncationBudgetError(f"Neumann series needed more than {cfg.max_terms} terms")


def legendre_kernel(x: float, u: float, alpha_n: float) -> float:
    """
    K_{beta}(x, u) through its Legendre-function integral
        2 (x - u)^(2 beta - 1) / Gamma(beta)^2 * int_0^inf dy / (2 sqrt(xu) cosh y + x + u)^beta
    """
    if alpha_n <= 0:
        raise NonConvergenceError(f"Legendre integral diverges for alpha_n = {alpha_n}")
    params = ResolventTermParams(x=x, u=u, alpha_n=alpha_n)
    root = math.sqrt(params.x * params.u)
    total = params.x + params.u

    def integrand(y: float) -> float:
        # log of 2 sqrt(xu) cosh y + x + u without overflow
        log_cosh = y + math.log1p(math.exp(-2.0 * y)) - math.log(2.0)
        big = math.log(2.0 * root) + log_cosh
        return math.exp(-alpha_n * (big + math.log1p(total * math.exp(-big))))

    value, _ = integrate.quad(integrand, 0.0, math.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    prefactor = 2.0 * math.exp((2.0 * alpha_n - 1.0) * math.log(params.x - params.u) - 2.0 * special.gammaln(alpha_n))
    return prefactor * value


def iterated_kernel(x: float, u: Union[float, NDArray[np.float64]], beta: float) -> NDArray[np.float64]:
    """K_beta(x, u) = u^(beta - 1) k+^{(beta)}(x / u) for 0 < u < x"""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    ke = kernel_eval(beta)
    out = np.zeros_like(u_arr)
    v = x / u_arr
    inside = v > 1.0
    if np.any(inside):
        # u^(beta-1) and k+(x/u) over- and underflow separately for large beta
        out[inside] = np.exp((beta - 1.0) * np.log(u_arr[inside]) + log_k_plus(ke, v[inside]))
    return out


def resolvent_remainder_bound(x: float, u: float, cfg: NeumannSolveConfig, n: int) -> float:
    """Majorant of |sum over j > n of lambda^j K_{alpha j}(x, u)|"""
    lam = abs(cfg.lam)
    a = cfg.alpha
    beta_fn = special.beta(0.5, a / 2.0)
    log_ratio = math.log((4.0 * cfg.length + 1.0) / math.sqrt(x * u))
    total = 0.0
    for j in range(n + 1, n + MAX_RESOLVENT_TERMS):
        aj = a * j
        log_lead = j * math.log(lam) + (2.0 * aj - 1.0) * math.log(x - u) - 2.0 * special.gammaln(aj) if lam > 0 else -math.inf
        bracket = beta_fn / (2.0 ** (1.0 + a) * (x * u) ** (a / 2.0)) + x ** (-aj) * abs(log_ratio)
        term = 2.0 * math.exp(log_lead) * bracket
        total += term
        if term < 1e-18 * max(total, 1e-300) and j > n + 3:
            break
    return total


def resolvent_terms(x: float, u: float, cfg: NeumannSolveConfig, n_terms: int) -> NDArray[Any]:
    """lambda^n K_{alpha n}(x, u) for n = 1..n_terms"""
    ResolventTermParams(x=x, u=u, alpha_n=cfg.alpha)
    return np.array(
        [cfg.lam**n * float(iterated_kernel(x, u, cfg.alpha * n)[0]) for n in range(1, n_terms + 1)]
    )


def _single_series(x: float, u: NDArray[np.float64], cfg: NeumannSolveConfig) -> NDArray[Any]:
    total = np.zeros(len(u), dtype=_result_dtype(cfg))
    for n in range(1, MAX_RESOLVENT_TERMS + 1):
        term = cfg.lam**n * iterated_kernel(x, u, cfg.alpha * n)
        total = total + term
        if n >= 2 and float(np.max(np.abs(term))) <= cfg.tol * max(float(np.max(np.abs(total))), 1e-300):
            return total
    raise TruncationBudgetError("single-series resolvent did not converge")


def _double_series(x: float, u: NDArray[np.float64], cfg: NeumannSolveConfig) -> NDArray[Any]:
    """
    lambda x^-a (x-u)^(2a-1) sum_{k,n} (Gamma(a(n+1)+k)/Gamma(a(n+1)))^2 / Gamma(2a(n+1)+k)
        * w^k z^n / k!
    with w = 1 - u/x and z = lambda x^-a (x-u)^(2a); the (n, k) rectangle doubles until
    the outer shell is below tolerance.
    """
    a = cfg.alpha
    w = 1.0 - u / x
    dtype = _result_dtype(cfg)
    z = cfg.lam * x ** (-a) * (x - u) ** (2.0 * a)
    n_max, k_max = DOUBLE_SERIES_START

    def block(nn: int, kk: int) -> NDArray[Any]:
        n_idx = np.arange(nn)[:, None]
        k_idx = np.arange(kk)[None, :]
        shifted = a * (n_idx + 1.0)
        log_coef = (
            2.0 * (special.gammaln(shifted + k_idx) - special.gammaln(shifted))
            - special.gammaln(2.0 * shifted + k_idx)
            - special.gammaln(k_idx + 1.0)
        )
        coef = np.exp(log_coef)
        w_pow = w[:, None] ** np.arange(kk)[None, :]
        per_n = w_pow @ coef.T
        z_pow = np.asarray(z, dtype=dtype)[:, None] ** np.arange(nn)[None, :]
        return np.sum(per_n * z_pow, axis=1)

    previous = block(n_max, k_max)
    while True:
        if 2 * n_max > MAX_SERIES_INDEX or 2 * k_max > MAX_SERIES_INDEX:
            raise TruncationBudgetError("double-series resolvent exceeded its index budget")
        n_max, k_max = 2 * n_max, 2 * k_max
        current = block(n_max, k_max)
        shell = float(np.max(np.abs(current - previous)))
        if shell <= cfg.tol * max(float(np.max(np.abs(current))), 1e-300):
            break
        previous = current
    return cfg.lam * x ** (-a) * (x - u) ** (2.0 * a - 1.0) * current


def resolvent_kernel(
    x: float, u: Union[float, NDArray[np.float64]], cfg: NeumannSolveConfig,
    form: ResolventForm = ResolventForm.SINGLE_SERIES,
) -> Union[complex, float, NDArray[Any]]:
    """R(x, u) = sum lambda^n K_{alpha n}(x, u) for 0 < u < x"""
    _check_disk(cfg)
    u_arr = np.asarray(u, dtype=float)
    scalar = u_arr.ndim == 0
    u_arr = np.atleast_1d(u_arr)
    if np.any(u_arr <= 0) or np.any(u_arr >= x):
        raise ParameterDomainError("resolvent needs 0 < u < x")
    if form == ResolventForm.SINGLE_SERIES:
        values = _single_series(x, u_arr, cfg)
    else:
        values = _double_series(x, u_arr, cfg)
    return values[0] if scalar else values


def _resolvent_mixed(x: float, u: NDArray[np.float64], cfg: NeumannSolveConfig) -> NDArray[Any]:
    out = np.zeros(len(u), dtype=_result_dtype(cfg))
    near = u >= SINGLE_SERIES_SWITCH * x
    if np.any(near):
        out[near] = _double_series(x, u[near], cfg)
    if np.any(~near):
        out[~near] = _single_series(x, u[~near], cfg)
    return out


def resolvent_solve(
    g: FunctionLike, cfg: NeumannSolveConfig, nodes: Optional[NDArray[np.float64]] = None
) -> GridFunction:
    """f(x) = g(x) + integral over (0, x) of R(x, u) g(u) du"""
    _check_disk(cfg)
    x_nodes = grid_for(cfg) if nodes is None else np.asarray(nodes, dtype=float)
    source = as_integrand(g)
    edge = 2.0 * cfg.alpha - 1.0
    values = np.asarray(source(x_nodes), dtype=_result_dtype(cfg)).copy()
    lo, hi = source.support
    growth = min(source.growth, 20.0)
    points = DENSE_PANEL_POINTS if len(source.breakpoints) > DENSE_BREAKPOINTS else quadrature.LEGENDRE_POINTS
    for i, x in enumerate(x_nodes):
        if lo >= x:
            continue
        cuts = [b / x for b in source.breakpoints]
        skip = []
        if lo > 0:
            skip.append((0.0, lo / x))
        if hi < math.inf:
            skip.append((hi / x, math.inf))
        jacobi, plain = quadrature.unit_interval_rule(edge, growth, cuts, 2.0, skip, points)
        acc = 0.0 + 0.0j
        if len(jacobi):
            t = jacobi.nodes
            r = _resolvent_mixed(x, x * t, cfg) / (1.0 - t) ** edge
            acc += np.dot(jacobi.weights, r * source(x * t))
        if len(plain):
            t = plain.nodes
            acc += np.dot(plain.weights, _resolvent_mixed(x, x * t, cfg) * source(x * t))
        values[i] += x * acc if values.dtype == complex else x * acc.real
    logger.info(f"resolvent solve finished on {len(x_nodes)} nodes")
    return GridFunction(x_nodes, values, cfg.length, DEFAULT_GRADING)


def direct_solve(
    g: FunctionLike, cfg: NeumannSolveConfig, n: int = DEFAULT_GRID_N, grading: float = DEFAULT_GRADING
) -> GridFunction:
    """
    Product integration with piecewise-linear f on the graded grid, then defect correction.

    f is taken constant on (0, x_1]; the rows f_i - lambda sum_{j<=i} W_ij f_j = g_i
    form a lower-triangular system A f = g. Each correction sweep solves
    A d = residual(f) and sets f <- f - d, until the residual drops below cfg.tol.
    """
    _check_disk(cfg)
    x = GridFunction.graded_nodes(cfg.length, n, grading)
    source = as_integrand(g)
    ke = kernel_eval(cfg.alpha)
    a = cfg.alpha
    edge = 2.0 * a - 1.0
    g_vals = np.asarray(source(x), dtype=_result_dtype(cfg))
    legendre = quadrature.legendre_rule(0.0, 1.0, PRODUCT_POINTS)
    jac = quadrature.jacobi_rule(0.0, 1.0, upper_exponent=edge, n=PRODUCT_POINTS)
    grid = np.concatenate([[0.0], x])
    widths = np.diff(grid)
    product = np.zeros((n, n))

    for i in range(n):
        xi = x[i]
        w_hi = np.empty(i + 1)
        w_lo = np.empty(i + 1)
        if i:
            u = grid[:i, None] + widths[:i, None] * legendre.nodes[None, :]
            k = u ** (a - 1.0) * np.asarray(k_plus(ke, (xi / u).ravel())).reshape(u.shape)
            base = legendre.weights[None, :] * widths[:i, None] * k
            w_hi[:i] = base @ legendre.nodes
            w_lo[:i] = base @ (1.0 - legendre.nodes)
        # K(x, u) = x^-a (x - u)^(2a-1) H_reg(u/x); the edge factor sits in the Jacobi weight
        u_last = grid[i] + widths[i] * jac.nodes
        regular = xi ** (-a) * np.asarray(ke.regular_weight(u_last / xi))
        base_last = jac.weights * widths[i] ** (edge + 1.0) * regular
        w_hi[i] = base_last @ jac.nodes
        w_lo[i] = base_last @ (1.0 - jac.nodes)

        product[i, : i + 1] = w_hi
        product[i, :i] += w_lo[1:]
        product[i, 0] += w_lo[0]

    system = np.eye(n) - cfg.lam * product
    f = linalg.solve_triangular(system, g_vals, lower=True)
    size = math.inf
    for sweep in range(MAX_CORRECTIONS + 1):
        solution = GridFunction(x, f, cfg.length, grading)
        defect = residual(solution, source, cfg).values
        size = float(np.max(np.abs(defect)))
        if size < cfg.tol:
            logger.info(f"direct solve finished on {n} nodes after {sweep} corrections (residual {size:.2e})")
            return solution
        if sweep < MAX_CORRECTIONS:
            f = f - linalg.solve_triangular(system, defect, lower=True)
    raise TruncationBudgetError(
        f"direct solve residual {size:.2e} still above {cfg.tol:.2e} after {MAX_CORRECTIONS} corrections"
    )


def residual(f: GridFunction, g: FunctionLike, cfg: NeumannSolveConfig) -> GridFunction:
    """
    f - g - lambda L0+^alpha f on the grid nodes.

    L0+^alpha g is taken from g itself; f - g is interpolated as x^kappa q(x)
    with kappa = growth(g) + alpha its leading exponent and q a cubic spline.
    """
    source = as_integrand(g)
    g_nodes = np.asarray(source(f.nodes))
    kappa = source.growth + cfg.alpha if math.isfinite(source.growth) else 0.0
    scaled = (f.values - g_nodes) / f.nodes**kappa
    parts = [np.real(scaled)]
    if np.iscomplexobj(scaled):
        parts.append(np.imag(scaled))
    images = [
        np.asarray(laguerre_L_left(Tabulated(grid=f.with_values(part), power=kappa), cfg.alpha, f.nodes))
        for part in parts
    ]
    image = images[0] + (1j * images[1] if len(images) > 1 else 0.0)
    image = image + np.asarray(laguerre_L_left(source, cfg.alpha, f.nodes))
    return f.with_values(f.values - g_nodes - cfg.lam * image)
