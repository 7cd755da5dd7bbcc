"""
Invariant checks run by the verify command.

Each check evaluates one identity at reduced size and returns (passed,
detail) with the worst deviation it saw.
"""

import cmath
import itertools
import logging
import math

import numpy as np
from scipy import special

from laguerre.models.catalog import CatalogFunction, ExpDecay, GridFunction, Monomial, Polynomial, SmoothBump
from laguerre.models.schemas import (
    MellinContour,
    MultiplierDescriptor,
    MultiplierKind,
    NeumannSolveConfig,
    OperatorKind,
    ResolventForm,
)
from laguerre.services import kernels, mellin, operators, specfun, volterra
from laguerre.services.verification import suite

logger = logging.getLogger(__name__)

VERIFY_GRID_N = 64
# (alpha, lambda, l) and sources of the three-route comparison
ROUTE_CASES = ((1.0, 0.5, 1.0), (0.75, 0.2, 1.0), (0.6, 0.1, 0.5))
ROUTE_SOURCES = (Polynomial(coefficients=(1.0,)), Monomial(mu=1.0), SmoothBump(a=0.2, b=0.8))
ROUTE_TOL = 1e-9
BOUNDEDNESS_TRIALS = 20
BOUNDEDNESS_SEED = 20240501
# Truncation order of the c_k partial sums
CAUCHY_ORDER = 10


def _relative(value: complex, reference: complex) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def _verdict(worst: float, tol: float) -> tuple[bool, str]:
    return worst <= tol, f"max deviation {worst:.2e} (tol {tol:.0e})"


@suite.register("gamma-reflection", "specfun")
def check_reflection() -> tuple[bool, str]:
    z = np.linspace(-4.95, 4.95, 199)
    z = z[np.abs(z - np.round(z)) > 1e-3]
    worst = 0.0
    for zi in z:
        product = cmath.exp(specfun.ln_gamma(zi) + specfun.ln_gamma(1.0 - zi)) * math.sin(math.pi * zi)
        worst = max(worst, _relative(product.real, math.pi))
    return _verdict(worst, 1e-12)


@suite.register("hyp2f1-closed-form", "specfun")
def check_hyp2f1_closed_form() -> tuple[bool, str]:
    z = -np.geomspace(0.01, 100.0, 60)
    values = np.asarray(specfun.hyp2f1(1.0, 1.0, 2.0, z)) * z
    worst = float(np.max(np.abs(values + np.log1p(-z)) / np.abs(np.log1p(-z))))
    return _verdict(worst, 1e-12)


@suite.register("hyp2f1-switch-continuity", "specfun")
def check_hyp2f1_switch() -> tuple[bool, str]:
    worst = 0.0
    for alpha in (0.6, 0.75, 1.25):
        w = specfun.PFAFF_SWITCH
        series = specfun.hyp2f1_gauss_series(alpha, alpha, 2.0 * alpha, w)
        log_case = specfun.hyp2f1_log_case(alpha, alpha, 1.0 - w)
        worst = max(worst, _relative(float(log_case), float(series)))
    return _verdict(worst, 1e-10)


@suite.register("stirling-integer", "specfun")
def check_stirling_integer() -> tuple[bool, str]:
    for n in range(1, 7):
        # u (u - 1) ... (u - n + 1), lowest power first
        expected = np.poly(np.arange(n))[::-1]
        got = [specfun.stirling_s(float(n), k) for k in range(n + 1)]
        if any(g != e for g, e in zip(got, expected)):
            return False, f"s({n}, k) = {got}, expected {expected.tolist()}"
    return True, "exact for n <= 6"


@suite.register("stirling-continuity", "specfun")
def check_stirling_continuity() -> tuple[bool, str]:
    worst = 0.0
    for n in range(1, 6):
        for alpha in (n - 1e-4, n + 1e-4):
            for k in range(n + 1):
                exact = specfun.stirling_s(float(n), k)
                near = specfun.stirling_s(alpha, k)
                worst = max(worst, abs(near - exact) / max(1.0, abs(exact)))
    return _verdict(worst, 1e-2)


@suite.register("cauchy-coefficients", "specfun")
def check_cauchy_coefficients() -> tuple[bool, str]:
    """Partial sums of c_k u^k against [u]_alpha^2 inside the unit disc"""
    u = np.array([-0.1, -0.05, 0.05, 0.1])
    worst = 0.0
    for alpha in (0.3, 0.8, 1.7):
        coeffs = specfun.cauchy_coefficients(alpha, CAUCHY_ORDER)
        partial = np.polynomial.polynomial.polyval(u, coeffs)
        expected = (special.gamma(u + 1.0) / special.gamma(u + 1.0 - alpha)) ** 2
        worst = max(worst, float(np.max(np.abs(partial - expected) / np.maximum(1.0, np.abs(expected)))))
    return _verdict(worst, 1e-9)


@suite.register("kernel-mellin", "kernels")
def check_kernel_mellin() -> tuple[bool, str]:
    worst = 0.0
    for alpha in (0.6, 1.25):
        ke = kernels.kernel_eval(alpha)
        for tau in (0.0, 1.0, 5.0):
            s = complex(1.0 - alpha - 0.2, tau)
            plus = kernels.kernel_mellin(ke, s, "plus")
            worst = max(worst, _relative(plus, complex(specfun.gamma_ratio_sq(1.0 - alpha - s, 1.0 - s))))
            s = complex(0.3, tau)
            minus = kernels.kernel_mellin(ke, s, "minus")
            worst = max(worst, _relative(minus, complex(specfun.gamma_ratio_sq(s, s + alpha))))
    return _verdict(worst, 1e-6)


@suite.register("c-plus-closed-form", "kernels")
def check_c_plus() -> tuple[bool, str]:
    return _verdict(abs(kernels.c_plus(1.0, -0.5) - 4.0) / 4.0, 1e-8)


@suite.register("kernel-positivity", "kernels")
def check_kernel_positivity() -> tuple[bool, str]:
    for alpha in (0.55, 0.75, 1.3, 2.5):
        ke = kernels.kernel_eval(alpha)
        plus = np.asarray(kernels.k_plus(ke, 1.0 + np.geomspace(1e-4, 1e4, 200)))
        minus = np.asarray(kernels.k_minus(ke, np.geomspace(1e-8, 1.0 - 1e-9, 200)))
        if not (np.all(plus > 0) and np.all(minus > 0)):
            return False, f"non-positive kernel value at alpha = {alpha}"
    return True, "k+ and k- positive over 8 decades"


@suite.register("legendre-identity", "kernels")
def check_legendre_identity() -> tuple[bool, str]:
    worst = 0.0
    for alpha in (0.75, 1.3):
        ke = kernels.kernel_eval(alpha)
        for x in (1.5, 4.0, 50.0):
            worst = max(worst, _relative(volterra.legendre_kernel(x, 1.0, alpha), float(kernels.k_plus(ke, x))))
    return _verdict(worst, 1e-7)


@suite.register("alpha-one-log-kernel", "kernels")
def check_alpha_one_kernel() -> tuple[bool, str]:
    ke = kernels.kernel_eval(1.0)
    v = np.geomspace(1.001, 1e4, 40)
    worst = float(np.max(np.abs(np.asarray(kernels.k_plus(ke, v)) - np.log(v)) / np.log(v)))
    worst = max(worst, float(np.max(np.abs(np.asarray(kernels.k_minus(ke, 1.0 / v)) - np.log(v)) / np.log(v))))
    t = np.array([1e-6, 0.2, 0.5, 0.9])
    worst = max(worst, float(np.max(np.abs(ke.weight(t) + np.log(t)) / -np.log(t))))
    return _verdict(worst, 1e-12)


@suite.register("monomial-eigenrelation", "operators")
def check_eigenrelation() -> tuple[bool, str]:
    x = np.array([0.5, 1.0, 3.0])
    worst = 0.0
    for alpha in (0.55, 0.8, 1.0, 1.5, 2.3):
        for mu in (alpha - 0.5, 1.0, 2.5):
            got = np.asarray(operators.laguerre_L_left(Monomial(mu=mu), alpha, x))
            factor = math.exp(2.0 * (special.gammaln(1.0 + mu) - special.gammaln(1.0 + mu + alpha)))
            expected = factor * x ** (mu + alpha)
            worst = max(worst, float(np.max(np.abs(got - expected) / expected)))
    return _verdict(worst, 1e-7)


@suite.register("integer-reduction", "operators")
def check_integer_reduction() -> tuple[bool, str]:
    worst = 0.0
    for n in (1, 2, 3):
        for mu in (0.0, 1.0, 2.0):
            f = Polynomial(coefficients=(1.0,)) if mu == 0 else Monomial(mu=mu)
            for x in (0.5, 1.0, 2.0):
                composed, direct = operators.rl_composition_check(f, n, x)
                worst = max(worst, _relative(composed, direct))
    return _verdict(worst, 1e-7)


@suite.register("viskov-inversion", "operators")
def check_viskov() -> tuple[bool, str]:
    x = np.array([0.5, 1.0, 2.0])
    worst = 0.0
    for n in (1, 2):
        for f in (Monomial(mu=1.0), ExpDecay(rate=1.0)):
            inner = operators.image(f, OperatorKind.L_LEFT, float(n))
            got = operators.theta_of(inner, n, x)
            worst = max(worst, float(np.max(np.abs(got - f(x)) / np.abs(f(x)))))
    return _verdict(worst, 1e-4)


@suite.register("fractional-inversion", "operators")
def check_fractional_inversion() -> tuple[bool, str]:
    x = np.array([0.5, 1.0])
    worst = 0.0
    for alpha, f in ((0.6, ExpDecay(rate=1.0)), (1.3, Monomial(mu=1.0))):
        lifted = operators.image(f, OperatorKind.L_LEFT, alpha)
        recovered = operators.laguerre_D_left(lifted, alpha, x).values
        worst = max(worst, float(np.max(np.abs(recovered - f(x)) / np.abs(f(x)))))
        lowered = operators.image(f, OperatorKind.D_LEFT, alpha)
        restored = np.asarray(operators.laguerre_L_left(lowered, alpha, x))
        worst = max(worst, float(np.max(np.abs(restored - f(x)) / np.abs(f(x)))))
    return _verdict(worst, 1e-4)


@suite.register("right-fractional-inversion", "operators")
def check_right_fractional_inversion() -> tuple[bool, str]:
    f = ExpDecay(rate=1.0)
    x = np.array([0.5, 1.0, 2.0])
    lifted = operators.image(f, OperatorKind.L_RIGHT, 0.7)
    recovered = operators.laguerre_D_right(lifted, 0.7, x).values
    return _verdict(float(np.max(np.abs(recovered - f(x)) / f(x))), 1e-4)


@suite.register("semigroup", "operators")
def check_semigroup() -> tuple[bool, str]:
    f = Monomial(mu=1.0)
    worst = 0.0
    for alpha in (0.6, 0.9):
        for beta in (0.6, 0.9):
            nested = operators.laguerre_L_left(operators.image(f, OperatorKind.L_LEFT, beta), alpha, 1.0)
            combined = operators.laguerre_L_left(f, alpha + beta, 1.0)
            worst = max(worst, _relative(float(nested), float(combined)))
    return _verdict(worst, 1e-6)


def _random_catalog(rng: np.random.Generator) -> CatalogFunction:
    pick = rng.integers(3)
    if pick == 0:
        return Monomial(mu=float(rng.uniform(0.6, 3.0)))
    if pick == 1:
        a = float(rng.uniform(0.05, 0.5))
        return SmoothBump(a=a, b=float(rng.uniform(a + 0.1, 1.0)))
    return Polynomial(coefficients=(0.0,) + tuple(float(c) for c in rng.uniform(0.1, 2.0, size=3)))


@suite.register("boundedness", "operators")
def check_boundedness() -> tuple[bool, str]:
    alpha, nu, p, length = 1.0, -0.5, 2.0, 1.0
    bound = kernels.c_plus(alpha, nu) * length**alpha
    rng = np.random.default_rng(BOUNDEDNESS_SEED)
    nodes = GridFunction.graded_nodes(length, 256, 2.0)
    worst = 0.0
    for _ in range(BOUNDEDNESS_TRIALS):
        f = _random_catalog(rng)
        sampled = GridFunction(nodes, np.asarray(f(nodes)), length, 2.0)
        image = sampled.with_values(np.asarray(operators.laguerre_L_left(f, alpha, nodes)))
        worst = max(worst, image.norm(nu, p) / sampled.norm(nu, p))
    return worst <= bound, f"largest norm ratio {worst:.4g} against C+ l^alpha = {bound:.4g}"


@suite.register("integration-by-parts", "operators")
def check_integration_by_parts() -> tuple[bool, str]:
    f, g = SmoothBump(a=3.0, b=4.0), SmoothBump(a=1.0, b=2.0)
    left, right = operators.integration_by_parts_check(f, g, 0.7)
    return _verdict(_relative(left, right), 1e-7)


@suite.register("derivative-integration-by-parts", "operators")
def check_derivative_integration_by_parts() -> tuple[bool, str]:
    f, g = SmoothBump(a=3.0, b=4.0), SmoothBump(a=1.0, b=2.0)
    left, right = operators.derivative_integration_by_parts_check(f, g, 0.6)
    return _verdict(_relative(left, right), 1e-3)


@suite.register("mellin-route-agreement", "mellin")
def check_route_agreement() -> tuple[bool, str]:
    f = ExpDecay(rate=1.0)
    x = np.array([0.5, 1.0])
    worst = 0.0
    for alpha in (0.6, 1.0):
        md = MultiplierDescriptor(kind=MultiplierKind.LAG_INT_LEFT, alpha=alpha)
        spectral = np.asarray(mellin.apply_multiplier(f, md, None, x))
        direct = np.asarray(operators.laguerre_L_left(f, alpha, x))
        worst = max(worst, float(np.max(np.abs(spectral - direct) / np.abs(direct))))
    return _verdict(worst, 1e-6)


@suite.register("mellin-round-trip", "mellin")
def check_mellin_round_trip() -> tuple[bool, str]:
    x = np.array([0.5, 1.0, 2.0])
    worst = 0.0
    for rate in (1.0, 2.5):
        f = ExpDecay(rate=rate)
        values, errors = mellin.mellin_inverse_with_error(mellin.forward_transform(f), MellinContour(nu=1.0), x)
        if errors.max() > mellin.INVERSION_WARN:
            return False, f"inversion error estimate {errors.max():.2e} for {f.descriptor}"
        worst = max(worst, float(np.max(np.abs(values - f(x)) / f(x))))
    return _verdict(worst, 1e-6)


@suite.register("multiplier-semigroup", "mellin")
def check_multiplier_semigroup() -> tuple[bool, str]:
    worst = 0.0
    cases = ((MultiplierKind.LAG_INT_LEFT, -1.0), (MultiplierKind.LAG_INT_RIGHT, 0.5))
    for (kind, nu), (alpha, beta) in itertools.product(cases, ((0.6, 0.9), (1.3, 0.4))):
        s = nu + 1j * np.linspace(-30.0, 30.0, 121)
        outer = MultiplierDescriptor(kind=kind, alpha=alpha)
        inner = MultiplierDescriptor(kind=kind, alpha=beta)
        product, shift = mellin.compose_multipliers(outer, inner)
        combined = MultiplierDescriptor(kind=kind, alpha=alpha + beta)
        expected = np.asarray(mellin.multiplier_value(combined, s))
        worst = max(worst, float(np.max(np.abs(product(s) - expected) / np.abs(expected))))
        worst = max(worst, abs(shift - combined.shift))
    return _verdict(worst, 1e-12)


@suite.register("derivative-cancellation", "mellin")
def check_derivative_cancellation() -> tuple[bool, str]:
    worst = 0.0
    for alpha in (0.6, 1.3):
        tau = np.linspace(-30.0, 30.0, 121)
        left_d = MultiplierDescriptor(kind=MultiplierKind.LAG_DER_LEFT, alpha=alpha)
        left_l = MultiplierDescriptor(kind=MultiplierKind.LAG_INT_LEFT, alpha=alpha)
        product, _ = mellin.compose_multipliers(left_d, left_l)
        worst = max(worst, float(np.max(np.abs(product(0.5 * (1.0 - alpha) + 1j * tau) - 1.0))))
        right_d = MultiplierDescriptor(kind=MultiplierKind.LAG_DER_RIGHT, alpha=alpha)
        right_l = MultiplierDescriptor(kind=MultiplierKind.LAG_INT_RIGHT, alpha=alpha)
        product, _ = mellin.compose_multipliers(right_d, right_l)
        worst = max(worst, float(np.max(np.abs(product(alpha + 0.5 + 1j * tau) - 1.0))))
    return _verdict(worst, 1e-12)


@suite.register("multiplier-decay", "mellin")
def check_multiplier_decay() -> tuple[bool, str]:
    alpha, nu = 0.6, 0.2
    md = MultiplierDescriptor(kind=MultiplierKind.LAG_INT_LEFT, alpha=alpha)
    tau = np.geomspace(1e2, 1e3, 40)
    scaled = np.abs(np.asarray(mellin.multiplier_value(md, nu + 1j * tau))) * tau ** (2.0 * alpha)
    spread = float(scaled.max() / scaled.min())
    return spread < 1.05, f"|M| |tau|^(2 alpha) varies by a factor {spread:.4f}"


@suite.register("parseval", "mellin")
def check_parseval() -> tuple[bool, str]:
    f = ExpDecay(rate=1.0)
    direct, spectral = mellin.parseval_pair(f, f, MellinContour(nu=0.5))
    return _verdict(max(abs(direct - 0.5), abs(spectral - 0.5)) / 0.5, 1e-8)


@suite.register("bessel-benchmark", "volterra")
def check_bessel() -> tuple[bool, str]:
    worst = 0.0
    nodes = GridFunction.graded_nodes(1.0, VERIFY_GRID_N, 2.0)
    for lam in (0.5, 1.0):
        cfg = NeumannSolveConfig(alpha=1.0, lam=lam)
        expected = special.iv(0, 2.0 * np.sqrt(lam * nodes))
        for solver in (volterra.neumann_solve, volterra.resolvent_solve):
            got = solver(Polynomial(coefficients=(1.0,)), cfg, nodes)
            worst = max(worst, float(np.max(np.abs(got.values - expected) / expected)))
    return _verdict(worst, 1e-6)


@suite.register("resolvent-equivalence", "volterra")
def check_resolvent_equivalence() -> tuple[bool, str]:
    worst = 0.0
    for alpha in (0.6, 0.75, 1.1):
        cfg = NeumannSolveConfig(alpha=alpha, lam=0.2)
        for x in (0.2, 0.4, 0.6, 0.8, 1.0):
            u = x * np.array([0.1, 0.3, 0.5, 0.7, 0.9])
            single = np.asarray(volterra.resolvent_kernel(x, u, cfg, ResolventForm.SINGLE_SERIES))
            double = np.asarray(volterra.resolvent_kernel(x, u, cfg, ResolventForm.DOUBLE_SERIES))
            worst = max(worst, float(np.max(np.abs(single - double) / np.abs(single))))
    return _verdict(worst, 1e-8)


@suite.register("remainder-bound", "volterra")
def check_remainder_bound() -> tuple[bool, str]:
    cfg = NeumannSolveConfig(alpha=0.75, lam=0.2)
    for x, u in ((1.0, 0.4), (0.5, 0.1), (0.9, 0.8)):
        terms = volterra.resolvent_terms(x, u, cfg, 40)
        for n in (1, 2, 4):
            tail = abs(complex(np.sum(terms[n:])))
            bound = volterra.resolvent_remainder_bound(x, u, cfg, n)
            if tail > bound:
                return False, f"tail {tail:.3e} exceeds bound {bound:.3e} at x={x}, u={u}, n={n}"
    return True, "series tails below the majorant"


@suite.register("legendre-route", "volterra")
def check_legendre_route() -> tuple[bool, str]:
    rng = np.random.default_rng(BOUNDEDNESS_SEED)
    worst = 0.0
    for _ in range(10):
        x = float(rng.uniform(0.2, 1.0))
        u = float(rng.uniform(0.05, 0.95)) * x
        beta = float(rng.uniform(0.55, 3.0))
        kernel = float(volterra.iterated_kernel(x, u, beta)[0])
        worst = max(worst, _relative(volterra.legendre_kernel(x, u, beta), kernel))
    return _verdict(worst, 1e-7)


@suite.register("three-route-agreement", "volterra")
def check_three_routes() -> tuple[bool, str]:
    worst = 0.0
    for (alpha, lam, length), g in itertools.product(ROUTE_CASES, ROUTE_SOURCES):
        cfg = NeumannSolveConfig(alpha=alpha, lam=lam, length=length, tol=ROUTE_TOL)
        direct = volterra.direct_solve(g, cfg, n=2 * VERIFY_GRID_N)
        neumann = volterra.neumann_solve(g, cfg, direct.nodes)
        resolvent = volterra.resolvent_solve(g, cfg, direct.nodes)
        for solution in (direct, neumann, resolvent):
            size = volterra.residual(solution, g, cfg).norm(0.0, math.inf)
            if size >= 10.0 * cfg.tol:
                return False, f"residual {size:.3e} at alpha={alpha}, lambda={lam}, g={g.descriptor}"
        worst = max(
            worst,
            neumann.sup_distance(resolvent),
            neumann.sup_distance(direct),
            resolvent.sup_distance(direct),
        )
    return _verdict(worst, 1e-4)
