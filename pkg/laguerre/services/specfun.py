"""
Special functions shared by the kernel, operator and solver layers.

Log-gamma on the principal branch, squared Gamma ratios, polygamma, the Gauss
hypergeometric function on z < 1 and the fractional Stirling functions, i.e.
the Taylor coefficients of the fractional falling factorial
[u]_alpha = Gamma(u + 1) / Gamma(u + 1 - alpha).

All routines accept numpy arrays where the callers need them vectorised.
"""

import logging
import math
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from laguerre.errors import NonConvergenceError, ParameterDomainError, PoleError
from laguerre.models.schemas import Hyp2F1Params, StirlingOrder

logger = logging.getLogger(__name__)

# Above this argument the Gauss series is replaced by an expansion about w = 1
PFAFF_SWITCH = 0.75
MAX_SERIES_TERMS = 10_000
SERIES_EPS = 1e-17
# Extra Taylor orders carried when composing exp(ln Gamma) series
STIRLING_GUARD_ORDER = 8

EULER_PSI_1 = -float(np.euler_gamma)

RealOrArray = Union[float, NDArray[np.float64]]


def _pole_mask(z: NDArray[np.complex128]) -> NDArray[np.bool_]:
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _is_nonpositive_integer(value: float) -> bool:
    return value <= 0 and float(value).is_integer()


def ln_gamma(z: complex) -> complex:
    """Principal branch of ln Gamma(z); pole error at non-positive integers"""
    value = complex(z)
    if _pole_mask(np.asarray([value]))[0]:
        raise PoleError(f"Gamma has a pole at z = {value.real:g}")
    return complex(special.loggamma(value))


def gamma_ratio_sq(num: ArrayLike, den: ArrayLike) -> Union[complex, NDArray[np.complex128]]:
    """
    (Gamma(num) / Gamma(den))^2 evaluated through log-gamma.

    A pole of the denominator alone gives 0. Coinciding poles give the
    reflection limit (Gamma(1 - den) / Gamma(1 - num))^2. A pole of the
    numerator alone raises PoleError.
    """
    num_arr, den_arr = np.broadcast_arrays(
        np.asarray(num, dtype=complex), np.asarray(den, dtype=complex)
    )
    num_pole = _pole_mask(num_arr)
    den_pole = _pole_mask(den_arr)
    if np.any(num_pole & ~den_pole):
        bad = num_arr[num_pole & ~den_pole].ravel()[0]
        raise PoleError(f"Gamma ratio numerator has a pole at {bad.real:g}")

    out = np.zeros(num_arr.shape, dtype=complex)
    regular = ~num_pole & ~den_pole
    out[regular] = np.exp(2.0 * (special.loggamma(num_arr[regular]) - special.loggamma(den_arr[regular])))
    both = num_pole & den_pole
    if np.any(both):
        out[both] = np.exp(
            2.0 * (special.loggamma(1.0 - den_arr[both]) - special.loggamma(1.0 - num_arr[both]))
        )
    if out.ndim == 0:
        return complex(out)
    return out


def polygamma(n: int, x: float) -> float:
    """psi^(n)(x); negative non-integer x is shifted up by the recurrence"""
    if n < 0:
        raise ParameterDomainError(f"polygamma order must be >= 0, got {n}")
    if _is_nonpositive_integer(x):
        raise PoleError(f"polygamma({n}, x) has a pole at x = {x:g}")
    if x > 0:
        return float(special.polygamma(n, x))
    shift = math.ceil(-x) + 1
    acc = float(special.polygamma(n, x + shift))
    step = (-1) ** n * math.factorial(n)
    for j in range(shift):
        acc -= step / (x + j) ** (n + 1)
    return acc


def _series_converged(term: NDArray[np.float64], total: NDArray[np.float64]) -> bool:
    return bool(np.all(np.abs(term) <= SERIES_EPS * np.maximum(np.abs(total), 1e-300)))


def hyp2f1_gauss_series(a: float, b: float, c: float, z: ArrayLike) -> RealOrArray:
    """Direct Gauss series, valid for |z| < 1"""
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    total = np.ones_like(z_arr)
    term = np.ones_like(z_arr)
    for n in range(MAX_SERIES_TERMS):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z_arr
        total = total + term
        if n > 2 and _series_converged(term, total):
            break
    else:
        raise NonConvergenceError(
            f"2F1({a}, {b}; {c}; z) series exceeded {MAX_SERIES_TERMS} terms"
        )
    return float(total[0]) if scalar else total


def hyp2f1_log_case(
    a: float, b: float, one_minus_w: ArrayLike, psi_a: Optional[float] = None,
    psi_b: Optional[float] = None,
) -> RealOrArray:
    """
    F(a, b; a + b; w) from its logarithmic expansion about w = 1.

    Takes y = 1 - w directly; the expansion converges for 0 < y < 1 and is
    used for y <= 1 - PFAFF_SWITCH.
    """
    y = np.asarray(one_minus_w, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    if np.any(y <= 0):
        raise ParameterDomainError("log-case expansion needs 0 < 1 - w")
    psi_a = float(special.digamma(a)) if psi_a is None else psi_a
    psi_b = float(special.digamma(b)) if psi_b is None else psi_b

    sign = special.gammasgn(a + b) * special.gammasgn(a) * special.gammasgn(b)
    prefactor = sign * math.exp(special.gammaln(a + b) - special.gammaln(a) - special.gammaln(b))

    log_y = np.log(y)
    coef = 1.0
    psi_sum = 2.0 * EULER_PSI_1 - psi_a - psi_b
    y_pow = np.ones_like(y)
    total = psi_sum - log_y
    for n in range(1, MAX_SERIES_TERMS):
        coef *= (a + n - 1.0) * (b + n - 1.0) / (n * n)
        psi_sum += 2.0 / n - 1.0 / (a + n - 1.0) - 1.0 / (b + n - 1.0)
        y_pow = y_pow * y
        total = total + coef * (psi_sum - log_y) * y_pow
        bound = np.abs(coef * y_pow) * (abs(psi_sum) + np.abs(log_y))
        if n > 2 and _series_converged(bound, total):
            break
    else:
        raise NonConvergenceError(f"2F1({a}, {b}; {a + b}; w) log expansion did not converge")
    result = prefactor * total
    return float(result[0]) if scalar else result


def _connection(a: float, b: float, c: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
    # 1 - w connection formula, c - a - b not an integer
    first = (
        special.gamma(c) * special.gamma(c - a - b) * special.rgamma(c - a) * special.rgamma(c - b)
    )
    second = (
        special.gamma(c) * special.gamma(a + b - c) * special.rgamma(a) * special.rgamma(b)
    )
    out = first * np.asarray(hyp2f1_gauss_series(a, b, a + b - c + 1.0, y))
    out = out + second * y ** (c - a - b) * np.asarray(
        hyp2f1_gauss_series(c - a, c - b, c - a - b + 1.0, y)
    )
    return out


def _hyp2f1_unit(
    a: float, b: float, c: float, w: NDArray[np.float64], y: NDArray[np.float64],
    psi_a: Optional[float] = None,
) -> NDArray[np.float64]:
    """F(a, b; c; w) for 0 <= w < 1 given y = 1 - w"""
    out = np.empty_like(w)
    near = w < PFAFF_SWITCH
    if np.any(near):
        out[near] = hyp2f1_gauss_series(a, b, c, w[near])
    far = ~near
    if np.any(far):
        gap = c - a - b
        if abs(gap) < 1e-14:
            psi_b = psi_a if (psi_a is not None and a == b) else None
            out[far] = hyp2f1_log_case(a, b, y[far], psi_a, psi_b)
        elif not float(gap).is_integer():
            out[far] = _connection(a, b, c, y[far])
        else:
            out[far] = hyp2f1_gauss_series(a, b, c, w[far])
    return out


def hyp2f1(a: float, b: float, c: float, z: ArrayLike) -> RealOrArray:
    """
    Gauss 2F1(a, b; c; z) for real z < 1.

    z <= 0 is mapped by the Pfaff transformation onto w = z / (z - 1) in [0, 1)
    with 1 - w = 1 / (1 - z); small w uses the Gauss series, w >= 0.75 the
    expansion about w = 1.
    """
    if _is_nonpositive_integer(c):
        raise ParameterDomainError(f"c must not be a non-positive integer, got {c}")
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    if np.any(~(z_arr < 1.0)):
        raise ParameterDomainError("2F1 is evaluated only for z < 1")
    if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
        result = np.asarray(hyp2f1_gauss_series(a, b, c, z_arr))
        return float(result[0]) if scalar else result

    out = np.empty_like(z_arr)
    pos = z_arr > 0
    if np.any(pos):
        out[pos] = _hyp2f1_unit(a, b, c, z_arr[pos], 1.0 - z_arr[pos])
    neg = ~pos
    if np.any(neg):
        zn = z_arr[neg]
        y = 1.0 / (1.0 - zn)
        w = zn / (zn - 1.0)
        out[neg] = (1.0 - zn) ** (-a) * _hyp2f1_unit(a, c - b, c, w, y)
    if not np.all(np.isfinite(out)):
        raise NonConvergenceError(f"2F1({a}, {b}; {c}; z) produced a non-finite value")
    return float(out[0]) if scalar else out


def gauss_2f1(params: Hyp2F1Params) -> float:
    return float(hyp2f1(params.a, params.b, params.c, params.z))


def kernel_hyp2f1(
    alpha: float, w: ArrayLike, one_minus_w: ArrayLike, psi_alpha: Optional[float] = None
) -> NDArray[np.float64]:
    """F(alpha, alpha; 2 alpha; w) for 0 <= w < 1 with 1 - w supplied exactly"""
    w_arr = np.atleast_1d(np.asarray(w, dtype=float))
    y_arr = np.atleast_1d(np.asarray(one_minus_w, dtype=float))
    return _hyp2f1_unit(alpha, alpha, 2.0 * alpha, w_arr, y_arr, psi_alpha)


@lru_cache(maxsize=None)
def _stirling_integer(n: int) -> tuple[int, ...]:
    """Signed Stirling numbers of the first kind s(n, k), k = 0..n"""
    row = [1]
    for m in range(n):
        nxt = [0] * (m + 2)
        for k in range(m + 2):
            left = row[k - 1] if k >= 1 else 0
            here = row[k] if k < len(row) else 0
            nxt[k] = left - m * here
        row = nxt
    return tuple(row)


@lru_cache(maxsize=None)
def _falling_factorial_taylor(alpha: float, order: int) -> tuple[float, ...]:
    size = order + 1
    # ln Gamma(1 + u) + ln Gamma(alpha - u), coefficient by coefficient
    log_coef = np.zeros(size)
    log_coef[0] = float(special.gammaln(alpha))
    for j in range(1, size):
        log_coef[j] = (
            polygamma(j - 1, 1.0) + (-1) ** j * polygamma(j - 1, alpha)
        ) / math.factorial(j)

    exp_coef = np.zeros(size)
    exp_coef[0] = math.exp(log_coef[0])
    for k in range(1, size):
        acc = 0.0
        for j in range(1, k + 1):
            acc += j * log_coef[j] * exp_coef[k - j]
        exp_coef[k] = acc / k

    # sin(pi (1 - alpha + u)) / pi
    sin_a = math.sin(math.pi * alpha)
    cos_a = -math.cos(math.pi * alpha)
    trig = np.zeros(size)
    for k in range(size):
        power = math.pi**k / math.factorial(k)
        if k % 2 == 0:
            trig[k] = sin_a * power * (-1) ** (k // 2)
        else:
            trig[k] = cos_a * power * (-1) ** (k // 2)
    trig /= math.pi

    return tuple(np.convolve(exp_coef, trig)[:size].tolist())


def falling_factorial_taylor(alpha: float, order: int) -> NDArray[np.float64]:
    """Taylor coefficients of [u]_alpha about u = 0 up to u^order"""
    params = StirlingOrder(alpha=alpha, k=order)
    if float(params.alpha).is_integer():
        row = _stirling_integer(int(params.alpha))
        out = np.zeros(order + 1)
        top = min(order, len(row) - 1)
        out[: top + 1] = row[: top + 1]
        return out
    coeffs = _falling_factorial_taylor(float(params.alpha), order + STIRLING_GUARD_ORDER)
    return np.asarray(coeffs[: order + 1])


def stirling_s(alpha: float, k: int) -> float:
    """Fractional Stirling function s(alpha, k)"""
    params = StirlingOrder(alpha=alpha, k=k)
    if float(params.alpha).is_integer():
        row = _stirling_integer(int(params.alpha))
        return float(row[k]) if k < len(row) else 0.0
    return float(falling_factorial_taylor(params.alpha, k)[k])


def cauchy_ck(alpha: float, k: int) -> float:
    """c_k(alpha): Taylor coefficient of [u]_alpha^2, the Cauchy self-product"""
    coeffs = falling_factorial_taylor(alpha, k)
    return float(sum(coeffs[j] * coeffs[k - j] for j in range(k + 1)))


def cauchy_coefficients(alpha: float, order: int) -> NDArray[np.float64]:
    coeffs = falling_factorial_taylor(alpha, order)
    return np.convolve(coeffs, coeffs)[: order + 1]
