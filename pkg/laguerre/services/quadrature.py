"""
Gauss rules and panel layouts used by the kernel and operator integrals.

The integrals met in this package live on (0, 1) after scaling, with an
algebraic endpoint weight (1 - t)^p at t = 1 and a logarithmic or algebraic
behaviour t^g ln t at t = 0. Rules are assembled from a Gauss-Jacobi panel at
the weighted end, geometric Gauss-Legendre panels toward 0 and a graded
innermost panel.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy import special

logger = logging.getLogger(__name__)

LEGENDRE_POINTS = 20
JACOBI_POINTS = 40
GEOMETRIC_RATIO = 4.0
MAX_GEOMETRIC_PANELS = 120
MAX_REFINE_DEPTH = 60
# Magnitude below which the innermost neglected panel is considered exhausted
EXHAUSTION_EPS = 1e-17


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a composite rule; weights include any Jacobi factor"""

    nodes: NDArray[np.float64]
    weights: NDArray[np.float64]

    def __add__(self, other: "QuadratureRule") -> "QuadratureRule":
        return QuadratureRule(
            np.concatenate([self.nodes, other.nodes]),
            np.concatenate([self.weights, other.weights]),
        )

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, values: NDArray[np.float64]) -> float:
        return float(np.dot(self.weights, values))

    @classmethod
    def empty(cls) -> "QuadratureRule":
        return cls(np.zeros(0), np.zeros(0))


@lru_cache(maxsize=64)
def _legendre_reference(n: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=256)
def _jacobi_reference(
    n: int, upper: float, lower: float
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    x, w = special.roots_jacobi(n, upper, lower)
    return np.asarray(x), np.asarray(w)


def legendre_rule(lo: float, hi: float, n: int = LEGENDRE_POINTS) -> QuadratureRule:
    x, w = _legendre_reference(n)
    half = 0.5 * (hi - lo)
    return QuadratureRule(lo + half * (x + 1.0), half * w)


def jacobi_rule(
    lo: float, hi: float, upper_exponent: float = 0.0, lower_exponent: float = 0.0,
    n: int = JACOBI_POINTS,
) -> QuadratureRule:
    """
    Rule for the weight (hi - t)^upper (t - lo)^lower on [lo, hi].

    The weight is absorbed into the returned weights; callers supply only the
    regular factor of the integrand.
    """
    x, w = _jacobi_reference(n, upper_exponent, lower_exponent)
    half = 0.5 * (hi - lo)
    scale = half ** (upper_exponent + lower_exponent + 1.0)
    return QuadratureRule(lo + half * (x + 1.0), scale * w)


def graded_rule(hi: float, exponent: float = 2.0, n: int = LEGENDRE_POINTS) -> QuadratureRule:
    """Rule on [0, hi] through t = hi s^q, absorbing t^g ln t behaviour at 0"""
    base = legendre_rule(0.0, 1.0, n)
    s = base.nodes
    return QuadratureRule(hi * s**exponent, base.weights * hi * exponent * s ** (exponent - 1.0))


def geometric_panel_count(growth: float, top: float) -> int:
    """Panels of ratio 4 below `top` until (t)^(1 + growth) drops under EXHAUSTION_EPS"""
    decay = 1.0 + min(growth, 20.0)
    if decay <= 0:
        return MAX_GEOMETRIC_PANELS
    needed = math.log(top / EXHAUSTION_EPS) / (decay * math.log(GEOMETRIC_RATIO))
    return int(min(MAX_GEOMETRIC_PANELS, max(1, math.ceil(needed) + 1)))


def admissible_panels(lo: float, hi: float, singular: Sequence[float] = (0.0, 1.0)) -> list[tuple[float, float]]:
    """
    Split [lo, hi] until no panel is wider than its distance to a singular point.

    Keeps every panel's Bernstein ellipse clear of the endpoint singularities.
    """
    if not singular:
        return [(lo, hi)]
    inside = [p for p in singular if lo < p < hi]
    if inside:
        edges = [lo] + sorted(inside) + [hi]
        return [panel for a, b in zip(edges[:-1], edges[1:]) for panel in admissible_panels(a, b, singular)]
    out: list[tuple[float, float]] = []
    stack = [(lo, hi, 0)]
    while stack:
        a, b, depth = stack.pop()
        distance = min(min(abs(a - p), abs(b - p)) for p in singular)
        if (b - a) <= distance or depth >= MAX_REFINE_DEPTH:
            out.append((a, b))
            continue
        mid = 0.5 * (a + b)
        stack.append((mid, b, depth + 1))
        stack.append((a, mid, depth + 1))
    out.sort()
    return out


def composite_rule(panels: Sequence[tuple[float, float]], n: int = LEGENDRE_POINTS) -> QuadratureRule:
    rule = QuadratureRule.empty()
    for a, b in panels:
        if b > a:
            rule = rule + legendre_rule(a, b, n)
    return rule


def geometric_rule(
    top: float, panels: int, grading: float = 2.0, n: int = LEGENDRE_POINTS,
    singular: Sequence[float] = (1.0,),
) -> QuadratureRule:
    """Panels [top r^-(j+1), top r^-j] for j < panels, then a graded panel down to 0"""
    rule = QuadratureRule.empty()
    for j in range(panels):
        hi = top * GEOMETRIC_RATIO ** (-j)
        lo = hi / GEOMETRIC_RATIO
        rule = rule + composite_rule(admissible_panels(lo, hi, singular), n)
    bottom = top * GEOMETRIC_RATIO ** (-panels)
    return rule + graded_rule(bottom, grading, n)


def unit_interval_rule(
    edge_exponent: float,
    growth: float,
    cuts: Sequence[float] = (),
    grading: float = 2.0,
    skip: Sequence[tuple[float, float]] = (),
    panel_points: int = LEGENDRE_POINTS,
) -> tuple[QuadratureRule, QuadratureRule]:
    """
    Composite rule on (0, 1) split at `cuts`.

    Returns (jacobi_part, plain_part): the first carries the weight
    (1 - t)^edge_exponent in its weights, the second integrates the full
    integrand. Intervals listed in `skip` are known zeros of the integrand and
    are left out.
    """
    interior = sorted(c for c in cuts if 0.0 < c < 1.0)
    top = max([0.5] + [c for c in interior if c >= 0.5])
    bottom = min([top] + [c for c in interior if c > 0.0])

    def skipped(a: float, b: float) -> bool:
        return any(a >= lo and b <= hi for lo, hi in skip)

    jacobi = QuadratureRule.empty()
    if not skipped(top, 1.0):
        jacobi = jacobi_rule(top, 1.0, upper_exponent=edge_exponent)

    plain = QuadratureRule.empty()
    if not skipped(0.0, bottom):
        panels = geometric_panel_count(growth, bottom)
        plain = plain + geometric_rule(bottom, panels, grading, LEGENDRE_POINTS)
    middle_points = [bottom] + [c for c in interior if bottom < c < top] + [top]
    for a, b in zip(middle_points[:-1], middle_points[1:]):
        if b > a and not skipped(a, b):
            plain = plain + composite_rule(admissible_panels(a, b), panel_points)
    return jacobi, plain
