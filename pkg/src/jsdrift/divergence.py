"""Discretized Kullback-Leibler and Jensen-Shannon divergence (base-2 logs).

All integrals use the trapezoid rule on the densities' shared uniform grid.
Base-2 logarithms keep the Jensen-Shannon divergence inside [0, 1].
"""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np
from scipy.integrate import trapezoid

from .errors import GridMismatchError, NoFeaturesAvailableError
from .kde import DensityOnGrid

DENOMINATOR_CLAMP = 1e-12
ZERO_TOL = 1e-9


def _require_same_grid(p: DensityOnGrid, q: DensityOnGrid) -> None:
    if p.grid != q.grid:
        raise GridMismatchError(f"grids differ: {p.grid} vs {q.grid}")


def kl_divergence(p: DensityOnGrid, q: DensityOnGrid) -> float:
    """Trapezoid approximation of ``integral p(x) * log2(p(x)/q(x)) dx``.

    Points where ``p(x) == 0`` contribute nothing; the denominator is clamped
    below at 1e-12 so that mass of ``p`` sitting where ``q`` vanishes yields a
    large finite value rather than a division error. A result within 1e-9 of
    zero from below is clamped to exactly 0.
    """
    _require_same_grid(p, q)
    support = p.density > 0.0
    integrand = np.zeros_like(p.density)
    pv = p.density[support]
    qv = np.maximum(q.density[support], DENOMINATOR_CLAMP)
    integrand[support] = pv * np.log2(pv / qv)
    value = float(trapezoid(integrand, dx=p.grid.spacing))
    if -ZERO_TOL <= value < 0.0:
        value = 0.0
    return value


def mixture(p: DensityOnGrid, q: DensityOnGrid) -> DensityOnGrid:
    """Pointwise mean density ``(p + q) / 2`` on the shared grid."""
    _require_same_grid(p, q)
    return DensityOnGrid(p.grid, 0.5 * (p.density + q.density))


def jsd(p: DensityOnGrid, q: DensityOnGrid) -> float:
    """Jensen-Shannon divergence in bits: symmetric, bounded by [0, 1].

    Computed as the mean of the KL divergences of ``p`` and ``q`` from their
    mixture, which is derived internally so the three densities are always
    consistent.
    """
    r = mixture(p, q)
    return 0.5 * kl_divergence(p, r) + 0.5 * kl_divergence(q, r)


def comprehensive_score(feature_scores: Mapping[str, float]) -> float:
    """Arithmetic mean of per-feature divergence values.

    Raises
    ------
    NoFeaturesAvailableError
        If no feature produced a score this period.
    """
    if not feature_scores:
        raise NoFeaturesAvailableError("no feature scores to aggregate")
    return float(np.mean(list(feature_scores.values())))
