"""Three independent evaluators of a divisor's log-modulus, plus their fit.

For a divisor admitting the classical limit representations, the following
finite-radius evaluators all converge (up to an affine-harmonic term
``c_x x + c_y y + c_0``) to the same function as the radius grows:

* :func:`potential` -- counting-integral form: the difference of
  log-counting integrals plus the local sum ``sum log|z - a|`` over atoms
  strictly within unit distance of ``z``;
* :func:`product_log_modulus` -- log-modulus of the symmetric partial
  product ``C e^{i nu z} prod_{|a|<=R} (1 - z/a)``, truncated by modulus;
* :func:`genus1_log_modulus` -- the absolutely convergent genus-1 partial
  sum with ``Re(z/a)`` compensation for atoms outside the unit disc.

All three return ``-inf`` when ``z`` coincides with an atom; that is the
honest value of a log-modulus at a zero, and callers treat it as a flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DivisorSource
from .counting import log_counting_integral, radial_profile

__all__ = [
    "RepresentationParams",
    "AffineFit",
    "EvalReport",
    "potential",
    "product_log_modulus",
    "genus1_log_modulus",
    "unit_disc_log_mass",
    "averaged_truncation",
    "fit_affine",
    "representation_fit",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class RepresentationParams:
    """Free constants of the representations.

    ``nu`` and ``log_c`` parametrize the multiplier ``C e^{i nu z}`` of the
    product form (``log_c = log|C|``); the affine slots ``x_slope``,
    ``y_slope``, ``offset`` hold fitted coefficients of ``x``, ``y``, ``1``.
    For functions bounded on the real axis the fitted ``x_slope`` must
    vanish.
    """

    nu: float = 0.0
    log_c: float = 0.0
    x_slope: float = 0.0
    y_slope: float = 0.0
    offset: float = 0.0

    def __post_init__(self) -> None:
        for name in ("nu", "log_c", "x_slope", "y_slope", "offset"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class AffineFit:
    """Least-squares coefficients of ``x_slope*x + y_slope*y + offset``."""

    x_slope: float
    y_slope: float
    offset: float
    residual_max: float

    def predict(self, z: complex) -> float:
        return self.x_slope * z.real + self.y_slope * z.imag + self.offset


@dataclass(frozen=True)
class EvalReport:
    """Grid evaluation of the three representations and their mutual fit."""

    grid: tuple[complex, ...]
    values_potential: np.ndarray
    values_product: np.ndarray
    values_genus1: np.ndarray
    fitted: RepresentationParams
    residual_max: float


def _check_radius(z: complex, radius: float) -> complex:
    z = complex(z)
    if radius < abs(z) + 2.0:
        raise ValueError(f"radius must be >= |z| + 2 = {abs(z) + 2.0}, got {radius!r}")
    return z


def potential(source: DivisorSource, z: complex, radius: float) -> float:
    """Counting-integral evaluator of the divisor's log-potential at ``z``.

    Finite-radius value of the averaged potential plus the local term
    ``sum m log|z - a|`` over atoms with ``|a - z| < 1`` (strict).
    """
    z = _check_radius(z, radius)
    pz = radial_profile(source, z, radius)
    d, m = pz.distances, pz.multiplicities
    if d.size and d[0] == 0.0:
        return float("-inf")
    near = int(np.searchsorted(d, 1.0, side="left"))
    local = float(np.sum(m[:near] * np.log(d[:near]))) if near else 0.0
    p0 = radial_profile(source, 0.0, radius)
    tail = log_counting_integral(p0, 1.0, radius) - log_counting_integral(pz, 1.0, radius)
    return tail + local


def product_log_modulus(
    source: DivisorSource,
    z: complex,
    radius: float,
    nu: float = 0.0,
    log_c: float = 0.0,
) -> float:
    """Log-modulus of the symmetric partial product at ``z``.

    ``log_c - nu*Im(z) + sum_{|a|<=R} m log|1 - z/a|`` with the truncation
    strictly by modulus; ties ``|a| = R`` are included, matching the closed
    discs used by the counting module.  Requires ``0`` not in the support.
    """
    z = _check_radius(z, radius)
    pts, m = source.arrays(radius)
    absa = np.abs(pts)
    if np.any(absa == 0.0):
        raise ValueError("product form requires 0 not to be an atom of the divisor")
    d = np.abs(pts - z)
    if np.any(d == 0.0):
        return float("-inf")
    return float(log_c - nu * z.imag + np.sum(m * (np.log(d) - np.log(absa))))


def genus1_log_modulus(source: DivisorSource, z: complex, radius: float) -> float:
    """Genus-1 evaluator: compensated product terms outside the unit disc.

    ``sum_{|a|<1} m log|z-a|  +  sum_{1<=|a|<=R} m [log|1 - z/a| + Re(z/a)]``.
    The compensation makes the sum absolutely convergent; the tail beyond the
    truncation radius is ``O(|z|^2 sum_{|a|>R} |a|^-2)``.
    """
    z = _check_radius(z, radius)
    pts, m = source.arrays(radius)
    d = np.abs(pts - z)
    if np.any(d == 0.0):
        return float("-inf")
    absa = np.abs(pts)
    inner = absa < 1.0
    outer = ~inner
    total = float(np.sum(m[inner] * np.log(d[inner]))) if inner.any() else 0.0
    if outer.any():
        a = pts[outer]
        total += float(
            np.sum(m[outer] * (np.log(d[outer]) - np.log(absa[outer]) + np.real(z / a)))
        )
    return total


def unit_disc_log_mass(source: DivisorSource) -> float:
    """``sum_{|a|<1} m log|a|`` -- the constant separating the two potentials.

    The counting-integral form normalizes the sub-unit atoms by this amount
    relative to the plain product: for large radii,
    ``product_log_modulus(z) ~= potential(z) - unit_disc_log_mass()``.
    Returns ``-inf`` when 0 is an atom.
    """
    pts, m = source.arrays(1.0)
    absa = np.abs(pts)
    inner = absa < 1.0
    if not inner.any():
        return 0.0
    if np.any(absa[inner] == 0.0):
        return float("-inf")
    return float(np.sum(m[inner] * np.log(absa[inner])))


def averaged_truncation(f, radius: float) -> float:
    """Mean of ``f`` at ``radius`` and ``radius*sqrt(2)``.

    Cheap variance reduction for conditionally convergent truncations: the
    two radii interleave the oscillation of symmetric partial sums.  No
    convergence rate is claimed.
    """
    return 0.5 * (f(radius) + f(SQRT2 * radius))


def fit_affine(grid, values, include_x: bool = True) -> AffineFit:
    """Least-squares fit of ``values`` by ``x_slope*x + y_slope*y + offset``.

    Raises ValueError for degenerate grids (fewer than 4 points, or points
    that do not determine the affine family, e.g. all collinear).
    """
    zs = [complex(z) for z in grid]
    vals = np.asarray(values, dtype=np.float64)
    if len(zs) < 4 or len(zs) != vals.size:
        raise ValueError("fit needs >= 4 grid points with matching values")
    x = np.array([z.real for z in zs])
    y = np.array([z.imag for z in zs])
    cols = [x, y, np.ones_like(x)] if include_x else [y, np.ones_like(x)]
    design = np.column_stack(cols)
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise ValueError("degenerate grid: points do not determine an affine fit")
    coeffs, *_ = np.linalg.lstsq(design, vals, rcond=None)
    if include_x:
        x_slope, y_slope, offset = (float(c) for c in coeffs)
    else:
        x_slope = 0.0
        y_slope, offset = (float(c) for c in coeffs)
    residual = vals - design @ coeffs
    return AffineFit(x_slope, y_slope, offset, float(np.max(np.abs(residual))))


def representation_fit(
    source: DivisorSource,
    grid,
    radius: float,
    nu: float = 0.0,
    log_c: float = 0.0,
    min_atom_distance: float = 0.05,
) -> EvalReport:
    """Fit the product/potential discrepancy by an affine-harmonic term.

    Evaluates all three representations on the grid, then least-squares fits
    ``product - potential`` against ``x_slope*x + y_slope*y + offset``.  For
    divisors in the admissible class the fitted ``x_slope`` must vanish
    (within tolerance) and the residual measures the mutual consistency of
    the representations at this truncation radius.
    """
    zs = [complex(z) for z in grid]
    if not zs:
        raise ValueError("empty grid")
    max_abs = max(abs(z) for z in zs)
    if radius < max_abs + 2.0:
        raise ValueError(f"radius must be >= max|z| + 2 = {max_abs + 2.0}, got {radius!r}")

    pts, m = source.arrays(radius + max_abs)
    for z in zs:
        if pts.size and float(np.min(np.abs(pts - z))) < min_atom_distance:
            raise ValueError(
                f"grid point {z} is within {min_atom_distance} of an atom; "
                "shift the grid or drop the point"
            )

    vals_pot = np.array([potential(source, z, radius) for z in zs])
    vals_prod = np.array(
        [product_log_modulus(source, z, radius, nu=nu, log_c=log_c) for z in zs]
    )
    vals_g1 = np.array([genus1_log_modulus(source, z, radius) for z in zs])

    fit = fit_affine(zs, vals_prod - vals_pot, include_x=True)
    fitted = RepresentationParams(
        nu=nu,
        log_c=log_c,
        x_slope=fit.x_slope,
        y_slope=fit.y_slope,
        offset=fit.offset,
    )
    return EvalReport(
        grid=tuple(zs),
        values_potential=vals_pot,
        values_product=vals_prod,
        values_genus1=vals_g1,
        fitted=fitted,
        residual_max=fit.residual_max,
    )
