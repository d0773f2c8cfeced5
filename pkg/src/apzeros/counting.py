"""Exact counting functions and closed-form logarithmic counting integrals.

``n(c, t)`` counts divisor atoms (with multiplicity) in the closed disc of
radius ``t`` about ``c``.  Because ``n`` is a step function of ``t``, the
integrals ``int n(c,t)/t dt`` have an exact closed form as finite sums of
logarithms; no quadrature is involved anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DivisorSource, LineDensity

__all__ = [
    "RadialProfile",
    "radial_profile",
    "count",
    "log_counting_integral",
    "averaged_potential",
    "line_ball_mass",
]


@dataclass(frozen=True)
class RadialProfile:
    """Sorted distances of a divisor's atoms from a fixed center.

    ``count`` queries are exact for every ``t <= truncation_radius``; the
    profile may contain atoms farther out (they never hurt, they simply
    contribute nothing to counts and integrals inside the valid range).
    """

    center: complex
    distances: np.ndarray        # float64, sorted ascending
    multiplicities: np.ndarray   # int64, aligned with distances
    cumulative: np.ndarray       # int64 running totals of multiplicities
    truncation_radius: float

    @property
    def total(self) -> int:
        return int(self.cumulative[-1]) if self.cumulative.size else 0


def radial_profile(source: DivisorSource, center: complex, radius: float) -> RadialProfile:
    """Profile of all atoms relevant to counts ``n(center, t)`` for t <= radius.

    The enumeration radius is ``radius + |center|`` so that every atom within
    disc distance ``radius`` of the center is present even when it lies
    outside the disc ``|a| <= radius`` about the origin.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius!r}")
    center = complex(center)
    pts, mult = source.arrays(radius + abs(center))
    dist = np.abs(pts - center)
    order = np.argsort(dist, kind="stable")
    dist = dist[order]
    mult = mult[order]
    return RadialProfile(
        center=center,
        distances=dist,
        multiplicities=mult,
        cumulative=np.cumsum(mult, dtype=np.int64),
        truncation_radius=float(radius),
    )


def count(profile: RadialProfile, t: float) -> int:
    """Atoms (with multiplicity) in the closed disc of radius ``t``.

    Right-continuous step function of ``t``; boundary atoms are counted.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    if t > profile.truncation_radius:
        raise ValueError(
            f"t={t!r} exceeds the profile's valid range {profile.truncation_radius!r}"
        )
    idx = int(np.searchsorted(profile.distances, t, side="right"))
    return int(profile.cumulative[idx - 1]) if idx else 0


def log_counting_integral(profile: RadialProfile, lower: float, upper: float) -> float:
    """Exact value of ``int_lower^upper n(center, t)/t dt``.

    The integrand is piecewise constant with jumps at the atom distances, so
    the integral is the finite sum ``sum_k m_k log(upper / max(lower, d_k))``
    over atoms with ``d_k < upper``; atoms at distance >= upper contribute 0.
    """
    if lower <= 0:
        raise ValueError(f"lower must be > 0, got {lower!r}")
    if upper < lower:
        raise ValueError(f"need lower <= upper, got {lower!r} > {upper!r}")
    if upper > profile.truncation_radius:
        raise ValueError(
            f"upper={upper!r} exceeds the profile's valid range {profile.truncation_radius!r}"
        )
    d = profile.distances
    m = profile.multiplicities
    inside = int(np.searchsorted(d, upper, side="left"))
    if inside == 0:
        return 0.0
    clipped = np.maximum(d[:inside], lower)
    return float(np.sum(m[:inside] * np.log(upper / clipped)))


def averaged_potential(source: DivisorSource, z: complex, radius: float) -> float:
    """Difference of log-counting integrals between centers 0 and ``z``.

    This is the finite-radius value of
    ``int_1^R (n(0,t) - n(z,t))/t dt``,
    which equals the unit-circle average of the divisor's log-potential.
    It is finite even when ``z`` sits on an atom.
    """
    z = complex(z)
    if radius < max(1.0, abs(z) + 1.0):
        raise ValueError(
            f"radius must be >= max(1, |z|+1) = {max(1.0, abs(z) + 1.0)}, got {radius!r}"
        )
    p0 = radial_profile(source, 0.0, radius)
    pz = radial_profile(source, z, radius)
    return log_counting_integral(p0, 1.0, radius) - log_counting_integral(pz, 1.0, radius)


def line_ball_mass(density: LineDensity, center: complex, radius: float) -> float:
    """Mass a uniform line density places in the closed disc about ``center``.

    Equals ``rho`` times the chord length the disc cuts from the real axis.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius!r}")
    center = complex(center)
    chord_sq = radius * radius - center.imag * center.imag
    if chord_sq <= 0:
        return 0.0
    return density.rho * 2.0 * math.sqrt(chord_sq)
