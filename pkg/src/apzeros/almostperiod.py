"""Bohr-style almost-periodicity testing via compactly supported convolutions.

Sampling the convolution ``g(t) = sum_k m_k phi(a_k + t)`` of a divisor with
a compactly supported test function turns the divisor into a real function
whose epsilon-translation numbers can be scanned directly.  Almost
periodicity is undecidable from finite data; these tests report the density
of accepted translations over a finite window and a verdict against a
density bound, nothing stronger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .core import DivisorSource

__all__ = [
    "TestFunction",
    "hat",
    "smooth_bump",
    "line_integral",
    "SampledFunction",
    "APReport",
    "APConfig",
    "convolve",
    "find_epsilon_periods",
    "ap_divisor_test",
]


@dataclass(frozen=True)
class TestFunction:
    """Radial test function with compact support in ``|z| <= radius``.

    ``hat`` is piecewise linear; ``smooth-bump`` is the classical
    ``exp(-1/(1-u^2))`` profile normalized to peak 1.  Both are continuous
    and vanish identically outside the support disc.
    """

    kind: str
    radius: float

    def __post_init__(self) -> None:
        if self.kind not in ("hat", "smooth-bump"):
            raise ValueError(f"unknown test-function kind {self.kind!r}")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be finite and > 0, got {self.radius!r}")

    def __call__(self, z):
        u = np.abs(np.asarray(z)) / self.radius
        if self.kind == "hat":
            out = np.maximum(0.0, 1.0 - u)
        else:
            out = np.zeros_like(u, dtype=np.float64)
            inside = u < 1.0
            with np.errstate(divide="ignore", over="ignore"):
                out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
        return out if out.ndim else float(out)


def hat(radius: float) -> TestFunction:
    return TestFunction("hat", radius)


def smooth_bump(radius: float) -> TestFunction:
    return TestFunction("smooth-bump", radius)


def line_integral(phi: TestFunction) -> float:
    """Integral of ``phi`` along the real axis through the origin."""
    if phi.kind == "hat":
        return phi.radius  # triangle of height 1 and base 2*radius
    value, _err = quad(lambda x: float(phi(x)), -phi.radius, phi.radius)
    return float(value)


@dataclass(frozen=True)
class SampledFunction:
    """Uniform samples ``g(t0 + j*dt)``."""

    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self) -> None:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be finite and > 0, got {self.dt!r}")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def span(self) -> float:
        return self.dt * (self.samples.size - 1)


@dataclass(frozen=True)
class APReport:
    """Accepted epsilon-translations over a scan window and their density."""

    epsilon: float
    periods: tuple[float, ...]
    max_gap: float
    window: tuple[float, float]
    verdict: bool


@dataclass(frozen=True)
class APConfig:
    """Window and sampling defaults for divisor almost-periodicity scans.

    The sample window starts at ``t_start`` (default 1.0, keeping the scan
    away from the origin where punctured divisors have their one defect);
    ``dt`` defaults to ``min radius / 8`` so supports are resolved; the
    density bound defaults to 10x the divisor's mean spacing.
    """

    t_start: float = 1.0
    t_span: float = 100.0
    dt: float | None = None
    tau_max: float | None = None
    density_bound: float | None = None
    enum_margin: float = 2.0


def convolve(source: DivisorSource, phi: TestFunction, t_grid, radius: float) -> SampledFunction:
    """Exact convolution samples ``g(t) = sum_k m_k phi(a_k + t)``.

    ``radius`` must cover every atom whose translated support can reach the
    grid: ``radius >= max|t| + phi.radius``.
    """
    t = np.asarray(t_grid, dtype=np.float64)
    if t.size < 2:
        raise ValueError("t_grid needs at least two samples")
    steps = np.diff(t)
    dt = float(steps[0])
    if dt <= 0 or not np.allclose(steps, dt, rtol=0, atol=1e-9 * max(1.0, abs(dt))):
        raise ValueError("t_grid must be uniformly spaced and increasing")
    needed = float(np.max(np.abs(t))) + phi.radius
    if radius < needed:
        raise ValueError(f"radius {radius!r} too small; need >= max|t| + phi.radius = {needed}")
    pts, mult = source.arrays(radius)
    if pts.size == 0:
        g = np.zeros(t.size)
    else:
        g = np.sum(mult[:, None] * phi(pts[:, None] + t[None, :]), axis=0)
    return SampledFunction(t0=float(t[0]), dt=dt, samples=np.asarray(g, dtype=np.float64))


def _accepted_shift(samples: np.ndarray, shift: int, epsilon: float) -> bool:
    if shift == 0:
        return True
    s = abs(shift)
    diff = samples[s:] - samples[:-s]
    return bool(np.max(np.abs(diff)) <= epsilon) if diff.size else False


def find_epsilon_periods(
    g: SampledFunction,
    epsilon: float,
    tau_grid,
    density_bound: float | None = None,
) -> APReport:
    """Scan candidate translations and report the accepted set's density.

    A translation ``tau`` (snapped to the sample step) is accepted when
    ``sup |g(t+tau) - g(t)| <= epsilon`` over the overlapping sub-window.
    ``max_gap`` is the largest gap between consecutive accepted translations
    over ``[0, max tau]`` (0 itself is always accepted).  The verdict
    compares ``max_gap`` against ``density_bound`` (default: half the scan
    window, i.e. "some nontrivial translation density was found").
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon!r}")
    taus = np.asarray(tau_grid, dtype=np.float64)
    if taus.size == 0:
        raise ValueError("empty tau grid")
    n = g.samples.size
    shifts = np.unique(np.rint(taus / g.dt).astype(np.int64))
    if np.max(np.abs(shifts)) > (n - 1) // 2:
        raise ValueError(
            "window too short: largest candidate translation exceeds half the sample window"
        )
    accepted = sorted(
        {abs(s) * g.dt for s in shifts if _accepted_shift(g.samples, int(s), epsilon)} | {0.0}
    )
    tau_hi = float(np.max(np.abs(taus)))
    knots = np.array(accepted + [tau_hi])
    max_gap = float(np.max(np.diff(knots))) if knots.size > 1 else tau_hi
    bound = density_bound if density_bound is not None else tau_hi / 2.0
    return APReport(
        epsilon=float(epsilon),
        periods=tuple(accepted),
        max_gap=max_gap,
        window=(0.0, tau_hi),
        verdict=max_gap <= bound,
    )


def _mean_spacing(source: DivisorSource, radius: float) -> float:
    _pts, mult = source.arrays(radius)
    total = int(np.sum(mult))
    return (2.0 * radius / total) if total else math.inf


def ap_divisor_test(
    source: DivisorSource,
    phi_family,
    epsilon: float,
    config: APConfig | None = None,
) -> APReport:
    """Joint translation scan over a finite family of test functions.

    Convolves the divisor with every ``phi`` in the family, intersects the
    accepted translation sets, and reports the joint density.  A finite
    family under-approximates the full compact-family criterion; a passing
    verdict certifies desk-scale evidence, not almost periodicity itself.
    """
    phis = list(phi_family)
    if not phis:
        raise ValueError("need at least one test function")
    cfg = config or APConfig()
    dt = cfg.dt if cfg.dt is not None else min(p.radius for p in phis) / 8.0
    n = int(round(cfg.t_span / dt)) + 1
    t = cfg.t_start + dt * np.arange(n)
    tau_max = cfg.tau_max if cfg.tau_max is not None else cfg.t_span / 2.0
    tau_grid = dt * np.arange(0, int(round(tau_max / dt)) + 1)
    radius = cfg.t_start + cfg.t_span + max(p.radius for p in phis) + cfg.enum_margin
    bound = cfg.density_bound
    if bound is None:
        spacing = _mean_spacing(source, radius)
        bound = 10.0 * spacing if math.isfinite(spacing) else math.inf

    joint: set[float] | None = None
    for phi in phis:
        g = convolve(source, phi, t, radius)
        rep = find_epsilon_periods(g, epsilon, tau_grid, density_bound=bound)
        accepted = set(rep.periods)
        joint = accepted if joint is None else (joint & accepted)

    periods = sorted(joint | {0.0})
    knots = np.array(periods + [float(tau_grid[-1])])
    max_gap = float(np.max(np.diff(knots))) if knots.size > 1 else float(tau_grid[-1])
    verdict = bool(max_gap <= bound)
    return APReport(
        epsilon=float(epsilon),
        periods=tuple(periods),
        max_gap=max_gap,
        window=(0.0, float(tau_grid[-1])),
        verdict=verdict,
    )


#: Default family used by the divisor criteria suite.
DEFAULT_PHI_FAMILY = (hat(0.4), smooth_bump(0.4), smooth_bump(0.8))
