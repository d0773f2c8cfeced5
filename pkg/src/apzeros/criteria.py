"""Desk-scale verdict suite for the divisor admissibility conditions.

Every condition the theory states as a limit ("O(r)", "o(R)", "the limit
exists", "sup < infinity") is verified here as a finite-scale trend or
Cauchy test with an explicit tolerance.  Reports always carry the raw
curves so a human can overrule a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .almostperiod import APConfig, APReport, DEFAULT_PHI_FAMILY, ap_divisor_test
from .core import DivisorSource
from .counting import count, log_counting_integral, radial_profile

__all__ = [
    "ConditionEstimate",
    "SpacingFit",
    "CriteriaReport",
    "CriteriaConfig",
    "check_linear_growth",
    "check_annulus_regularity",
    "check_reciprocal_sum",
    "check_potential_boundedness",
    "fit_mean_spacing",
    "difference_sum",
    "difference_sum_window",
    "check_divisor_criteria",
]


@dataclass(frozen=True)
class ConditionEstimate:
    """A condition's estimate curve plus the statistic and verdict drawn from it."""

    radii: tuple[float, ...]
    values: tuple[float, ...]
    statistic: float
    verdict: bool
    tolerance: float
    values_im: tuple[float, ...] | None = None
    extra: dict | None = None

    def __post_init__(self) -> None:
        r = np.asarray(self.radii)
        if r.size and np.any(np.diff(r) <= 0):
            raise ValueError("radii must be strictly increasing")
        if len(self.values) != len(self.radii):
            raise ValueError("values and radii must have equal length")

    def to_dict(self) -> dict:
        out = {
            "radii": list(self.radii),
            "values": list(self.values),
            "statistic": self.statistic,
            "verdict": bool(self.verdict),
            "tolerance": self.tolerance,
        }
        if self.values_im is not None:
            out["values_im"] = list(self.values_im)
        if self.extra:
            out["extra"] = self.extra
        return out


def _top_decade(radii: np.ndarray) -> np.ndarray:
    return radii >= radii[-1] / 10.0


def _validated_radii(r_list, minimum: float = 1.0) -> np.ndarray:
    r = np.asarray(r_list, dtype=np.float64)
    if r.size < 2 or np.any(np.diff(r) <= 0):
        raise ValueError("need an increasing list of at least two radii")
    if r[0] < minimum:
        raise ValueError(f"radii must start at >= {minimum}")
    return r


def check_linear_growth(source: DivisorSource, r_list, tolerance: float = 0.10) -> ConditionEstimate:
    """Is the central count at most linear, ``n(0,r) <= C r``?

    Values are ``n(0,r)/r``; the verdict holds when, over the top decade of
    radii, no later value exceeds an earlier one by more than the tolerance
    fraction (non-increasing-or-flat trend).
    """
    r = _validated_radii(r_list)
    prof = radial_profile(source, 0.0, float(r[-1]))
    values = np.array([count(prof, rr) / rr for rr in r])
    top = values[_top_decade(r)]
    ok = True
    running_min = math.inf
    for v in top:
        if v > running_min * (1.0 + tolerance) + 1e-12:
            ok = False
            break
        running_min = min(running_min, v)
    return ConditionEstimate(
        radii=tuple(r),
        values=tuple(values),
        statistic=float(np.max(values)),
        verdict=ok,
        tolerance=tolerance,
    )


def check_annulus_regularity(source: DivisorSource, r_list, tolerance: float = 0.05) -> ConditionEstimate:
    """Is the unit-annulus increment small, ``n(0,R+1) - n(0,R) = o(R)``?

    Values are ``(n(0,R+1) - n(0,R))/R``; verdict: all top-decade values lie
    below the tolerance.
    """
    r = _validated_radii(r_list)
    prof = radial_profile(source, 0.0, float(r[-1]) + 1.0)
    values = np.array([(count(prof, rr + 1.0) - count(prof, rr)) / rr for rr in r])
    top = values[_top_decade(r)]
    return ConditionEstimate(
        radii=tuple(r),
        values=tuple(values),
        statistic=float(np.max(values)),
        verdict=bool(np.all(top <= tolerance)),
        tolerance=tolerance,
    )


def check_reciprocal_sum(source: DivisorSource, r_list, tolerance: float = 1e-2) -> ConditionEstimate:
    """Do the symmetric partial sums ``sum_{1<=|a|<=R} m/a`` stabilize?

    Both components of the complex partial sums are tracked; the statistic is
    the largest Cauchy difference between consecutive top-decade radii.
    """
    r = _validated_radii(r_list)
    pts, mult = source.arrays(float(r[-1]))
    absa = np.abs(pts)
    keep = absa >= 1.0
    pts, mult, absa = pts[keep], mult[keep], absa[keep]
    order = np.argsort(absa, kind="stable")
    absa = absa[order]
    terms = (mult[order] / pts[order]).astype(np.complex128)
    cums = np.concatenate([[0.0 + 0.0j], np.cumsum(terms)])
    idx = np.searchsorted(absa, r, side="right")
    sums = cums[idx]
    top = _top_decade(r)
    diffs = np.abs(np.diff(sums[top]))
    statistic = float(np.max(diffs)) if diffs.size else 0.0
    return ConditionEstimate(
        radii=tuple(r),
        values=tuple(np.real(sums)),
        values_im=tuple(np.imag(sums)),
        statistic=statistic,
        verdict=statistic <= tolerance,
        tolerance=tolerance,
    )


def _averaged_potential_curve(source: DivisorSource, xs: np.ndarray, radius: float) -> np.ndarray:
    p0 = radial_profile(source, 0.0, radius)
    base = log_counting_integral(p0, 1.0, radius)
    out = np.empty(xs.size)
    for i, x in enumerate(xs):
        px = radial_profile(source, complex(x), radius)
        out[i] = base - log_counting_integral(px, 1.0, radius)
    return out


def check_potential_boundedness(
    source: DivisorSource,
    x_grid,
    radius: float,
    two_sided: bool = False,
    bound: float | None = None,
    stability_tol: float = 1e-2,
) -> ConditionEstimate:
    """Is the averaged potential bounded (one- or two-sided) along the axis?

    Values are the averaged potential at each real grid point at the given
    truncation radius.  The statistic is the sup (or sup of absolute values
    when ``two_sided``).  Default verdict: the values are finite and stable
    in the radius (Cauchy difference against radius/2 within
    ``stability_tol``); an explicit ``bound`` additionally caps the
    statistic.
    """
    xs = np.asarray(x_grid, dtype=np.float64)
    if xs.size == 0 or np.any(np.diff(xs) <= 0):
        raise ValueError("x_grid must be nonempty and strictly increasing")
    if radius < float(np.max(np.abs(xs))) + 2.0:
        raise ValueError("radius must be >= max|x| + 2")
    vals = _averaged_potential_curve(source, xs, radius)
    vals_half = _averaged_potential_curve(source, xs, radius / 2.0)
    defect = float(np.max(np.abs(vals - vals_half)))
    statistic = float(np.max(np.abs(vals))) if two_sided else float(np.max(vals))
    verdict = bool(np.all(np.isfinite(vals))) and defect <= stability_tol
    if bound is not None:
        verdict = verdict and statistic <= bound
    return ConditionEstimate(
        radii=tuple(xs),
        values=tuple(vals),
        statistic=statistic,
        verdict=verdict,
        tolerance=stability_tol,
        extra={
            "radius": radius,
            "cauchy_defect": defect,
            "bound": bound,
            "two_sided": two_sided,
            "abscissa": "x",
        },
    )


# ---------------------------------------------------------------------------
# Strip divisors: mean-spacing representation a_k = d*k + remainder(k) and the
# weighted difference sums of the remainder.


@dataclass
class SpacingFit:
    """Least-squares linear indexing of a strip-confined divisor.

    ``indices`` run over a window centered so index 0 is the atom nearest the
    origin; ``remainder[k] = a_k - d*k`` is complex.  ``sums``/``re_sup`` are
    filled by :func:`difference_sum_window`.
    """

    d: float
    indices: np.ndarray
    remainder: np.ndarray
    remainder_sup: float
    sums: dict[int, "ConditionEstimate"] = field(default_factory=dict)
    re_sup: float | None = None

    def remainder_at(self, k: np.ndarray) -> np.ndarray:
        offset = -int(self.indices[0])
        return self.remainder[np.asarray(k, dtype=np.int64) + offset]

    @property
    def window(self) -> tuple[int, int]:
        return int(self.indices[0]), int(self.indices[-1])


def fit_mean_spacing(
    source: DivisorSource,
    window: int,
    strip_height: float = 5.0,
    pad: float = 5.0,
) -> SpacingFit:
    """Fit ``a_k ~= d*k`` over atoms sorted by real part.

    Atoms are repeated per multiplicity, ordered by increasing real part
    (ties by imaginary part), and indexed so that index 0 minimizes ``|a_0|``.
    Requires the divisor to stay inside a horizontal strip of the given
    height over the enumerated window.
    """
    if window < 3:
        raise ValueError("window must cover at least a few atoms")
    pts, mult = source.arrays(float(window) + pad)
    if pts.size and float(np.max(np.abs(np.imag(pts)))) > strip_height:
        raise ValueError(
            f"atoms leave the strip |Im a| <= {strip_height}; not strip-confined"
        )
    seq = np.repeat(pts, mult)
    if seq.size < 5:
        raise ValueError("fewer than 5 atoms in the window; cannot fit a spacing")
    order = np.lexsort((np.imag(seq), np.real(seq)))
    seq = seq[order]
    anchor = int(np.argmin(np.abs(seq)))
    indices = np.arange(seq.size, dtype=np.int64) - anchor
    k = indices.astype(np.float64)
    kc = k - k.mean()
    d = float(np.dot(kc, np.real(seq) - np.real(seq).mean()) / np.dot(kc, kc))
    remainder = seq - d * k
    return SpacingFit(
        d=d,
        indices=indices,
        remainder=remainder,
        remainder_sup=float(np.max(np.abs(remainder))),
    )


def difference_sum(
    fit: SpacingFit,
    shift: int,
    r_list,
    real_part_only: bool = False,
    tolerance: float = 1e-2,
) -> ConditionEstimate:
    """Partial sums of ``sum_{|k|<r} [rem(k+shift) - rem(k)] * k/(k^2+1)``.

    The weight vanishes at ``k = 0``, so the center term never contributes.
    ``shift = 0`` gives the zero curve identically.  Verdict: the final
    Cauchy difference of the (real-part, if requested) curve is within
    tolerance.
    """
    r = _validated_radii(r_list, minimum=1.0)
    lo, hi = fit.window
    k_reach = min(-lo, hi) - abs(int(shift))
    if float(r[-1]) > k_reach + 1:
        raise ValueError(
            f"window exceeded: r={r[-1]} needs indices past the fitted window "
            f"(usable reach {k_reach})"
        )
    kmax = int(math.ceil(r[-1])) - 1
    ks = np.arange(-kmax, kmax + 1, dtype=np.int64)
    rem = fit.remainder_at(ks)
    rem_shift = fit.remainder_at(ks + int(shift))
    kf = ks.astype(np.float64)
    terms = (rem_shift - rem) * (kf / (kf * kf + 1.0))
    sums = np.empty(r.size, dtype=np.complex128)
    absk = np.abs(kf)
    for i, rr in enumerate(r):
        sums[i] = np.sum(terms[absk < rr])
    curve = np.real(sums) if real_part_only else sums
    final_defect = float(np.abs(curve[-1] - curve[-2])) if r.size >= 2 else 0.0
    return ConditionEstimate(
        radii=tuple(r),
        values=tuple(np.real(sums)),
        values_im=None if real_part_only else tuple(np.imag(sums)),
        statistic=final_defect,
        verdict=final_defect <= tolerance and bool(np.all(np.isfinite(np.abs(sums)))),
        tolerance=tolerance,
        extra={"shift": int(shift), "real_part_only": real_part_only},
    )


def difference_sum_window(
    fit: SpacingFit,
    n_window: int,
    r_list,
    real_part_only: bool = False,
    tolerance: float = 1e-2,
) -> dict[int, ConditionEstimate]:
    """Evaluate :func:`difference_sum` for every shift ``|n| <= n_window``.

    Fills ``fit.sums`` and ``fit.re_sup`` (sup over shifts of the stabilized
    real parts) and returns the per-shift estimates.
    """
    out: dict[int, ConditionEstimate] = {}
    for n in range(-n_window, n_window + 1):
        out[n] = difference_sum(fit, n, r_list, real_part_only=real_part_only, tolerance=tolerance)
    fit.sums = out
    fit.re_sup = max(abs(est.values[-1]) for est in out.values())
    return out


# ---------------------------------------------------------------------------
# Aggregate criteria suite.


@dataclass(frozen=True)
class CriteriaConfig:
    """Grids, radii and tolerances for the aggregate divisor check."""

    growth_radii: tuple[float, ...] = tuple(np.geomspace(2.0, 2000.0, 12))
    growth_tol: float = 0.10
    annulus_tol: float = 0.05
    reciprocal_tol: float = 1e-2
    x_grid: tuple[float, ...] = (0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95)
    potential_radius: float = 2000.0
    potential_bound: float | None = None
    potential_stability_tol: float = 1e-2
    epsilon: float = 1e-6
    ap_config: APConfig = field(default_factory=APConfig)
    phi_family: tuple = DEFAULT_PHI_FAMILY


@dataclass(frozen=True)
class CriteriaReport:
    """Per-condition estimates plus the aggregate divisor verdict."""

    conditions: dict[str, ConditionEstimate]
    ap_report: APReport | None
    ap_verdict: bool
    overall_verdict: bool

    def to_dict(self) -> dict:
        out = {name: est.to_dict() for name, est in self.conditions.items()}
        if self.ap_report is not None:
            out["almost-periodic"] = {
                "epsilon": self.ap_report.epsilon,
                "periods": list(self.ap_report.periods),
                "max_gap": self.ap_report.max_gap,
                "window": list(self.ap_report.window),
                "verdict": self.ap_report.verdict,
            }
        out["ap_verdict"] = self.ap_verdict
        out["overall_verdict"] = self.overall_verdict
        return out


CONDITION_SETS = {
    # bounded-above on the axis
    3: ("reciprocal-sum", "linear-growth", "annulus-increment", "potential-sup"),
    # translation-compact
    4: ("reciprocal-sum", "linear-growth", "annulus-increment", "potential-sup-two-sided"),
    # almost periodic measure
    5: ("almost-periodic", "reciprocal-sum", "linear-growth", "annulus-increment",
        "potential-sup-two-sided"),
    # divisor of an exponential-type function with almost periodic modulus
    6: ("almost-periodic", "reciprocal-sum", "linear-growth", "annulus-increment",
        "potential-sup-two-sided"),
}


def check_divisor_criteria(
    source: DivisorSource,
    config: CriteriaConfig | None = None,
    criteria_set: int = 6,
) -> CriteriaReport:
    """Run the selected admissibility suite and conjoin the verdicts.

    Set 6 (default) runs the almost-periodicity scan plus the four measure
    conditions; sets 3-5 are the subsets without/with translation
    compactness as listed in :data:`CONDITION_SETS`.
    """
    if criteria_set not in CONDITION_SETS:
        raise ValueError(f"criteria_set must be one of {sorted(CONDITION_SETS)}")
    cfg = config or CriteriaConfig()
    wanted = CONDITION_SETS[criteria_set]

    conditions: dict[str, ConditionEstimate] = {}
    if "reciprocal-sum" in wanted:
        conditions["reciprocal-sum"] = check_reciprocal_sum(
            source, cfg.growth_radii, tolerance=cfg.reciprocal_tol
        )
    if "linear-growth" in wanted:
        conditions["linear-growth"] = check_linear_growth(
            source, cfg.growth_radii, tolerance=cfg.growth_tol
        )
    if "annulus-increment" in wanted:
        conditions["annulus-increment"] = check_annulus_regularity(
            source, cfg.growth_radii, tolerance=cfg.annulus_tol
        )
    if "potential-sup" in wanted:
        conditions["potential-sup"] = check_potential_boundedness(
            source, cfg.x_grid, cfg.potential_radius,
            two_sided=False, bound=cfg.potential_bound,
            stability_tol=cfg.potential_stability_tol,
        )
    if "potential-sup-two-sided" in wanted:
        conditions["potential-sup-two-sided"] = check_potential_boundedness(
            source, cfg.x_grid, cfg.potential_radius,
            two_sided=True, bound=cfg.potential_bound,
            stability_tol=cfg.potential_stability_tol,
        )

    ap_report = None
    ap_verdict = True
    if "almost-periodic" in wanted:
        ap_report = ap_divisor_test(source, cfg.phi_family, cfg.epsilon, cfg.ap_config)
        ap_verdict = ap_report.verdict

    overall = ap_verdict and all(est.verdict for est in conditions.values())
    return CriteriaReport(
        conditions=conditions,
        ap_report=ap_report,
        ap_verdict=ap_verdict,
        overall_verdict=overall,
    )
