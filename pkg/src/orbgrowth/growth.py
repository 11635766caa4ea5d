"""Finite-horizon growth classification and the growth bounds for subdegrees."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .suborbits import SequenceView, fibonacci

__all__ = [
    "GrowthReport",
    "BoundCheck",
    "Witness",
    "AverageSubdegreeSeq",
    "BOUNDED_TOL",
    "RESIDUAL_TOL",
    "classify",
    "subexponential_witness",
    "classify_view",
    "verify_growth_bounds",
    "average_subdegree",
    "GOLDEN_RATIO",
]

BOUNDED_TOL = 0.05
RESIDUAL_TOL = 0.02
MIN_LENGTH = 8
GOLDEN_RATIO = (1 + math.sqrt(5)) / 2


@dataclass
class GrowthReport:
    cls: str
    parameters: dict
    window: tuple[int, int]
    residuals: dict
    horizon: int
    diagnostics: dict = field(default_factory=dict)
    bounds: list = field(default_factory=list)

    @property
    def base(self):
        return self.parameters.get("base")

    @property
    def degree(self):
        return self.parameters.get("degree")

    def to_json(self) -> str:
        doc = {
            "class": self.cls,
            "parameters": self.parameters,
            "window": list(self.window),
            "residuals": self.residuals,
            "horizon": self.horizon,
            "diagnostics": self.diagnostics,
            "bounds": [asdict(b) for b in self.bounds],
        }
        return json.dumps(doc, indent=2, default=float) + "\n"


def _fit(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    mse = float(np.mean((A @ coef - y) ** 2))
    return float(coef[0]), mse


def classify(seq, witness: Witness | None = None) -> GrowthReport:
    """Classify a positive sequence t_1, t_2, ... by its tail.

    The tail is the last half (at least 4 points). A flat tail is bounded;
    otherwise log t is fitted against r (exponential) and against log r
    (polynomial) and the better fit under ``RESIDUAL_TOL`` wins. With neither
    fit acceptable the verdict is subexponential-nonpolynomial, which a
    supplied ``witness`` must then confirm.
    """
    t = np.asarray(seq, dtype=float)
    if t.ndim != 1 or len(t) < MIN_LENGTH:
        raise ValueError(f"need a sequence of length >= {MIN_LENGTH}")
    if np.any(t <= 0):
        raise ValueError("entries must be positive")
    n = len(t)
    h = max(4, n // 2)
    r = np.arange(1, n + 1, dtype=float)[-h:]
    tail = t[-h:]
    window = (int(r[0]), int(r[-1]))
    y = np.log(tail)
    exp_slope, exp_mse = _fit(r, y)
    poly_slope, poly_mse = _fit(np.log(r), y)
    residuals = {"exponential": exp_mse, "polynomial": poly_mse}
    diag = {"ratio": float(tail.max() / tail.min())}

    if tail.max() / tail.min() <= 1 + BOUNDED_TOL:
        return GrowthReport("bounded", {"degree": 0.0}, window, residuals, n, diag)
    candidates = []
    if exp_mse < RESIDUAL_TOL and exp_slope > 0:
        candidates.append((exp_mse, "exponential", {"base": math.exp(exp_slope)}))
    if poly_mse < RESIDUAL_TOL and poly_slope >= 0:
        candidates.append((poly_mse, "polynomial", {"degree": poly_slope}))
    if candidates:
        _, cls, params = min(candidates, key=lambda c: c[0])
        return GrowthReport(cls, params, window, residuals, n, diag)
    if witness is not None:
        diag["witness"] = asdict(witness)
        if not witness.success:
            # regression failed but the witness disagrees: fall back to the closer fit
            diag["forced"] = True
            if exp_mse <= poly_mse:
                return GrowthReport(
                    "exponential", {"base": math.exp(exp_slope)}, window, residuals, n, diag
                )
            return GrowthReport("polynomial", {"degree": poly_slope}, window, residuals, n, diag)
    else:
        diag["witness"] = None
    return GrowthReport("subexponential-nonpolynomial", {}, window, residuals, n, diag)


@dataclass
class Witness:
    """Indices s_r of the last entry equal to the largest subdegree in sphere r."""

    radii: list
    indices: list
    values: list
    quadratic: bool
    geometric: bool
    success: bool
    slope: float = float("nan")  # log-log slope of s against r, reported only


def subexponential_witness(view: SequenceView) -> Witness:
    """Look for the superpolynomial, subexponential pattern in the lower sequence.

    For each radius r (leaving two spheres of margin below the horizon) take
    the largest index s with m_s equal to the biggest subdegree in S_r. The
    pattern holds when r(r+1)/4 <= s <= r(2r+1) at every such r, so s is
    quadratic in r, while m_s grows by a bounded factor above 1 per radius.
    """
    lower = view.lower
    radii, idx, vals = [], [], []
    for r in range(2, view.horizon - 1):
        top = view.sphere_max[r]
        positions = [i + 1 for i, x in enumerate(lower) if x == top]
        if not positions:
            continue
        radii.append(r)
        idx.append(positions[-1])
        vals.append(top)
    if len(radii) < 3:
        return Witness(radii, idx, vals, False, False, False)
    quadratic = all(r * (r + 1) / 4 <= s <= r * (2 * r + 1) for r, s in zip(radii, idx))
    slope, _ = _fit(np.log(np.array(radii, float)), np.log(np.array(idx, float)))
    ratios = [b / a for a, b in zip(vals, vals[1:])]
    geometric = bool(min(ratios) > 1 and max(ratios) / min(ratios) <= 2)
    return Witness(radii, idx, vals, quadratic, geometric, quadratic and geometric, slope)


def classify_view(view: SequenceView) -> GrowthReport:
    """Classify the lower subdegree sequence, running the witness search."""
    return classify(view.lower, witness=subexponential_witness(view))


@dataclass
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    passed: bool
    note: str = ""


def verify_growth_bounds(
    view: SequenceView,
    s1: int,
    is_dist_trans: bool,
    m: int | None = None,
    connectivity_one: bool = False,
    rate_tol: float = 0.05,
) -> list[BoundCheck]:
    """Check the growth bounds that finite data can speak to.

    * upper sequence: M_r <= 2 M_1 (2 M_1 - 1)^(r-1), worst margin reported;
    * distance-transitive with ``m`` lobes per vertex: the successive ratio
      m_H / m_(H-1) equals (m - 1) m_1 / m within ``rate_tol``;
    * otherwise: the running minimum of m_r^(1/r) is at most sqrt(2 m_1 - 1);
    * connectivity one without distance-transitivity: n_r >= f_r.
    """
    checks = []
    upper = view.upper
    if upper:
        M1 = upper[0]
        worst = None
        for r, M in enumerate(upper, start=1):
            rhs = 2 * M1 * (2 * M1 - 1) ** (r - 1)
            if worst is None or M / rhs > worst[0] / worst[1]:
                worst = (M, rhs)
        checks.append(BoundCheck("upper_sequence", worst[0], worst[1], worst[0] <= worst[1]))
    checks.append(
        BoundCheck("s1_vs_m1", s1, 2 * view.lower[0], s1 <= 2 * view.lower[0], "s_1 <= 2 m_1")
    )
    lower = view.lower
    m1 = lower[0]
    if is_dist_trans:
        if m is None:
            raise ValueError("distance-transitive rate needs the lobes-per-vertex count m")
        target = (m - 1) * m1 / m
        est = lower[-1] / lower[-2]
        root = lower[-1] ** (1 / len(lower))
        checks.append(
            BoundCheck(
                "dt_rate",
                est,
                target,
                abs(est - target) <= rate_tol * target,
                f"root estimate {root:.4f} at r={len(lower)}",
            )
        )
    else:
        running = min(x ** (1 / r) for r, x in enumerate(lower, start=1))
        rhs = math.sqrt(2 * m1 - 1)
        checks.append(BoundCheck("liminf_root", running, rhs, running <= rhs))
    if connectivity_one and not is_dist_trans:
        bad = [r for r in range(1, view.horizon + 1) if view.n[r] < fibonacci(r)]
        r = view.horizon
        checks.append(
            BoundCheck(
                "fibonacci_lower",
                view.n[r],
                fibonacci(r),
                not bad,
                f"n_r^(1/r) = {view.n[r] ** (1 / r):.4f}, limit >= {GOLDEN_RATIO:.4f}",
            )
        )
    return checks


@dataclass
class AverageSubdegreeSeq:
    values: list
    ratios: list
    roots: list
    report: GrowthReport | None = None


def average_subdegree(balls, N) -> AverageSubdegreeSeq:
    """b_r / N_r with successive-ratio and r-th-root estimators (index 0 is r = 0)."""
    if len(balls) != len(N):
        raise ValueError("length mismatch")
    if any(x < 1 for x in N):
        raise ValueError("N_r must be >= 1")
    values = [b / n for b, n in zip(balls, N)]
    ratios = [float("nan")] + [b / a for a, b in zip(values, values[1:])]
    roots = [float("nan")] + [v ** (1 / r) for r, v in enumerate(values) if r]
    report = classify(values[1:]) if len(values) - 1 >= MIN_LENGTH else None
    return AverageSubdegreeSeq(values, ratios, roots, report)
