"""Extremal-angle verification and search.

For equal per-circle charges the equally spaced half-planes minimize the
Green energy among all angle placements; for alternating charges on an even
number of half-planes they maximize it.  This module checks trial angle
sets against the symmetric reference and searches for the extremizer by
multistart local optimization over the angle simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from . import energy as _energy
from .domains import Domain
from .geometry import (
    TWO_PI,
    AngleSet,
    Circle,
    Configuration,
    Dimension,
    build_configuration,
    symmetric_angles,
)

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

# Relative reporting tolerance for the verification inequalities.
REPORT_TOL = 1e-10
# Minimum pairwise angular gap (including the wrap-around gap) when sampling
# random trials; keeps trial kernels away from their poles.
TRIAL_MIN_GAP = 1e-3
# Barrier gap for the optimizer: below this the objective is treated as
# infeasible rather than letting the kernel blow up.
OPT_MIN_GAP = 1e-8
# Simplex diameter stop, then a fixed budget of gradient steps.
SIMPLEX_XATOL = 1e-9
GRADIENT_STEPS = 50
GRAD_STOP = 1e-9


@dataclass(frozen=True)
class ExtremalProblem:
    """A direction (minimize/maximize), a domain, circles, and a charge rule.

    `circle_charges` holds one value per circle: the common charge value for
    the minimize direction, a positive magnitude (sign alternates with the
    half-plane index) for the maximize direction.
    """

    direction: str
    dimension: Dimension
    domain: Domain
    circles: tuple[Circle, ...]
    m: int
    circle_charges: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.direction not in (MINIMIZE, MAXIMIZE):
            raise ValueError(f"direction must be '{MINIMIZE}' or '{MAXIMIZE}'")
        object.__setattr__(self, "circles", tuple(self.circles))
        object.__setattr__(
            self, "circle_charges", tuple(float(v) for v in self.circle_charges)
        )
        if len(self.circle_charges) != len(self.circles):
            raise ValueError("need one charge value per circle")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.direction == MAXIMIZE:
            if self.m % 2 != 0:
                raise ValueError("maximize direction requires an even m")
            if any(v <= 0.0 for v in self.circle_charges):
                raise ValueError("maximize direction requires positive magnitudes")
        else:
            if any(v == 0.0 for v in self.circle_charges):
                raise ValueError("charge values must be nonzero")

    def configuration(self, angles: AngleSet) -> Configuration:
        return build_configuration(self.dimension, self.circles, angles)

    def charge(self, cfg: Configuration) -> _energy.Charge:
        if self.direction == MINIMIZE:
            return _energy.per_circle_equal(cfg, self.circle_charges)
        return _energy.alternating_by_half_plane(cfg, self.circle_charges)

    def symmetric_energy(self) -> float:
        cfg = self.configuration(symmetric_angles(self.m))
        return _energy.green_energy(cfg, self.charge(cfg), self.domain)


@dataclass(frozen=True)
class VerificationReport:
    e_trial: float
    e_star: float
    gap: float
    inequality_holds: bool
    trial_angles: tuple[float, ...]
    symmetric_angles: tuple[float, ...]


@dataclass(frozen=True)
class OptimizationResult:
    best_angles: AngleSet
    best_energy: float
    starts_used: int
    converged: bool
    gauge_fixed_angles: AngleSet


@dataclass(frozen=True)
class RieszCheckSummary:
    n: int
    d: int
    s: float
    trials: int
    alternating: bool
    reference_energy: float
    min_gap: float
    max_gap: float
    violations: int


def _verify(problem: ExtremalProblem, trial: AngleSet) -> VerificationReport:
    if trial.m != problem.m:
        raise ValueError(f"trial has m={trial.m}, problem expects m={problem.m}")
    star = symmetric_angles(problem.m)
    cfg_star = problem.configuration(star)
    charge = problem.charge(cfg_star)
    e_star = _energy.green_energy(cfg_star, charge, problem.domain)
    cfg_trial = problem.configuration(trial)
    e_trial = _energy.green_energy(cfg_trial, charge, problem.domain)
    gap = e_trial - e_star
    tol = REPORT_TOL * max(1.0, abs(e_star))
    holds = gap >= -tol if problem.direction == MINIMIZE else gap <= tol
    return VerificationReport(e_trial, e_star, gap, holds, trial.angles, star.angles)


def verify_energy_minimum(problem: ExtremalProblem, trial: AngleSet) -> VerificationReport:
    """Check E(trial) >= E(symmetric) for an equal-per-circle charge."""
    if problem.direction != MINIMIZE:
        raise ValueError("problem direction must be 'minimize'")
    return _verify(problem, trial)


def verify_energy_maximum(problem: ExtremalProblem, trial: AngleSet) -> VerificationReport:
    """Check E(trial) <= E(symmetric) for an alternating charge, m even."""
    if problem.direction != MAXIMIZE:
        raise ValueError("problem direction must be 'maximize'")
    return _verify(problem, trial)


def verify(problem: ExtremalProblem, trial: AngleSet) -> VerificationReport:
    if problem.direction == MINIMIZE:
        return verify_energy_minimum(problem, trial)
    return verify_energy_maximum(problem, trial)


def random_trial_angles(m: int, rng: np.random.Generator, min_gap: float = TRIAL_MIN_GAP) -> AngleSet:
    """m sorted uniform angles with all circular gaps >= min_gap."""
    if m * min_gap >= TWO_PI:
        raise ValueError("min_gap too large for m angles on the circle")
    while True:
        a = np.sort(rng.uniform(0.0, TWO_PI, size=m))
        if m == 1:
            return AngleSet((float(a[0]),))
        gaps = np.diff(a, append=a[0] + TWO_PI)
        if gaps.min() >= min_gap:
            return AngleSet(tuple(float(v) for v in a))


def _trial_report(problem: ExtremalProblem, seed: int, index: int) -> VerificationReport:
    rng = np.random.default_rng([seed, index])
    return _verify(problem, random_trial_angles(problem.m, rng))


def run_random_trials(
    problem: ExtremalProblem, count: int, seed: int, workers: int = 1
) -> list[VerificationReport]:
    """Seeded random-trial sweep; trial i draws from substream (seed, i).

    Results are identical for any worker count because every trial has its
    own substream and the output order is fixed.
    """
    if count < 1:
        raise ValueError(f"trial count must be >= 1, got {count}")
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, count // (4 * workers))
            return list(
                pool.map(
                    _trial_report,
                    [problem] * count,
                    [seed] * count,
                    range(count),
                    chunksize=chunk,
                )
            )
    return [_trial_report(problem, seed, i) for i in range(count)]


def gauge_fix(angles: AngleSet) -> AngleSet:
    """Canonical representative modulo rotation and cyclic relabeling.

    Every cyclic shift is rotated so its first angle is 0; the
    lexicographically smallest of the resulting tuples is returned.
    """
    a = np.asarray(angles.angles)
    m = a.size
    best: tuple[float, ...] | None = None
    for s in range(m):
        rep = np.mod(np.roll(a, -s) - a[s], TWO_PI)
        rep[0] = 0.0
        tup = tuple(float(v) for v in rep)
        if best is None or tup < best:
            best = tup
    return AngleSet(best)


def _objective(problem: ExtremalProblem, charge: _energy.Charge, cfg: Configuration, y: np.ndarray) -> float:
    """Energy (sign-adjusted for maximize) over interior angles, theta_0 = 0."""
    if y.size:
        full = np.concatenate(([0.0], y))
        gaps = np.diff(full, append=TWO_PI)
        if gaps.min() < OPT_MIN_GAP:
            return math.inf
    else:
        full = np.zeros(1)
    try:
        e = _energy.green_energy_at_angles(cfg, charge, problem.domain, full)
    except ValueError:
        return math.inf
    return e if problem.direction == MINIMIZE else -e


def _refine_with_gradient(
    problem: ExtremalProblem,
    charge: _energy.Charge,
    cfg: Configuration,
    y: np.ndarray,
    f: float,
) -> tuple[np.ndarray, float, bool]:
    """Fixed budget of steepest-descent steps with backtracking."""
    sign = 1.0 if problem.direction == MINIMIZE else -1.0
    stationary = False
    for _ in range(GRADIENT_STEPS):
        angle_cfg = build_configuration(
            problem.dimension, problem.circles, AngleSet((0.0, *map(float, y)))
        )
        g = sign * _energy.energy_gradient_angles(angle_cfg, charge, problem.domain)[1:]
        gnorm = float(np.max(np.abs(g))) if g.size else 0.0
        if gnorm < GRAD_STOP:
            stationary = True
            break
        alpha = 0.1 / max(1.0, gnorm)
        improved = False
        while alpha > 1e-15:
            cand = y - alpha * g
            fc = _objective(problem, charge, cfg, cand)
            if fc < f - 1e-4 * alpha * float(g @ g):
                y, f, improved = cand, fc, True
                break
            alpha *= 0.5
        if not improved:
            # No descent at line-search resolution: numerically stationary.
            stationary = True
            break
    return y, f, stationary


def _run_start(
    problem: ExtremalProblem, charge: _energy.Charge, cfg: Configuration, seed: int, index: int
) -> tuple[float, np.ndarray, bool] | None:
    rng = np.random.default_rng([seed, index])
    start = np.asarray(random_trial_angles(problem.m, rng).angles)
    y0 = np.sort(np.mod(start[1:] - start[0], TWO_PI))
    f0 = _objective(problem, charge, cfg, y0)
    if not math.isfinite(f0):
        return None
    res = _scipy_minimize(
        lambda y: _objective(problem, charge, cfg, y),
        y0,
        method="Nelder-Mead",
        options={
            "xatol": SIMPLEX_XATOL,
            "fatol": 1e-14,
            "maxfev": 4000,
        },
    )
    y, f = res.x, float(res.fun)
    if not math.isfinite(f):
        return None
    y, f, stationary = _refine_with_gradient(problem, charge, cfg, y, f)
    return f, y, stationary


def optimize_angles(problem: ExtremalProblem, starts: int, seed: int) -> OptimizationResult:
    """Multistart search for the extremal angle placement.

    Each start runs a Nelder-Mead simplex over the interior angles (theta_0
    gauge-fixed at 0) followed by gradient refinement; start i draws its
    initial angles from substream (seed, i).  Ties between starts break by
    gauge-fixed angles, so the result does not depend on start order.
    """
    if starts < 1:
        raise ValueError(f"starts must be >= 1, got {starts}")
    star = symmetric_angles(problem.m)
    cfg = problem.configuration(star)
    charge = problem.charge(cfg)

    if problem.m == 1:
        # Energy is constant along the rotation orbit; any angle is optimal.
        angles = AngleSet((0.0,))
        e = _energy.green_energy_at_angles(cfg, charge, problem.domain, np.zeros(1))
        return OptimizationResult(angles, e, starts, True, gauge_fix(angles))

    best: tuple[float, tuple[float, ...], AngleSet, bool] | None = None
    used = 0
    for i in range(starts):
        out = _run_start(problem, charge, cfg, seed, i)
        if out is None:
            continue
        used += 1
        f, y, stationary = out
        angles = AngleSet((0.0, *map(float, np.sort(y))))
        fixed = gauge_fix(angles)
        key = (f, fixed.angles)
        if best is None or key < (best[0], best[1]):
            best = (f, fixed.angles, angles, stationary)
    if best is None:
        raise ValueError("no start produced a valid configuration")

    _, fixed_angles, angles, stationary = best
    e = _energy.green_energy_at_angles(cfg, charge, problem.domain, np.asarray(angles.angles))
    return OptimizationResult(angles, e, used, stationary, AngleSet(fixed_angles))


def unit_circle_points(angles: np.ndarray) -> np.ndarray:
    a = np.asarray(angles, dtype=float)
    return np.column_stack((np.cos(a), np.sin(a)))


def riesz_extremal_check(
    n: int, d: int, trials: int, seed: int, alternating: bool = False
) -> RieszCheckSummary:
    """Random unit-circle configurations against the n-th roots of unity.

    Compares the Riesz (d-2)-energy (sign-weighted when `alternating`) of
    sorted random angle sets with the equally spaced value.  A violation is
    a trial beating the reference beyond 1e-12 relative slack; the expected
    count is zero.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 points, got {n}")
    if d < 3:
        raise ValueError(f"dimension must be >= 3, got {d}")
    if alternating and n % 2 != 0:
        raise ValueError("alternating signs need an even point count")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    s = float(d - 2)
    signs = np.array([(-1.0) ** k for k in range(n)])

    def value(angles: np.ndarray) -> float:
        pts = unit_circle_points(angles)
        if alternating:
            return _energy.signed_riesz_energy(pts, signs, s)
        return _energy.riesz_energy(pts, s)

    ref = value(np.asarray(symmetric_angles(n).angles))
    tol = 1e-12 * abs(ref)
    min_gap, max_gap = math.inf, -math.inf
    violations = 0
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        gap = value(np.asarray(random_trial_angles(n, rng).angles)) - ref
        min_gap = min(min_gap, gap)
        max_gap = max(max_gap, gap)
        if alternating:
            violations += gap > tol
        else:
            violations += gap < -tol
    return RieszCheckSummary(n, d, s, trials, alternating, ref, min_gap, max_gap, violations)
