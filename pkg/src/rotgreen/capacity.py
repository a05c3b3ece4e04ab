"""Generalized condensers, the small-plate modulus asymptotic, and oracles.

A generalized condenser holds small balls ("plates") of radius mu_k * t at
points x_k inside a domain, at potential levels sigma_k, against the
grounded complement of the domain.  As t -> 0 its modulus (reciprocal
capacity) follows a three-term expansion in the plate scale; this module
evaluates that expansion and two independent oracles to check it against:
an equilibrium point-charge linear system, and a finite-difference Dirichlet
energy on a grid.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domains import Ball, Domain, FreeSpace, HalfSpace, pow_2_minus_d

# Slack for the strict plate-disjointness and containment checks.
PLATE_GAP_TOL = 1e-12
# Largest plate count accepted by the dense point-charge solve.
MAX_ORACLE_PLATES = 64
# Stop threshold for the relaxation sweeps (max Gauss-Seidel residual).
SOR_RESIDUAL_TOL = 1e-8
SOR_MAX_SWEEPS = 50_000


@dataclass(frozen=True)
class GeneralizedCondenser:
    """Plates E(x_k, mu_k * t) at levels sigma_k inside `domain`."""

    domain: Domain
    points: np.ndarray
    levels: tuple[float, ...]
    radius_factors: tuple[float, ...]
    t: float

    def __post_init__(self) -> None:
        P = np.asarray(self.points, dtype=float)
        if P.ndim != 2 or P.shape[1] != self.domain.dimension.d:
            raise ValueError(
                f"points must be (n, {self.domain.dimension.d}), got shape {P.shape}"
            )
        P = P.copy()
        P.setflags(write=False)
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        object.__setattr__(
            self, "radius_factors", tuple(float(v) for v in self.radius_factors)
        )
        n = P.shape[0]
        if n < 1:
            raise ValueError("condenser needs at least one plate")
        if len(self.levels) != n or len(self.radius_factors) != n:
            raise ValueError("levels and radius_factors must match the point count")
        if any(v == 0.0 for v in self.levels):
            raise ValueError("levels sigma_k must be nonzero")
        if any(v <= 0.0 for v in self.radius_factors):
            raise ValueError("radius factors mu_k must be > 0")
        if self.t <= 0.0:
            raise ValueError(f"plate scale t must be > 0, got {self.t}")
        radii = np.asarray(self.radius_factors) * self.t
        margins = np.atleast_1d(self.domain.boundary_distance(P))
        for k in range(n):
            if margins[k] - radii[k] <= PLATE_GAP_TOL:
                raise ValueError(f"plate {k} is not strictly inside the domain")
        for k in range(n):
            for l in range(k + 1, n):
                gap = float(np.linalg.norm(P[k] - P[l])) - (radii[k] + radii[l])
                if gap <= PLATE_GAP_TOL:
                    raise ValueError(f"plates {k} and {l} overlap or touch")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def with_t(self, t: float) -> "GeneralizedCondenser":
        return dataclasses.replace(self, t=t)


@dataclass(frozen=True)
class ModulusReport:
    t: float
    asymptotic: float
    oracle: float
    abs_error: float


def _weights(c: GeneralizedCondenser) -> tuple[np.ndarray, float]:
    d = c.domain.dimension.d
    sigma = np.asarray(c.levels)
    mu = np.asarray(c.radius_factors)
    nu_k = sigma * mu ** (d - 2)
    nu = 1.0 / float(np.sum(sigma * sigma * mu ** (d - 2)))
    return nu_k, nu


def asymptotic_modulus(c: GeneralizedCondenser) -> float:
    """Three-term small-t expansion of the condenser modulus.

    nu * lam * t^(2-d)
      - lam * nu^2 * sum_k nu_k^2 r(B, x_k)^(2-d)
      + nu^2 * sum_{k != l} nu_k nu_l g(x_k, x_l)

    with nu_k = sigma_k mu_k^(d-2) and nu the reciprocal of
    sum sigma_k^2 mu_k^(d-2).  The o(1) remainder is dropped; for the
    free-space pseudo-domain the harmonic-radius term is zero.
    """
    dim = c.domain.dimension
    nu_k, nu = _weights(c)
    r_pow = np.array(
        [pow_2_minus_d(c.domain.harmonic_radius(x), dim.d) for x in c.points]
    )
    lead = nu * dim.lam * pow_2_minus_d(c.t, dim.d)
    radius_term = dim.lam * nu * nu * float(np.sum(nu_k * nu_k * r_pow))
    if c.n > 1:
        G = c.domain.green_matrix(c.points)
        green_term = nu * nu * float(nu_k @ G @ nu_k)
    else:
        green_term = 0.0
    return lead - radius_term + green_term


def _interaction_matrix(c: GeneralizedCondenser) -> np.ndarray:
    """Dense kernel matrix of the equilibrium point-charge system."""
    dim = c.domain.dimension
    mu = np.asarray(c.radius_factors)
    K = c.domain.green_matrix(c.points) if c.n > 1 else np.zeros((1, 1))
    for k in range(c.n):
        r_pow = pow_2_minus_d(c.domain.harmonic_radius(c.points[k]), dim.d)
        K[k, k] = dim.lam * (pow_2_minus_d(mu[k] * c.t, dim.d) - r_pow)
    return K


def point_charge_capacity(c: GeneralizedCondenser) -> float:
    """Capacity from the equilibrium charges solving K q = sigma.

    Each plate is collapsed to a point charge q_k whose potential matches
    the level sigma_k on its own plate through the diagonal self term; the
    capacity is sum sigma_k q_k.  Exact for one concentric plate, and an
    independent small-t oracle for the asymptotic expansion in general.
    """
    if isinstance(c.domain, FreeSpace):
        raise ValueError("point-charge oracle needs a domain with a boundary")
    if c.n > MAX_ORACLE_PLATES:
        raise ValueError(f"point-charge oracle limited to {MAX_ORACLE_PLATES} plates")
    K = _interaction_matrix(c)
    sigma = np.asarray(c.levels)
    try:
        q = np.linalg.solve(K, sigma)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular point-charge system: {exc}") from exc
    return float(sigma @ q)


def point_charge_modulus(c: GeneralizedCondenser) -> float:
    return 1.0 / point_charge_capacity(c)


def modulus_sweep(
    c_template: GeneralizedCondenser, t_values: Sequence[float]
) -> list[ModulusReport]:
    """Asymptotic vs point-charge modulus along a shrinking plate scale."""
    ts = [float(t) for t in t_values]
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t values must be strictly decreasing")
    reports = []
    for t in ts:
        ct = c_template.with_t(t)
        asym = asymptotic_modulus(ct)
        oracle = point_charge_modulus(ct)
        reports.append(ModulusReport(t, asym, oracle, abs(asym - oracle)))
    return reports


def sweep_errors_decrease(reports: Sequence[ModulusReport], slack: float = 0.1) -> bool:
    """True when abs_error is non-increasing along the sweep, within slack.

    Errors at rounding-noise level (relative to the modulus itself) are
    treated as zero so that exactly-agreeing cases pass.
    """
    return all(
        b.abs_error <= a.abs_error * (1.0 + slack) + 1e-13 * max(1.0, abs(b.oracle))
        for a, b in zip(reports, reports[1:])
    )


def _sor_kernel():
    # JIT compiled on first use; keeps numba out of module import.
    from numba import njit

    @njit(cache=False)
    def sweep(v, free, omega):
        nx, ny, nz = v.shape
        res = 0.0
        for i in range(1, nx - 1):
            for j in range(1, ny - 1):
                for k in range(1, nz - 1):
                    if free[i, j, k]:
                        mean = (
                            v[i - 1, j, k]
                            + v[i + 1, j, k]
                            + v[i, j - 1, k]
                            + v[i, j + 1, k]
                            + v[i, j, k - 1]
                            + v[i, j, k + 1]
                        ) / 6.0
                        r = mean - v[i, j, k]
                        if abs(r) > res:
                            res = abs(r)
                        v[i, j, k] += omega * r
        return res

    return sweep


_SOR_SWEEP = None


def fdm_capacity(c: GeneralizedCondenser, h: float) -> float:
    """Capacity from a relaxed grid potential (d = 3 ball domains only).

    Clamps v = sigma_k on grid nodes inside plate k and v = 0 on nodes at or
    beyond the domain sphere, relaxes the 7-point Laplacian over the free
    nodes by single-threaded lexicographic SOR down to residual 1e-8, and
    returns the discrete Dirichlet energy sum h^3 |grad_h v|^2.  A coarse
    oracle: the staircased spherical boundaries dominate the error.
    """
    dom = c.domain
    if not isinstance(dom, Ball):
        raise ValueError("grid capacity oracle supports ball domains only")
    if dom.dimension.d != 3:
        raise ValueError("grid capacity oracle supports d = 3 only")
    if h <= 0.0 or h > c.t / 4.0:
        raise ValueError(f"grid spacing must satisfy 0 < h <= t/4 = {c.t / 4.0}")

    tb = dom.radius
    axis = np.arange(-tb, tb + h / 2.0, h)
    X, Y, Z = np.meshgrid(axis, axis, axis, indexing="ij")
    outside = X * X + Y * Y + Z * Z >= tb * tb
    v = np.zeros_like(X)
    clamped = outside.copy()
    for k in range(c.n):
        xk = c.points[k]
        rk = c.radius_factors[k] * c.t
        plate = (X - xk[0]) ** 2 + (Y - xk[1]) ** 2 + (Z - xk[2]) ** 2 <= rk * rk
        if not plate.any():
            raise ValueError(f"grid too coarse to resolve plate {k} (radius {rk})")
        v[plate] = c.levels[k]
        clamped |= plate
    free = ~clamped

    global _SOR_SWEEP
    if _SOR_SWEEP is None:
        _SOR_SWEEP = _sor_kernel()
    omega = 2.0 / (1.0 + math.sin(math.pi * h / (2.0 * tb)))
    for _ in range(SOR_MAX_SWEEPS):
        res = _SOR_SWEEP(v, free, omega)
        if res < SOR_RESIDUAL_TOL:
            break
    else:
        raise RuntimeError(
            f"relaxation did not reach residual {SOR_RESIDUAL_TOL} "
            f"in {SOR_MAX_SWEEPS} sweeps (last residual {res})"
        )

    dx = np.diff(v, axis=0)
    dy = np.diff(v, axis=1)
    dz = np.diff(v, axis=2)
    return float(h * (np.sum(dx * dx) + np.sum(dy * dy) + np.sum(dz * dz)))


def fdm_modulus(c: GeneralizedCondenser, h: float) -> float:
    return 1.0 / fdm_capacity(c, h)
