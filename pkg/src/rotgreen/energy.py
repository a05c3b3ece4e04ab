"""Discrete interaction energies of charges on circle configurations.

The Green energy is the double sum over ordered pairs k != l of
delta_k * delta_l * g(x_k, x_l), so each unordered pair is counted twice.
Riesz energies use the bare power kernel |z_k - z_l|^(-s) with the same
ordered-pair convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domains import Domain
from .geometry import DISTINCT_TOL, CartPoint, Configuration, points_on_circles

# Central-difference step for angle derivatives; balances truncation against
# roundoff for O(1) energies in double precision.
FD_THETA_STEP = 1e-6

PER_CIRCLE_EQUAL = "per_circle_equal"
ALTERNATING = "alternating_by_half_plane"


@dataclass(frozen=True)
class Charge:
    """Charge values aligned with a configuration's circle-major point order."""

    values: tuple[float, ...]
    pattern: str = "explicit"

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if any(v == 0.0 for v in vals):
            raise ValueError("charge values must be nonzero")
        object.__setattr__(self, "values", vals)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values)


def per_circle_equal(cfg: Configuration, per_circle: Sequence[float]) -> Charge:
    """Charge taking one common value on each circle."""
    if len(per_circle) != len(cfg.circles):
        raise ValueError(
            f"need one value per circle: got {len(per_circle)} for {len(cfg.circles)} circles"
        )
    m = cfg.angleset.m
    values = tuple(float(v) for v in per_circle for _ in range(m))
    return Charge(values, pattern=PER_CIRCLE_EQUAL)


def alternating_by_half_plane(cfg: Configuration, magnitudes: Sequence[float]) -> Charge:
    """Charge of per-circle magnitude, negative on odd-indexed half-planes."""
    if len(magnitudes) != len(cfg.circles):
        raise ValueError(
            f"need one magnitude per circle: got {len(magnitudes)} for {len(cfg.circles)} circles"
        )
    m = cfg.angleset.m
    if m % 2 != 0:
        raise ValueError(f"alternating charge needs an even angle count, got m={m}")
    if any(v <= 0.0 for v in magnitudes):
        raise ValueError("alternating charge magnitudes must be > 0")
    values = tuple(
        float(mag) * (-1.0 if j % 2 else 1.0) for mag in magnitudes for j in range(m)
    )
    return Charge(values, pattern=ALTERNATING)


def green_energy(cfg: Configuration, charge: Charge, dom: Domain) -> float:
    """E = sum over ordered pairs of delta_k delta_l g(x_k, x_l)."""
    v = charge.array
    if v.size != cfg.n:
        raise ValueError(f"charge has {v.size} values for {cfg.n} points")
    G = dom.green_matrix(cfg.cart)
    return float(v @ G @ v)


def green_energy_at_angles(
    cfg: Configuration, charge: Charge, dom: Domain, angles: np.ndarray
) -> float:
    """Energy of the same circles and charge with the half-planes moved.

    `angles` is a raw angle vector of length m; it need not be sorted or
    reduced, only produce pairwise-distinct points.  Charge value k stays
    attached to half-plane index k % m.
    """
    v = charge.array
    if v.size != cfg.n:
        raise ValueError(f"charge has {v.size} values for {cfg.n} points")
    P = points_on_circles(cfg.dimension, cfg.circles, np.asarray(angles, dtype=float))
    G = dom.green_matrix(P)
    return float(v @ G @ v)


def _points_matrix(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return np.asarray(points, dtype=float)
    return np.asarray(
        [p.array if isinstance(p, CartPoint) else np.asarray(p, dtype=float) for p in points]
    )


def _distance_powers(P: np.ndarray, s: float) -> np.ndarray:
    n = P.shape[0]
    if n < 2:
        raise ValueError("need at least two points")
    diff = P[:, None, :] - P[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    off = ~np.eye(n, dtype=bool)
    if dist[off].min() <= DISTINCT_TOL:
        raise ValueError("coincident points in Riesz energy")
    K = np.zeros((n, n))
    K[off] = dist[off] ** (-s)
    return K


def riesz_energy(points, s: float) -> float:
    """Riesz s-energy over ordered pairs, sum of |z_k - z_l|^(-s)."""
    if s == 0.0:
        raise ValueError("Riesz energy is undefined for s = 0")
    K = _distance_powers(_points_matrix(points), s)
    return float(K.sum())


def signed_riesz_energy(points, signs: Sequence[float], s: float) -> float:
    """Riesz s-energy with each term weighted by sign_k * sign_l."""
    if s == 0.0:
        raise ValueError("Riesz energy is undefined for s = 0")
    P = _points_matrix(points)
    sg = np.asarray(signs, dtype=float)
    if sg.size != P.shape[0]:
        raise ValueError(f"{sg.size} signs for {P.shape[0]} points")
    if not np.all(np.abs(sg) == 1.0):
        raise ValueError("signs must be +1 or -1")
    K = _distance_powers(P, s)
    return float(sg @ K @ sg)


def energy_gradient_angles(cfg: Configuration, charge: Charge, dom: Domain) -> np.ndarray:
    """dE/dtheta_j by central differences, one entry per half-plane.

    Rotating half-plane j moves every point with index k % m == j across all
    circles at once.  Vanishes (up to finite-difference noise) at the
    equally spaced configuration for either symmetric charge pattern.
    """
    base = np.asarray(cfg.angleset.angles)
    m = base.size
    grad = np.empty(m)
    for j in range(m):
        up, dn = base.copy(), base.copy()
        up[j] += FD_THETA_STEP
        dn[j] -= FD_THETA_STEP
        e_up = green_energy_at_angles(cfg, charge, dom, up)
        e_dn = green_energy_at_angles(cfg, charge, dom, dn)
        grad[j] = (e_up - e_dn) / (2.0 * FD_THETA_STEP)
    return grad
