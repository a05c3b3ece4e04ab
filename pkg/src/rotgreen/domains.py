"""Rotation-symmetric domains with closed-form Green kernels.

Each domain evaluates the Green function of the Laplacian (vanishing on the
boundary), the harmonic radius, and interior membership.  The free-space
variant has no boundary: it carries the bare Newtonian kernel, its harmonic
radius is +inf, and consequently every r(B, x)^(2-d) term evaluates to 0
downstream without special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DISTINCT_TOL, CartPoint, Dimension

__all__ = [
    "Ball",
    "HalfSpace",
    "FreeSpace",
    "Domain",
    "green_is_harmonic_check",
]


def _coords(x) -> np.ndarray:
    if isinstance(x, CartPoint):
        return x.array
    return np.asarray(x, dtype=float)


def pow_2_minus_d(r, d: int):
    """r^(2-d).  exp/log form keeps accuracy uniform across d > 3; plain
    reciprocal for d = 3.  Maps +inf to 0 for every d >= 3."""
    if d == 3:
        return 1.0 / r
    return np.exp((2.0 - d) * np.log(r))


class _KernelDomain:
    """Green kernel plumbing shared by the concrete domains.

    Subclasses supply the boundary geometry and the image term of the
    kernel, already raised to the power 2-d (zero when there is none).
    """

    def _check_dim(self, v: np.ndarray) -> None:
        if v.shape[-1] != self.dimension.d:
            raise ValueError(
                f"point has dimension {v.shape[-1]}, domain expects {self.dimension.d}"
            )

    def contains(self, x) -> bool:
        """Strict interior membership."""
        v = _coords(x)
        self._check_dim(v)
        return self.boundary_distance(v) > 0.0

    def _require_interior(self, P: np.ndarray) -> None:
        margins = np.atleast_1d(self.boundary_distance(P))
        if np.any(margins <= 0.0):
            k = int(np.argmin(margins))
            raise ValueError(f"point {k} is on or outside the domain boundary")

    def green(self, x, y) -> float:
        """Green kernel g(x, y); symmetric, positive inside, 0 on the boundary."""
        xv, yv = _coords(x), _coords(y)
        self._check_dim(xv)
        self._check_dim(yv)
        self._require_interior(np.stack([xv, yv]))
        dist = float(np.linalg.norm(xv - yv))
        if dist <= DISTINCT_TOL:
            raise ValueError("coincident points: Green kernel pole")
        d = self.dimension.d
        return float(self.dimension.lam * (pow_2_minus_d(dist, d) - self._image_pow(xv, yv)))

    def green_matrix(self, P: np.ndarray) -> np.ndarray:
        """All pairwise kernel values of the rows of P; zero diagonal."""
        P = np.asarray(P, dtype=float)
        self._check_dim(P)
        self._require_interior(P)
        n, d = P.shape[0], self.dimension.d
        diff = P[:, None, :] - P[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        off = ~np.eye(n, dtype=bool)
        if n > 1 and dist[off].min() <= DISTINCT_TOL:
            raise ValueError("coincident points: Green kernel pole")
        G = np.zeros((n, n))
        G[off] = self.dimension.lam * (
            pow_2_minus_d(dist[off], d) - self._image_pow_matrix(P)[off]
        )
        return G

    def harmonic_radius(self, x) -> float:
        v = _coords(x)
        self._check_dim(v)
        self._require_interior(v[None, :])
        return self._harmonic_radius(v)


@dataclass(frozen=True)
class Ball(_KernelDomain):
    """Open ball of radius `radius` centered at the origin."""

    dimension: Dimension
    radius: float

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError(f"ball radius must be > 0, got {self.radius}")

    def boundary_distance(self, v: np.ndarray):
        return self.radius - np.linalg.norm(v, axis=-1)

    def _image_pow(self, xv: np.ndarray, yv: np.ndarray) -> float:
        # |x| |y| / t and the inner product give the reflected-pole distance
        # squared as t^2 - 2 x.y + |x|^2 |y|^2 / t^2, a form that stays
        # valid (= t^2) when the pole sits at the origin.
        t = self.radius
        d2 = t * t - 2.0 * float(xv @ yv) + float(xv @ xv) * float(yv @ yv) / (t * t)
        return pow_2_minus_d(math.sqrt(d2), self.dimension.d)

    def _image_pow_matrix(self, P: np.ndarray) -> np.ndarray:
        t = self.radius
        sq = np.sum(P * P, axis=1)
        d2 = t * t - 2.0 * (P @ P.T) + np.outer(sq, sq) / (t * t)
        return pow_2_minus_d(np.sqrt(d2), self.dimension.d)

    def _harmonic_radius(self, v: np.ndarray) -> float:
        return float((self.radius**2 - v @ v) / self.radius)


@dataclass(frozen=True)
class HalfSpace(_KernelDomain):
    """Half-space x_d > 0; the kernel subtracts the mirror charge."""

    dimension: Dimension

    def boundary_distance(self, v: np.ndarray):
        return v[..., -1]

    @staticmethod
    def _mirror(v: np.ndarray) -> np.ndarray:
        m = v.copy()
        m[..., -1] = -m[..., -1]
        return m

    def _image_pow(self, xv: np.ndarray, yv: np.ndarray) -> float:
        dist = float(np.linalg.norm(xv - self._mirror(yv)))
        return pow_2_minus_d(dist, self.dimension.d)

    def _image_pow_matrix(self, P: np.ndarray) -> np.ndarray:
        M = self._mirror(P)
        diff = P[:, None, :] - M[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        return pow_2_minus_d(dist, self.dimension.d)

    def _harmonic_radius(self, v: np.ndarray) -> float:
        return float(2.0 * v[-1])


@dataclass(frozen=True)
class FreeSpace(_KernelDomain):
    """Whole space with the bare Newtonian kernel.

    Not an admissible domain (no boundary to vanish on); it exists so that
    large-domain limits can be expressed through the same interface.
    """

    dimension: Dimension

    def boundary_distance(self, v: np.ndarray):
        return np.full(v.shape[:-1], np.inf) if v.ndim > 1 else math.inf

    def _image_pow(self, xv: np.ndarray, yv: np.ndarray) -> float:
        return 0.0

    def _image_pow_matrix(self, P: np.ndarray) -> np.ndarray:
        return np.zeros((P.shape[0], P.shape[0]))

    def _harmonic_radius(self, v: np.ndarray) -> float:
        return math.inf


Domain = Ball | HalfSpace | FreeSpace


def green_is_harmonic_check(dom: Domain, y, x, h: float) -> float:
    """(2d+1)-point discrete Laplacian of g(., y) at x with step h.

    For interior points away from the pole the exact kernel is harmonic, so
    the returned residual is pure truncation error, O(h^2).  Requires x to
    keep a margin of 4h from both the pole and the boundary so the stencil
    stays in smooth territory.
    """
    if h <= 0.0:
        raise ValueError(f"step h must be > 0, got {h}")
    xv, yv = _coords(x), _coords(y)
    if float(np.linalg.norm(xv - yv)) < 4.0 * h:
        raise ValueError("evaluation point too close to the pole (need >= 4h)")
    if float(np.min(dom.boundary_distance(xv[None, :]))) < 4.0 * h:
        raise ValueError("stencil leaves the domain (need boundary margin >= 4h)")
    d = dom.dimension.d
    acc = -2.0 * d * dom.green(xv, yv)
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        acc += dom.green(xv + e, yv) + dom.green(xv - e, yv)
    return acc / (h * h)
