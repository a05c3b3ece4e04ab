"""Cylindrical geometry around the rotation axis.

Points are kept in cylindrical form (rho, theta, x') where x' collects the
d-2 coordinates along the axis plane J = {x1 = x2 = 0}.  A configuration is
the grid of points where a family of circles around J meets a set of
half-planes theta = theta_j, indexed circle-major: point k = c*m + j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

# Angles within this of 2*pi wrap to 0 so every angle has one representation.
ANGLE_WRAP_TOL = 1e-12
# Minimum Euclidean separation between configuration points; closer pairs
# would feed near-singular values to the interaction kernels.
DISTINCT_TOL = 1e-10
# Two circles closer than this (as (rho0, x'0) tuples) count as duplicates.
CIRCLE_TOL = 1e-12


def normalize_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi), snapping the wrap point to 0."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if TWO_PI - t < ANGLE_WRAP_TOL:
        t = 0.0
    return t


@dataclass(frozen=True)
class Dimension:
    """Ambient dimension d >= 3 with the derived kernel constants.

    omega is the surface measure of the unit hypersphere and lam the
    normalization of the Newtonian kernel, lam * (d-2) * omega = 1.
    """

    d: int
    omega: float = field(init=False)
    lam: float = field(init=False)

    def __post_init__(self) -> None:
        if self.d < 3:
            raise ValueError(f"dimension must be >= 3, got {self.d}")
        omega = 2.0 * math.pi ** (self.d / 2.0) / math.gamma(self.d / 2.0)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "lam", 1.0 / ((self.d - 2) * omega))


@dataclass(frozen=True)
class CylPoint:
    """Point in cylindrical coordinates (rho, theta, x')."""

    rho: float
    theta: float
    xprime: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.rho < 0.0:
            raise ValueError(f"rho must be >= 0, got {self.rho}")
        object.__setattr__(self, "theta", normalize_angle(self.theta))
        object.__setattr__(self, "xprime", tuple(float(v) for v in self.xprime))


@dataclass(frozen=True)
class CartPoint:
    """Point in Cartesian coordinates."""

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(float(v) for v in self.coords))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


@dataclass(frozen=True)
class Circle:
    """Circle of radius rho0 around the axis J at axial position x'0."""

    rho0: float
    xprime0: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.rho0 <= 0.0:
            raise ValueError(f"circle radius rho0 must be > 0, got {self.rho0}")
        object.__setattr__(self, "xprime0", tuple(float(v) for v in self.xprime0))


@dataclass(frozen=True)
class AngleSet:
    """Strictly increasing angles in [0, 2*pi)."""

    angles: tuple[float, ...]

    def __post_init__(self) -> None:
        norm = tuple(normalize_angle(float(a)) for a in self.angles)
        if len(norm) < 1:
            raise ValueError("angle set must contain at least one angle")
        for a, b in zip(norm, norm[1:]):
            if not a < b:
                raise ValueError(f"angles must be strictly increasing in [0, 2*pi), got {norm}")
        object.__setattr__(self, "angles", norm)

    @property
    def m(self) -> int:
        return len(self.angles)


def symmetric_angles(m: int) -> AngleSet:
    """The m equally spaced angles 2*pi*j/m, j = 0..m-1."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return AngleSet(tuple(TWO_PI * j / m for j in range(m)))


def cyl_to_cart(p: CylPoint, dim: Dimension) -> CartPoint:
    """Cartesian coordinates (rho cos theta, rho sin theta, x')."""
    if len(p.xprime) != dim.d - 2:
        raise ValueError(
            f"xprime has length {len(p.xprime)}, expected {dim.d - 2} for d={dim.d}"
        )
    return CartPoint((p.rho * math.cos(p.theta), p.rho * math.sin(p.theta)) + p.xprime)


def cart_to_cyl(x: CartPoint) -> CylPoint:
    """Inverse of cyl_to_cart; points on the axis get theta = 0."""
    c = x.coords
    if len(c) < 3:
        raise ValueError(f"point must have dimension >= 3, got {len(c)}")
    rho = math.hypot(c[0], c[1])
    theta = 0.0 if rho == 0.0 else normalize_angle(math.atan2(c[1], c[0]))
    return CylPoint(rho, theta, c[2:])


def points_on_circles(
    dim: Dimension, circles: tuple[Circle, ...], angles: np.ndarray
) -> np.ndarray:
    """Cartesian (n_circles * m, d) matrix of circle/half-plane intersections.

    Row c*m + j is circle c at angle j; this index contract is what ties a
    charge value to its half-plane as the angles move.
    """
    angles = np.asarray(angles, dtype=float)
    m = angles.size
    n = len(circles) * m
    pts = np.empty((n, dim.d))
    cos_t, sin_t = np.cos(angles), np.sin(angles)
    for c, circ in enumerate(circles):
        if len(circ.xprime0) != dim.d - 2:
            raise ValueError(
                f"circle {c}: xprime0 has length {len(circ.xprime0)}, expected {dim.d - 2}"
            )
        block = slice(c * m, (c + 1) * m)
        pts[block, 0] = circ.rho0 * cos_t
        pts[block, 1] = circ.rho0 * sin_t
        pts[block, 2:] = circ.xprime0
    return pts


@dataclass(frozen=True)
class Configuration:
    """Points where the circles meet the half-planes, circle-major order."""

    dimension: Dimension
    circles: tuple[Circle, ...]
    angleset: AngleSet
    points: tuple[CylPoint, ...]
    cart: np.ndarray = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.points)


def build_configuration(
    dim: Dimension, circles: list[Circle] | tuple[Circle, ...], angles: AngleSet
) -> Configuration:
    """Assemble the point collection for a family of circles and angles."""
    circles = tuple(circles)
    if not circles:
        raise ValueError("circle list must not be empty")
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            a, b = circles[i], circles[j]
            gap = math.hypot(a.rho0 - b.rho0, *(p - q for p, q in zip(a.xprime0, b.xprime0)))
            if gap <= CIRCLE_TOL:
                raise ValueError(f"circles {i} and {j} are duplicates")

    cart = points_on_circles(dim, circles, np.asarray(angles.angles))
    diff = cart[:, None, :] - cart[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    off = ~np.eye(cart.shape[0], dtype=bool)
    if cart.shape[0] > 1 and dist[off].min() <= DISTINCT_TOL:
        raise ValueError("configuration points are not pairwise distinct")

    pts = tuple(
        CylPoint(circ.rho0, theta, circ.xprime0)
        for circ in circles
        for theta in angles.angles
    )
    cart.setflags(write=False)
    return Configuration(dim, circles, angles, pts, cart)
