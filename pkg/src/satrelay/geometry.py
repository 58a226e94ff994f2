"""Spherical trigonometry shared by every other module.

Points live on concentric spheres centered on the Earth's center: gateways
on the Earth sphere (radius Re), satellites on the orbital shell
(radius R = Re + altitude).  Visibility/antenna regions are spherical caps
on the orbital shell.  Cap membership is closed: a point exactly on the
boundary circle counts as inside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SurfacePoint",
    "SphericalCap",
    "slant_range",
    "central_angle",
    "cap_area",
    "in_cap",
    "cap_contains",
    "overlap_region_contains",
    "great_circle_distance",
]

_UNIT_NORM_TOL = 1e-12


def _as_unit_vector(v) -> np.ndarray:
    vec = np.asarray(v, dtype=float)
    if vec.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {vec.shape}")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > _UNIT_NORM_TOL:
        raise ValueError(f"direction must be unit-norm (|v| = {norm!r})")
    return vec


@dataclass(frozen=True)
class SurfacePoint:
    """A location on a sphere: unit direction from the center plus radius in km."""

    direction: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "direction", _as_unit_vector(self.direction))
        if not self.radius > 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    @classmethod
    def from_vector(cls, v, radius: float | None = None) -> "SurfacePoint":
        """Build from an arbitrary Cartesian vector, normalizing the direction."""
        vec = np.asarray(v, dtype=float)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(vec / norm, norm if radius is None else radius)

    @property
    def cartesian(self) -> np.ndarray:
        """Position vector in km."""
        return self.radius * self.direction


@dataclass(frozen=True)
class SphericalCap:
    """Closed spherical cap: all directions within ``half_angle`` of ``center``."""

    center: np.ndarray
    half_angle: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_unit_vector(self.center))
        if not 0.0 <= self.half_angle <= np.pi:
            raise ValueError(f"half_angle must lie in [0, pi], got {self.half_angle}")


def slant_range(theta: float, R: float, Re: float) -> float:
    """Line-of-sight distance between a ground point and a satellite.

    Law of cosines on the Earth-centered triangle: the satellite sits on the
    sphere of radius ``R``, the ground point on radius ``Re``, separated by
    central angle ``theta``.

    Parameters
    ----------
    theta : float
        Central angle in radians, in [0, pi].
    R, Re : float
        Orbital-shell and Earth radii in km, with R > Re > 0.

    Returns
    -------
    float
        Distance in km, in [R - Re, R + Re].
    """
    if not (R > Re > 0.0):
        raise ValueError(f"need R > Re > 0, got R={R}, Re={Re}")
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    d_sq = R * R + Re * Re - 2.0 * R * Re * np.cos(theta)
    return float(np.sqrt(max(d_sq, (R - Re) ** 2)))


def central_angle(D: float, R: float, Re: float) -> float:
    """Inverse of :func:`slant_range`: central angle subtending slant range ``D``."""
    if not (R > Re > 0.0):
        raise ValueError(f"need R > Re > 0, got R={R}, Re={Re}")
    if not (R - Re) <= D <= (R + Re):
        raise ValueError(f"D={D} outside [{R - Re}, {R + Re}]")
    cos_theta = (R * R + Re * Re - D * D) / (2.0 * R * Re)
    return float(np.arccos(np.clip(cos_theta, -1.0, 1.0)))


def cap_area(R: float, half_angle: float) -> float:
    """Area in km^2 of a spherical cap of the given half angle on a sphere of radius R."""
    if not 0.0 <= half_angle <= np.pi:
        raise ValueError(f"half_angle must lie in [0, pi], got {half_angle}")
    return float(2.0 * np.pi * R * R * (1.0 - np.cos(half_angle)))


def in_cap(p: SurfacePoint, cap: SphericalCap) -> bool:
    """True iff ``p`` lies inside the (closed) cap.

    Membership is judged on directions only; the caller guarantees ``p`` sits
    on the cap's sphere.
    """
    dot = float(np.clip(np.dot(p.direction, cap.center), -1.0, 1.0))
    return dot >= np.cos(cap.half_angle)


def cap_contains(directions: np.ndarray, cap: SphericalCap) -> np.ndarray:
    """Vectorized cap membership for an (n, 3) array of unit directions."""
    dots = np.clip(directions @ cap.center, -1.0, 1.0)
    return dots >= np.cos(cap.half_angle)


def overlap_region_contains(p: SurfacePoint, cap1: SphericalCap, cap2: SphericalCap) -> bool:
    """True iff ``p`` lies in the intersection of both caps."""
    return in_cap(p, cap1) and in_cap(p, cap2)


def great_circle_distance(a: SurfacePoint, b: SurfacePoint) -> float:
    """Arc length in km between two points on the same sphere."""
    dot = float(np.clip(np.dot(a.direction, b.direction), -1.0, 1.0))
    return a.radius * float(np.arccos(dot))
