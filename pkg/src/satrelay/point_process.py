"""Samplers for the two spatial processes of the model.

Satellites form a binomial point process (fixed count, iid uniform) on the
orbital shell; gateways form a Poisson point process (Poisson count, iid
uniform) on the Earth sphere.  All sampling is driven by :class:`RngStream`
values so that identical (seed, stream_id) pairs reproduce identical draws
regardless of scheduling, which is what makes parallel Monte Carlo trials
replayable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import EARTH_RADIUS_KM
from .geometry import SphericalCap, SurfacePoint, cap_contains

__all__ = [
    "RngStream",
    "Constellation",
    "GatewayField",
    "direction_from_uniforms",
    "sample_uniform_sphere",
    "sample_uniform_directions",
    "sample_directions_in_cap",
    "sample_bpp",
    "sample_ppp",
    "nearest_in_region",
]


@dataclass(frozen=True)
class RngStream:
    """Named substream of the master seed.

    Each (seed, stream_id) pair deterministically identifies an independent
    random stream; trials use disjoint stream ids so results do not depend
    on worker scheduling.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this substream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, stream_id: int) -> "RngStream":
        """Substream keyed under this stream's id (simple arithmetic nesting)."""
        return RngStream(self.seed, (self.stream_id << 20) ^ stream_id)


def as_generator(rng) -> np.random.Generator:
    """Accept either an RngStream value or an already-built Generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)!r}")


@dataclass(frozen=True)
class Constellation:
    """BPP realization: ``count_Ns`` satellites at radius Re + ``altitude_ds``."""

    directions: np.ndarray  # (N, 3) unit vectors
    altitude_ds: float

    def __post_init__(self):
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if dirs.size == 0:
            dirs = dirs.reshape(0, 3)
        if dirs.shape[1:] != (3,):
            raise ValueError(f"directions must be (N, 3), got {dirs.shape}")
        if dirs.shape[0] and not np.allclose(
            np.einsum("ij,ij->i", dirs, dirs), 1.0, atol=1e-9
        ):
            raise ValueError("satellite directions must be unit vectors")
        if not self.altitude_ds > 0.0:
            raise ValueError(f"altitude must be positive, got {self.altitude_ds}")
        object.__setattr__(self, "directions", dirs)

    @property
    def radius(self) -> float:
        return EARTH_RADIUS_KM + self.altitude_ds

    @property
    def count_Ns(self) -> int:
        return self.directions.shape[0]

    @property
    def positions(self) -> np.ndarray:
        """Cartesian positions in km, shape (N, 3)."""
        return self.radius * self.directions

    @property
    def satellites(self) -> list[SurfacePoint]:
        """Convenience view as SurfacePoint objects (builds a fresh list)."""
        return [SurfacePoint(d, self.radius) for d in self.directions]


@dataclass(frozen=True)
class GatewayField:
    """PPP realization of ground gateways on the Earth sphere."""

    directions: np.ndarray  # (N, 3) unit vectors
    density_lambda: float  # gateways per km^2

    def __post_init__(self):
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if dirs.size == 0:
            dirs = dirs.reshape(0, 3)
        if dirs.shape[1:] != (3,):
            raise ValueError(f"directions must be (N, 3), got {dirs.shape}")
        if self.density_lambda < 0.0:
            raise ValueError(f"density must be nonnegative, got {self.density_lambda}")
        object.__setattr__(self, "directions", dirs)

    @property
    def radius(self) -> float:
        return EARTH_RADIUS_KM

    @property
    def count(self) -> int:
        return self.directions.shape[0]

    @property
    def gateways(self) -> list[SurfacePoint]:
        return [SurfacePoint(d, self.radius) for d in self.directions]


def direction_from_uniforms(u1, u2) -> np.ndarray:
    """Inverse-CDF map from uniforms to a unit direction.

    Azimuth phi = 2*pi*u1 and polar angle theta = acos(1 - 2*u2), which is
    the inverse of the uniform-sphere CDF in spherical coordinates;
    (0, 0) maps to the +z pole.  Accepts scalars or equal-length arrays and
    returns shape (3,) or (n, 3).
    """
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    phi = 2.0 * np.pi * u1
    cos_theta = np.clip(1.0 - 2.0 * u2, -1.0, 1.0)
    sin_theta = np.sqrt(1.0 - cos_theta * cos_theta)
    out = np.stack(
        [sin_theta * np.cos(phi), sin_theta * np.sin(phi), cos_theta], axis=-1
    )
    return out


def sample_uniform_sphere(rng, radius: float) -> SurfacePoint:
    """One point uniformly distributed on the sphere of the given radius."""
    if not radius > 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    gen = as_generator(rng)
    u = gen.random(2)
    return SurfacePoint(direction_from_uniforms(u[0], u[1]), radius)


def sample_uniform_directions(gen: np.random.Generator, n: int) -> np.ndarray:
    """(n, 3) iid uniform unit directions (vectorized inverse-CDF sampling)."""
    u = gen.random((n, 2))
    return direction_from_uniforms(u[:, 0], u[:, 1])


def _orthonormal_basis(axis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors completing ``axis`` to a right-handed frame."""
    helper = np.array([1.0, 0.0, 0.0])
    if abs(axis[0]) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return e1, e2


def sample_directions_in_cap(
    gen: np.random.Generator, n: int, cap: SphericalCap
) -> np.ndarray:
    """(n, 3) iid directions uniform on the cap (restriction of the uniform law).

    Polar angle about the cap axis has cos(theta) uniform on
    [cos(half_angle), 1]; azimuth is uniform.
    """
    u = gen.random((n, 2))
    cos_lo = np.cos(cap.half_angle)
    cos_theta = 1.0 - u[:, 1] * (1.0 - cos_lo)
    sin_theta = np.sqrt(np.maximum(0.0, 1.0 - cos_theta * cos_theta))
    phi = 2.0 * np.pi * u[:, 0]
    e1, e2 = _orthonormal_basis(cap.center)
    return (
        np.outer(cos_theta, cap.center)
        + np.outer(sin_theta * np.cos(phi), e1)
        + np.outer(sin_theta * np.sin(phi), e2)
    )


def sample_bpp(rng, Ns: int, ds: float) -> Constellation:
    """Binomial point process: exactly ``Ns`` uniform satellites at altitude ``ds``."""
    if Ns < 0:
        raise ValueError(f"Ns must be nonnegative, got {Ns}")
    if not ds > 0.0:
        raise ValueError(f"ds must be positive, got {ds}")
    gen = as_generator(rng)
    return Constellation(sample_uniform_directions(gen, Ns), ds)


def sample_ppp(rng, lam: float, radius: float = EARTH_RADIUS_KM) -> GatewayField:
    """Poisson point process of intensity ``lam`` per km^2 on a sphere."""
    if lam < 0.0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    gen = as_generator(rng)
    mean = lam * 4.0 * np.pi * radius * radius
    n = int(gen.poisson(mean))
    return GatewayField(sample_uniform_directions(gen, n), lam)


def nearest_in_region(
    origin: SurfacePoint,
    constellation: Constellation,
    region: tuple[SphericalCap, SphericalCap],
) -> SurfacePoint | None:
    """Closest satellite (3D chord distance to ``origin``) inside both caps.

    Returns ``None`` when no satellite qualifies.  For points on a common
    sphere the chord ordering equals the central-angle ordering, so the
    nearest satellite maximizes the dot product with the origin direction;
    ties break on the smallest index.
    """
    cap1, cap2 = region
    dirs = constellation.directions
    if dirs.shape[0] == 0:
        return None
    mask = cap_contains(dirs, cap1) & cap_contains(dirs, cap2)
    if not mask.any():
        return None
    dots = dirs @ origin.direction
    dots[~mask] = -np.inf
    idx = int(np.argmax(dots))
    return SurfacePoint(dirs[idx], constellation.radius)
