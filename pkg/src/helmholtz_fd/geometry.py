# -*- coding: utf-8 -*-
"""Scatterer geometries.

A scatterer ``D`` is described by a point-membership test and by the closed
parametric curves making up its boundary. All curves are parametrized over
``[0, 2 pi)``. Coordinates are Cartesian and global; the mesh pole is given
separately.
"""
from __future__ import annotations

import abc
import dataclasses

import numpy as np
from scipy import interpolate, optimize

from .exceptions import DegenerateTangent, GeometryError
from .log import get_logger

__all__ = (
    'BoundaryCurve', 'CircleCurve', 'StarCurve', 'SplineCurve', 'ScattererGeometry', 'CircleScatterer',
    'PolarCurveScatterer', 'DiskUnionScatterer', 'ImplicitQuarticScatterer', 'PolylineScatterer', 'ClosestPoint'
)

LOGGER = get_logger(__name__)

TWO_PI = 2 * np.pi
SAMPLES_PER_CURVE = 2048


class BoundaryCurve(abc.ABC):
    """Closed curve ``t -> (x(t), y(t))`` with period ``2 pi``."""

    @abc.abstractmethod
    def point(self, t):
        """Return ``(x, y)`` arrays at the parameters ``t``."""

    @abc.abstractmethod
    def derivative(self, t):
        """Return ``(x'(t), y'(t))``."""

    def speed(self, t):
        dx, dy = self.derivative(t)
        return np.hypot(dx, dy)


@dataclasses.dataclass(frozen=True)
class CircleCurve(BoundaryCurve):
    cx: float
    cy: float
    radius: float

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return self.cx + self.radius * np.cos(t), self.cy + self.radius * np.sin(t)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return -self.radius * np.sin(t), self.radius * np.cos(t)


class StarCurve(BoundaryCurve):
    """Curve ``R(t) (cos t, sin t)`` around a center, with ``R`` and ``R'`` given as callables."""

    def __init__(self, cx: float, cy: float, radius, dradius):
        self.cx = cx
        self.cy = cy
        self.radius = radius
        self.dradius = dradius

    def point(self, t):
        t = np.asarray(t, dtype=float)
        r = self.radius(t)
        return self.cx + r * np.cos(t), self.cy + r * np.sin(t)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        r, dr = self.radius(t), self.dradius(t)
        return dr * np.cos(t) - r * np.sin(t), dr * np.sin(t) + r * np.cos(t)


class SplineCurve(BoundaryCurve):
    """Periodic parametric smoothing spline through a closed polyline."""

    def __init__(self, points, smoothing: float = 0.0):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2 or len(points) < 4:
            raise GeometryError('a polyline scatterer needs at least four (x, y) vertices')
        if np.allclose(points[0], points[-1]):
            points = points[:-1]
        closed = np.vstack([points, points[:1]])
        self.tck, _ = interpolate.splprep([closed[:, 0], closed[:, 1]], s=smoothing, per=1)

    def point(self, t):
        u = np.mod(np.asarray(t, dtype=float), TWO_PI) / TWO_PI
        x, y = interpolate.splev(u, self.tck)
        return np.asarray(x), np.asarray(y)

    def derivative(self, t):
        u = np.mod(np.asarray(t, dtype=float), TWO_PI) / TWO_PI
        dx, dy = interpolate.splev(u, self.tck, der=1)
        return np.asarray(dx) / TWO_PI, np.asarray(dy) / TWO_PI


@dataclasses.dataclass(frozen=True)
class ClosestPoint:
    """Closest boundary point of a query point."""

    component: int
    t: float
    x: float
    y: float
    distance: float


class ScattererGeometry(abc.ABC):
    """Bounded obstacle ``D`` with a piecewise smooth boundary."""

    name: str = 'scatterer'

    @property
    @abc.abstractmethod
    def components(self) -> list[BoundaryCurve]:
        """Closed curves forming the boundary."""

    @abc.abstractmethod
    def contains(self, x, y):
        """Boolean array, ``True`` strictly inside ``D``."""

    @property
    def is_circle(self) -> bool:
        return False

    def _samples(self):
        if not hasattr(self, '_sample_cache'):
            t = np.linspace(0.0, TWO_PI, SAMPLES_PER_CURVE, endpoint=False)
            cache = []
            for curve in self.components:
                x, y = curve.point(t)
                cache.append((t, np.asarray(x), np.asarray(y)))
            self._sample_cache = cache  # pylint: disable=attribute-defined-outside-init
        return self._sample_cache

    def boundary_radius_range(self, center=(0.0, 0.0)) -> tuple[float, float]:
        """Smallest and largest distance from ``center`` to the boundary samples."""
        radii = np.concatenate([np.hypot(x - center[0], y - center[1]) for _, x, y in self._samples()])
        return float(radii.min()), float(radii.max())

    def inner_radius(self, center=(0.0, 0.0), safety: float = 0.9) -> float:
        """Radius of a disk around ``center`` that lies inside ``D``.

        :raises GeometryError: if ``center`` is not inside ``D``.
        """
        if not self.contains(np.array([center[0]]), np.array([center[1]]))[0]:
            raise GeometryError(f'the mesh center {tuple(center)} must lie inside the scatterer {self.name}')
        directions = np.linspace(0.0, TWO_PI, 720, endpoint=False)
        _, outer = self.boundary_radius_range(center)
        radii = np.linspace(0.0, outer, 4000)[1:]
        x = center[0] + radii[None, :] * np.cos(directions)[:, None]
        y = center[1] + radii[None, :] * np.sin(directions)[:, None]
        inside = self.contains(x, y)
        first_exit = np.argmin(inside, axis=1)
        first_exit[inside.all(axis=1)] = len(radii) - 1
        return safety * float(radii[first_exit].min())

    def _on_boundary(self, index: int, x, y):
        """Mask of the samples of component ``index`` that belong to the boundary of ``D``."""
        return np.ones(np.shape(x), dtype=bool)

    def closest_point(self, x: float, y: float) -> ClosestPoint:
        """Closest point on the boundary to ``(x, y)``."""
        best = None
        for index, (curve, (t, bx, by)) in enumerate(zip(self.components, self._samples())):
            distances = np.where(self._on_boundary(index, bx, by), np.hypot(bx - x, by - y), np.inf)
            if not np.isfinite(distances).any():
                continue
            k = int(np.argmin(distances))
            step = TWO_PI / len(t)
            result = optimize.minimize_scalar(
                lambda s, curve=curve: float(np.hypot(*(np.subtract(curve.point(s), (x, y))))),
                bounds=(t[k] - step, t[k] + step),
                method='bounded',
                options={'xatol': 1e-13},
            )
            candidate = (float(result.fun), index, float(result.x))
            if best is None or candidate[0] < best[0]:
                best = candidate
        distance, index, t_best = best
        px, py = self.components[index].point(t_best)
        return ClosestPoint(index, t_best, float(px), float(py), distance)

    def boundary_points(self, closest: ClosestPoint, spacing: float, count: int = 5):
        """Points ``gamma(t0 + k spacing / sigma)`` for ``k = -(count // 2) .. count // 2``.

        :param spacing: target physical distance between consecutive points.
        :raises DegenerateTangent: if the curve speed vanishes at the base point.
        """
        curve = self.components[closest.component]
        sigma = float(curve.speed(closest.t))
        if sigma == 0 or not np.isfinite(sigma):
            raise DegenerateTangent(f'vanishing tangent on {self.name} at t = {closest.t}')
        k = np.arange(count) - count // 2
        x, y = curve.point(closest.t + k * spacing / sigma)
        return np.asarray(x), np.asarray(y)


class CircleScatterer(ScattererGeometry):
    name = 'circle'

    def __init__(self, radius: float, center=(0.0, 0.0)):
        if radius <= 0:
            raise GeometryError(f'circle radius must be positive, got {radius}')
        self.radius = float(radius)
        self.center = tuple(float(c) for c in center)
        self._components = [CircleCurve(self.center[0], self.center[1], self.radius)]

    @property
    def components(self):
        return self._components

    @property
    def is_circle(self) -> bool:
        return True

    def contains(self, x, y):
        return np.hypot(np.asarray(x) - self.center[0], np.asarray(y) - self.center[1]) < self.radius


class PolarCurveScatterer(ScattererGeometry):
    """``D = {r < base + amplitude sin(lobes theta)}`` around ``center``."""

    name = 'polar_curve'

    def __init__(self, base: float = 1.0, amplitude: float = 0.5, lobes: int = 8, center=(0.0, 0.0)):
        if base <= abs(amplitude):
            raise GeometryError('polar curve radius must stay positive')
        self.base, self.amplitude, self.lobes = float(base), float(amplitude), int(lobes)
        self.center = tuple(float(c) for c in center)
        self._components = [
            StarCurve(
                self.center[0], self.center[1],
                lambda t: self.base + self.amplitude * np.sin(self.lobes * t),
                lambda t: self.amplitude * self.lobes * np.cos(self.lobes * t),
            )
        ]

    @property
    def components(self):
        return self._components

    def contains(self, x, y):
        dx, dy = np.asarray(x) - self.center[0], np.asarray(y) - self.center[1]
        theta = np.arctan2(dy, dx)
        return np.hypot(dx, dy) < self.base + self.amplitude * np.sin(self.lobes * theta)


class DiskUnionScatterer(ScattererGeometry):
    name = 'disk_union'

    def __init__(self, centers, radius: float):
        centers = np.asarray(centers, dtype=float).reshape(-1, 2)
        if radius <= 0 or len(centers) == 0:
            raise GeometryError('a disk union needs at least one disk with positive radius')
        self.centers = centers
        self.radius = float(radius)
        self._components = [CircleCurve(cx, cy, self.radius) for cx, cy in centers]

    def _on_boundary(self, index: int, x, y):
        keep = np.ones(np.shape(x), dtype=bool)
        for other, (cx, cy) in enumerate(self.centers):
            if other != index:
                keep &= np.hypot(x - cx, y - cy) >= self.radius * (1 - 1e-12)
        return keep

    @property
    def components(self):
        return self._components

    def contains(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        inside = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=bool)
        for cx, cy in self.centers:
            inside |= np.hypot(x - cx, y - cy) < self.radius
        return inside


class ImplicitQuarticScatterer(ScattererGeometry):
    """``D = {(x^2 + (y - a)^2)(x^2 + (y + a)^2) < level}``, one or two Cassini lobes."""

    name = 'implicit_quartic'

    def __init__(self, focus: float = 1.0, level: float = 0.6):
        if level <= 0 or focus <= 0:
            raise GeometryError('quartic scatterer needs positive focus and level')
        self.focus, self.level = float(focus), float(level)
        if self.level < self.focus**4:
            lobe_centers = [(0.0, self.focus), (0.0, -self.focus)]
        else:
            lobe_centers = [(0.0, 0.0)]
        self._components = [self._lobe(center) for center in lobe_centers]

    def _value(self, x, y):
        return (x**2 + (y - self.focus)**2) * (x**2 + (y + self.focus)**2)

    def _lobe(self, center) -> StarCurve:
        """Star-shaped lobe around ``center`` as a periodic spline of its radius."""
        angles = np.linspace(0.0, TWO_PI, 513)
        radii = np.empty_like(angles)
        for k, angle in enumerate(angles[:-1]):
            direction = np.cos(angle), np.sin(angle)
            radii[k] = optimize.brentq(
                lambda r: self._value(center[0] + r * direction[0], center[1] + r * direction[1]) - self.level,
                0.0, 4 * (self.focus + self.level**0.25),
            )
        radii[-1] = radii[0]
        spline = interpolate.CubicSpline(angles, radii, bc_type='periodic')
        derivative = spline.derivative()
        return StarCurve(
            center[0], center[1], lambda t: spline(np.mod(t, TWO_PI)), lambda t: derivative(np.mod(t, TWO_PI))
        )

    @property
    def components(self):
        return self._components

    def contains(self, x, y):
        return self._value(np.asarray(x, dtype=float), np.asarray(y, dtype=float)) < self.level


class PolylineScatterer(ScattererGeometry):
    """Closed polyline smoothed into a periodic spline."""

    name = 'polyline'

    def __init__(self, points, smoothing: float = 0.0):
        self._components = [SplineCurve(points, smoothing)]
        t = np.linspace(0.0, TWO_PI, SAMPLES_PER_CURVE, endpoint=False)
        x, y = self._components[0].point(t)
        self._polygon = np.column_stack([x, y])

    @property
    def components(self):
        return self._components

    def contains(self, x, y):
        """Even-odd rule against a dense sampling of the smoothed curve."""
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        inside = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=bool)
        px, py = self._polygon[:, 0], self._polygon[:, 1]
        qx, qy = np.roll(px, -1), np.roll(py, -1)
        for ax, ay, bx, by in zip(px, py, qx, qy):
            crosses = (ay > y) != (by > y)
            with np.errstate(divide='ignore', invalid='ignore'):
                x_cross = ax + (y - ay) * (bx - ax) / (by - ay)
            inside ^= crosses & (x < x_cross)
        return inside
