"""Exact rational plane geometry: circles, tangency and angle predicates, inversion.

Every quantity is a `fractions.Fraction`; every predicate is a polynomial
equality or inequality decided with zero tolerance.  Nothing in this module
ever rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CenterOnCircle,
    CenterOnLine,
    DimensionMismatch,
    NotTangent,
    RadiusNotPositive,
)

Point = tuple[Fraction, ...]


def frac(value) -> Fraction:
    """Coerce ints, strings like "3/4", and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an exact rational")
    return Fraction(value)


def point(*coords) -> Point:
    return tuple(frac(c) for c in coords)


def rational_sqrt(value: Fraction) -> Fraction:
    """Exact square root of a nonnegative rational, or ValueError if irrational."""
    value = frac(value)
    if value < 0:
        raise ValueError("square root of negative rational")
    num = math.isqrt(value.numerator)
    den = math.isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        raise ValueError(f"{value} is not a perfect rational square")
    return Fraction(num, den)


@dataclass(frozen=True)
class Circle:
    """Circle with center (cx, cy) and radius r > 0."""

    cx: Fraction
    cy: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cx", frac(self.cx))
        object.__setattr__(self, "cy", frac(self.cy))
        object.__setattr__(self, "r", frac(self.r))
        if self.r <= 0:
            raise RadiusNotPositive(f"radius must be positive, got {self.r}")

    @property
    def center(self) -> Point:
        return (self.cx, self.cy)

    def contains_point(self, p: Point) -> bool:
        """True iff p lies exactly on the circle."""
        return (p[0] - self.cx) ** 2 + (p[1] - self.cy) ** 2 == self.r**2

    def rational_points(self, params=(0, 1, -1, Fraction(1, 2))) -> list[Point]:
        """Rational witness points on the circle, one per parameter value.

        Tangent-half-angle parametrization: t ↦ center + r·((1−t²), 2t)/(1+t²),
        so every output point is exact and distinct parameters give distinct
        points.
        """
        pts = []
        for t in params:
            t = frac(t)
            den = 1 + t * t
            pts.append(
                (self.cx + self.r * (1 - t * t) / den, self.cy + self.r * 2 * t / den)
            )
        return pts


@dataclass(frozen=True)
class HorizontalLine:
    """The horizontal line y = const."""

    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "y", frac(self.y))


@dataclass(frozen=True)
class CosAngle:
    """Intersection angle θ ∈ [0, π/2] stored as cos²θ so predicates stay rational."""

    cos2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cos2", frac(self.cos2))
        if not 0 <= self.cos2 <= 1:
            raise ValueError(f"cos² must lie in [0, 1], got {self.cos2}")

    @property
    def is_right(self) -> bool:
        """θ = π/2 (orthogonal intersection)."""
        return self.cos2 == 0

    @property
    def is_zero(self) -> bool:
        """θ = 0 (tangency)."""
        return self.cos2 == 1

    def cos_value(self) -> Fraction:
        """Exact cos θ; raises ValueError when cos²θ is not a rational square.

        Predicates only need cos²θ, but constructions that place lines at
        y ± r·cosθ need the root itself.
        """
        return rational_sqrt(self.cos2)

    @classmethod
    def from_cos(cls, c) -> "CosAngle":
        c = frac(c)
        return cls(c * c)

    @classmethod
    def right(cls) -> "CosAngle":
        return cls(Fraction(0))

    @classmethod
    def zero(cls) -> "CosAngle":
        return cls(Fraction(1))


@dataclass(frozen=True)
class HomotheticMap:
    """p ↦ shift + scale·p.  A proper map has scale > 0.

    The relaxed variant (proper=False) admits scale ≤ 0 and backs the
    degenerate-similarity tests used when recognizing copies.
    """

    shift: Point
    scale: Fraction
    proper: bool = True

    def __post_init__(self):
        object.__setattr__(self, "shift", tuple(frac(c) for c in self.shift))
        object.__setattr__(self, "scale", frac(self.scale))
        if self.proper and self.scale <= 0:
            raise ValueError(f"proper homothetic map needs scale > 0, got {self.scale}")

    @property
    def dim(self) -> int:
        return len(self.shift)


def apply_homothety(h: HomotheticMap, p: Point) -> Point:
    if len(p) != h.dim:
        raise DimensionMismatch(f"point has dim {len(p)}, map has dim {h.dim}")
    return tuple(s + h.scale * c for s, c in zip(h.shift, p))


def _center_dist2(c1: Circle, c2: Circle) -> Fraction:
    return (c1.cx - c2.cx) ** 2 + (c1.cy - c2.cy) ** 2


def externally_tangent(c1: Circle, c2: Circle) -> bool:
    return _center_dist2(c1, c2) == (c1.r + c2.r) ** 2


def internally_tangent(c1: Circle, c2: Circle) -> bool:
    """True iff the circles are distinct and tangent with nested interiors."""
    if c1 == c2:
        return False
    return _center_dist2(c1, c2) == (c1.r - c2.r) ** 2


def concentric(c1: Circle, c2: Circle) -> bool:
    return c1.cx == c2.cx and c1.cy == c2.cy


def intersect_at_angle(c1: Circle, c2: Circle, a: CosAngle) -> bool:
    """True iff the circles meet and their tangent lines form angle θ there.

    The test is (r1² + r2² − d²)² = 4·r1²·r2²·cos²θ together with the
    intersection range (r1 − r2)² ≤ d² ≤ (r1 + r2)².  For cos²θ = 1 this is
    exactly external-or-internal tangency of distinct circles.  Identical
    circles have no defined angle and yield False.
    """
    if c1 == c2:
        return False
    d2 = _center_dist2(c1, c2)
    if d2 < (c1.r - c2.r) ** 2 or d2 > (c1.r + c2.r) ** 2:
        return False
    lhs = (c1.r**2 + c2.r**2 - d2) ** 2
    return lhs == 4 * c1.r**2 * c2.r**2 * a.cos2


def line_circle_angle(l: HorizontalLine, c: Circle, a: CosAngle) -> bool:
    """True iff the horizontal line meets the circle at angle θ."""
    off2 = (c.cy - l.y) ** 2
    return off2 <= c.r**2 and off2 == c.r**2 * a.cos2


def tangency_kind(c1: Circle, c2: Circle):
    """'external', 'internal', or None; one shared distance computation."""
    if c1 == c2:
        return None
    d2 = _center_dist2(c1, c2)
    if d2 == (c1.r + c2.r) ** 2:
        return "external"
    if d2 == (c1.r - c2.r) ** 2:
        return "internal"
    return None


def tangency_point(c1: Circle, c2: Circle) -> Point:
    """The unique common point of two tangent circles (exact)."""
    kind = tangency_kind(c1, c2)
    if kind is None:
        raise NotTangent("circles are not tangent")
    denom = c1.r + c2.r if kind == "external" else c1.r - c2.r
    t = c1.r / denom
    return (c1.cx + t * (c2.cx - c1.cx), c1.cy + t * (c2.cy - c1.cy))


def invert_point(o: Point, k2: Fraction, p: Point) -> Point:
    """Image of p under inversion with center o and squared radius k2."""
    dx, dy = p[0] - o[0], p[1] - o[1]
    d2 = dx * dx + dy * dy
    if d2 == 0:
        raise ValueError("cannot invert the center itself")
    return (o[0] + k2 * dx / d2, o[1] + k2 * dy / d2)


def invert_circle(o: Point, k2: Fraction, c: Circle) -> Circle:
    """Image circle under inversion; o must not lie on c."""
    k2 = frac(k2)
    if k2 <= 0:
        raise ValueError("inversion needs k2 > 0")
    dx, dy = c.cx - o[0], c.cy - o[1]
    u = dx * dx + dy * dy - c.r**2
    if u == 0:
        raise CenterOnCircle("inversion center lies on the circle")
    return Circle(o[0] + k2 * dx / u, o[1] + k2 * dy / u, abs(k2 * c.r / u))


def invert_line(o: Point, k2: Fraction, l: HorizontalLine) -> Circle:
    """Image of a horizontal line: a circle through o."""
    k2 = frac(k2)
    if k2 <= 0:
        raise ValueError("inversion needs k2 > 0")
    gap = l.y - o[1]
    if gap == 0:
        raise CenterOnLine("inversion center lies on the line")
    half = k2 / (2 * gap)
    return Circle(o[0], o[1] + half, abs(half))
