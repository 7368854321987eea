"""Circle domains, their boundary circles and exhausting contour systems."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContainmentError,
    DegenerateError,
    EpsilonTooLarge,
    InputError,
    OverlapError,
)

POSITIVE = 1
NEGATIVE = -1


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def point(self, theta):
        return self.center + self.radius * np.exp(1j * np.asarray(theta, dtype=float))


@dataclass(frozen=True)
class CircleDomain:
    """Outer disc minus finitely many disjoint closed discs.

    Component indices: holes ``0..n-2`` in the given order, the outer circle
    is ``n-1``.
    """

    outer: Circle
    holes: tuple[Circle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        for c in (self.outer, *self.holes):
            if not (c.radius > 0) or not np.isfinite(c.radius):
                raise DegenerateError(f"radius must be positive, got {c.radius}")
        for j, h in enumerate(self.holes):
            if abs(h.center - self.outer.center) + h.radius >= self.outer.radius:
                raise ContainmentError(f"hole {j} is not strictly inside the outer disc")
        for i in range(len(self.holes)):
            for j in range(i + 1, len(self.holes)):
                a, b = self.holes[i], self.holes[j]
                if abs(a.center - b.center) <= a.radius + b.radius:
                    raise OverlapError(f"holes {i} and {j} intersect or touch")

    @property
    def n(self) -> int:
        return len(self.holes) + 1

    def component(self, index: int) -> Circle:
        if not 0 <= index < self.n:
            raise IndexError(f"component index {index} out of range 0..{self.n - 1}")
        return self.outer if index == self.n - 1 else self.holes[index]

    def boundary_distance(self, z):
        """Signed distance to bD; positive inside the domain."""
        z = np.asarray(z, dtype=complex)
        d = self.outer.radius - np.abs(z - self.outer.center)
        for h in self.holes:
            d = np.minimum(d, np.abs(z - h.center) - h.radius)
        return d

    def contains(self, z, margin: float = 0.0):
        return self.boundary_distance(z) > margin

    def separating_radius(self, j: int) -> float:
        """Radius of a circle about hole ``j`` that separates it from the rest of bD.

        Geometric mean of the hole radius and the distance from the hole
        center to the nearest other boundary component.
        """
        h = self.holes[j]
        d = self.outer.radius - abs(h.center - self.outer.center)
        for k, other in enumerate(self.holes):
            if k != j:
                d = min(d, abs(h.center - other.center) - other.radius)
        return float(np.sqrt(h.radius * d))

    def to_dict(self) -> dict:
        def circ(c):
            return {"center": [c.center.real, c.center.imag], "radius": c.radius}

        return {"outer": circ(self.outer), "holes": [circ(h) for h in self.holes]}


def _parse_circle(obj, what: str) -> Circle:
    try:
        re, im = obj["center"]
        return Circle(complex(float(re), float(im)), float(obj["radius"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed {what}: {obj!r}") from exc


def build_domain(doc) -> CircleDomain:
    """Build a validated domain from a JSON document (str/bytes) or parsed dict."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InputError(f"domain document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "outer" not in doc:
        raise InputError("domain document needs an 'outer' entry")
    holes = doc.get("holes", [])
    if not isinstance(holes, list):
        raise InputError("'holes' must be a list")
    return CircleDomain(
        _parse_circle(doc["outer"], "outer circle"),
        tuple(_parse_circle(h, f"hole {i}") for i, h in enumerate(holes)),
    )


def disc(center: complex = 0.0, radius: float = 1.0) -> CircleDomain:
    return CircleDomain(Circle(complex(center), float(radius)))


def annulus(rho: float, radius: float = 1.0, center: complex = 0.0) -> CircleDomain:
    c = complex(center)
    return CircleDomain(Circle(c, float(radius)), (Circle(c, float(rho)),))


@dataclass(frozen=True)
class Contour:
    """Oriented circle; the parameter t in [0, 1] runs once around it."""

    center: complex
    radius: float
    orientation: int = POSITIVE

    def points(self, t):
        theta = 2 * np.pi * self.orientation * np.asarray(t, dtype=float)
        return self.center + self.radius * np.exp(1j * theta)

    def samples(self, count: int):
        return self.points(np.arange(count) / count)


def exhausting_contours(domain: CircleDomain, epsilon: float) -> list[Contour]:
    """Boundary of D_eps: outer circle shrunk by (1-eps), holes inflated by (1+eps)."""
    if not 0 < epsilon < 1:
        raise EpsilonTooLarge(f"epsilon must lie in (0, 1), got {epsilon}")
    R = domain.outer.radius * (1 - epsilon)
    inflated = [Circle(h.center, h.radius * (1 + epsilon)) for h in domain.holes]
    for j, h in enumerate(inflated):
        if abs(h.center - domain.outer.center) + h.radius >= R:
            raise EpsilonTooLarge(f"epsilon={epsilon}: hole {j} collides with the outer contour")
    for i in range(len(inflated)):
        for j in range(i + 1, len(inflated)):
            if abs(inflated[i].center - inflated[j].center) <= inflated[i].radius + inflated[j].radius:
                raise EpsilonTooLarge(f"epsilon={epsilon}: holes {i} and {j} collide")
    contours = [Contour(h.center, h.radius, NEGATIVE) for h in inflated]
    contours.append(Contour(domain.outer.center, R, POSITIVE))
    return contours


def default_schedule(eps0: float = 0.2, count: int = 13) -> tuple[float, ...]:
    return tuple(eps0 * 2.0 ** (-m) for m in range(count))


@dataclass(frozen=True)
class ContourFamily:
    domain: CircleDomain
    epsilon_schedule: tuple[float, ...] = field(default_factory=default_schedule)

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilon_schedule)
        if any(not 0 < e < 1 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise InputError("epsilon schedule must be strictly decreasing in (0, 1)")
        object.__setattr__(self, "epsilon_schedule", eps)

    def __len__(self):
        return len(self.epsilon_schedule)

    def contours(self, m: int) -> list[Contour]:
        return exhausting_contours(self.domain, self.epsilon_schedule[m])


def sample_component(domain: CircleDomain, component_index: int, count: int,
                     offset: float = 0.0) -> list[tuple[complex, int]]:
    """``count`` equispaced points on a boundary circle, paired with the index."""
    return [(complex(p), component_index)
            for p in component_points(domain, component_index, count, offset)]


def component_points(domain: CircleDomain, component_index: int, count: int,
                     offset: float = 0.0) -> np.ndarray:
    """Array form of :func:`sample_component`; ``offset`` shifts by a fraction of a step."""
    circle = domain.component(component_index)
    if count < 1:
        raise ValueError("count must be positive")
    theta = 2 * np.pi * (np.arange(count) + offset) / count
    return circle.point(theta)


def interior_grid(domain: CircleDomain, count: int, margin: float = 0.0,
                  seed: int = 0) -> np.ndarray:
    """Low-discrepancy points inside the domain at distance > margin from bD."""
    from scipy.stats import qmc

    sampler = qmc.Halton(d=2, scramble=True, seed=seed)
    c, R = domain.outer.center, domain.outer.radius
    out = []
    while sum(len(o) for o in out) < count:
        u = sampler.random(max(4 * count, 64))
        z = c + R * ((2 * u[:, 0] - 1) + 1j * (2 * u[:, 1] - 1))
        out.append(z[domain.boundary_distance(z) > margin])
    return np.concatenate(out)[:count]
