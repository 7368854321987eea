"""Continuous boundary data f on bD and its canonical extension."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DivisionByZero, InputError, OffBoundaryError
from .expr import Node, parse_expression
from .geometry import CircleDomain, component_points

ON_BOUNDARY_TOL = 1e-9
_DENSE = 4096


@dataclass(frozen=True)
class Expression:
    node: Node

    @classmethod
    def parse(cls, text: str) -> "Expression":
        return cls(parse_expression(text))

    def values(self, points, circle=None):
        return self.node(points)

    def to_dict(self):
        return {"kind": "expr", "expr": self.node.pretty()}


@dataclass(frozen=True)
class RationalPair:
    """numerator(z) / denominator(z), coefficients in ascending powers of z."""

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...] = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(complex(c) for c in self.numerator))
        object.__setattr__(self, "denominator", tuple(complex(c) for c in self.denominator))
        if not self.numerator or not self.denominator:
            raise InputError("rational data needs non-empty coefficient lists")

    def values(self, points, circle=None):
        z = np.asarray(points, dtype=complex)
        num = np.polyval(self.numerator[::-1], z)
        den = np.polyval(self.denominator[::-1], z)
        if np.any(den == 0):
            raise DivisionByZero("rational boundary data has a vanishing denominator")
        return num / den

    def to_dict(self):
        return {
            "kind": "rational",
            "num": [[c.real, c.imag] for c in self.numerator],
            "den": [[c.real, c.imag] for c in self.denominator],
        }


@dataclass(frozen=True)
class SampleTable:
    """Values at angles on a circle, linearly interpolated in angle (periodic)."""

    angles: tuple[float, ...]
    values_: tuple[complex, ...]

    def __post_init__(self):
        a = tuple(float(t) for t in self.angles)
        v = tuple(complex(x) for x in self.values_)
        if len(a) != len(v) or len(a) < 2:
            raise InputError("sample table needs at least two (angle, value) rows")
        if a[0] < 0 or a[-1] >= 2 * np.pi or any(y <= x for x, y in zip(a, a[1:])):
            raise InputError("table angles must be strictly increasing in [0, 2*pi)")
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "values_", v)

    def at_angle(self, theta):
        theta = np.mod(np.asarray(theta, dtype=float), 2 * np.pi)
        a = np.asarray(self.angles)
        v = np.asarray(self.values_)
        xp = np.concatenate([a, [a[0] + 2 * np.pi]])
        fp = np.concatenate([v, [v[0]]])
        # angles below the first knot wrap onto the last interval
        theta = np.where(theta < a[0], theta + 2 * np.pi, theta)
        return np.interp(theta, xp, fp.real) + 1j * np.interp(theta, xp, fp.imag)

    def values(self, points, circle=None):
        if circle is None:
            raise InputError("sample tables need the component circle")
        return self.at_angle(np.angle(np.asarray(points) - circle.center))

    def to_dict(self):
        return {
            "kind": "table",
            "angles": list(self.angles),
            "values": [[c.real, c.imag] for c in self.values_],
        }


Payload = Union[Expression, RationalPair, SampleTable]


def load_table_csv(path) -> SampleTable:
    """Two or three columns: angle,re[,im]. A non-numeric first row is a header."""
    angles, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh)):
            if not row or not "".join(row).strip():
                continue
            try:
                nums = [float(x) for x in row]
            except ValueError:
                if lineno == 0:
                    continue
                raise InputError(f"{path}: row {lineno + 1} is not numeric")
            if len(nums) not in (2, 3):
                raise InputError(f"{path}: row {lineno + 1} needs 2 or 3 columns")
            angles.append(nums[0])
            values.append(complex(nums[1], nums[2] if len(nums) == 3 else 0.0))
    return SampleTable(tuple(angles), tuple(values))


@dataclass(frozen=True)
class Affine:
    """z -> slope*z + intercept; hashable so products of data can key caches."""

    slope: complex = 0.0
    intercept: complex = 1.0

    def __call__(self, z):
        return np.asarray(z, dtype=complex) * self.slope + self.intercept


@dataclass(frozen=True)
class BoundaryFunction:
    """Per-component boundary data, one payload per component in domain index order.

    ``factor`` optionally multiplies every payload by an affine function of z,
    which is how Zf and (Z-a)f are represented.
    """

    components: tuple[Payload, ...]
    factor: Affine | None = None

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def uniform(cls, payload, n: int) -> "BoundaryFunction":
        if isinstance(payload, str):
            payload = Expression.parse(payload)
        return cls((payload,) * n)

    @classmethod
    def from_expression(cls, text: str, domain: CircleDomain) -> "BoundaryFunction":
        return cls.uniform(Expression.parse(text), domain.n)

    def check_domain(self, domain: CircleDomain):
        if len(self.components) != domain.n:
            raise InputError(
                f"boundary data has {len(self.components)} components, domain has {domain.n}")

    def values(self, domain: CircleDomain, index: int, points):
        """Vectorised evaluation on component ``index`` (points assumed on the circle)."""
        points = np.asarray(points, dtype=complex)
        v = np.asarray(self.components[index].values(points, domain.component(index)), dtype=complex)
        if self.factor is not None:
            v = v * self.factor(points)
        return v

    def validate(self, domain: CircleDomain, count: int = _DENSE):
        """Finite values on a dense sample of every component."""
        self.check_domain(domain)
        for k in range(domain.n):
            v = self.values(domain, k, component_points(domain, k, count))
            if not np.all(np.isfinite(v)):
                raise DivisionByZero(f"boundary data is not finite on component {k}")
        return self

    def times(self, factor: Affine) -> "BoundaryFunction":
        if self.factor is None:
            return BoundaryFunction(self.components, factor)
        if self.factor.slope != 0 and factor.slope != 0:
            raise ValueError("only one non-constant factor is supported")
        a, b = self.factor, factor
        slope = a.slope * b.intercept + b.slope * a.intercept
        return BoundaryFunction(self.components, Affine(slope, a.intercept * b.intercept))

    def rotated(self, gamma: float) -> "BoundaryFunction":
        """e^{i gamma} f."""
        return self.times(Affine(0.0, complex(np.exp(1j * gamma))))

    def to_dict(self):
        out = {"components": [c.to_dict() for c in self.components]}
        if self.factor is not None:
            sl, ic = complex(self.factor.slope), complex(self.factor.intercept)
            out["factor"] = {"slope": [sl.real, sl.imag], "intercept": [ic.real, ic.imag]}
        return out


Z = Affine(1.0, 0.0)


def eval_boundary(f: BoundaryFunction, point: complex, component_index: int,
                  domain: CircleDomain) -> complex:
    circle = domain.component(component_index)
    if abs(abs(point - circle.center) - circle.radius) > ON_BOUNDARY_TOL * circle.radius:
        raise OffBoundaryError(f"{point} is not on component {component_index}")
    return complex(f.values(domain, component_index, np.asarray([point]))[0])


def _payload_from_dict(obj) -> Payload:
    kind = obj.get("kind")
    try:
        if kind == "expr":
            return Expression.parse(obj["expr"])
        if kind == "rational":
            num = [complex(*c) if isinstance(c, list) else complex(c) for c in obj["num"]]
            den = [complex(*c) if isinstance(c, list) else complex(c) for c in obj.get("den", [1.0])]
            return RationalPair(tuple(num), tuple(den))
        if kind == "table":
            if "csv" in obj:
                return load_table_csv(obj["csv"])
            vals = [complex(*c) if isinstance(c, list) else complex(c) for c in obj["values"]]
            return SampleTable(tuple(obj["angles"]), tuple(vals))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed boundary component {obj!r}") from exc
    raise InputError(f"unknown boundary component kind {kind!r}")


def load_boundary(doc) -> BoundaryFunction:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InputError(f"boundary document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("components"), list):
        raise InputError("boundary document needs a 'components' list")
    return BoundaryFunction(tuple(_payload_from_dict(c) for c in doc["components"]))


def canonical_extension(f: BoundaryFunction, domain: CircleDomain, config=None):
    """The harmonic extension H(f), used as the continuous extension of f."""
    from .dirichlet import extend_H

    return extend_H(f, domain, config)
