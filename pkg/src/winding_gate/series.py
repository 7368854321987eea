"""Holomorphic functions on a circle domain as truncated Laurent-type series.

A series is a polynomial in w0 = (z - c0)/R0 about the outer center plus, for
every hole j, a polynomial in 1/w_j with w_j = (z - a_j)/r_j and no constant
term.
"""
from __future__ import annotations

import numpy as np

from .geometry import CircleDomain


class HoloSeries:
    __slots__ = ("domain", "outer", "holes")

    def __init__(self, domain: CircleDomain, outer, holes=None):
        self.domain = domain
        self.outer = np.asarray(outer, dtype=complex).copy()
        N = len(self.outer) - 1
        if holes is None:
            holes = np.zeros((len(domain.holes), N), dtype=complex)
        self.holes = np.asarray(holes, dtype=complex).reshape(len(domain.holes), N).copy()
        self.outer.setflags(write=False)
        self.holes.setflags(write=False)

    @classmethod
    def zeros(cls, domain: CircleDomain, N: int) -> "HoloSeries":
        return cls(domain, np.zeros(N + 1, dtype=complex))

    @property
    def N(self) -> int:
        return len(self.outer) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        o = self.domain.outer
        out = np.polyval(self.outer[::-1], (z - o.center) / o.radius)
        for h, b in zip(self.domain.holes, self.holes):
            u = h.radius / (z - h.center)
            out = out + u * np.polyval(b[::-1], u)
        return out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        o = self.domain.outer
        k = np.arange(1, self.N + 1)
        d = (k * self.outer[1:])[::-1]
        out = np.polyval(d, (z - o.center) / o.radius) / o.radius if self.N else np.zeros_like(z)
        for h, b in zip(self.domain.holes, self.holes):
            # d/dz u^k = -k u^(k+1) / r
            u = h.radius / (z - h.center)
            out = out - (u * u / h.radius) * np.polyval((k * b)[::-1], u)
        return out

    def _combine(self, other: "HoloSeries", a: complex, b: complex) -> "HoloSeries":
        return HoloSeries(self.domain, a * self.outer + b * other.outer, a * self.holes + b * other.holes)

    def __add__(self, other):
        return self._combine(other, 1, 1)

    def __sub__(self, other):
        return self._combine(other, 1, -1)

    def __neg__(self):
        return HoloSeries(self.domain, -self.outer, -self.holes)

    def __mul__(self, c):
        return HoloSeries(self.domain, c * self.outer, c * self.holes)

    __rmul__ = __mul__

    def conj_coefficients(self) -> "HoloSeries":
        return HoloSeries(self.domain, np.conj(self.outer), np.conj(self.holes))

    def with_constant(self, value: complex) -> "HoloSeries":
        outer = self.outer.copy()
        outer[0] = value
        return HoloSeries(self.domain, outer, self.holes)

    def coefficient_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.outer) ** 2) + np.sum(np.abs(self.holes) ** 2)))

    def deflate(self, a: complex) -> "HoloSeries":
        """(S(z) - S(a)) / (z - a) computed on coefficients.

        Outer part: (w^k - alpha^k)/(w - alpha) = sum_i w^i alpha^(k-1-i).
        Hole part: (w^-k - beta^-k)/(w - beta) = -sum_{m=1..k} w^-m beta^(m-k-1).
        Both stay inside the same basis, so nothing is evaluated pointwise.
        """
        o = self.domain.outer
        alpha = (a - o.center) / o.radius
        N = self.N
        new_outer = np.zeros(N + 1, dtype=complex)
        # synthetic division (Horner) from the top coefficient down
        acc = 0j
        for k in range(N, 0, -1):
            acc = acc * alpha + self.outer[k]
            new_outer[k - 1] = acc
        new_outer /= o.radius
        new_holes = np.zeros_like(self.holes)
        for j, (h, b) in enumerate(zip(self.domain.holes, self.holes)):
            beta_inv = h.radius / (a - h.center)
            # coefficient of w^-m: -(1/r) sum_{k>=m} b_k beta^(m-k-1)
            acc = 0j
            for m in range(N, 0, -1):
                acc = acc * beta_inv + b[m - 1]
                new_holes[j, m - 1] = -acc * beta_inv / h.radius
        return HoloSeries(self.domain, new_outer, new_holes)

    def terms(self, tol: float = 0.0, raw: bool = False) -> dict[str, complex]:
        """Readable {basis label: coefficient} for coefficients above ``tol``.

        With ``raw`` the coefficients refer to plain powers (z - c0)^k and
        (z - a_j)^-k instead of the radius-scaled ones.
        """
        o = self.domain.outer
        out = {}
        for k, c in enumerate(self.outer):
            if raw:
                c = c / o.radius ** k
            if abs(c) > tol:
                out["1" if k == 0 else _label("z", o.center, k, "w0", raw)] = complex(c)
        for j, (h, row) in enumerate(zip(self.domain.holes, self.holes)):
            for k, c in enumerate(row, start=1):
                if raw:
                    c = c * h.radius ** k
                if abs(c) > tol:
                    out[_label("z", h.center, -k, f"w{j + 1}", raw)] = complex(c)
        return out

    def to_dict(self) -> dict:
        return {
            "outer": [[c.real, c.imag] for c in self.outer],
            "holes": [[[c.real, c.imag] for c in row] for row in self.holes],
        }


def _label(var: str, center: complex, power: int, scaled_name: str, raw: bool) -> str:
    if not raw:
        return f"{scaled_name}^{power}"
    if center == 0:
        return f"{var}^{power}"
    return f"({var}-({center.real:g}{center.imag:+g}i))^{power}"
