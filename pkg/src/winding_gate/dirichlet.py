"""Dirichlet problem on circle domains by least-squares series collocation.

A harmonic field is stored as

    u(z) = P(z) + conj(Q(z)) + sum_j mu_j log|z - a_j|

with P, Q holomorphic series (see :mod:`series`). The constant term always
lives in P.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .boundary import Z, BoundaryFunction
from .errors import IllConditioned, InsufficientSamples, OutsideDomain
from .geometry import CircleDomain, component_points
from .series import HoloSeries

INTERIOR_TOL = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    degree: int = 24
    oversampling: int = 4
    rcond: float = 1e-12
    # largest fraction of unknowns the singular-value cutoff may discard
    rank_budget: float = 0.1

    def __post_init__(self):
        if self.degree < 4:
            raise ValueError("degree N must be at least 4")
        if self.oversampling < 2:
            raise ValueError("oversampling must be at least 2")


DEFAULT_CONFIG = SolverConfig()


class HarmonicField:
    def __init__(self, domain: CircleDomain, holo: HoloSeries, anti: HoloSeries, logs,
                 residual: float = 0.0, real: bool = False):
        if anti.outer[0] != 0:
            holo = holo.with_constant(holo.outer[0] + np.conj(anti.outer[0]))
            anti = anti.with_constant(0.0)
        self.domain = domain
        self.holo = holo
        self.anti = anti
        self.logs = np.asarray(logs, dtype=complex).reshape(len(domain.holes)).copy()
        self.logs.setflags(write=False)
        self.residual = float(residual)
        self.real = real

    @property
    def N(self) -> int:
        return self.holo.N

    @classmethod
    def constant(cls, domain: CircleDomain, value: complex, N: int = DEFAULT_CONFIG.degree):
        holo = HoloSeries.zeros(domain, N).with_constant(value)
        return cls(domain, holo, HoloSeries.zeros(domain, N), np.zeros(len(domain.holes)),
                   real=complex(value).imag == 0)

    def values(self, z):
        """Evaluate without the interior check (boundary points included)."""
        z = np.asarray(z, dtype=complex)
        out = self.holo(z) + np.conj(self.anti(z))
        for h, mu in zip(self.domain.holes, self.logs):
            if mu != 0:
                out = out + mu * np.log(np.abs(z - h.center))
        return out

    def __call__(self, z):
        return self.values(z)

    def _combine(self, other: "HarmonicField", a: complex, b: complex) -> "HarmonicField":
        # conj enters the anti part: c*conj(Q) = conj(conj(c)*Q)
        a_, b_ = np.conj(a), np.conj(b)
        return HarmonicField(
            self.domain,
            self.holo * a + other.holo * b,
            self.anti * a_ + other.anti * b_,
            a * self.logs + b * other.logs,
            residual=abs(a) * self.residual + abs(b) * other.residual,
            real=self.real and other.real and complex(a).imag == 0 and complex(b).imag == 0,
        )

    def __add__(self, other):
        if not isinstance(other, HarmonicField):
            return self + HarmonicField.constant(self.domain, other, self.N)
        return self._combine(other, 1, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, HarmonicField):
            return self + (-complex(other))
        return self._combine(other, 1, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        c = complex(c)
        return HarmonicField(self.domain, self.holo * c, self.anti * np.conj(c), c * self.logs,
                             residual=abs(c) * self.residual, real=self.real and c.imag == 0)

    __rmul__ = __mul__

    def real_part(self) -> "HarmonicField":
        # conj(u) has holomorphic part Q + conj(P(0)) and anti part P
        mean = (self.holo + self.anti) * 0.5
        return HarmonicField(self.domain, mean.with_constant(self.holo.outer[0].real),
                             mean.with_constant(0.0),
                             self.logs.real, residual=self.residual, real=True)

    def imag_part(self) -> "HarmonicField":
        half = (self.anti - self.holo) * 0.5j
        return HarmonicField(self.domain, half.with_constant(self.holo.outer[0].imag),
                             half.with_constant(0.0),
                             self.logs.imag, residual=self.residual, real=True)

    def coefficient_norm(self) -> float:
        return float(np.sqrt(self.holo.coefficient_norm() ** 2 + self.anti.coefficient_norm() ** 2
                             + np.sum(np.abs(self.logs) ** 2)))

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "residual": self.residual,
            "real": self.real,
            "holo": self.holo.to_dict(),
            "anti": self.anti.to_dict(),
            "logs": [[c.real, c.imag] for c in self.logs],
        }


def evaluate(field: HarmonicField, z):
    """Evaluate at interior points; raises OutsideDomain otherwise."""
    z_arr = np.asarray(z, dtype=complex)
    margin = INTERIOR_TOL * field.domain.outer.radius
    if np.any(field.domain.boundary_distance(z_arr) <= margin):
        raise OutsideDomain("evaluation point is not strictly inside the domain")
    out = field.values(z_arr)
    return complex(out) if out.ndim == 0 else out


def unknown_count(domain: CircleDomain, N: int) -> int:
    return 1 + 2 * N + len(domain.holes) * (2 * N + 1)


def _design_matrix(domain: CircleDomain, z: np.ndarray, N: int) -> np.ndarray:
    o = domain.outer
    w0 = (z - o.center) / o.radius
    k = np.arange(1, N + 1)
    cols = [np.ones((len(z), 1), dtype=complex)]
    powers = w0[:, None] ** k
    cols += [powers, np.conj(powers)]
    for h in domain.holes:
        u = h.radius / (z - h.center)
        up = u[:, None] ** k
        cols += [np.log(np.abs(z - h.center))[:, None].astype(complex), up, np.conj(up)]
    return np.hstack(cols)


def _unpack(domain: CircleDomain, x: np.ndarray, N: int):
    holo_outer = x[: N + 1]
    anti_outer = np.concatenate([[0], np.conj(x[N + 1: 2 * N + 1])])
    pos = 2 * N + 1
    logs, holo_holes, anti_holes = [], [], []
    for _ in domain.holes:
        logs.append(x[pos])
        holo_holes.append(x[pos + 1: pos + 1 + N])
        anti_holes.append(np.conj(x[pos + 1 + N: pos + 1 + 2 * N]))
        pos += 2 * N + 1
    holo = HoloSeries(domain, holo_outer, np.array(holo_holes).reshape(len(domain.holes), N))
    anti = HoloSeries(domain, anti_outer, np.array(anti_holes).reshape(len(domain.holes), N))
    return holo, anti, np.array(logs, dtype=complex)


def collocation_points(domain: CircleDomain, config: SolverConfig, density: int = 1,
                       offset: float = 0.0):
    per = math.ceil(config.oversampling * unknown_count(domain, config.degree) / domain.n)
    per = max(per, 4 * config.degree) * density
    return [component_points(domain, k, per, offset) for k in range(domain.n)]


def fit_samples(domain: CircleDomain, points, values, config: SolverConfig = DEFAULT_CONFIG):
    """Least-squares fit to explicit boundary samples.

    ``points`` and ``values`` are per-component sequences; ``values`` may carry
    a trailing axis for several right-hand sides. Returns a list of fields
    (one per right-hand side) without residual information.
    """
    N = config.degree
    M = unknown_count(domain, N)
    z = np.concatenate([np.asarray(p, dtype=complex) for p in points])
    b = np.concatenate([np.asarray(v, dtype=complex) for v in values])
    if len(z) < config.oversampling * M:
        raise InsufficientSamples(f"{len(z)} samples for {M} unknowns "
                                  f"(need {config.oversampling * M})")
    A = _design_matrix(domain, z, N)
    scale = np.linalg.norm(A, axis=0)
    x, _, rank, _ = np.linalg.lstsq(A / scale, b, rcond=config.rcond)
    if rank < (1 - config.rank_budget) * M:
        raise IllConditioned(f"numerical rank {rank} of {M} unknowns")
    x = x / (scale[:, None] if x.ndim == 2 else scale)
    cols = [x] if x.ndim == 1 else list(x.T)
    return [HarmonicField(domain, *_unpack(domain, c, N)) for c in cols]


def _targets(data, domain, k, pts):
    if isinstance(data, BoundaryFunction):
        return data.values(domain, k, pts)
    return np.asarray(data(k, pts), dtype=complex)


def solve_dirichlet(domain: CircleDomain, data, config: SolverConfig = DEFAULT_CONFIG) -> HarmonicField:
    """Harmonic field matching ``data`` on bD.

    ``data`` is a BoundaryFunction or a callable ``(component_index, points) -> values``.
    The reported residual is the sup error on a shifted grid of twice the density.
    """
    pts = collocation_points(domain, config)
    vals = [_targets(data, domain, k, p) for k, p in enumerate(pts)]
    field = fit_samples(domain, pts, vals, config)[0]
    field.residual = verification_residual(field, data, config)
    return field


def verification_residual(field: HarmonicField, data, config: SolverConfig = DEFAULT_CONFIG) -> float:
    worst = 0.0
    for k, p in enumerate(collocation_points(field.domain, config, density=2, offset=0.25)):
        err = np.abs(field.values(p) - _targets(data, field.domain, k, p))
        worst = max(worst, float(err.max()))
    return worst


@functools.lru_cache(maxsize=256)
def harmonic_measure(domain: CircleDomain, j: int, config: SolverConfig = DEFAULT_CONFIG) -> HarmonicField:
    """omega_j: 1 on hole j, 0 on every other component (outer included)."""
    if not 0 <= j < len(domain.holes):
        raise IndexError(f"hole index {j} out of range for {len(domain.holes)} holes")

    def data(k, p):
        return np.full(len(p), 1.0 if k == j else 0.0, dtype=complex)

    field = solve_dirichlet(domain, data, config)
    real = field.real_part()
    real.residual = verification_residual(real, data, config)
    return real


@functools.lru_cache(maxsize=256)
def extend_H(f: BoundaryFunction, domain: CircleDomain, config: SolverConfig | None = None) -> HarmonicField:
    f.check_domain(domain)
    return solve_dirichlet(domain, f, config or DEFAULT_CONFIG)


def extend_HZ(f: BoundaryFunction, domain: CircleDomain, config: SolverConfig | None = None) -> HarmonicField:
    """H(Zf), with (Zf)(zeta) = zeta f(zeta)."""
    return extend_H(f.times(Z), domain, config)


def field_csv_rows(field: HarmonicField, points):
    z = np.asarray(points, dtype=complex)
    v = evaluate(field, z)
    return [(p.real, p.imag, w.real, w.imag) for p, w in zip(z, np.atleast_1d(v))]
