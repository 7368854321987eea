"""Conjugate periods, the period matrix of the harmonic measures, and the
single-valued correction of harmonic fields."""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .dirichlet import DEFAULT_CONFIG, HarmonicField, SolverConfig, harmonic_measure
from .errors import ResidualLogPeriod, SingularPeriodMatrix
from .geometry import CircleDomain
from .series import HoloSeries

SINGULAR_TOL = 1e-10
SYMMETRY_TOL = 1e-8
LOG_TOL = 1e-10


def conjugate_periods(field: HarmonicField) -> np.ndarray:
    """Increase of the harmonic conjugate once around each hole (counterclockwise)."""
    return 2 * np.pi * np.asarray(field.logs)


def flux_periods(field: HarmonicField, count: int = 512) -> np.ndarray:
    """Same periods from the normal derivative on separating circles.

    Independent of the stored log coefficients: the normal derivative is a
    fourth-order central difference of point evaluations and the integral is
    the periodic trapezoid rule.
    """
    out = []
    for j, hole in enumerate(field.domain.holes):
        rho = field.domain.separating_radius(j)
        theta = 2 * np.pi * np.arange(count) / count
        n = np.exp(1j * theta)
        z = hole.center + rho * n
        h = 1e-3 * rho
        f = field.values
        dn = (-f(z + 2 * h * n) + 8 * f(z + h * n) - 8 * f(z - h * n) + f(z - 2 * h * n)) / (12 * h)
        out.append(np.sum(dn) * rho * 2 * np.pi / count)
    return np.array(out, dtype=complex)


@dataclass(frozen=True)
class PeriodMatrix:
    """alpha[k][j]: conjugate period of omega_k around hole j, divided by 2*pi."""

    alpha: np.ndarray
    singular_values: np.ndarray
    asymmetry: float

    @property
    def condition(self) -> float:
        s = self.singular_values
        return float(s[0] / s[-1]) if len(s) else 1.0

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha.tolist(),
            "singular_values": self.singular_values.tolist(),
            "condition": self.condition,
            "asymmetry": self.asymmetry,
        }


@functools.lru_cache(maxsize=64)
def period_matrix(domain: CircleDomain, config: SolverConfig = DEFAULT_CONFIG) -> PeriodMatrix:
    m = len(domain.holes)
    if m == 0:
        raise ValueError("period matrix needs at least one hole")
    alpha = np.array([harmonic_measure(domain, k, config).logs.real for k in range(m)])
    s = np.linalg.svd(alpha, compute_uv=False)
    if s[-1] <= SINGULAR_TOL * s[0]:
        raise SingularPeriodMatrix(f"smallest singular value {s[-1]:.3e} vs largest {s[0]:.3e}")
    scale = np.abs(alpha).max()
    asym = float(np.abs(alpha - alpha.T).max() / scale)
    if asym > SYMMETRY_TOL:
        raise SingularPeriodMatrix(f"period matrix is not symmetric (relative defect {asym:.3e})")
    alpha.setflags(write=False)
    return PeriodMatrix(alpha, s, asym)


@dataclass
class ConjugateCorrection:
    constants: np.ndarray
    corrected: HarmonicField


def make_single_valued(field: HarmonicField, domain: CircleDomain | None = None,
                       config: SolverConfig = DEFAULT_CONFIG) -> ConjugateCorrection:
    """Constants c with field + sum_k c_k omega_k free of log terms.

    Log coefficient at hole j of the sum is mu_j + sum_k c_k alpha[k][j], so
    c solves alpha^T c = -mu. alpha is real, so real and imaginary parts of a
    complex field are corrected independently by the same solve.
    """
    domain = domain or field.domain
    m = len(domain.holes)
    if m == 0:
        return ConjugateCorrection(np.zeros(0, dtype=complex), field)
    pm = period_matrix(domain, config)
    c = np.linalg.solve(pm.alpha.T, -np.asarray(field.logs))
    corrected = field
    for k in range(m):
        corrected = corrected + harmonic_measure(domain, k, config) * c[k]
    return ConjugateCorrection(c, corrected)


def split_PQ(field: HarmonicField) -> tuple[HoloSeries, HoloSeries]:
    """u = P + conj(Q) for a log-free field; Q carries no constant term."""
    scale = max(1.0, field.coefficient_norm())
    if np.any(np.abs(field.logs) > LOG_TOL * scale):
        raise ResidualLogPeriod(f"field still has log coefficients {field.logs}")
    return field.holo, field.anti
