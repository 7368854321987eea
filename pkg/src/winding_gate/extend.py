"""Extendibility test: holomorphy residual of H(f), the A(a, f) grid, and the
only-if direction (degree equals zero count for extendible data)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundary import BoundaryFunction
from .degree import degree_near_boundary, zero_count
from .dirichlet import DEFAULT_CONFIG, SolverConfig, evaluate, extend_H, extend_HZ
from .errors import CertificateFailed, InconsistentCriteria, NotExtendible, Unstable, ZeroOnContour
from .geometry import CircleDomain, ContourFamily, interior_grid
from .series import HoloSeries

PROBE_COUNT = 64
PROBE_MARGIN = 0.05
# verdict and A-grid must disagree by this factor before it counts as a contradiction
CONSISTENCY_GAP = 100.0


def A_value(a, f: BoundaryFunction, domain: CircleDomain, config: SolverConfig | None = None):
    """A(a, f) = H(Zf)(a) - a H(f)(a)."""
    a = np.asarray(a, dtype=complex)
    Hf = extend_H(f, domain, config)
    HZf = extend_HZ(f, domain, config)
    out = evaluate(HZf, a) - a * evaluate(Hf, a)
    return complex(out) if np.ndim(out) == 0 else out


@dataclass
class ExtendibilityReport:
    verdict: str
    antiholomorphic_residual: float
    tol_extend: float
    max_abs_A: float
    tol_A: float
    solver_residual: float
    probe_grid: np.ndarray
    A_values: np.ndarray
    extension: HoloSeries | None = None

    @property
    def extendible(self) -> bool:
        return self.verdict == "extendible"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "antiholomorphic_residual": self.antiholomorphic_residual,
            "tol_extend": self.tol_extend,
            "max_abs_A": self.max_abs_A,
            "tol_A": self.tol_A,
            "solver_residual": self.solver_residual,
            "A_grid": [[a.real, a.imag, v.real, v.imag] for a, v in zip(self.probe_grid, self.A_values)],
            "extension": None if self.extension is None else self.extension.to_dict(),
        }


def probe_grid(domain: CircleDomain, count: int = PROBE_COUNT, seed: int = 0) -> np.ndarray:
    return interior_grid(domain, count, margin=PROBE_MARGIN * domain.outer.radius, seed=seed)


def test_extendibility(f: BoundaryFunction, domain: CircleDomain,
                       config: SolverConfig | None = None, probes: int = PROBE_COUNT,
                       seed: int = 0) -> ExtendibilityReport:
    config = config or DEFAULT_CONFIG
    Hf = extend_H(f, domain, config)
    HZf = extend_HZ(f, domain, config)
    anti = float(np.sqrt(Hf.anti.coefficient_norm() ** 2 + np.sum(np.abs(Hf.logs) ** 2)))
    scale_len = abs(domain.outer.center) + domain.outer.radius
    s = max(1e-6, 100 * Hf.residual, 100 * HZf.residual / scale_len)
    norm = Hf.coefficient_norm()
    tol_extend = s * norm
    tol_A = s * norm * scale_len

    grid = probe_grid(domain, probes, seed)
    A = evaluate(HZf, grid) - grid * evaluate(Hf, grid)
    max_A = float(np.abs(A).max())

    extendible = anti <= tol_extend
    if extendible and max_A > CONSISTENCY_GAP * tol_A:
        raise InconsistentCriteria(f"holomorphy residual {anti:.3e} is small but max|A| = {max_A:.3e}")
    if not extendible and anti > CONSISTENCY_GAP * tol_extend and max_A <= tol_A:
        raise InconsistentCriteria(f"holomorphy residual {anti:.3e} is large but max|A| = {max_A:.3e}")
    return ExtendibilityReport(
        verdict="extendible" if extendible else "not_extendible",
        antiholomorphic_residual=anti,
        tol_extend=tol_extend,
        max_abs_A=max_A,
        tol_A=tol_A,
        solver_residual=Hf.residual,
        probe_grid=grid,
        A_values=A,
        extension=Hf.holo if extendible else None,
    )


# keep pytest from collecting the public name above as a test
test_extendibility.__test__ = False


def extract_extension(report: ExtendibilityReport) -> HoloSeries:
    if not report.extendible or report.extension is None:
        raise NotExtendible("boundary data does not extend holomorphically")
    return report.extension


@dataclass(frozen=True)
class RationalTrial:
    """h(z) = poly(z) / prod(z - p_k); poles lie in holes or outside the outer disc."""

    coefficients: tuple[complex, ...]
    poles: tuple[complex, ...] = ()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.polyval(np.asarray(self.coefficients)[::-1], z)
        for p in self.poles:
            out = out / (z - p)
        return out

    def label(self) -> str:
        num = " + ".join(f"({c.real:.4g}{c.imag:+.4g}i)z^{k}" for k, c in enumerate(self.coefficients))
        den = "".join(f"(z - ({p.real:.4g}{p.imag:+.4g}i))" for p in self.poles)
        return f"[{num}]/{den}" if den else f"[{num}]"


def random_trials(domain: CircleDomain, rng: np.random.Generator, count: int,
                  max_degree: int = 4, max_poles: int = 2) -> list[RationalTrial]:
    """Random rational h with poles only inside holes or outside the closure."""
    o = domain.outer
    trials = []
    for _ in range(count):
        deg = int(rng.integers(0, max_degree + 1))
        coeffs = (rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)) / (1 + np.arange(deg + 1))
        coeffs = coeffs / max(1.0, o.radius) ** np.arange(deg + 1)
        poles = []
        for _ in range(int(rng.integers(0, max_poles + 1))):
            if domain.holes and rng.random() < 0.5:
                h = domain.holes[int(rng.integers(len(domain.holes)))]
                p = h.center + h.radius * 0.7 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
                scale = h.radius
            else:
                p = o.center + o.radius * rng.uniform(1.3, 3.0) * np.exp(2j * np.pi * rng.random())
                scale = abs(p - o.center)
            poles.append(complex(p))
            # keep |h| comparable to the polynomial part
            coeffs = coeffs * scale
        trials.append(RationalTrial(tuple(complex(c) for c in coeffs), tuple(poles)))
    return trials


@dataclass
class OnlyIfResult:
    trials: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "trials": [{"h": lbl, "degree": d, "zero_count": z} for lbl, d, z in self.trials],
            "skipped": [{"h": lbl, "reason": r} for lbl, r in self.skipped],
        }


def only_if_check(f: BoundaryFunction, trials, domain: CircleDomain,
                  config: SolverConfig | None = None,
                  schedule: ContourFamily | None = None) -> OnlyIfResult:
    """degree(f~ + h) against zero_count(g + h) for extendible f with extension g.

    Trials whose degree computation cannot be certified (psi too small on a
    contour, or no stabilization) are skipped and listed.
    """
    report = test_extendibility(f, domain, config)
    g = extract_extension(report)
    Hf = extend_H(f, domain, config)
    out = OnlyIfResult()
    for h in trials:
        label = h.label() if hasattr(h, "label") else repr(h)
        try:
            deg = degree_near_boundary(domain, lambda z, h=h: Hf.values(z) + h(z), schedule).degree
            zc = zero_count(lambda z, h=h: g(z) + h(z), domain, schedule)
        except (ZeroOnContour, Unstable) as exc:
            out.skipped.append((label, f"{type(exc).__name__}: {exc}"))
            continue
        if deg != zc:
            raise CertificateFailed(f"degree {deg} != zero count {zc} for h = {label}")
        out.trials.append((label, deg, zc))
    return out
