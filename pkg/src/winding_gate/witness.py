"""Certificate of non-extendibility: a holomorphic h with deg(f~ + h) = -1.

For boundary data f that does not extend, pick an interior point a and a
rotation gamma, correct H((Z-a)f) by a combination of harmonic measures so it
vanishes at a and has a single-valued conjugate, deflate both holomorphic
parts by (z - a), and take h = -F_a - G_a. Then f~ + h = W/(z - a) with
Re W = -Re Phi_a, which is a nonzero constant on every boundary component.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryFunction
from .degree import DegreeResult, degree_near_boundary
from .dirichlet import (
    DEFAULT_CONFIG,
    HarmonicField,
    SolverConfig,
    evaluate,
    extend_H,
    extend_HZ,
    harmonic_measure,
)
from .errors import CertificateFailed, DeflationResidual, DegreeNotMinusOne, NoGoodPoint
from .extend import A_value
from .geometry import CircleDomain, ContourFamily, default_schedule, interior_grid
from .periods import make_single_valued, split_PQ
from .series import HoloSeries

CANDIDATES = 128
ANGLES = 64
GOOD_FLOOR = 1e-6
DEFLATION_TOL = 1e-8
RE_W_TOL = 1e-6
VERIFY_EPS_FACTOR = 0.75


def cd_constants(f: BoundaryFunction, domain: CircleDomain, config: SolverConfig | None = None):
    """Correction constants of H(f) and H(Zf) (see make_single_valued)."""
    config = config or DEFAULT_CONFIG
    c = make_single_valued(extend_H(f, domain, config), domain, config).constants
    d = make_single_valued(extend_HZ(f, domain, config), domain, config).constants
    return c, d


def _omega_at(domain, a, config):
    a = np.asarray(a, dtype=complex)
    return np.array([evaluate(harmonic_measure(domain, j, config), a) for j in range(len(domain.holes))]).real


def phi_a(a: complex, f: BoundaryFunction, domain: CircleDomain, c, d,
          config: SolverConfig | None = None) -> tuple[HarmonicField, np.ndarray]:
    """Phi_a = sum_j (d_j - a c_j)(omega_j - omega_j(a)) - A(a, f).

    Returns the field and its boundary constants, holes first then outer.
    """
    config = config or DEFAULT_CONFIG
    A = A_value(a, f, domain, config)
    k = np.asarray(d) - a * np.asarray(c)
    om = _omega_at(domain, a, config)
    shift = complex(np.sum(k * om))
    field = HarmonicField.constant(domain, -shift - A, config.degree)
    for j in range(len(domain.holes)):
        field = field + harmonic_measure(domain, j, config) * k[j]
    beta = np.concatenate([k - shift - A, [-shift - A]])
    return field, beta


def _betas(f, domain, candidates, c, d, config):
    """Boundary constants of Phi_a for many a at once (rows = candidates)."""
    A = A_value(candidates, f, domain, config)
    if not domain.holes:
        return -A[:, None]
    om = np.stack([evaluate(harmonic_measure(domain, j, config), candidates).real
                   for j in range(len(domain.holes))], axis=1)
    k = np.asarray(d)[None, :] - candidates[:, None] * np.asarray(c)[None, :]
    shift = np.sum(k * om, axis=1)
    return np.concatenate([k - (shift + A)[:, None], -(shift + A)[:, None]], axis=1)


def candidate_points(domain: CircleDomain, count: int = CANDIDATES, eps0: float | None = None,
                     seed: int = 0) -> np.ndarray:
    """Center (when admissible) plus low-discrepancy points inside the first contour system."""
    eps0 = eps0 if eps0 is not None else default_schedule()[0]
    o = domain.outer
    margin = 0.05 * o.radius

    def inside(z):
        ok = np.abs(z - o.center) < o.radius * (1 - eps0) - margin
        for h in domain.holes:
            ok &= np.abs(z - h.center) > h.radius * (1 + eps0) + margin
        return ok

    pts = interior_grid(domain, 4 * count, margin=margin, seed=seed)
    pts = np.concatenate([[o.center], pts])
    pts = pts[inside(pts)]
    return pts[:count]


def find_good_a_gamma(f: BoundaryFunction, domain: CircleDomain, grid_size: int = CANDIDATES,
                      config: SolverConfig | None = None, eps0: float | None = None,
                      angles: int = ANGLES) -> tuple[complex, float]:
    config = config or DEFAULT_CONFIG
    c, d = cd_constants(f, domain, config) if domain.holes else (np.zeros(0), np.zeros(0))
    cand = candidate_points(domain, grid_size, eps0)
    if len(cand) == 0:
        raise NoGoodPoint("no candidate points inside the first contour system")
    betas = _betas(f, domain, cand, c, d, config)
    score = np.abs(betas).min(axis=1)
    # compare against the size of the data, not of the betas, so that
    # extendible data (betas at rounding level everywhere) is rejected
    L = abs(domain.outer.center) + domain.outer.radius
    scale = max(float(np.abs(betas).max()), L * extend_H(f, domain, config).coefficient_norm(), 1e-300)
    best = int(np.argmax(score))
    if score[best] <= GOOD_FLOOR * scale or score[best] == 0:
        raise NoGoodPoint("every candidate has a vanishing boundary constant; enlarge the grid")
    beta = betas[best]
    gammas = 2 * np.pi * np.arange(angles) / angles
    rot = np.exp(1j * gammas)[:, None] * beta[None, :]
    if not domain.holes:
        # simply connected track: make A(a, f) real and positive (beta = -A)
        gscore = -rot[:, 0].real
    else:
        gscore = np.abs(rot.real).min(axis=1)
    g = int(np.argmax(gscore))
    if np.abs(rot[g].real).min() <= GOOD_FLOOR * scale:
        raise NoGoodPoint("no rotation makes every boundary constant have nonzero real part")
    return complex(cand[best]), float(gammas[g])


@dataclass
class Witness:
    a: complex
    gamma: float
    c: np.ndarray
    d: np.ndarray
    beta: np.ndarray
    F: HoloSeries
    G: HoloSeries
    h: HoloSeries
    numerator: HarmonicField  # H((Z-a) f_gamma); f~ = numerator / (z - a)
    phi: HarmonicField
    degree: DegreeResult | None = None
    re_w_residual: float = 0.0
    deflation_residual: float = 0.0

    def f_tilde(self, z):
        z = np.asarray(z, dtype=complex)
        return self.numerator.values(z) / (z - self.a)

    def psi(self, z):
        """f~ + h."""
        return self.f_tilde(z) + self.h(z)

    def W(self, z):
        z = np.asarray(z, dtype=complex)
        return self.numerator.values(z) - (z - self.a) * (self.F(z) + self.G(z))

    def to_dict(self) -> dict:
        def cvec(v):
            return [[complex(x).real, complex(x).imag] for x in np.atleast_1d(v)]

        return {
            "a": [self.a.real, self.a.imag],
            "gamma": self.gamma,
            "c": cvec(self.c),
            "d": cvec(self.d),
            "beta": cvec(self.beta),
            "F_a": self.F.to_dict(),
            "G_a": self.G.to_dict(),
            "h": self.h.to_dict(),
            "f_tilde_numerator": self.numerator.to_dict(),
            "phi_a": self.phi.to_dict(),
            "re_w_residual": self.re_w_residual,
            "deflation_residual": self.deflation_residual,
            "degree": None if self.degree is None else self.degree.to_dict(),
        }


def build_witness(f: BoundaryFunction, domain: CircleDomain, a: complex, gamma: float,
                  config: SolverConfig | None = None, schedule: ContourFamily | None = None,
                  probes: int = 1000) -> Witness:
    config = config or DEFAULT_CONFIG
    fg = f.rotated(gamma)
    H1 = extend_H(fg, domain, config)
    HZ = extend_HZ(fg, domain, config)
    numerator = HZ - H1 * a
    if domain.holes:
        c, d = cd_constants(fg, domain, config)
    else:
        c, d = np.zeros(0, dtype=complex), np.zeros(0, dtype=complex)
    phi, beta = phi_a(a, fg, domain, c, d, config)
    u = numerator + phi
    P, Q = split_PQ(u)
    scale = max(1.0, float(np.abs(beta).max()))
    ua = complex(P(a) + np.conj(Q(a)))
    if abs(ua) > DEFLATION_TOL * scale:
        raise DeflationResidual(f"u(a) = {ua:.3e} does not vanish")
    F = P.deflate(a)
    G = Q.deflate(a)
    h = -(F + G)
    w = Witness(complex(a), float(gamma), c, d, beta, F, G, h, numerator, phi,
                deflation_residual=abs(ua))

    z = interior_grid(domain, probes, margin=1e-3 * domain.outer.radius, seed=1)
    re_w = np.abs(w.W(z).real + phi.values(z).real).max()
    w.re_w_residual = float(re_w)
    if re_w > RE_W_TOL * scale:
        raise CertificateFailed(f"Re W + Re Phi_a = {re_w:.3e} at probes")

    w.degree = degree_near_boundary(domain, w.psi, schedule)
    if w.degree.degree != -1:
        raise DegreeNotMinusOne(f"witness degree is {w.degree.degree}, expected -1")
    return w


def verify_witness(w: Witness, domain: CircleDomain, schedule: ContourFamily | None = None) -> DegreeResult:
    """Recompute deg(f~ + h) on a fresh (finer-started) schedule."""
    if schedule is None:
        base = default_schedule()
        schedule = ContourFamily(domain, tuple(e * VERIFY_EPS_FACTOR for e in base))
    result = degree_near_boundary(domain, w.psi, schedule)
    cert = result.certificate
    if cert is None or cert.delta <= 0 or cert.systems < 3:
        raise CertificateFailed("bounded-away certificate missing or degenerate")
    if result.degree != -1:
        raise DegreeNotMinusOne(f"recomputed degree is {result.degree}, expected -1")
    return result


def witness_for(f: BoundaryFunction, domain: CircleDomain, config: SolverConfig | None = None,
                schedule: ContourFamily | None = None) -> Witness:
    eps0 = schedule.epsilon_schedule[0] if schedule is not None else None
    a, gamma = find_good_a_gamma(f, domain, config=config, eps0=eps0)
    return build_witness(f, domain, a, gamma, config, schedule)
