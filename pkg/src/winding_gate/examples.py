"""The two degenerate-boundary counterexamples: the slit disc and the
punctured disc.

Neither domain is a circle domain, so everything here is contour arithmetic:
the degree is the argument change of f~ + h along an explicit Jordan contour
that hugs the boundary, divided by 2 pi.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .degree import WindingTrace, trace_path
from .errors import CertificateFailed, InputError, NegativeDegree, Unstable, ZeroOnContour
from .expr import Node, parse_expression

TWO_PI = 2 * np.pi
ROOT_MARGIN = 1e-3
SLIT_CLEARANCE = 1e-3


# -- slit disc ----------------------------------------------------------------

def slit_extension(epsilon_slit: float = 0.15, power: int = 1) -> Callable:
    """f~(z) = z + (1 - z) * max(0, 1 - dist(z, [0, 1]) / eps) ** power.

    Equals z on the unit circle away from 1 and 1 on the slit. ``power = 2``
    gives the second extension used to check independence of the choice.
    """
    if not 0 < epsilon_slit < 0.2:
        raise InputError(f"epsilon_slit must lie in (0, 0.2), got {epsilon_slit}")

    def f_tilde(z):
        z = np.asarray(z, dtype=complex)
        x = np.clip(z.real, 0.0, 1.0)
        dist = np.abs(z - x)
        w = np.maximum(0.0, 1.0 - dist / epsilon_slit) ** power
        return z + (1 - z) * w

    return f_tilde


def _slit_pieces(r: float):
    """Positively oriented boundary of the disc minus the r-neighbourhood of [0, 1]."""
    x1 = np.sqrt(1 - r * r)
    th1 = np.arcsin(r)
    return [
        lambda t: np.exp(1j * (th1 + t * (TWO_PI - 2 * th1))),       # outer arc
        lambda t: (x1 - t * x1) - 1j * r,                             # lower side, right to left
        lambda t: r * np.exp(1j * (-np.pi / 2 - t * np.pi)),          # cap around 0, clockwise
        lambda t: t * x1 + 1j * r,                                     # upper side, left to right
    ]


def slit_traces(psi, r: float) -> list[WindingTrace]:
    # one floor for the whole contour, taken from a coarse scan of every piece
    t = np.linspace(0, 1, 257)
    sup = max(float(np.abs(psi(p(t))).max()) for p in _slit_pieces(r))
    floor = 1e-7 * sup
    return [trace_path(p, psi, floor, closed=False) for p in _slit_pieces(r)]


def slit_winding(psi, r: float) -> float:
    return sum(tr.total for tr in slit_traces(psi, r)) / TWO_PI


def _slit_band(r: float, nx: int = 2001, ny: int = 41) -> np.ndarray:
    """Sample points of the closed r-neighbourhood of [0, 1] inside the closed disc."""
    x = np.linspace(0, 1, nx)
    y = np.linspace(-r, r, ny)
    z = (x[:, None] + 1j * y[None, :]).ravel()
    rad, ang = np.meshgrid(np.linspace(0, r, ny // 2 + 1), np.linspace(np.pi / 2, 3 * np.pi / 2, ny))
    z = np.concatenate([z, (rad * np.exp(1j * ang)).ravel()])
    return z[np.abs(z) <= 1]


def slit_neighbourhood(psi, r: float, max_halvings: int = 12) -> float:
    """Largest r / 2^k on whose slit band |psi| stays above half its value at
    the nearest slit point.

    This is the sampled form of "bounded away from zero near the boundary":
    once it holds, the contour at r and every smaller one enclose the same
    zeros, so the winding no longer depends on r. Comparing pointwise with
    the slit value (rather than with the slit minimum) tolerates data that
    vanish at the pinch point z = 1, which is a boundary point.
    """
    x = np.linspace(0, 1, 4001)[:-1]
    if np.any(np.abs(psi(x + 0j)) == 0):
        raise ZeroOnContour("f~ + h vanishes on the slit")
    for _ in range(max_halvings + 1):
        z = _slit_band(r)
        near = np.clip(z.real, 0.0, 1.0) + 0j
        if np.all(np.abs(psi(z)) >= 0.5 * np.abs(psi(near))):
            return r
        r /= 2
    raise Unstable("f~ + h is not bounded away from zero near the slit")


def slit_degree(h, r: float = 0.05, epsilon_slit: float = 0.15, power: int = 1) -> int:
    """Degree of f~ + h near the boundary of the slit disc.

    r is first reduced until f~ + h is bounded away from zero on the slit
    band, then the winding is computed at r, r/2 and r/4 and must agree.
    """
    if not 0 < r < epsilon_slit:
        raise InputError(f"r must lie in (0, epsilon_slit), got {r}")
    f_tilde = slit_extension(epsilon_slit, power)
    h = _as_function(h)

    def psi(z):
        return f_tilde(z) + h(z)

    r = slit_neighbourhood(psi, r)
    windings = [slit_winding(psi, r / 2 ** k) for k in range(3)]
    degrees = {round(w) for w in windings}
    if len(degrees) != 1 or max(abs(w - round(w)) for w in windings) > 1e-6:
        raise Unstable(f"slit windings do not stabilize: {windings}")
    return degrees.pop()


def slit_root_count(coefficients) -> int:
    """Zeros of z + h(z) in the open unit disc for polynomial h (ascending coefficients)."""
    c = np.zeros(max(len(coefficients), 2), dtype=complex)
    c[: len(coefficients)] = coefficients
    c[1] += 1
    c = np.trim_zeros(c[::-1], "f")
    if len(c) <= 1:
        return 0
    return int(np.sum(np.abs(np.roots(c)) < 1))


def slit_certified(coefficients) -> bool:
    """No zero of z + h near the circle and 1 + h bounded away from 0 on the slit."""
    c = np.zeros(max(len(coefficients), 2), dtype=complex)
    c[: len(coefficients)] = coefficients
    c[1] += 1
    c = np.trim_zeros(c[::-1], "f")
    if len(c) > 1 and np.any(np.abs(np.abs(np.roots(c)) - 1) < ROOT_MARGIN):
        return False
    x = np.linspace(0, 1, 2001)
    on_slit = 1 + np.polyval(np.asarray(coefficients, dtype=complex)[::-1], x)
    return bool(np.abs(on_slit[:-1]).min() > SLIT_CLEARANCE)


@dataclass(frozen=True)
class Polynomial:
    coefficients: tuple

    def __call__(self, z):
        return np.polyval(np.asarray(self.coefficients, dtype=complex)[::-1], np.asarray(z, dtype=complex))

    def label(self) -> str:
        return " + ".join(f"({c.real:.6g}{c.imag:+.6g}i)*z^{k}" for k, c in enumerate(self.coefficients))


# -- punctured disc -----------------------------------------------------------

@dataclass(frozen=True)
class Laurent:
    """Finite Laurent polynomial sum_k c_k z^k with k from ``low``."""

    low: int
    coefficients: tuple

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        c = np.asarray(self.coefficients, dtype=complex)
        return np.polyval(c[::-1], z) * z ** float(self.low) if self.low else np.polyval(c[::-1], z)

    @property
    def pole_order(self) -> int:
        return max(0, -self.low)

    def label(self) -> str:
        return " + ".join(f"({c.real:.6g}{c.imag:+.6g}i)*z^{k}"
                          for k, c in enumerate(self.coefficients, start=self.low) if c != 0) or "0"

    @classmethod
    def from_expression(cls, text: str, K: int = 16) -> "Laurent":
        """Laurent coefficients of an expression about 0 by FFT on the unit circle.

        The result is validated at radii 0.5 and 2, which rejects expressions
        that are not finite Laurent polynomials of order <= K (conj, poles
        away from 0, high powers).
        """
        node = parse_expression(text)
        M = 4 * K
        z = np.exp(TWO_PI * 1j * np.arange(M) / M)
        coef = np.fft.fft(np.broadcast_to(node(z), z.shape)) / M
        ks = np.concatenate([np.arange(0, K + 1), np.arange(-K, 0)])
        vals = np.concatenate([coef[: K + 1], coef[M - K:]])
        scale = max(1.0, float(np.abs(vals).max()))
        keep = np.abs(vals) > 1e-12 * scale
        vals = np.where(keep, vals, 0)
        low = int(ks[keep].min()) if keep.any() else 0
        high = int(ks[keep].max()) if keep.any() else 0
        dense = np.zeros(high - low + 1, dtype=complex)
        for k, v in zip(ks, vals):
            if v != 0:
                dense[k - low] = v
        dense = np.where(np.abs(dense.imag) < 1e-14 * scale, dense.real, dense)
        dense = np.where(np.abs(dense.real) < 1e-14 * scale, 1j * dense.imag, dense)
        out = cls(low, tuple(complex(v) for v in dense))
        for radius in (0.5, 2.0):
            w = radius * z
            ref = np.broadcast_to(node(w), w.shape)
            if np.abs(out(w) - ref).max() > 1e-8 * max(1.0, float(np.abs(ref).max())):
                raise InputError(f"'{text}' is not a Laurent polynomial about 0 of order <= {K}")
        return out


def punctured_extension(z):
    """f~(z) = 1 - |z|: 0 on the circle, 1 at the puncture."""
    return 1 - np.abs(np.asarray(z, dtype=complex))


def _circle(radius: float):
    return lambda t: radius * np.exp(TWO_PI * 1j * t)


def _winding(points, psi) -> tuple[int, WindingTrace]:
    tr = trace_path(points, psi, closed=True)
    w = tr.total / TWO_PI
    if abs(w - round(w)) > 1e-6:
        raise Unstable(f"winding {w} is not an integer")
    return int(round(w)), tr


@dataclass
class PuncturedDiscCase:
    h: Laurent
    R: float = 0.95
    rho: float = 0.01
    samples: int = 2048

    def __post_init__(self):
        if not 0 < self.rho < self.R < 1:
            raise InputError(f"need 0 < rho < R < 1, got rho={self.rho}, R={self.R}")

    def certify(self, radii: int = 64) -> tuple[float, float]:
        """Margins of the two homotopy conditions; both must be positive.

        On |z| = s, |(f~ + h) - h| = 1 - s, so |h| > 1 - s keeps the
        straight-line homotopy to h away from 0; near 0, |(f~ + h) - (h + 1)|
        = s and |h + 1| > s does the same. Checking every sampled s in
        [R, 1) and (0, rho] (not only s = R and s = rho) makes f~ + h bounded
        away from zero on both boundary bands, so the windings do not depend
        on the choice of R and rho.
        """
        t = np.arange(self.samples) / self.samples
        e = np.exp(TWO_PI * 1j * t)
        outer = min(float(np.abs(self.h(s * e)).min()) - (1 - s)
                    for s in np.linspace(self.R, 1, radii, endpoint=False))
        inner = min(float(np.abs(self.h(s * e) + 1).min()) - s
                    for s in np.linspace(self.rho, 0, radii, endpoint=False))
        if outer <= 0 or inner <= 0:
            raise CertificateFailed(
                f"homotopy certificate fails: |h| - (1-|z|) = {outer:.3e} near the circle, "
                f"|h+1| - |z| = {inner:.3e} near the puncture")
        return outer, inner


@dataclass
class PuncturedResult:
    degree: int
    V_R: int
    V_rho: int
    margins: tuple
    traces: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "V_R": self.V_R, "V_rho": self.V_rho,
                "certificate_margins": list(self.margins)}


def punctured_degree(case: PuncturedDiscCase, extension=punctured_extension) -> PuncturedResult:
    margins = case.certify()

    def psi(z):
        return extension(z) + case.h(z)

    V_R, tr_R = _winding(_circle(case.R), psi)
    V_rho, tr_rho = _winding(_circle(case.rho), psi)
    H_R, _ = _winding(_circle(case.R), case.h)
    H_rho, _ = _winding(_circle(case.rho), lambda z: case.h(z) + 1)
    if (V_R, V_rho) != (H_R, H_rho):
        raise CertificateFailed(
            f"direct windings ({V_R}, {V_rho}) disagree with homotopy replacement ({H_R}, {H_rho})")
    return PuncturedResult(V_R - V_rho, V_R, V_rho, margins, {"R": tr_R, "rho": tr_rho})


def punctured_oracle(h: Laurent, R: float, rho: float) -> int:
    """Root count oracle for punctured_degree.

    The winding of a Laurent polynomial q with pole order K on a circle is
    the number of roots of z^K q inside it, minus K.
    """
    K = h.pole_order
    top = h.low + len(h.coefficients) - 1
    base = np.zeros(max(top, 0) + K + 1, dtype=complex)  # ascending powers of z^K h
    for k, c in enumerate(h.coefficients, start=h.low):
        base[k + K] += c
    plus = base.copy()
    plus[K] += 1

    def inside(ascending, radius):
        c = np.trim_zeros(ascending[::-1], "f")
        return int(np.sum(np.abs(np.roots(c)) < radius)) if len(c) > 1 else 0

    return (inside(base, R) - K) - (inside(plus, rho) - K)


# -- sweeps -------------------------------------------------------------------

def _as_function(h):
    if isinstance(h, str):
        return parse_expression(h)
    if isinstance(h, Node) or callable(h):
        return h
    return Polynomial(tuple(complex(c) for c in np.atleast_1d(h)))


@dataclass
class SweepReport:
    kind: str
    entries: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def degrees(self) -> list[int]:
        return [e["degree"] for e in self.entries]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "entries": self.entries, "skipped": self.skipped}


def random_polynomials(rng: np.random.Generator, count: int, max_degree: int = 4) -> list[Polynomial]:
    out = []
    for _ in range(count):
        deg = int(rng.integers(0, max_degree + 1))
        c = (rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)) * 1.5
        out.append(Polynomial(tuple(complex(v) for v in c)))
    return out


def random_laurents(rng: np.random.Generator, count: int, max_order: int = 3) -> list[Laurent]:
    out = []
    for _ in range(count):
        low = -int(rng.integers(0, max_order + 1))
        high = int(rng.integers(0, max_order + 1))
        c = rng.normal(size=high - low + 1) + 1j * rng.normal(size=high - low + 1)
        out.append(Laurent(low, tuple(complex(v) for v in c)))
    return out


def nonnegativity_sweep(family, kind: str, r: float = 0.05, R: float = 0.95,
                        rho: float = 0.01) -> SweepReport:
    """Degrees across a family of h; a negative degree raises NegativeDegree.

    kind "slit" takes polynomials (Polynomial or coefficient lists) and also
    records the root-count oracle; kind "puncture" takes Laurent objects.
    Uncertifiable members are listed as skipped.
    """
    if kind not in ("slit", "puncture"):
        raise InputError(f"unknown sweep kind {kind!r}")
    report = SweepReport(kind)
    for h in family:
        label = h.label() if hasattr(h, "label") else repr(h)
        try:
            if kind == "slit":
                p = h if isinstance(h, Polynomial) else Polynomial(tuple(complex(c) for c in h))
                if not slit_certified(p.coefficients):
                    report.skipped.append({"h": label, "reason": "not certified"})
                    continue
                deg = slit_degree(p, r)
                entry = {"h": label, "degree": deg, "oracle": slit_root_count(p.coefficients)}
            else:
                res = punctured_degree(PuncturedDiscCase(h, R, rho))
                deg = res.degree
                entry = {"h": label, "degree": deg, "V_R": res.V_R, "V_rho": res.V_rho,
                         "oracle": punctured_oracle(h, R, rho)}
        except (CertificateFailed, ZeroOnContour, Unstable) as exc:
            report.skipped.append({"h": label, "reason": f"{type(exc).__name__}: {exc}"})
            continue
        if deg < 0:
            raise NegativeDegree(f"degree {deg} < 0 for h = {label}")
        report.entries.append(entry)
    return report
