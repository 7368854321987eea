"""Argument change along contours and the degree near the boundary."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EpsilonTooLarge, NonConvergent, Unstable, ZeroOnContour
from .geometry import CircleDomain, Contour, ContourFamily, exhausting_contours

INITIAL_SAMPLES = 256
MAX_DEPTH = 24
RELATIVE_FLOOR = 1e-7
PHASE_STEP = np.pi / 2
LOW_MODULUS_STEP = np.pi / 8
QUANTIZATION_TOL = 1e-6
AGREEMENT = 3

Sampler = Callable[[np.ndarray], np.ndarray]


@dataclass
class WindingTrace:
    t: np.ndarray
    values: np.ndarray
    floor: float

    @property
    def steps(self) -> np.ndarray:
        return np.angle(self.values[1:] / self.values[:-1])

    @property
    def phase(self) -> np.ndarray:
        """Unwrapped phase, starting from the principal argument of the first value."""
        return np.angle(self.values[0]) + np.concatenate([[0.0], np.cumsum(self.steps)])

    @property
    def total(self) -> float:
        return float(np.sum(self.steps))

    @property
    def min_modulus(self) -> float:
        return float(np.abs(self.values).min())

    @property
    def max_step(self) -> float:
        return float(np.abs(self.steps).max())

    def rows(self):
        ph = self.phase
        return [(float(t), float(v.real), float(v.imag), float(p))
                for t, v, p in zip(self.t, self.values, ph)]


def _check(values: np.ndarray, floor: float):
    mod = np.abs(values)
    if not np.all(np.isfinite(mod)):
        raise ZeroOnContour("psi is not finite on the contour")
    if np.any(mod < floor) or np.any(mod == 0):
        raise ZeroOnContour(f"|psi| = {mod.min():.3e} below floor {floor:.3e}")


def trace_path(points: Callable[[np.ndarray], np.ndarray], psi: Sampler,
               floor: float | None = None, closed: bool = True,
               initial: int = INITIAL_SAMPLES, max_depth: int = MAX_DEPTH) -> WindingTrace:
    """Sample psi along a path t in [0, 1] with adaptive bisection.

    An interval is bisected again while the phase jump over either half
    exceeds pi/2, or while |psi| at its midpoint is below 4*floor and the
    jump still exceeds pi/8.
    """
    t = np.linspace(0.0, 1.0, initial + 1)
    v = np.asarray(psi(points(t)), dtype=complex)
    if closed:
        v[-1] = v[0]
    if floor is None:
        sup = np.abs(v[np.isfinite(v)]).max(initial=0.0)
        floor = RELATIVE_FLOOR * sup
    _check(v, floor)
    active = np.ones(len(t) - 1, dtype=bool)
    for _ in range(max_depth + 1):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            return WindingTrace(t, v, floor)
        tm = 0.5 * (t[idx] + t[idx + 1])
        vm = np.asarray(psi(points(tm)), dtype=complex)
        _check(vm, floor)
        left = np.abs(np.angle(vm / v[idx]))
        right = np.abs(np.angle(v[idx + 1] / vm))
        jump = np.maximum(left, right)
        split = (jump > PHASE_STEP) | ((np.abs(vm) < 4 * floor) & (jump > LOW_MODULUS_STEP))
        t = np.insert(t, idx + 1, tm)
        v = np.insert(v, idx + 1, vm)
        new_active = np.zeros(len(t) - 1, dtype=bool)
        # interval i of the old grid maps to i + (number of insertions before it)
        shift = np.arange(len(idx))
        new_active[idx + shift] = split
        new_active[idx + shift + 1] = split
        active = new_active
    raise NonConvergent(f"phase refinement exceeded depth {max_depth}")


def arg_change(contour: Contour, psi: Sampler, floor: float | None = None,
               initial: int = INITIAL_SAMPLES) -> float:
    """Continuous change of arg psi over one traversal of the oriented contour."""
    trace = trace_path(contour.points, psi, floor, closed=True, initial=initial)
    total = trace.total
    k = round(total / (2 * np.pi))
    assert abs(total - 2 * np.pi * k) <= QUANTIZATION_TOL, "closed contour winding not quantized"
    return total


@dataclass
class BoundedAwayCertificate:
    delta: float
    epsilon: float
    systems: int


@dataclass
class DegreeResult:
    degree: int
    epsilon_used: float
    min_modulus: float
    max_arg_step: float
    stabilization: list = field(default_factory=list)
    certificate: BoundedAwayCertificate | None = None
    arg_total: float = 0.0

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "epsilon_used": self.epsilon_used,
            "min_modulus": self.min_modulus,
            "max_arg_step": self.max_arg_step,
            "arg_total": self.arg_total,
            "stabilization": [{"epsilon": e, "winding": w} for e, w in self.stabilization],
            "certificate": None if self.certificate is None else {
                "delta": self.certificate.delta,
                "epsilon": self.certificate.epsilon,
                "systems": self.certificate.systems,
            },
        }


def system_traces(contours: Sequence[Contour], psi: Sampler, floor: float | None = None,
                  initial: int = INITIAL_SAMPLES) -> list[WindingTrace]:
    return [trace_path(c.points, psi, floor, closed=True, initial=initial) for c in contours]


def degree_near_boundary(domain: CircleDomain, psi: Sampler, schedule: ContourFamily | None = None,
                         floor: float | None = None, initial: int = INITIAL_SAMPLES) -> DegreeResult:
    """Winding sum over the exhausting contour systems until three agree in a row.

    Systems whose epsilon is too large for the geometry are skipped; a system
    on which psi (nearly) vanishes breaks the current run of agreement.
    """
    schedule = schedule or ContourFamily(domain)
    records: list[tuple[float, float | None]] = []
    run: list[tuple[float, list[WindingTrace]]] = []
    last_zero: ZeroOnContour | None = None
    for eps in schedule.epsilon_schedule:
        try:
            contours = exhausting_contours(domain, eps)
        except EpsilonTooLarge:
            continue
        try:
            traces = system_traces(contours, psi, floor, initial)
        except ZeroOnContour as exc:
            last_zero = exc
            records.append((eps, None))
            run = []
            continue
        total = sum(tr.total for tr in traces)
        winding = total / (2 * np.pi)
        records.append((eps, winding))
        if run and round(winding) != round(sum(tr.total for tr in run[-1][1]) / (2 * np.pi)):
            run = []
        run.append((eps, traces))
        if len(run) == AGREEMENT:
            all_traces = [tr for _, trs in run for tr in trs]
            delta = min(tr.min_modulus for tr in all_traces)
            return DegreeResult(
                degree=int(round(winding)),
                epsilon_used=eps,
                min_modulus=delta,
                max_arg_step=max(tr.max_step for tr in all_traces),
                stabilization=records,
                certificate=BoundedAwayCertificate(delta, run[0][0], len(run)),
                arg_total=total,
            )
    if last_zero is not None and (not records or records[-1][1] is None):
        raise last_zero
    raise Unstable(f"no {AGREEMENT} consecutive contour systems agree: {records}")


def zero_count(g: Sampler, domain: CircleDomain, schedule: ContourFamily | None = None) -> int:
    """Zeros of a holomorphic g in the exhausted subdomain (argument principle)."""
    return degree_near_boundary(domain, g, schedule).degree
