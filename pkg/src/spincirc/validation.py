"""Randomised invariant suites behind ``spincirc validate``."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysis import find_circulator_points, find_complete_routing, sweep
from .engine import closed_form_smatrix, smatrix
from .oracle import oracle_smatrix
from .params import ReducedParams, load_preset


def random_reduced(rng: np.random.Generator, backscatter: bool = False) -> ReducedParams:
    """Log-uniform rates in [1e3, 1e8] rad/s, signed shifts, chi in (0, 1e7]."""

    def rate():
        return float(10.0 ** rng.uniform(3.0, 8.0))

    def signed():
        return float(rng.choice([-1.0, 1.0])) * rate()

    chi = (lambda: float(1e7 * (1.0 - rng.random()))) if backscatter else (lambda: 0.0)
    return ReducedParams(
        gamma_a=rate(),
        gamma_b=rate(),
        j=rate(),
        delta_f1=signed(),
        delta_f2=signed(),
        chi_1=chi(),
        chi_2=chi(),
    )


def random_samples(n: int, seed: int, backscatter: bool = False) -> list[tuple[ReducedParams, float]]:
    """``n`` (parameters, detuning) pairs; detunings span twice the largest rate."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        rp = random_reduced(rng, backscatter)
        out.append((rp, float(rng.uniform(-2.0, 2.0) * rp.scale())))
    return out


def mirror_error(rp: ReducedParams, delta: float) -> float:
    t = np.abs(smatrix(rp, delta).entries) ** 2
    m = np.abs(smatrix(rp.mirrored(), -delta).entries) ** 2
    return float(np.abs(t - m).max())


def reversal_error(rp: ReducedParams, delta: float) -> float:
    t = np.abs(smatrix(rp, delta).entries) ** 2
    r = np.abs(smatrix(rp.mirrored(), delta).entries) ** 2
    return float(np.abs(t - r.T).max())


@dataclass(frozen=True)
class SuiteResult:
    name: str
    worst: float
    tolerance: float
    seconds: float

    @property
    def passed(self) -> bool:
        return bool(self.worst <= self.tolerance)


def _timed(name: str, tolerance: float, fn: Callable[[], float]) -> SuiteResult:
    start = time.perf_counter()
    worst = fn()
    return SuiteResult(name, float(worst), tolerance, time.perf_counter() - start)


def _unitarity(samples) -> float:
    worst = 0.0
    for rp, d in samples:
        s = smatrix(rp, d).entries
        worst = max(worst, np.abs(s.conj().T @ s - np.eye(4)).max())
    return worst


def _column_sums(samples) -> float:
    worst = 0.0
    for rp, d in samples:
        t = np.abs(smatrix(rp, d).entries) ** 2
        worst = max(worst, np.abs(t.sum(axis=0) - 1.0).max())
    return worst


def _pair_error(samples, a, b) -> float:
    return max(np.abs(a(rp, d).entries - b(rp, d).entries).max() for rp, d in samples)


def _forbidden(samples) -> float:
    worst = 0.0
    for rp, d in samples:
        s = smatrix(rp, d)
        worst = max(worst, *(abs(s.t(i, j)) for i, j in ((1, 1), (1, 4), (2, 2), (2, 3))))
    return worst


def _detector_mirror() -> float:
    """Largest detuning mismatch [rad/s] between fig2-b and its mirror image."""
    worst = 0.0
    for name in ("fig2-b", "fig3-counter"):
        p = load_preset(name)
        rp = p.reduced()
        a = find_circulator_points(rp, p.sweep_min, p.sweep_max, 0.5)
        b = find_circulator_points(rp.mirrored(), -p.sweep_max, -p.sweep_min, 0.5)
        b = sorted(b, key=lambda q: -q.delta)
        if len(a) != len(b) or any(x.direction is not y.direction for x, y in zip(a, b)):
            return float("inf")
        worst = max([worst] + [abs(x.delta + y.delta) for x, y in zip(a, b)])
    return worst


def _sweep_conservation() -> float:
    worst = 0.0
    for name in ("fig2-b", "fig3-counter", "fig4-b", "fig5"):
        p = load_preset(name)
        res = sweep(p.reduced(), p.sweep_min, p.sweep_max, 2001)
        worst = max(worst, np.abs(res.tables.sum(axis=1) - 1.0).max())
    return worst


def _routing() -> float:
    r = find_complete_routing(load_preset("fig3-counter").reduced())
    return 1.0 - r.min_cross


def run_validation(samples: int = 1000, seed: int = 42) -> list[SuiteResult]:
    plain = random_samples(samples, seed)
    back = random_samples(samples, seed + 1, backscatter=True)
    both = plain + back
    return [
        _timed("engine: unitarity", 1e-10, lambda: _unitarity(both)),
        _timed("engine: column sums", 1e-12, lambda: _column_sums(both)),
        _timed("engine: closed form == resolvent", 1e-12,
               lambda: _pair_error(plain, smatrix, closed_form_smatrix)),
        _timed("engine: forbidden amplitudes", 1e-12, lambda: _forbidden(plain)),
        _timed("engine: mirror symmetry", 1e-10,
               lambda: max(mirror_error(rp, d) for rp, d in both)),
        _timed("engine: transpose reversal", 1e-10,
               lambda: max(reversal_error(rp, d) for rp, d in both)),
        _timed("oracle: == resolvent (chi=0)", 1e-10,
               lambda: _pair_error(plain, smatrix, oracle_smatrix)),
        _timed("oracle: == resolvent (chi>0)", 1e-10,
               lambda: _pair_error(back, smatrix, oracle_smatrix)),
        _timed("oracle: unitarity", 1e-10,
               lambda: max(oracle_smatrix(rp, d).unitarity_error() for rp, d in both)),
        _timed("analysis: sweep conservation", 1e-10, _sweep_conservation),
        _timed("analysis: detector mirror [rad/s]", 10.0, _detector_mirror),
        _timed("analysis: complete routing leak", 1e-6, _routing),
    ]


def format_table(results: list[SuiteResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'suite':<{width}}  {'worst':>10}  {'tol':>8}  {'time[s]':>7}  result"]
    for r in results:
        lines.append(
            f"{r.name:<{width}}  {r.worst:10.3e}  {r.tolerance:8.1e}  {r.seconds:7.3f}  "
            f"{'PASS' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)
