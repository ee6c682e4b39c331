"""Detuning sweeps, circulator detection, complete routing and backscatter studies."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .engine import closed_form_amplitudes, single_resonator_batch, smatrix_batch
from .errors import ConvergenceError, ParameterError
from .params import ReducedParams

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

#: Refinement tolerance on detunings and shifts [rad/s].
REFINE_TOL = 1.0


class Direction(enum.Enum):
    """Port cycles a four-port circulator can realise, in tie-break order."""

    CW = (1, 2, 3, 4)
    CCW = (1, 4, 3, 2)
    POS8 = (1, 2, 4, 3)
    REV8 = (1, 3, 4, 2)

    @property
    def cycle(self) -> tuple[int, ...]:
        return self.value

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        c = self.value
        return tuple((c[k], c[(k + 1) % 4]) for k in range(4))

    def __str__(self) -> str:
        c = self.value
        return "->".join(str(p) for p in c + (c[0],))


_ORDER = {d: k for k, d in enumerate(Direction)}


def _edges(cycle) -> tuple[tuple[int, int], ...]:
    if isinstance(cycle, Direction):
        return cycle.edges
    if isinstance(cycle, Mapping):
        return tuple(cycle.items())
    c = tuple(cycle)
    if sorted(c) != [1, 2, 3, 4]:
        raise ValueError(f"cycle must visit ports 1..4 once, got {cycle!r}")
    return tuple((c[k], c[(k + 1) % 4]) for k in range(4))


def circulation_fidelity(t: np.ndarray, cycle) -> float:
    """Worst edge transmission ``min_i T_{i->pi(i)}`` of a port cycle.

    ``t`` is a 4x4 transmission table indexed ``[output - 1, input - 1]``.
    """
    t = np.asarray(t)
    return float(min(t[j - 1, i - 1] for i, j in _edges(cycle)))


def mean_fidelity(t: np.ndarray, cycle) -> float:
    t = np.asarray(t)
    return float(np.mean([t[j - 1, i - 1] for i, j in _edges(cycle)]))


def _fidelity_stack(tables: np.ndarray) -> np.ndarray:
    """Cycle fidelities for stacked tables, shape ``(N, 4)`` in Direction order."""
    cols = []
    for d in Direction:
        cols.append(np.min([tables[:, j - 1, i - 1] for i, j in d.edges], axis=0))
    return np.stack(cols, axis=1)


@dataclass(frozen=True, eq=False)
class SweepResult:
    deltas: np.ndarray
    tables: np.ndarray
    params: ReducedParams

    def __post_init__(self) -> None:
        if np.any(np.diff(self.deltas) <= 0):
            raise ValueError("sweep detunings must be strictly increasing")
        for arr in (self.deltas, self.tables):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.deltas)

    def column(self, i: int, j: int) -> np.ndarray:
        """``T_{i->j}`` along the sweep (1-based ports)."""
        return self.tables[:, j - 1, i - 1]


def _evaluate(rp: ReducedParams, deltas: np.ndarray, single: bool) -> np.ndarray:
    if single:
        return single_resonator_batch(rp.gamma_a, rp.gamma_b, rp.delta_f1, rp.chi_1, deltas)
    return smatrix_batch(rp, deltas)


def sweep(
    rp: ReducedParams,
    delta_min: float,
    delta_max: float,
    steps: int,
    *,
    single: bool = False,
    workers: int = 1,
) -> SweepResult:
    """Transmission tables on a uniform detuning grid including both ends.

    ``single=True`` evaluates the single-resonator model with ``gamma_a``,
    ``gamma_b``, ``delta_f1`` and ``chi_1``.  The grid is split into
    contiguous chunks when ``workers > 1`` and reassembled in order, so the
    result does not depend on the worker count.
    """
    if steps < 2:
        raise ParameterError(f"steps must be at least 2, got {steps!r}")
    if not delta_min < delta_max:
        raise ParameterError(f"delta_min ({delta_min!r}) must be below delta_max ({delta_max!r})")
    deltas = np.linspace(delta_min, delta_max, int(steps))
    chunks = np.array_split(deltas, max(1, min(int(workers), len(deltas))))
    if len(chunks) == 1:
        amps = [_evaluate(rp, deltas, single)]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            amps = list(pool.map(lambda c: _evaluate(rp, c, single), chunks))
    tables = np.abs(np.concatenate(amps)) ** 2
    return SweepResult(deltas, tables, rp)


def default_window(rp: ReducedParams) -> tuple[float, float]:
    """Symmetric detuning window wide enough to hold every resonance."""
    span = (
        abs(rp.delta_f1)
        + abs(rp.delta_f2)
        + abs(rp.j)
        + rp.chi_1
        + rp.chi_2
        + 5.0 * max(rp.gamma_a, rp.gamma_b)
    )
    return -1.5 * span, 1.5 * span


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float = REFINE_TOL
) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[a, b]`` to bracket width ``tol``.

    Returns the best point actually evaluated, including the interior
    probes, so the result never falls below any sampled value.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = (c, fc) if fc >= fd else (d, fd)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            if fc > best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            if fd > best[1]:
                best = (d, fd)
    return best


@dataclass(frozen=True)
class CirculatorPoint:
    delta: float
    direction: Direction
    fidelity: float
    mean_fidelity: float = float("nan")

    @property
    def cycle(self) -> tuple[int, ...]:
        return self.direction.cycle


def closed_form_points(rp: ReducedParams) -> list[tuple[float, Direction]]:
    """Analytic circulation frequencies without backscattering.

    Each coupled mode pair resonates where the real part of its pole
    condition vanishes:

        delta = center +/- sqrt(Gamma_a Gamma_b + J**2 + (dF1 + dF2)**2 / 4)

    with center ``(dF2 - dF1)/2`` for the f_CW/d_CCW pair (reverse figure
    eight, 1->3->4->2) and ``(dF1 - dF2)/2`` for the f_CCW/d_CW pair
    (positive figure eight, 1->2->4->3).  These are candidates: at finite
    decay the best-fidelity point sits slightly off them.
    """
    if rp.has_backscatter:
        raise ParameterError("closed-form circulation points require chi_1 = chi_2 = 0")
    root = math.sqrt(rp.gamma_a * rp.gamma_b + rp.j**2 + (rp.delta_f1 + rp.delta_f2) ** 2 / 4.0)
    half = (rp.delta_f2 - rp.delta_f1) / 2.0
    raw = [
        (half + root, Direction.REV8),
        (half - root, Direction.REV8),
        (-half + root, Direction.POS8),
        (-half - root, Direction.POS8),
    ]
    out: list[tuple[float, Direction]] = []
    for delta, direction in sorted(raw, key=lambda p: (p[0], _ORDER[p[1]])):
        if any(abs(delta - d) < 1.0 and direction is dd for d, dd in out):
            continue
        out.append((delta, direction))
    return out


def _best_fidelity(rp: ReducedParams, deltas: np.ndarray) -> np.ndarray:
    tables = np.abs(smatrix_batch(rp, deltas)) ** 2
    return _fidelity_stack(tables)


def find_circulator_points(
    rp: ReducedParams,
    delta_min: float,
    delta_max: float,
    threshold: float = 0.9,
    *,
    grid: int = 4096,
    tol: float = REFINE_TOL,
) -> list[CirculatorPoint]:
    """Local maxima of the best cycle fidelity at or above ``threshold``.

    The fidelity ``max_cycle min_edge T`` is sampled on a uniform grid; each
    interior local maximum is refined by golden-section search over its two
    neighbouring cells.  Points are ordered by detuning, then direction.
    """
    if not 0.0 < threshold <= 1.0:
        raise ParameterError(f"threshold must lie in (0, 1], got {threshold!r}")
    if not delta_min < delta_max:
        raise ParameterError("delta_min must be below delta_max")
    deltas = np.linspace(delta_min, delta_max, grid)
    best = _best_fidelity(rp, deltas).max(axis=1)

    def objective(x: float) -> float:
        return float(_best_fidelity(rp, np.array([x])).max())

    refined: list[float] = []
    for i in range(1, grid - 1):
        if not (best[i] >= best[i - 1] and best[i] > best[i + 1]) or best[i] <= 0.0:
            continue
        x, fx = golden_section_max(objective, deltas[i - 1], deltas[i + 1], tol)
        if fx < best[i]:
            x, fx = float(deltas[i]), float(best[i])
        if fx >= threshold and not any(abs(x - r) < 2 * tol for r in refined):
            refined.append(float(x))

    points: list[CirculatorPoint] = []
    for x in sorted(refined):
        table = np.abs(smatrix_batch(rp, [x])[0]) ** 2
        fids = {d: circulation_fidelity(table, d) for d in Direction}
        top = max(fids.values())
        for d in Direction:
            if top - fids[d] <= 1e-12:
                points.append(CirculatorPoint(x, d, fids[d], mean_fidelity(table, d)))
    return points


@dataclass(frozen=True)
class RoutingResult:
    """Outcome of the complete-routing search.

    ``shift_star`` is the common magnitude of the opposite Sagnac shifts
    (``delta_f1 = -delta_f2 = shift_star``) and ``delta_star`` the detuning
    at which every photon crosses to the other waveguide.
    """

    delta_star: float
    shift_star: float
    min_cross: float
    candidates: Mapping[str, float] = field(default_factory=dict)
    matched: tuple[str, ...] = ()

    def __iter__(self):
        return iter((self.delta_star, self.shift_star, self.min_cross))


ROUTING_PLUS = "sqrt(J^2 + Ga*Gb)"
ROUTING_MINUS = "sqrt(J^2 - Ga*Gb)"


def _same_waveguide_leak(rp: ReducedParams, shift, delta) -> np.ndarray:
    """``max(T12, T21, T34, T43)`` for opposite shifts ``+shift``/``-shift``.

    Without backscattering this equals one minus the worst cross-waveguide
    transmission, but keeps full relative precision near complete routing.
    """
    shifts, deltas = np.broadcast_arrays(
        np.asarray(shift, dtype=float), np.atleast_1d(np.asarray(delta, dtype=float))
    )
    flat_s, flat_d = shifts.ravel(), deltas.ravel()
    res = np.empty(flat_s.shape)
    # grouped by shift so the closed forms stay vectorised over delta
    for s in np.unique(flat_s):
        mask = flat_s == s
        amps = closed_form_amplitudes(
            replace(rp, delta_f1=float(s), delta_f2=-float(s)), flat_d[mask]
        )
        t = np.abs(amps) ** 2
        res[mask] = np.max([t[:, 1, 0], t[:, 0, 1], t[:, 3, 2], t[:, 2, 3]], axis=0)
    return res.reshape(shifts.shape)


def find_complete_routing(rp_template: ReducedParams, *, tol: float = 1e-6) -> RoutingResult:
    """Search opposite spins and detuning for perfect cross-waveguide routing.

    Maximises ``min(T13, T24, T31, T42)`` over ``delta_f1 = -delta_f2`` and
    ``delta``, with ``delta`` kept between the two pair centres
    ``-shift..+shift`` (static resonators also route completely, at
    ``delta = +/-sqrt(J**2 - Ga Gb)``, which is not the point sought).  A coarse two-dimensional scan brackets the optimum, then a
    golden-section search over the shift wraps an inner golden-section search
    over the detuning.  The optimum is compared with both analytic
    candidates ``sqrt(J**2 + Ga Gb)`` and ``sqrt(J**2 - Ga Gb)``.
    """
    rp = rp_template
    if rp.has_backscatter:
        raise ParameterError("complete-routing search requires chi_1 = chi_2 = 0")
    if rp.gamma_a != rp.gamma_b:
        raise ParameterError("complete-routing search requires gamma_a == gamma_b")

    gg = rp.gamma_a * rp.gamma_b
    shift_hi = 2.0 * math.sqrt(rp.j**2 + gg) + rp.gamma_a
    shifts = np.linspace(0.0, shift_hi, 257)[1:]
    unit = np.linspace(-1.0, 1.0, 513)

    def inner(shift: float) -> tuple[float, float]:
        # detuning confined between the two pair centres, -shift..+shift
        deltas = shift * unit
        leak = _same_waveguide_leak(rp, shift, deltas)
        k = int(np.argmin(leak))
        lo, hi = deltas[max(k - 1, 0)], deltas[min(k + 1, len(deltas) - 1)]
        x, neg = golden_section_max(
            lambda d: -float(_same_waveguide_leak(rp, shift, d)[0]), lo, hi, tol
        )
        if -neg > leak[k]:
            return float(deltas[k]), float(leak[k])
        return x, -neg

    coarse = np.array([inner(s)[1] for s in shifts])
    k = int(np.argmin(coarse))
    lo, hi = shifts[max(k - 1, 0)], shifts[min(k + 1, len(shifts) - 1)]
    shift_star, _ = golden_section_max(lambda s: -inner(s)[1], lo, hi, tol)
    delta_star, _ = inner(shift_star)

    amps = smatrix_batch(replace(rp, delta_f1=shift_star, delta_f2=-shift_star), [delta_star])[0]
    t = np.abs(amps) ** 2
    min_cross = float(min(t[2, 0], t[3, 1], t[0, 2], t[1, 3]))

    candidates = {
        ROUTING_PLUS: math.sqrt(rp.j**2 + gg),
        ROUTING_MINUS: math.sqrt(rp.j**2 - gg) if rp.j**2 >= gg else float("nan"),
    }
    matched = tuple(
        name for name, value in candidates.items() if abs(shift_star - value) < REFINE_TOL
    )
    result = RoutingResult(float(delta_star), float(shift_star), min_cross, candidates, matched)
    if min_cross < 0.999:
        raise ConvergenceError(
            f"complete routing not reached: min cross transmission {min_cross:.6f} "
            f"at shift={shift_star!r}, delta={delta_star!r}"
        )
    return result


@dataclass(frozen=True)
class RobustnessReport:
    label: str
    peak: float
    location: float
    centroid: float = float("nan")


def backscatter_report(
    scenarios: Sequence[tuple[str, ReducedParams]],
    delta_min: float,
    delta_max: float,
    *,
    grid: int = 4096,
    tol: float = REFINE_TOL,
) -> list[RobustnessReport]:
    """Peak of ``T_{1->3}`` for each scenario, refined to ``tol``.

    ``centroid`` is the first moment of the ``T_{1->3}`` spectrum on the
    grid; it tracks where rotation pushes the transmission band.
    """
    scenarios = list(scenarios)
    if not scenarios:
        raise ParameterError("at least one scenario is required")
    deltas = np.linspace(delta_min, delta_max, grid)
    reports = []
    for label, rp in scenarios:
        t13 = np.abs(smatrix_batch(rp, deltas)[:, 2, 0]) ** 2
        k = int(np.argmax(t13))
        lo, hi = deltas[max(k - 1, 0)], deltas[min(k + 1, grid - 1)]
        x, fx = golden_section_max(
            lambda d: float(np.abs(smatrix_batch(rp, [d])[0, 2, 0]) ** 2), lo, hi, tol
        )
        if fx < t13[k]:
            x, fx = float(deltas[k]), float(t13[k])
        centroid = float(np.sum(deltas * t13) / np.sum(t13))
        reports.append(RobustnessReport(label, float(fx), float(x), centroid))
    return reports


def max_reciprocity_gap(result: SweepResult) -> float:
    """``max |T_{1->2} - T_{2->1}|`` along a sweep."""
    return float(np.max(np.abs(result.column(1, 2) - result.column(2, 1))))
