"""Four-port scattering matrices of the two-resonator, two-waveguide circulator.

Port geometry
-------------
Ports 1 and 2 are the left and right ends of waveguide a, ports 4 and 3 the
left and right ends of waveguide b.  A photon entering port 1 is a right
mover on waveguide a; it can leave through port 2 (right mover, a), port 1
(left mover, a), port 3 (right mover, b) or port 4 (left mover, b).  In the
coupling Hamiltonian the a-waveguide right (left) mover talks to the CW (CCW)
mode of resonator f, and the b-waveguide left (right) mover to the CW (CCW)
mode of resonator d, which fixes the port to mode maps below.

Matrix convention: ``entries[j - 1, i - 1]`` is the amplitude ``t_{i->j}``
for a photon injected at port ``i`` and collected at port ``j``, so columns
are indexed by the input port.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SingularResolventError
from .params import ReducedParams

#: Condition number above which the resolvent is declared singular.
MAX_CONDITION = 1e12


class ModeIndex(enum.IntEnum):
    F_CW = 0
    F_CCW = 1
    D_CW = 2
    D_CCW = 3


#: Mode fed by a photon entering port p (1-based).
INPUT_MODE = {1: ModeIndex.F_CW, 2: ModeIndex.F_CCW, 3: ModeIndex.D_CW, 4: ModeIndex.D_CCW}
#: Mode radiating into outgoing port p (1-based).
OUTPUT_MODE = {1: ModeIndex.F_CCW, 2: ModeIndex.F_CW, 3: ModeIndex.D_CCW, 4: ModeIndex.D_CW}

# Direct (resonator-free) path: 1->2, 2->1, 3->4, 4->3.
_DIRECT = np.zeros((4, 4))
_DIRECT[1, 0] = _DIRECT[0, 1] = _DIRECT[3, 2] = _DIRECT[2, 3] = 1.0
_DIRECT.setflags(write=False)


@dataclass(frozen=True, eq=False)
class SMatrix:
    """Complex 4x4 port-to-port amplitudes at one detuning ``delta`` [rad/s]."""

    entries: np.ndarray
    delta: float

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=complex)
        if arr.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def t(self, i: int, j: int) -> complex:
        """Amplitude for input port ``i`` to output port ``j`` (1-based)."""
        return complex(self.entries[j - 1, i - 1])

    @property
    def transmission(self) -> np.ndarray:
        return transmission(self)

    def unitarity_error(self) -> float:
        s = self.entries
        return float(np.abs(s.conj().T @ s - np.eye(4)).max())


def transmission(s: SMatrix | np.ndarray) -> np.ndarray:
    """Entrywise ``|t|**2``; same (output, input) orientation as the amplitudes."""
    entries = s.entries if isinstance(s, SMatrix) else np.asarray(s)
    return np.abs(entries) ** 2


def effective_hamiltonian(rp: ReducedParams) -> np.ndarray:
    """Non-Hermitian mode matrix in the detuning frame.

    Row/column order follows :class:`ModeIndex`.  The CW (CCW) mode of each
    resonator sits at ``-Delta_F`` (``+Delta_F``) and decays at the rate of
    its waveguide.  The result is complex symmetric.
    """
    m = np.diag(
        [
            -rp.delta_f1 - 1j * rp.gamma_a,
            rp.delta_f1 - 1j * rp.gamma_a,
            -rp.delta_f2 - 1j * rp.gamma_b,
            rp.delta_f2 - 1j * rp.gamma_b,
        ]
    )
    f_cw, f_ccw, d_cw, d_ccw = ModeIndex
    m[f_cw, f_ccw] = m[f_ccw, f_cw] = rp.chi_1
    m[d_cw, d_ccw] = m[d_ccw, d_cw] = rp.chi_2
    m[f_cw, d_ccw] = m[d_ccw, f_cw] = rp.j
    m[f_ccw, d_cw] = m[d_cw, f_ccw] = rp.j
    return m


def _port_couplings(rate_per_mode: np.ndarray, input_mode, output_mode):
    k_in = np.zeros((4, len(rate_per_mode)))
    k_out = np.zeros((4, len(rate_per_mode)))
    for port in range(1, 5):
        k_in[port - 1, input_mode[port]] = np.sqrt(2.0 * rate_per_mode[input_mode[port]])
        k_out[port - 1, output_mode[port]] = np.sqrt(2.0 * rate_per_mode[output_mode[port]])
    return k_in, k_out


def _resolvent_smatrix(m, k_in, k_out, deltas) -> np.ndarray:
    """``C - i K_out (delta - M)^-1 K_in^T`` for a 1-D array of detunings."""
    deltas = np.asarray(deltas, dtype=float)
    n = m.shape[0]
    a = deltas[:, None, None] * np.eye(n) - m
    cond = np.linalg.cond(a)
    bad = ~(cond <= MAX_CONDITION)
    if bad.any():
        k = int(np.argmax(bad))
        raise SingularResolventError(float(deltas[k]), float(cond[k]))
    x = np.linalg.solve(a, np.broadcast_to(k_in.T.astype(complex), (len(deltas), n, 4)))
    return _DIRECT - 1j * (k_out @ x)


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not np.isfinite(delta):
        raise ParameterError(f"detuning must be finite, got {delta!r}")
    return delta


def _pair_couplings(rp: ReducedParams):
    rates = np.array([rp.gamma_a, rp.gamma_a, rp.gamma_b, rp.gamma_b])
    return _port_couplings(rates, INPUT_MODE, OUTPUT_MODE)


def smatrix_batch(rp: ReducedParams, deltas) -> np.ndarray:
    """Resolvent S-matrices stacked along the first axis, shape ``(N, 4, 4)``."""
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    if not np.all(np.isfinite(deltas)):
        raise ParameterError("detunings must be finite")
    k_in, k_out = _pair_couplings(rp)
    return _resolvent_smatrix(effective_hamiltonian(rp), k_in, k_out, deltas)


def smatrix(rp: ReducedParams, delta: float) -> SMatrix:
    """Scattering matrix from the resolvent of the effective Hamiltonian.

    Valid for any backscattering strength; at ``chi = 0`` it coincides with
    :func:`closed_form_smatrix`.
    """
    delta = _check_delta(delta)
    return SMatrix(smatrix_batch(rp, [delta])[0], delta)


def closed_form_amplitudes(rp: ReducedParams, deltas) -> np.ndarray:
    """Analytic amplitudes without backscattering, shape ``(N, 4, 4)``.

    Modes f_CW and d_CCW form one coupled pair (ports 1 and 4 in, 2 and 3
    out), f_CCW and d_CW the other (ports 2 and 3 in, 1 and 4 out).
    """
    if rp.has_backscatter:
        raise ParameterError("closed-form amplitudes require chi_1 = chi_2 = 0")
    d = np.atleast_1d(np.asarray(deltas, dtype=float))
    ga, gb, j = rp.gamma_a, rp.gamma_b, rp.j
    cross = -2j * np.sqrt(ga * gb) * j

    # pair f_CW (at -Delta_F1) / d_CCW (at +Delta_F2)
    a = d + rp.delta_f1
    b = d - rp.delta_f2
    den_a = (a + 1j * ga) * (b + 1j * gb) - j**2
    # pair f_CCW (at +Delta_F1) / d_CW (at -Delta_F2)
    c = d - rp.delta_f1
    e = d + rp.delta_f2
    den_b = (c + 1j * ga) * (e + 1j * gb) - j**2

    out = np.zeros((len(d), 4, 4), dtype=complex)
    out[:, 1, 0] = ((a - 1j * ga) * (b + 1j * gb) - j**2) / den_a  # t_{1->2}
    out[:, 2, 0] = cross / den_a  # t_{1->3}
    out[:, 2, 3] = ((a + 1j * ga) * (b - 1j * gb) - j**2) / den_a  # t_{4->3}
    out[:, 1, 3] = cross / den_a  # t_{4->2}
    out[:, 0, 1] = ((c - 1j * ga) * (e + 1j * gb) - j**2) / den_b  # t_{2->1}
    out[:, 3, 1] = cross / den_b  # t_{2->4}
    out[:, 3, 2] = ((c + 1j * ga) * (e - 1j * gb) - j**2) / den_b  # t_{3->4}
    out[:, 0, 2] = cross / den_b  # t_{3->1}
    return out


def closed_form_smatrix(rp: ReducedParams, delta: float) -> SMatrix:
    """Scattering matrix from the analytic expressions (``chi = 0`` only).

    The eight amplitudes that vanish without backscattering are exact zeros.
    """
    delta = _check_delta(delta)
    return SMatrix(closed_form_amplitudes(rp, [delta])[0], delta)


# Single resonator between the two waveguides: CW couples the a right mover
# and the b left mover, CCW the a left mover and the b right mover.
_SINGLE_INPUT = {1: 0, 2: 1, 3: 0, 4: 1}
_SINGLE_OUTPUT = {1: 1, 2: 0, 3: 1, 4: 0}


def single_resonator_batch(gamma_a, gamma_b, delta_f, chi, deltas) -> np.ndarray:
    if gamma_a <= 0 or gamma_b <= 0:
        raise ParameterError(
            f"decay rates must be positive, got gamma_a={gamma_a!r}, gamma_b={gamma_b!r}"
        )
    if chi < 0:
        raise ParameterError(f"chi must be non-negative, got {chi!r}")
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    if not np.all(np.isfinite(deltas)):
        raise ParameterError("detunings must be finite")
    total = gamma_a + gamma_b
    m = np.array(
        [[-delta_f - 1j * total, chi], [chi, delta_f - 1j * total]], dtype=complex
    )
    k_in = np.zeros((4, 2))
    k_out = np.zeros((4, 2))
    weight = {1: gamma_a, 2: gamma_a, 3: gamma_b, 4: gamma_b}
    for port in range(1, 5):
        w = np.sqrt(2.0 * weight[port])
        k_in[port - 1, _SINGLE_INPUT[port]] = w
        k_out[port - 1, _SINGLE_OUTPUT[port]] = w
    return _resolvent_smatrix(m, k_in, k_out, deltas)


def single_resonator_smatrix(
    gamma_a: float, gamma_b: float, delta_f: float, chi: float, delta: float
) -> SMatrix:
    """One spinning resonator side-coupled to both waveguides.

    With ``chi = 0`` and equal couplings the photon circulates
    1->4->3->2->1 at ``delta = -delta_f`` (CW mode resonant) and
    1->2->3->4->1 at ``delta = +delta_f``.
    """
    delta = _check_delta(delta)
    return SMatrix(single_resonator_batch(gamma_a, gamma_b, delta_f, chi, [delta])[0], delta)
