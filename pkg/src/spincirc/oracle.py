"""Independent real-space solution of the single-photon scattering problem.

For a photon of detuning ``delta`` the stationary state holds four resonator
amplitudes (C_cw, C_ccw, D_cw, D_ccw) and plane waves in the two waveguides.
Each waveguide channel couples to one mode through a delta function at
``x = 0``; integrating the Schroedinger equation across it gives the jump

    out - in = -i (g / v_g) * mode,

and the field value that enters the mode equation is the midpoint
``(in + out) / 2`` of its left and right limits.  With the four mode
equations this is an 8x8 linear system per injected port.

The equations are written out term by term from the Hamiltonian rather than
taken from :mod:`spincirc.engine`, so the two constructions only agree if both
are right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import MAX_CONDITION, SMatrix
from .errors import ParameterError, SingularResolventError
from .params import ReducedParams

# unknown vector layout
C_CW, C_CCW, D_CW, D_CCW = 0, 1, 2, 3
A_R_OUT, A_L_OUT, B_R_OUT, B_L_OUT = 4, 5, 6, 7

# waveguide channels: (outgoing-unknown, port injecting into it, port it exits)
_CHANNELS = {
    "a_R": (A_R_OUT, 1, 2),
    "a_L": (A_L_OUT, 2, 1),
    "b_L": (B_L_OUT, 3, 4),
    "b_R": (B_R_OUT, 4, 3),
}


@dataclass(frozen=True, eq=False)
class RealSpaceSystem:
    """Linear system ``matrix @ unknowns = rhs`` for one injected port."""

    matrix: np.ndarray
    rhs: np.ndarray
    port: int

    def solve(self) -> np.ndarray:
        return np.linalg.solve(self.matrix, self.rhs)


def assemble(rp: ReducedParams, delta: float, port: int, group_velocity: float = 1.0) -> RealSpaceSystem:
    """Stationary equations for a unit-amplitude photon entering ``port``.

    Only ``g**2 / v_g = 2 Gamma`` is physical, so the couplings are
    reconstructed as ``g = sqrt(2 Gamma v_g)`` for any chosen ``v_g``.
    """
    if port not in (1, 2, 3, 4):
        raise ParameterError(f"port must be 1..4, got {port!r}")
    vg = float(group_velocity)
    ga = np.sqrt(2.0 * rp.gamma_a * vg)
    gb = np.sqrt(2.0 * rp.gamma_b * vg)
    incoming = {name: 1.0 if inj == port else 0.0 for name, (_, inj, _) in _CHANNELS.items()}

    mat = np.zeros((8, 8), dtype=complex)
    rhs = np.zeros(8, dtype=complex)

    def field_at_zero(row, channel, g):
        # -g * (in + out)/2 moved to the left-hand side; `in` goes to rhs
        out_idx = _CHANNELS[channel][0]
        mat[row, out_idx] -= g / 2.0
        rhs[row] += g / 2.0 * incoming[channel]

    # E C_cw = (w_c - dF1) C_cw + chi1 C_ccw + J D_ccw + g_a A_R(0)
    mat[C_CW, C_CW] = delta + rp.delta_f1
    mat[C_CW, C_CCW] = -rp.chi_1
    mat[C_CW, D_CCW] = -rp.j
    field_at_zero(C_CW, "a_R", ga)
    # E C_ccw = (w_c + dF1) C_ccw + chi1 C_cw + J D_cw + g_a A_L(0)
    mat[C_CCW, C_CCW] = delta - rp.delta_f1
    mat[C_CCW, C_CW] = -rp.chi_1
    mat[C_CCW, D_CW] = -rp.j
    field_at_zero(C_CCW, "a_L", ga)
    # E D_cw = (w_c - dF2) D_cw + chi2 D_ccw + J C_ccw + g_b B_L(0)
    mat[D_CW, D_CW] = delta + rp.delta_f2
    mat[D_CW, D_CCW] = -rp.chi_2
    mat[D_CW, C_CCW] = -rp.j
    field_at_zero(D_CW, "b_L", gb)
    # E D_ccw = (w_c + dF2) D_ccw + chi2 D_cw + J C_cw + g_b B_R(0)
    mat[D_CCW, D_CCW] = delta - rp.delta_f2
    mat[D_CCW, D_CW] = -rp.chi_2
    mat[D_CCW, C_CW] = -rp.j
    field_at_zero(D_CCW, "b_R", gb)

    # jump conditions: out + i (g/v_g) mode = in
    for channel, mode, g in (
        ("a_R", C_CW, ga),
        ("a_L", C_CCW, ga),
        ("b_L", D_CW, gb),
        ("b_R", D_CCW, gb),
    ):
        out_idx = _CHANNELS[channel][0]
        mat[out_idx, out_idx] = 1.0
        mat[out_idx, mode] = 1j * g / vg
        rhs[out_idx] = incoming[channel]

    return RealSpaceSystem(mat, rhs, port)


def oracle_smatrix(rp: ReducedParams, delta: float, group_velocity: float = 1.0) -> SMatrix:
    """Scattering matrix assembled column by column from real-space solves."""
    delta = float(delta)
    if not np.isfinite(delta):
        raise ParameterError(f"detuning must be finite, got {delta!r}")
    s = np.zeros((4, 4), dtype=complex)
    for port in range(1, 5):
        system = assemble(rp, delta, port, group_velocity)
        cond = np.linalg.cond(system.matrix)
        if not cond <= MAX_CONDITION:
            raise SingularResolventError(delta, float(cond))
        x = system.solve()
        for out_idx, _, exit_port in _CHANNELS.values():
            s[exit_port - 1, port - 1] = x[out_idx]
    return SMatrix(s, delta)
