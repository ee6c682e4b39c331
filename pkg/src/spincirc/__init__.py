"""Single-photon circulator built from two spinning whispering-gallery resonators.

The package computes four-port scattering amplitudes for two resonators
coupled to two waveguides, locates circulation frequencies and studies the
effect of CW/CCW backscattering.  All frequencies are angular (rad/s).
"""

from .analysis import (
    CirculatorPoint,
    Direction,
    RobustnessReport,
    RoutingResult,
    SweepResult,
    backscatter_report,
    circulation_fidelity,
    closed_form_points,
    find_circulator_points,
    find_complete_routing,
    sweep,
)
from .engine import (
    ModeIndex,
    SMatrix,
    closed_form_smatrix,
    effective_hamiltonian,
    single_resonator_smatrix,
    smatrix,
    transmission,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    ParameterError,
    PresetError,
    SingularResolventError,
    SpinCircError,
)
from .oracle import oracle_smatrix
from .params import (
    PhysicalParams,
    Preset,
    ReducedParams,
    SpinConfig,
    g_factor,
    load_preset,
    preset_names,
    sagnac_shift,
    to_reduced,
)

__version__ = "0.1.0"
