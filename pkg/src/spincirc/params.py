"""Device parameters, the Sagnac-Fizeau conversion and the preset catalog.

Unit convention
---------------
Every frequency-like quantity (detunings, Sagnac shifts, decay rates,
couplings ``J`` and ``chi``, mechanical angular velocities) is an angular
frequency in rad/s.  Values quoted as "kHz" or "MHz" in the literature are
read as 1e3 or 1e6 rad/s with no 2*pi factor.  Transmission probabilities
depend only on ratios of these rates, so the convention is self-consistent.

Calibration
-----------
The textbook recipe ``g = 6 * omega_c / Q`` with ``Q = 1e9`` gives a decay
rate ``Gamma = g**2 / (2 v_g)`` of about 8.9e4 rad/s.  The presets instead fix
``Gamma_a = Gamma_b = 0.41e6`` rad/s directly, chosen so that
``sqrt(Gamma**2 + J**2)`` with ``J = 2.4e6`` equals ``29.2e3 * G``, the
opposite-spin velocity used for the complete-routing spectra.  The reduced
rates are therefore the source of truth; :class:`PhysicalParams` keeps the
laboratory numbers for the Sagnac factor and for documentation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from types import MappingProxyType
from typing import Mapping

from .errors import ParameterError, PresetError

SPEED_OF_LIGHT = 3.0e8  # m/s, the rounded value used for every preset

#: Decay rate used by all presets [rad/s].
CALIBRATED_GAMMA = 0.41e6


def _require_finite(name: str, value: float) -> None:
    if isinstance(value, complex):
        raise ParameterError(f"{name} must be real, got {value!r}")
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory-frame constants of the two-resonator device.

    Parameters
    ----------
    radius : float
        Resonator radius [m].
    index : float
        Refractive index (> 1).
    wavelength : float
        Vacuum wavelength of the cavity mode [m].
    quality : float
        Loaded quality factor.
    coupling_a, coupling_b : float
        Waveguide-resonator couplings ``g_a``, ``g_b``
        [sqrt(m/s * rad/s)].
    inter_coupling : float
        Resonator-resonator coupling ``J`` [rad/s].
    dn_dlambda : float
        Material dispersion [1/m]; zero by default.
    speed_light, group_velocity : float
        Speed of light and waveguide group velocity [m/s].
    """

    radius: float
    index: float
    wavelength: float
    quality: float
    coupling_a: float
    coupling_b: float
    inter_coupling: float
    dn_dlambda: float = 0.0
    speed_light: float = SPEED_OF_LIGHT
    group_velocity: float = SPEED_OF_LIGHT

    def __post_init__(self) -> None:
        for f in fields(self):
            _require_finite(f.name, getattr(self, f.name))
        if self.radius <= 0:
            raise ParameterError(f"radius must be positive, got {self.radius!r}")
        if self.wavelength <= 0:
            raise ParameterError(f"wavelength must be positive, got {self.wavelength!r}")
        if self.quality <= 0:
            raise ParameterError(f"quality must be positive, got {self.quality!r}")
        if self.index <= 1:
            raise ParameterError(f"index must exceed 1, got {self.index!r}")
        if self.group_velocity <= 0:
            raise ParameterError(
                f"group_velocity must be positive, got {self.group_velocity!r}"
            )
        if self.speed_light <= 0:
            raise ParameterError(f"speed_light must be positive, got {self.speed_light!r}")

    @property
    def omega_c(self) -> float:
        """Cavity angular frequency 2*pi*c/lambda [rad/s]."""
        return 2.0 * math.pi * self.speed_light / self.wavelength


@dataclass(frozen=True)
class SpinConfig:
    """Mechanical angular velocities and backscattering strengths.

    ``omega_1``/``omega_2`` are signed (positive is clockwise rotation) and
    apply to the resonators on waveguide a and waveguide b respectively.
    """

    omega_1: float = 0.0
    omega_2: float = 0.0
    chi_1: float = 0.0
    chi_2: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            _require_finite(f.name, getattr(self, f.name))
        if self.chi_1 < 0 or self.chi_2 < 0:
            raise ParameterError(
                f"backscattering strengths must be non-negative, got "
                f"chi_1={self.chi_1!r}, chi_2={self.chi_2!r}"
            )


@dataclass(frozen=True)
class ReducedParams:
    """The rate model consumed by every solver (all values in rad/s).

    ``gamma_a``/``gamma_b`` are the amplitude decay rates ``g**2/(2 v_g)`` of
    each mode into its waveguide, ``j`` the inter-resonator coupling,
    ``delta_f1``/``delta_f2`` the signed Sagnac shifts and ``chi_1``/``chi_2``
    the intra-resonator CW/CCW backscattering.
    """

    gamma_a: float
    gamma_b: float
    j: float
    delta_f1: float = 0.0
    delta_f2: float = 0.0
    chi_1: float = 0.0
    chi_2: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            _require_finite(f.name, getattr(self, f.name))
        if self.gamma_a <= 0 or self.gamma_b <= 0:
            raise ParameterError(
                f"decay rates must be positive, got gamma_a={self.gamma_a!r}, "
                f"gamma_b={self.gamma_b!r}"
            )
        if self.chi_1 < 0 or self.chi_2 < 0:
            raise ParameterError(
                f"backscattering strengths must be non-negative, got "
                f"chi_1={self.chi_1!r}, chi_2={self.chi_2!r}"
            )

    @property
    def has_backscatter(self) -> bool:
        return self.chi_1 != 0.0 or self.chi_2 != 0.0

    def mirrored(self) -> ReducedParams:
        """Same device with both rotation directions reversed."""
        return replace(self, delta_f1=-self.delta_f1, delta_f2=-self.delta_f2)

    def scale(self) -> float:
        """Largest rate in the model, a natural unit for detuning windows."""
        return max(
            self.gamma_a,
            self.gamma_b,
            abs(self.j),
            abs(self.delta_f1),
            abs(self.delta_f2),
            self.chi_1,
            self.chi_2,
        )


def g_factor(p: PhysicalParams) -> float:
    """Sagnac-Fizeau conversion factor ``G`` such that ``Delta_F = Omega * G``.

    ``G = n R omega_c / c * (1 - 1/n**2 - (lambda/n) dn/dlambda)``, which for
    vanishing dispersion reduces to ``R omega_c (n**2 - 1) / (c n)``.
    """
    n = p.index
    g = (
        n
        * p.radius
        * p.omega_c
        / p.speed_light
        * (1.0 - 1.0 / n**2 - (p.wavelength / n) * p.dn_dlambda)
    )
    if not math.isfinite(g):
        raise ParameterError(f"Sagnac factor is not finite for {p!r}")
    return g


def sagnac_shift(p: PhysicalParams, omega: float) -> float:
    """Signed rotation-induced CW/CCW splitting half-width [rad/s]."""
    _require_finite("omega", omega)
    return omega * g_factor(p)


def to_reduced(p: PhysicalParams, s: SpinConfig) -> ReducedParams:
    """Collapse laboratory parameters and spin state into the rate model."""
    return ReducedParams(
        gamma_a=p.coupling_a**2 / (2.0 * p.group_velocity),
        gamma_b=p.coupling_b**2 / (2.0 * p.group_velocity),
        j=p.inter_coupling,
        delta_f1=sagnac_shift(p, s.omega_1),
        delta_f2=sagnac_shift(p, s.omega_2),
        chi_1=s.chi_1,
        chi_2=s.chi_2,
    )


REDUCED_FIELDS = tuple(f.name for f in fields(ReducedParams))


def apply_overrides(rp: ReducedParams, overrides: Mapping[str, float]) -> ReducedParams:
    """Replace reduced fields one by one; unknown names are rejected."""
    unknown = set(overrides) - set(REDUCED_FIELDS)
    if unknown:
        raise ParameterError(f"unknown reduced parameter(s): {sorted(unknown)}")
    return replace(rp, **dict(overrides))


@dataclass(frozen=True)
class Preset:
    """Catalog entry reproducing one of the published parameter sets."""

    name: str
    physical: PhysicalParams
    spin: SpinConfig
    sweep_min: float
    sweep_max: float
    label: str
    overrides: Mapping[str, float] = field(default_factory=dict)
    single_resonator: bool = False

    def __post_init__(self) -> None:
        if not self.sweep_min < self.sweep_max:
            raise ParameterError(
                f"preset {self.name!r}: sweep_min must be below sweep_max"
            )
        object.__setattr__(self, "overrides", MappingProxyType(dict(self.overrides)))

    def reduced(self) -> ReducedParams:
        return apply_overrides(to_reduced(self.physical, self.spin), self.overrides)


def reference_physical() -> PhysicalParams:
    """Laboratory constants shared by all presets.

    The couplings follow ``g = 6 omega_c / Q``; the presets override the
    resulting decay rate with :data:`CALIBRATED_GAMMA`.
    """
    wavelength = 1.55e-6
    quality = 1e9
    omega_c = 2.0 * math.pi * SPEED_OF_LIGHT / wavelength
    g = 6.0 * omega_c / quality
    return PhysicalParams(
        radius=30e-6,
        index=1.4,
        wavelength=wavelength,
        quality=quality,
        coupling_a=g,
        coupling_b=g,
        inter_coupling=2.4e6,
    )


def _build_catalog() -> dict[str, Preset]:
    phys = reference_physical()
    gamma = {"gamma_a": CALIBRATED_GAMMA, "gamma_b": CALIBRATED_GAMMA}
    entries = [
        ("fig2-single", SpinConfig(omega_1=29e3), "single spinning resonator, Omega=29 kHz", True),
        ("fig2-b", SpinConfig(omega_1=29e3), "first resonator spinning, Omega1=29 kHz, Omega2=0", False),
        ("fig2-c", SpinConfig(omega_1=-29e3), "first resonator spinning backwards, Omega1=-29 kHz, Omega2=0", False),
        ("fig3-corotate", SpinConfig(omega_1=29e3, omega_2=29e3), "co-rotating pair, Omega1=Omega2=29 kHz", False),
        ("fig3-counter", SpinConfig(omega_1=29.2e3, omega_2=-29.2e3), "counter-rotating pair, Omega1=29.2 kHz, Omega2=-29.2 kHz", False),
        ("fig4-a", SpinConfig(chi_1=1.2e6), "static pair, backscattering chi1=1.2 MHz, chi2=0", False),
        ("fig4-b", SpinConfig(chi_1=1.2e6, chi_2=1.2e6), "static pair, backscattering chi1=chi2=1.2 MHz", False),
        ("fig5", SpinConfig(omega_1=24e3, omega_2=24e3, chi_1=1.2e6, chi_2=1.2e6), "co-rotating pair with backscattering, Omega1=Omega2=24 kHz, chi1=chi2=1.2 MHz", False),
    ]
    return {
        name: Preset(
            name=name,
            physical=phys,
            spin=spin,
            sweep_min=-8e6,
            sweep_max=8e6,
            label=label,
            overrides=gamma,
            single_resonator=single,
        )
        for name, spin, label, single in entries
    }


_CATALOG = MappingProxyType(_build_catalog())


def preset_names() -> list[str]:
    return list(_CATALOG)


def load_preset(name: str) -> Preset:
    try:
        return _CATALOG[name]
    except KeyError:
        raise PresetError(
            f"unknown preset {name!r}; valid names: {', '.join(_CATALOG)}"
        ) from None


def fig4_scenarios(omega: float = 29e3, chi: float = 1.2e6) -> list[tuple[str, ReducedParams]]:
    """The five backscattering scenarios compared in the robustness study."""
    phys = reference_physical()
    gamma = {"gamma_a": CALIBRATED_GAMMA, "gamma_b": CALIBRATED_GAMMA}
    spins = [
        ("static, chi1", SpinConfig(chi_1=chi)),
        ("spin1, chi1", SpinConfig(omega_1=omega, chi_1=chi)),
        ("static, chi1+chi2", SpinConfig(chi_1=chi, chi_2=chi)),
        ("spin1, chi1+chi2", SpinConfig(omega_1=omega, chi_1=chi, chi_2=chi)),
        ("counter-spin, chi1+chi2", SpinConfig(omega_1=omega, omega_2=-omega, chi_1=chi, chi_2=chi)),
    ]
    return [(label, apply_overrides(to_reduced(phys, s), gamma)) for label, s in spins]
