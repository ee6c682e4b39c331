"""Exception hierarchy shared by the solvers, analysis helpers and the CLI."""


class SpinCircError(Exception):
    """Base class for every error raised by spincirc."""


class ParameterError(SpinCircError, ValueError):
    """A physical or reduced parameter violates its constraints."""


class PresetError(SpinCircError, KeyError):
    """Unknown preset name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ConfigError(SpinCircError, ValueError):
    """Malformed or schema-violating configuration document."""


class NumericalError(SpinCircError, ArithmeticError):
    """Base class for failures of the numerical machinery."""


class SingularResolventError(NumericalError):
    """The mode resolvent is numerically singular at the requested detuning."""

    def __init__(self, delta: float, condition: float):
        self.delta = delta
        self.condition = condition
        super().__init__(
            f"resolvent singular at delta={delta!r} rad/s (condition number {condition:.3e})"
        )


class ConvergenceError(NumericalError):
    """An optimisation did not reach its acceptance level."""
