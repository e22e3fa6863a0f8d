import typing


class SwitchError(Exception):
    """Base class for all switch and relabeling exceptions."""

    error_code: int = 4

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        *args: typing.Any,
    ) -> None:
        message = message or "Quantum switch error occurred"
        super().__init__(message, *args)


class NonFiniteError(SwitchError, ValueError):
    """Exception raised when a NaN or infinite value reaches a constructor."""

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        *args: typing.Any,
    ) -> None:
        message = message or "Non-finite value encountered"
        super().__init__(message, *args)


class DimensionMismatch(SwitchError, ValueError):
    """Exception raised when operands have incompatible dimensions."""

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        expected: typing.Optional[int] = None,
        actual: typing.Optional[int] = None,
        *args: typing.Any,
    ) -> None:
        message = message or f"Dimension mismatch (expected {expected}, got {actual})"
        super().__init__(message, *args)
        self.expected = expected
        self.actual = actual


class NotNormalized(SwitchError, ValueError):
    """Exception raised when a state that must be unit norm is not."""

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        norm: typing.Optional[float] = None,
        *args: typing.Any,
    ) -> None:
        message = message or f"State is not normalized (norm {norm})"
        super().__init__(message, *args)
        self.norm = norm


class NotOrthonormal(NotNormalized):
    """Exception raised when basis states that must be orthogonal overlap."""

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        overlap: typing.Optional[float] = None,
        *args: typing.Any,
    ) -> None:
        message = message or f"States are not orthogonal (overlap {overlap})"
        super().__init__(message, None, *args)
        self.overlap = overlap


class NotUnitary(SwitchError):
    """Exception raised when a branch process is not a unitary operator."""

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        defect: typing.Optional[float] = None,
        gate_name: typing.Optional[str] = None,
        *args: typing.Any,
    ) -> None:
        message = message or f"Gate {gate_name!r} is not unitary (defect {defect})"
        super().__init__(message, *args)
        self.defect = defect
        self.gate_name = gate_name


class OrderUndefined(SwitchError):
    """
    Exception raised when two process vectors are parallel up to a phase.

    The same process repeated twice has no sense of order.
    """

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        overlap: typing.Optional[float] = None,
        *args: typing.Any,
    ) -> None:
        message = (
            message
            or "Process vectors are parallel up to a phase; their order is undefined"
        )
        super().__init__(message, *args)
        self.overlap = overlap


class DegenerateVector(SwitchError, ValueError):
    """Exception raised when a (near) zero vector is used where a direction is needed."""

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        norm: typing.Optional[float] = None,
        *args: typing.Any,
    ) -> None:
        message = message or f"Vector norm {norm} is too small to define a direction"
        super().__init__(message, *args)
        self.norm = norm


class ConfigError(SwitchError):
    """Base class for experiment configuration errors."""

    error_code = 3


class ConfigParseError(ConfigError):
    """Exception raised when a config document is not well-formed JSON."""

    error_code = 2

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        *args: typing.Any,
    ) -> None:
        message = message or "Config document could not be parsed"
        super().__init__(message, *args)


class ConfigValidationError(ConfigError):
    """Exception raised when a config document fails validation. Carries all errors found."""

    error_code = 3

    def __init__(
        self,
        message: typing.Optional[typing.Union[str, Exception]] = None,
        errors: typing.Optional[typing.List[typing.Dict[str, typing.Any]]] = None,
        *args: typing.Any,
    ) -> None:
        self.errors = errors or []
        message = message or f"Config has {len(self.errors)} validation error(s)"
        super().__init__(message, *args)
