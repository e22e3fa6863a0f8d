import typing
import numpy as np
import numpy.typing as npt
from typing_extensions import ParamSpec


R = typing.TypeVar("R")
P = ParamSpec("P")

ComplexArray: typing.TypeAlias = npt.NDArray[np.complex128]
ComplexLike: typing.TypeAlias = typing.Union[complex, float, int]
ComplexPair: typing.TypeAlias = typing.Tuple[float, float]
"""A complex number encoded as `[re, im]`."""
