import typing
import functools
import asyncio
import difflib
import time
from contextlib import contextmanager
from decimal import Decimal, ROUND_HALF_EVEN

from src.logging import logger
from src.typing import R, P, ComplexPair


def fuzzy_search_keys(
    mapping: typing.Mapping[str, typing.Any],
    query: str,
    cutoff: float = 0.6,
    count: int = 5,
) -> typing.Dict[str, typing.Any]:
    """
    Fuzzy search keys in a mapping.

    This function uses difflib to find close matches to the query string
    in the keys of the mapping, ignoring case. It returns a dictionary containing
    the keys that match the query, along with their corresponding values.

    :param mapping: A mapping (dictionary) to search in.
    :param query: The query string to search for.
    :param cutoff: The minimum similarity ratio for a match (default is 0.6).
    :param count: The maximum number of matches to return (default is 5).
    :return: A dictionary containing the matching keys and their values.
    """
    possibilities = {key.lower(): key for key in mapping.keys()}
    matches = difflib.get_close_matches(
        query.lower(), list(possibilities), cutoff=cutoff, n=count
    )
    if not matches:
        return {}
    return {possibilities[k]: mapping[possibilities[k]] for k in matches}


def to_async(func: typing.Callable[P, R]) -> typing.Callable[P, typing.Awaitable[R]]:
    """
    Adapt a synchronous function to an asynchronous function.
    """

    @functools.wraps(func)
    async def async_executor(*args: P.args, **kwargs: P.kwargs) -> R:
        loop = asyncio.get_running_loop()

        def _run() -> R:
            return func(*args, **kwargs)

        return await loop.run_in_executor(None, _run)

    return async_executor


@contextmanager
def timeit(label: str) -> typing.Generator[None, None, None]:
    """
    Context manager to measure the execution time of a block of code.

    :param label: A label or identifier for the timed block.
    :return: A generator that yields control to the block of code being timed.
    """
    start_time = time.perf_counter()
    try:
        yield
    finally:
        end_time = time.perf_counter()
        elapsed_time = end_time - start_time
        logger.info(f"{label} completed in {elapsed_time:.4f} seconds.")


def clean_float(value: float) -> float:
    """Return `value` as a plain float with negative zero folded to `0.0`."""
    return float(value) + 0.0


def complex_to_pair(value: complex) -> ComplexPair:
    """Encode a complex number as an `(re, im)` pair of plain floats."""
    value = complex(value)
    return (clean_float(value.real), clean_float(value.imag))


def format_decimal(value: float, places: int = 4) -> str:
    """
    Render a real number with a fixed number of decimal places,
    rounding half to even on the exact binary value.

    :param value: Number to render.
    :param places: Number of decimal places.
    :return: Decimal string, e.g. `0.7071`.
    """
    quantum = Decimal(1).scaleb(-places)
    rendered = Decimal(float(value)).quantize(quantum, rounding=ROUND_HALF_EVEN)
    if rendered.is_zero():
        rendered = abs(rendered)
    return f"{rendered:f}"


def format_amplitude(value: complex, places: int = 4) -> str:
    """
    Render a complex amplitude for labels and narratives.

    Real values render as a plain decimal (`0.7071`), purely imaginary values
    as `0.5000i` and general values as `(0.5000+0.5000i)`.
    """
    value = complex(value)
    re = format_decimal(value.real, places)
    im = format_decimal(value.imag, places)
    zero = format_decimal(0.0, places)
    if im == zero:
        return re
    if re == zero:
        return f"{im}i"
    sign = "-" if im.startswith("-") else "+"
    return f"({re}{sign}{im.removeprefix('-')}i)"
