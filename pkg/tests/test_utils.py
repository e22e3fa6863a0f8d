import asyncio
import logging
import pytest

from src.logging import logger, set_level
from src.utils import (
    clean_float,
    complex_to_pair,
    format_amplitude,
    format_decimal,
    fuzzy_search_keys,
    timeit,
    to_async,
)


@pytest.mark.parametrize(
    "value, expected",
    [
        (0.7071067811865476, "0.7071"),
        (0.03125, "0.0312"),
        (0.09375, "0.0938"),
        (-0.00001, "0.0000"),
        (-0.5, "-0.5000"),
        (1, "1.0000"),
    ],
)
def test_format_decimal(value, expected):
    assert format_decimal(value) == expected


@pytest.mark.parametrize(
    "value, expected",
    [
        (0.5, "0.5000"),
        (-0.5j, "-0.5000i"),
        (0.5 - 0.25j, "(0.5000-0.2500i)"),
        (complex(-0.0, 1e-9), "0.0000"),
    ],
)
def test_format_amplitude(value, expected):
    assert format_amplitude(value) == expected


def test_complex_pairs_fold_negative_zero():
    assert str(clean_float(-0.0)) == "0.0"
    assert complex_to_pair(complex(-0.0, -1.5)) == (0.0, -1.5)


def test_fuzzy_search_keys_ignores_case():
    assert fuzzy_search_keys({"RX": 1, "H": 2}, "rx") == {"RX": 1}
    assert fuzzy_search_keys({"RX": 1}, "completely different") == {}


def test_timeit_logs_elapsed_time(caplog):
    set_level("INFO")
    logger.addHandler(caplog.handler)
    try:
        with timeit("block"):
            pass
    finally:
        logger.removeHandler(caplog.handler)
        set_level("WARNING")
    assert any("block completed in" in record.getMessage() for record in caplog.records)


def test_to_async_runs_in_executor():
    double = to_async(lambda x: 2 * x)
    assert asyncio.run(double(21)) == 42


def test_set_level():
    set_level(logging.DEBUG)
    try:
        assert logger.level == logging.DEBUG
        assert all(handler.level == logging.DEBUG for handler in logger.handlers)
    finally:
        set_level(logging.WARNING)
