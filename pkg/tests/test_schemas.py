import orjson
import pytest

from src.exceptions import ConfigParseError, ConfigValidationError
from src.generics.gates import FIXED_GATES, rx
from src.generics.linalg import approx_eq
from src.specifics.schemas import (
    ExperimentConfig,
    Tolerances,
    dump_config,
    load_config_data,
    parse_config,
)


def _config(**overrides):
    data = {"gate_a": "X", "gate_b": "Z", "control": "+", "target": "0"}
    data.update(overrides)
    return data


def _error_locations(exc_info) -> set:
    return {error["loc"].split(".")[0] for error in exc_info.value.errors}


def test_minimal_config():
    cfg = load_config_data(_config())
    assert cfg.command is None
    assert cfg.labels == ("A", "B")
    assert not cfg.reverse_order
    assert cfg.effective_tolerances == Tolerances()
    assert approx_eq(cfg.gate_a.resolve(), FIXED_GATES["X"], 0.0)


def test_object_and_matrix_forms():
    cfg = load_config_data(
        _config(
            gate_a={"name": "rx(0.5)"},
            gate_b={"matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
            control={"amplitudes": [[0.6, 0], [0, 0.8]]},
            target=[[1, 0], [0, 0]],
        )
    )
    assert approx_eq(cfg.gate_a.resolve(), rx(0.5), 0.0)
    assert approx_eq(cfg.gate_b.resolve(), FIXED_GATES["X"], 0.0)
    assert cfg.control.resolve().amplitudes[1] == 0.8j


def test_unknown_gate_suggests_alternatives():
    with pytest.raises(ConfigValidationError) as exc_info:
        load_config_data(_config(gate_a="Hh"))
    assert _error_locations(exc_info) == {"gate_a"}
    assert "Did you mean 'H'" in exc_info.value.errors[0]["msg"]
    assert exc_info.value.error_code == 3


def test_all_errors_are_reported():
    data = _config(gate_a="Q", control="Q")
    del data["target"]
    with pytest.raises(ConfigValidationError) as exc_info:
        load_config_data(data)
    assert _error_locations(exc_info) == {"gate_a", "control", "target"}


@pytest.mark.parametrize(
    "overrides",
    [
        {"colour": "blue"},
        {"tolerances": {"atol": 1e-8, "rtol": 1e-8}},
        {"gate_a": {"name": "X", "matrix": [[[1, 0]]]}},
        {"gate_a": {}},
        {"command": "simulate"},
        {"labels": ["A", "A"]},
        {"labels": ["A", " "]},
        {"tolerances": {"atol": -1}},
        {"gate_a": {"matrix": [[[1, 0], [0, 0]]]}},
        {"control": {"amplitudes": []}},
    ],
)
def test_invalid_configs(overrides):
    with pytest.raises(ConfigValidationError):
        load_config_data(_config(**overrides))


def test_cross_field_checks():
    with pytest.raises(ConfigValidationError) as exc_info:
        load_config_data(
            _config(
                gate_b={"matrix": [[[1, 0], [0, 0], [0, 0]], [[0, 0], [1, 0], [0, 0]], [[0, 0], [0, 0], [1, 0]]]},
                control=[[1, 0], [1, 0]],
                measurement_basis=["0", "+"],
            )
        )
    errors = {error["loc"]: error["msg"] for error in exc_info.value.errors}
    assert set(errors) == {"gate_b", "control", "measurement_basis"}
    assert "same dimension" in errors["gate_b"]
    assert "unit norm" in errors["control"]
    assert "orthogonal" in errors["measurement_basis"]


def test_target_dimension_must_match_gates():
    with pytest.raises(ConfigValidationError) as exc_info:
        load_config_data(_config(target=[[1, 0], [0, 0], [0, 0]]))
    (error,) = exc_info.value.errors
    assert error["loc"] == "target"
    assert "dimension 2" in error["msg"]


def test_each_bad_basis_state_is_reported():
    with pytest.raises(ConfigValidationError) as exc_info:
        load_config_data(
            _config(
                target=[[1, 0], [0, 0], [0, 0]],
                measurement_basis=[[[1, 0], [0, 0]], [[0, 0], [0.5, 0]]],
            )
        )
    assert [error["loc"] for error in exc_info.value.errors] == ["target", "measurement_basis.1"]


def test_non_object_is_a_validation_error():
    with pytest.raises(ConfigValidationError) as exc_info:
        parse_config(b"[1, 2]")
    assert exc_info.value.errors[0]["loc"] == "config"


@pytest.mark.parametrize(
    "text",
    [b"", b"{", b'{"gate_a": NaN}', b'{"gate_a": Infinity}', b"\xff\xfe", b"{'gate_a': 'X'}"],
)
def test_malformed_json_is_a_parse_error(text):
    with pytest.raises(ConfigParseError) as exc_info:
        parse_config(text)
    assert exc_info.value.error_code == 2


def test_tolerance_preset_is_merged_under_config():
    preset = {"atol": 1e-6, "unitarity": 1e-4}
    cfg = parse_config(orjson.dumps(_config(tolerances={"atol": 1e-8})), defaults=preset)
    assert cfg.effective_tolerances.atol == 1e-8
    assert cfg.effective_tolerances.unitarity == 1e-4
    assert cfg.effective_tolerances.parallel == Tolerances().parallel


def test_loose_normalization_tolerance_accepts_rounded_states():
    rounded = [[0.7071, 0], [0.7071, 0]]
    with pytest.raises(ConfigValidationError):
        load_config_data(_config(control=rounded))
    cfg = load_config_data(_config(control=rounded, tolerances={"normalization": 1e-3}))
    assert cfg.control.amplitudes is not None


def test_dump_config_round_trips():
    cfg = load_config_data(
        _config(
            command="report",
            labels=["X", "Z"],
            reverse_order=True,
            measurement_basis=["0", "1"],
            tolerances={"atol": 1e-9},
        )
    )
    echoed = dump_config(cfg)
    assert "matrix" not in echoed["gate_a"]
    assert parse_config(orjson.dumps(echoed)) == cfg


def test_dump_config_omits_defaults():
    assert set(dump_config(load_config_data(_config()))) == {
        "gate_a",
        "gate_b",
        "control",
        "target",
    }


def test_config_is_frozen():
    cfg = load_config_data(_config())
    with pytest.raises(Exception):
        cfg.command = "run"  # type: ignore[misc]
    assert isinstance(cfg, ExperimentConfig)
