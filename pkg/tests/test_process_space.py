import itertools
import math
import numpy as np
import pytest

from src.exceptions import DegenerateVector, DimensionMismatch, OrderUndefined
from src.generics.linalg import Operator, approx_eq, hs_inner
from src.generics.process_space import (
    ProcessVector,
    compose_label,
    devectorize,
    distill_orthogonal,
    fix_phase,
    normalize,
    overlap,
    process_norm,
    process_operator,
    scale,
    superpose,
    vectorize,
)
from tests.conftest import (
    HADAMARD,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    max_error,
    random_matrix,
    random_unitary,
)


S = 1 / math.sqrt(2)
I_VEC = vectorize(Operator(np.eye(2)), "I")
X_VEC = vectorize(Operator(PAULI_X), "X")
Y_VEC = vectorize(Operator(PAULI_Y), "Y")
Z_VEC = vectorize(Operator(PAULI_Z), "Z")
H_VEC = vectorize(Operator(HADAMARD), "H")


def _residual_in_span(vector: np.ndarray, *spanning: np.ndarray) -> float:
    basis = np.column_stack(spanning)
    solution, *_ = np.linalg.lstsq(basis, vector, rcond=None)
    return float(np.linalg.norm(basis @ solution - vector))


def test_vectorize_identity_and_x():
    assert np.array_equal(I_VEC.coeffs, [1, 0, 0, 1])
    assert np.array_equal(X_VEC.coeffs, [0, 1, 1, 0])
    assert X_VEC.d == 2 and X_VEC.label == "X"


def test_vectorize_uses_column_stacking():
    m = Operator([[1, 2], [3, 4]])
    # Column |0⟩ of m is (1, 3), column |1⟩ is (2, 4).
    assert np.array_equal(vectorize(m, "M").coeffs, [1, 3, 2, 4])


@pytest.mark.parametrize("d", [2, 3, 4])
def test_vectorize_round_trip(rng, d):
    for _ in range(200):
        u = random_unitary(rng, d)
        assert approx_eq(devectorize(vectorize(u, "U")), u, 1e-14)


def test_devectorize_superposition_is_hadamard():
    v = superpose(S, X_VEC, S, Z_VEC)
    assert approx_eq(devectorize(v), Operator(HADAMARD), 1e-12)


def test_vectorize_is_linear(rng):
    x, y = random_matrix(rng, 3), random_matrix(rng, 3)
    a, b = 0.3 - 1.2j, -0.7 + 0.1j
    combined = vectorize(Operator(a * x + b * y), "C")
    separate = superpose(a, vectorize(Operator(x), "X"), b, vectorize(Operator(y), "Y"))
    assert max_error(combined.coeffs, separate.coeffs) < 1e-12


def test_overlap_examples():
    assert overlap(X_VEC, Z_VEC) == 0
    assert overlap(I_VEC, I_VEC) == pytest.approx(2)
    assert overlap(I_VEC, H_VEC) == pytest.approx(0)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_overlap_equals_trace_inner_product(rng, d):
    for _ in range(200):
        x, y = random_matrix(rng, d), random_matrix(rng, d)
        expected = np.trace(x.conj().T @ y)
        got = overlap(vectorize(Operator(x), "X"), vectorize(Operator(y), "Y"))
        assert abs(got - expected) < 1e-12


def test_orthogonality_agrees_with_hilbert_schmidt_on_paulis():
    paulis = {
        "I": np.eye(2, dtype=complex),
        "X": PAULI_X,
        "Y": PAULI_Y,
        "Z": PAULI_Z,
        "H": HADAMARD,
    }
    for (p_name, p), (q_name, q) in itertools.product(paulis.items(), repeat=2):
        by_vector = abs(overlap(vectorize(Operator(p), p_name), vectorize(Operator(q), q_name)))
        by_trace = abs(hs_inner(Operator(p), Operator(q)))
        assert (by_vector < 1e-10) == (by_trace < 1e-10), (p_name, q_name)


def test_overlap_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        overlap(X_VEC, vectorize(Operator(np.eye(3)), "I3"))


def test_process_vector_checks_length():
    with pytest.raises(DimensionMismatch):
        ProcessVector(2, [1, 0, 0], "bad")


def test_superpose_with_zero_weight_keeps_first():
    v = superpose(1, X_VEC, 0, Z_VEC)
    assert np.array_equal(v.coeffs, X_VEC.coeffs)
    assert v.label == "X"


def test_superpose_labels():
    assert superpose(S, X_VEC, S, Z_VEC).label == "(0.7071·X + 0.7071·Z)"
    assert superpose(S, X_VEC, -S, Z_VEC).label == "(0.7071·X − 0.7071·Z)"
    assert superpose(0.5j, X_VEC, 0, Z_VEC).label == "(0.5000i·X)"
    assert superpose(1, X_VEC, 2, Z_VEC, label="W").label == "W"


def test_compose_label_rounds_half_to_even():
    assert compose_label([(0.03125, "A")]) == "(0.0312·A)"
    assert compose_label([(0.09375, "A")]) == "(0.0938·A)"
    assert compose_label([(0.00004, "A"), (1.0, "B")]) == "B"
    assert compose_label([(-1.0, "A")]) == "(−1.0000·A)"
    assert compose_label([(0.0, "A"), (0.0, "B")]) == "0"
    assert compose_label([(0.5 + 0.5j, "A"), (-0.25, "B")]) == "((0.5000+0.5000i)·A − 0.2500·B)"


def test_superposition_of_orthogonal_vectors_obeys_pythagoras():
    x_hat, z_hat = normalize(X_VEC), normalize(Z_VEC)
    alpha, beta = 0.6, 0.8j
    combined = superpose(alpha, x_hat, beta, z_hat)
    assert process_norm(combined) == pytest.approx(1.0, abs=1e-12)


def test_normalize_and_scale():
    assert process_norm(normalize(X_VEC)) == pytest.approx(1.0)
    assert process_norm(scale(X_VEC, 3j)) == pytest.approx(3 * math.sqrt(2))
    with pytest.raises(DegenerateVector):
        normalize(ProcessVector(2, np.zeros(4), "0"))


def test_fix_phase():
    fixed = fix_phase(np.array([0, -1j, 1]))
    assert max_error(fixed, [0, 1, 1j]) < 1e-15
    assert np.array_equal(fix_phase(np.zeros(2, dtype=complex)), np.zeros(2))


def test_process_operator_rescales_to_unitary_norm():
    unit = normalize(superpose(S, X_VEC, S, Z_VEC))
    assert approx_eq(process_operator(unit), Operator(HADAMARD), 1e-12)
    with pytest.raises(DegenerateVector):
        process_operator(ProcessVector(2, np.zeros(4), "0"))


def test_distill_keeps_orthogonal_inputs():
    v, w = scale(X_VEC, S), scale(Z_VEC, S)
    pair = distill_orthogonal(v, w)
    assert max_error(pair.first.coeffs, v.coeffs) < 1e-12
    assert max_error(pair.second.coeffs, w.coeffs) < 1e-12


def test_distill_removes_projection():
    w = superpose(S, I_VEC, S, X_VEC, label="W")
    pair = distill_orthogonal(I_VEC, w)
    assert abs(abs(overlap(pair.second, X_VEC)) - math.sqrt(2)) < 1e-12
    assert max_error(pair.second.coeffs, np.array([0, 1, 1, 0]) * S) < 1e-12
    assert pair.second.label == "W⊥"
    assert pair.first.label == "I"


@pytest.mark.parametrize("phase", [1, -1, 1j, np.exp(0.3j)])
def test_distill_rejects_parallel_processes(phase):
    with pytest.raises(OrderUndefined) as exc_info:
        distill_orthogonal(H_VEC, scale(H_VEC, phase))
    assert exc_info.value.overlap == pytest.approx(1.0)
    assert exc_info.value.error_code == 4


def test_distill_rejects_zero_vector():
    with pytest.raises(DegenerateVector):
        distill_orthogonal(X_VEC, ProcessVector(2, np.zeros(4), "0"))


@pytest.mark.parametrize("d", [2, 3])
def test_distill_random_pairs(rng, d):
    for _ in range(100):
        v = vectorize(Operator(random_matrix(rng, d)), "V")
        w = vectorize(Operator(random_matrix(rng, d)), "W")
        pair = distill_orthogonal(v, w)
        assert abs(overlap(pair.first, pair.second)) < 1e-12
        assert process_norm(pair.first) == pytest.approx(1.0, abs=1e-12)
        assert process_norm(pair.second) == pytest.approx(1.0, abs=1e-12)
        # Same span as the inputs, in both directions.
        assert _residual_in_span(pair.first.coeffs, v.coeffs, w.coeffs) < 1e-10
        assert _residual_in_span(pair.second.coeffs, v.coeffs, w.coeffs) < 1e-10
        assert _residual_in_span(w.coeffs, pair.first.coeffs, pair.second.coeffs) < 1e-10
        first_nonzero = next(c for c in pair.second.coeffs if abs(c) > 1e-12)
        assert abs(first_nonzero.imag) < 1e-15 and first_nonzero.real > 0


def test_process_vector_is_immutable():
    with pytest.raises(ValueError):
        X_VEC.coeffs[0] = 1
    relabeled = X_VEC.relabel("Flip")
    assert relabeled.label == "Flip" and X_VEC.label == "X"
