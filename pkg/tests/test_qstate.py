import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_state, random_unitary
from qdense.qstate import (
    MixedRadixSpace,
    Operator,
    StateVector,
    apply,
    basis_state,
    complete_to_unitary,
    inner_product,
    measure_computational,
    project,
    tensor,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# domain types


def test_space_total_dim_and_codec():
    space = MixedRadixSpace((3, 2, 4))
    assert space.total_dim == 24
    assert space.index_of((1, 0, 2)) == 1 * 8 + 0 * 4 + 2
    for index in range(space.total_dim):
        assert space.index_of(space.digits_of(index)) == index


def test_space_first_subsystem_most_significant():
    space = MixedRadixSpace((3, 2))
    assert space.index_of((2, 1)) == 5
    assert space.digits_of(4) == (2, 0)


@pytest.mark.parametrize("dims", [(), (1,), (2, 1), (0, 3)])
def test_space_rejects_bad_dims(dims):
    with pytest.raises(ValueError):
        MixedRadixSpace(dims)


def test_state_vector_rejects_wrong_length_and_norm():
    space = MixedRadixSpace((2, 2))
    with pytest.raises(ValueError, match="amplitudes"):
        StateVector(space, np.ones(3, dtype=complex))
    with pytest.raises(ValueError, match="not normalized"):
        StateVector(space, np.ones(4, dtype=complex))


def test_state_vector_is_immutable():
    state = basis_state((2, 2), (0, 1))
    with pytest.raises(ValueError):
        state.amplitudes[0] = 1.0


def test_operator_checks():
    with pytest.raises(ValueError, match="square"):
        Operator(np.ones((2, 3)))
    with pytest.raises(ValueError, match="unitary"):
        Operator(np.ones((2, 2)), unitary=True)
    op = Operator(np.eye(4), unitary=True)
    assert op.dim == 4


# ---------------------------------------------------------------------------
# tensor


def test_tensor_basis_states():
    out = tensor([basis_state((2,), (0,)), basis_state((2,), (0,))])
    assert out.space.dims == (2, 2)
    assert out.amplitudes[0] == 1.0
    assert np.count_nonzero(out.amplitudes) == 1


def test_tensor_distributes_over_superposition():
    plus = StateVector(MixedRadixSpace((2,)), np.array([INV_SQRT2, INV_SQRT2]))
    out = tensor([plus, basis_state((2,), (1,))])
    expected = np.zeros(4, dtype=complex)
    expected[[1, 3]] = INV_SQRT2  # |01> and |11>
    assert np.allclose(out.amplitudes, expected)


def test_tensor_two_entangled_pairs():
    # product of two partially entangled 3x2 pairs carries the coefficient products
    a0, a1 = math.sqrt(0.2), math.sqrt(0.8)
    b0, b1 = math.sqrt(0.4), math.sqrt(0.6)
    first = np.zeros(6, dtype=complex)
    first[[0, 3]] = (a0, a1)
    second = np.zeros(6, dtype=complex)
    second[[0, 3]] = (b0, b1)
    out = tensor(
        [
            StateVector(MixedRadixSpace((3, 2)), first),
            StateVector(MixedRadixSpace((3, 2)), second),
        ]
    )
    assert out.space.dims == (3, 2, 3, 2)
    for (r, s), weight in {
        (0, 0): a0 * b0,
        (0, 1): a0 * b1,
        (1, 0): a1 * b0,
        (1, 1): a1 * b1,
    }.items():
        index = out.space.index_of((r, r, s, s))
        assert out.amplitudes[index] == pytest.approx(weight)
    assert np.count_nonzero(out.amplitudes) == 4


def test_tensor_rejects_empty_list():
    with pytest.raises(ValueError):
        tensor([])


# ---------------------------------------------------------------------------
# apply


def test_apply_identity_leaves_state():
    state = random_state((3, 2, 2), seed=5)
    out = apply(Operator(np.eye(6), unitary=True), state, (0, 2))
    assert np.allclose(out.amplitudes, state.amplitudes)


def test_apply_cyclic_shift_on_qutrit():
    shift = np.zeros((3, 3), dtype=complex)
    for j in range(3):
        shift[(j + 1) % 3, j] = 1.0
    out = apply(Operator(shift, unitary=True), basis_state((3, 3), (0, 0)), (0,))
    assert out.amplitudes[out.space.index_of((1, 0))] == 1.0


def test_apply_conversion_block_keeps_auxiliary_when_maximal():
    # maximally entangled pair: the rotation block is trivial, auxiliary stays at 0
    amps = np.zeros((3, 2, 2), dtype=complex)
    amps[0, 0, 0] = INV_SQRT2
    amps[1, 1, 0] = INV_SQRT2
    state = StateVector(MixedRadixSpace((3, 2, 2)), amps.reshape(-1))
    a_coef, b_coef = 1.0, 0.0  # ratio of the two pair coefficients and its complement
    block = np.eye(6, dtype=complex)
    block[2:4, 2:4] = [[a_coef, b_coef], [b_coef, -a_coef]]
    out = apply(Operator(block, unitary=True), state, (0, 2))
    marginal = np.abs(out.amplitudes.reshape(3, 2, 2)) ** 2
    assert marginal[:, :, 1].sum() == pytest.approx(0.0, abs=1e-15)
    assert marginal[:, :, 0].sum() == pytest.approx(1.0)


def test_apply_validates_inputs():
    state = basis_state((2, 2), (0, 0))
    with pytest.raises(ValueError, match="dimension"):
        apply(Operator(np.eye(3)), state, (0,))
    with pytest.raises(ValueError, match="duplicate"):
        apply(Operator(np.eye(4)), state, (0, 0))
    with pytest.raises(ValueError, match="range"):
        apply(Operator(np.eye(2)), state, (2,))


def test_apply_respects_target_order():
    # CNOT with control listed first vs the qubits physically swapped
    cnot = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )
    state = basis_state((2, 2), (0, 1))  # second qubit set
    flipped = apply(Operator(cnot, unitary=True), state, (1, 0))
    assert flipped.amplitudes[flipped.space.index_of((1, 1))] == 1.0


@pytest.mark.parametrize("seed", range(6))
def test_apply_composition_and_norm(seed):
    state = random_state((2, 3, 2), seed=seed)
    first = random_unitary(6, seed=100 + seed)
    second = random_unitary(6, seed=200 + seed)
    targets = (1, 2)
    composed = Operator(first.entries @ second.entries, unitary=True)
    stepwise = apply(first, apply(second, state, targets), targets)
    at_once = apply(composed, state, targets)
    assert np.allclose(stepwise.amplitudes, at_once.amplitudes, atol=1e-10)
    assert np.vdot(stepwise.amplitudes, stepwise.amplitudes).real == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------------------
# inner products


def test_inner_product_basics():
    state = random_state((3, 2), seed=1)
    assert inner_product(state, state) == pytest.approx(1.0)
    bell = StateVector(
        MixedRadixSpace((2, 2)), np.array([INV_SQRT2, 0, 0, INV_SQRT2])
    )
    assert inner_product(basis_state((2, 2), (0, 0)), bell) == pytest.approx(INV_SQRT2)


def test_inner_product_orthogonal_encoded_pair():
    plus = StateVector(MixedRadixSpace((2, 2)), np.array([INV_SQRT2, 0, 0, INV_SQRT2]))
    minus = StateVector(MixedRadixSpace((2, 2)), np.array([INV_SQRT2, 0, 0, -INV_SQRT2]))
    assert inner_product(plus, minus) == pytest.approx(0.0, abs=1e-15)


def test_inner_product_conjugate_linear_in_first_argument():
    a = random_state((2, 2), seed=3)
    b = random_state((2, 2), seed=4)
    scaled = StateVector(a.space, 1j * a.amplitudes)
    assert inner_product(scaled, b) == pytest.approx(-1j * inner_product(a, b))


def test_inner_product_space_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        inner_product(basis_state((2, 2), (0, 0)), basis_state((4,), (0,)))


# ---------------------------------------------------------------------------
# computational-basis measurement


def test_measure_basis_state_is_certain():
    state = basis_state((2, 2), (0, 1))
    outcome, probability, collapsed = measure_computational(
        state, (0, 1), np.random.default_rng(0)
    )
    assert outcome == (0, 1)
    assert probability == pytest.approx(1.0)
    assert np.allclose(collapsed.amplitudes, state.amplitudes)


def test_measure_converted_pair_auxiliary_statistics():
    # converted single 3x2 pair with squared coefficients (0.2, 0.8):
    # auxiliary reads 0 with probability 0.4 and 1 with probability 0.6
    amps = np.zeros((3, 2, 2), dtype=complex)
    amps[0, 0, 0] = math.sqrt(0.2)
    amps[1, 1, 0] = math.sqrt(0.2)
    amps[1, 1, 1] = math.sqrt(0.6)
    state = StateVector(MixedRadixSpace((3, 2, 2)), amps.reshape(-1))
    expected = {(0,): 0.4, (1,): 0.6}
    seen = set()
    for seed in range(60):
        outcome, probability, collapsed = measure_computational(
            state, (2,), np.random.default_rng(seed)
        )
        assert probability == pytest.approx(expected[outcome], abs=1e-12)
        assert np.vdot(collapsed.amplitudes, collapsed.amplitudes).real == pytest.approx(1.0)
        seen.add(outcome)
    assert seen == {(0,), (1,)}


@pytest.mark.parametrize("targets", [(0,), (1,), (0, 1), (2, 0)])
def test_measure_probabilities_match_direct_marginals(targets):
    state = random_state((2, 3, 2), seed=11)
    arr = np.abs(state.amplitudes.reshape(2, 3, 2)) ** 2
    keep = tuple(i for i in range(3) if i not in targets)
    marginal = arr.sum(axis=keep) if keep else arr
    marginal = np.moveaxis(
        np.abs(state.amplitudes.reshape(2, 3, 2)) ** 2, targets, range(len(targets))
    ).reshape(tuple(state.space.dims[t] for t in targets) + (-1,)).sum(axis=-1)
    assert marginal.sum() == pytest.approx(1.0)
    for seed in range(40):
        outcome, probability, _ = measure_computational(
            state, targets, np.random.default_rng(seed)
        )
        assert probability == pytest.approx(float(marginal[outcome]), abs=1e-12)


def test_measure_never_returns_zero_probability_outcome():
    state = basis_state((2, 2), (1, 0))
    for seed in range(25):
        outcome, probability, _ = measure_computational(
            state, (0, 1), np.random.default_rng(seed)
        )
        assert outcome == (1, 0)
        assert probability > 0.5


# ---------------------------------------------------------------------------
# projective measurement


def _qubit_pair_basis():
    states = []
    for i in range(2):
        for j in range(2):
            states.append(basis_state((2, 2), (i, j)))
    return states


def test_project_basis_member_onto_own_basis():
    basis = _qubit_pair_basis()
    results = project(basis[2], (0, 1), basis)
    probs = [p for p, _ in results]
    assert probs[2] == pytest.approx(1.0)
    assert sum(probs) == pytest.approx(1.0, abs=1e-10)
    for i, (p, collapsed) in enumerate(results):
        if i == 2:
            assert np.allclose(collapsed.amplitudes, basis[2].amplitudes)
        else:
            assert p == pytest.approx(0.0, abs=1e-15)
            assert collapsed is None


def test_project_partial_subsystem_collapse():
    bell = StateVector(MixedRadixSpace((2, 2)), np.array([INV_SQRT2, 0, 0, INV_SQRT2]))
    results = project(bell, (0,), [basis_state((2,), (0,)), basis_state((2,), (1,))])
    assert [p for p, _ in results] == pytest.approx([0.5, 0.5])
    assert np.allclose(results[0][1].amplitudes, basis_state((2, 2), (0, 0)).amplitudes)
    assert np.allclose(results[1][1].amplitudes, basis_state((2, 2), (1, 1)).amplitudes)


def test_project_orthogonal_member_reports_empty_branch():
    state = basis_state((2, 2), (0, 0))
    results = project(state, (0, 1), [basis_state((2, 2), (1, 1))])
    assert len(results) == 1
    probability, collapsed = results[0]
    assert probability == pytest.approx(0.0, abs=1e-15)
    assert collapsed is None


def test_project_completeness_on_random_state():
    state = random_state((2, 2, 3), seed=9)
    results = project(state, (0, 2), _complete_basis((2, 3)))
    assert sum(p for p, _ in results) == pytest.approx(1.0, abs=1e-10)


def _complete_basis(dims):
    space = MixedRadixSpace(dims)
    out = []
    for index in range(space.total_dim):
        out.append(basis_state(dims, space.digits_of(index)))
    return out


def test_project_rejects_non_orthonormal_basis():
    state = basis_state((2, 2), (0, 0))
    skewed = StateVector(
        MixedRadixSpace((2, 2)), np.array([1.0, 0, 0, 1e-3]) / math.sqrt(1 + 1e-6)
    )
    with pytest.raises(ValueError, match="orthonormal"):
        project(state, (0, 1), [basis_state((2, 2), (0, 0)), skewed])


def test_project_rejects_wrong_member_dims():
    with pytest.raises(ValueError, match="target"):
        project(basis_state((2, 2), (0, 0)), (0,), [basis_state((2, 2), (0, 0))])


# ---------------------------------------------------------------------------
# unitary completion


def test_complete_full_standard_basis_gives_identity():
    columns = [np.eye(3)[:, i] for i in range(3)]
    out = complete_to_unitary(columns, 3)
    assert np.array_equal(out.entries, np.eye(3))


def test_complete_single_superposition_column():
    column = np.array([INV_SQRT2, INV_SQRT2])
    out = complete_to_unitary([column], 2)
    assert np.allclose(out.entries[:, 0], column)
    assert np.allclose(out.entries[:, 1], [INV_SQRT2, -INV_SQRT2], atol=1e-12)


def test_complete_rejects_bad_inputs():
    with pytest.raises(ValueError, match="orthonormal"):
        complete_to_unitary([np.array([1.0, 1.0])], 2)
    with pytest.raises(ValueError, match="columns"):
        complete_to_unitary([np.eye(2)[:, 0]] * 3, 2)
    with pytest.raises(ValueError, match="length"):
        complete_to_unitary([np.ones(3) / math.sqrt(3)], 2)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.integers(2, 8), st.data())
def test_complete_is_unitary_for_random_orthonormal_inputs(dim, data):
    count = data.draw(st.integers(0, dim))
    seed = data.draw(st.integers(0, 10**6))
    basis = random_unitary(dim, seed).entries[:, :count]
    out = complete_to_unitary([basis[:, i] for i in range(count)], dim)
    deviation = np.max(np.abs(out.entries.conj().T @ out.entries - np.eye(dim)))
    assert deviation < 1e-12
    if count:
        assert np.allclose(out.entries[:, :count], basis)
