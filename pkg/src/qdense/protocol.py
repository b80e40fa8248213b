"""The dense-coding protocol over non-maximally entangled asymmetric pairs.

One round proceeds in four steps.  The sender attaches one ``q``-level
auxiliary per pair and applies a local conversion unitary that sorts each
pair into orthogonal branches indexed by the auxiliary level.  Measuring the
auxiliaries then leaves the pairs in a known branch state: a uniform
superposition of the matched levels from the measured result upward.  The
sender encodes a classical message by applying shift-and-phase unitaries to
her particles and ships them; the receiver projects each pair onto the
branch's encoded basis, which is orthonormal, so decoding is exact.

The subsystem layout is ``[1, 1', 2, 2', ..., N, N']`` for the pairs
(sender particle first) with the auxiliaries appended as ``[a_1 ... a_N]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product
from math import prod, sqrt
from typing import Literal

import numpy as np

from .channel import ChannelSpec
from .qstate import (
    MixedRadixSpace,
    Operator,
    StateVector,
    apply,
    basis_state,
    complete_to_unitary,
    measure_computational,
    project,
    tensor,
)

Message = int

PhaseDivisor = Literal["q-r", "q"]
"""Divisor in the encoding phase exponent.  ``"q-r"`` (the default) matches
the number of levels an encoded branch actually spans and makes every branch
family orthonormal.  ``"q"`` is the naive choice; it breaks orthogonality
for branches past the first whenever the receiver has three or more levels,
and is kept only so verification can demonstrate that failure."""


@dataclass(frozen=True)
class BranchOutcome:
    """Auxiliary measurement results, one digit per pair, with their probability."""

    results: tuple[int, ...]
    probability: float


@dataclass(frozen=True)
class EncodingLabel:
    """Per-pair ``(shift, phase)`` indices selecting one encoding unitary each."""

    labels: tuple[tuple[int, int], ...]


@dataclass(frozen=True, eq=False)
class ProtocolTrace:
    """Full record of one protocol round."""

    spec: ChannelSpec
    branch: BranchOutcome
    message: Message
    label: EncodingLabel
    decoded: Message
    branch_probability: float
    success: bool


def initial_state(spec: ChannelSpec) -> StateVector:
    """Shared channel state: the product over pairs of their level superpositions."""
    return tensor([_pair_state(spec, k) for k in range(spec.pairs)])


def _pair_state(spec: ChannelSpec, pair: int) -> StateVector:
    p, q = spec.sender_dim, spec.receiver_dim
    amps = np.zeros((p, q), dtype=complex)
    amps[np.arange(q), np.arange(q)] = spec.alphas[pair]
    return StateVector(MixedRadixSpace((p, q)), amps.reshape(-1))


def state_with_auxiliaries(spec: ChannelSpec) -> StateVector:
    """Channel state with one zeroed ``q``-level auxiliary appended per pair."""
    q = spec.receiver_dim
    auxiliaries = [basis_state((q,), (0,)) for _ in range(spec.pairs)]
    return tensor([initial_state(spec), *auxiliaries])


def purification_unitary(spec: ChannelSpec, pair: int) -> Operator:
    """Conversion unitary on (sender particle, auxiliary) of one pair.

    Block-diagonal over the particle level ``j``: for ``j`` below the
    receiver dimension the block rotates the auxiliary from level 0 into a
    superposition whose component on level ``r`` is ``sqrt`` of the r-th
    level step divided by ``alphas[pair, j]``; higher particle levels leave
    the auxiliary alone.  The unused block columns are completed
    deterministically.
    """
    p, q = spec.sender_dim, spec.receiver_dim
    steps = np.sqrt(spec.level_steps()[pair])
    mat = np.zeros((p * q, p * q), dtype=complex)
    for j in range(p):
        if j < q:
            column = steps.astype(complex).copy()
            column[j + 1 :] = 0.0
            column /= spec.alphas[pair, j]
            block = complete_to_unitary([column], q).entries
        else:
            block = np.eye(q, dtype=complex)
        mat[j * q : (j + 1) * q, j * q : (j + 1) * q] = block
    return Operator(mat, unitary=True)


def _total_dims(spec: ChannelSpec) -> tuple[int, ...]:
    p, q = spec.sender_dim, spec.receiver_dim
    return (p, q) * spec.pairs + (q,) * spec.pairs


def _check_total_layout(state: StateVector, spec: ChannelSpec) -> None:
    expected = _total_dims(spec)
    if state.space.dims != expected:
        raise ValueError(
            f"state layout mismatch: expected dims {expected}, got {state.space.dims}"
        )


def conversion_step(state: StateVector, spec: ChannelSpec) -> StateVector:
    """Apply every pair's conversion unitary to the state with auxiliaries."""
    _check_total_layout(state, spec)
    out = state
    for k in range(spec.pairs):
        unitary = purification_unitary(spec, k)
        out = apply(unitary, out, (2 * k, 2 * spec.pairs + k))
    return out


def branch_probabilities(spec: ChannelSpec) -> list[BranchOutcome]:
    """All auxiliary outcomes with their closed-form probabilities, in digit order.

    The probability of results ``(r_1 ... r_N)`` is the product over pairs of
    ``(q - r_k)`` times the ``r_k``-th level step of pair ``k``.
    """
    q = spec.receiver_dim
    steps = spec.level_steps()
    outcomes = []
    for digits in iter_product(range(q), repeat=spec.pairs):
        probability = 1.0
        for k, r in enumerate(digits):
            probability *= (q - r) * steps[k, r]
        outcomes.append(BranchOutcome(digits, float(min(max(probability, 0.0), 1.0))))
    return outcomes


def measure_branches(
    state: StateVector, spec: ChannelSpec, rng: np.random.Generator
) -> tuple[BranchOutcome, StateVector]:
    """Measure all auxiliaries and return the outcome plus the pair-only state.

    The returned state drops the measured auxiliaries; it is the product over
    pairs of the normalized matched-level superposition from the measured
    digit upward.
    """
    _check_total_layout(state, spec)
    n = spec.pairs
    results, probability, collapsed = measure_computational(
        state, tuple(range(2 * n, 3 * n)), rng
    )
    arr = collapsed.amplitudes.reshape(collapsed.space.dims)
    pair_amps = arr[(slice(None),) * (2 * n) + results]
    pair_state = StateVector(
        MixedRadixSpace(collapsed.space.dims[: 2 * n]), pair_amps.reshape(-1)
    )
    return BranchOutcome(results, probability), pair_state


def _unit_phase(numerator: int, denominator: int) -> complex:
    # half-turn phases kept exact so small cases stay integer-valued
    numerator %= denominator
    if numerator == 0:
        return 1.0 + 0.0j
    if 2 * numerator == denominator:
        return -1.0 + 0.0j
    return complex(np.exp(2j * np.pi * numerator / denominator))


@lru_cache(maxsize=None)
def encoding_operator(
    sender_dim: int,
    receiver_dim: int,
    result: int,
    shift: int,
    phase: int,
    phase_divisor: PhaseDivisor = "q-r",
) -> Operator:
    """Encoding unitary for one pair whose auxiliary gave ``result``.

    Columns ``result .. receiver_dim-1`` (the levels the branch state still
    occupies) map level ``j`` to level ``(j + shift) mod sender_dim`` with
    phase ``exp(2*pi*i * j * phase / divisor)``.  The remaining columns are
    completed by Gram-Schmidt against the standard basis in index order,
    which keeps the matrix a signed permutation in the half-turn cases.
    """
    p, q = sender_dim, receiver_dim
    if not 0 <= result <= q - 1:
        raise ValueError(f"result {result} out of range 0..{q - 1}")
    if not 0 <= shift <= p - 1:
        raise ValueError(f"shift {shift} out of range 0..{p - 1}")
    if not 0 <= phase <= q - 1 - result:
        raise ValueError(f"phase {phase} out of range 0..{q - 1 - result}")
    divisor = q - result if phase_divisor == "q-r" else q

    band = []
    for j in range(result, q):
        column = np.zeros(p, dtype=complex)
        column[(j + shift) % p] = _unit_phase(j * phase, divisor)
        band.append(column)
    completed = complete_to_unitary(band, p).entries

    mat = np.zeros((p, p), dtype=complex)
    mat[:, result:q] = completed[:, : len(band)]
    free = [j for j in range(p) if j < result or j >= q]
    mat[:, free] = completed[:, len(band):]
    return Operator(mat, unitary=True)


def _branch_pair_state(p: int, q: int, result: int) -> StateVector:
    amps = np.zeros((p, q), dtype=complex)
    for j in range(result, q):
        amps[j, j] = 1.0 / sqrt(q - result)
    return StateVector(MixedRadixSpace((p, q)), amps.reshape(-1))


@lru_cache(maxsize=None)
def _encoded_basis_cached(
    sender_dim: int, receiver_dim: int, result: int, phase_divisor: PhaseDivisor
) -> tuple[StateVector, ...]:
    p, q = sender_dim, receiver_dim
    divisor = q - result if phase_divisor == "q-r" else q
    space = MixedRadixSpace((p, q))
    states = []
    for shift in range(p):
        for phase in range(q - result):
            amps = np.zeros((p, q), dtype=complex)
            for j in range(result, q):
                amps[(j + shift) % p, j] = _unit_phase(j * phase, divisor)
            states.append(StateVector(space, amps.reshape(-1) / sqrt(q - result)))
    return tuple(states)


def encoded_basis(
    sender_dim: int,
    receiver_dim: int,
    result: int,
    phase_divisor: PhaseDivisor = "q-r",
) -> list[StateVector]:
    """All encoded two-particle states of one branch, ordered by (shift, phase).

    Each state equals the corresponding encoding operator applied (on the
    sender side) to the branch pair state.  With the default divisor the
    family is orthonormal and therefore exactly distinguishable.
    """
    q = receiver_dim
    if not 0 <= result <= q - 1:
        raise ValueError(f"result {result} out of range 0..{q - 1}")
    return list(_encoded_basis_cached(sender_dim, receiver_dim, result, phase_divisor))


def _branch_radices(spec: ChannelSpec, branch: BranchOutcome) -> list[int]:
    p, q = spec.sender_dim, spec.receiver_dim
    if len(branch.results) != spec.pairs:
        raise ValueError(
            f"branch has {len(branch.results)} results for {spec.pairs} pairs"
        )
    return [p * (q - r) for r in branch.results]


def labels_to_message(
    label: EncodingLabel, branch: BranchOutcome, spec: ChannelSpec
) -> Message:
    """Mixed-radix encode per-pair labels; pair 1 most significant, shift over phase."""
    p, q = spec.sender_dim, spec.receiver_dim
    radices = _branch_radices(spec, branch)
    if len(label.labels) != spec.pairs:
        raise ValueError(f"label has {len(label.labels)} entries for {spec.pairs} pairs")
    value = 0
    for (shift, phase), r, radix in zip(label.labels, branch.results, radices):
        if not 0 <= shift <= p - 1:
            raise ValueError(f"shift {shift} out of range 0..{p - 1}")
        if not 0 <= phase <= q - 1 - r:
            raise ValueError(f"phase {phase} out of range 0..{q - 1 - r}")
        value = value * radix + shift * (q - r) + phase
    return value


def message_to_labels(
    message: Message, branch: BranchOutcome, spec: ChannelSpec
) -> EncodingLabel:
    """Inverse of :func:`labels_to_message`."""
    q = spec.receiver_dim
    radices = _branch_radices(spec, branch)
    capacity = prod(radices)
    if not 0 <= message < capacity:
        raise ValueError(
            f"message {message} outside 0..{capacity - 1} for branch {branch.results}"
        )
    digits = []
    remainder = message
    for radix in reversed(radices):
        remainder, digit = divmod(remainder, radix)
        digits.append(digit)
    digits.reverse()
    labels = tuple(
        (digit // (q - r), digit % (q - r)) for digit, r in zip(digits, branch.results)
    )
    return EncodingLabel(labels)


def run_protocol(
    spec: ChannelSpec,
    message: Message | Literal["random"] = "random",
    *,
    rng: np.random.Generator,
    strict: bool = False,
) -> ProtocolTrace:
    """Execute one full round: convert, measure, encode, transmit, decode.

    The message capacity depends on the sampled branch.  ``"random"`` draws
    the message uniformly after the branch is known (the sender encodes
    knowing her auxiliary results).  A fixed message that exceeds the
    sampled branch's capacity is clamped to the largest encodable value, or
    rejected when ``strict`` is set; the trace records the message actually
    encoded.
    """
    p, q = spec.sender_dim, spec.receiver_dim
    converted = conversion_step(state_with_auxiliaries(spec), spec)
    branch, pair_state = measure_branches(converted, spec, rng)
    capacity = prod(_branch_radices(spec, branch))

    if message == "random":
        sent = int(rng.integers(capacity))
    else:
        sent = int(message)
        if sent < 0:
            raise ValueError(f"message must be nonnegative, got {sent}")
        if sent >= capacity:
            if strict:
                raise ValueError(
                    f"message {sent} out of range for branch {branch.results} "
                    f"(capacity {capacity})"
                )
            sent = capacity - 1
    label = message_to_labels(sent, branch, spec)

    encoded = pair_state
    for k, (shift, phase) in enumerate(label.labels):
        op = encoding_operator(p, q, branch.results[k], shift, phase)
        encoded = apply(op, encoded, (2 * k,))

    decoded_labels = []
    current = encoded
    for k in range(spec.pairs):
        r = branch.results[k]
        basis = encoded_basis(p, q, r)
        outcomes = project(current, (2 * k, 2 * k + 1), basis)
        best = max(range(len(outcomes)), key=lambda i: outcomes[i][0])
        decoded_labels.append((best // (q - r), best % (q - r)))
        collapsed = outcomes[best][1]
        if collapsed is not None:
            current = collapsed
    decoded = labels_to_message(EncodingLabel(tuple(decoded_labels)), branch, spec)

    return ProtocolTrace(
        spec=spec,
        branch=branch,
        message=sent,
        label=label,
        decoded=decoded,
        branch_probability=branch.probability,
        success=decoded == sent,
    )
