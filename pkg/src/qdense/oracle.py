"""Brute-force second routes to the protocol's closed-form quantities.

Everything here recomputes results from raw amplitude arrays: the converted
state is built by contracting the defining isometry columns directly, branch
probabilities fall out as literal sums of squared magnitudes, and state
families are checked by explicit Gram matrices.  Nothing imports the
protocol or analysis modules, so agreement between the two routes is a real
cross-check rather than the same formula evaluated twice.
"""

from __future__ import annotations

import math
from itertools import product as iter_product

import numpy as np

from .channel import ChannelSpec

SIZE_LIMIT = 10**6
"""Maximum number of amplitudes a brute-force run is allowed to touch."""

# Known closed forms for the 3-level/2-level channel, used as cross-checks by
# `verify`: the six first-branch encodings ordered by (shift, phase) and the
# three second-branch encodings ordered by shift.
REFERENCE_ENCODINGS_3X2: dict[int, tuple[np.ndarray, ...]] = {
    0: (
        np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        np.array([[1, 0, 0], [0, -1, 0], [0, 0, 1]]),
        np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        np.array([[0, 0, 1], [1, 0, 0], [0, -1, 0]]),
        np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
        np.array([[0, -1, 0], [0, 0, 1], [1, 0, 0]]),
    ),
    1: (
        np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]]),
        np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
    ),
}


def _require_desk_scale(spec: ChannelSpec) -> None:
    amplitudes = (spec.sender_dim * spec.receiver_dim**2) ** spec.pairs
    if amplitudes > SIZE_LIMIT:
        raise ValueError(
            f"brute-force size limit exceeded: {amplitudes} amplitudes > {SIZE_LIMIT}"
        )


def _converted_amplitudes(spec: ChannelSpec) -> np.ndarray:
    """Post-conversion amplitudes, axes ``(p, q) * pairs + (q,) * pairs``.

    Each pair's conversion is applied as the isometry it acts as on the
    protocol's input subspace (auxiliary at level 0): particle level ``j``
    spreads the auxiliary over levels ``0..j`` with weights ``sqrt`` of the
    level steps divided by the pair coefficient.
    """
    p, q, n = spec.sender_dim, spec.receiver_dim, spec.pairs
    amps = np.ones((), dtype=complex)
    for k in range(n):
        pair = np.zeros((p, q), dtype=complex)
        pair[np.arange(q), np.arange(q)] = spec.alphas[k]
        amps = np.tensordot(amps, pair, axes=0)

    squared = spec.alphas**2
    for k in range(n):
        steps = np.sqrt(np.maximum(np.diff(squared[k], prepend=0.0), 0.0))
        isometry = np.zeros((p, q, p), dtype=complex)  # (level out, aux out, level in)
        for j in range(p):
            if j < q:
                column = steps.copy()
                column[j + 1 :] = 0.0
                isometry[j, :, j] = column / spec.alphas[k, j]
            else:
                isometry[j, 0, j] = 1.0
        amps = np.tensordot(amps, isometry, axes=([2 * k], [2]))
        amps = np.moveaxis(amps, -2, 2 * k)  # particle back in place, auxiliary appended
    return amps


def brute_branch_probabilities(
    spec: ChannelSpec,
) -> list[tuple[tuple[int, ...], float]]:
    """Auxiliary outcome probabilities summed directly over amplitudes."""
    _require_desk_scale(spec)
    amps = _converted_amplitudes(spec)
    n, q = spec.pairs, spec.receiver_dim
    masses = (np.abs(amps) ** 2).sum(axis=tuple(range(2 * n)))
    return [
        (digits, float(masses[digits]))
        for digits in iter_product(range(q), repeat=n)
    ]


def _branch_pair_states(
    sender_dim: int, receiver_dim: int, result: int, divisor: int
) -> np.ndarray:
    p, q = sender_dim, receiver_dim
    states = []
    for shift in range(p):
        for phase in range(q - result):
            vec = np.zeros(p * q, dtype=complex)
            for j in range(result, q):
                vec[((j + shift) % p) * q + j] = np.exp(2j * np.pi * j * phase / divisor)
            states.append(vec / math.sqrt(q - result))
    return np.stack(states)


def brute_orthogonality(
    sender_dim: int, receiver_dim: int, result: int, phase_divisor: str = "q-r"
) -> float:
    """Largest overlap magnitude between distinct encoded states of one branch."""
    q = receiver_dim
    if not 0 <= result <= q - 1:
        raise ValueError(f"result {result} out of range 0..{q - 1}")
    if phase_divisor not in ("q-r", "q"):
        raise ValueError(f"phase_divisor must be 'q-r' or 'q', got {phase_divisor!r}")
    divisor = q - result if phase_divisor == "q-r" else q
    states = _branch_pair_states(sender_dim, receiver_dim, result, divisor)
    gram = states.conj() @ states.T
    np.fill_diagonal(gram, 0.0)
    return float(np.max(np.abs(gram)))


def brute_average_information(spec: ChannelSpec) -> float:
    """Average information recomputed from projection masses and counted bases.

    Branch probabilities come from :func:`brute_branch_probabilities`; the
    per-branch message count is the cardinality of the explicitly built
    encoded product family, admitted only after its members verify as
    orthonormal (non-orthogonal states would not be exactly countable).
    """
    _require_desk_scale(spec)
    p, q = spec.sender_dim, spec.receiver_dim
    counts = {}
    for result in range(q):
        states = _branch_pair_states(p, q, result, q - result)
        gram = states.conj() @ states.T
        if np.max(np.abs(gram - np.eye(len(states)))) > 1e-10:
            raise ValueError(f"encoded family for result {result} is not orthonormal")
        counts[result] = len(states)
    total = 0.0
    for digits, probability in brute_branch_probabilities(spec):
        count = math.prod(counts[r] for r in digits)
        total += probability * math.log2(count)
    return total
