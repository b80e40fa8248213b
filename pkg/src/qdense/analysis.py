"""Information accounting for the dense-coding protocol.

Everything here is closed form: branch message counts, the branch-weighted
average information the receiver obtains, the classical side-channel cost of
announcing the auxiliary results, and the capacity surface over the
two-pair qutrit-qubit channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channel import ChannelSpec
from .protocol import branch_probabilities


class BranchRow(NamedTuple):
    results: tuple[int, ...]
    probability: float
    message_count: int
    log2_count: float


@dataclass(frozen=True, eq=False)
class CapacityReport:
    """Branch table plus the aggregate information figures of one channel."""

    spec: ChannelSpec
    branch_rows: tuple[BranchRow, ...]
    average_information: float
    classical_cost: float
    maximal_information: float


def branch_message_count(
    sender_dim: int, receiver_dim: int, results: Sequence[int]
) -> int:
    """Number of distinguishable messages of a branch: product of p*(q - r_k)."""
    count = 1
    for r in results:
        if not 0 <= r <= receiver_dim - 1:
            raise ValueError(f"result digit {r} out of range 0..{receiver_dim - 1}")
        count *= sender_dim * (receiver_dim - r)
    return count


def average_information(spec: ChannelSpec) -> float:
    """Expected bits per round: sum over branches of probability * log2(count)."""
    p, q = spec.sender_dim, spec.receiver_dim
    return sum(
        b.probability * math.log2(branch_message_count(p, q, b.results))
        for b in branch_probabilities(spec)
    )


def classical_cost(spec: ChannelSpec) -> float:
    """Side-channel bits needed to announce the auxiliary results: N * log2(q)."""
    return spec.pairs * math.log2(spec.receiver_dim)


def capacity_surface(steps: int) -> np.ndarray:
    """Average information of the two-pair 3 x 2 channel on a square grid.

    Both axes run over the squared first coefficient of one pair, from
    ``0.5/steps`` to the maximally entangled value 0.5 in ``steps`` uniform
    increments (0 is excluded: the conversion is undefined there).  Returns a
    ``(steps**2, 3)`` array of rows ``(alpha01_sq, alpha02_sq, i_ave)`` in
    row-major order, first axis outermost.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    values = [(i + 1) * 0.5 / steps for i in range(steps)]
    rows = []
    for first in values:
        for second in values:
            spec = ChannelSpec.from_squared(
                3, 2, [[first, 1.0 - first], [second, 1.0 - second]]
            )
            rows.append((first, second, average_information(spec)))
    return np.array(rows, dtype=float)


def report(spec: ChannelSpec) -> CapacityReport:
    """Full capacity report: branch table (in digit order) and aggregates."""
    p, q = spec.sender_dim, spec.receiver_dim
    rows = []
    for branch in branch_probabilities(spec):
        count = branch_message_count(p, q, branch.results)
        rows.append(
            BranchRow(branch.results, branch.probability, count, math.log2(count))
        )
    return CapacityReport(
        spec=spec,
        branch_rows=tuple(rows),
        average_information=average_information(spec),
        classical_cost=classical_cost(spec),
        maximal_information=spec.pairs * math.log2(p * q),
    )
