"""Channel description shared by the protocol and its brute-force checks.

A channel is a collection of entangled particle pairs.  One particle of each
pair lives in a ``sender_dim``-level space, the other in a smaller
``receiver_dim``-level space, and the pair state is a real superposition of
the matched levels ``|rr>`` weighted by the coefficient table ``alphas``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

COEFF_ATOL = 1e-12
"""Tolerance on per-pair squared-coefficient sums."""


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """Pair count, subsystem dimensions and entanglement coefficients.

    ``alphas[k, r]`` is the amplitude on level ``|rr>`` of pair ``k``.  Each
    row must be unit-norm, ordered by increasing magnitude (the conversion
    step relies on the level differences being nonnegative) and must start
    with a nonzero coefficient, otherwise the conversion is ill-defined.
    """

    pairs: int
    sender_dim: int
    receiver_dim: int
    alphas: np.ndarray

    def __post_init__(self) -> None:
        if self.pairs < 1:
            raise ValueError(f"need at least one pair, got pairs={self.pairs}")
        if not self.sender_dim > self.receiver_dim >= 2:
            raise ValueError(
                "invalid channel dimensions: requires p > q >= 2 "
                f"(got p={self.sender_dim}, q={self.receiver_dim})"
            )
        table = np.array(self.alphas, dtype=float)
        if table.shape != (self.pairs, self.receiver_dim):
            raise ValueError(
                f"coefficient table must have shape (pairs, receiver_dim) = "
                f"({self.pairs}, {self.receiver_dim}), got {table.shape}"
            )
        if not np.all(np.isfinite(table)):
            raise ValueError("coefficients must be finite real numbers")
        sums = np.sum(table**2, axis=1)
        if np.max(np.abs(sums - 1.0)) > COEFF_ATOL:
            raise ValueError(
                f"squared coefficients of each pair must sum to 1, got sums {sums.tolist()}"
            )
        magnitudes = np.abs(table)
        if np.min(np.diff(magnitudes, axis=1)) < -1e-12:
            raise ValueError(
                "coefficients of each pair must be ordered by nondecreasing magnitude"
            )
        if np.min(magnitudes[:, 0]) <= 1e-15:
            raise ValueError(
                "the first coefficient of each pair must be nonzero "
                "(a vanishing smallest coefficient makes the conversion ill-defined)"
            )
        table.setflags(write=False)
        object.__setattr__(self, "alphas", table)

    @classmethod
    def from_squared(
        cls,
        sender_dim: int,
        receiver_dim: int,
        alphas_squared: Sequence[Sequence[float]] | Sequence[float],
        pairs: int | None = None,
    ) -> "ChannelSpec":
        """Build a channel from squared coefficients (one row per pair)."""
        table = np.array(alphas_squared, dtype=float)
        if table.ndim == 1:
            table = table[None, :]
        if table.ndim != 2:
            raise ValueError("squared coefficients must be a row per pair")
        if np.any(table < 0):
            raise ValueError("squared coefficients must be nonnegative")
        if pairs is not None and pairs != table.shape[0]:
            raise ValueError(
                f"pairs={pairs} does not match the {table.shape[0]} coefficient rows given"
            )
        return cls(
            pairs=table.shape[0],
            sender_dim=sender_dim,
            receiver_dim=receiver_dim,
            alphas=np.sqrt(table),
        )

    @classmethod
    def maximal(cls, pairs: int, sender_dim: int, receiver_dim: int) -> "ChannelSpec":
        """Channel with every pair maximally entangled (all coefficients equal)."""
        row = [1.0 / receiver_dim] * receiver_dim
        return cls.from_squared(sender_dim, receiver_dim, [row] * pairs)

    @property
    def alphas_squared(self) -> np.ndarray:
        return self.alphas**2

    def level_steps(self) -> np.ndarray:
        """Per-pair differences of consecutive squared coefficients.

        ``level_steps()[k, r]`` is ``alphas[k, r]**2 - alphas[k, r-1]**2``
        (with an implicit 0 before the first level), clipped at 0 so that
        coefficient ties do not produce negative rounding residue.
        """
        return np.maximum(np.diff(self.alphas_squared, axis=1, prepend=0.0), 0.0)

    def __repr__(self) -> str:
        rows = [[round(x, 12) for x in row] for row in self.alphas_squared.tolist()]
        return (
            f"ChannelSpec(pairs={self.pairs}, sender_dim={self.sender_dim}, "
            f"receiver_dim={self.receiver_dim}, alphas_sq={rows})"
        )


def random_channel_spec(
    rng: np.random.Generator,
    *,
    pairs: int | None = None,
    sender_dim: int | None = None,
    receiver_dim: int | None = None,
    max_pairs: int = 2,
) -> ChannelSpec:
    """Draw a valid random channel (dimensions up to 5 x 4) for testing."""
    if receiver_dim is None:
        receiver_dim = int(rng.integers(2, 5))
    if sender_dim is None:
        sender_dim = int(rng.integers(receiver_dim + 1, 6))
    if pairs is None:
        pairs = int(rng.integers(1, max_pairs + 1))
    raw = np.sort(rng.uniform(0.15, 1.0, size=(pairs, receiver_dim)), axis=1)
    rows = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    return ChannelSpec(pairs, sender_dim, receiver_dim, rows)
