"""Mixed-radix complex state vectors and the linear algebra built on them.

Subsystems are indexed 0..n-1 and the global amplitude index is mixed-radix
with the FIRST subsystem most significant, i.e. the C-order convention of
``amplitudes.reshape(dims)``.  All values are immutable once constructed and
every function here is pure (randomness enters only through an explicit
generator argument), so states and operators are safe to share between
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import prod
from typing import Sequence

import numpy as np

NORM_ATOL = 1e-10
"""Tolerance for state normalization and basis orthonormality checks."""

UNITARY_ATOL = 1e-12
"""Max-entry tolerance of ``U†U - I`` for operators flagged unitary."""

_ZERO_PROJECTION = 1e-24  # squared norms below this count as empty branches


@dataclass(frozen=True)
class MixedRadixSpace:
    """Ordered subsystem dimensions defining one global amplitude index."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a space needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def index_of(self, digits: Sequence[int]) -> int:
        """Global index of a computational-basis label (first digit most significant)."""
        if len(digits) != len(self.dims):
            raise ValueError(f"expected {len(self.dims)} digits, got {len(digits)}")
        index = 0
        for digit, dim in zip(digits, self.dims):
            if not 0 <= digit < dim:
                raise ValueError(f"digit {digit} out of range for dimension {dim}")
            index = index * dim + digit
        return index

    def digits_of(self, index: int) -> tuple[int, ...]:
        """Inverse of :meth:`index_of`."""
        if not 0 <= index < self.total_dim:
            raise ValueError(f"index {index} out of range for total dimension {self.total_dim}")
        digits = []
        for dim in reversed(self.dims):
            index, digit = divmod(index, dim)
            digits.append(digit)
        return tuple(reversed(digits))


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state over a :class:`MixedRadixSpace`."""

    space: MixedRadixSpace
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (self.space.total_dim,):
            raise ValueError(
                f"expected {self.space.total_dim} amplitudes for dims {self.space.dims}, "
                f"got {amps.size}"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise ValueError(f"state is not normalized: squared norm {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def __repr__(self) -> str:
        compact = all(d <= 10 for d in self.space.dims)
        terms = []
        support = np.flatnonzero(np.abs(self.amplitudes) > 1e-9)
        for idx in support[:4]:
            digits = self.space.digits_of(int(idx))
            label = "".join(map(str, digits)) if compact else ",".join(map(str, digits))
            terms.append(f"({self.amplitudes[idx]:.4g})|{label}>")
        if len(support) > 4:
            terms.append("...")
        return f"StateVector(dims={self.space.dims}: {' + '.join(terms)})"


@dataclass(frozen=True, eq=False)
class Operator:
    """A square complex matrix; ``unitary=True`` enforces ``U†U = I``."""

    entries: np.ndarray
    unitary: bool = False

    def __post_init__(self) -> None:
        mat = np.array(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator entries must be square, got shape {mat.shape}")
        if self.unitary:
            deviation = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
            if deviation >= UNITARY_ATOL:
                raise ValueError(f"operator flagged unitary deviates from U†U = I by {deviation:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def basis_state(dims: Sequence[int], digits: Sequence[int]) -> StateVector:
    """Computational-basis state |digits> on the given subsystem dimensions."""
    space = MixedRadixSpace(tuple(dims))
    amps = np.zeros(space.total_dim, dtype=complex)
    amps[space.index_of(digits)] = 1.0
    return StateVector(space, amps)


def tensor(states: Sequence[StateVector]) -> StateVector:
    """Kronecker product of states, subsystem lists concatenated in order."""
    if not states:
        raise ValueError("tensor product of an empty list is undefined")
    dims = sum((s.space.dims for s in states), ())
    amps = reduce(np.kron, (s.amplitudes for s in states))
    return StateVector(MixedRadixSpace(dims), amps)


def _validated_targets(space: MixedRadixSpace, targets: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(t) for t in targets)
    if not out:
        raise ValueError("need at least one target subsystem")
    if len(set(out)) != len(out):
        raise ValueError(f"duplicate target subsystems: {out}")
    if any(t < 0 or t >= len(space.dims) for t in out):
        raise ValueError(f"target subsystems {out} out of range for dims {space.dims}")
    return out


def apply(op: Operator, state: StateVector, targets: Sequence[int]) -> StateVector:
    """Act with ``op`` on the listed subsystems (identity elsewhere).

    The operator's row index runs over the target subsystems in the given
    order, first target most significant.
    """
    targets = _validated_targets(state.space, targets)
    target_dim = prod(state.space.dims[t] for t in targets)
    if op.dim != target_dim:
        raise ValueError(
            f"operator dimension {op.dim} does not match target dimension product {target_dim}"
        )
    arr = state.amplitudes.reshape(state.space.dims)
    moved = np.moveaxis(arr, targets, range(len(targets)))
    mat = moved.reshape(target_dim, -1)
    out = (op.entries @ mat).reshape(moved.shape)
    out = np.moveaxis(out, range(len(targets)), targets)
    return StateVector(state.space, out.reshape(-1))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.space.dims != b.space.dims:
        raise ValueError(f"space mismatch: {a.space.dims} vs {b.space.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def measure_computational(
    state: StateVector, targets: Sequence[int], rng: np.random.Generator
) -> tuple[tuple[int, ...], float, StateVector]:
    """Sample a computational-basis measurement of the target subsystems.

    Returns the outcome digits, their exact Born probability, and the
    renormalized post-measurement state.  Zero-probability outcomes are
    never sampled.
    """
    targets = _validated_targets(state.space, targets)
    arr = state.amplitudes.reshape(state.space.dims)
    moved = np.moveaxis(arr, targets, range(len(targets)))
    outcome_shape = moved.shape[: len(targets)]
    flat = moved.reshape(prod(outcome_shape), -1)
    probs = np.einsum("ij,ij->i", flat, flat.conj()).real
    total = float(probs.sum())
    if total <= 0.0:
        raise ValueError("cannot measure a zero-norm state")
    cumulative = np.cumsum(probs)
    draw = rng.random() * total
    # side="right" skips zero-width bins, so zero-probability outcomes are unreachable
    index = min(int(np.searchsorted(cumulative, draw, side="right")), len(probs) - 1)
    probability = float(probs[index])
    collapsed = np.zeros_like(flat)
    collapsed[index] = flat[index] / np.sqrt(probability)
    collapsed = np.moveaxis(collapsed.reshape(moved.shape), range(len(targets)), targets)
    outcome = tuple(int(d) for d in np.unravel_index(index, outcome_shape))
    return outcome, probability, StateVector(state.space, collapsed.reshape(-1))


def project(
    state: StateVector, targets: Sequence[int], basis: Sequence[StateVector]
) -> list[tuple[float, StateVector | None]]:
    """Project the target subsystems onto an orthonormal basis of their subspace.

    Returns one ``(probability, collapsed state)`` entry per basis member, in
    input order.  Probabilities are squared projection norms and sum to 1 when
    the basis is complete on the target subspace.  Members carrying no weight
    get ``None`` in place of a collapsed state.
    """
    targets = _validated_targets(state.space, targets)
    target_dims = tuple(state.space.dims[t] for t in targets)
    if not basis:
        raise ValueError("projection basis must be non-empty")
    for member in basis:
        if member.space.dims != target_dims:
            raise ValueError(
                f"basis states must live on the target subsystems (dims {target_dims}), "
                f"got {member.space.dims}"
            )
    stacked = np.stack([member.amplitudes for member in basis])
    gram = stacked.conj() @ stacked.T
    if np.max(np.abs(gram - np.eye(len(basis)))) > NORM_ATOL:
        raise ValueError("projection basis is not orthonormal within 1e-10")

    arr = state.amplitudes.reshape(state.space.dims)
    moved = np.moveaxis(arr, targets, range(len(targets)))
    rest_shape = moved.shape[len(targets):]
    flat = moved.reshape(prod(target_dims), -1)
    coefficients = stacked.conj() @ flat
    probs = np.einsum("ij,ij->i", coefficients, coefficients.conj()).real

    results: list[tuple[float, StateVector | None]] = []
    for i, member in enumerate(basis):
        probability = float(probs[i])
        if probability <= _ZERO_PROJECTION:
            results.append((probability, None))
            continue
        component = np.outer(member.amplitudes, coefficients[i] / np.sqrt(probability))
        component = component.reshape(target_dims + rest_shape)
        component = np.moveaxis(component, range(len(targets)), targets)
        results.append((probability, StateVector(state.space, component.reshape(-1))))
    return results


def complete_to_unitary(columns: Sequence[np.ndarray], dim: int) -> Operator:
    """Extend orthonormal columns to a ``dim x dim`` unitary.

    The missing columns are produced by Gram-Schmidt against the standard
    basis in index order, which makes the result deterministic.  The inputs
    become the first columns of the returned operator.
    """
    cols = [np.asarray(c, dtype=complex).reshape(-1) for c in columns]
    if len(cols) > dim:
        raise ValueError(f"got {len(cols)} columns for dimension {dim}")
    for c in cols:
        if c.shape != (dim,):
            raise ValueError(f"columns must have length {dim}, got {c.shape}")
    if cols:
        stacked = np.stack(cols, axis=1)
        gram = stacked.conj().T @ stacked
        if np.max(np.abs(gram - np.eye(len(cols)))) > NORM_ATOL:
            raise ValueError("input columns are not orthonormal within 1e-10")

    basis = list(cols)
    for i in range(dim):
        if len(basis) == dim:
            break
        candidate = np.zeros(dim, dtype=complex)
        candidate[i] = 1.0
        for _ in range(2):  # second pass keeps the accumulated error negligible
            for existing in basis:
                candidate = candidate - np.vdot(existing, candidate) * existing
        norm = float(np.linalg.norm(candidate))
        if norm > 1e-8:
            basis.append(candidate / norm)
    if len(basis) != dim:
        raise ValueError("could not complete the given columns to a unitary")
    return Operator(np.stack(basis, axis=1), unitary=True)
