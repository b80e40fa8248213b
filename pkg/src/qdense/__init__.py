"""Probabilistic dense coding over asymmetric qudit channels.

A state-vector simulator for the full protocol (conversion of non-maximal
pairs into orthogonal branches, auxiliary measurement, shift-and-phase
encoding, projective decoding), closed-form information accounting, and
brute-force oracles that recompute every quantity a second way.
"""

from .analysis import (
    BranchRow,
    CapacityReport,
    average_information,
    branch_message_count,
    capacity_surface,
    classical_cost,
    report,
)
from .channel import ChannelSpec, random_channel_spec
from .oracle import (
    brute_average_information,
    brute_branch_probabilities,
    brute_orthogonality,
)
from .protocol import (
    BranchOutcome,
    EncodingLabel,
    Message,
    ProtocolTrace,
    branch_probabilities,
    conversion_step,
    encoded_basis,
    encoding_operator,
    initial_state,
    labels_to_message,
    measure_branches,
    message_to_labels,
    purification_unitary,
    run_protocol,
    state_with_auxiliaries,
)
from .qstate import (
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

__version__ = "0.1.0"

__all__ = [
    "BranchOutcome",
    "BranchRow",
    "CapacityReport",
    "ChannelSpec",
    "EncodingLabel",
    "Message",
    "MixedRadixSpace",
    "Operator",
    "ProtocolTrace",
    "StateVector",
    "apply",
    "average_information",
    "basis_state",
    "branch_message_count",
    "branch_probabilities",
    "brute_average_information",
    "brute_branch_probabilities",
    "brute_orthogonality",
    "capacity_surface",
    "classical_cost",
    "complete_to_unitary",
    "conversion_step",
    "encoded_basis",
    "encoding_operator",
    "initial_state",
    "inner_product",
    "labels_to_message",
    "measure_branches",
    "measure_computational",
    "message_to_labels",
    "project",
    "purification_unitary",
    "random_channel_spec",
    "report",
    "run_protocol",
    "state_with_auxiliaries",
    "tensor",
]
