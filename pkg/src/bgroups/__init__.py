"""Partition spectra of rigid Butler groups with cyclic regulator quotient.

A group is given by its rigid pieces; invariant data (types, ranks, mu)
determine the near-isomorphism class and the set of partitions realized by
its direct decompositions.
"""

from bgroups.constructions import (
    EXAMPLE_NAMES,
    NamedExample,
    chain_group,
    corner_group,
    homogeneous_free,
    named_example,
    rigid_indecomposable,
    sn2_realizer,
)
from bgroups.decomp import Decomposition, enumerate_decompositions, partition_spectrum, realizes
from bgroups.errors import (
    BGroupError,
    InputError,
    ParseError,
    PreconditionError,
    ResourceError,
    ValidationError,
)
from bgroups.groups import (
    BGroup,
    InvariantData,
    PrimeType,
    RigidPiece,
    direct_sum,
    frame_of,
    group_from_json,
    group_to_json,
    invariant_data,
    is_clipped,
    is_indecomposable,
    merge_overlap,
    mu_invariants,
    near_iso_equal,
    realize_from_invariants,
    validate_group,
)
from bgroups.partitions import (
    Partition,
    PartitionFamily,
    enumerate_all,
    family_C,
    family_S,
    family_product,
    hook_report,
    is_maximal_hooked,
)
from bgroups.search import (
    SearchBudget,
    Status,
    TheoremTable,
    Verdict,
    blago_pair_check,
    obstruction_screen,
    search_realizer,
    verify_theorem_table,
)

__version__ = "0.1.0"

__all__ = [
    "BGroup",
    "BGroupError",
    "Decomposition",
    "EXAMPLE_NAMES",
    "InputError",
    "InvariantData",
    "NamedExample",
    "ParseError",
    "Partition",
    "PartitionFamily",
    "PreconditionError",
    "PrimeType",
    "ResourceError",
    "RigidPiece",
    "SearchBudget",
    "Status",
    "TheoremTable",
    "ValidationError",
    "Verdict",
    "blago_pair_check",
    "chain_group",
    "corner_group",
    "direct_sum",
    "enumerate_all",
    "enumerate_decompositions",
    "family_C",
    "family_S",
    "family_product",
    "frame_of",
    "group_from_json",
    "group_to_json",
    "homogeneous_free",
    "hook_report",
    "invariant_data",
    "is_clipped",
    "is_indecomposable",
    "is_maximal_hooked",
    "merge_overlap",
    "mu_invariants",
    "named_example",
    "near_iso_equal",
    "obstruction_screen",
    "partition_spectrum",
    "realize_from_invariants",
    "realizes",
    "rigid_indecomposable",
    "search_realizer",
    "sn2_realizer",
    "validate_group",
    "verify_theorem_table",
]
