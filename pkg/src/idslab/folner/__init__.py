"""Følner sequences, boundaries and the isoperimetric property."""

from .boundary import (
    BoundaryScan,
    h_approximate,
    h_boundary,
    isoperimetric_quotient,
    isoperimetric_transfer_bound,
    scan_h_boundary,
    strip_inner_collar,
    topological_boundary,
)
from .equivalence import (
    DEFAULT_DECAY_THRESHOLD,
    EquivalenceVerdict,
    FolnerRow,
    IsoperimetricReport,
    check_folner_isoperimetric_equivalence,
)
from .sequences import (
    FolnerSequence,
    Provenance,
    ProvenanceKind,
    ball_growth_quotient,
    cells_inside,
    extract_tempered_subsequence,
    folner_defect,
    metric_ball_sequence,
    select_radii,
    tempered_indices,
    temperedness_quotient,
)

__all__ = [
    "BoundaryScan",
    "h_approximate",
    "h_boundary",
    "isoperimetric_quotient",
    "isoperimetric_transfer_bound",
    "scan_h_boundary",
    "strip_inner_collar",
    "topological_boundary",
    "DEFAULT_DECAY_THRESHOLD",
    "EquivalenceVerdict",
    "FolnerRow",
    "IsoperimetricReport",
    "check_folner_isoperimetric_equivalence",
    "FolnerSequence",
    "Provenance",
    "ProvenanceKind",
    "ball_growth_quotient",
    "cells_inside",
    "extract_tempered_subsequence",
    "folner_defect",
    "metric_ball_sequence",
    "select_radii",
    "tempered_indices",
    "temperedness_quotient",
]
