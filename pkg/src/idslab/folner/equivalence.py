"""Joint check of the Følner condition and isoperimetric decay of φ(I_n)."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..group import GroupElement, PeriodicGraph, phi
from .boundary import isoperimetric_quotient
from .sequences import FolnerSequence, folner_defect

logger = logging.getLogger(__name__)

DEFAULT_DECAY_THRESHOLD = 0.05


class EquivalenceVerdict(str, Enum):
    """Joint behaviour of the two decay profiles at the final index."""

    CO_DECAY = "co-decay"
    CO_STAGNATION = "co-stagnation"
    MISMATCH = "mismatch"


@dataclass(frozen=True)
class FolnerRow:
    """Per-index measurements."""

    n: int
    index_size: int
    defects: Tuple[Fraction, ...]
    quotients: Tuple[Fraction, ...]
    temperedness: Optional[Fraction] = None

    @property
    def max_defect(self) -> Fraction:
        return max(self.defects, default=Fraction(0))

    @property
    def max_quotient(self) -> Fraction:
        return max(self.quotients, default=Fraction(0))


@dataclass(frozen=True)
class IsoperimetricReport:
    """Følner defects and isoperimetric quotients along a sequence."""

    generators: Tuple[GroupElement, ...]
    depths: Tuple[int, ...]
    rows: Tuple[FolnerRow, ...]
    threshold: float
    defect_decayed: bool
    quotient_decayed: Dict[int, bool] = field(default_factory=dict)

    @property
    def quotients_decayed(self) -> bool:
        return all(self.quotient_decayed.values())

    @property
    def verdict(self) -> EquivalenceVerdict:
        if self.defect_decayed and self.quotients_decayed:
            return EquivalenceVerdict.CO_DECAY
        if not self.defect_decayed and not self.quotients_decayed:
            return EquivalenceVerdict.CO_STAGNATION
        return EquivalenceVerdict.MISMATCH

    def csv_header(self) -> List[str]:
        header = ["n", "index_size"]
        header += [f"defect_{'_'.join(str(c) for c in g.coords)}" for g in self.generators]
        header += [f"quotient_d{d}" for d in self.depths]
        header.append("temperedness")
        return header

    def csv_rows(self) -> List[List[object]]:
        rows: List[List[object]] = []
        for row in self.rows:
            values: List[object] = [row.n, row.index_size]
            values += [float(v) for v in row.defects]
            values += [float(v) for v in row.quotients]
            values.append("" if row.temperedness is None else float(row.temperedness))
            rows.append(values)
        return rows


def check_folner_isoperimetric_equivalence(
    seq: FolnerSequence,
    graph: PeriodicGraph,
    d_max: int,
    threshold: float = DEFAULT_DECAY_THRESHOLD,
) -> IsoperimetricReport:
    """Compare Følner defects of I_n with the quotients |∂_d φ(I_n)|/|φ(I_n)|.

    Args:
        seq: Index set sequence
        graph: Periodic graph over the same group
        d_max: Largest collar thickness (quotients for d = 0..d_max)
        threshold: Final-index decay threshold for both profiles

    Returns:
        Report with one row per index and a joint verdict
    """
    if d_max < 0:
        raise ValueError(f"d_max must be non-negative, got {d_max}")
    generators = tuple(s for s in seq.spec.generators if s != seq.spec.identity)
    depths = tuple(range(d_max + 1))
    quotients_tempered = seq.temperedness_quotients()

    rows = []
    for n, index_set in enumerate(seq):
        domain = phi(index_set, graph)
        rows.append(
            FolnerRow(
                n=n,
                index_size=len(index_set),
                defects=tuple(folner_defect(index_set, s) for s in generators),
                quotients=tuple(isoperimetric_quotient(domain, d) for d in depths),
                temperedness=quotients_tempered[n - 1] if n else None,
            )
        )
        logger.debug(
            f"[FOLNER] n={n} |I|={len(index_set)} max defect={float(rows[-1].max_defect):.4g} "
            f"max quotient={float(rows[-1].max_quotient):.4g}"
        )

    bound = Fraction(str(threshold))
    final = rows[-1]
    report = IsoperimetricReport(
        generators=generators,
        depths=depths,
        rows=tuple(rows),
        threshold=threshold,
        defect_decayed=final.max_defect <= bound,
        quotient_decayed={d: q <= bound for d, q in zip(depths, final.quotients)},
    )
    logger.info(f"[FOLNER] equivalence verdict over {len(rows)} sets: {report.verdict.value}")
    return report
