"""CSV/JSON writers with fixed float formatting and the run manifest."""

import csv
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..folner import IsoperimetricReport
from ..models import FileEntry, RunManifest, RunReport
from ..pipeline import IDSEstimate, LaplaceReport
from ..spectral import BoundaryTable, Spectrum

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"


def format_value(value: Any) -> str:
    """Numbers with 17 significant digits; everything else via str."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return "" if value is None else str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    logger.debug(f"Wrote {path}")
    return path


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def write_ids_csv(path: Path, idse: IDSEstimate) -> Path:
    """lambda, one column per (n, seed), the limit, its gap and the atom flag."""
    header = ["lambda"]
    header += [f"n{n}_s{s}" for n in idse.indices for s in idse.seeds]
    header += ["limit", "limit_gap", "atom"]
    rows: List[List[Any]] = []
    for k, lam in enumerate(idse.lambda_grid):
        row: List[Any] = [float(lam)]
        row += [
            float(idse.per_index[i, j, k])
            for i in range(len(idse.indices))
            for j in range(len(idse.seeds))
        ]
        row += [float(idse.limit[k]), float(idse.limit_gaps[k]), bool(idse.atom_mask[k])]
        rows.append(row)
    return write_csv(path, header, rows)


def write_laplace_csv(path: Path, report: LaplaceReport) -> Path:
    """t, one column per (n, seed), the ergodic reference and kernel-lemma gaps per n."""
    header = ["t"]
    header += [f"n{n}_s{s}" for n in report.indices for s in report.seeds]
    header.append("reference")
    header += [f"kernel_gap_n{n}" for n in report.indices]
    rows: List[List[Any]] = []
    for k, t in enumerate(report.t_grid):
        row: List[Any] = [float(t)]
        row += [
            float(report.values[i, j, k])
            for i in range(len(report.indices))
            for j in range(len(report.seeds))
        ]
        row.append(None if report.reference is None else float(report.reference[k]))
        if report.kernel_gaps is None:
            row += [None] * len(report.indices)
        else:
            row += [float(report.kernel_gaps[i, k]) for i in range(len(report.indices))]
        rows.append(row)
    return write_csv(path, header, rows)


def write_folner_csv(path: Path, report: IsoperimetricReport) -> Path:
    return write_csv(path, report.csv_header(), report.csv_rows())


def write_htable_csv(path: Path, table: BoundaryTable) -> Path:
    return write_csv(path, ["t", "h", "gap"], table.csv_rows())


def write_spectrum_csv(path: Path, spectrum: Spectrum) -> Path:
    return write_csv(path, ["index", "eigenvalue"], spectrum.csv_rows())


def file_digest(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_report(output_dir: Path, report: RunReport) -> Path:
    return write_json(output_dir / "report.json", report.model_dump(mode="json", by_alias=True))


def write_manifest(
    output_dir: Path,
    config_hash: str,
    files: Sequence[Path],
    timings: Optional[Dict[str, float]] = None,
) -> Path:
    """manifest.json listing every emitted file with its SHA-256 digest."""
    entries = [
        FileEntry(
            path=str(p.relative_to(output_dir)),
            sha256=file_digest(p),
            size_bytes=p.stat().st_size,
        )
        for p in sorted(files)
    ]
    manifest = RunManifest(config_hash=config_hash, timings=dict(timings or {}), files=entries)
    return write_json(output_dir / "manifest.json", manifest.model_dump(mode="json", by_alias=True))
