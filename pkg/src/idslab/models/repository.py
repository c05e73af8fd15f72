"""On-disk cache of solved spectra, keyed by config hash."""

import logging
import shutil
from pathlib import Path
from typing import List, Optional

import numpy as np

from ..environment import CouplingLaw
from ..pipeline import SweepResult
from ..spectral import Spectrum

logger = logging.getLogger(__name__)


class SpectrumRepository:
    """Repository for storing and retrieving sweep spectra as ``.npz`` archives."""

    def __init__(self, root: str = "./results/cache"):
        """Initialize the spectrum repository.

        Args:
            root: Directory holding one archive per config hash
        """
        self.root = Path(root)
        self._ensure_dir()

    def _ensure_dir(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, config_hash: str) -> Path:
        return self.root / f"{config_hash}.npz"

    def save(self, config_hash: str, sweep: SweepResult) -> Path:
        """Save all spectra of a sweep.

        Args:
            config_hash: Hash of the validated experiment config
            sweep: Solved spectra

        Returns:
            Path of the archive
        """
        arrays = {
            "indices": np.asarray(sweep.indices, dtype=np.int64),
            "seeds": np.asarray(sweep.seeds, dtype=np.uint64),
            "volumes": np.asarray(sweep.volumes, dtype=np.int64),
        }
        for (n, seed), spectrum in sweep.spectra.items():
            arrays[f"n{n}_s{seed}"] = spectrum.eigenvalues
        path = self.path_for(config_hash)
        with path.open("wb") as handle:
            np.savez(handle, **arrays)
        logger.info(f"Saved {len(sweep.spectra)} spectra: {path}")
        return path

    def load(self, config_hash: str, law: Optional[CouplingLaw] = None) -> Optional[SweepResult]:
        """Load a sweep.

        Args:
            config_hash: Hash of the validated experiment config
            law: Coupling law the spectra were solved with (None for V = 0)

        Returns:
            Sweep result or None if not cached
        """
        path = self.path_for(config_hash)
        if not path.exists():
            return None
        with np.load(path) as archive:
            indices = tuple(int(n) for n in archive["indices"])
            seeds = tuple(int(s) for s in archive["seeds"])
            volumes = tuple(int(v) for v in archive["volumes"])
            spectra = {
                (n, seed): Spectrum(np.array(archive[f"n{n}_s{seed}"], dtype=float))
                for n in indices
                for seed in seeds
            }
        return SweepResult(indices, seeds, volumes, spectra, law=law)

    def list_all(self) -> List[str]:
        """List all cached config hashes."""
        return sorted(p.stem for p in self.root.glob("*.npz"))

    def delete(self, config_hash: str) -> bool:
        """Delete a cached sweep.

        Returns:
            True if deleted, False if not found
        """
        path = self.path_for(config_hash)
        if not path.exists():
            return False
        path.unlink()
        logger.info(f"Deleted cached spectra: {config_hash}")
        return True

    def clear(self) -> None:
        shutil.rmtree(self.root, ignore_errors=True)
        self._ensure_dir()
