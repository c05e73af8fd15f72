"""Heat kernel lemma: site averages of the ambient diagonal against normalized traces."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..environment import EnvironmentSample, SingleSitePotential
from ..group import VertexSet, bfs_layers
from ..operator import assemble_dirichlet
from ..spectral import BoundaryTable, Method, chebyshev_heat_action, eigenvalues, heat_trace
from .admissible import AdmissibleSequence
from .sweep import SweepResult

logger = logging.getLogger(__name__)


def padded_domain(core: VertexSet, pad: int) -> VertexSet:
    """core together with every vertex within graph distance ``pad``."""
    if pad < 0:
        raise ValueError(f"pad must be non-negative, got {pad}")
    layers = bfs_layers(core, pad)
    return VertexSet.from_keys(core.graph, np.unique(np.concatenate(layers)))


def padded_heat_diagonal(
    core: VertexSet,
    pad: int,
    t: float,
    omega: Optional[EnvironmentSample] = None,
    potential: Optional[SingleSitePotential] = None,
    block: int = 256,
    tolerance: float = 1e-13,
) -> np.ndarray:
    """Approximate ambient diagonals k^ω(t, x, x) for x in ``core``, in key order.

    The ambient operator is replaced by its restriction to the core padded by
    ``pad`` layers; columns of e^{-tH} are computed in blocks.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if core.size == 0:
        raise ValueError("core is empty")
    domain = padded_domain(core, pad)
    matrix = assemble_dirichlet(domain, omega, potential)
    positions = domain.index_of(core.keys)
    diagonal = np.empty(core.size)
    for start in range(0, core.size, block):
        chunk = positions[start : start + block]
        units = np.zeros((matrix.dimension, chunk.shape[0]))
        units[chunk, np.arange(chunk.shape[0])] = 1.0
        columns = chebyshev_heat_action(matrix, t, units, tolerance=tolerance)
        diagonal[start : start + chunk.shape[0]] = columns[chunk, np.arange(chunk.shape[0])]
    return diagonal


@dataclass(frozen=True, eq=False)
class HeatKernelLemmaResult:
    """Per-n gap |mean_{A_n} k̂(t,x,x) − Ñ_{D_n}(t)|."""

    t: float
    pad: int
    gaps: np.ndarray
    ambient_means: np.ndarray
    traces: np.ndarray
    warning: Optional[str] = None

    @property
    def final_gap(self) -> float:
        return float(self.gaps[-1])

    def csv_rows(self) -> Tuple[Tuple[int, float, float, float], ...]:
        return tuple(
            (n, float(a), float(tr), float(g))
            for n, (a, tr, g) in enumerate(zip(self.ambient_means, self.traces, self.gaps))
        )


def heat_kernel_lemma_gap(
    adm: AdmissibleSequence,
    omega: Optional[EnvironmentSample],
    potential: Optional[SingleSitePotential],
    t: float,
    ambient_pad: int,
    sweep: Optional[SweepResult] = None,
    table: Optional[BoundaryTable] = None,
    method: Method = "ql",
    tolerance: float = 1e-13,
) -> HeatKernelLemmaResult:
    """Compare the site-averaged ambient heat diagonal on A_n with the trace on D_n.

    Args:
        adm: Admissible sequence
        omega: Environment sample (V = 0 when omitted)
        potential: Single-site profile
        t: Time
        ambient_pad: Collar depth standing in for the infinite graph
        sweep: Spectra solved for the same environment, keyed by ``omega.seed``
        table: Boundary table whose h(t, ε) the pad is checked against
        method: Eigensolver backend when no sweep is given
        tolerance: Chebyshev truncation tolerance of the ambient diagonals

    Returns:
        Gaps per n, with a warning when the pad is below the measured h(t, ε)

    Raises:
        ValueError: ``omega`` is not the environment the sweep was solved for
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if sweep is not None and not sweep.matches(omega):
        raise ValueError("the environment does not match the spectra of the sweep")
    warning = None
    if table is not None:
        required = table.required_pad(t)
        if required is None or ambient_pad < required:
            warning = (
                f"pad {ambient_pad} is below h(t={t}, eps={table.epsilon}) = {required}"
            )
            logger.warning(f"[PIPELINE] {warning}")

    means, traces = [], []
    for n, (core, domain) in enumerate(zip(adm.cores, adm.domains)):
        diagonal = padded_heat_diagonal(core, ambient_pad, t, omega, potential, tolerance=tolerance)
        means.append(float(np.mean(diagonal)))
        if sweep is not None:
            seed = omega.seed if omega is not None else sweep.seeds[0]
            spectrum = sweep.spectrum(n, seed)
        else:
            spectrum = eigenvalues(assemble_dirichlet(domain, omega, potential), method=method)
        traces.append(heat_trace(spectrum, t))

    ambient_means = np.asarray(means)
    trace_values = np.asarray(traces)
    gaps = np.abs(ambient_means - trace_values)
    logger.info(f"[PIPELINE] heat kernel lemma at t={t}: final gap {gaps[-1]:.3g}")
    return HeatKernelLemmaResult(float(t), ambient_pad, gaps, ambient_means, trace_values, warning)
