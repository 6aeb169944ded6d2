"""Weak values and the quasi-probability distribution behind them.

The weak value of A for pre-selection rho_psi and post-selection rho_phi is

    A_w = Tr(rho_phi A rho_psi) / Tr(rho_phi rho_psi)

and decomposes as A_w = sum_i a_i g_i over the eigenvalues a_i of A, where
g_i = Tr(rho_phi P_i rho_psi) / Tr(rho_phi rho_psi) is a complex-valued
quasi-probability (the g_i have unit sum but may leave the real interval
[0, 1], which is exactly the anomalous regime).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    DensityOperator,
    DimensionMismatchError,
    Observable,
    OrthogonalSelectionError,
    StateVector,
    Tolerances,
)
from .invariants import overlap

__all__ = [
    "NORMAL",
    "ANOMALOUS_REAL",
    "ANOMALOUS_IMAGINARY",
    "DEFAULT_SELECTION_THRESHOLD",
    "QuasiProbDist",
    "WeakValueResult",
    "classify",
    "is_marginal",
    "quasi_prob",
    "weak_value",
    "weak_value_hermitian",
    "weak_value_pure",
    "anomalous_indices",
]

NORMAL = "Normal"
ANOMALOUS_REAL = "AnomalousReal"
ANOMALOUS_IMAGINARY = "AnomalousImaginary"

# Post-selection overlaps at or below this are treated as orthogonal.
DEFAULT_SELECTION_THRESHOLD = 1e-12


def classify(value: complex, lo: float, hi: float, anomaly_tol: float = DEFAULT_TOL.anom) -> str:
    """Label a weak value against the real spectrum interval [lo, hi].

    Imaginary parts win over real excursions: a value can only be
    AnomalousReal when its imaginary part is negligible.
    """
    if abs(value.imag) > anomaly_tol:
        return ANOMALOUS_IMAGINARY
    if value.real < lo - anomaly_tol or value.real > hi + anomaly_tol:
        return ANOMALOUS_REAL
    return NORMAL


def is_marginal(value: complex, lo: float, hi: float, anomaly_tol: float = DEFAULT_TOL.anom) -> bool:
    """True when the verdict sits within 10x the tolerance of a decision boundary.

    The real test is additive distance to the spectrum edges.  The imaginary
    test is multiplicative: the decision line |Im| = tol lives at the noise
    scale itself, so an exactly-real value (distance tol from the line) must
    not count as marginal, while anything within a factor of ten of the line
    on either side does.
    """
    band = 10.0 * anomaly_tol
    if anomaly_tol / 10.0 < abs(value.imag) < band:
        return True
    return abs(value.real - lo) < band or abs(value.real - hi) < band


@dataclass(frozen=True)
class QuasiProbDist:
    """Quasi-probability weights over the ascending eigenvalues of an observable."""

    weights: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=complex))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=float))

    @property
    def dim(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class WeakValueResult:
    """Weak value with its conditioning and classification context.

    ``denominator`` is the post-selection overlap Tr(rho_phi rho_psi); small
    values flag an ill-conditioned (nearly orthogonal) selection.
    """

    value: complex
    denominator: float
    spectrum_lo: float
    spectrum_hi: float
    classification: str


def _check_selection(den: float, threshold: float) -> None:
    if den <= threshold:
        raise OrthogonalSelectionError(
            f"post-selection overlap {den:.3e} at or below threshold {threshold:.1e}"
        )


def quasi_prob(rho_phi: DensityOperator, rho_psi: DensityOperator, obs: Observable,
               threshold: float = DEFAULT_SELECTION_THRESHOLD,
               tol: Tolerances = DEFAULT_TOL) -> QuasiProbDist:
    """Quasi-probability of each eigenvector of ``obs`` for the given selection.

    Uses g_i = <a_i| rho_psi rho_phi |a_i> / Tr(rho_phi rho_psi), which equals
    the three-operator trace route at one matrix product per distribution.
    """
    if rho_phi.dim != obs.dim or rho_psi.dim != obs.dim:
        raise DimensionMismatchError(
            f"states of dim {rho_phi.dim}/{rho_psi.dim} against observable of dim {obs.dim}"
        )
    den = overlap(rho_phi, rho_psi, tol)
    _check_selection(den, threshold)
    product = rho_psi.matrix @ rho_phi.matrix
    v = obs.eigenvectors
    numerators = np.einsum("ji,jk,ki->i", v.conj(), product, v)
    return QuasiProbDist(weights=numerators / den, labels=obs.eigenvalues)


def weak_value(obs: Observable, rho_psi: DensityOperator, rho_phi: DensityOperator,
               threshold: float = DEFAULT_SELECTION_THRESHOLD,
               tol: Tolerances = DEFAULT_TOL) -> WeakValueResult:
    """Weak value of a validated observable by the direct trace ratio."""
    if rho_phi.dim != obs.dim or rho_psi.dim != obs.dim:
        raise DimensionMismatchError(
            f"states of dim {rho_phi.dim}/{rho_psi.dim} against observable of dim {obs.dim}"
        )
    lo = float(obs.eigenvalues[0])
    hi = float(obs.eigenvalues[-1])
    return _trace_ratio(obs.matrix, rho_psi, rho_phi, lo, hi, threshold, tol)


def weak_value_hermitian(matrix, rho_psi: DensityOperator, rho_phi: DensityOperator,
                         threshold: float = DEFAULT_SELECTION_THRESHOLD,
                         tol: Tolerances = DEFAULT_TOL) -> WeakValueResult:
    """Weak value of a raw Hermitian matrix, degenerate spectra included.

    The classification needs only the spectrum edges, so projectors and the
    identity work here even though they carry no canonical eigenbasis.
    """
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"observable must be square, got shape {mat.shape}")
    if rho_phi.dim != mat.shape[0] or rho_psi.dim != mat.shape[0]:
        raise DimensionMismatchError(
            f"states of dim {rho_phi.dim}/{rho_psi.dim} against observable of dim {mat.shape[0]}"
        )
    spectrum = np.linalg.eigvalsh(mat)
    return _trace_ratio(mat, rho_psi, rho_phi, float(spectrum[0]), float(spectrum[-1]),
                        threshold, tol)


def _trace_ratio(matrix: np.ndarray, rho_psi: DensityOperator, rho_phi: DensityOperator,
                 lo: float, hi: float, threshold: float, tol: Tolerances) -> WeakValueResult:
    den = overlap(rho_phi, rho_psi, tol)
    _check_selection(den, threshold)
    num = complex(np.trace(rho_phi.matrix @ matrix @ rho_psi.matrix))
    value = num / den
    return WeakValueResult(value=value, denominator=den, spectrum_lo=lo, spectrum_hi=hi,
                           classification=classify(value, lo, hi, tol.anom))


def weak_value_pure(obs: Observable, psi: StateVector, phi: StateVector,
                    threshold: float = DEFAULT_SELECTION_THRESHOLD,
                    tol: Tolerances = DEFAULT_TOL) -> WeakValueResult:
    """Weak value <phi|A|psi> / <phi|psi> for pure pre- and post-selection."""
    if psi.dim != obs.dim or phi.dim != obs.dim:
        raise DimensionMismatchError(
            f"states of dim {phi.dim}/{psi.dim} against observable of dim {obs.dim}"
        )
    inner = complex(phi.amps.conj() @ psi.amps)
    den = abs(inner) ** 2
    _check_selection(den, threshold)
    value = complex(phi.amps.conj() @ obs.matrix @ psi.amps) / inner
    lo = float(obs.eigenvalues[0])
    hi = float(obs.eigenvalues[-1])
    return WeakValueResult(value=value, denominator=den, spectrum_lo=lo, spectrum_hi=hi,
                           classification=classify(value, lo, hi, tol.anom))


def anomalous_indices(dist: QuasiProbDist, anomaly_tol: float = DEFAULT_TOL.anom) -> tuple[int, ...]:
    """Indices whose quasi-probability leaves the real interval [0, 1]."""
    return tuple(
        i for i, w in enumerate(dist.weights)
        if classify(complex(w), 0.0, 1.0, anomaly_tol) != NORMAL
    )
