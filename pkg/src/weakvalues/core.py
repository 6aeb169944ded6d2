"""Validated state and observable types plus the basic operations on them.

Raw matrices enter through the validation gates (``state_vector``,
``validate_density``, ``eigensystem``); everything downstream trusts its
inputs and never re-validates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "StateVector",
    "DensityOperator",
    "Observable",
    "ValidationError",
    "NotHermitianError",
    "NotPSDError",
    "TraceNotOneError",
    "NotNormalizedError",
    "DegenerateError",
    "NotQubitError",
    "DimensionMismatchError",
    "ComputationError",
    "ImaginaryOverlapError",
    "OrthogonalSelectionError",
    "ZeroPostselectionError",
    "state_vector",
    "pure_to_density",
    "validate_density",
    "eigensystem",
    "dephase",
    "coherence_l1",
    "real_part_state",
    "antipodal",
    "commutator_norm",
]


class ValidationError(ValueError):
    """An input failed one of the structural invariants."""


class NotHermitianError(ValidationError):
    pass


class NotPSDError(ValidationError):
    pass


class TraceNotOneError(ValidationError):
    pass


class NotNormalizedError(ValidationError):
    pass


class DegenerateError(ValidationError):
    pass


class NotQubitError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class ComputationError(RuntimeError):
    """A well-formed computation hit a numerically meaningless regime."""


class ImaginaryOverlapError(ComputationError):
    pass


class OrthogonalSelectionError(ComputationError):
    pass


class ZeroPostselectionError(ComputationError):
    pass


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the validation gates and classifiers.

    norm   : unit-norm / unit-trace defect
    herm   : max entrywise Hermiticity defect
    psd    : most negative admissible eigenvalue
    eig    : eigen-equation residual, also the reality threshold
    orth   : pairwise eigenvector overlap
    degen  : minimal admissible eigenvalue gap
    anom   : half-width of the anomaly decision band
    """

    norm: float = 1e-10
    herm: float = 1e-10
    psd: float = 1e-10
    eig: float = 1e-9
    orth: float = 1e-9
    degen: float = 1e-8
    anom: float = 1e-9

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if not value > 0.0:
                raise ValidationError(f"tolerance {name} must be positive, got {value!r}")


DEFAULT_TOL = Tolerances()


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class StateVector:
    """Pure state as a 1-D complex amplitude array."""

    amps: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.shape[0] < 2:
            raise ValidationError(f"state vector must be 1-D with dim >= 2, got shape {amps.shape}")
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]


@dataclass(frozen=True)
class DensityOperator:
    """Mixed state as a d x d complex matrix."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 2:
            raise ValidationError(f"density operator must be square with dim >= 2, got shape {mat.shape}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Observable:
    """Non-degenerate Hermitian observable with its ordered eigensystem.

    ``eigenvalues`` is ascending and ``eigenvectors[:, i]`` is the unit
    eigenvector for ``eigenvalues[i]``, with the component of largest
    modulus made real positive.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen(np.asarray(self.matrix, dtype=complex)))
        object.__setattr__(self, "eigenvalues", _frozen(np.asarray(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "eigenvectors", _frozen(np.asarray(self.eigenvectors, dtype=complex)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def basis_state(self, i: int) -> StateVector:
        """Eigenvector i as a pure state."""
        return StateVector(self.eigenvectors[:, i])

    def projector(self, i: int) -> DensityOperator:
        """Rank-1 projector onto eigenvector i."""
        v = self.eigenvectors[:, i]
        return DensityOperator(np.outer(v, v.conj()))


def _require_finite(arr: np.ndarray, what: str) -> None:
    if not np.isfinite(arr).all():
        raise ValidationError(f"{what} contains NaN or Inf entries")


def _require_same_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"dimension mismatch: {a} vs {b}")


def _hermiticity_defect(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat - mat.conj().T)))


def state_vector(values, tol: Tolerances = DEFAULT_TOL) -> StateVector:
    """Validate amplitudes as a unit-norm pure state."""
    amps = np.asarray(values, dtype=complex)
    if amps.ndim != 1:
        raise ValidationError(f"state vector must be 1-D, got shape {amps.shape}")
    _require_finite(amps, "state vector")
    defect = abs(float(np.sum(np.abs(amps) ** 2)) - 1.0)
    if defect > tol.norm:
        raise NotNormalizedError(f"squared norm deviates from 1 by {defect:.3e} (tolerance {tol.norm:.1e})")
    return StateVector(amps)


def pure_to_density(psi: StateVector) -> DensityOperator:
    """Rank-1 projector |psi><psi|."""
    return DensityOperator(np.outer(psi.amps, psi.amps.conj()))


def validate_density(matrix, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    """Validate a raw matrix as a density operator.

    Raises NotHermitianError, NotPSDError or TraceNotOneError naming the
    violated invariant and its magnitude.
    """
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"density operator must be square, got shape {mat.shape}")
    _require_finite(mat, "density operator")
    defect = _hermiticity_defect(mat)
    if defect > tol.herm:
        raise NotHermitianError(f"Hermiticity defect {defect:.3e} exceeds tolerance {tol.herm:.1e}")
    lowest = float(np.linalg.eigvalsh(mat)[0])
    if lowest < -tol.psd:
        raise NotPSDError(f"lowest eigenvalue {lowest:.3e} below -{tol.psd:.1e}")
    trace_defect = abs(complex(np.trace(mat)) - 1.0)
    if trace_defect > tol.norm:
        raise TraceNotOneError(f"trace deviates from 1 by {trace_defect:.3e} (tolerance {tol.norm:.1e})")
    return DensityOperator(mat)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus component is real positive."""
    out = np.array(vectors)
    for i in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, i])))
        pivot = out[k, i]
        out[:, i] *= np.abs(pivot) / pivot
    return out


def eigensystem(matrix, tol: Tolerances = DEFAULT_TOL) -> Observable:
    """Validate a raw Hermitian matrix as a non-degenerate observable.

    Eigenvalues come out ascending; eigenvector phases follow the
    largest-modulus-component convention so repeated calls agree bitwise.
    """
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"observable must be square, got shape {mat.shape}")
    _require_finite(mat, "observable")
    defect = _hermiticity_defect(mat)
    if defect > tol.herm:
        raise NotHermitianError(f"Hermiticity defect {defect:.3e} exceeds tolerance {tol.herm:.1e}")
    eigenvalues, eigenvectors = np.linalg.eigh(mat)
    gaps = np.diff(eigenvalues)
    if gaps.size and float(np.min(gaps)) < tol.degen:
        raise DegenerateError(
            f"eigenvalue gap {float(np.min(gaps)):.3e} below tolerance {tol.degen:.1e}; "
            "degenerate observables have no canonical eigenbasis"
        )
    return Observable(mat, eigenvalues, _fix_phases(eigenvectors))


def dephase(rho: DensityOperator, basis: Observable) -> DensityOperator:
    """Remove all off-diagonal terms of rho in the eigenbasis of ``basis``."""
    _require_same_dim(rho.dim, basis.dim)
    v = basis.eigenvectors
    populations = np.real(np.einsum("ji,jk,ki->i", v.conj(), rho.matrix, v))
    return DensityOperator((v * populations) @ v.conj().T)


def coherence_l1(rho: DensityOperator, basis: Observable) -> float:
    """Sum of the moduli of the off-diagonal entries of rho in the eigenbasis."""
    _require_same_dim(rho.dim, basis.dim)
    v = basis.eigenvectors
    in_basis = v.conj().T @ rho.matrix @ v
    return float(np.sum(np.abs(in_basis)) - np.sum(np.abs(np.diag(in_basis))))


def real_part_state(rho: DensityOperator) -> DensityOperator:
    """Entrywise real part (rho + rho^T)/2, a valid state with real amplitudes."""
    re = np.real(rho.matrix)
    return DensityOperator(((re + re.T) / 2.0).astype(complex))


def antipodal(psi: StateVector) -> StateVector:
    """Orthogonal qubit state, phase-fixed by the largest-modulus convention."""
    if psi.dim != 2:
        raise NotQubitError(f"antipodal state is defined for dim 2, got dim {psi.dim}")
    perp = np.array([np.conj(psi.amps[1]), -np.conj(psi.amps[0])])
    return StateVector(_fix_phases(perp[:, None])[:, 0])


def commutator_norm(rho1: DensityOperator, rho2: DensityOperator) -> float:
    """Frobenius norm of [rho1, rho2]; zero iff the states share an eigenbasis."""
    _require_same_dim(rho1.dim, rho2.dim)
    comm = rho1.matrix @ rho2.matrix - rho2.matrix @ rho1.matrix
    return float(np.linalg.norm(comm))
