"""Von Neumann pointer readout of weak values, in closed form.

The interaction exp(-i g A x p) shifts a real Gaussian pointer (position
spread sigma, hbar = 1) by g a_i on each eigenbranch. After post-selecting
the system on phi, the unnormalized pointer state is

    Phi(x) = sum_i c_i G(x - g a_i),    c_i = <phi|a_i><a_i|psi>

and every moment reduces to Gaussian overlap integrals

    integral G(x-u) G(x-v) dx = exp(-(u - v)^2 / (8 sigma^2)),

so no spatial grid is involved. To leading order the readouts recover the
weak value: mean position -> g Re(A_w) and mean momentum
-> g Im(A_w) / (2 sigma^2), each with O(g^2) relative corrections that a
polynomial extrapolation in g^2 removes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    DimensionMismatchError,
    Observable,
    StateVector,
    Tolerances,
    ValidationError,
    ZeroPostselectionError,
)

__all__ = [
    "PointerConfig",
    "PointerOutcome",
    "ExtrapolationResult",
    "simulate",
    "extrapolate",
]

# Post-selection norms below this leave no pointer state to read out.
ZERO_POSTSELECTION_FLOOR = 1e-300

DEFAULT_COUPLINGS = (1e-2, 5e-3, 2.5e-3, 1.25e-3)


@dataclass(frozen=True)
class PointerConfig:
    """Coupling strength, pointer width, and the series used for extrapolation."""

    coupling: float = 1e-2
    width: float = 1.0
    couplings_series: tuple[float, ...] = DEFAULT_COUPLINGS

    def __post_init__(self) -> None:
        if not self.coupling > 0.0:
            raise ValidationError(f"coupling must be positive, got {self.coupling!r}")
        if not self.width > 0.0:
            raise ValidationError(f"pointer width must be positive, got {self.width!r}")
        series = tuple(float(g) for g in self.couplings_series)
        if len(series) < 3:
            raise ValidationError(f"extrapolation needs at least 3 couplings, got {len(series)}")
        if any(not g > 0.0 for g in series):
            raise ValidationError("couplings must all be positive")
        if any(b >= a for a, b in zip(series, series[1:])):
            raise ValidationError("couplings must be strictly decreasing")
        object.__setattr__(self, "couplings_series", series)


@dataclass(frozen=True)
class PointerOutcome:
    """First moments of the post-selected pointer at one coupling."""

    mean_position: float
    mean_momentum: float
    postselect_prob: float


@dataclass(frozen=True)
class ExtrapolationResult:
    """Weak value recovered from the coupling series, with an error estimate."""

    value: complex
    error: float


def _branch_amplitudes(obs: Observable, psi: StateVector, phi: StateVector) -> np.ndarray:
    if psi.dim != obs.dim or phi.dim != obs.dim:
        raise DimensionMismatchError(
            f"states of dim {phi.dim}/{psi.dim} against observable of dim {obs.dim}"
        )
    v = obs.eigenvectors
    return (v.conj().T @ phi.amps).conj() * (v.conj().T @ psi.amps)


def simulate(obs: Observable, psi: StateVector, phi: StateVector,
             cfg: PointerConfig = PointerConfig()) -> PointerOutcome:
    """Exact pointer moments at the configured coupling."""
    c = _branch_amplitudes(obs, psi, phi)
    a = obs.eigenvalues
    g = cfg.coupling
    var4 = 4.0 * cfg.width ** 2

    diff = a[:, None] - a[None, :]
    pair_weight = np.outer(c.conj(), c) * np.exp(-(g * diff) ** 2 / (2.0 * var4))
    prob = float(np.sum(pair_weight).real)
    if prob < ZERO_POSTSELECTION_FLOOR:
        raise ZeroPostselectionError(
            f"post-selection probability {prob:.3e} below {ZERO_POSTSELECTION_FLOOR:.0e}"
        )
    mean_sum = a[:, None] + a[None, :]
    mean_x = float(np.sum(pair_weight * (g * mean_sum / 2.0)).real) / prob
    mean_p = float(np.sum(pair_weight * (1j * g * diff / var4)).real) / prob
    return PointerOutcome(mean_position=mean_x, mean_momentum=mean_p, postselect_prob=prob)


def extrapolate(obs: Observable, psi: StateVector, phi: StateVector,
                cfg: PointerConfig = PointerConfig()) -> ExtrapolationResult:
    """Recover the weak value by polynomial extrapolation of the readouts to g = 0.

    The per-coupling estimate x/g + i 2 sigma^2 p/g has only even powers of g
    in its error, so Neville extrapolation on the nodes g^2 knocks out one
    order per series entry. The error estimate is the last correction the
    table applied.
    """
    series = cfg.couplings_series
    two_var = 2.0 * cfg.width ** 2
    estimates = []
    for g in series:
        outcome = simulate(obs, psi, phi, PointerConfig(coupling=g, width=cfg.width,
                                                        couplings_series=series))
        estimates.append(outcome.mean_position / g + 1j * two_var * outcome.mean_momentum / g)

    nodes = np.asarray([g * g for g in series], dtype=float)
    table = list(estimates)
    for level in range(1, len(table)):
        for i in range(len(table) - 1, level - 1, -1):
            num = nodes[i - level] * table[i] - nodes[i] * table[i - 1]
            table[i] = num / (nodes[i - level] - nodes[i])
    # table[-2] ends as the same extrapolation without the finest coupling, so
    # the gap to it bounds the residual of the even-power error series.
    value = table[-1]
    error = abs(value - table[-2])
    return ExtrapolationResult(value=complex(value), error=float(error))
