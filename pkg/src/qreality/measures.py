"""Entropy-based quantifiers of realism, coherence, and correlations.

All quantities use the base-2 logarithm and are reported in bits.  The
irreality of an observable is the entropy cost of its nonselective
measurement; it vanishes exactly when the dephasing channel leaves the
state invariant, and it splits into a local coherence part plus a
correlation (discord) part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (
    DensityMatrix,
    InvalidStateError,
    LabelError,
    ObservableSpec,
    PureState,
    State,
    _as_density,
    dephasing_map,
    partial_trace,
    purity,
)

PSD_TOLERANCE = 1e-10
ENTROPY_EIGENVALUE_FLOOR = 1e-12
MIXEDNESS_TOLERANCE = 1e-8


def _entropy_of_eigenvalues(eigs: np.ndarray) -> float:
    if eigs.min() < -PSD_TOLERANCE:
        raise InvalidStateError(
            f"eigenvalue {eigs.min():.3e} below the PSD tolerance; not a valid state"
        )
    # Eigenvalues in [-1e-10, 1e-12) count as exact zeros (0 log 0 = 0).
    p = eigs[eigs >= ENTROPY_EIGENVALUE_FLOOR]
    if p.size == 0:
        return 0.0
    return float(-(p * np.log2(p)).sum())


def von_neumann_entropy(state: Union[State, np.ndarray]) -> float:
    """Von Neumann entropy in bits.  Accepts a state or a raw Hermitian matrix."""
    if isinstance(state, (PureState, DensityMatrix)):
        mat = _as_density(state).entries
    else:
        mat = np.asarray(state, dtype=complex)
    return _entropy_of_eigenvalues(np.linalg.eigvalsh(mat))


def binary_entropy(p: float) -> float:
    """H(p) = -p log2 p - (1-p) log2 (1-p), with the 0 log 0 = 0 convention."""
    terms = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            terms -= q * np.log2(q)
    return float(terms)


@dataclass(frozen=True)
class IrrealityReport:
    """Irreality of one observable, split into coherence and discord parts."""

    irreality: float
    coherence: float
    discord: float
    observable: ObservableSpec


def irreality(state: State, observable: ObservableSpec) -> IrrealityReport:
    """Entropy increase under the nonselective measurement of ``observable``.

    The coherence part is the same quantity evaluated on the reduced state
    of the measured subsystem alone (relative entropy of coherence); the
    discord part is the remainder.
    """
    rho = _as_density(state)
    total = von_neumann_entropy(dephasing_map(rho, observable)) - von_neumann_entropy(rho)
    reduced = partial_trace(rho, (observable.subsystem,))
    local = von_neumann_entropy(dephasing_map(reduced, observable)) - von_neumann_entropy(
        reduced
    )
    return IrrealityReport(
        irreality=total, coherence=local, discord=total - local, observable=observable
    )


def _split_partition(state: State, partition) -> tuple[tuple[str, ...], tuple[str, ...]]:
    part_a, part_b = tuple(partition[0]), tuple(partition[1])
    labels = state.register.labels
    if sorted(part_a + part_b) != sorted(labels) or set(part_a) & set(part_b):
        raise LabelError(
            f"partition {part_a} | {part_b} does not cover register {labels}"
        )
    return part_a, part_b


def mutual_information(state: State, partition) -> float:
    """S(A) + S(B) - S(AB) across a bipartition covering the register."""
    part_a, part_b = _split_partition(state, partition)
    rho = _as_density(state)
    return (
        von_neumann_entropy(partial_trace(rho, part_a))
        + von_neumann_entropy(partial_trace(rho, part_b))
        - von_neumann_entropy(rho)
    )


def conditional_information(state: State, partition) -> float:
    """Correlation bound used by :func:`complementarity_check`.

    Implemented as the quantum mutual information.  Kept as its own
    function so an alternate reading of the bound can be swapped in one
    place.
    """
    return mutual_information(state, partition)


def entanglement_entropy(state: State, partition) -> float:
    """Entropy of the reduced state across a bipartition of a pure state."""
    part_a, _ = _split_partition(state, partition)
    if isinstance(state, DensityMatrix) and purity(state) < 1.0 - MIXEDNESS_TOLERANCE:
        raise InvalidStateError(
            f"entanglement entropy needs a pure input; purity is {purity(state):.6f}"
        )
    rho = _as_density(state)
    return von_neumann_entropy(partial_trace(rho, part_a))


@dataclass(frozen=True)
class ComplementarityResult:
    lhs: float
    rhs: float
    holds: bool


def complementarity_check(
    state: State,
    observable: ObservableSpec,
    other: ObservableSpec,
    *,
    slack: float = 1e-9,
) -> ComplementarityResult:
    """Check irreality(X) + irreality(X') >= correlation bound for two
    observables on the same subsystem."""
    if observable.subsystem != other.subsystem:
        raise LabelError(
            f"observables act on different subsystems: "
            f"{observable.subsystem!r} vs {other.subsystem!r}"
        )
    lhs = irreality(state, observable).irreality + irreality(state, other).irreality
    rest = tuple(
        lb for lb in state.register.labels if lb != observable.subsystem
    )
    rhs = conditional_information(state, ((observable.subsystem,), rest))
    return ComplementarityResult(lhs=lhs, rhs=rhs, holds=lhs >= rhs - slack)
