"""Labeled-qubit states, channels, and post-selection.

The basis-index convention is fixed once, here: the first label of a
register is the most significant bit of the computational-basis index, so
that ket strings read left to right.  On the register ``(b, d1, d2)`` the
ket ``|011>`` is basis index 3.

Global phase is unobservable; state comparisons go through :func:`fidelity`,
never through amplitude equality.  Every operation is a pure function of
immutable inputs (arrays are defensively copied and marked read-only), so
values can be shared across threads without synchronization.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

HERMITICITY_ATOL = 1e-10
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-10
NORM_ATOL = 1e-10
ZERO_PROBABILITY_THRESHOLD = 1e-12

_EYE2 = np.eye(2, dtype=complex)


class LabelError(ValueError):
    """A subsystem label is unknown, duplicated, or collides."""


class InvalidStateError(ValueError):
    """An array violates the state invariants (norm, trace, Hermiticity, PSD)."""


class ZeroProbabilityError(ValueError):
    """Post-selection on an outcome of numerically zero probability."""


class ConfigurationError(ValueError):
    """A configuration value is inconsistent with the requested operation."""


def _kron_all(mats):
    return functools.reduce(np.kron, mats)


def _embed_single(op: np.ndarray, axis: int, n: int) -> np.ndarray:
    """Lift a single-qubit operator to the full 2**n space at the given axis."""
    mats = [_EYE2] * n
    mats[axis] = np.asarray(op, dtype=complex)
    return _kron_all(mats)


@dataclass(frozen=True)
class QubitRegister:
    """Ordered collection of named qubits.

    ``labels[0]`` is the most significant bit of the basis index.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise LabelError("register needs at least one label")
        if len(set(labels)) != len(labels):
            raise LabelError(f"duplicate labels in register: {labels}")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @property
    def dimension(self) -> int:
        return 2 ** len(self.labels)

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"label {label!r} not in register {self.labels}") from None

    def axes(self, labels: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.axis(lb) for lb in labels)

    def subregister(self, labels: Iterable[str]) -> "QubitRegister":
        """Sub-register containing ``labels``, kept in this register's order."""
        wanted = set(labels)
        missing = wanted - set(self.labels)
        if missing:
            raise LabelError(f"labels {sorted(missing)} not in register {self.labels}")
        return QubitRegister(tuple(lb for lb in self.labels if lb in wanted))

    def index_of(self, bits: str | Sequence[int]) -> int:
        """Basis index of a bit assignment given in register order."""
        if len(bits) != self.n_qubits:
            raise ValueError(f"expected {self.n_qubits} bits, got {len(bits)}")
        idx = 0
        for b in bits:
            b = int(b)
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            idx = (idx << 1) | b
        return idx


@dataclass(frozen=True)
class PureState:
    """Unit-norm state vector over a labeled register."""

    register: QubitRegister
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.shape != (self.register.dimension,):
            raise InvalidStateError(
                f"amplitude vector has length {amps.size}, register dimension is "
                f"{self.register.dimension}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise InvalidStateError(f"state norm {norm} deviates from 1 beyond {NORM_ATOL}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_bits(cls, register: QubitRegister, bits: str | Sequence[int]) -> "PureState":
        amps = np.zeros(register.dimension, dtype=complex)
        amps[register.index_of(bits)] = 1.0
        return cls(register, amps)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.register, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Trace-one, Hermitian, positive-semidefinite matrix over a labeled register."""

    register: QubitRegister
    entries: np.ndarray

    def __post_init__(self):
        mat = np.array(self.entries, dtype=complex)
        dim = self.register.dimension
        if mat.shape != (dim, dim):
            raise InvalidStateError(f"matrix shape {mat.shape} does not match dimension {dim}")
        if np.abs(mat - mat.conj().T).max() > HERMITICITY_ATOL:
            raise InvalidStateError("matrix is not Hermitian within tolerance")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TRACE_ATOL:
            raise InvalidStateError(f"trace {tr} deviates from 1 beyond {TRACE_ATOL}")
        if np.linalg.eigvalsh(mat).min() < -PSD_ATOL:
            raise InvalidStateError("matrix has an eigenvalue below the PSD tolerance")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        return psi.to_density()

    @classmethod
    def maximally_mixed(cls, register: QubitRegister) -> "DensityMatrix":
        dim = register.dimension
        return cls(register, np.eye(dim, dtype=complex) / dim)


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class ObservableSpec:
    """Projective decomposition of an observable on one qubit of a register.

    ``projectors`` must be orthogonal 2x2 projectors summing to the identity;
    they drive both the dephasing channel and measurement statistics.
    """

    subsystem: str
    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        projs = []
        for p in self.projectors:
            p = np.array(p, dtype=complex)
            if p.shape != (2, 2):
                raise InvalidStateError("qubit projectors must be 2x2")
            if np.abs(p - p.conj().T).max() > HERMITICITY_ATOL:
                raise InvalidStateError("projector is not Hermitian")
            p.flags.writeable = False
            projs.append(p)
        total = sum(projs)
        if np.abs(total - _EYE2).max() > HERMITICITY_ATOL:
            raise InvalidStateError("projectors do not sum to the identity")
        for i, p in enumerate(projs):
            for j, q in enumerate(projs):
                expect = p if i == j else np.zeros((2, 2))
                if np.abs(p @ q - expect).max() > HERMITICITY_ATOL:
                    raise InvalidStateError("projectors are not mutually orthogonal")
        object.__setattr__(self, "projectors", tuple(projs))

    @classmethod
    def from_basis(cls, subsystem: str, basis: np.ndarray) -> "ObservableSpec":
        """Observable whose eigenvectors are the columns of a 2x2 unitary."""
        basis = np.asarray(basis, dtype=complex)
        if basis.shape != (2, 2):
            raise InvalidStateError("basis must be a 2x2 unitary")
        cols = [basis[:, k] for k in range(2)]
        return cls(subsystem, tuple(np.outer(c, c.conj()) for c in cols))

    @classmethod
    def pauli(cls, subsystem: str, kind: str) -> "ObservableSpec":
        kind = kind.upper()
        if kind == "Z":
            basis = np.eye(2, dtype=complex)
        elif kind == "X":
            basis = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        elif kind == "Y":
            basis = np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2)
        else:
            raise ValueError(f"unknown Pauli kind {kind!r}")
        return cls.from_basis(subsystem, basis)


def _as_density(state: State) -> DensityMatrix:
    return state.to_density() if isinstance(state, PureState) else state


def tensor(a: State, b: State) -> State:
    """Composite of two states on disjoint registers (labels concatenated)."""
    overlap = set(a.register.labels) & set(b.register.labels)
    if overlap:
        raise LabelError(f"registers share labels {sorted(overlap)}")
    reg = QubitRegister(a.register.labels + b.register.labels)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(reg, np.kron(a.amplitudes, b.amplitudes))
    da, db = _as_density(a), _as_density(b)
    return DensityMatrix(reg, np.kron(da.entries, db.entries))


def partial_trace(state: State, keep: Iterable[str]) -> DensityMatrix:
    """Reduced state on ``keep``, which stays in the original register order."""
    rho = _as_density(state)
    keep = tuple(keep)
    if not keep:
        raise LabelError("keep set must be nonempty")
    sub = rho.register.subregister(keep)
    n = rho.register.n_qubits
    kept_axes = rho.register.axes(sub.labels)
    if len(kept_axes) == n:
        return rho

    t = rho.entries.reshape((2,) * (2 * n))
    row_sub = list(range(n))
    col_sub = [i if i not in kept_axes else n + i for i in range(n)]
    out_sub = [i for i in kept_axes] + [n + i for i in kept_axes]
    reduced = np.einsum(t, row_sub + col_sub, out_sub)
    dim = sub.dimension
    mat = reduced.reshape(dim, dim)
    mat = (mat + mat.conj().T) / 2
    return DensityMatrix(sub, mat)


def dephasing_map(state: State, observable: ObservableSpec) -> DensityMatrix:
    """Nonselective measurement channel: sum of P_i rho P_i over the projectors.

    Idempotent and trace preserving; the output is re-Hermitized to absorb
    floating-point drift.
    """
    rho = _as_density(state)
    axis = rho.register.axis(observable.subsystem)
    n = rho.register.n_qubits
    out = np.zeros_like(rho.entries)
    for proj in observable.projectors:
        full = _embed_single(proj, axis, n)
        out += full @ rho.entries @ full
    out = (out + out.conj().T) / 2
    return DensityMatrix(rho.register, out)


def _outcome_vector(outcome, m: int) -> np.ndarray:
    vec = np.asarray(outcome, dtype=complex).ravel()
    if vec.shape != (2**m,):
        raise ValueError(f"outcome vector has length {vec.size}, expected {2**m}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > NORM_ATOL:
        raise InvalidStateError("post-selection outcome must be a unit vector")
    return vec


def post_select(
    state: State,
    outcome,
    on: Iterable[str],
    *,
    threshold: float = ZERO_PROBABILITY_THRESHOLD,
) -> tuple[State, float]:
    """Condition on a rank-1 outcome over the ``on`` labels and renormalize.

    ``outcome`` is a unit vector of amplitudes over the ``on`` labels in the
    order they are listed.  Returns the normalized conditional state on the
    remaining labels together with the selection probability.  Probabilities
    below ``threshold`` raise :class:`ZeroProbabilityError`.
    """
    on = tuple(on)
    reg = state.register
    axes = reg.axes(on)
    if len(set(on)) != len(on):
        raise LabelError("post-selection labels must be distinct")
    if len(on) >= reg.n_qubits:
        raise LabelError("post-selection must leave at least one label")
    m = len(on)
    n = reg.n_qubits
    vec = _outcome_vector(outcome, m)
    out_t = vec.reshape((2,) * m)
    rest = QubitRegister(tuple(lb for lb in reg.labels if lb not in on))

    if isinstance(state, PureState):
        psi_t = state.amplitudes.reshape((2,) * n)
        res = np.tensordot(out_t.conj(), psi_t, axes=(list(range(m)), list(axes)))
        prob = float(np.real(np.vdot(res, res)))
        if prob < threshold:
            raise ZeroProbabilityError(
                f"outcome on {on} has probability {prob:.3e} below threshold {threshold:.0e}"
            )
        return PureState(rest, res.ravel() / np.sqrt(prob)), prob

    rho_t = state.entries.reshape((2,) * (2 * n))
    row_sub = list(range(n))
    col_sub = [n + i for i in range(n)]
    out_rows = [row_sub[a] for a in axes]
    out_cols = [col_sub[a] for a in axes]
    keep_rows = [row_sub[i] for i in range(n) if i not in axes]
    keep_cols = [col_sub[i] for i in range(n) if i not in axes]
    res = np.einsum(
        rho_t,
        row_sub + col_sub,
        out_t.conj(),
        out_rows,
        out_t,
        out_cols,
        keep_rows + keep_cols,
    )
    dim = rest.dimension
    mat = res.reshape(dim, dim)
    prob = float(np.real(np.trace(mat)))
    if prob < threshold:
        raise ZeroProbabilityError(
            f"outcome on {on} has probability {prob:.3e} below threshold {threshold:.0e}"
        )
    mat = (mat + mat.conj().T) / 2 / prob
    return DensityMatrix(rest, mat), prob


def apply_unitary(state: State, u: np.ndarray, on: Iterable[str]) -> State:
    """Apply a unitary acting on the ``on`` labels (listed order = matrix order)."""
    on = tuple(on)
    reg = state.register
    axes = reg.axes(on)
    m = len(on)
    u = np.asarray(u, dtype=complex)
    dim = 2**m
    if u.shape != (dim, dim):
        raise ValueError(f"unitary shape {u.shape} does not match {m} qubits")
    if np.abs(u @ u.conj().T - np.eye(dim)).max() > 1e-10:
        raise ValueError("matrix is not unitary within tolerance")
    u_t = u.reshape((2,) * (2 * m))
    contract = list(range(m, 2 * m))

    def transform(tensor, axes_here, mat_t):
        moved = np.tensordot(mat_t, tensor, axes=(contract, list(axes_here)))
        return np.moveaxis(moved, list(range(m)), list(axes_here))

    n = reg.n_qubits
    if isinstance(state, PureState):
        psi_t = transform(state.amplitudes.reshape((2,) * n), axes, u_t)
        return PureState(reg, psi_t.ravel())
    t = state.entries.reshape((2,) * (2 * n))
    t = transform(t, axes, u_t)
    t = transform(t, tuple(a + n for a in axes), u_t.conj())
    mat = t.reshape(reg.dimension, reg.dimension)
    mat = (mat + mat.conj().T) / 2
    return DensityMatrix(reg, mat)


def purity(state: State) -> float:
    """Tr(rho^2); equals 1 exactly on pure inputs."""
    rho = _as_density(state)
    return float(np.real(np.vdot(rho.entries, rho.entries)))


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(a: State, b: State) -> float:
    """Uhlmann fidelity, squared convention: equals |<psi|phi>|^2 on pure pairs."""
    if a.register.labels != b.register.labels:
        raise ValueError(
            f"register mismatch: {a.register.labels} vs {b.register.labels}"
        )
    if isinstance(a, PureState) and isinstance(b, PureState):
        return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
    if isinstance(a, PureState):
        val = np.real(np.vdot(a.amplitudes, _as_density(b).entries @ a.amplitudes))
        return float(min(max(val, 0.0), 1.0))
    if isinstance(b, PureState):
        return fidelity(b, a)
    sa = _psd_sqrt(a.entries)
    inner = sa @ b.entries @ sa
    lam = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    val = float(np.sqrt(lam).sum() ** 2)
    return min(max(val, 0.0), 1.0)
