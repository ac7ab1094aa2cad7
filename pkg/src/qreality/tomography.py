"""Simulated projective tomography with shot noise and Monte Carlo error bars.

The measurement scheme is the full set of 3^n Pauli-basis settings (Z, X or
Y per qubit), each recording all 2^n joint outcomes.  Counts are drawn
multinomially from Born probabilities, reconstruction is linear inversion
over the Pauli operator basis, and physicality is restored by clipping
negative eigenvalues and redistributing the deficit.  Every stochastic step
takes an explicit seed and is bit-reproducible; Monte Carlo resamples use
independent child seeds split from the caller's seed.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .core import DensityMatrix, ObservableSpec, QubitRegister, fidelity
from .measures import irreality

SETTING_BASES = ("Z", "X", "Y")

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Columns are the +1 and -1 eigenvectors of each basis operator.
_EIGENBASIS = {
    "Z": np.eye(2, dtype=complex),
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "Y": np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2),
}


class IncompleteDataError(ValueError):
    """The dataset does not contain every required measurement setting."""


class DatasetFormatError(ValueError):
    """A dataset file or payload is malformed."""


@dataclass(frozen=True)
class MeasurementSetting:
    """Per-qubit basis choice; the joint projectors are rank-1 and complete."""

    bases: tuple[str, ...]

    def __post_init__(self):
        bases = tuple(self.bases)
        object.__setattr__(self, "bases", bases)
        for b in bases:
            if b not in SETTING_BASES:
                raise DatasetFormatError(f"unknown measurement basis {b!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.bases)

    def eigenvector_matrix(self) -> np.ndarray:
        """2^n x 2^n matrix whose columns are the joint-outcome eigenvectors."""
        return functools.reduce(np.kron, (_EIGENBASIS[b] for b in self.bases))

    def projectors(self) -> list[np.ndarray]:
        v = self.eigenvector_matrix()
        return [np.outer(v[:, k], v[:, k].conj()) for k in range(v.shape[1])]


def all_settings(n_qubits: int) -> tuple[MeasurementSetting, ...]:
    """The 3^n settings in a fixed, deterministic order."""
    return tuple(
        MeasurementSetting(bases)
        for bases in itertools.product(SETTING_BASES, repeat=n_qubits)
    )


@dataclass(frozen=True)
class TomographyDataset:
    """Counts for every setting, plus the budget and seed that produced them."""

    n_qubits: int
    shots_per_setting: int
    seed: int
    settings: tuple[MeasurementSetting, ...]
    counts: np.ndarray  # shape (n_settings, 2**n_qubits)

    def __post_init__(self):
        counts = np.array(self.counts)
        if counts.shape != (len(self.settings), 2**self.n_qubits):
            raise DatasetFormatError(
                f"counts shape {counts.shape} does not match "
                f"{len(self.settings)} settings x {2**self.n_qubits} outcomes"
            )
        if np.any(counts < 0):
            raise DatasetFormatError("counts must be nonnegative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "settings", tuple(self.settings))


def born_probabilities(rho: DensityMatrix, setting: MeasurementSetting) -> np.ndarray:
    """Outcome probabilities Tr(rho P_k) for one setting, clipped and normalized."""
    v = setting.eigenvector_matrix()
    p = np.einsum("io,ij,jo->o", v.conj(), rho.entries, v).real
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def simulate_counts(
    rho: DensityMatrix, shots_per_setting: int, seed: int
) -> TomographyDataset:
    """Multinomial counts for all 3^n settings; identical seeds give identical counts."""
    if shots_per_setting < 1:
        raise ValueError("shots_per_setting must be at least 1")
    n = rho.register.n_qubits
    settings = all_settings(n)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    counts = np.stack(
        [rng.multinomial(shots_per_setting, born_probabilities(rho, s)) for s in settings]
    )
    return TomographyDataset(
        n_qubits=n,
        shots_per_setting=int(shots_per_setting),
        seed=int(seed),
        settings=settings,
        counts=counts,
    )


@functools.lru_cache(maxsize=None)
def _outcome_bits(n_qubits: int) -> np.ndarray:
    bits = np.zeros((2**n_qubits, n_qubits), dtype=np.int64)
    for o in range(2**n_qubits):
        for q in range(n_qubits):
            bits[o, q] = (o >> (n_qubits - 1 - q)) & 1
    return bits


@functools.lru_cache(maxsize=None)
def _pauli_strings(n_qubits: int):
    """Non-identity Pauli strings with their matrices, supports, and the
    compatible settings / outcome-sign tables needed for linear inversion."""
    settings = all_settings(n_qubits)
    bits = _outcome_bits(n_qubits)
    entries = []
    for string in itertools.product("IXYZ", repeat=n_qubits):
        if all(ch == "I" for ch in string):
            continue
        support = tuple(q for q, ch in enumerate(string) if ch != "I")
        matrix = functools.reduce(np.kron, (_PAULI[ch] for ch in string))
        compatible = tuple(
            idx
            for idx, setting in enumerate(settings)
            if all(setting.bases[q] == string[q] for q in support)
        )
        signs = np.where(bits[:, support].sum(axis=1) % 2 == 0, 1.0, -1.0)
        entries.append((string, matrix, compatible, signs))
    return tuple(entries)


def reconstruct_from_frequencies(freqs: np.ndarray, n_qubits: int) -> np.ndarray:
    """Linear inversion from per-setting outcome frequencies.

    ``freqs`` rows follow the :func:`all_settings` order.  The identity
    coefficient is fixed to 1, so the estimate has unit trace by
    construction; it may still fail to be positive semidefinite.
    """
    freqs = np.asarray(freqs, dtype=float)
    dim = 2**n_qubits
    rho = np.eye(dim, dtype=complex)
    for _, matrix, compatible, signs in _pauli_strings(n_qubits):
        expectation = float(np.mean([freqs[idx] @ signs for idx in compatible]))
        rho += expectation * matrix
    return rho / dim


def reconstruct_linear(data: TomographyDataset) -> np.ndarray:
    """Linear-inversion estimate from a complete dataset (possibly non-PSD)."""
    n = data.n_qubits
    expected = all_settings(n)
    by_bases = {s.bases: i for i, s in enumerate(data.settings)}
    missing = [s.bases for s in expected if s.bases not in by_bases]
    if missing:
        raise IncompleteDataError(
            f"dataset is missing {len(missing)} of {len(expected)} settings, "
            f"first missing: {missing[0]}"
        )
    totals = data.counts.sum(axis=1)
    if np.any(totals == 0):
        raise IncompleteDataError("a setting has zero total counts")
    ordered = np.stack([data.counts[by_bases[s.bases]] for s in expected])
    freqs = ordered / ordered.sum(axis=1, keepdims=True)
    return reconstruct_from_frequencies(freqs, n)


def project_to_physical(
    rho_hat: np.ndarray, register: Optional[QubitRegister] = None
) -> DensityMatrix:
    """Nearest density matrix by eigenvalue clipping and redistribution.

    The input is Hermitized and trace-normalized, then negative eigenvalues
    are zeroed from the most negative up while the deficit is spread evenly
    over the remaining ones, keeping the eigenvectors fixed.
    """
    mat = np.asarray(rho_hat, dtype=complex)
    mat = (mat + mat.conj().T) / 2
    tr = float(np.real(np.trace(mat)))
    if abs(tr) < 1e-12:
        raise ValueError("matrix has (near-)zero trace; cannot normalize")
    mat = mat / tr
    w, v = np.linalg.eigh(mat)
    lam = w[::-1].copy()  # descending
    deficit = 0.0
    for i in range(lam.size - 1, -1, -1):
        if lam[i] + deficit / (i + 1) < 0.0:
            deficit += lam[i]
            lam[i] = 0.0
        else:
            lam[: i + 1] += deficit / (i + 1)
            break
    w_fixed = lam[::-1]
    w_fixed = w_fixed / w_fixed.sum()  # absorb float drift; the sum is 1 exactly
    out = (v * w_fixed) @ v.conj().T
    out = (out + out.conj().T) / 2
    n = int(round(np.log2(mat.shape[0])))
    if register is None:
        register = QubitRegister(tuple(f"q{i}" for i in range(n)))
    return DensityMatrix(register, out)


def monte_carlo_irreality(
    data: TomographyDataset,
    observable: ObservableSpec,
    n_resamples: int,
    seed: int,
    register: Optional[QubitRegister] = None,
) -> tuple[float, float]:
    """Mean and standard deviation of the reconstructed irreality.

    Counts are resampled as Poisson variables around the observed values
    (parametric bootstrap), reconstructed, projected to a physical state,
    and measured.  Child seeds are split deterministically from ``seed``.
    """
    if n_resamples < 2:
        raise ValueError("n_resamples must be at least 2")
    children = np.random.SeedSequence(seed).spawn(n_resamples)
    values = np.empty(n_resamples)
    for r, child in enumerate(children):
        rng = np.random.default_rng(child)
        resampled = rng.poisson(data.counts)
        empty = resampled.sum(axis=1) == 0
        if np.any(empty):
            # Degenerate resample (only possible at tiny counts); keep the
            # observed row rather than dividing by zero.
            resampled[empty] = data.counts[empty]
        rho = project_to_physical(
            reconstruct_linear(replace(data, counts=resampled)), register
        )
        values[r] = irreality(rho, observable).irreality
    return float(values.mean()), float(values.std(ddof=1))


@dataclass(frozen=True)
class ReconstructionResult:
    """Linear estimate, its physical projection, and quality diagnostics."""

    rho_linear: np.ndarray
    rho_physical: DensityMatrix
    fidelity_to_truth: Optional[float]
    diagnostics: dict


def tomography_end_to_end(
    rho_true: DensityMatrix, shots: int, seed: int, *, max_qubits: int = 4
) -> ReconstructionResult:
    """Simulate counts, reconstruct, restore physicality, report fidelity."""
    n = rho_true.register.n_qubits
    if n > max_qubits:
        raise ValueError(f"register has {n} qubits, maximum supported is {max_qubits}")
    data = simulate_counts(rho_true, shots, seed)
    rho_linear = reconstruct_linear(data)
    eigs = np.linalg.eigvalsh((rho_linear + rho_linear.conj().T) / 2)
    rho_physical = project_to_physical(rho_linear, rho_true.register)
    return ReconstructionResult(
        rho_linear=rho_linear,
        rho_physical=rho_physical,
        fidelity_to_truth=fidelity(rho_physical, rho_true),
        diagnostics={
            "min_eigenvalue_linear": float(eigs.min()),
            "clipped_negative_mass": float(-eigs[eigs < 0].sum()),
            "n_settings": len(data.settings),
            "shots_per_setting": int(shots),
            "seed": int(seed),
        },
    )


def dataset_to_dict(data: TomographyDataset) -> dict:
    return {
        "n_qubits": data.n_qubits,
        "shots_per_setting": data.shots_per_setting,
        "seed": data.seed,
        "settings": [
            {"bases": list(s.bases), "counts": [int(c) for c in row]}
            for s, row in zip(data.settings, data.counts)
        ],
    }


def save_dataset(data: TomographyDataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset_to_dict(data), fh, indent=2)
        fh.write("\n")


def dataset_from_dict(payload: dict) -> TomographyDataset:
    """Build a dataset from the JSON schema, with field-level diagnostics."""
    if not isinstance(payload, dict):
        raise DatasetFormatError("top-level JSON value must be an object")
    for field in ("n_qubits", "shots_per_setting", "seed", "settings"):
        if field not in payload:
            raise DatasetFormatError(f"missing required field {field!r}")
    n = payload["n_qubits"]
    if not isinstance(n, int) or n < 1:
        raise DatasetFormatError(f"n_qubits: expected positive integer, got {n!r}")
    shots = payload["shots_per_setting"]
    if not isinstance(shots, int) or shots < 1:
        raise DatasetFormatError(
            f"shots_per_setting: expected positive integer, got {shots!r}"
        )
    raw_settings = payload["settings"]
    if not isinstance(raw_settings, list) or not raw_settings:
        raise DatasetFormatError("settings: expected a nonempty list")

    settings = []
    counts = []
    for i, item in enumerate(raw_settings):
        where = f"settings[{i}]"
        if not isinstance(item, dict):
            raise DatasetFormatError(f"{where}: expected an object")
        bases = item.get("bases")
        if not isinstance(bases, list) or len(bases) != n:
            raise DatasetFormatError(f"{where}.bases: expected {n} basis letters")
        try:
            setting = MeasurementSetting(tuple(bases))
        except DatasetFormatError as exc:
            raise DatasetFormatError(f"{where}.bases: {exc}") from None
        row = item.get("counts")
        if not isinstance(row, list) or len(row) != 2**n:
            raise DatasetFormatError(f"{where}.counts: expected {2**n} integers")
        for j, c in enumerate(row):
            if not isinstance(c, int) or c < 0:
                raise DatasetFormatError(
                    f"{where}.counts[{j}]: expected nonnegative integer, got {c!r}"
                )
        if sum(row) > shots:
            raise DatasetFormatError(
                f"{where}.counts: total {sum(row)} exceeds shots_per_setting {shots}"
            )
        settings.append(setting)
        counts.append(row)

    return TomographyDataset(
        n_qubits=n,
        shots_per_setting=shots,
        seed=int(payload["seed"]),
        settings=tuple(settings),
        counts=np.array(counts, dtype=np.int64),
    )


def load_dataset(path) -> TomographyDataset:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(
                f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    return dataset_from_dict(payload)
