"""Mach-Zehnder interferometer with optional path markers on two extra qubits.

The single probe qubit Q carries the spatial mode (|0> horizontal, |1>
vertical).  Stages: s0 input, s1 after the first beam splitter (plus the
marker write in the extended device), s2 after the mirrors and the phase
shifter, s3 after the second beam splitter (closed configuration only).

Conventions: the beam splitter is [[1, i], [i, 1]]/sqrt(2); mirrors swap
the modes and add a factor i; the phase shifter multiplies the |1> arm by
exp(i*phi).  Stage s3 then matches cos(phi/2)|0> + sin(phi/2)|1> up to a
global phase, which no reported probability or measure depends on.

``decohere_after_first_bs`` replaces the s1 probe state by the maximally
mixed qubit before any marker interaction, turning the extended output into
a merely classically correlated marker pair.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .core import (
    ConfigurationError,
    DensityMatrix,
    ObservableSpec,
    PureState,
    QubitRegister,
    State,
    apply_unitary,
    partial_trace,
    post_select,
    purity,
    tensor,
)
from .measures import entanglement_entropy, irreality, mutual_information

STAGES = ("s0", "s1", "s2", "s3")

_BS = np.array([[1, 1j], [1j, 1]], dtype=complex) / np.sqrt(2)
_MIRROR = np.array([[0, 1j], [1j, 0]], dtype=complex)

_PPT_TOL = 1e-10


class UndefinedVisibilityError(ValueError):
    """Visibility is undefined because the click probability vanishes."""


@dataclass(frozen=True)
class MziConfig:
    phi: float
    closed: bool = True
    extended: bool = False
    decohere_after_first_bs: bool = False

    def __post_init__(self):
        if not np.isfinite(self.phi):
            raise ConfigurationError("phi must be finite")


def _phase_shifter(phi: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * phi)]], dtype=complex)


def _marker_write() -> np.ndarray:
    """Arm-dependent marker flip: Q=0 writes d1, Q=1 writes d2."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    eye2 = np.eye(2, dtype=complex)
    gate = np.zeros((8, 8), dtype=complex)
    gate[:4, :4] = np.kron(x, eye2)
    gate[4:, 4:] = np.kron(eye2, x)
    return gate


def _input_state(cfg: MziConfig) -> PureState:
    probe = PureState(QubitRegister(("Q",)), [1.0, 0.0])
    if not cfg.extended:
        return probe
    markers = PureState.from_bits(QubitRegister(("d1", "d2")), "11")
    return tensor(probe, markers)


def mzi_state(cfg: MziConfig, stage: str) -> State:
    """State of the device at the requested stage.

    Returns a :class:`PureState` unless ``decohere_after_first_bs`` is set,
    in which case stages s1 and later are density matrices.
    """
    if stage not in STAGES:
        raise ConfigurationError(f"stage must be one of {STAGES}")
    if stage == "s3" and not cfg.closed:
        raise ConfigurationError("stage s3 requires the closed configuration")

    state: State = _input_state(cfg)
    if stage == "s0":
        return state

    state = apply_unitary(state, _BS, ("Q",))
    if cfg.decohere_after_first_bs:
        probe = DensityMatrix.maximally_mixed(QubitRegister(("Q",)))
        if cfg.extended:
            markers = PureState.from_bits(QubitRegister(("d1", "d2")), "11")
            state = tensor(probe, markers.to_density())
        else:
            state = probe
    if cfg.extended:
        state = apply_unitary(state, _marker_write(), ("Q", "d1", "d2"))
    if stage == "s1":
        return state

    state = apply_unitary(state, _MIRROR, ("Q",))
    state = apply_unitary(state, _phase_shifter(cfg.phi), ("Q",))
    if stage == "s2":
        return state

    return apply_unitary(state, _BS, ("Q",))


def _click_probabilities(cfg: MziConfig) -> tuple[float, float]:
    state = mzi_state(cfg, "s3" if cfg.closed else "s2")
    rho_q = partial_trace(state, ("Q",))
    p0 = float(np.real(rho_q.entries[0, 0]))
    p1 = float(np.real(rho_q.entries[1, 1]))
    return p0, p1


def detector_probabilities(cfg: MziConfig, phi_grid) -> list[tuple[float, float]]:
    """Click probabilities (p0, p1) over a phase grid.

    Closed device: p0 = cos^2(phi/2).  Open device: the detectors see the
    arms directly and p0 = 1/2 for every phase.
    """
    phis = [float(p) for p in np.atleast_1d(phi_grid)]
    if not phis:
        raise ConfigurationError("phi grid must be nonempty")
    return [_click_probabilities(dataclasses.replace(cfg, phi=p)) for p in phis]


def visibility(cfg: MziConfig, *, n_grid: int = 256) -> float:
    """(max - min) / (max + min) of p0 over a uniform phase grid on [0, 2*pi)."""
    if n_grid < 64:
        raise ConfigurationError("visibility grid needs at least 64 points")
    grid = np.linspace(0.0, 2 * np.pi, n_grid, endpoint=False)
    p0 = np.array([p for p, _ in detector_probabilities(cfg, grid)])
    top, bottom = float(p0.max()), float(p0.min())
    if top + bottom < 1e-15:
        raise UndefinedVisibilityError("click probability vanishes on the whole grid")
    return (top - bottom) / (top + bottom)


def _ppt_separable(rho: DensityMatrix) -> bool:
    """Positive-partial-transpose test, conclusive for a pair of qubits."""
    t = rho.entries.reshape(2, 2, 2, 2)
    transposed = t.transpose(0, 3, 2, 1).reshape(4, 4)
    return bool(np.linalg.eigvalsh(transposed).min() >= -_PPT_TOL)


@dataclass(frozen=True)
class ExtendedOutputReport:
    """Marker pair left behind after post-selecting one detector."""

    postselected_state: DensityMatrix
    selection_probability: float
    entanglement_entropy: float
    mutual_information: float
    ppt_separable: bool
    irreality_sigma_z_at_s1: float


def extended_output_analysis(cfg: MziConfig, *, detector: int = 0) -> ExtendedOutputReport:
    """Post-select a detector and characterize the marker pair (d1, d2).

    A coherent probe leaves the markers entangled (unit entanglement
    entropy); a probe decohered after the first beam splitter leaves only
    the classical mixture of |10> and |01>.
    """
    if not cfg.extended:
        raise ConfigurationError("extended_output_analysis needs extended=True")
    if detector not in (0, 1):
        raise ConfigurationError("detector must be 0 or 1")

    final = mzi_state(cfg, "s3" if cfg.closed else "s2")
    outcome = np.eye(2)[detector]
    selected, prob = post_select(final, outcome, ("Q",))
    rho_markers = (
        selected.to_density() if isinstance(selected, PureState) else selected
    )

    if purity(rho_markers) >= 1.0 - 1e-8:
        ee = entanglement_entropy(rho_markers, (("d1",), ("d2",)))
    else:
        ee = 0.0  # mixed marker output carries no pure-state entanglement entropy

    probe_reg = QubitRegister(("Q",))
    if cfg.decohere_after_first_bs:
        probe_s1: State = DensityMatrix.maximally_mixed(probe_reg)
    else:
        probe_s1 = apply_unitary(PureState(probe_reg, [1.0, 0.0]), _BS, ("Q",))
    irr = irreality(probe_s1, ObservableSpec.pauli("Q", "Z")).irreality

    return ExtendedOutputReport(
        postselected_state=rho_markers,
        selection_probability=prob,
        entanglement_entropy=ee,
        mutual_information=mutual_information(rho_markers, (("d1",), ("d2",))),
        ppt_separable=_ppt_separable(rho_markers),
        irreality_sigma_z_at_s1=irr,
    )
