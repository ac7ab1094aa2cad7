"""Six-qubit optical protocol in which a remote projective choice erases realism.

The register is ``(A, B, a, b, d1, d2)``: Alice's polarization and path,
Bob's polarization and interferometer path, and two auxiliary modes written
by beam displacers inside Bob's Sagnac loop.  A polarization-entangled pair
cos(theta/2)|00> + sin(theta/2)|11> feeds the device.  Stage Psi1 is the
state after the Sagnac's polarizing beam splitter has written B onto b;
stage Psi2 is the state after the beam displacers have written onto d1, d2.

Alice either projects her polarization onto |0> (configuration Cz) or onto
|+> / |-> (configuration Cx), always with her path on |0>; Bob projects his
polarization onto |+>.  The conditional state on (b, d1, d2) is an omega
state whose irreality in the path or marker basis is zero for Cz and equals
the binary entropy H(cos^2(theta/2)) for Cx.

Reflection phases inside the loop are dropped (assumed compensated by the
displacer alignment), so all protocol amplitudes are real.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .core import (
    ConfigurationError,
    DensityMatrix,
    ObservableSpec,
    PureState,
    QubitRegister,
    apply_unitary,
    post_select,
)
from .measures import irreality

ERASER_LABELS = ("A", "B", "a", "b", "d1", "d2")

ALICE_CONFIGS = ("Cz", "Cx")
BRANCH_SIGNS = ("plus", "minus")
TARGETS = {"path_b": "b", "b": "b", "d1": "d1", "d2": "d2"}

_BD_NORM_ATOL = 1e-10


def eraser_register() -> QubitRegister:
    return QubitRegister(ERASER_LABELS)


@dataclass(frozen=True)
class ProtocolConfig:
    """One run configuration: pair angle, Alice's choice, displacer settings.

    ``bd_settings`` holds the real displacer amplitudes (gamma1, delta1,
    gamma2, delta2); each (delta_k, gamma_k) pair must be normalized.  The
    default (0, 1, 1, 0) is the standard operating point where the first
    displacer deviates horizontal polarization and the second deviates
    vertical polarization with unit amplitude.
    """

    theta: float
    alice_config: str
    alice_branch: str = "plus"
    bd_settings: tuple[float, float, float, float] = (0.0, 1.0, 1.0, 0.0)

    def __post_init__(self):
        if not (-1e-12 <= self.theta <= np.pi + 1e-12):
            raise ConfigurationError(f"theta {self.theta} outside [0, pi]")
        if self.alice_config not in ALICE_CONFIGS:
            raise ConfigurationError(f"alice_config must be one of {ALICE_CONFIGS}")
        if self.alice_branch not in BRANCH_SIGNS:
            raise ConfigurationError(f"alice_branch must be one of {BRANCH_SIGNS}")
        gamma1, delta1, gamma2, delta2 = self.bd_settings
        for k, (delta, gamma) in enumerate(((delta1, gamma1), (delta2, gamma2)), start=1):
            if abs(delta**2 + gamma**2 - 1.0) > _BD_NORM_ATOL:
                raise ConfigurationError(
                    f"displacer {k} amplitudes (delta, gamma) = ({delta}, {gamma}) "
                    "are not normalized"
                )

    @property
    def c(self) -> float:
        return float(np.cos(self.theta / 2))

    @property
    def s(self) -> float:
        return float(np.sin(self.theta / 2))


@dataclass(frozen=True)
class ProtocolStage:
    name: str
    state: PureState

    def __post_init__(self):
        if self.name not in ("Psi0", "Psi1", "Psi2"):
            raise ConfigurationError(f"unknown stage {self.name!r}")


def build_psi0(cfg: ProtocolConfig) -> PureState:
    """Initial state: entangled polarizations, paths at |0>, markers at |11>."""
    reg = eraser_register()
    amps = np.zeros(reg.dimension, dtype=complex)
    amps[reg.index_of("000011")] = cfg.c
    amps[reg.index_of("110011")] = cfg.s
    return PureState(reg, amps)


_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def evolve_to_psi1(psi0: PureState) -> PureState:
    """Sagnac entry: the polarizing beam splitter writes B onto the path b."""
    return apply_unitary(psi0, _CNOT, ("B", "b"))


def _displacer_block(rotation: np.ndarray, flip_when: int) -> np.ndarray:
    """Wave-plate rotation on B followed by a marker flip conditioned on B."""
    eye2 = np.eye(2, dtype=complex)
    flip = np.array([[0, 1], [1, 0]], dtype=complex)
    controlled_flip = np.zeros((4, 4), dtype=complex)
    controlled_flip[:2, :2] = flip if flip_when == 0 else eye2
    controlled_flip[2:, 2:] = flip if flip_when == 1 else eye2
    return controlled_flip @ np.kron(rotation, eye2)


def apply_beam_displacers(psi1: PureState, cfg: ProtocolConfig) -> PureState:
    """Write the path markers d1, d2.

    The displacer in the b=0 arm rotates B by (delta1, gamma1) and deviates
    the horizontal component into d1=0; the one in the b=1 arm rotates B by
    (delta2, gamma2) and deviates the vertical component into d2=0.  At the
    default settings this flips d1 in the B=0 branch and d2 in the B=1
    branch, leaving the other marker untouched.
    """
    gamma1, delta1, gamma2, delta2 = cfg.bd_settings
    rot1 = np.array([[delta1, -gamma1], [gamma1, delta1]], dtype=complex)
    rot2 = np.array([[gamma2, delta2], [-delta2, gamma2]], dtype=complex)
    u1 = _displacer_block(rot1, flip_when=0)
    u2 = _displacer_block(rot2, flip_when=1)
    eye4 = np.eye(4, dtype=complex)

    controlled_1 = np.zeros((8, 8), dtype=complex)
    controlled_1[:4, :4] = u1
    controlled_1[4:, 4:] = eye4
    state = apply_unitary(psi1, controlled_1, ("b", "B", "d1"))

    controlled_2 = np.zeros((8, 8), dtype=complex)
    controlled_2[:4, :4] = eye4
    controlled_2[4:, 4:] = u2
    return apply_unitary(state, controlled_2, ("b", "B", "d2"))


def protocol_stage(cfg: ProtocolConfig, name: str) -> ProtocolStage:
    """Build the state at a named stage by applying the declared unitaries."""
    psi = build_psi0(cfg)
    if name == "Psi0":
        return ProtocolStage(name, psi)
    psi = evolve_to_psi1(psi)
    if name == "Psi1":
        return ProtocolStage(name, psi)
    if name == "Psi2":
        return ProtocolStage(name, apply_beam_displacers(psi, cfg))
    raise ConfigurationError(f"unknown stage {name!r}")


_PLUS = np.array([1.0, 1.0]) / np.sqrt(2)
_MINUS = np.array([1.0, -1.0]) / np.sqrt(2)


def alice_and_bob_project(
    stage: ProtocolStage,
    cfg: ProtocolConfig,
    *,
    alice_z_outcome: int = 0,
    bob_sign: str = "plus",
) -> tuple[DensityMatrix, float]:
    """Project (A, a) per Alice's configuration and B onto |+> (or |->).

    Returns the conditional omega state on (b, d1, d2) and the joint
    selection probability.  ``alice_z_outcome`` selects the optional |1>_A
    branch of Cz; ``bob_sign`` selects Bob's |-> variant.  Both default to
    the standard protocol choices.
    """
    if stage.name not in ("Psi1", "Psi2"):
        raise ConfigurationError("projections are defined at stages Psi1 and Psi2")
    if alice_z_outcome not in (0, 1):
        raise ConfigurationError("alice_z_outcome must be 0 or 1")
    if bob_sign not in BRANCH_SIGNS:
        raise ConfigurationError(f"bob_sign must be one of {BRANCH_SIGNS}")

    if cfg.alice_config == "Cz":
        alice_pol = np.eye(2)[alice_z_outcome]
    else:
        alice_pol = _PLUS if cfg.alice_branch == "plus" else _MINUS
    alice_outcome = np.kron(alice_pol, [1.0, 0.0])  # path a projected on |0>
    bob_outcome = _PLUS if bob_sign == "plus" else _MINUS

    state, p_alice = post_select(stage.state, alice_outcome, ("A", "a"))
    state, p_bob = post_select(state, bob_outcome, ("B",))
    return state.to_density(), p_alice * p_bob


@dataclass
class SweepRecord:
    """One row of an irreality-versus-theta sweep."""

    theta: float
    config: str
    target: str
    irreality_analytic: float
    selection_probability: float
    irreality_tomo_mean: Optional[float] = None
    irreality_tomo_std: Optional[float] = None


def stage_for_target(target: str) -> str:
    """Path irreality is probed at Psi1, marker irreality at Psi2."""
    label = TARGETS.get(target)
    if label is None:
        raise ConfigurationError(f"target must be one of {sorted(TARGETS)}")
    return "Psi1" if label == "b" else "Psi2"


def omega_state(
    cfg: ProtocolConfig, target: str, **variants
) -> tuple[DensityMatrix, float]:
    """Omega state and selection probability for the stage probing ``target``."""
    stage = protocol_stage(cfg, stage_for_target(target))
    return alice_and_bob_project(stage, cfg, **variants)


def default_theta_grid(n: int = 41) -> np.ndarray:
    """Uniform grid on [0, pi/2], the range where the curves are plotted."""
    return np.linspace(0.0, np.pi / 2, n)


def irreality_curve(
    cfg_template: ProtocolConfig,
    target: str,
    theta_grid: Iterable[float],
) -> list[SweepRecord]:
    """Analytic irreality of the chosen degree of freedom over a theta grid.

    For Cz the curve is identically zero; for Cx it equals the binary
    entropy of cos^2(theta/2), with the d1 and d2 curves coinciding.
    """
    thetas = [float(t) for t in theta_grid]
    if not thetas:
        raise ConfigurationError("theta grid must be nonempty")
    label = TARGETS.get(target)
    if label is None:
        raise ConfigurationError(f"target must be one of {sorted(TARGETS)}")
    observable = ObservableSpec.pauli(label, "Z")

    records = []
    for theta in thetas:
        cfg = dataclasses.replace(cfg_template, theta=theta)
        omega, prob = omega_state(cfg, label)
        report = irreality(omega, observable)
        records.append(
            SweepRecord(
                theta=theta,
                config=cfg.alice_config,
                target=label,
                irreality_analytic=report.irreality,
                selection_probability=prob,
            )
        )
    return records
