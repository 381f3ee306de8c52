"""Optical elements acting on the pair sector.

Two families:

* half-wave plates, i.e. single-mode Jones matrices lifted to the 4-dimensional
  pair space with a Kronecker product, and
* the pumped-crystal conditional-phase switch, which to first order adds a
  fixed amplitude ``injection`` to one rectilinear pair component.

The switch map is affine, not linear, and leaves the vacuum amplitude alone.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .state import PairState, RectLabel

__all__ = [
    "HADAMARD_ANGLE",
    "Modes",
    "TwoModeGate",
    "CrystalRecord",
    "SwitchSettings",
    "hadamard_gate",
    "hwp_jones",
    "lift",
    "waveplate_gate",
    "apply_gate",
    "apply_switch",
    "required_injection_for_pi",
    "norm_change",
]

_H_INT = np.array([[1.0, 1.0], [1.0, -1.0]])
_I2 = np.eye(2)
#: A half-wave plate at 22.5 degrees acts as a Hadamard on polarization.
HADAMARD_ANGLE = math.pi / 8


class Modes(enum.Enum):
    MODE1_ONLY = "mode1_only"
    MODE2_ONLY = "mode2_only"
    BOTH = "both"


@dataclass(frozen=True, eq=False)
class TwoModeGate:
    """4x4 complex matrix acting on ``pair_amps``; never touches the vacuum."""

    matrix: np.ndarray
    name: str = ""
    #: (theta in radians, mode) of the half-wave plates realizing the gate, if known
    plates: tuple[tuple[float, int], ...] = ()

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"gate matrix must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def is_unitary(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.matrix.conj().T @ self.matrix, np.eye(4), rtol=0, atol=tol))

    def __matmul__(self, other: "TwoModeGate") -> "TwoModeGate":
        plates = other.plates + self.plates if other.plates and self.plates else ()
        return TwoModeGate(self.matrix @ other.matrix, f"{self.name}*{other.name}", plates)


def lift(single: np.ndarray, mode: int) -> np.ndarray:
    """Embed a 2x2 polarization operator on spatial mode 1 or 2 into pair space."""
    if mode == 1:
        return np.kron(single, _I2)
    if mode == 2:
        return np.kron(_I2, single)
    raise ValueError(f"mode must be 1 or 2, got {mode!r}")


def hadamard_gate(modes: Modes | str) -> TwoModeGate:
    modes = Modes(modes)
    # Built from the integer sign pattern so H1 x H2 has entries of exactly +-1/2.
    if modes is Modes.BOTH:
        plates = ((HADAMARD_ANGLE, 1), (HADAMARD_ANGLE, 2))
        return TwoModeGate(np.kron(_H_INT, _H_INT) / 2.0, "H1xH2", plates)
    mode = 1 if modes is Modes.MODE1_ONLY else 2
    name = "H1xI2" if mode == 1 else "I1xH2"
    return TwoModeGate(lift(_H_INT, mode) / math.sqrt(2.0), name, ((HADAMARD_ANGLE, mode),))


def hwp_jones(theta: float) -> np.ndarray:
    """Half-wave plate with fast axis at ``theta`` radians from horizontal."""
    c, s = math.cos(2 * theta), math.sin(2 * theta)
    return np.array([[c, s], [s, -c]])


def waveplate_gate(theta: float, mode: int) -> TwoModeGate:
    return TwoModeGate(lift(hwp_jones(theta), mode), f"HWP{mode}({math.degrees(theta):g}deg)",
                       ((float(theta), mode),))


@dataclass(frozen=True)
class CrystalRecord:
    """Provenance of a switch amplitude: ``mu = -i t g zeta / hbar``.

    Frequencies are informational only; the pump runs at twice the signal
    frequency for degenerate down-conversion.
    """

    coupling: complex
    pump_amp: complex
    interaction_time: float
    hbar: float = 1.0
    signal_frequency: float = 1.0
    pump_frequency: float | None = None

    def __post_init__(self) -> None:
        if self.pump_frequency is None:
            object.__setattr__(self, "pump_frequency", 2.0 * self.signal_frequency)

    @property
    def injection(self) -> complex:
        return -1j * self.interaction_time * self.coupling * self.pump_amp / self.hbar


@dataclass(frozen=True)
class SwitchSettings:
    injection: complex
    target: RectLabel = RectLabel.HH
    crystal_doc: CrystalRecord | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "injection", complex(self.injection))
        object.__setattr__(self, "target", RectLabel(self.target))
        if self.crystal_doc is not None:
            expected = self.crystal_doc.injection
            if abs(expected - self.injection) > 1e-12 * max(1.0, abs(expected)):
                raise ValueError(
                    f"injection {self.injection} inconsistent with crystal record ({expected})"
                )

    @classmethod
    def from_crystal(cls, crystal: CrystalRecord, target: RectLabel = RectLabel.HH) -> "SwitchSettings":
        return cls(crystal.injection, target, crystal)


def apply_gate(state: PairState, gate: TwoModeGate) -> PairState:
    return state.with_pairs(gate.matrix @ state.pair_amps)


def apply_switch(state: PairState, settings: SwitchSettings) -> PairState:
    """First-order switch: add ``settings.injection`` to the target pair amplitude."""
    pairs = state.pair_amps.copy()
    pairs[settings.target] += settings.injection
    return state.with_pairs(pairs)


def required_injection_for_pi(state: PairState, target: RectLabel = RectLabel.HH) -> complex:
    """Injection that negates the target amplitude (the conditional-pi condition)."""
    return -2.0 * complex(state.pair_amps[RectLabel(target)])


def norm_change(state: PairState, settings: SwitchSettings) -> float:
    """Change in squared norm caused by the switch: ``|mu|^2 + 2 Re(mu* a_target)``."""
    mu = settings.injection
    a = complex(state.pair_amps[settings.target])
    return abs(mu) ** 2 + 2.0 * (mu.conjugate() * a).real
