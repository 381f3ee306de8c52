"""Vacuum-plus-pair polarization states and the bases they are written in.

A state is ``vacuum_amp |0> + sum_k pair_amps[k] |k>`` where ``k`` runs over
the rectilinear product states in the fixed order (HH, HV, VH, VV). The first
letter is the polarization of the photon in spatial mode 1, the second that
of the photon in mode 2. States are kept unnormalized; probabilities are
normalized where they are computed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "RectLabel",
    "BellLabel",
    "PairState",
    "make_downconversion_state",
    "rect_vector",
    "bell_vector",
    "bell_basis_matrix",
    "bell_components",
    "pair_fidelity",
    "assert_close",
    "max_deviation",
    "EXACT_TOL",
]

#: Tolerance used for exact-algebra comparisons throughout the package.
EXACT_TOL = 1e-12

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class RectLabel(enum.IntEnum):
    """Rectilinear product states; the value is the index into ``pair_amps``."""

    HH = 0
    HV = 1
    VH = 2
    VV = 3

    @classmethod
    def parse(cls, text: str) -> "RectLabel":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown rectilinear label {text!r}") from None


class BellLabel(str, enum.Enum):
    PSI_PLUS = "psi_plus"
    PSI_MINUS = "psi_minus"
    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"

    @classmethod
    def parse(cls, text: str) -> "BellLabel":
        """Accept ``psi_plus``, ``psi-plus`` or ``PSI_PLUS`` spellings."""
        key = text.strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown Bell label {text!r}") from None

    @property
    def symbol(self) -> str:
        return {"psi_plus": "psi+", "psi_minus": "psi-",
                "phi_plus": "phi+", "phi_minus": "phi-"}[self.value]


_BELL_COMPONENTS = {
    BellLabel.PSI_MINUS: (0.0, -1.0, 1.0, 0.0),
    BellLabel.PSI_PLUS: (0.0, 1.0, 1.0, 0.0),
    BellLabel.PHI_PLUS: (1.0, 0.0, 0.0, 1.0),
    BellLabel.PHI_MINUS: (1.0, 0.0, 0.0, -1.0),
}


def _as_pair_vector(values: Sequence[complex] | np.ndarray) -> np.ndarray:
    vec = np.array(values, dtype=np.complex128).reshape(-1)
    if vec.shape != (4,):
        raise ValueError(f"pair amplitudes must have 4 entries, got {vec.size}")
    return vec


@dataclass(frozen=True, eq=False)
class PairState:
    """Unnormalized superposition of the vacuum and one photon pair.

    ``pair_amps`` is stored as a read-only complex array of length 4 in
    (HH, HV, VH, VV) order.
    """

    vacuum_amp: complex
    pair_amps: np.ndarray

    def __post_init__(self) -> None:
        vec = _as_pair_vector(self.pair_amps)
        vec.setflags(write=False)
        object.__setattr__(self, "pair_amps", vec)
        object.__setattr__(self, "vacuum_amp", complex(self.vacuum_amp))

    @classmethod
    def vacuum(cls) -> "PairState":
        return cls(1.0, np.zeros(4))

    @property
    def pair_norm_sq(self) -> float:
        return float(np.vdot(self.pair_amps, self.pair_amps).real)

    @property
    def total_norm_sq(self) -> float:
        return abs(self.vacuum_amp) ** 2 + self.pair_norm_sq

    def with_pairs(self, pair_amps) -> "PairState":
        return PairState(self.vacuum_amp, pair_amps)

    def __repr__(self) -> str:
        pairs = ", ".join(f"{z:.6g}" for z in self.pair_amps)
        return f"PairState(vacuum={self.vacuum_amp:.6g}, pairs=({pairs}))"


def make_downconversion_state(epsilon: complex, coeffs) -> PairState:
    """Down-conversion output ``|0> + epsilon * coeffs``.

    ``coeffs`` are not normalized here; that is the caller's convention.
    """
    return PairState(1.0, complex(epsilon) * _as_pair_vector(coeffs))


def rect_vector(label: RectLabel) -> np.ndarray:
    vec = np.zeros(4, dtype=np.complex128)
    vec[RectLabel(label)] = 1.0
    return vec


def bell_vector(label: BellLabel) -> np.ndarray:
    """Unit 4-vector of a Bell state in (HH, HV, VH, VV) order."""
    return _INV_SQRT2 * np.array(_BELL_COMPONENTS[BellLabel(label)], dtype=np.complex128)


def bell_basis_matrix() -> np.ndarray:
    """Unitary whose columns are the Bell vectors (psi+, psi-, phi+, phi-).

    ``B.conj().T @ v`` gives the Bell-basis coordinates of a pair vector.
    """
    return np.column_stack([bell_vector(label) for label in BellLabel])


def bell_components(pair_amps) -> dict:
    """Coordinates ``<B|pairs>`` of a pair vector on each Bell state."""
    vec = _as_pair_vector(pair_amps)
    return {label: complex(np.vdot(bell_vector(label), vec)) for label in BellLabel}


def pair_fidelity(a: PairState, b: PairState) -> float:
    """Phase-insensitive overlap of the pair components of two states."""
    na, nb = a.pair_norm_sq, b.pair_norm_sq
    if na == 0.0 or nb == 0.0:
        raise ValueError("no pair component")
    overlap = np.vdot(a.pair_amps, b.pair_amps)
    return float(min(1.0, abs(overlap) ** 2 / (na * nb)))


def assert_close(a: PairState, b: PairState, tol: float = EXACT_TOL) -> bool:
    """Phase-sensitive amplitude comparison; True when every amplitude agrees.

    Despite the name this returns a boolean rather than raising, so it can be
    used in reports as well as in ``assert`` statements.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if abs(a.vacuum_amp - b.vacuum_amp) > tol:
        return False
    return bool(np.all(np.abs(a.pair_amps - b.pair_amps) <= tol))


def max_deviation(a: PairState, b: PairState) -> float:
    """Largest absolute amplitude difference, vacuum included."""
    return float(max(abs(a.vacuum_amp - b.vacuum_amp),
                     np.max(np.abs(a.pair_amps - b.pair_amps))))
