"""Exact propagation of the pumped-crystal switch in a truncated Fock space.

Modes are ordered (1H, 1V, 2H, 2V). With a classical pump the interaction is

    H = kappa a+_{1H} a+_{2H} + conj(kappa) a_{1H} a_{2H},   kappa = g * zeta,

with hbar = 1. Propagating for time t gives exp(-i H t); to first order this
adds ``mu = -i kappa t`` to the |1,0,1,0> (HH pair) amplitude, which is the
affine switch model in :mod:`bellswitch.elements`. The functions here measure
how far that first-order model is from the exact unitary evolution.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .elements import SwitchSettings, apply_switch
from .state import PairState, RectLabel

__all__ = [
    "FockBasis",
    "FockState",
    "PumpedHamiltonian",
    "TruncationError",
    "embed",
    "propagate_exact",
    "ValidityReport",
    "validate_switch",
    "ScalingStudy",
    "error_scaling_study",
    "PAIR_OCCUPATIONS",
    "LEAKAGE_TOL",
]

VACUUM = (0, 0, 0, 0)
#: Occupation tuple (n1H, n1V, n2H, n2V) for each rectilinear pair state.
PAIR_OCCUPATIONS = {
    RectLabel.HH: (1, 0, 1, 0),
    RectLabel.HV: (1, 0, 0, 1),
    RectLabel.VH: (0, 1, 1, 0),
    RectLabel.VV: (0, 1, 0, 1),
}
DOUBLE_HH = (2, 0, 2, 0)

#: Largest tolerated change of any amplitude when the cutoff is raised by one.
LEAKAGE_TOL = 1e-6


class TruncationError(ValueError):
    """The Fock cutoff is too small for the requested propagation."""


class FockBasis:
    """Occupation states of four modes with at most ``n_max`` photons each.

    States are enumerated in lexicographic order of (n1H, n1V, n2H, n2V).
    """

    def __init__(self, n_max: int):
        if n_max < 0:
            raise ValueError("n_max must be nonnegative")
        self.n_max = int(n_max)
        self.states = tuple(itertools.product(range(self.n_max + 1), repeat=4))
        self.index = {occ: i for i, occ in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return isinstance(other, FockBasis) and other.n_max == self.n_max

    def __hash__(self) -> int:
        return hash(("FockBasis", self.n_max))

    def __repr__(self) -> str:
        return f"FockBasis(n_max={self.n_max}, dim={self.dim})"

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        """True for states with some mode at the cutoff."""
        return np.array([max(occ) == self.n_max for occ in self.states])


@dataclass(frozen=True, eq=False)
class FockState:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} amplitudes, got {amps.size}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amp(self, occupation: Sequence[int]) -> complex:
        i = self.basis.index.get(tuple(occupation))
        return 0j if i is None else complex(self.amplitudes[i])

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def rebase(self, basis: FockBasis) -> "FockState":
        """Same amplitudes in another cutoff; states that do not fit must be empty."""
        out = np.zeros(basis.dim, dtype=np.complex128)
        for occ, a in zip(self.basis.states, self.amplitudes):
            j = basis.index.get(occ)
            if j is None:
                if a != 0:
                    raise TruncationError(f"occupation {occ} does not fit n_max={basis.n_max}")
                continue
            out[j] = a
        return FockState(basis, out)

    def to_pair_state(self) -> PairState:
        """Project onto the vacuum and single-pair amplitudes."""
        return PairState(self.amp(VACUUM), [self.amp(PAIR_OCCUPATIONS[k]) for k in RectLabel])


class PumpedHamiltonian:
    """Dense matrix of ``kappa a+_1H a+_2H + h.c.`` on a truncated basis."""

    def __init__(self, kappa: complex, basis: FockBasis):
        self.kappa = complex(kappa)
        self.basis = basis
        self.matrix = self._build()

    def _build(self) -> np.ndarray:
        basis = self.basis
        m = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
        for j, (n1h, n1v, n2h, n2v) in enumerate(basis.states):
            target = (n1h + 1, n1v, n2h + 1, n2v)
            i = basis.index.get(target)
            if i is None:
                continue
            # <n+1, m+1| a+ a+ |n, m> = sqrt((n+1)(m+1))
            elem = self.kappa * math.sqrt((n1h + 1) * (n2h + 1))
            m[i, j] = elem
            m[j, i] = elem.conjugate()
        m.setflags(write=False)
        return m

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, rtol=0, atol=tol))

    def with_basis(self, basis: FockBasis) -> "PumpedHamiltonian":
        return PumpedHamiltonian(self.kappa, basis)

    @classmethod
    def for_injection(cls, mu: complex, basis: FockBasis, t: float = 1.0) -> "PumpedHamiltonian":
        """Hamiltonian whose first-order effect over time ``t`` injects ``mu``."""
        return cls(1j * complex(mu) / t, basis)

    def propagator(self, t: float) -> np.ndarray:
        """exp(-i H t) from the Hermitian eigendecomposition."""
        if t == 0 or self.kappa == 0:
            return np.eye(self.basis.dim, dtype=np.complex128)
        evals, evecs = np.linalg.eigh(self.matrix)
        return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def embed(state: PairState, basis: FockBasis) -> FockState:
    """Place the vacuum and the four pair amplitudes on their occupation states."""
    if basis.n_max < 1:
        raise ValueError("embedding a pair needs n_max >= 1")
    amps = np.zeros(basis.dim, dtype=np.complex128)
    amps[basis.index[VACUUM]] = state.vacuum_amp
    for label, occ in PAIR_OCCUPATIONS.items():
        amps[basis.index[occ]] = state.pair_amps[label]
    return FockState(basis, amps)


def truncation_leakage(state: FockState, ham: PumpedHamiltonian, t: float) -> float:
    """Largest amplitude change on shared states when the cutoff is raised by one."""
    bigger = FockBasis(state.basis.n_max + 1)
    ref = ham.with_basis(bigger).propagator(t) @ state.rebase(bigger).amplitudes
    out = ham.propagator(t) @ state.amplitudes
    shared = np.array([bigger.index[occ] for occ in state.basis.states])
    return float(np.max(np.abs(ref[shared] - out)))


def propagate_exact(state: FockState, ham: PumpedHamiltonian, t: float,
                    leakage_tol: float | None = LEAKAGE_TOL) -> FockState:
    """Apply exp(-i H t) to ``state``.

    Unless ``leakage_tol`` is None the result is checked against the same
    propagation with the cutoff raised by one; if any shared amplitude moves
    by more than ``leakage_tol`` a :class:`TruncationError` is raised.
    """
    if ham.basis != state.basis:
        raise ValueError("state and Hamiltonian live on different bases")
    out = ham.propagator(t) @ state.amplitudes
    if leakage_tol is not None and t != 0 and ham.kappa != 0:
        leak = truncation_leakage(state, ham, t)
        if leak > leakage_tol:
            raise TruncationError(
                f"truncation changes amplitudes by {leak:.3g} > {leakage_tol:g}; increase n_max"
            )
    return FockState(state.basis, out)


@dataclass(frozen=True)
class ValidityReport:
    mu: complex
    n_max: int
    exact: FockState
    first_order: FockState
    #: exact minus first-order amplitude for the vacuum and each pair class
    pair_deviations: dict
    vacuum_depletion: float
    double_pair_amp: complex
    max_deviation: float
    norm_error: float


def validate_switch(pair_state: PairState, mu: complex, n_max: int = 2) -> ValidityReport:
    """Compare the first-order switch with exact propagation of the same state."""
    if n_max < 2:
        raise TruncationError(f"n_max={n_max} cannot hold a double pair; increase n_max to >= 2")
    mu = complex(mu)
    basis = FockBasis(n_max)
    start = embed(pair_state, basis)
    ham = PumpedHamiltonian.for_injection(mu, basis)
    exact = propagate_exact(start, ham, 1.0)
    first = embed(apply_switch(pair_state, SwitchSettings(mu, RectLabel.HH)), basis)
    diff = exact.amplitudes - first.amplitudes
    deviations = {"vacuum": exact.amp(VACUUM) - first.amp(VACUUM)}
    for label, occ in PAIR_OCCUPATIONS.items():
        deviations[label.name] = exact.amp(occ) - first.amp(occ)
    return ValidityReport(
        mu=mu,
        n_max=n_max,
        exact=exact,
        first_order=first,
        pair_deviations=deviations,
        vacuum_depletion=abs(exact.amp(VACUUM) - pair_state.vacuum_amp),
        double_pair_amp=exact.amp(DOUBLE_HH),
        max_deviation=float(np.max(np.abs(diff))),
        norm_error=abs(exact.norm_sq - start.norm_sq),
    )


@dataclass(frozen=True)
class ScalingStudy:
    scales: tuple[float, ...]
    deviations: tuple[float, ...]
    #: fitted power-law exponent; None when every deviation vanishes
    exponent: float | None

    @property
    def exact(self) -> bool:
        return self.exponent is None

    def within(self, lo: float = 1.8, hi: float = 2.2) -> bool:
        return self.exponent is not None and lo <= self.exponent <= hi

    def rows(self):
        return list(zip(self.scales, self.deviations))


def default_scaling_base() -> tuple[PairState, complex]:
    """Creator mid-circuit state (after H1xH2 on |HH>) with its -eps switch, at eps = 1."""
    return PairState(1.0, [0.5, 0.5, 0.5, 0.5]), -1.0 + 0j


def error_scaling_study(scales: Sequence[float], base_state: PairState | None = None,
                        base_mu: complex | None = None, n_max: int = 2) -> ScalingStudy:
    """Max deviation of the first-order model as pair amplitudes and mu shrink together.

    At scale ``s`` the pair amplitudes of ``base_state`` and ``base_mu`` are
    both multiplied by ``s``; the vacuum amplitude is kept. The exponent is
    the least-squares slope of log(deviation) against log(scale).
    """
    scales = tuple(float(s) for s in scales)
    if len(scales) < 2:
        raise ValueError("need >= 2 points for a power-law fit")
    if any(s <= 0 for s in scales):
        raise ValueError("scales must be positive")
    if any(b >= a for a, b in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly descending")
    if base_state is None or base_mu is None:
        d_state, d_mu = default_scaling_base()
        base_state = d_state if base_state is None else base_state
        base_mu = d_mu if base_mu is None else base_mu
    devs = []
    for s in scales:
        scaled = PairState(base_state.vacuum_amp, s * base_state.pair_amps)
        devs.append(validate_switch(scaled, s * complex(base_mu), n_max).max_deviation)
    devs = tuple(devs)
    if all(d == 0 for d in devs):
        return ScalingStudy(scales, devs, None)
    if any(d == 0 for d in devs):
        raise ValueError("cannot fit a power law through a zero deviation")
    slope, _ = np.polyfit(np.log(scales), np.log(devs), 1)
    return ScalingStudy(scales, devs, float(slope))
