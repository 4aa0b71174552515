"""Linear mode transformations acting on Fock states.

A transformation is applied by substituting every creation operator on an input
mode ``j`` with ``sum_k U[k, j] c†(out_k)`` and re-expanding each basis state.
Particle statistics are handled entirely by :func:`twosource.fock.create`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .fock import (
    PRUNE_TOL,
    ModeRegistry,
    StateVector,
    Statistics,
    UnknownModeError,
    create,
    prune,
    vacuum,
)

UNITARY_TOL = 1e-12

_R = 1 / math.sqrt(2)

# Columns are inputs (top, bottom), rows outputs (top, bottom).
BS_CONVENTIONS: dict[str, np.ndarray] = {
    # top -> (top + bottom)/sqrt2, bottom -> (top - bottom)/sqrt2
    "plus-minus": _R * np.array([[1, 1], [1, -1]], dtype=complex),
    # top -> (top - bottom)/sqrt2; bottom input completed to (top + bottom)/sqrt2
    "minus-first": _R * np.array([[1, 1], [-1, 1]], dtype=complex),
    # same top column, the other real completion of the bottom column
    "minus-first-alt": _R * np.array([[1, -1], [-1, -1]], dtype=complex),
}


class NonUnitaryError(ValueError):
    pass


def check_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NonUnitaryError(f"matrix must be square, got shape {matrix.shape}")
    dev = np.max(np.abs(matrix @ matrix.conj().T - np.eye(matrix.shape[0])))
    if dev > tol:
        raise NonUnitaryError(f"U U^dagger deviates from identity by {dev:.3g}")


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    """Square unitary on ``modes``; ``matrix[k, j]`` maps input ``modes[j]`` to output ``modes[k]``."""

    modes: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        modes = tuple(self.modes)
        matrix = np.array(self.matrix, dtype=complex)
        if len(set(modes)) != len(modes):
            raise ValueError(f"mode list has duplicates: {modes}")
        if matrix.shape != (len(modes), len(modes)):
            raise ValueError(f"matrix shape {matrix.shape} does not match {len(modes)} modes")
        check_unitary(matrix)
        matrix.setflags(write=False)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "matrix", matrix)

    def __matmul__(self, other: "ModeUnitary") -> "ModeUnitary":
        """Composition ``self`` after ``other`` on the union of their modes."""
        modes = list(self.modes) + [m for m in other.modes if m not in self.modes]
        return ModeUnitary(tuple(modes), _embed(self, modes) @ _embed(other, modes))


def _embed(u: ModeUnitary, modes: Sequence[str]) -> np.ndarray:
    full = np.eye(len(modes), dtype=complex)
    idx = [modes.index(m) for m in u.modes]
    full[np.ix_(idx, idx)] = u.matrix
    return full


def transform(
    state: StateVector,
    inputs: Sequence[str],
    outputs: Sequence[str],
    matrix: np.ndarray,
    tol: float = PRUNE_TOL,
) -> StateVector:
    """Substitute ``c†(inputs[j]) -> sum_k matrix[k, j] c†(outputs[k])`` in every term.

    ``outputs`` may differ from ``inputs`` (a beam splitter with separately named
    ports); output modes that are not also inputs must be empty beforehand.
    """
    registry, stats = state.registry, state.statistics
    matrix = np.asarray(matrix, dtype=complex)
    check_unitary(matrix)
    if matrix.shape != (len(outputs), len(inputs)):
        raise ValueError("matrix shape does not match port lists")
    for label in (*inputs, *outputs):
        registry.index(label)

    n_modes = len(registry)
    fresh = [registry.index(m) for m in outputs if m not in inputs]
    for occ in state.terms:
        per_mode = occ.mode_counts(n_modes)
        if any(per_mode[i] for i in fresh):
            raise ValueError("output ports of a transformation must start empty")

    substitution = {
        label: [(out, matrix[k, j]) for k, out in enumerate(outputs) if matrix[k, j] != 0]
        for j, label in enumerate(inputs)
    }

    out: dict = {}
    for occ, amp in state.terms.items():
        # canonical operator string, leftmost first; applied right to left
        ops: list[tuple[str, int]] = []
        weight = 1.0
        for slot, n in enumerate(occ.counts):
            if n:
                species, m = divmod(slot, n_modes)
                ops.extend([(registry.labels[m], species)] * n)
                weight /= math.sqrt(math.factorial(n))
        partial = vacuum(registry, stats)
        for label, species in reversed(ops):
            acc: dict = {}
            for target, coeff in substitution.get(label, [(label, 1.0)]):
                for occ2, a2 in create(partial, target, species).terms.items():
                    acc[occ2] = acc.get(occ2, 0j) + coeff * a2
            partial = StateVector(registry, stats, acc)
        for occ2, a2 in partial.terms.items():
            out[occ2] = out.get(occ2, 0j) + amp * weight * a2
    return prune(StateVector(registry, stats, out), tol)


def apply_mode_unitary(state: StateVector, u: ModeUnitary) -> StateVector:
    return transform(state, u.modes, u.modes, u.matrix)


def phase_shift(state: StateVector, mode: str, phi: float) -> StateVector:
    """Multiply each term by ``exp(i phi n)``, ``n`` the particle count on ``mode``."""
    registry = state.registry
    m = registry.index(mode)
    n_modes = len(registry)
    return StateVector(
        registry,
        state.statistics,
        {
            occ: amp * cmath.exp(1j * phi * occ.mode_counts(n_modes)[m])
            for occ, amp in state.terms.items()
        },
    )


@dataclass(frozen=True)
class PhaseShift:
    mode: str
    phi: float

    @property
    def modes(self) -> tuple[str, ...]:
        return (self.mode,)

    def apply(self, state: StateVector) -> StateVector:
        return phase_shift(state, self.mode, self.phi)


@dataclass(frozen=True)
class BeamSplitter:
    in_top: str
    in_bottom: str
    out_top: str
    out_bottom: str
    convention: str = "plus-minus"

    def __post_init__(self):
        if self.convention not in BS_CONVENTIONS:
            raise ValueError(
                f"unknown beam-splitter convention {self.convention!r}; "
                f"choose from {sorted(BS_CONVENTIONS)}"
            )

    @property
    def matrix(self) -> np.ndarray:
        return BS_CONVENTIONS[self.convention]

    @property
    def modes(self) -> tuple[str, ...]:
        return (self.in_top, self.in_bottom, self.out_top, self.out_bottom)

    def apply(self, state: StateVector) -> StateVector:
        return transform(
            state,
            (self.in_top, self.in_bottom),
            (self.out_top, self.out_bottom),
            self.matrix,
        )


@dataclass(frozen=True)
class Custom:
    unitary: ModeUnitary

    @property
    def modes(self) -> tuple[str, ...]:
        return self.unitary.modes

    def apply(self, state: StateVector) -> StateVector:
        return apply_mode_unitary(state, self.unitary)


CircuitElement = Union[PhaseShift, BeamSplitter, Custom]


@dataclass(frozen=True)
class Circuit:
    registry: ModeRegistry
    elements: tuple[CircuitElement, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        for element in self.elements:
            for label in element.modes:
                if label not in self.registry:
                    raise UnknownModeError(f"{element!r} uses unregistered mode {label!r}")

    def __len__(self) -> int:
        return len(self.elements)


def run_circuit(circuit: Circuit, state: StateVector) -> StateVector:
    if state.registry != circuit.registry:
        raise ValueError("state and circuit use different mode registries")
    for element in circuit.elements:
        state = element.apply(state)
    return state


def prepare(registry: ModeRegistry, stats: Statistics, sources: Sequence[str]) -> StateVector:
    """One particle per entry of ``sources``; distinguishable particles get species tags in order."""
    state = vacuum(registry, stats)
    distinguishable = stats is Statistics.DISTINGUISHABLE
    for species, label in enumerate(sources):
        state = create(state, label, species if distinguishable else 0)
    return state
