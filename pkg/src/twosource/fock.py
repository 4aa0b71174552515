"""Occupation-number states and creation operators over a fixed set of named modes.

States are sparse: a mapping from :class:`OccupationState` to complex amplitude.
Every operation returns a new :class:`StateVector`; nothing is mutated in place.

Fermion signs follow the canonical mode order of the :class:`ModeRegistry`:
a basis state with occupied modes ``m_a < m_b < ...`` equals
``c†(m_a) c†(m_b) ... |0>``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

PRUNE_TOL = 1e-12
COMPARE_TOL = 1e-9

# Distinguishable particles carry one of these species tags (source labels).
NUM_SPECIES = 2


class Statistics(Enum):
    BOSON = "boson"
    FERMION = "fermion"
    DISTINGUISHABLE = "distinguishable"

    @classmethod
    def parse(cls, text: str) -> "Statistics":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown statistics {text!r}") from None


class UnknownModeError(KeyError):
    """A circuit or state refers to a mode missing from the registry."""


class IncompatibleStatesError(ValueError):
    """Two states live on different registries or carry different statistics."""


class MixedSectorError(ValueError):
    """Terms with different total particle number were combined."""


class ModeRegistry:
    """Immutable, ordered collection of mode labels.

    The declaration order is the canonical order used for fermion signs.
    """

    __slots__ = ("_labels", "_index")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if not labels:
            raise ValueError("registry needs at least one mode")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate mode labels in {labels}")
        self._labels = labels
        self._index = {label: i for i, label in enumerate(labels)}

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownModeError(f"mode {label!r} is not registered") from None

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self._labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self._labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModeRegistry) and self._labels == other._labels

    def __hash__(self) -> int:
        return hash(self._labels)

    def __repr__(self) -> str:
        return f"ModeRegistry({list(self._labels)!r})"


def _species_count(stats: Statistics) -> int:
    return NUM_SPECIES if stats is Statistics.DISTINGUISHABLE else 1


@dataclass(frozen=True, order=True)
class OccupationState:
    """Occupation counts, one slot per mode (per (species, mode) when distinguishable).

    Distinguishable slots are laid out species-major: ``species * n_modes + mode``.
    """

    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def mode_counts(self, n_modes: int) -> tuple[int, ...]:
        """Counts per mode, summed over species."""
        out = [0] * n_modes
        for slot, n in enumerate(self.counts):
            out[slot % n_modes] += n
        return tuple(out)


def occupation(
    registry: ModeRegistry,
    stats: Statistics,
    counts: Mapping[str, int] | Mapping[tuple[str, int], int],
) -> OccupationState:
    """Build an OccupationState from labels.

    Keys are mode labels, or ``(label, species)`` pairs for distinguishable states.
    """
    n = len(registry)
    slots = [0] * (n * _species_count(stats))
    for key, value in counts.items():
        label, species = (key, 0) if isinstance(key, str) else key
        if not 0 <= species < _species_count(stats):
            raise ValueError(f"species {species} invalid for {stats.value}")
        slots[species * n + registry.index(label)] += value
    return OccupationState(tuple(slots))


def occupied_labels(occ: OccupationState, registry: ModeRegistry) -> tuple[str, ...]:
    """Mode labels of all particles (with repetition), in canonical order, species ignored."""
    labels = []
    for label, n in zip(registry.labels, occ.mode_counts(len(registry))):
        labels.extend([label] * n)
    return tuple(labels)


class StateVector:
    """Sparse complex amplitudes over occupation states.

    Treat instances as values: ``terms`` is exposed read-only.
    """

    __slots__ = ("_registry", "_stats", "_terms")

    def __init__(
        self,
        registry: ModeRegistry,
        stats: Statistics,
        terms: Mapping[OccupationState, complex] | None = None,
    ):
        terms = {occ: complex(amp) for occ, amp in (terms or {}).items()}
        width = len(registry) * _species_count(stats)
        totals = set()
        for occ in terms:
            if len(occ.counts) != width:
                raise ValueError(f"occupation {occ} has wrong width for {registry}")
            if stats is Statistics.FERMION and any(n > 1 for n in occ.counts):
                raise ValueError(f"fermion double occupancy in {occ}")
            totals.add(occ.total)
        if len(totals) > 1:
            raise MixedSectorError(f"terms span particle numbers {sorted(totals)}")
        self._registry = registry
        self._stats = stats
        self._terms = MappingProxyType(terms)

    @property
    def registry(self) -> ModeRegistry:
        return self._registry

    @property
    def statistics(self) -> Statistics:
        return self._stats

    @property
    def terms(self) -> Mapping[OccupationState, complex]:
        return self._terms

    @property
    def particle_number(self) -> int | None:
        for occ in self._terms:
            return occ.total
        return None

    def amplitude(self, occ: OccupationState) -> complex:
        return self._terms.get(occ, 0j)

    def is_zero(self, tol: float = PRUNE_TOL) -> bool:
        return all(abs(a) < tol for a in self._terms.values())

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "StateVector") -> "StateVector":
        return add(self, other)

    def __sub__(self, other: "StateVector") -> "StateVector":
        return add(self, scale(other, -1))

    def __neg__(self) -> "StateVector":
        return scale(self, -1)

    def __rmul__(self, c: complex) -> "StateVector":
        return scale(self, c)

    def __repr__(self) -> str:
        body = ", ".join(
            f"{occupied_labels(occ, self._registry)}: {amp:.6g}"
            for occ, amp in sorted(self._terms.items())
        )
        return f"StateVector[{self._stats.value}]({{{body}}})"


def _check_compatible(a: StateVector, b: StateVector) -> None:
    if a.registry != b.registry or a.statistics is not b.statistics:
        raise IncompatibleStatesError(
            f"cannot combine {a.statistics.value} state on {a.registry} "
            f"with {b.statistics.value} state on {b.registry}"
        )


def vacuum(registry: ModeRegistry, stats: Statistics) -> StateVector:
    width = len(registry) * _species_count(stats)
    return StateVector(registry, stats, {OccupationState((0,) * width): 1.0})


def create(state: StateVector, mode: str, species: int = 0) -> StateVector:
    """Apply the creation operator for ``mode`` to every term of ``state``.

    ``species`` selects the source tag for distinguishable particles and must be
    0 otherwise.
    """
    registry, stats = state.registry, state.statistics
    m = registry.index(mode)
    if not 0 <= species < _species_count(stats):
        raise ValueError(f"species {species} invalid for {stats.value}")
    slot = species * len(registry) + m

    out: dict[OccupationState, complex] = {}
    for occ, amp in state.terms.items():
        n = occ.counts[slot]
        if stats is Statistics.BOSON:
            factor = math.sqrt(n + 1)
        elif stats is Statistics.FERMION:
            if n:
                continue
            factor = -1.0 if sum(occ.counts[:slot]) % 2 else 1.0
        else:
            factor = 1.0
        counts = list(occ.counts)
        counts[slot] += 1
        new = OccupationState(tuple(counts))
        out[new] = out.get(new, 0j) + factor * amp
    return StateVector(registry, stats, out)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_compatible(a, b)
    small, large = (a.terms, b.terms) if len(a) <= len(b) else (b.terms, a.terms)
    total = 0j
    for occ in small:
        if occ in large:
            total += a.terms[occ].conjugate() * b.terms[occ]
    return total


def norm(state: StateVector) -> float:
    return math.sqrt(sum(abs(amp) ** 2 for amp in state.terms.values()))


def scale(state: StateVector, c: complex) -> StateVector:
    return StateVector(
        state.registry, state.statistics, {occ: c * amp for occ, amp in state.terms.items()}
    )


def add(a: StateVector, b: StateVector) -> StateVector:
    _check_compatible(a, b)
    out = dict(a.terms)
    for occ, amp in b.terms.items():
        out[occ] = out.get(occ, 0j) + amp
    return prune(StateVector(a.registry, a.statistics, out), 0.0)


def prune(state: StateVector, tol: float = PRUNE_TOL) -> StateVector:
    """Drop terms with ``|amplitude| < tol``; ``tol=0`` drops exact zeros only."""
    keep = {
        occ: amp
        for occ, amp in state.terms.items()
        if abs(amp) >= tol and amp != 0
    }
    return StateVector(state.registry, state.statistics, keep)


def normalize(state: StateVector) -> StateVector:
    nrm = norm(state)
    if nrm == 0:
        raise ZeroDivisionError("cannot normalize the zero state")
    return scale(state, 1 / nrm)


def states_close(a: StateVector, b: StateVector, tol: float = COMPARE_TOL) -> bool:
    """Amplitude-level equality within ``tol`` on every occupation state."""
    _check_compatible(a, b)
    keys = set(a.terms) | set(b.terms)
    return all(cmath.isclose(a.amplitude(k), b.amplitude(k), abs_tol=tol) for k in keys)
