"""The two-source interferometer end to end in the occupation-number picture.

Sources L and R each emit one particle. BS_L sends L to paths A (region V) and
A' (region E); BS_R sends R to B and B'. A phase shifter sits on B'. BS_V mixes
A and B onto detectors D1, D2; BS_E mixes A' and B' onto D1', D2'.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations_with_replacement
from typing import Mapping

from . import labeled
from .fock import (
    PRUNE_TOL,
    ModeRegistry,
    StateVector,
    Statistics,
    occupied_labels,
    prune,
)
from .modes import BeamSplitter, Circuit, PhaseShift, prepare, run_circuit

DETECTORS = labeled.DETECTORS
V_DETECTORS = ("D1", "D2")
E_DETECTORS = ("D1'", "D2'")
SAME_INDEX = (("D1", "D1'"), ("D2", "D2'"))
CROSS_INDEX = (("D1", "D2'"), ("D2", "D1'"))

# Unused beam-splitter inputs are explicit modes that stay in vacuum.
REGISTRY = ModeRegistry(
    ["L", "L_vac", "R", "R_vac", "A", "A'", "B", "B'", "D1", "D2", "D1'", "D2'"]
)

DEFAULT_CONVENTIONS = {
    "BS_L": "minus-first",
    "BS_R": "minus-first",
    "BS_V": "plus-minus",
    "BS_E": "plus-minus",
}

Pattern = tuple[str, ...]


class CoincidenceClass(Enum):
    BOTH_V = "both_v"
    BOTH_E = "both_e"
    ONE_EACH = "one_each"


@dataclass(frozen=True)
class ExperimentConfig:
    phi: float
    statistics: Statistics = Statistics.BOSON
    conventions: Mapping[str, str] = field(default_factory=dict)
    prune_tol: float = PRUNE_TOL

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise ValueError(f"phase must be finite, got {self.phi}")
        unknown = set(self.conventions) - set(DEFAULT_CONVENTIONS)
        if unknown:
            raise ValueError(f"unknown beam splitters {sorted(unknown)}")

    def convention(self, name: str) -> str:
        return self.conventions.get(name, DEFAULT_CONVENTIONS[name])


def build_fig1_circuit(cfg: ExperimentConfig) -> Circuit:
    return Circuit(
        REGISTRY,
        (
            BeamSplitter("L", "L_vac", "A", "A'", cfg.convention("BS_L")),
            BeamSplitter("R", "R_vac", "B", "B'", cfg.convention("BS_R")),
            PhaseShift("B'", cfg.phi),
            BeamSplitter("A", "B", "D1", "D2", cfg.convention("BS_V")),
            BeamSplitter("A'", "B'", "D1'", "D2'", cfg.convention("BS_E")),
        ),
    )


def initial_state(cfg: ExperimentConfig) -> StateVector:
    """One particle on L, then one on R (species 0 and 1 when distinguishable)."""
    return prepare(REGISTRY, cfg.statistics, ("L", "R"))


def evolve(cfg: ExperimentConfig) -> StateVector:
    return prune(run_circuit(build_fig1_circuit(cfg), initial_state(cfg)), cfg.prune_tol)


def classify(pattern: Pattern) -> CoincidenceClass:
    """Region class of a two-particle detector pattern (labels, repetition allowed)."""
    if len(pattern) != 2:
        raise ValueError(f"expected a two-particle pattern, got {pattern}")
    if any(d not in DETECTORS for d in pattern):
        raise ValueError(f"pattern {pattern} has support off the detectors")
    in_v = sum(d in V_DETECTORS for d in pattern)
    if in_v == 2:
        return CoincidenceClass.BOTH_V
    if in_v == 0:
        return CoincidenceClass.BOTH_E
    return CoincidenceClass.ONE_EACH


def all_patterns() -> list[Pattern]:
    """Every unordered two-particle detector pattern, canonical order."""
    return list(combinations_with_replacement(DETECTORS, 2))


def pattern_probabilities(state: StateVector) -> dict[Pattern, float]:
    """Born probability per detector pattern; source tags of distinguishable particles are summed out."""
    probs: dict[Pattern, float] = {}
    for occ, amp in state.terms.items():
        key = occupied_labels(occ, state.registry)
        classify(key)
        probs[key] = probs.get(key, 0.0) + abs(amp) ** 2
    return probs


@dataclass(frozen=True)
class CoincidenceTable:
    """Detection statistics for one phase and one kind of particle.

    ``p_same_cond`` and ``p_cross_cond`` are conditioned on one particle in
    each region; they are NaN if that class has no weight.
    """

    phi: float
    statistics: Statistics
    class_weights: dict[CoincidenceClass, float]
    p_same_cond: float
    p_cross_cond: float
    per_pattern: dict[Pattern, float]

    @property
    def conditional_defined(self) -> bool:
        return not math.isnan(self.p_same_cond)

    def one_each_distribution(self) -> dict[Pattern, float]:
        w = self.class_weights[CoincidenceClass.ONE_EACH]
        return {
            p: prob / w
            for p, prob in self.per_pattern.items()
            if classify(p) is CoincidenceClass.ONE_EACH
        }


def tabulate(state: StateVector, phi: float) -> CoincidenceTable:
    per_pattern = pattern_probabilities(state)
    weights = {c: 0.0 for c in CoincidenceClass}
    for pattern, p in per_pattern.items():
        weights[classify(pattern)] += p

    one_each = weights[CoincidenceClass.ONE_EACH]
    if one_each < 1e-12:
        p_same = p_cross = math.nan
    else:
        p_same = sum(per_pattern.get(p, 0.0) for p in SAME_INDEX) / one_each
        p_cross = sum(per_pattern.get(p, 0.0) for p in CROSS_INDEX) / one_each
    return CoincidenceTable(
        phi=phi,
        statistics=state.statistics,
        class_weights=weights,
        p_same_cond=p_same,
        p_cross_cond=p_cross,
        per_pattern=per_pattern,
    )


def run_experiment(cfg: ExperimentConfig) -> CoincidenceTable:
    return tabulate(evolve(cfg), cfg.phi)


def closed_form(phi: float, stats: Statistics) -> tuple[float, float]:
    """Predicted (same-index, cross-index) coincidence probabilities given one particle per region."""
    c = math.cos(phi)
    if stats is Statistics.BOSON:
        return (0.5 * (1 + c), 0.5 * (1 - c))
    if stats is Statistics.FERMION:
        return (0.5 * (1 - c), 0.5 * (1 + c))
    return (0.5, 0.5)


def bunching_report(cfg: ExperimentConfig) -> dict[CoincidenceClass, dict[Pattern, float]]:
    """Per-class probabilities of every possible pattern, zeros included."""
    probs = run_experiment(cfg).per_pattern
    report: dict[CoincidenceClass, dict[Pattern, float]] = {c: {} for c in CoincidenceClass}
    for pattern in all_patterns():
        report[classify(pattern)][pattern] = probs.get(pattern, 0.0)
    return report


def labeled_prediction(phi: float, stats: Statistics) -> dict[Pattern, float]:
    """One-each pattern distribution from the source-labeled picture.

    Bosons use the symmetric projection of the evolved one-each component,
    fermions the antisymmetric one; distinguishable particles use it unprojected.
    """
    psi11 = labeled.evolve_labeled(labeled.split_regions(labeled.build_initial(phi)).psi11)
    if stats is Statistics.BOSON:
        psi11 = labeled.project(psi11, labeled.Parity.SYMMETRIC)
    elif stats is Statistics.FERMION:
        psi11 = labeled.project(psi11, labeled.Parity.ANTISYMMETRIC)
    return labeled.detection_distribution(psi11)


def representation_deviation(table: CoincidenceTable) -> float:
    """Max per-pattern gap between the Fock one-each distribution and the labeled prediction."""
    fock = table.one_each_distribution()
    lab = labeled_prediction(table.phi, table.statistics)
    keys = set(fock) | set(lab)
    return max(abs(fock.get(k, 0.0) - lab.get(k, 0.0)) for k in keys)
