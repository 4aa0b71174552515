"""Brute-force check of the interferometer by single-particle path enumeration.

Each particle has exactly one route to each detector. Two-particle outcome
probabilities follow from the 2x2 matrix of route amplitudes: the permanent for
bosons, the determinant for fermions, a sum of squared route products for
distinguishable particles.

This module deliberately imports nothing from the Fock-space engine.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations

SOURCES = ("L", "R")
DETECTORS = ("D1", "D2", "D1'", "D2'")

_R = 1 / math.sqrt(2)

# source -> path coefficients at the source beam splitters
SOURCE_SPLIT = {
    "L": {"A": _R, "A'": -_R},
    "R": {"B": _R, "B'": -_R},
}
PHASE_PATH = "B'"
# path -> detector coefficients at the region beam splitters
REGION_SPLIT = {
    "A": {"D1": _R, "D2": _R},
    "B": {"D1": _R, "D2": -_R},
    "A'": {"D1'": _R, "D2'": _R},
    "B'": {"D1'": _R, "D2'": -_R},
}


def path_amplitude(source: str, detector: str, phi: float) -> complex:
    """Amplitude for the particle from ``source`` to arrive at ``detector``."""
    if detector not in DETECTORS:
        raise ValueError(f"{detector!r} is not a detector")
    total = 0j
    for path, c1 in SOURCE_SPLIT[source].items():
        c2 = REGION_SPLIT[path].get(detector, 0.0)
        phase = cmath.exp(1j * phi) if path == PHASE_PATH else 1.0
        total += c1 * phase * c2
    return total


def amplitude_matrix(pattern, phi: float) -> list[list[complex]]:
    """Rows are the detectors of ``pattern`` (repeated if doubly occupied), columns the sources."""
    return [[path_amplitude(s, d, phi) for s in SOURCES] for d in pattern]


def _kind(stats) -> str:
    return getattr(stats, "value", stats)


def outcome_probability(pattern, phi: float, stats) -> float:
    pattern = tuple(pattern)
    if len(pattern) != 2:
        raise ValueError("oracle handles two-particle patterns only")
    (a, b), (c, d) = amplitude_matrix(pattern, phi)
    kind = _kind(stats)
    if kind == "boson":
        multiplicity = 2 if pattern[0] == pattern[1] else 1
        return abs(a * d + b * c) ** 2 / multiplicity
    if kind == "fermion":
        return abs(a * d - b * c) ** 2
    if kind == "distinguishable":
        # each distinct assignment of sources to the two detector slots
        rows = {0: (a, b), 1: (c, d)}
        assignments = set(permutations(range(2))) if pattern[0] != pattern[1] else {(0, 1)}
        return sum(
            abs(rows[i][0] * rows[j][1]) ** 2 for i, j in assignments
        )
    raise ValueError(f"unknown statistics {stats!r}")


def distribution(phi: float, stats) -> dict[tuple[str, str], float]:
    return {
        p: outcome_probability(p, phi, stats)
        for p in combinations_with_replacement(DETECTORS, 2)
    }


def conditional_same_index(phi: float, stats) -> float:
    probs = distribution(phi, stats)
    same = probs[("D1", "D1'")] + probs[("D2", "D2'")]
    cross = probs[("D1", "D2'")] + probs[("D2", "D1'")]
    return same / (same + cross)


@dataclass(frozen=True)
class OracleReport:
    per_pattern: dict
    max_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol


def verify(table, phi: float, stats, tol: float = 1e-12) -> OracleReport:
    """Compare ``table.per_pattern`` against path enumeration; absent patterns count as 0."""
    expected = distribution(phi, stats)
    observed = table.per_pattern
    keys = set(expected) | set(observed)
    dev = max(abs(expected.get(k, 0.0) - observed.get(k, 0.0)) for k in keys)
    return OracleReport(per_pattern=expected, max_deviation=dev, tol=tol)
