"""Two-particle amplitudes with the source of each particle kept explicit.

A :class:`LabeledState` maps ordered pairs ``(path of the L particle, path of
the R particle)`` to amplitudes. Exchange symmetry is not built in; it is
imposed by :func:`project`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Mapping

PRE_DETECTOR = ("A", "A'", "B", "B'")
DETECTORS = ("D1", "D2", "D1'", "D2'")

V_PATHS = {"A", "B"}
E_PATHS = {"A'", "B'"}

_R = 1 / math.sqrt(2)

# Path -> output superposition of the region beam splitters
# (A on the top port, B on the bottom port; same for the primed paths).
EVOLUTION: dict[str, tuple[tuple[str, float], ...]] = {
    "A": (("D1", _R), ("D2", _R)),
    "B": (("D1", _R), ("D2", -_R)),
    "A'": (("D1'", _R), ("D2'", _R)),
    "B'": (("D1'", _R), ("D2'", -_R)),
}

Pair = tuple[str, str]


class Parity(Enum):
    SYMMETRIC = 1
    ANTISYMMETRIC = -1


@dataclass(frozen=True, eq=False)
class LabeledState:
    terms: Mapping[Pair, complex]

    def __post_init__(self):
        terms = {}
        for (left, right), amp in dict(self.terms).items():
            for path in (left, right):
                if path not in PRE_DETECTOR and path not in DETECTORS:
                    raise ValueError(f"unknown path {path!r}")
            terms[(left, right)] = complex(amp)
        object.__setattr__(self, "terms", MappingProxyType(terms))

    def amplitude(self, left: str, right: str) -> complex:
        return self.terms.get((left, right), 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.terms.values()))

    def scaled(self, c: complex) -> "LabeledState":
        return LabeledState({k: c * a for k, a in self.terms.items()})

    def pruned(self, tol: float = 1e-12) -> "LabeledState":
        return LabeledState({k: a for k, a in self.terms.items() if abs(a) >= tol})

    def __add__(self, other: "LabeledState") -> "LabeledState":
        out = dict(self.terms)
        for k, a in other.terms.items():
            out[k] = out.get(k, 0j) + a
        return LabeledState(out)

    def __sub__(self, other: "LabeledState") -> "LabeledState":
        return self + other.scaled(-1)

    def close_to(self, other: "LabeledState", tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(
            cmath.isclose(self.amplitude(*k), other.amplitude(*k), abs_tol=tol) for k in keys
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{l}^L {r}^R: {a:.6g}" for (l, r), a in sorted(self.terms.items()))
        return f"LabeledState({{{body}}})"


def inner(a: LabeledState, b: LabeledState) -> complex:
    return sum((a.amplitude(*k).conjugate() * amp for k, amp in b.terms.items()), 0j)


def build_initial(phi: float) -> LabeledState:
    """Product of ``(A - A')/sqrt2`` for the L particle and ``(B - e^{i phi} B')/sqrt2`` for R."""
    left = {"A": _R, "A'": -_R}
    right = {"B": _R, "B'": -_R * cmath.exp(1j * phi)}
    return LabeledState({(l, r): a * b for l, a in left.items() for r, b in right.items()})


@dataclass(frozen=True)
class RegionSplit:
    """Same-region and one-each components of a pre-detector state.

    ``psi2`` and ``psi11`` are normalized. ``sign2`` and ``sign11`` are the
    signs that reconstruct the input as
    ``sqrt(w2) * sign2 * psi2 + sqrt(w11) * sign11 * psi11``.
    """

    psi2: LabeledState
    psi11: LabeledState
    w2: float
    w11: float
    sign2: int = 1
    sign11: int = -1

    def __iter__(self):
        return iter((self.psi2, self.psi11, self.w2, self.w11))

    def reconstruct(self) -> LabeledState:
        return self.psi2.scaled(self.sign2 * math.sqrt(self.w2)) + self.psi11.scaled(
            self.sign11 * math.sqrt(self.w11)
        )


def _same_region(left: str, right: str) -> bool:
    return (left in V_PATHS) == (right in V_PATHS)


def split_regions(s: LabeledState) -> RegionSplit:
    """Separate terms with both particles heading to one region from the one-each terms.

    The one-each component is returned with the overall sign flipped, so its
    ``(A', B)`` coefficient is positive; ``sign11 = -1`` records that.
    """
    paths = {p for pair in s.terms for p in pair}
    if not paths <= set(PRE_DETECTOR):
        raise ValueError("split_regions needs a state on the A/A'/B/B' paths only")

    same = LabeledState({k: a for k, a in s.terms.items() if _same_region(*k)})
    cross = LabeledState({k: -a for k, a in s.terms.items() if not _same_region(*k)})
    w2, w11 = same.norm() ** 2, cross.norm() ** 2
    total = w2 + w11
    if total == 0:
        raise ValueError("cannot split the zero state")
    return RegionSplit(
        psi2=same.scaled(1 / same.norm()) if w2 else same,
        psi11=cross.scaled(1 / cross.norm()) if w11 else cross,
        w2=w2 / total,
        w11=w11 / total,
    )


def evolve_labeled(s: LabeledState) -> LabeledState:
    """Send each pre-detector path through its region beam splitter."""
    out: dict[Pair, complex] = {}
    for (left, right), amp in s.terms.items():
        try:
            left_out, right_out = EVOLUTION[left], EVOLUTION[right]
        except KeyError as exc:
            raise ValueError(f"no evolution rule for path {exc.args[0]!r}") from None
        for dl, cl in left_out:
            for dr, cr in right_out:
                out[(dl, dr)] = out.get((dl, dr), 0j) + amp * cl * cr
    return LabeledState(out).pruned()


def exchange(s: LabeledState) -> LabeledState:
    """Swap which particle sits on which path; slots still read (L, R)."""
    return LabeledState({(r, l): a for (l, r), a in s.terms.items()})


def project(s: LabeledState, parity: Parity) -> LabeledState:
    """Normalized ``s + exchange(s)`` (symmetric) or ``s - exchange(s)`` (antisymmetric).

    Returns the zero state when the projection vanishes.
    """
    raw = (s + exchange(s).scaled(parity.value)).pruned()
    nrm = raw.norm()
    return raw.scaled(1 / nrm) if nrm > 1e-12 else LabeledState({})


def projection_weight(s: LabeledState, parity: Parity) -> float:
    """Squared norm of ``(s +/- exchange(s)) / 2``."""
    return ((s + exchange(s).scaled(parity.value)).scaled(0.5)).norm() ** 2


def detector_pair(left: str, right: str) -> Pair:
    """Unordered detector pair in canonical ``DETECTORS`` order."""
    if left not in DETECTORS or right not in DETECTORS:
        raise ValueError(f"({left}, {right}) is not a detector pair")
    a, b = sorted((left, right), key=DETECTORS.index)
    return (a, b)


def detection_distribution(s: LabeledState) -> dict[Pair, float]:
    """Born probabilities of unordered detector pairs (sum to 1 for a normalized state)."""
    probs: dict[Pair, float] = {}
    for (left, right), amp in s.terms.items():
        key = detector_pair(left, right)
        probs[key] = probs.get(key, 0.0) + abs(amp) ** 2
    return probs
