"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line shown in the pytest terminal summary.
"""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from twosource import oracle
from twosource.experiment import (
    CoincidenceClass,
    ExperimentConfig,
    all_patterns,
    build_fig1_circuit,
    bunching_report,
    closed_form,
    initial_state,
    labeled_prediction,
    run_experiment,
)
from twosource.fock import Statistics, norm
from twosource.labeled import (
    Parity,
    build_initial,
    evolve_labeled,
    exchange,
    inner,
    project,
    projection_weight,
    split_regions,
)

TOL = 1e-12
GRID = [2 * math.pi * k / 64 for k in range(64)]
STATS = list(Statistics)


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    assert ok, detail


def _law_check(stats):
    start = time.perf_counter()
    dev = max(
        abs(run_experiment(ExperimentConfig(phi, stats)).p_same_cond - closed_form(phi, stats)[0])
        for phi in GRID
    )
    return dev, time.perf_counter() - start


def test_1_boson_cosine_law():
    dev, elapsed = _law_check(Statistics.BOSON)
    # the closed form itself is also pinned to its literal expression
    literal = max(abs(closed_form(phi, Statistics.BOSON)[0] - 0.5 * (1 + math.cos(phi))) for phi in GRID)
    record(1, "boson same-index = (1+cos)/2", dev < TOL and literal == 0 and elapsed < 1.0,
           f"max dev {dev:.2e} (tol {TOL:g}), runtime {elapsed:.3f}s (< 1 s)")


def test_2_fermion_cosine_law():
    dev, _ = _law_check(Statistics.FERMION)
    literal = max(abs(closed_form(phi, Statistics.FERMION)[0] - 0.5 * (1 - math.cos(phi))) for phi in GRID)
    record(2, "fermion same-index = (1-cos)/2", dev < TOL and literal == 0,
           f"max dev {dev:.2e} (tol {TOL:g})")


def test_3_distinguishable_baseline():
    dev_sim = max(
        abs(run_experiment(ExperimentConfig(phi, Statistics.DISTINGUISHABLE)).p_same_cond - 0.5)
        for phi in GRID
    )
    dev_oracle = max(abs(oracle.conditional_same_index(phi, "distinguishable") - 0.5) for phi in GRID)
    record(3, "distinguishable same-index = 1/2", max(dev_sim, dev_oracle) < TOL,
           f"engine dev {dev_sim:.2e}, oracle dev {dev_oracle:.2e} (tol {TOL:g})")


def test_4_class_weights():
    expected = {CoincidenceClass.BOTH_V: 0.25, CoincidenceClass.BOTH_E: 0.25,
                CoincidenceClass.ONE_EACH: 0.5}
    dev = 0.0
    for stats in STATS:
        for phi in GRID:
            weights = run_experiment(ExperimentConfig(phi, stats)).class_weights
            dev = max(dev, max(abs(weights[c] - w) for c, w in expected.items()))
            # same weights from the oracle's pattern probabilities
            odist = oracle.distribution(phi, stats.value)
            v = sum(p for (a, b), p in odist.items() if a in ("D1", "D2") and b in ("D1", "D2"))
            e = sum(p for (a, b), p in odist.items() if a in ("D1'", "D2'") and b in ("D1'", "D2'"))
            dev = max(dev, abs(v - 0.25), abs(e - 0.25))
    record(4, "class weights 1/4, 1/4, 1/2", dev < TOL,
           f"max dev {dev:.2e} over 3 statistics x 64 phases (tol {TOL:g})")


def test_5_representation_equivalence():
    dev = 0.0
    for stats in (Statistics.BOSON, Statistics.FERMION):
        for phi in GRID:
            fock = run_experiment(ExperimentConfig(phi, stats)).one_each_distribution()
            lab = labeled_prediction(phi, stats)
            for p in set(fock) | set(lab):
                dev = max(dev, abs(fock.get(p, 0.0) - lab.get(p, 0.0)))
    record(5, "Fock one-each = labeled (anti)symmetric projection", dev < TOL,
           f"max per-pattern dev {dev:.2e} (tol {TOL:g})")


def test_6_symmetry_invariants():
    amp_dev = ortho = weight_dev = 0.0
    for phi in GRID:
        ev11 = evolve_labeled(split_regions(build_initial(phi)).psi11)
        sym = project(ev11, Parity.SYMMETRIC)
        anti = project(ev11, Parity.ANTISYMMETRIC)
        for a, b in ((exchange(sym), sym), (exchange(anti), anti.scaled(-1))):
            keys = set(a.terms) | set(b.terms)
            amp_dev = max(amp_dev, max(abs(a.amplitude(*k) - b.amplitude(*k)) for k in keys))
        ortho = max(ortho, abs(inner(sym, anti)))
        for parity in Parity:
            weight_dev = max(weight_dev, abs(projection_weight(ev11, parity) - 0.5))
    ok = amp_dev < TOL and ortho < TOL and weight_dev < TOL
    record(6, "exchange symmetry, orthogonality, weights 1/2", ok,
           f"amp dev {amp_dev:.2e}, overlap {ortho:.2e}, weight dev {weight_dev:.2e} (tol {TOL:g})")


def test_7_bunching_antibunching():
    dev = 0.0
    targets = {
        Statistics.BOSON: {("D1", "D1"): 1 / 8, ("D2", "D2"): 1 / 8, ("D1", "D2"): 0.0},
        Statistics.FERMION: {("D1", "D1"): 0.0, ("D2", "D2"): 0.0, ("D1", "D2"): 1 / 4},
    }
    for stats, want in targets.items():
        for phi in GRID:
            both_v = bunching_report(ExperimentConfig(phi, stats))[CoincidenceClass.BOTH_V]
            for pattern, p in want.items():
                dev = max(dev, abs(both_v[pattern] - p))
                dev = max(dev, abs(oracle.outcome_probability(pattern, phi, stats.value) - p))
    record(7, "boson bunching / fermion antibunching in region V", dev < TOL,
           f"max dev {dev:.2e} vs 1/8, 1/8, 0 and 0, 0, 1/4 (tol {TOL:g})")


def test_8_oracle_independence():
    worst = 0.0
    for stats in STATS:
        for phi in GRID:
            report = oracle.verify(run_experiment(ExperimentConfig(phi, stats)), phi, stats, TOL)
            worst = max(worst, report.max_deviation)

    table = run_experiment(ExperimentConfig(math.pi / 2, Statistics.BOSON))
    faulty = dict(table.per_pattern)
    faulty[("D1", "D1'")] += 1e-6
    tampered = type(table)(table.phi, table.statistics, table.class_weights,
                           table.p_same_cond, table.p_cross_cond, faulty)
    caught = not oracle.verify(tampered, math.pi / 2, Statistics.BOSON, 1e-9).passed
    record(8, "engine vs path-enumeration oracle", worst < TOL and caught,
           f"max dev {worst:.2e} over 192 runs (tol {TOL:g}); injected 1e-6 fault caught: {caught}")


def test_9_norm_preservation():
    rng = np.random.default_rng(20261016)
    phis = rng.uniform(-4 * math.pi, 4 * math.pi, size=1000)
    worst, cases = 0.0, 0
    for stats in STATS:
        for phi in phis:
            cfg = ExperimentConfig(float(phi), stats)
            state = initial_state(cfg)
            for element in build_fig1_circuit(cfg).elements:
                out = element.apply(state)
                worst = max(worst, abs(norm(out) - norm(state)))
                state = out
                cases += 1
    record(9, "norm preserved by every element", worst < TOL and len(phis) >= 1000,
           f"max |dnorm| {worst:.2e} over {cases} element applications, {len(phis)} random phases x 3 (tol {TOL:g})")
