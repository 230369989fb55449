"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a PASS/FAIL line that is printed in the terminal summary
(see ``conftest.py``) and also echoed to stdout for ``pytest -s``.
"""

import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from dmojc.blocks import dmo_block, eig_block, jc_block, parameter_mapping
from dmojc.cli import main
from dmojc.dynamics import analytic_kernel, coefficient_formulas, evolve_extended
from dmojc.entanglement import (
    closed_form_concurrence,
    closed_form_purities,
    concurrence,
    cp_frontier,
    purity,
    reduce_to_atoms,
    reduce_to_field,
)
from dmojc.oracle import compare_block_vs_full
from dmojc.qnums import BranchD3, Dimensionality, ModelSpec
from dmojc.validation import (
    ALPHAS,
    GAMMAS,
    check_wootters,
    envelope_violation,
    field_purity_series,
    first_purity_minimum,
    frontier_distance,
    resonant_spec,
    spectral_error,
    spectral_grid,
    time_grid,
)

RESULTS = []
T = time_grid(30.0, 3001)


def record(number, title, passed, detail):
    line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


def test_criterion_1_spectral_exactness():
    start = time.perf_counter()
    cases = spectral_grid()
    worst = max(spectral_error(spec, n) for spec, n in cases)
    elapsed = time.perf_counter() - start
    ok = len(cases) >= 200 and worst <= 1e-12 and elapsed < 1.0
    record(1, "spectral exactness", ok,
           f"{len(cases)} cases, max rel err {worst:.2e} (tol 1e-12), {elapsed:.3f} s (limit 1 s)")


def test_criterion_2_mapping_identity():
    mismatches = 0
    d3 = 0.0
    for eta in (0.0, 0.25, 1.0, math.sqrt(2), 3.0):
        for mc2 in (-1.0, 0.0, 0.5, 2.0):
            for n in range(12):
                for dim in (Dimensionality.D1, Dimensionality.D2):
                    spec = ModelSpec(dim=dim, eta=eta, mc2=mc2)
                    m = parameter_mapping(spec)
                    ours, theirs = dmo_block(spec, n), jc_block(m.omega_equivalent, m.delta_equivalent, n)
                    mismatches += not (ours.basis == theirs.basis and np.array_equal(ours.entries, theirs.entries))
                for j in (0.5, 2.5):
                    spec = ModelSpec(dim=Dimensionality.D3, eta=eta, mc2=mc2, j=j, branch=BranchD3.INFINITE)
                    m = parameter_mapping(spec)
                    a = eig_block(dmo_block(spec, n)).values
                    b = eig_block(jc_block(math.sqrt(2) * eta, mc2, n)).values
                    assert m.omega_equivalent == math.sqrt(2) * eta
                    d3 = max(d3, float(np.max(np.abs(a - b))))
    record(2, "mapping identity", mismatches == 0 and d3 <= 1e-12,
           f"D1/D2 entrywise mismatches {mismatches}, D3 infinite spectral err {d3:.2e} (tol 1e-12)")


@pytest.fixture(scope="module")
def oracle_reports():
    start = time.perf_counter()
    reports = {(g, a): compare_block_vs_full(resonant_spec(g), T, 24, alpha=a) for g in GAMMAS for a in ALPHAS}
    return reports, time.perf_counter() - start


def test_criterion_3_oracle_equivalence(oracle_reports):
    reports, elapsed = oracle_reports
    worst = max(r.max_state_error for r in reports.values())
    ok = worst < 1e-10 and elapsed < 30.0
    record(3, "oracle equivalence", ok,
           f"{len(reports)} runs, sup-norm err {worst:.2e} (tol 1e-10), {elapsed:.2f} s (limit 30 s)")


def test_criterion_4_conservation(oracle_reports):
    reports, _ = oracle_reports
    drift = max(r.invariant_drift for r in reports.values())
    var = max(r.variance_drift for r in reports.values())
    record(4, "conservation", drift < 1e-12 and var < 1e-12,
           f"<I> drift {drift:.2e}, variance drift {var:.2e} (tol 1e-12)")


def test_criterion_5_field_purity():
    initial = [float(field_purity_series(g, T[:1])[0]) for g in GAMMAS + (4.0,)]
    minima = {g: float(field_purity_series(g, T).min()) for g in (0.0, 1.0)}
    first = [first_purity_minimum(g, T) for g in (0.5, 1.0, 2.0, 4.0)]
    ok = (
        all(p == 1.0 for p in initial)
        and all(0.50 <= m <= 0.52 for m in minima.values())
        and all(b > a for a, b in zip(first, first[1:]))
    )
    record(5, "field purity dips", ok,
           f"P_F(0) {sorted(set(initial))}, min P_F {minima}, first minima at {[round(x, 4) for x in first]}")


def test_criterion_6_analytic_reconciliation():
    worst = {"c1_sq": 0.0, "purity_atoms": 0.0, "purity_field": 0.0, "concurrence": 0.0}
    for g in GAMMAS:
        k = analytic_kernel(g)
        for a in ALPHAS:
            coeffs = evolve_extended(resonant_spec(g), a, T)
            atoms = [reduce_to_atoms(cs) for cs in coeffs]
            f, _, _ = coefficient_formulas(k, a, T)
            pf, pa = closed_form_purities(k, a, T)
            numeric = {
                "c1_sq": np.array([abs(cs.c1) ** 2 for cs in coeffs]),
                "purity_atoms": np.array([purity(r) for r in atoms]),
                "purity_field": np.array([purity(reduce_to_field(cs)) for cs in coeffs]),
                "concurrence": np.array([concurrence(r) for r in atoms]),
            }
            closed = {"c1_sq": f, "purity_atoms": pa, "purity_field": pf,
                      "concurrence": closed_form_concurrence(k, a, T)}
            for key in worst:
                worst[key] = max(worst[key], float(np.max(np.abs(numeric[key] - closed[key]))))
    g0 = max(abs(float(analytic_kernel(g).g(0.0)) - 1.0) for g in GAMMAS + (4.0,))
    trig = 0.0
    for g in GAMMAS + (4.0,):
        k = analytic_kernel(g)
        gt = k.gamma_tilde
        alt = np.cos(gt * T) * np.cos(g * T) + (g / gt) * np.sin(gt * T) * np.sin(g * T)
        trig = max(trig, float(np.max(np.abs(k.g_printed(T) - alt))))
    ok = max(worst.values()) <= 1e-9 and g0 <= 1e-12 and trig <= 1e-12
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    record(6, "analytic reconciliation", ok, f"{detail} (tol 1e-9); g(0) err {g0:.1e}, trig identity {trig:.1e}")


def test_criterion_7_concurrence_oracle():
    worst = 0.0
    for g in GAMMAS:
        k = analytic_kernel(g)
        for a in ALPHAS:
            numeric = [concurrence(reduce_to_atoms(cs)) for cs in evolve_extended(resonant_spec(g), a, T)]
            worst = max(worst, float(np.max(np.abs(closed_form_concurrence(k, a, T) - numeric))))
    checks = {c.name: c for c in check_wootters()}
    ok = worst <= 1e-9 and all(c.passed for c in checks.values())
    record(7, "concurrence oracle", ok,
           f"closed form vs Wootters {worst:.2e} (tol 1e-9); range viol {checks['wootters-range'].value:.1e}, "
           f"Bell err {checks['wootters-bell'].value:.1e}, product {checks['wootters-product'].value:.1e}")


def test_criterion_8_cp_plane():
    dist = max(frontier_distance(0.0, a, T) for a in (0.0, math.pi / 40, math.pi / 4))
    env = max(envelope_violation(1.0, a, T) for a in ALPHAS)
    p = np.linspace(0.5, 1.0, 512)
    c_plus, c_minus = cp_frontier(p, 0.0)
    exact = bool(np.all(c_plus + c_minus == 1.0))
    ok = dist <= 1e-6 and env <= 1e-9 and exact
    record(8, "CP plane", ok,
           f"gamma=0 frontier distance {dist:.2e} (tol 1e-6), gamma=1 envelope violation {env:.2e} (tol 1e-9), "
           f"C+ + C- == 1 on all 512 samples: {exact}")


def test_criterion_9_determinism(tmp_path):
    runner = CliRunner()
    outputs = []
    for name in ("a.json", "b.json"):
        target = tmp_path / name
        result = runner.invoke(main, ["validate", "--format", "json", "--output", str(target)])
        assert result.exit_code == 0, result.output
        outputs.append(target.read_bytes())
    record(9, "determinism", outputs[0] == outputs[1],
           f"two validate runs, {len(outputs[0])} bytes each, byte-identical: {outputs[0] == outputs[1]}")
