"""The full validation grid behind ``dmojc validate``.

Every check is a :class:`dmojc.oracle.Check` with a fixed tolerance; the run
is deterministic (fixed grids, fixed seed, no timings in the output).
"""

from __future__ import annotations

import math
from dataclasses import asdict

import numpy as np
from scipy.optimize import minimize_scalar

from .blocks import (
    analytic_energies,
    dmo_block,
    eig_block,
    extended_block,
    jc_block,
    jc_energies,
    parameter_mapping,
)
from .dynamics import analytic_kernel, coefficient_formulas, evolve_extended, initial_atomic_state, propagate
from .entanglement import (
    closed_form_concurrence,
    closed_form_purities,
    concurrence,
    cp_envelope,
    cp_frontier,
    purity,
    reduce_to_atoms,
    reduce_to_field,
)
from .oracle import Check, build_full, compare_block_vs_full, evolve_full, full_field_density
from .qnums import BranchD3, Dimensionality, LabeledState, ModelSpec, basis_extended, basis_simple

GAMMAS = (0.0, 0.5, 1.0, 2.0)
ALPHAS = (0.0, math.pi / 40, math.pi / 8, math.pi / 4)
ALPHA_NAMES = ("0", "pi/40", "pi/8", "pi/4")
T_MAX = 30.0
T_STEPS = 3001
NMAX = 24
SEED = 20240607

SPECTRAL_REL_TOL = 1e-12
MAPPING_TOL = 1e-12
ANALYTIC_TOL = 1e-9
IDENTITY_TOL = 1e-12
FRONTIER_DIST_TOL = 1e-6
ENVELOPE_TOL = 1e-9
PURITY_MIN_BAND = (0.50, 0.52)


def time_grid(t_max: float = T_MAX, steps: int = T_STEPS) -> np.ndarray:
    return np.linspace(0.0, t_max, steps)


def resonant_spec(gamma: float, dim: Dimensionality = Dimensionality.D1) -> ModelSpec:
    return ModelSpec(dim=dim, eta=1.0, chi=1.0, mc2=gamma, gamma=gamma, extended=True)


def _fmt(x: float) -> str:
    return format(x, "g")


# -- criterion 1 ---------------------------------------------------------------

def spectral_grid() -> list[tuple[ModelSpec, int]]:
    cases = []
    etas = (0.0, 0.5, 1.0, 2.5)
    mc2s = (-1.0, 0.0, 1.5)
    ns = range(6)
    for dim in (Dimensionality.D1, Dimensionality.D2):
        for eta in etas:
            for mc2 in mc2s:
                cases += [(ModelSpec(dim=dim, eta=eta, mc2=mc2), n) for n in ns]
    for j in (0.5, 1.5, 2.5):
        for branch in BranchD3:
            for eta in etas:
                for mc2 in mc2s:
                    spec = ModelSpec(dim=Dimensionality.D3, eta=eta, mc2=mc2, j=j, branch=branch)
                    cases += [(spec, n) for n in ns]
    return cases


def spectral_error(spec: ModelSpec, n: int) -> float:
    """Relative distance between block eigenvalues and ``+-sqrt(mc2^2 + eta^2 mu)``."""
    lo, hi = analytic_energies(spec, n)
    numeric = eig_block(dmo_block(spec, n)).values
    if len(numeric) == 1:
        err = min(abs(numeric[0] - lo), abs(numeric[0] - hi))
    else:
        err = max(abs(numeric[0] - lo), abs(numeric[1] - hi))
    return err / hi if hi > 0 else err


def check_spectra() -> list[Check]:
    cases = spectral_grid()
    worst = max(spectral_error(spec, n) for spec, n in cases)
    return [
        Check("spectral-exactness", worst, SPECTRAL_REL_TOL),
        Check("spectral-grid-too-small", max(0, 200 - len(cases)), 0),
    ]


# -- criterion 2 ---------------------------------------------------------------

def check_mapping() -> list[Check]:
    mismatches = 0
    d3_err = 0.0
    for eta in (0.0, 0.3, 1.0, 2.0):
        for mc2 in (-0.7, 0.0, 1.0):
            for n in range(8):
                for dim in (Dimensionality.D1, Dimensionality.D2):
                    spec = ModelSpec(dim=dim, eta=eta, mc2=mc2)
                    m = parameter_mapping(spec)
                    a = dmo_block(spec, n)
                    b = jc_block(m.omega_equivalent, m.delta_equivalent, n)
                    if not (np.array_equal(a.entries, b.entries) and a.basis == b.basis):
                        mismatches += 1
                for j in (0.5, 1.5, 3.5):
                    spec = ModelSpec(dim=Dimensionality.D3, eta=eta, mc2=mc2, j=j,
                                     branch=BranchD3.INFINITE)
                    m = parameter_mapping(spec)
                    ours = eig_block(dmo_block(spec, n)).values
                    theirs = eig_block(jc_block(m.omega_equivalent, m.delta_equivalent, n)).values
                    d3_err = max(d3_err, float(np.max(np.abs(ours - theirs))))
    return [
        Check("mapping-identity-d1-d2", mismatches, 0),
        Check("mapping-spectra-d3-infinite", d3_err, MAPPING_TOL),
    ]


# -- criteria 3, 4, 6, 7 ----------------------------------------------------------

def resonant_case(gamma: float, alpha: float, times: np.ndarray, nmax: int = NMAX):
    """Oracle comparison plus closed-form residuals for one ``(gamma, alpha)``."""
    spec = resonant_spec(gamma)
    label = f"resonant gamma={_fmt(gamma)} alpha={alpha!r}"
    report = compare_block_vs_full(spec, times, nmax, alpha=alpha, label=label)

    coeffs = evolve_extended(spec, alpha, times)
    pops = np.array([cs.populations() for cs in coeffs])
    atoms = [reduce_to_atoms(cs) for cs in coeffs]
    p_field = np.array([purity(reduce_to_field(cs)) for cs in coeffs])
    p_atoms = np.array([purity(r) for r in atoms])
    conc = np.array([concurrence(r) for r in atoms])

    space, h = build_full(spec, nmax)
    traj = evolve_full(space, h, space.embed(initial_atomic_state(spec, alpha)), times)
    p_field_oracle = np.array([purity(full_field_density(space, psi)) for psi in traj.states])

    kernel = analytic_kernel(gamma)
    f_alpha, c2_sq, c3_sq = coefficient_formulas(kernel, alpha, times)
    pf_closed, pa_closed = closed_form_purities(kernel, alpha, times)
    conc_closed = closed_form_concurrence(kernel, alpha, times, spec)

    residuals = {
        "c1_sq": float(np.max(np.abs(pops[:, 0] - f_alpha))),
        "c2_sq": float(np.max(np.abs(pops[:, 1] - c2_sq))),
        "c3_sq": float(np.max(np.abs(pops[:, 2] - c3_sq))),
        "purity_field": float(np.max(np.abs(p_field - pf_closed))),
        "purity_atoms": float(np.max(np.abs(p_atoms - pa_closed))),
        "concurrence": float(np.max(np.abs(conc - conc_closed))),
        "purity_field_vs_oracle": float(np.max(np.abs(p_field - p_field_oracle))),
    }
    row = report.to_dict()
    row.update(gamma=gamma, alpha=alpha, residuals=residuals)
    return report, residuals, row


def check_kernel_identities() -> list[Check]:
    times = time_grid()
    g0 = 0.0
    trig = 0.0
    printed = 0.0
    for gamma in GAMMAS + (4.0, 0.25, 3.0):
        k = analytic_kernel(gamma)
        g0 = max(g0, abs(float(k.g(0.0)) - 1.0))
        gt = k.gamma_tilde
        alt = np.cos(gt * times) * np.cos(gamma * times) + (gamma / gt) * np.sin(gt * times) * np.sin(
            gamma * times
        )
        trig = max(trig, float(np.max(np.abs(k.g(times) - alt))))
        printed = max(printed, float(np.max(np.abs(k.g(times) - k.g_printed(times)))))
    return [
        Check("kernel-g-at-zero", g0, IDENTITY_TOL),
        Check("kernel-g-trig-identity", trig, IDENTITY_TOL),
        Check("kernel-g-printed-form", printed, IDENTITY_TOL),
    ]


def check_wootters() -> list[Check]:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(200):
        rank = int(rng.integers(1, 5))
        g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        c = concurrence(rho)
        worst = max(worst, -c, c - 1.0)
    bell = np.zeros(4, complex)
    bell[1] = bell[2] = 1 / math.sqrt(2)
    product = np.zeros(4, complex)
    product[2] = 1.0
    return [
        Check("wootters-range", max(worst, 0.0), 0.0),
        Check("wootters-bell", abs(concurrence(np.outer(bell, bell.conj())) - 1.0), IDENTITY_TOL),
        Check("wootters-product", concurrence(np.outer(product, product.conj())), IDENTITY_TOL),
    ]


# -- criterion 5 ---------------------------------------------------------------

def field_purity_series(gamma: float, times: np.ndarray) -> np.ndarray:
    spec = resonant_spec(gamma)
    return np.array([purity(reduce_to_field(cs)) for cs in evolve_extended(spec, 0.0, times)])


def first_purity_minimum(gamma: float, times: np.ndarray) -> float:
    """Time of the first local minimum of the field purity that dips below 0.52."""
    p = field_purity_series(gamma, times)
    spec = resonant_spec(gamma)
    block = extended_block(spec, 0)
    eig = eig_block(block)
    psi0 = initial_atomic_state(spec, 0.0)
    for i in range(1, len(p) - 1):
        if p[i] <= p[i - 1] and p[i] <= p[i + 1] and p[i] < PURITY_MIN_BAND[1]:
            def pf(t):
                state = propagate(block, psi0, t, eig)
                return purity(reduce_to_field(state))

            res = minimize_scalar(pf, bounds=(times[i - 1], times[i + 1]), method="bounded",
                                  options={"xatol": 1e-10})
            return float(res.x)
    return float("nan")


def check_purity_dips(times: np.ndarray):
    checks = []
    rows = []
    initial = max(abs(field_purity_series(g, times[:1])[0] - 1.0) for g in GAMMAS)
    checks.append(Check("field-purity-initial", initial, 0.0))
    lo, hi = PURITY_MIN_BAND
    for gamma in (0.0, 1.0):
        pmin = float(field_purity_series(gamma, times).min())
        outside = max(lo - pmin, pmin - hi, 0.0)
        checks.append(Check(f"field-purity-min gamma={_fmt(gamma)}", outside, 0.0))
        rows.append({"kind": "purity-min", "gamma": gamma, "purity_min": pmin})
    first = [first_purity_minimum(g, times) for g in (0.5, 1.0, 2.0, 4.0)]
    violations = sum(1 for a, b in zip(first, first[1:]) if not b > a)
    checks.append(Check("field-purity-first-minimum-increasing", violations, 0))
    rows.append({"kind": "purity-first-minimum", "gammas": [0.5, 1.0, 2.0, 4.0], "times": first})
    return checks, rows


# -- criterion 8 ---------------------------------------------------------------

def _cp_arrays(gamma: float, alpha: float, times: np.ndarray):
    spec = resonant_spec(gamma)
    atoms = [reduce_to_atoms(cs) for cs in evolve_extended(spec, alpha, times)]
    return np.array([purity(r) for r in atoms]), np.array([concurrence(r) for r in atoms])


def frontier_distance(gamma: float, alpha: float, times: np.ndarray) -> float:
    p, c = _cp_arrays(gamma, alpha, times)
    c_plus, c_minus = cp_frontier(np.clip(p, 0.5, 1.0), alpha)
    return float(np.max(np.minimum(np.abs(c - c_plus), np.abs(c - c_minus))))


def envelope_violation(gamma: float, alpha: float, times: np.ndarray) -> float:
    p, c = _cp_arrays(gamma, alpha, times)
    lower, upper = cp_envelope(np.clip(p, 0.5, 1.0), alpha)
    return float(max(np.max(lower - c), np.max(c - upper), 0.0))


def check_cp_plane(times: np.ndarray) -> list[Check]:
    checks = []
    for alpha, name in ((0.0, "0"), (math.pi / 40, "pi/40"), (math.pi / 4, "pi/4")):
        checks.append(Check(f"cp-frontier gamma=0 alpha={name}", frontier_distance(0.0, alpha, times),
                            FRONTIER_DIST_TOL))
    for alpha, name in zip(ALPHAS, ALPHA_NAMES):
        checks.append(Check(f"cp-envelope gamma=1 alpha={name}", envelope_violation(1.0, alpha, times),
                            ENVELOPE_TOL))
    p = np.linspace(0.5, 1.0, 512)
    c_plus, c_minus = cp_frontier(p, 0.0)
    checks.append(Check("cp-frontier-sum alpha=0", float(np.max(np.abs(c_plus + c_minus - 1.0))), 0.0))
    return checks


# -- generic-parameter differential checks ------------------------------------------

def generic_specs() -> list[ModelSpec]:
    specs = []
    for dim, j in ((Dimensionality.D1, None), (Dimensionality.D2, None), (Dimensionality.D3, 0.5),
                   (Dimensionality.D3, 1.5)):
        specs.append(ModelSpec(dim=dim, j=j, eta=0.7, chi=1.3, mc2=0.4, gamma=-0.9, extended=True))
        specs.append(ModelSpec(dim=dim, j=j, eta=1.1, chi=0.35, mc2=-0.6, gamma=1.7, extended=True))
    return specs


def _generic_state(spec: ModelSpec, invariant_value: int) -> LabeledState:
    basis = basis_extended(spec, invariant_value) if spec.extended else basis_simple(spec, invariant_value)
    amps = np.array([0.3 + 0.1j * k for k in range(len(basis))][::-1], dtype=complex) + np.arange(len(basis))
    return LabeledState(basis, amps / np.linalg.norm(amps))


def check_generic(times: np.ndarray, builder=None, nmax: int = NMAX):
    worst_state = worst_spec = worst_drift = 0.0
    rows = []
    for spec in generic_specs():
        for inv in (-1, 0, 1, 3):
            rep = compare_block_vs_full(spec, times, nmax, psi0=_generic_state(spec, inv), builder=builder,
                                        label=f"generic {spec.dim.name} I={inv}")
            worst_state = max(worst_state, rep.max_state_error)
            worst_spec = max(worst_spec, rep.max_spectral_error)
            worst_drift = max(worst_drift, rep.invariant_drift, rep.variance_drift)
            rows.append(dict(rep.to_dict(), spec=_spec_dict(spec), invariant_value=inv))
    simple_worst = 0.0
    for dim, j, branch in ((Dimensionality.D1, None, None), (Dimensionality.D2, None, None),
                           (Dimensionality.D3, 1.5, BranchD3.FINITE)):
        spec = ModelSpec(dim=dim, j=j, branch=branch, eta=0.8, mc2=0.3)
        for osc in (0, 1, 4):
            rep = compare_block_vs_full(spec, times, nmax, psi0=_generic_state(spec, osc),
                                        label=f"simple {dim.name} n={osc}")
            simple_worst = max(simple_worst, rep.max_state_error, rep.max_spectral_error)
    checks = [
        Check("extended-block-vs-oracle", max(worst_state, worst_spec), 1e-10),
        Check("extended-invariant-drift", worst_drift, 1e-12),
        Check("simple-block-vs-oracle", simple_worst, 1e-10),
    ]
    return checks, rows


def _spec_dict(spec: ModelSpec) -> dict:
    d = asdict(spec)
    d["dim"] = spec.dim.value
    d["branch"] = spec.branch.value if spec.branch else None
    return d


# -- driver ---------------------------------------------------------------------

def run_validation(t_max: float = T_MAX, steps: int = T_STEPS, nmax: int = NMAX, builder=None) -> dict:
    """Run every check; returns the JSON-ready ``{config, rows, checks}`` object."""
    times = time_grid(t_max, steps)
    checks: list[Check] = []
    rows: list[dict] = []

    checks += check_spectra()
    checks += check_mapping()

    state_err = drift = 0.0
    residual_max: dict[str, float] = {}
    for gamma in GAMMAS:
        for alpha in ALPHAS:
            report, residuals, row = resonant_case(gamma, alpha, times, nmax)
            row["kind"] = "resonant"
            rows.append(row)
            state_err = max(state_err, report.max_state_error, report.max_spectral_error)
            drift = max(drift, report.invariant_drift, report.variance_drift)
            for key, value in residuals.items():
                residual_max[key] = max(residual_max.get(key, 0.0), value)
    checks.append(Check("oracle-equivalence", state_err, 1e-10))
    checks.append(Check("conservation", drift, 1e-12))
    checks.append(Check("field-purity-vs-oracle", residual_max.pop("purity_field_vs_oracle"), 1e-10))
    for key, value in residual_max.items():
        checks.append(Check(f"analytic-{key.replace('_', '-')}", value, ANALYTIC_TOL))
    checks += check_kernel_identities()
    checks += check_wootters()

    dip_checks, dip_rows = check_purity_dips(times)
    checks += dip_checks
    rows += dip_rows
    checks += check_cp_plane(times)

    generic_checks, generic_rows = check_generic(times, builder=builder, nmax=nmax)
    checks += generic_checks
    for row in generic_rows:
        row["kind"] = "generic"
    rows += generic_rows

    config = {
        "gammas": list(GAMMAS),
        "alphas": list(ALPHA_NAMES),
        "t_max": t_max,
        "t_steps": steps,
        "nmax": nmax,
        "seed": SEED,
    }
    return {"config": config, "rows": rows, "checks": [asdict(c) for c in checks]}


def all_passed(result: dict) -> bool:
    return all(c["passed"] for c in result["checks"])
