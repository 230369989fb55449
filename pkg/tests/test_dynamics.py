import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dmojc.blocks import eig_block, extended_block, jc_block
from dmojc.dynamics import (
    CoefficientSet,
    analytic_contract_holds,
    analytic_kernel,
    check_analytic_contract,
    coefficient_formulas,
    evolve_extended,
    initial_atomic_state,
    propagate,
    propagate_many,
)
from dmojc.errors import UsageError
from dmojc.oracle import build_full, evolve_full
from dmojc.qnums import BasisKet, Dimensionality, LabeledState, ModelSpec

# sin(sqrt 3)^2 / 3 to 25 digits (mpmath)
F0_GAMMA1_T1 = 0.3247405326403046268520215

times = st.floats(0, 30, allow_nan=False)
angles = st.floats(0, math.pi / 2)
gammas = st.floats(0, 4)


def test_propagate_identity_at_zero(resonant):
    psi0 = initial_atomic_state(resonant, 0.3)
    assert propagate(extended_block(resonant, 0), psi0, 0.0) is psi0
    amps = propagate_many(extended_block(resonant, 0), psi0, [0.0, 1.0, 0.0])
    assert np.array_equal(amps[0], psi0.amplitudes) and np.array_equal(amps[2], psi0.amplitudes)


def test_rabi_flop():
    block = jc_block(1, 0, 1)
    out = propagate(block, LabeledState(block.basis, [1, 0]), math.pi / 2)
    assert np.allclose(out.amplitudes, [0, -1j], atol=1e-15)


def test_extended_block_matches_dense_oracle(resonant):
    psi0 = LabeledState(extended_block(resonant, 0).basis, [0, 0, 1])
    space, h = build_full(resonant, 20)
    t = np.linspace(0, 30, 301)
    dense = evolve_full(space, h, space.embed(psi0), t).states
    block = propagate_many(extended_block(resonant, 0), psi0, t)
    cols = [space.index[k] for k in psi0.basis.kets]
    assert np.max(np.abs(dense[:, cols] - block)) < 1e-10
    rest = np.delete(dense, cols, axis=1)
    assert np.max(np.abs(rest)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(gammas, angles, st.lists(times, min_size=1, max_size=5))
def test_propagation_is_unitary(gamma, alpha, ts):
    spec = ModelSpec(eta=1, chi=1, mc2=gamma, gamma=gamma, extended=True)
    for cs in evolve_extended(spec, alpha, ts):
        assert cs.populations().sum() == pytest.approx(1, abs=1e-13)


def test_propagate_guards(resonant):
    psi0 = initial_atomic_state(resonant, 0.0)
    with pytest.raises(UsageError):
        propagate(jc_block(1, 0, 1), psi0, 1.0)
    with pytest.raises(UsageError):
        propagate(extended_block(resonant, 0), psi0, float("inf"))
    with pytest.raises(UsageError):
        evolve_extended(ModelSpec(), 0.0, [0.0])


def test_initial_state(resonant):
    assert np.array_equal(initial_atomic_state(resonant, 0).amplitudes, [0, 0, 1])
    s = initial_atomic_state(resonant, math.pi / 4).amplitudes
    assert s == pytest.approx([0, 1 / math.sqrt(2), 1 / math.sqrt(2)], abs=1e-15)
    assert initial_atomic_state(resonant, 0).basis.kets[2] == BasisKet(-1, 0, +1)


def test_c1_at_gamma_one(resonant):
    (cs,) = evolve_extended(resonant, 0.0, [1.0])
    assert abs(cs.c1) ** 2 == pytest.approx(F0_GAMMA1_T1, abs=1e-14)
    assert cs.c4 is None


def test_coefficient_set_validates_norm():
    with pytest.raises(UsageError):
        CoefficientSet(0.0, [1, 1, 0])


def test_kernel_examples():
    k1 = analytic_kernel(1.0)
    assert k1.f0(1.0) == pytest.approx(F0_GAMMA1_T1, abs=1e-15)
    t = np.linspace(0, 30, 1001)
    assert np.allclose(analytic_kernel(0.0).g(t), np.cos(math.sqrt(2) * t), atol=1e-14)
    for gamma in (0.0, 0.5, 1.0, 2.0, 4.0, 37.0):
        assert analytic_kernel(gamma).g(0.0) == 1.0


@settings(max_examples=200)
@given(gammas, times)
def test_g_printed_and_stable_forms_agree(gamma, t):
    k = analytic_kernel(gamma)
    assert k.g(t) == pytest.approx(k.g_printed(t), abs=1e-14)


def test_coefficient_formula_examples():
    k = analytic_kernel(1.0)
    assert [float(x) for x in coefficient_formulas(k, 0.0, 0.0)] == [0.0, 0.0, 1.0]
    _, c2, c3 = coefficient_formulas(k, math.pi / 4, np.linspace(0, 30, 101))
    assert np.allclose(c2, c3, atol=1e-15)
    c = coefficient_formulas(k, 0.0, 1.0)
    assert c[0] == pytest.approx(F0_GAMMA1_T1, abs=1e-15)
    assert sum(c) == pytest.approx(1, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(gammas, angles, times)
def test_closed_forms_match_block_propagation(gamma, alpha, t):
    spec = ModelSpec(eta=1, chi=1, mc2=gamma, gamma=gamma, extended=True)
    (cs,) = evolve_extended(spec, alpha, [t])
    closed = np.array([float(x) for x in coefficient_formulas(analytic_kernel(gamma), alpha, t)])
    assert np.allclose(cs.populations(), closed, atol=1e-9)


def test_contract():
    assert analytic_contract_holds(ModelSpec(eta=1, chi=1, mc2=0.5, gamma=0.5, extended=True))
    assert not analytic_contract_holds(ModelSpec(eta=1, chi=1, mc2=0.5, gamma=1, extended=True))
    assert not analytic_contract_holds(ModelSpec(eta=1, chi=0.5, mc2=1, gamma=1, extended=True))
    # the effective coupling is eta * f(1): sqrt(2) for 2+1, sqrt(3) for 3+1 with j = 1/2
    d2 = ModelSpec(dim=Dimensionality.D2, eta=1 / math.sqrt(2), chi=1 / math.sqrt(2), extended=True)
    assert analytic_contract_holds(d2)
    with pytest.raises(UsageError, match="eta"):
        check_analytic_contract(ModelSpec(dim=Dimensionality.D2, eta=1, chi=1, extended=True))
    with pytest.raises(UsageError):
        check_analytic_contract(ModelSpec())


def test_eigensystem_reuse(resonant):
    block = extended_block(resonant, 0)
    psi0 = initial_atomic_state(resonant, 0.2)
    es = eig_block(block)
    a = propagate(block, psi0, 3.3, eigensystem=es)
    b = propagate(block, psi0, 3.3)
    assert np.array_equal(a.amplitudes, b.amplitudes)
