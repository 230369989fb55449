import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dmojc.errors import DomainError, UsageError
from dmojc.qnums import (
    BasisKet,
    BranchD3,
    Dimensionality,
    LabeledState,
    ModelSpec,
    SubspaceBasis,
    basis_extended,
    basis_simple,
    chain_to_radial,
    invariant_of,
    ladder_coefficient,
    mu,
    radial_to_chain,
)

half_integers = st.integers(0, 20).map(lambda k: k + 0.5)


def test_mu_examples():
    assert mu(0, 0.5, BranchD3.INFINITE) == 0
    assert mu(1, 0.5, BranchD3.FINITE) == 5
    assert mu(3, 1.5, BranchD3.INFINITE) == 6


@pytest.mark.parametrize("j", [0, 1, 0.3, -0.5])
def test_mu_rejects_bad_j(j):
    with pytest.raises(DomainError):
        mu(0, j, BranchD3.FINITE)


def test_mu_rejects_negative_n():
    with pytest.raises(DomainError):
        mu(-1, 0.5, BranchD3.FINITE)


@given(st.integers(0, 200), half_integers)
def test_infinite_branch_is_j_independent(n, j):
    assert mu(n, j, BranchD3.INFINITE) == mu(n, 0.5, BranchD3.INFINITE) == 2 * n


@given(st.integers(0, 500))
def test_chain_round_trip(osc):
    n, branch = chain_to_radial(osc)
    assert radial_to_chain(n, branch) == osc


def test_ladder_examples():
    assert ladder_coefficient(ModelSpec(dim=Dimensionality.D1), 4) == 2
    assert ladder_coefficient(ModelSpec(dim=Dimensionality.D2), 2) == pytest.approx(2, abs=1e-15)
    d3 = ModelSpec(dim=Dimensionality.D3, j=0.5)
    assert ladder_coefficient(d3, 1) == pytest.approx(math.sqrt(3), abs=1e-15)
    # alternation above the bottom of the chain: mu = 2, 5, 4, 7, ...
    assert [ladder_coefficient(d3, k) ** 2 for k in range(2, 6)] == pytest.approx([2, 5, 4, 7])


def test_ladder_rejects_bottom():
    with pytest.raises(DomainError):
        ladder_coefficient(ModelSpec(), 0)


def test_invariant_examples():
    assert invariant_of(BasisKet(-1, 0)) == -0.5
    assert invariant_of(BasisKet(-1, 0, +1)) == 0
    assert invariant_of(BasisKet(+1, 3, +1)) == 4


def test_basis_simple_examples():
    spec = ModelSpec()
    assert basis_simple(spec, 1).kets == (BasisKet(+1, 0), BasisKet(-1, 1))
    assert basis_simple(spec, 0).kets == (BasisKet(-1, 0),)
    assert basis_simple(spec, 5).kets == (BasisKet(+1, 4), BasisKet(-1, 5))


def test_basis_extended_examples():
    spec = ModelSpec(chi=1.0, extended=True)
    assert basis_extended(spec, 0).kets == (
        BasisKet(-1, 1, -1), BasisKet(+1, 0, -1), BasisKet(-1, 0, +1)
    )
    assert basis_extended(spec, -1).kets == (BasisKet(-1, 0, -1),)
    assert basis_extended(spec, 2).kets == (
        BasisKet(-1, 3, -1), BasisKet(+1, 2, -1), BasisKet(-1, 2, +1), BasisKet(+1, 1, +1)
    )
    with pytest.raises(DomainError):
        basis_extended(spec, -2)


@given(st.integers(-1, 60))
def test_extended_basis_has_common_invariant(value):
    basis = basis_extended(ModelSpec(extended=True), value)
    assert {invariant_of(k) for k in basis.kets} == {value}
    assert len(basis) == {-1: 1, 0: 3}.get(value, 4)


def test_basis_rejects_wrong_model():
    with pytest.raises(UsageError):
        basis_simple(ModelSpec(extended=True), 1)
    with pytest.raises(UsageError):
        basis_extended(ModelSpec(), 0)


def test_subspace_rejects_mixed_kets():
    with pytest.raises(DomainError):
        SubspaceBasis(0.5, (BasisKet(+1, 0), BasisKet(-1, 0)))


def test_modelspec_validation():
    with pytest.raises(DomainError):
        ModelSpec(eta=-1.0)
    with pytest.raises(DomainError):
        ModelSpec(mc2=float("nan"))
    with pytest.raises(UsageError):
        ModelSpec(chi=1.0)
    with pytest.raises(UsageError):
        ModelSpec(dim=Dimensionality.D3)
    assert ModelSpec(dim=Dimensionality.D3, j=1.5).branch is BranchD3.INFINITE
    assert ModelSpec(dim=Dimensionality.D3, j=1.5).n_min == 1.0


def test_labeled_state_normalization():
    basis = basis_simple(ModelSpec(), 1)
    state = LabeledState(basis, [1 / math.sqrt(2), 1j / math.sqrt(2)])
    assert state.amplitude(BasisKet(-1, 1)) == pytest.approx(1j / math.sqrt(2))
    with pytest.raises(DomainError):
        LabeledState(basis, [1.0, 1.0])
    with pytest.raises(UsageError):
        LabeledState(basis, [1.0])
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0
    assert np.isclose(np.linalg.norm(state.amplitudes), 1)
