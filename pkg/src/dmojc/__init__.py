"""Dirac-Moshinsky oscillators as Jaynes-Cummings models: blocks, dynamics, entanglement."""

__version__ = "0.1.0"

from .blocks import (
    EigenSystem,
    HermitianBlock,
    MappingReport,
    analytic_energies,
    dmo_block,
    dressed_states,
    eig_block,
    extended_block,
    jc_block,
    jc_energies,
    mixing_angle,
    parameter_mapping,
)
from .dynamics import (
    AnalyticKernel,
    CoefficientSet,
    analytic_kernel,
    coefficient_formulas,
    evolve_extended,
    initial_atomic_state,
    propagate,
    propagate_many,
)
from .entanglement import (
    CPPoint,
    ReducedDensity,
    closed_form_concurrence,
    concurrence,
    cp_envelope,
    cp_frontier,
    cp_trajectory,
    purity,
    reduce_to_atoms,
    reduce_to_field,
)
from .errors import DegenerateInputError, DmojcError, DomainError, UsageError, ValidationError
from .qnums import BasisKet, BranchD3, Dimensionality, LabeledState, ModelSpec, SubspaceBasis

__all__ = [name for name in dir() if not name.startswith("_")]
