"""Lowest eigenpairs of real symmetric matrices via QUBO minimization."""
from .core import (
    EncodingConfig,
    Eigenpair,
    QaeError,
    Qubo,
    SymmetricMatrix,
    max_abs_element,
    rayleigh_quotient,
    spectral_scale,
)
from .decomposer import DecomposerParams, DecomposingSolver, clamp, solve_decomposed
from .eigensolver import QaeConfig, deflate, find_lambda_range, ground_state, is_trivial, spectrum
from .encoding import ObjectiveSpec, build_qubo, decode, encode, objective_value, qubo_energy
from .mmio import load_matrix, save_matrix
from .reference import FullSpectrum, eigh_reference
from .solvers import ExactSolver, TabuParams, TabuSolver, solve_exact, solve_tabu

__version__ = "0.1.0"
