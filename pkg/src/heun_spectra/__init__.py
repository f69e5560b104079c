"""Bound-state spectra of two integrable planar magnetic Schrodinger systems.

The solvable families reduce to polynomial solutions of the biconfluent and
confluent Heun equations; each angular block's spectrum is the root set of an
exact tridiagonal determinant polynomial, independently cross-checked by a
finite-difference radial eigensolver.
"""

from .errors import (
    DegeneratePolynomialError,
    ParameterError,
    PrecisionError,
    RecurrenceBreakdownError,
    ResidualToleranceError,
    SelectionError,
)
from .heun_core import (
    HeunBParams,
    HeunCParams,
    PolynomialCoefficients,
    TridiagonalSequences,
    heunb_degree,
    heunb_ode_residual,
    heunb_sequences,
    heunc_degree,
    heunc_ode_residual,
    heunc_sequences,
    polynomial_from_recurrence,
)
from .models import (
    BlockResult,
    BlockSpec,
    Example,
    ModelConfig,
    RadialProfile,
    SpectralRoot,
    UnitSystem,
    block_sequences,
    magnetic_field,
    make_block,
    permissible_blocks,
    radial_norm,
    radial_profile,
    scalar_potential,
    schrodinger_residual,
    solve_block,
    spectrum,
    t_of_rho,
    total_flux,
    vector_potential,
    wavefunction,
)
from .oracle import GridSpec, MatchReport, compare_spectra, radial_eigensolve
from .spectral import (
    DeterminantPolynomial,
    RootSet,
    dense_determinant,
    determinant_numeric,
    determinant_polynomial,
    find_roots,
    null_vector,
    symmetric_eigenvalue_roots,
)

__version__ = "0.1.0"

__all__ = [
    "BlockResult",
    "BlockSpec",
    "DegeneratePolynomialError",
    "DeterminantPolynomial",
    "Example",
    "GridSpec",
    "HeunBParams",
    "HeunCParams",
    "MatchReport",
    "ModelConfig",
    "ParameterError",
    "PolynomialCoefficients",
    "PrecisionError",
    "RadialProfile",
    "RecurrenceBreakdownError",
    "ResidualToleranceError",
    "RootSet",
    "SelectionError",
    "SpectralRoot",
    "TridiagonalSequences",
    "UnitSystem",
    "block_sequences",
    "compare_spectra",
    "dense_determinant",
    "determinant_numeric",
    "determinant_polynomial",
    "find_roots",
    "heunb_degree",
    "heunb_ode_residual",
    "heunb_sequences",
    "heunc_degree",
    "heunc_ode_residual",
    "heunc_sequences",
    "magnetic_field",
    "make_block",
    "null_vector",
    "permissible_blocks",
    "polynomial_from_recurrence",
    "radial_eigensolve",
    "radial_norm",
    "radial_profile",
    "scalar_potential",
    "schrodinger_residual",
    "solve_block",
    "spectrum",
    "symmetric_eigenvalue_roots",
    "t_of_rho",
    "total_flux",
    "vector_potential",
    "wavefunction",
]
