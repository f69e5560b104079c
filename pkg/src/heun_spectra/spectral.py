"""Determinant polynomials of the quantization matrices and their roots.

The spectral condition is det A_{n+1}(s) = 0, with A_{n+1} the tridiagonal
matrix built from the recurrence sequences.  The determinant is assembled by
the continuant recurrence

    D_{-1} = 1,  D_0 = a_0,  D_j = a_j D_{j-1} - b_{j-1} c_{j-1} D_{j-2}

carried out in polynomial arithmetic over the spectral parameter, so the
result is the exact characteristic polynomial of the block.  Root finding is
companion-matrix based in double precision with a Newton polish, and switches
to mpmath polyroots when the caller supplies extended-precision coefficients.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import mpmath
import numpy as np

from .errors import (
    DegeneratePolynomialError,
    ResidualToleranceError,
)
from .heun_core import PolynomialCoefficients, TridiagonalSequences, polynomial_from_recurrence
from .spoly import Scalar, SPoly, horner

LEADING_COEFF_FLOOR = 1e-300
CLUSTER_TOL = 1e-7
NULL_VECTOR_TOL = 1e-8


@dataclass(frozen=True)
class DeterminantPolynomial:
    """det A_{n+1}(s) as dense coefficients, lowest degree first."""

    coeffs: Tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("determinant polynomial needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def coefficient_scale(self) -> float:
        return float(max(abs(c) for c in self.coeffs))

    def __call__(self, s: Scalar) -> Scalar:
        return horner(self.coeffs, s)

    def derivative_at(self, s: Scalar) -> Scalar:
        return horner([j * c for j, c in enumerate(self.coeffs)][1:], s)


@dataclass(frozen=True)
class RootSet:
    """Roots of a determinant polynomial with multiplicity and residual data.

    roots carries every root (degree many, counted with multiplicity);
    multiplicities[i] is the size of the near-coincident cluster root i
    belongs to; residuals[i] is |det(root_i)| over the coefficient scale.
    """

    roots: Tuple[Scalar, ...]
    multiplicities: Tuple[int, ...]
    residuals: Tuple[float, ...]

    def __len__(self) -> int:
        return len(self.roots)


def determinant_polynomial(seqs: TridiagonalSequences) -> DeterminantPolynomial:
    """Exact determinant of the quantization matrix as a polynomial in s."""
    a, b, c = seqs.a, seqs.b, seqs.c
    d_prev2 = SPoly((1.0,))
    d_prev = a[0]
    for j in range(1, seqs.size):
        d_prev2, d_prev = d_prev, a[j] * d_prev - (b[j - 1] * c[j - 1]) * d_prev2
    return DeterminantPolynomial(coeffs=d_prev.coeffs)


def determinant_numeric(seqs: TridiagonalSequences, s: Scalar) -> Scalar:
    """Continuant recurrence after substituting s; cheap single-point value."""
    a, b, c = seqs.at(s)
    d_prev2, d_prev = 1.0, a[0]
    for j in range(1, seqs.size):
        d_prev2, d_prev = d_prev, a[j] * d_prev - (b[j - 1] * c[j - 1]) * d_prev2
    return d_prev


def dense_determinant(seqs: TridiagonalSequences, s: Scalar) -> Scalar:
    """LU determinant of the explicitly assembled matrix; dual-path check.

    Float entries go through numpy's LAPACK LU.  mpmath entries fall back to
    a pivoted Gaussian elimination in the same precision, so the dual-path
    comparison can be run above float64 where high-degree determinants lose
    digits to cancellation.
    """
    a, b, c = seqs.at(s)
    n1 = seqs.size
    if not any(_is_mp(v) for v in (a[0], b[0] if b else 0.0, s)):
        m = np.zeros((n1, n1), dtype=float)
        for j in range(n1):
            m[j, j] = float(a[j])
            if j + 1 < n1:
                m[j, j + 1] = float(b[j])
                m[j + 1, j] = float(c[j])
        return float(np.linalg.det(m))
    zero = a[0] * 0
    rows = [[zero] * n1 for _ in range(n1)]
    for j in range(n1):
        rows[j][j] = a[j]
        if j + 1 < n1:
            rows[j][j + 1] = b[j]
            rows[j + 1][j] = c[j]
    det = zero + 1
    for col in range(n1):
        pivot = max(range(col, n1), key=lambda r: abs(rows[r][col]))
        if rows[pivot][col] == 0:
            return zero
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det = det * rows[col][col]
        for r in range(col + 1, n1):
            factor = rows[r][col] / rows[col][col]
            if factor != 0:
                for k in range(col, n1):
                    rows[r][k] = rows[r][k] - factor * rows[col][k]
    return det


def _is_mp(value: Scalar) -> bool:
    return isinstance(value, (mpmath.mpf, mpmath.mpc))


def _cluster(roots: Sequence[complex], tol: float) -> Tuple[int, ...]:
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    counts = [1] * len(roots)
    group = [order[0]] if order else []
    for prev, cur in zip(order, order[1:]):
        gap = abs(roots[cur] - roots[prev])
        scale = max(abs(roots[cur]), abs(roots[prev]))
        if scale > 0 and gap <= tol * scale:
            group.append(cur)
        else:
            for i in group:
                counts[i] = len(group)
            group = [cur]
    for i in group:
        counts[i] = len(group)
    return tuple(counts)


def find_roots(
    det: DeterminantPolynomial,
    seqs: Optional[TridiagonalSequences] = None,
    cluster_tol: float = CLUSTER_TOL,
) -> RootSet:
    """All roots of the determinant polynomial, counted with multiplicity.

    Double-precision coefficients go through companion-matrix eigenvalues of
    the monic rescaled polynomial plus one Newton step per root; the Newton
    step evaluates the determinant through the continuant recurrence when
    seqs is given (better conditioned than the expanded coefficients).
    Extended-precision coefficients are delegated to mpmath.polyroots.

    Near-coincident roots (within cluster_tol relative) are flagged through
    the multiplicities field and a warning, since their accuracy degrades.
    """
    if det.degree < 1:
        raise ValueError("determinant polynomial must have degree >= 1")
    lead = det.coeffs[-1]
    if abs(lead) < LEADING_COEFF_FLOOR:
        raise DegeneratePolynomialError(
            f"leading coefficient {lead!r} below {LEADING_COEFF_FLOOR}"
        )

    if _is_mp(lead):
        highest_first = [c for c in reversed(det.coeffs)]
        mp_roots = mpmath.polyroots(highest_first, maxsteps=200, extraprec=80)
        roots = tuple(mp_roots)
    else:
        monic = np.array(
            [float(c) / float(lead) for c in reversed(det.coeffs)], dtype=float
        )
        raw = np.roots(monic)
        polished = []
        for r in raw:
            r = complex(r)
            fval = determinant_numeric(seqs, r) if seqs is not None else det(r)
            fder = det.derivative_at(r)
            if fder != 0:
                candidate = r - fval / fder
                fnew = (
                    determinant_numeric(seqs, candidate)
                    if seqs is not None
                    else det(candidate)
                )
                if abs(fnew) <= abs(fval):
                    r = candidate
            polished.append(r)
        roots = tuple(polished)

    as_complex = [complex(r) for r in roots]
    multiplicities = _cluster(as_complex, cluster_tol)
    if any(m > 1 for m in multiplicities):
        warnings.warn(
            "near-coincident determinant roots; multiplicity flags set",
            RuntimeWarning,
            stacklevel=2,
        )
    scale = det.coefficient_scale
    residuals = tuple(float(abs(det(r))) / scale for r in roots)
    return RootSet(roots=roots, multiplicities=multiplicities, residuals=residuals)


def null_vector(
    seqs: TridiagonalSequences,
    s_star: Scalar,
    tol: float = NULL_VECTOR_TOL,
) -> PolynomialCoefficients:
    """Recurrence null vector of the quantization matrix at a candidate root.

    Raises ResidualToleranceError when the terminal residual exceeds tol,
    which is the signal to retry the block at higher working precision.
    """
    poly = polynomial_from_recurrence(seqs, s_star)
    if poly.terminal_residual > tol:
        raise ResidualToleranceError(
            f"terminal residual {poly.terminal_residual:.3e} exceeds {tol:.1e} "
            f"at s = {s_star}"
        )
    return poly


def symmetric_eigenvalue_roots(seqs: TridiagonalSequences) -> np.ndarray:
    """Roots via a symmetrized eigenvalue problem, for monic-affine diagonals.

    Applies when every a_j = s + v_j (unit spectral coefficient), b_j and c_j
    are constants, and b_j c_j > 0.  Then det A(s) = 0 exactly when s is an
    eigenvalue of the negated constant tridiagonal part, which is similar to
    a symmetric matrix with off-diagonal sqrt(b_j c_j); its eigenvalues are
    provably real, certifying root reality independently of the polynomial
    path.
    """
    from scipy.linalg import eigvalsh_tridiagonal

    v = []
    for entry in seqs.a:
        if entry.degree != 1 or float(entry.coeffs[1]) != 1.0:
            raise ValueError("diagonal entries must be monic affine in s")
        v.append(float(entry.coeffs[0]))
    off = []
    for bj, cj in zip(seqs.b, seqs.c):
        if not (bj.is_constant and cj.is_constant):
            raise ValueError("off-diagonal entries must be constant in s")
        prod = float(bj.constant_value()) * float(cj.constant_value())
        if prod <= 0:
            raise ValueError("b_j c_j must be positive for symmetrization")
        off.append(np.sqrt(prod))
    diag = -np.asarray(v, dtype=float)
    if not off:
        return diag.copy()
    return eigvalsh_tridiagonal(diag, np.asarray(off, dtype=float))
