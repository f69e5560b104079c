"""Polynomial solutions of the biconfluent and confluent Heun equations.

Biconfluent form on z in (0, inf), regular singular point at z = 0:

    y'' + (-2z - beta + (1 + alpha)/z) y'
        + (gamma - alpha - 2 - ((1 + alpha) beta + delta) / (2z)) y = 0

Confluent form on z outside {0, 1}:

    y'' + (alpha + (beta + 1)/z + (gamma + 1)/(z - 1)) y'
        + (mu/z + nu/(z - 1)) y = 0

    mu = (alpha - beta - gamma + alpha beta - beta gamma)/2 - eta
    nu = (alpha + beta + gamma + alpha gamma + beta gamma)/2 + delta + eta

Each equation admits a degree-n polynomial solution y = sum_j p_j z^j exactly
when a degree condition fixes n and the coefficients satisfy a three-term
recurrence

    c_{j-1} p_{j-1} + a_j p_j + b_j p_{j+1} = 0,    p_{-1} = 0, p_0 = 1,

whose (n+1) x (n+1) tridiagonal matrix must be singular.  This module builds
the sequences (a_j, b_j, c_j), runs the recurrence, and checks candidate
polynomials against the differential equations directly.

Entries of the sequences may be plain numbers or SPoly polynomials in the
spectral parameter; the caller decides whether the spectral dependence is
substituted before or after the sequences are formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

from .errors import RecurrenceBreakdownError
from .spoly import Scalar, SPoly, as_spoly, horner, scalar_is_finite

Entry = Union[Scalar, SPoly]

INTEGER_TOL = 1e-9


def _require_finite(name: str, value: Entry) -> None:
    if isinstance(value, SPoly):
        if not value.is_finite():
            raise ValueError(f"{name} has non-finite coefficients")
    elif not scalar_is_finite(value):
        raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class HeunBParams:
    """Parameters (alpha, beta, gamma, delta) of the biconfluent equation.

    Any field may carry an SPoly in the spectral parameter; in the model
    pipeline delta does (delta is affine in the eigenvalue).
    """

    alpha: Entry
    beta: Entry
    gamma: Entry
    delta: Entry

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma", "delta"):
            _require_finite(name, getattr(self, name))


@dataclass(frozen=True)
class HeunCParams:
    """Primary parameters (alpha, beta, gamma, delta, eta) of the confluent equation.

    The accessory coefficients mu and nu are derived, never stored, so they
    can not drift out of sync with the primaries.
    """

    alpha: Entry
    beta: Entry
    gamma: Entry
    delta: Entry
    eta: Entry

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma", "delta", "eta"):
            _require_finite(name, getattr(self, name))

    @property
    def mu(self) -> Entry:
        a, b, g = self.alpha, self.beta, self.gamma
        return 0.5 * (a - b - g + a * b - b * g) - self.eta

    @property
    def nu(self) -> Entry:
        a, b, g = self.alpha, self.beta, self.gamma
        return 0.5 * (a + b + g + a * g + b * g) + self.delta + self.eta


@dataclass(frozen=True)
class PolynomialCoefficients:
    """Recurrence output p_0..p_n with its terminal relation residual.

    terminal_residual is |c_{n-1} p_{n-1} + a_n p_n| scaled by the largest
    coefficient magnitude and the terminal entry sizes; it vanishes exactly
    when the tridiagonal matrix is singular at the evaluated spectral value.
    """

    degree: int
    coeffs: Tuple[Scalar, ...]
    terminal_residual: float

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient count must equal degree + 1")
        if self.coeffs[0] != 1:
            raise ValueError("recurrence normalization requires p_0 = 1")


@dataclass(frozen=True)
class TridiagonalSequences:
    """Sequences (a_j, b_j, c_j) defining the (n+1) x (n+1) quantization matrix.

    a holds the n+1 diagonal entries, b the n super-diagonal entries, c the n
    sub-diagonal entries.  All entries are stored as SPoly (constants get
    degree 0) so determinant assembly is uniform.
    """

    a: Tuple[SPoly, ...]
    b: Tuple[SPoly, ...]
    c: Tuple[SPoly, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(as_spoly(x) for x in self.a))
        object.__setattr__(self, "b", tuple(as_spoly(x) for x in self.b))
        object.__setattr__(self, "c", tuple(as_spoly(x) for x in self.c))
        if not self.a:
            raise ValueError("diagonal must be non-empty")
        n = len(self.a) - 1
        if len(self.b) != n or len(self.c) != n:
            raise ValueError("off-diagonals must each hold size-1 entries")
        for name in ("a", "b", "c"):
            for entry in getattr(self, name):
                if not entry.is_finite():
                    raise ValueError(f"sequence {name} has a non-finite entry")

    @property
    def size(self) -> int:
        return len(self.a)

    @property
    def is_constant(self) -> bool:
        return all(
            e.is_constant for seq in (self.a, self.b, self.c) for e in seq
        )

    @property
    def max_entry_degree(self) -> int:
        return max(e.degree for seq in (self.a, self.b, self.c) for e in seq)

    def at(self, s: Scalar) -> Tuple[list, list, list]:
        """Substitute the spectral parameter, returning numeric entry lists."""
        return (
            [e(s) for e in self.a],
            [e(s) for e in self.b],
            [e(s) for e in self.c],
        )

    def constant_entries(self) -> Tuple[list, list, list]:
        return (
            [e.constant_value() for e in self.a],
            [e.constant_value() for e in self.b],
            [e.constant_value() for e in self.c],
        )

    def map(self, fn) -> "TridiagonalSequences":
        """Convert every coefficient, e.g. to mpmath.mpf."""
        return TridiagonalSequences(
            a=tuple(e.map(fn) for e in self.a),
            b=tuple(e.map(fn) for e in self.b),
            c=tuple(e.map(fn) for e in self.c),
        )


def _near_nonneg_int(value: float, tol: float = INTEGER_TOL) -> Optional[int]:
    n = round(value)
    if abs(value - n) <= tol and n >= 0:
        return int(n)
    return None


def heunb_degree(params: HeunBParams) -> Optional[int]:
    """Polynomial degree forced by the biconfluent condition gamma - alpha = 2(n+1).

    Returns the non-negative integer n, or None when (gamma - alpha)/2 - 1
    misses an integer by more than 1e-9.
    """
    value = (params.gamma - params.alpha) / 2.0 - 1.0
    return _near_nonneg_int(value)


def heunc_degree(params: HeunCParams) -> Optional[int]:
    """Polynomial degree forced by delta = -(n + 1 + (beta + gamma)/2) alpha.

    Requires alpha != 0; returns None when the resulting n is not a
    non-negative integer within 1e-9.
    """
    if params.alpha == 0:
        raise ValueError("degree condition requires alpha != 0")
    value = -params.delta / params.alpha - 1.0 - 0.5 * (params.beta + params.gamma)
    return _near_nonneg_int(value)


def heunb_sequences(params: HeunBParams, n: int) -> TridiagonalSequences:
    """Recurrence sequences of the degree-n biconfluent polynomial candidate.

        a_j = -(delta + beta (2j + alpha + 1))
        b_j = 2 (j (j + alpha + 2) + alpha + 1)
        c_j = 2 (gamma - alpha - 2j - 2)

    Under the degree condition c_n = 0 exactly, which is why only c_0..c_{n-1}
    enter the matrix.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    al, be, de, ga = params.alpha, params.beta, params.delta, params.gamma
    a = tuple(-(de + be * (2 * j + al + 1)) for j in range(n + 1))
    b = tuple(2 * (j * (j + al + 2) + al + 1) for j in range(n))
    c = tuple(2 * (ga - al - 2 * j - 2) for j in range(n))
    return TridiagonalSequences(a=a, b=b, c=c)


def heunc_sequences(params: HeunCParams, n: int) -> TridiagonalSequences:
    """Recurrence sequences of the degree-n confluent polynomial candidate.

        a_j = mu - j (j - alpha + beta + gamma + 1)
        b_j = (j + 1)(j + beta + 1)
        c_j = (n - j) alpha

    c_n = 0 holds identically, matching the matrix truncation.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    al, be, ga = params.alpha, params.beta, params.gamma
    mu = params.mu
    a = tuple(mu - j * (j - al + be + ga + 1) for j in range(n + 1))
    b = tuple((j + 1) * (j + be + 1) for j in range(n))
    c = tuple((n - j) * al for j in range(n))
    return TridiagonalSequences(a=a, b=b, c=c)


def polynomial_from_recurrence(
    seqs: TridiagonalSequences, s: Optional[Scalar] = None
) -> PolynomialCoefficients:
    """Run the three-term recurrence with p_{-1} = 0, p_0 = 1.

    seqs must be numeric after substituting s (pass s = None only when every
    entry is already constant).  Raises RecurrenceBreakdownError when some
    b_j with j < n vanishes, since p_{j+1} is then undetermined.

    The terminal relation c_{n-1} p_{n-1} + a_n p_n (just a_0 for n = 0) is
    returned as a scaled residual; it is the singularity test for the matrix.
    """
    if s is None:
        if not seqs.is_constant:
            raise ValueError("sequences depend on the spectral parameter; pass s")
        a, b, c = seqs.constant_entries()
    else:
        a, b, c = seqs.at(s)
    n = seqs.size - 1
    for j, bj in enumerate(b):
        if bj == 0:
            raise RecurrenceBreakdownError(f"b_{j} = 0 stalls the recurrence")
    p = [_one_like(a[0])]
    for j in range(n):
        prev = c[j - 1] * p[j - 1] if j >= 1 else 0.0
        p.append(-(prev + a[j] * p[j]) / b[j])
    if n == 0:
        terminal = a[0] * p[0]
        entry_scale = max(abs(a[0]), 1.0)
    else:
        terminal = c[n - 1] * p[n - 1] + a[n] * p[n]
        entry_scale = max(abs(a[n]), abs(c[n - 1]), 1.0)
    coeff_scale = max(abs(pj) for pj in p)
    residual = float(abs(terminal) / (coeff_scale * entry_scale))
    return PolynomialCoefficients(
        degree=n, coeffs=tuple(p), terminal_residual=residual
    )


def _one_like(x: Scalar):
    """A unit of the same scalar family as x (keeps mpf chains in mpf)."""
    try:
        return x / x if x != 0 else x + 1
    except ZeroDivisionError:  # pragma: no cover - defensive
        return 1.0


def _poly_derivatives(coeffs: Sequence[Scalar], z: Scalar) -> Tuple[Scalar, Scalar, Scalar]:
    y = horner(coeffs, z)
    d1 = horner([j * c for j, c in enumerate(coeffs)][1:], z)
    d2 = horner([j * (j - 1) * c for j, c in enumerate(coeffs)][2:], z)
    return y, d1, d2


def heunb_ode_residual(
    params: HeunBParams,
    poly: PolynomialCoefficients,
    z: Scalar,
    relative: bool = False,
) -> float:
    """Absolute residual of the biconfluent equation at z for the candidate poly.

    With relative=True the residual is divided by the sum of the three term
    magnitudes, giving a scale-free figure.
    """
    if z == 0:
        raise ValueError("z = 0 is the regular singular point")
    al, be, ga, de = params.alpha, params.beta, params.gamma, params.delta
    y, d1, d2 = _poly_derivatives(poly.coeffs, z)
    c1 = -2 * z - be + (1 + al) / z
    c0 = ga - al - 2 - ((1 + al) * be + de) / (2 * z)
    res = d2 + c1 * d1 + c0 * y
    if not relative:
        return float(abs(res))
    scale = abs(d2) + abs(c1 * d1) + abs(c0 * y)
    return float(abs(res) / scale) if scale > 0 else float(abs(res))


def heunc_ode_residual(
    params: HeunCParams,
    poly: PolynomialCoefficients,
    z: Scalar,
    relative: bool = False,
) -> float:
    """Absolute residual of the confluent equation at z (z outside {0, 1})."""
    if z == 0 or z == 1:
        raise ValueError("z in {0, 1} are the regular singular points")
    al, be, ga = params.alpha, params.beta, params.gamma
    y, d1, d2 = _poly_derivatives(poly.coeffs, z)
    c1 = al + (be + 1) / z + (ga + 1) / (z - 1)
    c0 = params.mu / z + params.nu / (z - 1)
    res = d2 + c1 * d1 + c0 * y
    if not relative:
        return float(abs(res))
    scale = abs(d2) + abs(c1 * d1) + abs(c0 * y)
    return float(abs(res) / scale) if scale > 0 else float(abs(res))
