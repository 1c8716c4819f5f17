"""Closed-form moments of the three operator families.

Raw moments of the Jain operator come from the cumulants of the
generalized-Poisson law (pgf G(u) = exp(theta (z-1)) with z = u e^{beta (z-1)},
theta = nx), which gives, with a = 1/(1-beta):

    P(t^0) = 1
    P(t^1) = a x
    P(t^2) = a^2 x^2 + a^3 x / n
    P(t^3) = a^3 x^3 + 3 a^4 x^2 / n + (1+2b) a^5 x / n^2
    P(t^4) = a^4 x^4 + 6 a^5 x^3 / n + (7+8b) a^6 x^2 / n^2
             + (1+8b+6b^2) a^7 x / n^3

These are exact (verified against 60-digit summation) and serve as the
authoritative oracle.  The historically printed third/fourth-moment
coefficient polynomials (see :func:`jain_moment_display`) disagree with the
exact values for beta > 0; they are kept verbatim so the gap is measurable,
in the same exact-vs-display split used for the hybrid operator below.

Raw moments of the hybrid (Jain-Baskakov) operator follow from the exact
recombination of kernel monomial integrals,

    D(t^m, x) = n^m / ((n-2c)...(n-(m+1)c)) *
                sum_k coef(m,k) P(t^k, x) / n^(m-k),

where coef are the rising-factorial expansion coefficients
(v(v+1)...(v+m-1) = sum_k coef(m,k) v^k); this requires n > (m+1)c.

King-type moments are the hybrid moments evaluated at the transformed point
r_n(x) = (n-2c)(1-beta)x/n, which preserves constants and the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, ThresholdError
from .params import OperatorKind, OperatorParams

# v(v+1)...(v+m-1) = sum_k RISING_COEF[m][k] * v^k  (k = 1..m)
RISING_COEF = {
    1: {1: 1.0},
    2: {1: 1.0, 2: 1.0},
    3: {1: 2.0, 2: 3.0, 3: 1.0},
    4: {1: 6.0, 2: 11.0, 3: 6.0, 4: 1.0},
}


def _check_order(m: int, top: int = 4) -> None:
    if not (0 <= m <= top):
        raise DomainError(f"moment order must be in 0..{top}, got {m}")


def _check_x(x: float) -> None:
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")


def jain_moment(params: OperatorParams, m: int, x: float) -> float:
    """Exact raw moment P(t^m, x) of the Jain operator, m = 0..4."""
    _check_order(m)
    _check_x(x)
    n, b = params.n, params.beta
    a = 1.0 / (1.0 - b)
    if m == 0:
        return 1.0
    if m == 1:
        return a * x
    if m == 2:
        return a * a * x * x + a**3 * x / n
    if m == 3:
        return a**3 * x**3 + 3 * a**4 * x**2 / n + (1 + 2 * b) * a**5 * x / n**2
    return (
        a**4 * x**4
        + 6 * a**5 * x**3 / n
        + (7 + 8 * b) * a**6 * x**2 / n**2
        + (1 + 8 * b + 6 * b * b) * a**7 * x / n**3
    )


def jain_moment_display(params: OperatorParams, m: int, x: float) -> float:
    """The printed third/fourth Jain moment formulas, verbatim (reference only).

    They agree with :func:`jain_moment` at beta = 0 but not for beta > 0;
    tests measure the gap rather than asserting equality.
    """
    if m not in (3, 4):
        raise DomainError(f"display formulas exist for m in {{3, 4}}, got {m}")
    _check_x(x)
    n, b = params.n, params.beta
    a = 1.0 / (1.0 - b)
    if m == 3:
        c3 = 6 * b**4 - 6 * b**3 - 2 * b - 1
        return a**3 * x**3 + 3 * a**4 * x**2 / n - c3 * a**5 * x / n**2
    c2 = 36 * b**4 - 72 * b**3 + 36 * b**2 - 8 * b - 7
    c1 = 105 * b**5 - 14 * b**4 - 2 * b**3 + 12 * b**2 + 8 * b + 1
    return (
        a**4 * x**4
        + 6 * a**5 * x**3 / n
        - c2 * a**6 * x**2 / n**2
        + c1 * a**7 * x / n**3
    )


def _d_prefactor(params: OperatorParams, m: int) -> float:
    n, c = params.n, params.c
    denom = 1.0
    for i in range(2, m + 2):
        denom *= n - i * c
    return float(n**m / denom)


def d_moment_exact(params: OperatorParams, m: int, x: float) -> float:
    """Exact raw moment D(t^m, x) of the hybrid operator via recombination.

    Authoritative oracle for the operator's monomial values; needs
    n > (m+1)c.
    """
    _check_order(m)
    _check_x(x)
    if m == 0:
        return 1.0
    params.require_order(m)
    n = params.n
    terms = [
        coef * jain_moment(params, k, x) / n ** (m - k)
        for k, coef in RISING_COEF[m].items()
    ]
    return _d_prefactor(params, m) * math.fsum(terms)


def d_moment_display(params: OperatorParams, m: int, x: float) -> float:
    """The printed asymptotic main terms for D(t^3) and D(t^4), verbatim.

    Reference only: the t^3 display carries a leading-sign defect (its
    x^3 n^3 term enters negatively where the exact recombination is
    positive), so its gap to :func:`d_moment_exact` does not vanish.
    """
    if m not in (3, 4):
        raise DomainError(f"display formulas exist for m in {{3, 4}}, got {m}")
    _check_x(x)
    params.require_order(m)
    n, c, b = params.n, params.c, params.beta
    q = b * b - 2 * b + 2
    if m == 3:
        num = n**2 * x**2 * (-(1 - b) * x * n + 3 * q)
        return num / ((1 - b) ** 4 * (n - 2 * c) * (n - 3 * c) * (n - 4 * c))
    num = n**3 * x**3 * ((1 - b) * x * n + 6 * q)
    return num / (
        (1 - b) ** 5 * (n - 2 * c) * (n - 3 * c) * (n - 4 * c) * (n - 5 * c)
    )


@dataclass(frozen=True)
class CentralMoments:
    """Central moments about x: mu1 = D(t-x), mu2 = D((t-x)^2), mu4 = D((t-x)^4)."""

    mu1: float
    mu2: float
    mu4: float
    x: float
    params: OperatorParams


def d_central_moment(params: OperatorParams, k: int, x: float) -> float:
    """Exact central moment of the hybrid operator, k in {1, 2, 4}.

    mu1 and mu2 are closed-form (they are exact displays); mu4 is the
    binomial expansion over exact raw moments, fsum-compensated against the
    near-cancellation of the (t-x)^4 terms.
    """
    _check_x(x)
    n, c, b = params.n, params.c, params.beta
    if k == 1:
        params.require_order(1)
        return x * (n * b + 2 * c * (1 - b)) / ((n - 2 * c) * (1 - b))
    if k == 2:
        params.require_order(2)
        num_x2 = (
            n**2 * b**2
            + n * (c + 4 * c * b - 5 * c * b**2)
            + 6 * c**2 - 12 * c**2 * b + 6 * c**2 * b**2
        )
        return (
            x * x * num_x2 / ((n - 2 * c) * (n - 3 * c) * (1 - b) ** 2)
            + n * x * (2 - 2 * b + b * b) / ((n - 2 * c) * (n - 3 * c) * (1 - b) ** 3)
        )
    if k == 4:
        params.require_order(4)
        return math.fsum(
            math.comb(4, j) * (-x) ** (4 - j) * d_moment_exact(params, j, x)
            for j in range(5)
        )
    raise DomainError(f"central moments implemented for k in {{1, 2, 4}}, got {k}")


def d_central_moments(params: OperatorParams, x: float) -> CentralMoments:
    """All of mu1, mu2, mu4 (therefore requires n > 5c)."""
    params.require_order(4)
    return CentralMoments(
        mu1=d_central_moment(params, 1, x),
        mu2=d_central_moment(params, 2, x),
        mu4=d_central_moment(params, 4, x),
        x=x,
        params=params,
    )


def d_central_moment4_display(params: OperatorParams, x: float) -> float:
    """The printed asymptotic mu4 main term, verbatim (reference only)."""
    _check_x(x)
    params.require_order(4)
    n, c, b = params.n, params.c, params.beta
    num = (1 - b) * n**3 * b**2 * x**4 * (2 * c * (3 + 4 * b - 7 * b**2) + b**2 * n) + (
        6 * n**3 * b**2 * x**2 * (b * b - 2 * b + 2)
    )
    return num / (
        (n - 2 * c) * (n - 3 * c) * (n - 4 * c) * (n - 5 * c) * (1 - b) ** 5
    )


def king_transform(params: OperatorParams, x: float) -> float:
    """r_n(x) = (n-2c)(1-beta) x / n: the point transform that makes the
    King-type operator reproduce constants and the identity exactly."""
    _check_x(x)
    if not (params.n > 2 * params.c):
        raise ThresholdError(
            f"king transform needs n > 2c (n={params.n}, c={params.c})"
        )
    return (params.n - 2 * params.c) * (1.0 - params.beta) * x / params.n


def _king_require(params: OperatorParams, m: int) -> None:
    # m <= 2 needs n > 3c; m = 3 needs n > 4c; m = 4 needs n > 5c.
    params.require_order(max(m, 2))


def king_moment(params: OperatorParams, m: int, x: float) -> float:
    """Exact raw moment of the King-type operator.

    m = 0, 1 are algebraic identities (1 and x); higher orders compose the
    exact hybrid recombination with the point transform.
    """
    _check_order(m)
    _check_x(x)
    _king_require(params, m)
    if m == 0:
        return 1.0
    if m == 1:
        return float(x)
    if m == 2:
        n, c, b = params.n, params.c, params.beta
        return (n - 2 * c) * x * x / (n - 3 * c) + (2 - 2 * b + b * b) * x / (
            (n - 3 * c) * (1 - b) ** 2
        )
    return d_moment_exact(params, m, king_transform(params, x))


def king_moment_display(params: OperatorParams, m: int, x: float) -> float:
    """The printed asymptotic King t^3/t^4 main terms, verbatim (reference only)."""
    if m not in (3, 4):
        raise DomainError(f"display formulas exist for m in {{3, 4}}, got {m}")
    _check_x(x)
    _king_require(params, m)
    n, c, b = params.n, params.c, params.beta
    q = b * b - 2 * b + 2
    if m == 3:
        num = x**2 * n * ((1 - b * b) * (n - 4 * c) * x + 3 * q)
        return num / ((1 - b) ** 2 * (n - 3 * c) * (n - 4 * c))
    num = n**2 * x**3 * ((1 - b) ** 2 * (n - 6 * c) * x + 6 * q)
    return num / ((1 - b) ** 2 * (n - 3 * c) * (n - 4 * c) * (n - 5 * c))


def king_central_moment(params: OperatorParams, k: int, x: float) -> float:
    """Exact King central moments: mu*1 = 0, mu*2 closed form, mu*4 binomial."""
    _check_x(x)
    if k == 1:
        _king_require(params, 1)
        return 0.0
    if k == 2:
        _king_require(params, 2)
        n, c, b = params.n, params.c, params.beta
        return c * x * x / (n - 3 * c) + (2 - 2 * b + b * b) * x / (
            (n - 3 * c) * (1 - b) ** 2
        )
    if k == 4:
        params.require_order(4)
        return math.fsum(
            math.comb(4, j) * (-x) ** (4 - j) * king_moment(params, j, x)
            for j in range(5)
        )
    raise DomainError(f"central moments implemented for k in {{1, 2, 4}}, got {k}")


def king_central_moments(params: OperatorParams, x: float) -> CentralMoments:
    params.require_order(4)
    return CentralMoments(
        mu1=king_central_moment(params, 1, x),
        mu2=king_central_moment(params, 2, x),
        mu4=king_central_moment(params, 4, x),
        x=x,
        params=params,
    )


def closed_moment(kind: OperatorKind, params: OperatorParams, m: int, x: float) -> float:
    """Dispatch the exact raw moment for any operator kind."""
    kind = OperatorKind(kind)
    if kind is OperatorKind.JAIN:
        return jain_moment(params, m, x)
    if kind is OperatorKind.JAIN_BASKAKOV:
        return d_moment_exact(params, m, x)
    return king_moment(params, m, x)


def display_moment(
    kind: OperatorKind, params: OperatorParams, m: int, x: float
) -> Optional[float]:
    """Dispatch the verbatim displayed t^3/t^4 formula, or None if not defined."""
    kind = OperatorKind(kind)
    if m not in (3, 4):
        return None
    if kind is OperatorKind.JAIN:
        return jain_moment_display(params, m, x)
    if kind is OperatorKind.JAIN_BASKAKOV:
        return d_moment_display(params, m, x)
    return king_moment_display(params, m, x)


@dataclass(frozen=True)
class MomentReport:
    """Closed-form vs numeric moment with relative error.

    formula_class is "exact" when closed_form is the authoritative oracle
    and "asymptotic" when it is a displayed main-term/reference formula.
    """

    kind: OperatorKind
    order: int
    x: float
    closed_form: float
    numeric: float
    rel_error: float
    formula_class: str

    @staticmethod
    def make(kind, order, x, closed_form, numeric, formula_class="exact"):
        rel = abs(closed_form - numeric) / max(1.0, abs(closed_form))
        return MomentReport(
            kind=OperatorKind(kind),
            order=order,
            x=x,
            closed_form=closed_form,
            numeric=numeric,
            rel_error=rel,
            formula_class=formula_class,
        )
