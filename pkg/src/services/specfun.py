"""Special-function kernel: log-gamma, Pochhammer symbols, Jacobi polynomials,
terminating hypergeometric series and the analytically continued
Clebsch-Gordan coefficient.

Every function here is pure. Terminating series are summed from sign-tracked
log-magnitude terms so that large Pochhammer products never overflow.
"""

import logging
import math
from typing import Optional, Sequence, Union

import numpy as np
from scipy.special import gammaln, gammasgn

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Relative slack used when deciding that a real parameter is an integer.
INTEGER_TOLERANCE = 1e-9


class DomainError(ValueError):
    """Argument outside the domain an operation supports."""

    pass


class SeriesDivergenceError(DomainError):
    """Hypergeometric series that neither terminates nor converges at unit argument."""

    pass


def nearest_integer(x: float) -> Optional[int]:
    """Return round(x) when x is an integer up to INTEGER_TOLERANCE, else None."""
    r = round(x)
    if abs(x - r) <= INTEGER_TOLERANCE * max(1.0, abs(x)):
        return int(r)
    return None


def nonpositive_integer(x: float) -> Optional[int]:
    """Return n >= 0 when x == -n, else None."""
    r = nearest_integer(x)
    if r is not None and r <= 0:
        return -r
    return None


def ln_gamma(x: float) -> float:
    """
    Natural log of the gamma function for positive arguments.

    Args:
        x: Positive real argument

    Returns:
        ln Gamma(x)

    Raises:
        DomainError: If x <= 0
    """
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return float(gammaln(x))


def ln_factorial(x: float) -> float:
    """ln(x!) = ln Gamma(x + 1) for real x >= 0 (a tiny negative rounding residue is clamped)."""
    if x < 0:
        if x > -INTEGER_TOLERANCE:
            return 0.0
        raise DomainError(f"Factorial of negative argument {x}")
    return ln_gamma(x + 1.0)


def signed_ln_gamma(x: float) -> tuple[float, float]:
    """Sign and log-magnitude of Gamma(x) for any x that is not a pole."""
    if nonpositive_integer(x) is not None:
        raise DomainError(f"Gamma has a pole at {x}")
    return float(gammasgn(x)), float(gammaln(x))


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1."""
    if n < 0:
        raise DomainError(f"pochhammer requires n >= 0, got {n}")
    return math.prod(a + k for k in range(n)) if n else 1.0


def jacobi_p(n: int, a: float, b: float, x: ArrayLike) -> ArrayLike:
    """
    Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence in n.

    Args:
        n: Degree, n >= 0
        a: First parameter, a > -1 (exponent of 1 - x in the weight)
        b: Second parameter, b > -1 (exponent of 1 + x in the weight)
        x: Scalar or array argument

    Returns:
        P_n^{(a,b)}(x), same shape as x

    Raises:
        DomainError: If a <= -1, b <= -1 or n < 0
    """
    if n < 0:
        raise DomainError(f"jacobi_p requires n >= 0, got {n}")
    if a <= -1 or b <= -1:
        raise DomainError(f"jacobi_p requires a, b > -1, got a={a}, b={b}")

    x = np.asarray(x, dtype=float) if not np.isscalar(x) else float(x)
    p_prev = np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    if n == 0:
        return p_prev
    p_curr = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0)

    ab = a + b
    for k in range(2, n + 1):
        two_k_ab = 2.0 * k + ab
        c1 = 2.0 * k * (k + ab) * (two_k_ab - 2.0)
        c2 = (two_k_ab - 1.0) * (two_k_ab * (two_k_ab - 2.0) * x + a * a - b * b)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * two_k_ab
        p_prev, p_curr = p_curr, (c2 * p_curr - c3 * p_prev) / c1
    return p_curr


def hyp1f1_terminating(n: int, c: float, x: ArrayLike) -> ArrayLike:
    """
    Terminating confluent hypergeometric function F(-n; c; x).

    For scalar x <= 0 every term has the same sign and the finite sum is
    added with math.fsum. Otherwise the Laguerre-type recurrence
    (c + k) F_{k+1} = (2k + c - x) F_k - k F_{k-1} is used, which avoids
    the cancellation of the alternating sum.

    Args:
        n: Degree, n >= 0
        c: Lower parameter, c > 0
        x: Scalar or array argument

    Returns:
        F(-n; c; x), same shape as x

    Raises:
        DomainError: If c <= 0 or n < 0
    """
    if n < 0:
        raise DomainError(f"hyp1f1_terminating requires n >= 0, got {n}")
    if not c > 0:
        raise DomainError(f"hyp1f1_terminating requires c > 0, got {c}")

    if np.isscalar(x) and float(x) <= 0.0:
        x = float(x)
        terms = [1.0]
        term = 1.0
        for k in range(n):
            term *= (k - n) * x / ((c + k) * (k + 1))
            terms.append(term)
        return math.fsum(terms)

    x = np.asarray(x, dtype=float) if not np.isscalar(x) else float(x)
    f_prev = np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    if n == 0:
        return f_prev
    f_curr = 1.0 - x / c
    for k in range(1, n):
        f_prev, f_curr = f_curr, ((2.0 * k + c - x) * f_curr - k * f_prev) / (c + k)
    return f_curr


def _signed_log_sum(signs: Sequence[float], logs: Sequence[float]) -> float:
    """Sum sign_k * exp(log_k) without overflow."""
    if not logs:
        return 0.0
    top = max(logs)
    if top == -math.inf:
        return 0.0
    return math.fsum(s * math.exp(l - top) for s, l in zip(signs, logs)) * math.exp(top)


def _termination_index(upper: Sequence[float]) -> Optional[int]:
    """Smallest n among upper parameters equal to -n (shortest exact sum)."""
    candidates = [k for k in (nonpositive_integer(p) for p in upper) if k is not None]
    return min(candidates) if candidates else None


def _terminating_sum(upper: Sequence[float], lower: Sequence[float], K: int) -> float:
    """Sum_{k<=K} prod (upper)_k / (prod (lower)_k k!) in sign-tracked log form."""
    signs = [1.0]
    logs = [0.0]
    sign = 1.0
    log_mag = 0.0
    for k in range(1, K + 1):
        ratio_factors = [p + k - 1 for p in upper]
        denom_factors = [q + k - 1 for q in lower] + [float(k)]
        for f in ratio_factors:
            if f == 0.0:
                return _signed_log_sum(signs, logs)
            sign *= math.copysign(1.0, f)
            log_mag += math.log(abs(f))
        for f in denom_factors:
            sign *= math.copysign(1.0, f)
            log_mag -= math.log(abs(f))
        signs.append(sign)
        logs.append(log_mag)
    return _signed_log_sum(signs, logs)


def _check_poles(lower: Sequence[float], K: int) -> None:
    for q in lower:
        pole = nonpositive_integer(q)
        if pole is not None and pole < K:
            raise DomainError(
                f"Lower parameter {q} produces a pole at term {pole + 1} inside the {K}-term sum"
            )


def gauss_2f1_unit(a: float, b: float, c: float) -> float:
    """
    Gauss hypergeometric function 2F1(a, b; c; 1).

    Terminating series (a or b a nonpositive integer) are summed directly;
    otherwise the Gauss summation Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)) is used.

    Raises:
        SeriesDivergenceError: If the series does not terminate and c - a - b <= 0
        DomainError: If c is a pole inside a terminating sum
    """
    K = _termination_index([a, b])
    if K is not None:
        _check_poles([c], K)
        return _terminating_sum([a, b], [c], K)

    if not c - a - b > 0:
        raise SeriesDivergenceError(
            f"2F1({a}, {b}; {c}; 1) diverges: c - a - b = {c - a - b} <= 0"
        )
    for denom_arg in (c - a, c - b):
        if nonpositive_integer(denom_arg) is not None:
            return 0.0
    sign_c, log_c = signed_ln_gamma(c)
    sign_s, log_s = signed_ln_gamma(c - a - b)
    sign_1, log_1 = signed_ln_gamma(c - a)
    sign_2, log_2 = signed_ln_gamma(c - b)
    return sign_c * sign_s * sign_1 * sign_2 * math.exp(log_c + log_s - log_1 - log_2)


def hyp3f2_unit_terminating(a1: float, a2: float, a3: float, b1: float, b2: float) -> float:
    """
    Terminating 3F2(a1, a2, a3; b1, b2 | 1).

    The sum stops at the smallest n with some a_i = -n. A lower parameter
    equal to -p is allowed as long as p >= n, i.e. the pole lies beyond
    the last term.

    Raises:
        DomainError: If no upper parameter is a nonpositive integer, or a
            lower parameter puts a pole inside the summation range
    """
    upper = [a1, a2, a3]
    lower = [b1, b2]
    K = _termination_index(upper)
    if K is None:
        raise DomainError(f"3F2({a1}, {a2}, {a3}; {b1}, {b2} | 1) does not terminate")
    _check_poles(lower, K)
    return _terminating_sum(upper, lower, K)


def _is_half_integer(x: float) -> bool:
    return nearest_integer(2.0 * x) is not None


def _cg_series(a: float, alpha: float, b: float, beta: float, c: float, gamma: float) -> float:
    """Clebsch-Gordan coefficient from the terminating 3F2 representation, factorials read as Gamma(x+1)."""
    n = nearest_integer(a - alpha)
    numerator = [b - a + c, a + alpha, b + beta, c + gamma]
    denominator = [b - beta, c - gamma, a + b - c, a - b + c, a + b + c + 1.0]
    for arg in numerator + denominator + [a + b - gamma, b - a + gamma]:
        if arg < -INTEGER_TOLERANCE:
            raise DomainError(
                f"Negative factorial argument {arg} in C({a},{alpha};{b},{beta}|{c},{gamma})"
            )
    if not 2.0 * c + 1.0 > 0:
        raise DomainError(f"2c + 1 must be positive, got c={c}")

    log_root = 0.5 * (
        math.log(2.0 * c + 1.0)
        + sum(ln_factorial(x) for x in numerator)
        - sum(ln_factorial(x) for x in denominator)
    )
    log_rest = ln_factorial(a + b - gamma) - ln_factorial(b - a + gamma) - 0.5 * ln_factorial(n)
    series = hyp3f2_unit_terminating(
        -float(n), c + gamma + 1.0, gamma - c, gamma - a - b, b - a + gamma + 1.0
    )
    sign = -1.0 if n % 2 else 1.0
    return sign * math.exp(log_root + log_rest) * series


def _standard_cg(a: float, alpha: float, b: float, beta: float, c: float, gamma: float) -> float:
    """Conventional su(2) arguments: selection rules, then symmetries into the series' safe region."""
    tol = INTEGER_TOLERANCE
    if abs(alpha) > a + tol or abs(beta) > b + tol or abs(gamma) > c + tol:
        return 0.0
    if c > a + b + tol or c < abs(a - b) - tol:
        return 0.0
    if nearest_integer(a + b - c) is None:
        return 0.0
    phase = -1.0 if nearest_integer(a + b - c) % 2 else 1.0
    if gamma < -tol:
        return phase * _standard_cg(a, -alpha, b, -beta, c, -gamma)
    if b - a + gamma < -tol:
        return phase * _standard_cg(b, beta, a, alpha, c, gamma)
    return _cg_series(a, alpha, b, beta, c, gamma)


def clebsch_gordan_continued(
    a: float, alpha: float, b: float, beta: float, c: float, gamma: float
) -> float:
    """
    Clebsch-Gordan coefficient C^{c gamma}_{a alpha; b beta} continued to real arguments.

    Uses the terminating 3F2 representation with phase (-1)^{a-alpha}; every
    factorial x! is Gamma(x + 1). Conventional integer or half-integer
    arguments reproduce the standard Condon-Shortley values, including the
    ones outside the representation's direct range, which are reached
    through the exchange and reflection symmetries.

    Args:
        a, alpha, b, beta, c, gamma: Real arguments with integer differences

    Returns:
        The coefficient; exactly 0.0 when gamma != alpha + beta

    Raises:
        DomainError: If a - alpha is not a nonnegative integer, or a factorial
            outside the terminating sum receives a negative argument
    """
    if abs(gamma - (alpha + beta)) > INTEGER_TOLERANCE * max(1.0, abs(gamma)):
        return 0.0
    n = nearest_integer(a - alpha)
    if n is None or n < 0:
        raise DomainError(f"a - alpha must be a nonnegative integer, got {a - alpha}")
    if all(_is_half_integer(x) for x in (a, alpha, b, beta, c, gamma)):
        return _standard_cg(a, alpha, b, beta, c, gamma)
    return _cg_series(a, alpha, b, beta, c, gamma)


def cg_lowering_prediction(
    a: float, alpha: float, b: float, beta: float, c: float, gamma: float
) -> float:
    """
    Value of C^{c gamma} predicted from C^{c-1 gamma} and C^{c-2 gamma} by the
    c-lowering three-term recurrence.

    Requires c - gamma >= 2 so that all three coefficients exist.
    """
    outer = (4.0 * c * c * (2.0 * c + 1.0) * (2.0 * c - 1.0)) / (
        (c + gamma) * (c - gamma) * (b - a + c) * (a - b + c) * (a + b - c + 1.0) * (a + b + c + 1.0)
    )
    inner = (
        (c - gamma - 1.0) * (c + gamma - 1.0) * (b - a + c - 1.0) * (a - b + c - 1.0)
        * (a + b - c + 2.0) * (a + b + c)
    ) / (4.0 * (c - 1.0) ** 2 * (2.0 * c - 3.0) * (2.0 * c - 1.0))
    if outer < 0 or inner < 0:
        raise DomainError(f"c-lowering recurrence undefined at c={c}, gamma={gamma}")
    middle = ((alpha - beta) * c * (c - 1.0) - gamma * a * (a + 1.0) + gamma * b * (b + 1.0)) / (
        2.0 * c * (c - 1.0)
    )
    c_two_below = clebsch_gordan_continued(a, alpha, b, beta, c - 2.0, gamma)
    c_one_below = clebsch_gordan_continued(a, alpha, b, beta, c - 1.0, gamma)
    return -math.sqrt(outer) * (math.sqrt(inner) * c_two_below - middle * c_one_below)


def cg_projection_recurrence(
    a: float, alpha: float, b: float, beta: float, c: float, gamma: float
) -> tuple[float, float]:
    """
    Both sides of the J^2 recurrence
    [c(c+1) - a(a+1) - b(b+1) - 2 alpha beta] C_{alpha,beta}
        = sqrt(...) C_{alpha-1,beta+1} + sqrt(...) C_{alpha+1,beta-1}.

    Neighbours whose coefficient vanishes are never evaluated.
    """
    lhs = (c * (c + 1.0) - a * (a + 1.0) - b * (b + 1.0) - 2.0 * alpha * beta) * (
        clebsch_gordan_continued(a, alpha, b, beta, c, gamma)
    )
    down = (a + alpha) * (a - alpha + 1.0) * (b - beta) * (b + beta + 1.0)
    up = (a - alpha) * (a + alpha + 1.0) * (b + beta) * (b - beta + 1.0)
    rhs = 0.0
    if abs(down) > INTEGER_TOLERANCE:
        rhs += math.sqrt(down) * clebsch_gordan_continued(a, alpha - 1.0, b, beta + 1.0, c, gamma)
    if abs(up) > INTEGER_TOLERANCE:
        rhs += math.sqrt(up) * clebsch_gordan_continued(a, alpha + 1.0, b, beta - 1.0, c, gamma)
    return lhs, rhs
