"""Generalized hypergeometric series with certified truncation error.

Series are summed term-recursively::

    t_0 = 1,  t_{k+1} = t_k * prod(a_i + k) / prod(b_j + k) * x / (k + 1)

and truncated by one of two rules:

* positive (or absolutely summed) terms: stop once
  ``|t_{k+1}| / (1 - rho) <= tol`` where ``rho`` bounds every later term
  ratio. Term ratios of a hypergeometric series are a rational function of
  ``k`` and so eventually monotone; once the last three ratios move in one
  direction, ``rho = max(ratio_k, lim ratio)`` bounds the remaining ones.
* alternating terms (``x < 0``): after three consecutive decreases of
  ``|t_k|`` the tail is bounded by the first omitted term.

Retained terms are summed with :func:`math.fsum`, so the only rounding left
is in the recursion: after ``k`` steps ``t_k`` carries a relative error of
at most ``(2(p+q)+2) k u`` with ``u`` the unit roundoff. The reported
error bound is the truncation bound plus ``u ((2(p+q)+2) sum_k k |t_k| + |sum|)``.
When the terms grow before they decay, the rounding part can exceed ``tol``;
the bound stays honest and callers decide whether to transform the series.
Truncation stops at ``tol / 2``, leaving the other half for rounding.
"""

import logging
import math
import sys
from dataclasses import dataclass
from typing import List, Sequence

from scipy.special import gammaln, gammasgn

from src.errors import InvalidLowerParameter, NonConvergent
from src.reporting.report import VerificationPoint

logger = logging.getLogger("HeinzConstants.Specfun")

MAX_TERMS = 100_000
TOL_FLOOR = 1e-13
EXACT_POCHHAMMER_MAX = 64
PFAFF_THRESHOLD = -0.5
# consecutive monotone steps required before a tail bound is trusted
MONOTONE_STEPS = 3
UNIT_ROUNDOFF = sys.float_info.epsilon / 2

@dataclass(frozen=True)
class HypergeomSpec:
    """Parameters ``(a; b)`` and argument ``x`` of a pFq evaluation."""
    upper: Sequence[float]
    lower: Sequence[float]
    arg: float

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    def validate(self) -> None:
        """Check the parameter invariants.

        Raises:
            InvalidLowerParameter: a lower parameter is 0, -1, -2, ...
            NonConvergent: the argument lies outside the disc of convergence
        """
        for b in self.lower:
            if _is_nonpositive_integer(b):
                raise InvalidLowerParameter(f"Lower parameter {b} is zero or a negative integer")
        if self.terminating_index() is not None or self.arg == 0:
            return
        if self.p > self.q + 1:
            raise NonConvergent(f"{self.p}F{self.q} diverges for x={self.arg}")
        if self.p == self.q + 1 and abs(self.arg) > 1:
            raise NonConvergent(f"{self.p}F{self.q} requires |x| <= 1, got {self.arg}")

    def terminating_index(self):
        """Smallest ``k`` with ``t_k = 0`` if an upper parameter is 0, -1, ..."""
        stops = [int(-a) for a in self.upper if _is_nonpositive_integer(a)]
        return min(stops) + 1 if stops else None

@dataclass(frozen=True)
class EvalResult:
    """A computed value with an upper bound on its error."""
    value: float
    error_bound: float
    terms_used: int = 1

    def __post_init__(self):
        if self.error_bound < 0:
            raise ValueError(f"Negative error bound {self.error_bound}")

    def scaled(self, factor: float) -> 'EvalResult':
        return EvalResult(self.value * factor, self.error_bound * abs(factor), self.terms_used)

def _is_nonpositive_integer(y: float) -> bool:
    return y <= 0 and float(y).is_integer()

def pochhammer(y: float, k: int) -> float:
    """Rising factorial ``(y)_k = y (y+1) ... (y+k-1)``.

    Exact products for ``k <= 64``; above that the value is accumulated
    from log-gamma with the sign tracked separately.

    Args:
        y: Base
        k: Non-negative number of factors

    Returns:
        float: The rising factorial
    """
    if k < 0:
        raise ValueError(f"Pochhammer order must be non-negative, got {k}")
    if k == 0:
        return 1.0
    if _is_nonpositive_integer(y) and k > -y:
        return 0.0
    if k <= EXACT_POCHHAMMER_MAX:
        product = 1.0
        for j in range(k):
            product *= y + j
        return product
    if y > 0:
        return math.exp(gammaln(y + k) - gammaln(y))
    sign = gammasgn(y + k) * gammasgn(y)
    return float(sign * math.exp(gammaln(y + k) - gammaln(y)))

def pfq(spec: HypergeomSpec, tol: float = 1e-12, max_terms: int = MAX_TERMS) -> EvalResult:
    """Evaluate a generalized hypergeometric series with a certified tail.

    Args:
        spec: Parameters and argument
        tol: Requested absolute error (floored at 1e-13)
        max_terms: Term budget

    Returns:
        EvalResult: Sum, truncation plus rounding bound and number of terms summed

    Raises:
        NonConvergent: the decay test failed within the budget
        InvalidLowerParameter: a lower parameter is a non-positive integer
    """
    spec.validate()
    tol = max(tol, TOL_FLOOR)
    x = float(spec.arg)
    if x == 0:
        return EvalResult(1.0, 0.0, 1)

    upper = [float(a) for a in spec.upper]
    lower = [float(b) for b in spec.lower]
    stop_at = spec.terminating_index()
    if spec.p == spec.q + 1:
        ratio_limit = abs(x)
    else:
        ratio_limit = 0.0
    excess = sum(lower) - sum(upper)
    ops_per_step = 2 * (spec.p + spec.q) + 2

    terms: List[float] = [1.0]
    term = 1.0
    # sum_k k |t_k|, the weight of the recursion's rounding error
    weighted = 0.0
    ratios: List[float] = []
    decreases = 0
    for k in range(max_terms):
        factor = term_ratio(upper, lower, x, k)
        following = term * factor

        if following == 0.0:
            # terminating series or underflow: no truncation error
            logger.debug(f"{spec.p}F{spec.q} terminated after {len(terms)} terms")
            return _finish(terms, 0.0, ops_per_step, weighted)
        if stop_at is not None:
            terms.append(following)
            weighted += (k + 1) * abs(following)
            term = following
            continue

        ratio = abs(factor)
        ratios.append(ratio)
        decreases = decreases + 1 if abs(following) < abs(term) else 0

        bound = _tail_bound(x, term, following, ratios, ratio_limit, decreases, excess, k)
        if bound is not None and bound <= 0.5 * tol:
            result = _finish(terms, bound, ops_per_step, weighted)
            logger.debug(f"{spec.p}F{spec.q}({x}) converged: {len(terms)} terms, "
                         f"tail <= {bound:.2e}, total <= {result.error_bound:.2e}")
            if result.error_bound > tol:
                logger.debug(f"{spec.p}F{spec.q}({x}) is rounding-limited: "
                             f"max |t_k| = {max(abs(t) for t in terms):.2e}")
            return result

        if not math.isfinite(following):
            break
        terms.append(following)
        weighted += (k + 1) * abs(following)
        term = following

    raise NonConvergent(
        f"{spec.p}F{spec.q}{tuple(upper)};{tuple(lower)} at x={x} did not reach "
        f"tol={tol:.1e} within {max_terms} terms"
    )

def term_ratio(upper: Sequence[float], lower: Sequence[float], x: float, k: int) -> float:
    """t_{k+1} / t_k = prod(a_i + k) / prod(b_j + k) * x / (k + 1)."""
    factor = x / (k + 1)
    for a in upper:
        factor *= a + k
    for b in lower:
        factor /= b + k
    return factor

def series_terms(spec: HypergeomSpec, count: int) -> List[float]:
    """The first ``count`` terms of the series, by the term recursion."""
    upper = [float(a) for a in spec.upper]
    lower = [float(b) for b in spec.lower]
    terms = [1.0]
    for k in range(count - 1):
        terms.append(terms[-1] * term_ratio(upper, lower, float(spec.arg), k))
    return terms[:count]

def _finish(terms: List[float], truncation: float, ops_per_step: int, weighted: float) -> EvalResult:
    total = math.fsum(terms)
    rounding = UNIT_ROUNDOFF * (ops_per_step * weighted + abs(total))
    return EvalResult(total, truncation + rounding, len(terms))

def _tail_bound(x: float, term: float, following: float, ratios: List[float],
                ratio_limit: float, decreases: int, excess: float, k: int):
    """Upper bound on the tail starting at ``following``, or None if not yet certified."""
    if x < 0 and decreases >= MONOTONE_STEPS and following * term < 0:
        return abs(following)
    if len(ratios) < MONOTONE_STEPS + 1:
        return None
    recent = ratios[-(MONOTONE_STEPS + 1):]
    steps = [b - a for a, b in zip(recent, recent[1:])]
    if not (all(s <= 0 for s in steps) or all(s >= 0 for s in steps)):
        return None
    rho = max(ratios[-1], ratio_limit)
    if rho < 1:
        return abs(following) / (1 - rho)
    if x > 0 and ratio_limit == 1 and ratios[-1] < 1 and excess > 1:
        # |x| = 1: terms decay like k^(-excess), tail ~ t_{k+1} (k+1) / (excess - 1)
        return abs(following) * (k + 1) / (excess - 1)
    return None

def gauss2f1_neg(a: float, b: float, c: float, x: float, tol: float = 1e-12) -> EvalResult:
    """Evaluate 2F1(a, b; c; x) for x in [-1, 0].

    Below ``x = -0.5`` the Pfaff transformation
    ``2F1(a,b;c;x) = (1-x)^(-a) 2F1(a, c-b; c; x/(x-1))`` moves the argument
    into [1/3, 1/2], where the series converges at least like ``2^-k``.
    Of the two Pfaff forms (``a`` or ``b`` pulled out) the one with
    non-negative upper parameters is tried first; its terms do not change
    sign. Any candidate whose bound misses ``tol`` (terms that grow before
    they decay lose digits to cancellation) is compared with the remaining
    ones and the tightest bound wins.

    Args:
        a: First upper parameter
        b: Second upper parameter
        c: Lower parameter, positive
        x: Argument in [-1, 0]
        tol: Requested absolute error

    Returns:
        EvalResult: Value and error bound
    """
    if c <= 0:
        raise InvalidLowerParameter(f"gauss2f1_neg needs c > 0, got {c}")
    if not -1.0 <= x <= 0.0:
        raise ValueError(f"gauss2f1_neg needs x in [-1, 0], got {x}")
    tol = max(tol, TOL_FLOOR)
    if x == 0:
        return EvalResult(1.0, 0.0, 1)

    candidates = [lambda: _pfaff(a, b, c, x, tol), lambda: _pfaff(b, a, c, x, tol)]
    if c - a >= 0 and c - b < 0:
        candidates.reverse()
    if x >= PFAFF_THRESHOLD:
        candidates.insert(0, lambda: pfq(HypergeomSpec((a, b), (c,), x), tol))

    best = None
    for evaluate in candidates:
        result = evaluate()
        if best is None or result.error_bound < best.error_bound:
            best = result
        if best.error_bound <= tol:
            break
    if best.error_bound > tol:
        logger.warning(f"2F1({a}, {b}; {c}; {x}) certified only to {best.error_bound:.2e}")
    return best

def _pfaff(a: float, b: float, c: float, x: float, tol: float) -> EvalResult:
    """(1-x)^(-a) 2F1(a, c-b; c; x/(x-1))."""
    prefactor = (1.0 - x) ** (-a)
    inner = pfq(HypergeomSpec((a, c - b), (c,), x / (x - 1.0)), tol / prefactor)
    result = inner.scaled(prefactor)
    # rounding of the power and the final product
    return EvalResult(result.value, result.error_bound + 4 * UNIT_ROUNDOFF * abs(result.value),
                      result.terms_used)

def check_transform_3f2_to_4f3(n: int, r: float, tol: float = 1e-10,
                               series_tol: float = 1e-13) -> VerificationPoint:
    """Compare both sides of the 3F2 -> 4F3 transformation of G(r).

    ``G(r) (1 - r^2)`` against
    ``(1 + r^2)^(1 + n/2) 4F3[n/2, (n-1)/2, 1/2, 1 + n/4; n/4, 3/2, (1+n)/2; -r^2]``
    with ``G(r) = 3F2[1, (2+n)/4, (4+n)/4; 3/2, (1+n)/2; 4 r^2 / (1 + r^2)^2]``.

    Returns:
        VerificationPoint: identity record, budget = tol + both error bounds
    """
    if not 0 < r < 1:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    r2 = r * r
    g = pfq(HypergeomSpec((1.0, (2 + n) / 4, (4 + n) / 4), (1.5, (1 + n) / 2),
                          4 * r2 / (1 + r2) ** 2), series_tol)
    f = pfq(HypergeomSpec((n / 2, (n - 1) / 2, 0.5, 1 + n / 4), (n / 4, 1.5, (1 + n) / 2),
                          -r2), series_tol)
    lhs = g.scaled(1 - r2)
    rhs = f.scaled((1 + r2) ** (1 + n / 2))
    return VerificationPoint.identity(
        [n, r], lhs.value, rhs.value, tol + lhs.error_bound + rhs.error_bound,
        label=f"transform-3f2-4f3 n={n} r={r}"
    )

def check_kummer_quadratic(n: int, r: float, tol: float = 1e-10,
                           series_tol: float = 1e-13) -> VerificationPoint:
    """Compare the two closed forms of the radial derivative of U(rN).

    One form carries ``2F1[(1+n)/2, (2+n)/2; (3+n)/2; -r^2]``, the other
    ``(1 + r^2)^(-n/2) 2F1[1/2, 1; (3+n)/2; -r^2]``.

    Returns:
        VerificationPoint: identity record, budget = tol + both error bounds
    """
    if not 0 < r < 1:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    r2 = r * r
    c = (3 + n) / 2
    scale = math.exp(gammaln(1 + n / 2) - gammaln(c)) / math.sqrt(math.pi)
    decay = (1 + r2) ** (-n / 2)

    f_a = gauss2f1_neg((1 + n) / 2, (2 + n) / 2, c, -r2, series_tol)
    f_b = gauss2f1_neg(0.5, 1.0, c, -r2, series_tol)
    form_a = scale * (decay * (1 + n) - (n - 2) * r2 * f_a.value)
    form_b = scale * decay * (1 + n - (n - 2) * r2 * f_b.value)
    budget = tol + scale * abs(n - 2) * r2 * (f_a.error_bound + decay * f_b.error_bound)
    return VerificationPoint.identity(
        [n, r], form_a, form_b, budget, label=f"kummer-quadratic n={n} r={r}"
    )
