"""Exact power-series and Hilbert-series arithmetic over the integers.

Everything here is integer arithmetic on coefficient lists; no floating
point is used anywhere.  Polynomials are tuples of ints indexed by degree.
A Hilbert series is stored as an integer numerator polynomial over a
denominator that is a multiset of exponents e, one per factor (1 - t^e).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ReconstructionError

# ---------------------------------------------------------------------------
# integer polynomial helpers (tuples indexed by degree)


def poly_trim(p):
    """Drop trailing zero coefficients; the zero polynomial becomes ()."""
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim(
        [(p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n)]
    )


def poly_mul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_mul_truncated(p, q, bound):
    """Product of p and q with all terms of degree > bound discarded."""
    out = [0] * (bound + 1)
    for i, a in enumerate(p):
        if a == 0 or i > bound:
            continue
        for j, b in enumerate(q):
            if i + j > bound:
                break
            out[i + j] += a * b
    return out


def poly_eval_one(p):
    return sum(p)


def poly_divide_one_minus_te(p, e):
    """Exact quotient p / (1 - t^e), or None when the division is not exact.

    Uses the recurrence q_k = p_k + q_{k-e}; the division is exact iff the
    recurrence output vanishes on the top e degrees.
    """
    p = poly_trim(p)
    if not p:
        return ()
    d = len(p) - 1
    if d < e:
        return None
    q = [0] * (d + 1)
    for k in range(d + 1):
        q[k] = p[k] + (q[k - e] if k >= e else 0)
    if any(q[k] != 0 for k in range(d - e + 1, d + 1)):
        return None
    return poly_trim(q[: d - e + 1])


def vanishing_order_at_one(p):
    """Multiplicity of t = 1 as a root of the integer polynomial p."""
    p = poly_trim(p)
    if not p:
        raise ValueError("zero polynomial has no well-defined vanishing order")
    order = 0
    while poly_eval_one(p) == 0:
        p = poly_divide_one_minus_te(p, 1)
        order += 1
    return order


def one_minus_te_product(exponents):
    """Expanded integer polynomial for the product of (1 - t^e)."""
    out = (1,)
    for e in exponents:
        factor = [0] * (e + 1)
        factor[0], factor[e] = 1, -1
        out = poly_mul(out, tuple(factor))
    return out


def binomial_poly_one_minus_t2(ell):
    """(1 - t^2)^ell expanded, via the binomial theorem."""
    return one_minus_te_product([2] * ell)


def render_poly(p, var="t"):
    """Human-readable form of an integer polynomial, e.g. 1 + 4t^2 - t^3."""
    p = poly_trim(p)
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            term = str(mag)
        else:
            tk = var if k == 1 else f"{var}^{k}"
            term = tk if mag == 1 else f"{mag}*{tk}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series known exactly up to and including degree ``bound``.

    coeffs[k] is the coefficient of t^k; len(coeffs) == bound + 1.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a truncated series needs at least the degree-0 term")

    @property
    def bound(self):
        return len(self.coeffs) - 1

    def coeff(self, k):
        if not 0 <= k <= self.bound:
            raise IndexError(f"coefficient {k} outside known range 0..{self.bound}")
        return self.coeffs[k]

    def mul_poly(self, p):
        """Multiply by an integer polynomial, truncating at the same bound."""
        return TruncatedSeries(tuple(poly_mul_truncated(self.coeffs, p, self.bound)))

    def geometric_mul(self, e):
        """Multiply by 1/(1 - t^e) (prefix-sum with stride e)."""
        c = list(self.coeffs)
        for k in range(e, len(c)):
            c[k] += c[k - e]
        return TruncatedSeries(tuple(c))

    def truncate(self, bound):
        if bound > self.bound:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: bound + 1])

    def __str__(self):
        return f"{render_poly(self.coeffs)} + O(t^{self.bound + 1})"


@dataclass(frozen=True)
class HilbertSeries:
    """numerator(t) / prod_{e in denominator} (1 - t^e), exactly.

    The representation is kept as constructed (no silent cancellation), so a
    series built as (1-t^2)^3/(1-t)^10 prints that way; ``canonical()``
    returns the equivalent representation with every possible (1 - t^e)
    factor cancelled, which is what the numeric invariants are read from.
    """

    numerator: tuple[int, ...]
    denominator: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "numerator", poly_trim(self.numerator))
        den = tuple(sorted(int(e) for e in self.denominator))
        if any(e < 1 for e in den):
            raise ValueError("denominator exponents must be positive integers")
        object.__setattr__(self, "denominator", den)

    # -- structure ---------------------------------------------------------

    def canonical(self):
        """Cancel (1 - t^e) factors shared with the numerator, greedily.

        Iterates over denominator elements in sorted order and restarts after
        any successful division, so the result does not depend on the input
        representation.
        """
        num = self.numerator
        den = list(self.denominator)
        changed = True
        while changed and num:
            changed = False
            for i, e in enumerate(den):
                q = poly_divide_one_minus_te(num, e)
                if q is not None:
                    num = q
                    del den[i]
                    changed = True
                    break
        return HilbertSeries(num, tuple(den))

    @property
    def dimension(self):
        """Order of the pole at t = 1 (Krull dimension for genuine series)."""
        if not self.numerator:
            raise ValueError("the zero series has no dimension")
        c = self.canonical()
        return len(c.denominator) - vanishing_order_at_one(c.numerator)

    @property
    def a_invariant(self):
        """Degree at infinity: deg(numerator) - sum(denominator exponents).

        Independent of the representation, since multiplying numerator and
        denominator by (1 - t^e) shifts both terms by e.
        """
        if not self.numerator:
            raise ValueError("the zero series has no a-invariant")
        return len(self.numerator) - 1 - sum(self.denominator)

    # -- arithmetic --------------------------------------------------------

    def expand(self, bound):
        """Truncated power-series expansion up to degree ``bound``."""
        if bound < 0:
            raise ValueError("expansion bound must be >= 0")
        c = [0] * (bound + 1)
        for k, a in enumerate(self.numerator[: bound + 1]):
            c[k] = a
        for e in self.denominator:
            for k in range(e, bound + 1):
                c[k] += c[k - e]
        return TruncatedSeries(tuple(c))

    def equals(self, other):
        """Equality as rational functions (cross-multiplication)."""
        left = poly_mul(self.numerator, one_minus_te_product(other.denominator))
        right = poly_mul(other.numerator, one_minus_te_product(self.denominator))
        return left == right

    def value_at(self, t):
        """Exact evaluation at a rational point away from poles."""
        t = Fraction(t)
        num = sum(c * t**k for k, c in enumerate(self.numerator))
        den = Fraction(1)
        for e in self.denominator:
            den *= 1 - t**e
        return Fraction(num, den)

    def __str__(self):
        num = render_poly(self.numerator)
        if not self.denominator:
            return num
        factors = []
        for e, m in sorted(Counter(self.denominator).items()):
            base = "(1-t)" if e == 1 else f"(1-t^{e})"
            factors.append(base if m == 1 else f"{base}^{m}")
        return f"({num}) / {' '.join(factors)}"


def expand(series, bound):
    """Module-level alias for HilbertSeries.expand."""
    return series.expand(bound)


def reconstruct(series, denominator, guard=4):
    """Recover a closed form from a truncated expansion.

    Multiplies the truncation by prod (1 - t^e); if the product vanishes in
    degrees bound - guard + 1 .. bound the surviving prefix is accepted as
    the numerator, otherwise the candidate denominator is rejected.

    Args:
        series: TruncatedSeries with series.bound >= sum(denominator) + guard.
        denominator: iterable of exponents e, one per (1 - t^e) factor.
        guard: number of trailing degrees that must vanish (>= 1).

    Returns:
        HilbertSeries with exactly the given denominator.

    Raises:
        ValueError: guard < 1 or the truncation is too short to test.
        ReconstructionError: the guard window did not vanish.
    """
    den = tuple(sorted(int(e) for e in denominator))
    if guard < 1:
        raise ValueError("guard must be at least 1")
    if series.bound < sum(den) + guard:
        raise ValueError(
            f"truncation bound {series.bound} too small for denominator degree "
            f"{sum(den)} with guard {guard}"
        )
    product = poly_mul_truncated(
        series.coeffs, one_minus_te_product(den), series.bound
    )
    cutoff = series.bound - guard
    if any(product[k] != 0 for k in range(cutoff + 1, series.bound + 1)):
        raise ReconstructionError(
            f"denominator {den} does not reproduce the truncated series",
            truncation=series,
            tried=[den],
        )
    return HilbertSeries(poly_trim(product[: cutoff + 1]), den)


def reconstruct_search(series, candidates, guard, expected_dimension):
    """First candidate denominator that reconstructs with the right pole
    order at t = 1.  Returns (HilbertSeries, candidate); raises
    ReconstructionError carrying the truncation when every candidate fails.
    """
    tried = []
    dim_rejected = 0
    for cand in candidates:
        cand = tuple(sorted(cand))
        tried.append(cand)
        try:
            closed = reconstruct(series, cand, guard=guard)
        except ReconstructionError:
            continue
        if closed.dimension != expected_dimension:
            dim_rejected += 1  # spurious fit: wrong pole order at t = 1
            continue
        return closed, cand
    detail = (
        f" ({dim_rejected} reconstructed but with pole order != "
        f"{expected_dimension} at t=1)"
        if dim_rejected
        else ""
    )
    raise ReconstructionError(
        f"no candidate denominator (of {len(tried)}) reproduced the "
        f"degree-{series.bound} truncation with guard {guard}{detail}; "
        f"increase the degree bound or supply denominators",
        truncation=series,
        tried=tried,
    )

# ---------------------------------------------------------------------------
# exact rational reconstruction (minimal linear recurrence)


def poly_exact_div(num, den):
    """Exact quotient of integer polynomials, or None if not divisible."""
    num, den = poly_trim(num), poly_trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if not num:
        return ()
    if len(num) < len(den):
        return None
    rem = [Fraction(c) for c in num]
    lead = Fraction(den[-1])
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = rem[k + len(den) - 1] / lead
        q[k] = c
        if c:
            for j, d in enumerate(den):
                rem[k + j] -= c * d
    if any(rem):
        return None
    if any(c.denominator != 1 for c in q):
        return None
    return tuple(int(c) for c in q)


def _pair_primitive(r, v):
    """Scale the pair (r, v) to primitive integer lists (same scalar)."""
    den = 1
    for c in r + v:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in r] + [int(c * den) for c in v]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    g = g or 1
    return (
        [Fraction(int(c * den) // g) for c in r],
        [Fraction(int(c * den) // g) for c in v],
    )


def minimal_rational_form(coeffs, *, stability=8):
    """Smallest rational function num/den matching a truncated expansion.

    Runs the extended Euclidean algorithm on (t^(D+1), sum coeffs[k] t^k)
    over exact rationals; every convergent matches all D+1 coefficients,
    and the one of smallest total degree is the minimal linear recurrence
    the data supports.  It is only returned when the data exceed its
    degrees by at least ``stability`` coefficients (so the recurrence is
    overdetermined, not an artifact of short data), den(0) == 1 and both
    polynomials are integral; otherwise None, meaning: extend the series.
    """
    bound = len(coeffs) - 1
    b = [Fraction(c) for c in coeffs]
    while b and not b[-1]:
        b.pop()
    if not b:
        return (), (1,)
    r_prev = [Fraction(0)] * (bound + 1) + [Fraction(1)]
    v_prev = [Fraction(0)]
    r_cur, v_cur = b, [Fraction(1)]
    best = None
    while r_cur:
        total = (len(r_cur) - 1) + (len(v_cur) - 1)
        if v_cur[0] and total + stability <= bound:
            if best is None or total < best[0]:
                best = (total, list(r_cur), list(v_cur))
        # one Euclidean division step: r_prev = q * r_cur + r_next
        q = [Fraction(0)] * (len(r_prev) - len(r_cur) + 1)
        rem = list(r_prev)
        lead = r_cur[-1]
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + len(r_cur) - 1] / lead
            q[k] = c
            if c:
                for j, d in enumerate(r_cur):
                    rem[k + j] -= c * d
        while rem and not rem[-1]:
            rem.pop()
        v_next = list(v_prev) + [Fraction(0)] * max(
            0, len(q) + len(v_cur) - 1 - len(v_prev)
        )
        for i, qc in enumerate(q):
            if qc:
                for j, vc in enumerate(v_cur):
                    v_next[i + j] -= qc * vc
        while len(v_next) > 1 and not v_next[-1]:
            v_next.pop()
        r_prev, v_prev = r_cur, v_cur
        if rem:
            rem, v_next = _pair_primitive(rem, v_next)
        r_cur, v_cur = rem, v_next
    if best is None:
        return None
    _, num, den = best
    scale = den[0]
    num = [c / scale for c in num]
    den = [c / scale for c in den]
    if any(c.denominator != 1 for c in num + den):
        return None
    num = tuple(int(c) for c in num)
    den = tuple(int(c) for c in den)
    # replay the recurrence as a final integrity check
    check = []
    for k in range(bound + 1):
        acc = num[k] if k < len(num) else 0
        acc -= sum(den[j] * check[k - j] for j in range(1, min(k, len(den) - 1) + 1))
        check.append(acc)
    if check != [int(c) for c in coeffs]:
        return None
    return num, den


def reduced_fraction(num, exponents):
    """Cancel num / prod_e (1 - t^e) to lowest terms over the integers.

    Returns (numerator, denominator) coefficient tuples with the
    denominator normalized to constant term +1.
    """
    from sympy import Poly, Symbol, ZZ

    t = Symbol("t")
    pnum = Poly(list(reversed(poly_trim(num))), t, domain=ZZ)
    pden = Poly(list(reversed(one_minus_te_product(exponents))), t, domain=ZZ)
    g = pnum.gcd(pden)
    qn = pnum.exquo(g)
    qd = pden.exquo(g)
    ncoeffs = tuple(int(c) for c in reversed(qn.all_coeffs()))
    dcoeffs = tuple(int(c) for c in reversed(qd.all_coeffs()))
    if dcoeffs[0] < 0:
        ncoeffs = tuple(-c for c in ncoeffs)
        dcoeffs = tuple(-c for c in dcoeffs)
    assert dcoeffs[0] == 1
    return ncoeffs, dcoeffs


def cyclotomic_multiplicities(delta, index_cap=512):
    """Multiset of cyclotomic factors of an integer polynomial.

    Returns {m: multiplicity of the m-th cyclotomic polynomial} when delta
    factors completely into cyclotomics (up to sign), None otherwise.
    Denominators of Hilbert series always do; the None branch catches a
    reconstruction that produced something else.
    """
    from sympy import cyclotomic_poly

    rem = poly_trim(delta)
    if not rem:
        raise ValueError("zero polynomial")
    mult = {}
    m = 1
    while len(rem) > 1 and m <= index_cap:
        phi = tuple(int(c) for c in reversed(cyclotomic_poly(m, polys=True).all_coeffs()))
        if len(phi) - 1 <= len(rem) - 1:
            count = 0
            while True:
                q = poly_exact_div(rem, phi)
                if q is None:
                    break
                rem, count = q, count + 1
            if count:
                mult[m] = count
        m += 1
    if len(rem) > 1 or abs(rem[0]) != 1:
        return None
    return mult


def staircase_exponents(mult):
    """Denominator exponents (1 - t^e) covering cyclotomic multiplicities.

    The i-th exponent is lcm{m : mult[m] > i}, giving exactly
    mult[1] factors; each cyclotomic then divides at least as often as
    required, so prod (1 - t^e) is a polynomial multiple of the input
    denominator.  Requires mult[m] <= mult[1] (true for the Hilbert series
    of a graded algebra, where the pole order at any root of unity is at
    most the pole order at t = 1).
    """
    d = mult.get(1, 0)
    if any(s > d for s in mult.values()):
        raise ValueError("pole order at a root of unity exceeds the order at 1")
    exps = []
    for i in range(d):
        exps.append(math.lcm(*[m for m, s in mult.items() if s > i]))
    return tuple(sorted(exps))
