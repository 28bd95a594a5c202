"""SL2-module analysis: characters, Koszul quotient series, classification.

An SL2 module is a multiset of irreducibles R_d (binary forms of degree d,
dimension d+1).  Hilbert-series work happens on the weight characters of
the diagonal torus; moment components and Jacobian probes use the explicit
integer matrices of the (e, f, h) action on each R_d.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .certify import GorensteinVerdict, stanley_check
from .laurent import LaurentCharacter
from .quadforms import (
    MomentForm,
    jacobian_rank,
    on_shell,
    shell_point_from_kernel,
)
from .series import HilbertSeries, TruncatedSeries, reconstruct_search

ADJOINT_DIM = 3  # dim sl2; the shell is cut by three quadratic components


@dataclass(frozen=True)
class SL2Module:
    """Multiset of irrep labels d >= 0, stored sorted descending.

    n is the complex dimension sum(d_i + 1); trivial summands (d = 0) are
    legal and are stripped/re-multiplied by the series pipeline.
    """

    irreps: tuple[int, ...]

    def __init__(self, irreps):
        irreps = tuple(sorted((int(d) for d in irreps), reverse=True))
        if any(d < 0 for d in irreps):
            raise ValueError("irrep labels must be >= 0")
        object.__setattr__(self, "irreps", irreps)

    @property
    def n(self):
        return sum(d + 1 for d in self.irreps)

    @property
    def trivial_summands(self):
        return sum(1 for d in self.irreps if d == 0)

    def nontrivial_part(self):
        return SL2Module(tuple(d for d in self.irreps if d > 0))

    def __str__(self):
        if not self.irreps:
            return "0"
        from collections import Counter

        parts = []
        for d, m in sorted(Counter(self.irreps).items(), reverse=True):
            parts.append(f"{m}R{d}" if m > 1 else f"R{d}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# characters


def character(d) -> LaurentCharacter:
    """q^d + q^(d-2) + ... + q^(-d), the weight character of R_d."""
    if d < 0:
        raise ValueError("irrep label must be >= 0")
    return LaurentCharacter({m: 1 for m in range(-d, d + 1, 2)})


def module_character(V: SL2Module) -> LaurentCharacter:
    out = LaurentCharacter()
    for d in V.irreps:
        out = out + character(d)
    return out


def _newton_symmetric_powers(chi: LaurentCharacter, D):
    """Characters of Sym^d for d = 0..D via d*h_d = sum p_k h_{d-k}."""
    powers = [chi.substitute_power(k) for k in range(1, D + 1)]
    h = [LaurentCharacter({0: 1})]
    for d in range(1, D + 1):
        acc = LaurentCharacter()
        for k in range(1, d + 1):
            acc = acc + powers[k - 1] * h[d - k]
        coeffs = {}
        for m, v in acc.items():
            q, r = divmod(v, d)
            assert r == 0, "Newton recursion must divide exactly"
            coeffs[m] = q
        h.append(LaurentCharacter(coeffs))
    return h


def sym_power_characters(V: SL2Module, D):
    """Characters of Sym^d(V + V*) for d = 0..D; every R_d is self-dual,
    so the doubled module has character 2 * chi_V."""
    if D < 0:
        raise ValueError("degree bound must be >= 0")
    return _newton_symmetric_powers(2 * module_character(V), D)


def multiplicity(chi: LaurentCharacter, m) -> int:
    """Number of R_m summands in a module with weight character chi."""
    if not chi.is_symmetric():
        raise ValueError("multiplicity needs a symmetric character")
    return chi.coeff(m) - chi.coeff(m + 2)


@dataclass(frozen=True)
class ABSeries:
    """Per-degree multiplicities in C[V + V*]: a = trivial, b = adjoint."""

    a: TruncatedSeries
    b: TruncatedSeries


def ab_series(V: SL2Module, D) -> ABSeries:
    chars = sym_power_characters(V, D)
    a = tuple(multiplicity(c, 0) for c in chars)
    b = tuple(multiplicity(c, 2) for c in chars)
    assert a[0] == 1 and b[0] == 0
    assert all(x >= 0 for x in a) and all(x >= 0 for x in b)
    return ABSeries(a=TruncatedSeries(a), b=TruncatedSeries(b))


# ---------------------------------------------------------------------------
# classification

# Modules (no trivial summands, sorted descending) that are not 2-large.
NON_TWO_LARGE = {
    (1,),
    (1, 1),
    (1, 1, 1),
    (2,),
    (2, 2),
    (2, 1),
    (3,),
    (4,),
}
# Among those, the ones that are not even 1-large.
NOT_ONE_LARGE = {(1,), (1, 1), (2,)}
# Quotients graded regularly symplectomorphic to linear symplectic orbifolds.
ORBIFOLD_CASES = {(1,), (1, 1), (2,), (3,), (4,)}
# Modules whose moment components fail to be a regular sequence: the shell
# of R_1 is the union of V x 0 and 0 x V* (dimension 2 > 1) and the shell
# of R_2 is the 4-dimensional commuting variety (> 3).  Every other
# nontrivial module is 1-large or, for 2R_1, has shell dimension exactly
# 2n-3 (points with all four components on a line form a 5-dim set).
NOT_ZERO_MODULAR = {(1,), (2,)}


@dataclass(frozen=True)
class SL2Classification:
    module: SL2Module
    two_large: bool
    one_large: bool
    orbifold_case: bool
    zero_modular: bool

    def __post_init__(self):
        if self.two_large:
            assert self.one_large and self.zero_modular


def classify_largeness(V: SL2Module) -> SL2Classification:
    """Largeness flags from the finite exceptional lists.

    Requires a nonzero module with trivial summands already stripped.
    """
    if not V.irreps:
        raise ValueError("the zero module has no largeness classification")
    if V.trivial_summands:
        raise ValueError(
            "strip trivial summands before classification (they are handled "
            "by the series pipeline)"
        )
    key = V.irreps
    two = key not in NON_TWO_LARGE
    return SL2Classification(
        module=V,
        two_large=two,
        one_large=two or key not in NOT_ONE_LARGE,
        orbifold_case=key in ORBIFOLD_CASES,
        zero_modular=key not in NOT_ZERO_MODULAR,
    )


# ---------------------------------------------------------------------------
# explicit action matrices and moment components


def rep_matrices(d):
    """(e, f, h) acting on the basis v_0..v_d of R_d, as integer matrices.

    e v_k = k v_{k-1}, f v_k = (d-k) v_{k+1}, h v_k = (d-2k) v_k; v_k has
    h-weight d-2k, so v_0 is the highest-weight vector.
    """
    if d < 0:
        raise ValueError("irrep label must be >= 0")
    size = d + 1
    e = [[0] * size for _ in range(size)]
    f = [[0] * size for _ in range(size)]
    h = [[0] * size for _ in range(size)]
    for k in range(size):
        if k > 0:
            e[k - 1][k] = k
        if k < d:
            f[k + 1][k] = d - k
        h[k][k] = d - 2 * k
    as_t = lambda M: tuple(tuple(r) for r in M)
    return as_t(e), as_t(f), as_t(h)


def module_rep_matrices(V: SL2Module):
    """Block-diagonal (e, f, h) for the whole module, blocks in irrep order."""
    n = V.n
    out = []
    for idx in range(3):
        M = [[0] * n for _ in range(n)]
        off = 0
        for d in V.irreps:
            block = rep_matrices(d)[idx]
            for i in range(d + 1):
                for j in range(d + 1):
                    M[off + i][off + j] = block[i][j]
            off += d + 1
        out.append(tuple(tuple(r) for r in M))
    return tuple(out)


def moment_components_sl2(V: SL2Module):
    """The three quadratic moment components mu^e, mu^f, mu^h on (z, w),
    where mu^A(z, w) = w(A z)."""
    return [MomentForm.from_matrix_action(M) for M in module_rep_matrices(V)]


# ---------------------------------------------------------------------------
# Jacobian probe


@dataclass(frozen=True)
class JacobianProbe:
    """Exact ranks of d(mu) at pseudo-random integer points.

    probabilistic: ranks are maxima over sampled points, so they are lower
    bounds on the generic ranks; shell_dim_estimate = 2n - on_shell_rank
    equals 2n - 3 exactly when full rank is attained on the shell.
    """

    on_shell_rank: int
    off_shell_rank: int
    shell_dim_estimate: int
    trials: int
    seed: int
    probabilistic: bool = True


def jacobian_rank_probe(V: SL2Module, trials=12, *, seed=0) -> JacobianProbe:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    forms = moment_components_sl2(V)
    n = V.n
    rng = random.Random(seed)
    on_rank = 0
    off_rank = 0
    for _ in range(trials):
        z = [rng.randint(-9, 9) for _ in range(n)]
        w = [rng.randint(-9, 9) for _ in range(n)]
        r = jacobian_rank(forms, z, w)
        if on_shell(forms, z, w):
            on_rank = max(on_rank, r)
        else:
            off_rank = max(off_rank, r)
        # (z, 0) is always on the shell; richer on-shell points come from
        # the exact kernel of w -> mu(z, w)
        on_rank = max(on_rank, jacobian_rank(forms, z, [0] * n))
        wk = shell_point_from_kernel(forms, z, rng)
        if wk is not None and on_shell(forms, z, wk):
            on_rank = max(on_rank, jacobian_rank(forms, z, wk))
    return JacobianProbe(
        on_shell_rank=on_rank,
        off_shell_rank=off_rank,
        shell_dim_estimate=2 * n - on_rank,
        trials=trials,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Koszul quotient series


NAIVE_QUOTIENT_CAVEAT = (
    "module is not 1-large: this is the Hilbert series of the naive quotient "
    "C[V+V*]^G/(mu)^G, which may differ from the complex symplectic quotient"
)


@dataclass(frozen=True)
class SL2QuotientResult:
    series: HilbertSeries
    verdict: GorensteinVerdict
    truncation: TruncatedSeries  # alternating Koszul sum, nontrivial part
    denominator: tuple[int, ...]
    classification: SL2Classification | None
    ci_evidence: str
    caveats: tuple[str, ...]


def _detect_generator_degrees(a_coeffs, limit):
    """Degrees where the invariant count exceeds what existing generators
    explain (free-monoid count); an underestimate in the presence of
    relations, so callers should augment with lcms."""
    ways = [0] * (len(a_coeffs))
    ways[0] = 1
    degrees = []
    for k in range(1, min(limit + 1, len(a_coeffs))):
        gap = a_coeffs[k] - ways[k]
        for _ in range(max(gap, 0)):
            degrees.append(k)
            for i in range(k, len(ways)):
                ways[i] += ways[i - k]
    return degrees


def koszul_quotient_series(
    V: SL2Module, D=24, denominators=None, *, guard=4, probe_seed=0
) -> SL2QuotientResult:
    """Quotient Hilbert series via the Koszul alternating sum.

    For a complete-intersection shell (three quadratic components forming a
    regular sequence), H(t) = a(t) - t^2 b(t) + t^4 b(t) - t^6 a(t), using
    Lambda^2(sl2) = sl2 and Lambda^3(sl2) trivial.  Trivial summands are
    stripped first and re-multiplied as 1/(1-t)^(2m).  The gate combines
    the exact classification list with a Jacobian rank probe and reports
    which evidence was used.
    """
    m0 = V.trivial_summands
    core = V.nontrivial_part()
    if not core.irreps:
        series = HilbertSeries((1,), (1,) * (2 * m0))
        return SL2QuotientResult(
            series=series,
            verdict=stanley_check(series, cohen_macaulay_domain=True),
            truncation=TruncatedSeries((1,) + (0,) * D),
            denominator=(),
            classification=None,
            ci_evidence="trivial module: no moment conditions",
            caveats=(),
        )

    cls = classify_largeness(core)
    probe = jacobian_rank_probe(core, trials=4, seed=probe_seed)
    consistent = probe.on_shell_rank == ADJOINT_DIM
    evidence = (
        f"classification list (exact): {core} is "
        f"{'0-modular' if cls.zero_modular else 'not 0-modular'}; "
        f"jacobian probe (probabilistic, seed {probe_seed}): on-shell rank "
        f"{probe.on_shell_rank} ({'consistent' if consistent == cls.zero_modular else 'tension — trusting the exact list'})"
    )
    if not cls.zero_modular:
        raise ValueError(
            f"moment components of {core} do not form a regular sequence; "
            f"the Koszul alternating sum does not apply [{evidence}]"
        )

    ab = ab_series(core, D)
    a, b = ab.a.coeffs, ab.b.coeffs

    def at(seq, k):
        return seq[k] if 0 <= k < len(seq) else 0

    trunc = TruncatedSeries(
        tuple(
            at(a, d) - at(b, d - 2) + at(b, d - 4) - at(a, d - 6)
            for d in range(D + 1)
        )
    )

    den_count = 2 * core.n - 6
    if denominators is not None:
        candidates = [tuple(sorted(int(e) for e in denominators))]
    else:
        import math as _math

        degs = _detect_generator_degrees(a, min(D - guard, 16))
        pool = sorted(set(degs))
        extra = {
            _math.lcm(x, y) for x in pool for y in pool if _math.lcm(x, y) <= D - guard
        }
        if pool:
            total = _math.lcm(*pool)
            if total <= D - guard:
                extra.add(total)
        pool = sorted(set(pool) | extra)
        from itertools import combinations_with_replacement

        candidates = [
            c
            for c in combinations_with_replacement(pool, den_count)
            if sum(c) <= D - guard
        ]
        candidates.sort(key=lambda c: (sum(c), c))

    closed, used = reconstruct_search(trunc, candidates, guard, den_count)
    series = HilbertSeries(closed.numerator, closed.denominator + (1,) * (2 * m0))

    caveats = []
    if not cls.one_large:
        caveats.append(NAIVE_QUOTIENT_CAVEAT)
    # 1-large => the quotient is a Cohen-Macaulay domain; the only
    # non-1-large module passing the gate is 2R_1, known non-CM.
    cm = True if cls.one_large else False
    verdict = stanley_check(series, cohen_macaulay_domain=cm)
    return SL2QuotientResult(
        series=series,
        verdict=verdict,
        truncation=trunc,
        denominator=used,
        classification=cls,
        ci_evidence=evidence,
        caveats=tuple(caveats),
    )
