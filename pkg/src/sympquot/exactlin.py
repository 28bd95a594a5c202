"""Exact linear algebra over the integers and rationals.

Small dense matrices only (weight matrices, moment-map Jacobians), so the
routines favour clarity and exactness over asymptotics: fraction-free
elimination for ranks, an extended-gcd row ladder for unimodular reduction,
and a Bland's-rule simplex over Fraction for cone membership.  The Smith
normal form is delegated to sympy.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def integer_rank(rows, limit=None):
    """Rank over Q of an integer matrix (list of rows), fraction-free.

    ``limit`` allows early exit once the rank reaches the given value.
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        pv = pr[col]
        for i in range(rank + 1, len(m)):
            c = m[i][col]
            if c:
                row = [pv * a - c * b for a, b in zip(m[i], pr)]
                g = 0
                for a in row:
                    g = gcd(g, a)
                m[i] = [a // g for a in row] if g > 1 else row
        rank += 1
        if limit is not None and rank >= limit:
            return rank
        if rank == len(m):
            break
    return rank


def fraction_rank(rows):
    """Rank of a matrix with Fraction/int entries (clears denominators)."""
    cleared = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        scale = 1
        for x in fr:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        cleared.append([int(x * scale) for x in fr])
    return integer_rank(cleared)


def fraction_inverse(rows):
    """Exact inverse of a small nonsingular matrix, as Fraction rows."""
    k = len(rows)
    aug = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
        for i, row in enumerate(rows)
    ]
    for col in range(k):
        piv = next((i for i in range(col, k) if aug[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(k):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[k:] for row in aug]


def _exgcd(a, b):
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def row_reduce_unimodular(rows, width=None):
    """Integer row echelon form with a recorded unimodular transform.

    Returns (U, H, rank) with U unimodular over Z, H = U * A, the pivot
    columns of H strictly increasing, all rows below ``rank`` zero, and
    pivots positive.  Column operations are never used, so the row space
    (and the change of basis) is exact.
    """
    A = [list(r) for r in rows]
    ell = len(A)
    n = len(A[0]) if ell else (width or 0)
    if any(len(r) != n for r in A):
        raise ValueError("ragged matrix")
    U = [[1 if i == j else 0 for j in range(ell)] for i in range(ell)]
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, ell) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, ell):
            b = A[i][col]
            if b == 0:
                continue
            a = A[r][col]
            g, x, y = _exgcd(a, b)
            aa, bb = a // g, b // g
            # [[x, y], [-bb, aa]] has determinant (x*a + y*b)/g = 1
            A[r], A[i] = (
                [x * p + y * q for p, q in zip(A[r], A[i])],
                [-bb * p + aa * q for p, q in zip(A[r], A[i])],
            )
            U[r], U[i] = (
                [x * p + y * q for p, q in zip(U[r], U[i])],
                [-bb * p + aa * q for p, q in zip(U[r], U[i])],
            )
        if A[r][col] < 0:
            A[r] = [-v for v in A[r]]
            U[r] = [-v for v in U[r]]
        r += 1
        if r == ell:
            break
    return (
        tuple(tuple(v) for v in U),
        tuple(tuple(v) for v in A),
        r,
    )


def integer_kernel_basis(rows, width):
    """Basis of the saturated lattice {x in Z^width : A x = 0}.

    Row-reduces the transpose with a unimodular transform; the transform
    rows paired with zero rows of the echelon form span the kernel.
    """
    ell = len(rows)
    transpose = [[rows[i][j] for i in range(ell)] for j in range(width)]
    U, _, r = row_reduce_unimodular(transpose, width=ell)
    return [U[i] for i in range(r, width)]


def elementary_divisors(rows):
    """Nonzero diagonal of the Smith normal form, as positive ints."""
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form

    if not rows or not rows[0]:
        return []
    snf = smith_normal_form(Matrix([list(r) for r in rows]))
    out = []
    for i in range(min(snf.shape)):
        d = int(snf[i, i])
        if d:
            out.append(abs(d))
    return out


def nonnegative_solution_exists(rows, rhs):
    """Decide whether {x >= 0 : A x = b} is nonempty, exactly."""
    return nonnegative_solution(rows, rhs) is not None


def nonnegative_solution(rows, rhs):
    """A point of {x >= 0 : A x = b}, or None if the set is empty.

    Phase-1 simplex over Fraction with Bland's anticycling rule; feasible
    iff the artificial objective reaches zero, in which case the basic
    solution restricted to the real variables is returned.
    """
    m = len(rows)
    if m == 0:
        return ()
    n = len(rows[0])
    T = []
    b = []
    for row, bi in zip(rows, rhs):
        row = [Fraction(v) for v in row]
        bi = Fraction(bi)
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        T.append(row)
        b.append(bi)
    # artificial variables n..n+m-1 start basic; minimize their sum
    for i in range(m):
        T[i] = T[i] + [Fraction(int(i == k)) for k in range(m)]
    basis = list(range(n, n + m))
    # reduced-cost row for min(sum of artificials): c_j - z_j, which is
    # -sum_i T[i][j] for the real variables and 0 for the (basic) artificials
    obj = [Fraction(0)] * (n + m)
    obj_val = Fraction(0)
    for i in range(m):
        for j in range(n):
            obj[j] -= T[i][j]
        obj_val -= b[i]
    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            if obj_val != 0:
                return None
            x = [Fraction(0)] * n
            for i in range(m):
                if basis[i] < n:
                    x[basis[i]] = b[i]
            return tuple(x)
        leave = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = b[i] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            # objective is bounded below by 0, so this cannot happen
            raise RuntimeError("phase-1 simplex detected unbounded objective")
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        b[leave] /= piv
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [v - f * w for v, w in zip(T[i], T[leave])]
                b[i] -= f * b[leave]
        if obj[enter]:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, T[leave])]
            obj_val -= f * b[leave]
        basis[leave] = enter
