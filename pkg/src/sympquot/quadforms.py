"""Sparse quadratic moment-map components and their exact Jacobians.

A moment component is a bilinear form sum_{j,k} c_{jk} z_j w_k pairing the
module coordinates z with the dual coordinates w.  Coefficients are kept in
a sparse dict keyed by (j, k); indices are 0-based, while rendered names
are 1-based (z1, w1, ...) to match the usual notation.
"""

from __future__ import annotations

from .exactlin import fraction_rank, integer_kernel_basis


class MomentForm:
    """Bilinear form in (z, w) with exact integer/rational coefficients."""

    __slots__ = ("terms", "n")

    def __init__(self, terms, n):
        self.n = int(n)
        clean = {}
        for (j, k), c in dict(terms).items():
            if c == 0:
                continue
            if not (0 <= j < self.n and 0 <= k < self.n):
                raise ValueError(f"term index ({j},{k}) outside 0..{self.n - 1}")
            clean[(j, k)] = c
        self.terms = clean

    @classmethod
    def from_matrix_action(cls, M):
        """Form mu^M(z, w) = w(M z); coefficient of z_j w_k is M[k][j]."""
        n = len(M)
        return cls({(j, k): M[k][j] for k in range(n) for j in range(n)}, n)

    def value(self, z, w):
        return sum(c * z[j] * w[k] for (j, k), c in self.terms.items())

    def gradient(self, z, w):
        """(d/dz, d/dw) at the point, each a length-n list."""
        dz = [0] * self.n
        dw = [0] * self.n
        for (j, k), c in self.terms.items():
            dz[j] += c * w[k]
            dw[k] += c * z[j]
        return dz, dw

    def scale_coordinates(self, z_scale, w_scale):
        """Coefficients after z_j -> z_scale[j] * z_j, w_k -> w_scale[k] * w_k."""
        return MomentForm(
            {(j, k): c * z_scale[j] * w_scale[k] for (j, k), c in self.terms.items()},
            self.n,
        )

    def __add__(self, other):
        t = dict(self.terms)
        for jk, c in other.terms.items():
            t[jk] = t.get(jk, 0) + c
        return MomentForm(t, self.n)

    def __rmul__(self, scalar):
        return MomentForm({jk: scalar * c for jk, c in self.terms.items()}, self.n)

    def __eq__(self, other):
        return (
            isinstance(other, MomentForm)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (j, k) in sorted(self.terms):
            c = self.terms[(j, k)]
            mono = f"z{j + 1}*w{k + 1}"
            mag = abs(c)
            term = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


def jacobian_rows(forms, z, w):
    """Rows of d(mu) at (z, w): one row [d/dz | d/dw] per component."""
    rows = []
    for f in forms:
        dz, dw = f.gradient(z, w)
        rows.append(dz + dw)
    return rows


def jacobian_rank(forms, z, w):
    return fraction_rank(jacobian_rows(forms, z, w))


def on_shell(forms, z, w):
    return all(f.value(z, w) == 0 for f in forms)


def shell_point_from_kernel(forms, z, rng, coeff_bound=5):
    """A point (z, w) with w in the common kernel of the linear maps
    w -> mu_i(z, w), built from an exact integer kernel basis.

    Returns None when the kernel is trivial (then only w = 0 works).
    """
    n = forms[0].n if forms else len(z)
    # mu_i(z, w) is linear in w: row i has entry sum_j c_jk z_j at column k
    rows = []
    for f in forms:
        row = [0] * n
        for (j, k), c in f.terms.items():
            row[k] += c * z[j]
        rows.append(row)
    basis = integer_kernel_basis(rows, n)
    if not basis:
        return None
    w = [0] * n
    for vec in basis:
        c = rng.randint(-coeff_bound, coeff_bound)
        for k in range(n):
            w[k] += c * vec[k]
    return w
