"""Exact rational linear algebra on numpy object arrays of Fractions.

Everything here works over Q without any floating point. Matrices are
2-d object arrays; vectors are 1-d object arrays. Rows of a matrix are
used as spanning sets ("basis rows") throughout the package.
"""

from fractions import Fraction
from math import gcd, lcm

import numpy as np


class ExactArithmeticError(ValueError):
    """Raised when an exact linear-algebra request has no valid answer."""


def frac(x):
    """Coerce an int, Fraction, or rational string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def qarray(data):
    """Object array of Fractions from nested ints/Fractions/strings."""
    arr = np.array(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = frac(arr[idx])
    return out


def qzeros(shape):
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def qeye(n):
    out = qzeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def unit(n, i):
    v = qzeros(n)
    v[i] = Fraction(1)
    return v


def is_zero(arr):
    return all(x == 0 for x in np.asarray(arr, dtype=object).reshape(-1))


def to_float(arr):
    return np.asarray(arr, dtype=object).astype(float)


def rref(mat):
    """Reduced row echelon form. Returns (R, pivot_columns)."""
    m = qarray(mat).copy()
    if m.ndim != 2:
        raise ExactArithmeticError("rref needs a 2-d array")
    n_rows, n_cols = m.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pr = next((i for i in range(r, n_rows) if m[i, c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = m[r] / m[r, c]
        col = m[:, c].copy()
        col[r] = Fraction(0)
        nz = [i for i in range(n_rows) if col[i] != 0]
        if nz:
            m[nz] -= np.outer(col[nz], m[r])
        pivots.append(c)
        r += 1
    return m, pivots


def _integer_rows(mat):
    """Each row scaled by its own common denominator, as lists of Python ints."""
    out = []
    for row in mat:
        row = [frac(x) for x in row]
        d = 1
        for x in row:
            d = lcm(d, x.denominator)
        out.append([x.numerator * (d // x.denominator) for x in row])
    return out


def rank(mat):
    """Exact rank by fraction-free elimination over the integers."""
    mat = np.asarray(mat, dtype=object)
    if mat.ndim != 2 or mat.size == 0:
        return 0
    rows = [r for r in _integer_rows(mat) if any(r)]
    n_cols = mat.shape[1]
    rk = 0
    for c in range(n_cols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk]
        pc = p[c]
        for i in range(rk + 1, len(rows)):
            x = rows[i][c]
            if x:
                new = [pc * a - x * b for a, b in zip(rows[i], p)]
                g = 0
                for v in new:
                    g = gcd(g, v)
                rows[i] = [v // g for v in new] if g > 1 else new
        rk += 1
        if rk == len(rows):
            break
    return rk


def nullspace(mat):
    """Basis rows of {x : mat @ x = 0}."""
    mat = np.asarray(mat, dtype=object)
    n = mat.shape[1]
    if mat.shape[0] == 0:
        return qeye(n)
    r, pivots = rref(mat)
    free = [c for c in range(n) if c not in pivots]
    out = qzeros((len(free), n))
    for k, f in enumerate(free):
        out[k, f] = Fraction(1)
        for i, p in enumerate(pivots):
            out[k, p] = -r[i, f]
    return out


def row_basis(rows):
    """Independent rows spanning the same space (reduced echelon form)."""
    rows = np.asarray(rows, dtype=object)
    if rows.size == 0:
        return qzeros((0, rows.shape[-1] if rows.ndim == 2 else 0))
    r, pivots = rref(rows)
    return r[: len(pivots)]


def independent_subset(rows):
    """Indices of a maximal independent subset, taken greedily in order."""
    rows = np.asarray(rows, dtype=object)
    chosen = []
    for i in range(rows.shape[0]):
        if rank(rows[chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
    return chosen


def solve(a, b):
    """Unique x with a @ x = b; b may be a vector or a matrix of columns."""
    a = qarray(a)
    b = qarray(b)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    n = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    r, pivots = rref(aug)
    if any(p >= n for p in pivots):
        raise ExactArithmeticError("inconsistent linear system")
    if len(pivots) != n:
        raise ExactArithmeticError("linear system has no unique solution")
    x = r[:n, n:]
    return x[:, 0] if vec else x


def inverse(a):
    a = qarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ExactArithmeticError("inverse of a non-square matrix")
    return solve(a, qeye(n))


def coordinates(basis_rows, v):
    """Coefficients c with c @ basis_rows = v, or None if v is not in the span."""
    basis_rows = np.asarray(basis_rows, dtype=object)
    try:
        return solve(basis_rows.T, v)
    except ExactArithmeticError:
        return None


def in_span(basis_rows, v):
    basis_rows = np.asarray(basis_rows, dtype=object)
    if basis_rows.shape[0] == 0:
        return is_zero(v)
    return rank(np.vstack([basis_rows, v])) == rank(basis_rows)


def same_span(rows_a, rows_b):
    ra = rank(rows_a)
    return ra == rank(rows_b) and ra == rank(np.vstack([rows_a, rows_b]))


def gram(rows, form, rows2=None):
    """Matrix of the bilinear form ``form`` (a square array) on two row sets."""
    rows2 = rows if rows2 is None else rows2
    return np.asarray(rows, dtype=object) @ form @ np.asarray(rows2, dtype=object).T


def orthogonal_complement(span_rows, form, within_rows=None):
    """Basis rows of {x in within : form(x, s) = 0 for all s in span}.

    ``within_rows`` defaults to the whole coordinate space.
    """
    span_rows = np.asarray(span_rows, dtype=object)
    form = np.asarray(form, dtype=object)
    n = form.shape[0]
    if within_rows is None:
        within_rows = qeye(n)
    within_rows = np.asarray(within_rows, dtype=object)
    if span_rows.shape[0] == 0:
        return within_rows.copy()
    constraint = span_rows @ form @ within_rows.T
    coeffs = nullspace(constraint)
    return coeffs @ within_rows if coeffs.shape[0] else qzeros((0, n))


def orthogonalize(rows, form):
    """Gram-Schmidt without normalization; drops dependent rows."""
    out = []
    for v in np.asarray(rows, dtype=object):
        w = v.copy()
        for u in out:
            uu = u @ form @ u
            w = w - ((w @ form @ u) / uu) * u
        if not is_zero(w):
            out.append(w)
    n = np.asarray(form).shape[0]
    return np.array(out, dtype=object) if out else qzeros((0, n))


def common_denominator(arr):
    d = 1
    for x in np.asarray(arr, dtype=object).reshape(-1):
        d = lcm(d, Fraction(x).denominator)
    return d


def integer_scaled(arr):
    """Split a rational array as (integer numerators, common denominator)."""
    arr = np.asarray(arr, dtype=object)
    d = common_denominator(arr)
    ints = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = ints.reshape(-1)
    for i in range(flat_in.size):
        x = Fraction(flat_in[i])
        flat_out[i] = x.numerator * (d // x.denominator)
    return ints, d


def primitive_row(v):
    """Smallest integer multiple (positive leading entry) of a rational vector."""
    ints, _ = integer_scaled(v)
    g = 0
    for x in ints:
        g = gcd(g, int(x))
    if g == 0:
        return ints
    ints = np.array([int(x) // g for x in ints], dtype=object)
    lead = next(x for x in ints if x != 0)
    return -ints if lead < 0 else ints


def as_int64(ints):
    """Convert an object array of Python ints to int64 when it fits safely."""
    big = max((abs(int(x)) for x in ints.reshape(-1)), default=0)
    if big < 2**20:
        return ints.astype(np.int64)
    return None


def qmatmul(*mats):
    """Exact product of rational matrices, multiplied as integers over one denominator."""
    ints, den = integer_scaled(mats[0])
    for m in mats[1:]:
        mi, md = integer_scaled(m)
        ints = ints @ mi
        den *= md
    out = from_scaled(ints, den)
    return out


def from_scaled(ints, den):
    out = np.empty(ints.shape, dtype=object)
    fi = ints.reshape(-1)
    fo = out.reshape(-1)
    for i in range(fi.size):
        fo[i] = Fraction(int(fi[i]), den)
    return out


def rationalize(x, max_den=10_000, tol=1e-9):
    """Nearest small-denominator rational to a float, checked against ``tol``."""
    q = Fraction(float(x)).limit_denominator(max_den)
    if abs(float(q) - float(x)) > tol:
        raise ExactArithmeticError(f"{x!r} is not close to a small rational")
    return q
