"""Lie algebras given by exact rational structure constants."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from .. import exact


class AlgebraError(ValueError):
    pass


def _scaled_vec(v):
    """(integer numerators as int64 or object, denominator) for a rational vector."""
    ints, d = exact.integer_scaled(v)
    small = exact.as_int64(ints)
    return (small if small is not None else ints), d


@dataclass(eq=False)
class StructureConstantAlgebra:
    """[e_i, e_j] = sum_k c_ij^k e_k with c stored as integers over one denominator.

    ``theta`` acts on coordinate column vectors; ``killing`` is the Gram
    matrix of the Killing form in the basis.
    """

    name: str
    basis_labels: tuple
    bracket_int: np.ndarray
    bracket_den: int
    theta: np.ndarray
    matrices: tuple = field(default=(), repr=False)
    _coord_map: tuple = field(default=None, repr=False)

    @property
    def dim(self):
        return len(self.basis_labels)

    @cached_property
    def bracket(self):
        """c_ij^k as a Fraction tensor."""
        return exact.from_scaled(self.bracket_int.astype(object), self.bracket_den)

    @cached_property
    def bracket_float(self):
        return self.bracket_int.astype(float) / self.bracket_den

    @cached_property
    def killing(self):
        c = self.bracket_int
        b = np.einsum("ilk,jkl->ij", c, c)
        return exact.from_scaled(b.astype(object), self.bracket_den**2)

    @cached_property
    def theta_float(self):
        return exact.to_float(self.theta)

    @cached_property
    def btheta_raw(self):
        """-B(e_i, theta e_j), before any metric scaling."""
        return -(self.killing @ self.theta)

    def label_index(self, label):
        try:
            return self.basis_labels.index(label)
        except ValueError:
            raise AlgebraError(f"{self.name} has no basis element {label!r}") from None

    def vector(self, spec):
        """Coordinate vector from a {label: coefficient} mapping."""
        v = exact.qzeros(self.dim)
        for label, c in spec.items():
            v[self.label_index(label)] += exact.frac(c)
        return v

    def bracket_vec(self, x, y):
        """Exact [x, y] for rational coordinate vectors."""
        xi, dx = _scaled_vec(x)
        yi, dy = _scaled_vec(y)
        if xi.dtype == np.int64 and yi.dtype == np.int64:
            out = np.einsum("i,j,ijk->k", xi, yi, self.bracket_int)
            if np.abs(out).max(initial=0) < 2**62:
                return exact.from_scaled(out.astype(object), dx * dy * self.bracket_den)
        out = np.einsum("i,j,ijk->k", xi.astype(object), yi.astype(object),
                        self.bracket_int.astype(object))
        return exact.from_scaled(out, dx * dy * self.bracket_den)

    def ad(self, x):
        """Exact matrix of ad(x) acting on coordinate columns."""
        xi, dx = _scaled_vec(x)
        m = np.einsum("i,ijk->kj", xi.astype(object), self.bracket_int.astype(object))
        return exact.from_scaled(m, dx * self.bracket_den)

    def ad_float(self, x):
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), self.bracket_float)

    def bracket_float_vec(self, x, y):
        return np.einsum("i,j,ijk->k", np.asarray(x, float), np.asarray(y, float), self.bracket_float)

    def theta_vec(self, x):
        return self.theta @ x

    def killing_form(self, x, y):
        return x @ self.killing @ y

    def to_matrix(self, x):
        """The matrix realization of a coordinate vector (if the algebra has one)."""
        if not self.matrices:
            raise AlgebraError(f"{self.name} has no matrix realization")
        out = np.zeros(self.matrices[0].shape, dtype=object)
        for c, m in zip(x, self.matrices):
            if c != 0:
                out = out + Fraction(c) * m.astype(object)
        return out

    def from_matrix(self, m):
        """Coordinates of a matrix in the realization (exact)."""
        if self._coord_map is None:
            raise AlgebraError(f"{self.name} has no matrix realization")
        positions, q, d = self._coord_map
        entries = np.asarray(m, dtype=object).reshape(-1)[positions]
        coords = np.array([Fraction(x) / d for x in q @ entries], dtype=object)
        back = self.to_matrix(coords)
        if not exact.is_zero(back - np.asarray(m, dtype=object)):
            raise AlgebraError("matrix is not in the algebra")
        return coords


def from_matrix_basis(name, labels, mats, theta_fn=None):
    """Build structure constants from integer matrices spanning a matrix Lie algebra.

    ``theta_fn`` maps a matrix to a matrix; default is X -> -X^T.
    """
    mats = [np.asarray(m, dtype=np.int64) for m in mats]
    n = len(mats)
    flat = np.array([m.reshape(-1) for m in mats], dtype=np.int64)
    # pick matrix positions on which the basis is already independent
    _, pos = exact.rref(exact.qarray(flat))
    if len(pos) != n:
        raise AlgebraError(f"{name}: basis matrices are linearly dependent")
    sub = exact.qarray(flat[:, pos].T)  # entries[pos] = sub @ coords
    inv = exact.inverse(sub)
    d = exact.common_denominator(inv)
    q_ints = np.array([[int(x * d) for x in row] for row in inv], dtype=object)
    q64 = q_ints.astype(np.int64)
    theta_fn = theta_fn or (lambda m: -m.T)

    def coords_scaled(m):
        """Integer vector c with c/d the coordinates of m; verified exactly."""
        m = np.asarray(m, dtype=np.int64).reshape(-1)
        c = q64 @ m[pos]
        if not np.array_equal(flat.T @ c, d * m):
            raise AlgebraError(f"{name}: matrix outside the span of the basis")
        return c

    c = np.empty((n, n, n), dtype=object)
    for i in range(n):
        c[i, i] = 0
        for j in range(i + 1, n):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            cij = coords_scaled(comm)
            c[i, j] = cij
            c[j, i] = -cij
    g = 0
    for x in c.reshape(-1):
        g = gcd(g, int(x))
    g = gcd(g, d) if g else d
    c_int = np.array([[[int(x) // g for x in c[i, j]] for j in range(n)] for i in range(n)], dtype=np.int64)
    den = d // g
    theta = exact.qzeros((n, n))
    for j in range(n):
        t = coords_scaled(theta_fn(mats[j]))
        for i in range(n):
            theta[i, j] = Fraction(int(t[i]), d)
    alg = StructureConstantAlgebra(
        name=name,
        basis_labels=tuple(labels),
        bracket_int=c_int,
        bracket_den=den,
        theta=theta,
        matrices=tuple(mats),
        _coord_map=(np.array(pos), q_ints, d),
    )
    return alg
