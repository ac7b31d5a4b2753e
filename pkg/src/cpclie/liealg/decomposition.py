"""Restricted root space decomposition, Iwasawa data and the metric on AN."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations

import numpy as np

from .. import exact
from ..rootsys import build_root_system, cartan_integer
from .algebra import AlgebraError


class DecompositionError(AlgebraError):
    """The computed decomposition is internally inconsistent."""


def _restricted_eigen(matrix, rows):
    """Split span(rows) into eigenspaces of ``matrix`` (which preserves the span)."""
    if rows.shape[0] == 0:
        return []
    images = matrix @ rows.T
    x = exact.solve(rows.T, images)  # rows.T @ x == images
    vals = np.linalg.eigvals(exact.to_float(x))
    if np.abs(vals.imag).max(initial=0) > 1e-9:
        raise DecompositionError("ad(H) has non-real eigenvalues on a subspace")
    distinct = sorted({exact.rationalize(v.real, max_den=1000, tol=1e-7) for v in vals})
    out = []
    m = rows.shape[0]
    for mu in distinct:
        ker = exact.nullspace(x - mu * exact.qeye(m))
        if ker.shape[0]:
            out.append((mu, ker @ rows))
    if sum(b.shape[0] for _, b in out) != m:
        raise DecompositionError("ad(a) is not diagonalizable over Q on this subspace")
    return out


@dataclass(eq=False)
class RestrictedDecomposition:
    algebra: object
    model: object
    a_basis: np.ndarray
    regular_element: np.ndarray
    system: object
    simple_roots: tuple
    positive_roots: tuple
    functionals: dict
    root_spaces: dict
    g0_basis: np.ndarray
    k0_basis: np.ndarray
    H: dict
    metric_scale: Fraction
    metric: np.ndarray
    _blocks: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def roots(self):
        return self.positive_roots + tuple(-r for r in self.positive_roots)

    def root(self, coeffs):
        return self.system.root(tuple(coeffs))

    def space(self, r):
        """Exact orthogonal basis rows of g_r (r may be negative)."""
        key = r.coeffs
        if key not in self.root_spaces:
            raise DecompositionError(f"{r} is not a restricted root")
        return self.root_spaces[key]

    def multiplicity(self, r):
        return self.space(r).shape[0]

    def inner(self, x, y):
        """Scaled B_theta inner product (exact)."""
        return x @ self.metric @ y

    def an_inner(self, x, y):
        return x @ self.an_gram @ y

    def cartan_integer(self, a, b):
        return cartan_integer(self.system, a, b)

    def length_sq(self, r):
        return self.system.length_sq(r)

    # ----- change of basis and projections -------------------------------

    @cached_property
    def _adapted(self):
        """Rows of the adapted basis with their block tags, and the inverse of its transpose."""
        rows, tags = [], []
        for v in self.a_basis:
            rows.append(v)
            tags.append("a")
        for v in self.k0_basis:
            rows.append(v)
            tags.append("k0")
        for r in self.roots:
            for v in self.space(r):
                rows.append(v)
                tags.append(r.coeffs)
        p = np.array(rows, dtype=object)
        if p.shape[0] != self.dim:
            raise DecompositionError("root spaces, a and k0 do not add up to the whole algebra")
        return p, tags, exact.inverse(p.T)

    def components(self, x):
        """Coordinates of x in the adapted basis."""
        return self._adapted[2] @ x

    @cached_property
    def _components_scaled(self):
        ints, d = exact.integer_scaled(self._adapted[2])
        return ints, d

    def in_root_space(self, x, r):
        """Exact test x in g_r, via integer-scaled adapted coordinates."""
        ints, _ = self._components_scaled
        xi, _ = exact.integer_scaled(x)
        comps = ints @ xi
        mask = self._mask(r)
        return all(c == 0 for c, m in zip(comps, mask) if not m)

    def metric_on(self, r):
        """metric @ space(r).T, cached; <x, y_j> for y_j in g_r is x @ metric_on(r)."""
        key = ("metric_on", r.coeffs)
        if key not in self._blocks:
            self._blocks[key] = self.metric @ self.space(r).T
        return self._blocks[key]

    def _mask(self, part):
        _, tags, _ = self._adapted
        if part == "a":
            sel = [t == "a" for t in tags]
        elif part == "k0":
            sel = [t == "k0" for t in tags]
        elif part == "g0":
            sel = [t in ("a", "k0") for t in tags]
        elif part == "n":
            pos = {r.coeffs for r in self.positive_roots}
            sel = [t in pos for t in tags]
        elif part == "an":
            pos = {r.coeffs for r in self.positive_roots}
            sel = [t == "a" or t in pos for t in tags]
        elif hasattr(part, "coeffs") and part.coeffs in self.root_spaces:
            sel = [t == part.coeffs for t in tags]
        else:
            raise DecompositionError(f"unknown subspace tag {part!r}; use a, k0, g0, n, an or a root")
        return np.array(sel)

    def projector(self, part):
        """Exact projection matrix onto a block along the other blocks."""
        key = part if isinstance(part, str) else getattr(part, "coeffs", part)
        if key not in self._blocks:
            p, _, pt_inv = self._adapted
            m = self._mask(part)
            self._blocks[key] = exact.qmatmul(p[m].T, pt_inv[m])
        return self._blocks[key]

    def project(self, x, part):
        return self.projector(part) @ x

    def projector_float(self, part):
        key = ("f", part if isinstance(part, str) else part.coeffs)
        if key not in self._blocks:
            self._blocks[key] = exact.to_float(self.projector(part))
        return self._blocks[key]

    @cached_property
    def an_gram(self):
        """Gram matrix of <.,.>_AN extended by zero outside a + n."""
        pa, pn = self.projector("a"), self.projector("n")
        half = Fraction(1, 2)
        return exact.qmatmul(pa.T, self.metric, pa) + half * exact.qmatmul(pn.T, self.metric, pn)

    @cached_property
    def an_gram_float(self):
        return exact.to_float(self.an_gram)

    @cached_property
    def metric_float(self):
        return exact.to_float(self.metric)

    @cached_property
    def an_basis(self):
        """Exact basis rows of a + n: a first, then positive root spaces in order."""
        rows = list(self.a_basis)
        for r in self.positive_roots:
            rows.extend(self.space(r))
        return np.array(rows, dtype=object)

    def orthonormal_float(self, rows):
        """AN-orthonormal float basis of span(rows) (rows orthogonal or not)."""
        rows = exact.to_float(rows) if np.asarray(rows).dtype == object else np.asarray(rows, float)
        return orthonormalize(rows, self.an_gram_float)

    def unit_vectors(self, r):
        """AN-orthonormal float basis of g_r."""
        key = ("unit", r.coeffs)
        if key not in self._blocks:
            self._blocks[key] = self.orthonormal_float(self.space(r))
        return self._blocks[key]

    def summary(self):
        return {
            "algebra": self.algebra.name,
            "dim": self.dim,
            "rank": len(self.a_basis),
            "family": self.system.family,
            "metric_scale": str(self.metric_scale),
            "dim_k0": int(self.k0_basis.shape[0]),
            "positive_roots": [
                {
                    "root": list(r.coeffs),
                    "level": r.level,
                    "length_sq": str(r.length_sq),
                    "multiplicity": self.multiplicity(r),
                }
                for r in self.positive_roots
            ],
        }


def orthonormalize(rows, gram):
    """Modified Gram-Schmidt in the inner product ``gram``; drops dependent rows."""
    out = []
    for v in np.asarray(rows, dtype=float):
        w = v.copy()
        for _ in range(2):
            for u in out:
                w = w - (w @ gram @ u) * u
        n = np.sqrt(max(w @ gram @ w, 0.0))
        if n > 1e-10:
            out.append(w / n)
    return np.array(out).reshape(len(out), gram.shape[0])


def orthonormalize_an(decomp, rows):
    """AN-orthonormal float basis from linearly independent rational rows.

    Independence is decided exactly; a dependent row is reported by index.
    """
    rows = np.asarray(rows, dtype=object)
    if rows.ndim != 2 or rows.shape[0] == 0:
        return np.zeros((0, decomp.dim))
    for i in range(rows.shape[0]):
        if exact.rank(rows[: i + 1]) != i + 1:
            raise DecompositionError(f"input row {i} depends on the previous rows")
    for i, v in enumerate(rows):
        if not exact.is_zero(decomp.project(v, "an") - v):
            raise DecompositionError(f"input row {i} is not in a + n")
    return orthonormalize(exact.to_float(rows), decomp.an_gram_float)


def _support_index(rows):
    return min(
        (j for v in rows for j, x in enumerate(v) if x != 0),
        default=10**9,
    )


def decompose(model):
    """Compute the restricted root decomposition of a matrix model."""
    alg = model.algebra
    n = alg.dim
    a_basis = model.a_basis
    r = a_basis.shape[0]
    bt = alg.btheta_raw
    # joint eigenspaces of ad(a)
    pieces = [((), exact.qeye(n))]
    for h in a_basis:
        ad_h = alg.ad(h)
        new = []
        for vals, rows in pieces:
            for mu, sub in _restricted_eigen(ad_h, rows):
                new.append((vals + (mu,), sub))
        pieces = new
    zero = tuple(Fraction(0) for _ in range(r))
    g0 = [rows for vals, rows in pieces if vals == zero]
    if not g0:
        raise DecompositionError("no zero weight space")
    g0 = g0[0]
    for h in a_basis:
        if not exact.in_span(g0, h):
            raise DecompositionError("a is not contained in g0")
    weights = {vals: rows for vals, rows in pieces if vals != zero}
    t_reg = exact.solve(a_basis.T, model.regular_element)

    def at_reg(vals):
        return sum(v * t for v, t in zip(vals, t_reg))

    if any(at_reg(v) == 0 for v in weights):
        raise DecompositionError("regular element vanishes on a root")
    positive = [v for v in weights if at_reg(v) > 0]
    pos_set = set(positive)
    simple = [
        v for v in positive
        if not any(tuple(x - y for x, y in zip(v, w)) in pos_set for w in positive)
    ]
    if len(simple) != r:
        raise DecompositionError(f"found {len(simple)} simple roots for rank {r}")
    gram_a = a_basis @ bt @ a_basis.T
    gram_a_inv = exact.inverse(gram_a)

    def raw_ip(u, v):
        return exact.qarray(u) @ gram_a_inv @ exact.qarray(v)

    system_plain = build_root_system(model.family, model.rank)
    target = [list(row) for row in system_plain.cartan_matrix]
    best = None
    for perm in permutations(range(r)):
        cand = [simple[i] for i in perm]
        cm = [[int(2 * raw_ip(b, a) / raw_ip(a, a)) for b in cand] for a in cand]
        if cm != target:
            continue
        key = tuple(_support_index(weights[v]) for v in cand)
        if best is None or key < best[0]:
            best = (key, cand)
    if best is None:
        raise DecompositionError(f"realized simple roots do not form a {model.family}{model.rank} system")
    simple = best[1]
    smat = exact.qarray(simple).T  # columns = simple functionals

    def coeffs_of(vals):
        c = exact.solve(smat, exact.qarray(vals))
        if any(x.denominator != 1 for x in c):
            raise DecompositionError("root is not an integer combination of simple roots")
        return tuple(int(x) for x in c)

    scale = min(raw_ip(a, a) for a in simple) / 2
    system = build_root_system(model.family, model.rank, model.profile)
    realized = {coeffs_of(v): v for v in weights}
    abstract = {rv.coeffs for rv in system.positive_roots}
    if {k for k in realized if all(c >= 0 for c in k)} != abstract:
        raise DecompositionError("realized positive roots differ from the abstract system")
    if len(realized) != 2 * len(abstract):
        raise DecompositionError("realized roots are not symmetric under negation")
    metric = scale * bt
    functionals, spaces, hvec = {}, {}, {}
    for key, vals in realized.items():
        rv = system.canonical(system.root(key))
        if raw_ip(vals, vals) / scale != rv.length_sq:
            raise DecompositionError(f"length of {rv} disagrees with the abstract system")
        functionals[key] = exact.qarray(vals)
        spaces[key] = exact.orthogonalize(weights[vals], metric)
        if key in abstract and spaces[key].shape[0] != system.multiplicity(rv):
            raise DecompositionError(f"multiplicity of {rv} disagrees with the profile")
        hvec[key] = (gram_a_inv @ exact.qarray(vals) / scale) @ a_basis
    k0 = exact.orthogonalize(exact.orthogonal_complement(a_basis, metric, g0), metric)
    return RestrictedDecomposition(
        algebra=alg,
        model=model,
        a_basis=a_basis,
        regular_element=model.regular_element,
        system=system,
        simple_roots=system.simple_roots,
        positive_roots=system.positive_roots,
        functionals=functionals,
        root_spaces=spaces,
        g0_basis=g0,
        k0_basis=k0,
        H=hvec,
        metric_scale=scale,
        metric=metric,
    )
