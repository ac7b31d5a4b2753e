"""Levi-Civita connection of AN, orbit models, shape operators and CPC sweeps."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import sqrt

import numpy as np

from . import eigen, exact
from .rootsys import StringClass, root_label, string_partition


class GeometryError(ValueError):
    pass


class NotASubalgebra(GeometryError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class InvarianceViolation(GeometryError):
    pass


class SymmetryViolation(GeometryError):
    """The computed shape operator is not self-adjoint (internal inconsistency)."""


# ----- connection and phi maps -------------------------------------------


def _is_exact(v):
    return np.asarray(v).dtype == object


def _bracket(decomp, x, y):
    alg = decomp.algebra
    if _is_exact(x) and _is_exact(y):
        return alg.bracket_vec(x, y)
    return alg.bracket_float_vec(np.asarray(x, float), np.asarray(y, float))


def _theta(decomp, x):
    if _is_exact(x):
        return decomp.algebra.theta @ x
    return decomp.algebra.theta_float @ x


def _proj(decomp, x, part):
    if _is_exact(x):
        return decomp.projector(part) @ x
    return decomp.projector_float(part) @ x


def levi_civita(decomp, x, y):
    """nabla_x y on AN for x, y in a + n.

    From 4<nabla_x y, z>_AN = <[x,y] + (1 - theta)[theta x, y], z>_Btheta the a-part of
    nabla_x y is a quarter of the a-part of the right side and the n-part is half of its n-part.
    """
    u = _bracket(decomp, x, y)
    w = _bracket(decomp, _theta(decomp, x), y)
    u = u + w - _theta(decomp, w)
    if _is_exact(u):
        return Fraction(1, 4) * _proj(decomp, u, "a") + Fraction(1, 2) * _proj(decomp, u, "n")
    return 0.25 * _proj(decomp, u, "a") + 0.5 * _proj(decomp, u, "n")


def string_bottom(decomp, nu, gamma):
    """Lowest root of the nu-string through gamma (gamma itself if gamma - nu is not a root)."""
    sysm = decomp.system
    g = gamma
    while sysm.is_root(g - nu):
        g = g - nu
    return sysm.canonical(g)


def phi_scale(decomp, nu, gamma):
    """|nu|^-1 (-A_{nu, gamma0})^-1/2 where gamma0 is the bottom of the nu-string through gamma."""
    sysm = decomp.system
    if not sysm.is_root(gamma) or not sysm.is_root(nu):
        raise GeometryError("phi needs two roots")
    if gamma.coeffs == nu.coeffs or (gamma + gamma).coeffs == nu.coeffs or (nu + nu).coeffs == gamma.coeffs:
        raise GeometryError("phi needs non-proportional roots")
    g0 = string_bottom(decomp, nu, gamma)
    a = decomp.cartan_integer(nu, g0)
    if a >= 0:
        raise GeometryError(f"the {root_label(nu)}-string through {root_label(gamma)} is trivial")
    return 1.0 / (sqrt(float(decomp.length_sq(nu))) * sqrt(-a))


def phi_apply(decomp, xi, nu, x, gamma, theta=False):
    """phi_xi(x) for x in g_gamma (or phi_{theta xi} when ``theta``); float result."""
    c = phi_scale(decomp, nu, gamma)
    alg = decomp.algebra
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    if theta:
        return -c * alg.bracket_float_vec(alg.theta_float @ xi, x)
    return c * alg.bracket_float_vec(xi, x)


def phi_map(decomp, xi, nu, gamma, theta=False):
    """Matrix of phi_xi: g_gamma -> g_{gamma+nu} in AN-orthonormal root-space bases.

    With ``theta`` the map is phi_{theta xi}: g_gamma -> g_{gamma-nu}.
    """
    src = decomp.unit_vectors(gamma)
    tgt_root = gamma - nu if theta else gamma + nu
    if not decomp.system.is_root(tgt_root):
        raise GeometryError(f"{root_label(tgt_root)} is not a root")
    tgt = decomp.unit_vectors(decomp.system.canonical(tgt_root))
    g = decomp.an_gram_float
    imgs = np.array([phi_apply(decomp, xi, nu, s, gamma, theta=theta) for s in src])
    return tgt @ g @ imgs.T


# ----- orbits ------------------------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    grid: int = 33
    random: int = 128
    cpc_tol: float = 1e-8
    cluster_tol: float = 1e-7
    symmetry_tol: float = 1e-10
    solver: str = "lapack"


@dataclass
class SpectrumReport:
    direction: list
    eigenvalues: list
    cluster_tol: float
    self_adjoint_residual: float

    def values(self):
        return eigen.expand(self.eigenvalues)

    @property
    def dim(self):
        return sum(m for _, m in self.eigenvalues)

    def to_dict(self):
        return {
            "direction": [float(x) for x in self.direction],
            "eigenvalues": [{"value": float(v), "multiplicity": int(m)} for v, m in self.eigenvalues],
            "cluster_tol": self.cluster_tol,
            "self_adjoint_residual": float(self.self_adjoint_residual),
        }


@dataclass
class CpcVerdict:
    is_cpc: bool
    max_spectrum_deviation: float
    witness_directions: tuple
    samples: int
    reference: SpectrumReport = None
    symmetry_residual: float = 0.0

    def to_dict(self):
        return {
            "is_cpc": bool(self.is_cpc),
            "max_spectrum_deviation": float(self.max_spectrum_deviation),
            "witness_directions": [[float(x) for x in d] for d in self.witness_directions],
            "samples": int(self.samples),
            "reference_spectrum": self.reference.to_dict()["eigenvalues"] if self.reference else None,
            "symmetry_residual": float(self.symmetry_residual),
        }


@dataclass(eq=False)
class OrbitModel:
    decomposition: object
    v_spec: tuple
    tangent_exact: np.ndarray
    normal_exact: np.ndarray
    tangent_basis: np.ndarray
    tangent_roots: tuple
    normal_basis: np.ndarray
    normal_roots: tuple
    string_partition: list = field(default_factory=list)

    @property
    def dim(self):
        return self.tangent_basis.shape[0]

    @property
    def codim(self):
        return self.normal_basis.shape[0]

    @property
    def psi(self):
        return tuple(r for r, _ in self.v_spec)

    def normal_rows(self, root):
        return np.array([v for v, r in zip(self.normal_basis, self.normal_roots) if r == root])

    @cached_property
    def normal_operators(self):
        """Shape operator matrices for each normal basis vector, stacked (k, m, m)."""
        d = self.decomposition
        c = d.algebra.bracket_float
        th = d.algebra.theta_float
        g = d.metric_float
        e = self.tangent_basis
        e_th = e @ th.T
        ops = []
        for n in self.normal_basis:
            r = np.einsum("j,ijk->ik", n, c)  # [x, n] = x @ r
            w = e_th @ r
            u = e @ r + w - w @ th.T
            ops.append(-0.25 * (u @ g @ e.T))
        return np.array(ops).reshape(len(ops), self.dim, self.dim)

    def direction_coords(self, xi):
        """Coordinates of a unit normal in normal_basis; rejects non-normal or non-unit input."""
        xi = np.asarray(xi, dtype=float)
        k = self.codim
        if xi.shape == (k,):
            coords = xi
        elif xi.shape == (self.decomposition.dim,):
            g = self.decomposition.an_gram_float
            coords = self.normal_basis @ g @ xi
            if np.abs(coords @ self.normal_basis - xi).max() > 1e-10:
                raise GeometryError("direction is not normal to the orbit")
        else:
            raise GeometryError(f"direction has wrong shape {xi.shape}")
        if abs(np.linalg.norm(coords) - 1.0) > 1e-10:
            raise GeometryError("direction is not a unit vector")
        return coords

    def to_dict(self):
        return {
            "dim": self.dim,
            "codim": self.codim,
            "psi": [list(r.coeffs) for r in self.psi],
            "v_dims": {root_label(r): int(rows.shape[0]) for r, rows in self.v_spec},
            "classes": [
                {"representative": list(c.representative.coeffs), "shape": c.shape,
                 "members": [list(m.coeffs) for m in c.members], "dim": len(idx)}
                for c, idx in self.string_partition
            ],
        }


def closure_violation(decomp, s_rows, v_rows):
    """First pair (i, j) with [s_i, s_j] not orthogonal to V, or None. Exact."""
    alg = decomp.algebra
    s_int, _ = exact.integer_scaled(s_rows)
    for v in v_rows:
        w = decomp.metric @ v
        w_int, _ = exact.integer_scaled(w)
        t = np.tensordot(alg.bracket_int.astype(object), w_int, axes=([2], [0]))
        k = s_int @ t @ s_int.T
        bad = np.argwhere(np.vectorize(lambda x: x != 0)(k)) if k.size else []
        if len(bad):
            i, j = bad[0]
            return int(i), int(j)
    return None


def _psi_is_a2_pair(decomp, psi):
    if len(psi) != 2:
        return False
    a, b = psi
    if a not in decomp.simple_roots or b not in decomp.simple_roots:
        return False
    return decomp.cartan_integer(a, b) == -1 and decomp.cartan_integer(b, a) == -1


def _coset_classes(decomp, psi):
    """Classes of positive roots whose differences lie in the rational span of psi."""
    basis = exact.qarray([list(r.coeffs) for r in psi]) if psi else exact.qzeros((0, decomp.system.rank))
    classes, seen = [], set()
    for r in decomp.positive_roots:
        if r.coeffs in seen:
            continue
        members = [m for m in decomp.positive_roots
                   if exact.in_span(basis, exact.qarray(list((m - r).coeffs)))]
        seen.update(m.coeffs for m in members)
        classes.append(StringClass(members[0], tuple(members), "coset"))
    return classes


def build_orbit(decomp, v_spec, verify=True):
    """Orbit of s = a + (n - V) for V = sum of V_alpha, V_alpha inside g_alpha.

    ``v_spec`` is a sequence of (root, exact basis rows). With ``verify`` the
    subalgebra property of s is checked exactly.
    """
    seen = set()
    spec = []
    for root, rows in v_spec:
        root = decomp.system.canonical(root)
        if not root.is_positive() or not decomp.system.is_root(root):
            raise GeometryError(f"{root_label(root)} is not a positive root")
        if root.coeffs in seen:
            raise GeometryError(f"root {root_label(root)} appears twice in V")
        seen.add(root.coeffs)
        rows = exact.qarray(rows)
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise GeometryError(f"V component for {root_label(root)} is empty")
        if exact.rank(rows) != rows.shape[0]:
            raise GeometryError(f"V component for {root_label(root)} has dependent rows")
        for v in rows:
            if not decomp.in_root_space(v, root):
                raise GeometryError(f"V component is not inside g_{root_label(root)}")
        spec.append((root, rows))
    vmap = {r.coeffs: rows for r, rows in spec}
    t_rows, t_pieces = [], []
    t_pieces.append((None, decomp.a_basis))
    for r in decomp.positive_roots:
        space = decomp.space(r)
        if r.coeffs in vmap:
            coeffs = exact.nullspace(vmap[r.coeffs] @ decomp.metric_on(r))
            comp = coeffs @ space if coeffs.shape[0] else exact.qzeros((0, decomp.dim))
        else:
            comp = space
        if comp.shape[0]:
            t_pieces.append((r, comp))
    for r, rows in t_pieces:
        t_rows.extend(rows)
    tangent_exact = np.array(t_rows, dtype=object)
    normal_exact = np.array([v for _, rows in spec for v in rows], dtype=object)
    if verify:
        bad = closure_violation(decomp, tangent_exact, normal_exact)
        if bad is not None:
            i, j = bad
            labels = [root_label(r) if r is not None else "a" for r, rows in t_pieces for _ in rows]
            raise NotASubalgebra(
                f"s is not a subalgebra: [{labels[i]} vector #{i}, {labels[j]} vector #{j}] has a component in V",
                pair=bad,
            )
    tb, tr = [], []
    for r, rows in t_pieces:
        on = decomp.orthonormal_float(rows)
        tb.extend(on)
        tr.extend([r] * on.shape[0])
    nb, nr = [], []
    for r, rows in spec:
        on = decomp.orthonormal_float(rows)
        nb.extend(on)
        nr.extend([r] * on.shape[0])
    orbit = OrbitModel(
        decomposition=decomp,
        v_spec=tuple(spec),
        tangent_exact=tangent_exact,
        normal_exact=normal_exact,
        tangent_basis=np.array(tb).reshape(len(tb), decomp.dim),
        tangent_roots=tuple(tr),
        normal_basis=np.array(nb).reshape(len(nb), decomp.dim),
        normal_roots=tuple(nr),
    )
    psi = orbit.psi
    if _psi_is_a2_pair(decomp, psi):
        classes = string_partition(decomp.system, psi[0], psi[1])
    else:
        classes = _coset_classes(decomp, psi)
    part = []
    for c in classes:
        keys = {m.coeffs for m in c.members}
        idx = [i for i, r in enumerate(tr) if r is not None and r.coeffs in keys]
        if idx:
            part.append((c, np.array(idx)))
    orbit.string_partition = part
    return orbit


def build_orbit_from_subspace(decomp, v_rows, verify=True):
    """Orbit data for s = (a + n) minus an arbitrary subspace V of n (no root labels)."""
    v_rows = exact.qarray(v_rows)
    an = decomp.an_basis
    for v in v_rows:
        if not exact.in_span(an, v) or not exact.is_zero(decomp.project(v, "a")):
            raise GeometryError("V must lie in n")
    tangent = exact.orthogonal_complement(v_rows, decomp.an_gram, an)
    if verify:
        bad = closure_violation(decomp, tangent, v_rows)
        if bad is not None:
            raise NotASubalgebra("s is not a subalgebra", pair=bad)
    tb = decomp.orthonormal_float(tangent)
    nb = decomp.orthonormal_float(v_rows)
    return OrbitModel(decomp, (), tangent, v_rows, tb, (None,) * tb.shape[0], nb, (None,) * nb.shape[0], [])


# ----- shape operators and spectra --------------------------------------


def shape_operator(orbit, xi):
    """Matrix of S_xi in the orthonormal tangent basis, and its symmetry residual."""
    coords = orbit.direction_coords(xi)
    m = np.tensordot(coords, orbit.normal_operators, axes=1)
    return m, float(np.abs(m - m.T).max(initial=0.0))


def principal_curvatures(orbit, xi, cluster_tol=1e-7, solver="jacobi", symmetry_tol=1e-8):
    coords = orbit.direction_coords(xi)
    m, res = shape_operator(orbit, coords)
    if res > symmetry_tol:
        raise SymmetryViolation(f"shape operator symmetry residual {res:.3e}")
    vals = eigen.symmetric_eigenvalues(0.5 * (m + m.T), solver=solver)
    return SpectrumReport(list(coords), eigen.cluster(vals, cluster_tol), cluster_tol, res)


def sample_directions(k, config):
    """Unit directions (normal-basis coordinates) used by the CPC sweep."""
    if k < 1:
        raise GeometryError("the orbit has no normal directions")
    if k == 1:
        return np.array([[1.0], [-1.0]])
    if k == 2:
        phis = np.linspace(0.0, np.pi / 2, config.grid)
        return np.stack([np.cos(phis), np.sin(phis)], axis=1)
    rng = np.random.default_rng(config.seed)
    rand = rng.normal(size=(config.random, k))
    rand /= np.linalg.norm(rand, axis=1, keepdims=True)
    eye = np.eye(k)
    diag = [(eye[i] + eye[j]) / sqrt(2) for i in range(k) for j in range(i + 1, k)]
    return np.vstack([rand, eye, np.array(diag)])


def sampled_spectra(orbit, config=None, directions=None):
    """Sorted spectra of S_xi at the sweep directions: (directions, spectra, symmetry residual)."""
    config = config or SamplerConfig()
    dirs = sample_directions(orbit.codim, config) if directions is None else np.asarray(directions, float)
    ops = np.tensordot(dirs, orbit.normal_operators, axes=1)
    sym = float(np.abs(ops - np.swapaxes(ops, 1, 2)).max(initial=0.0))
    if sym > 1e-8:
        raise SymmetryViolation(f"shape operator symmetry residual {sym:.3e}")
    if config.solver == "lapack":
        spectra = eigen.symmetric_eigenvalues(ops, solver="lapack")
    else:
        spectra = np.array([eigen.symmetric_eigenvalues(o, solver=config.solver) for o in ops])
    spectra = np.sort(spectra, axis=1).reshape(len(dirs), orbit.dim)
    return dirs, spectra, sym


def cpc_sweep(orbit, config=None, directions=None):
    """Compare spectra of S_xi over sampled unit normals (max L-infinity deviation)."""
    config = config or SamplerConfig()
    dirs, spectra, sym = sampled_spectra(orbit, config, directions)
    if orbit.dim == 0:
        dev, wit = 0.0, (dirs[0], dirs[0])
    else:
        spread = spectra.max(axis=0) - spectra.min(axis=0)
        col = int(np.argmax(spread))
        dev = float(spread[col])
        wit = (dirs[int(np.argmax(spectra[:, col]))], dirs[int(np.argmin(spectra[:, col]))])
    ref = SpectrumReport(list(dirs[0]), eigen.cluster(spectra[0], config.cluster_tol), config.cluster_tol, sym)
    return CpcVerdict(dev <= config.cpc_tol, dev, (list(wit[0]), list(wit[1])), len(dirs), ref, sym)


def string_block(orbit, xi, cls, leak_tol=1e-9):
    """Block of S_xi on the tangent sub-basis of a string class; returns (block, leakage)."""
    for c, idx in orbit.string_partition:
        if c.representative == cls.representative and c.members == cls.members:
            break
    else:
        raise GeometryError("class is not part of this orbit's string partition")
    m, _ = shape_operator(orbit, xi)
    mask = np.zeros(orbit.dim, dtype=bool)
    mask[idx] = True
    leak = float(np.abs(m[np.ix_(mask, ~mask)]).max(initial=0.0))
    if leak > leak_tol:
        raise InvarianceViolation(f"shape operator leaks {leak:.3e} out of the class of {root_label(cls.representative)}")
    return m[np.ix_(idx, idx)], leak


def austere_minimal_check(report, trace_tol=1e-8):
    vals = report.values()
    tol = report.cluster_tol
    # austere: the multiset of principal curvatures is invariant under x -> -x
    austere = vals.size == 0 or bool(np.abs(np.sort(vals) - np.sort(-vals)).max() <= tol)
    minimal = abs(float(vals.sum())) <= trace_tol
    return austere, minimal


def orbit_austere_minimal(orbit, config=None):
    """Austere / minimal over all sweep directions."""
    config = config or SamplerConfig()
    austere, minimal = True, True
    for d in sample_directions(orbit.codim, config):
        a, m = austere_minimal_check(principal_curvatures(orbit, d, config.cluster_tol, solver="lapack"))
        austere &= a
        minimal &= m
    return austere, minimal
