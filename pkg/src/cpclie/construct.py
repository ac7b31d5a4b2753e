"""Builders and checkers for CPC orbit scenarios.

Subspaces V are always handled as exact rational row bases. Unit vectors
are not rational in general, so the structure identities below are checked
in their homogeneous form: with X, Y in g_{a0+a1} orthogonal of equal AN
length s = <X,X>_AN, the operator ad([theta X, Y]) / (2s) is the complex
structure on g_{a0}, g_{a1}, and ad([theta X, Y]) / (4s) the one on span(X, Y).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, sqrt

import numpy as np

from . import eigen, exact
from .geometry import (
    GeometryError,
    NotASubalgebra,
    SamplerConfig,
    build_orbit,
    cpc_sweep,
    phi_apply,
    principal_curvatures,
)
from .rootsys import root_label

CASE_TAGS = ("I", "II-i", "II-ii-a", "II-ii-b", "II-ii-c", "custom")


class ConstructionError(ValueError):
    pass


class StructureError(ConstructionError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


@dataclass
class VSpec:
    entries: list
    case_tag: str = "custom"

    def __post_init__(self):
        if self.case_tag not in CASE_TAGS:
            raise ConstructionError(f"unknown case tag {self.case_tag!r}")
        seen = set()
        for root, rows in self.entries:
            if root.coeffs in seen:
                raise ConstructionError(f"root {root_label(root)} appears twice")
            seen.add(root.coeffs)
            if len(rows) == 0:
                raise ConstructionError(f"V_{root_label(root)} is empty")

    @property
    def roots(self):
        return [r for r, _ in self.entries]

    def rows(self, root):
        for r, rows in self.entries:
            if r.coeffs == root.coeffs:
                return rows
        raise KeyError(root_label(root))

    def to_dict(self):
        return {
            "case": self.case_tag,
            "entries": [
                {"root": list(r.coeffs), "basis": [[str(x) for x in row] for row in rows]}
                for r, rows in self.entries
            ],
        }

    @classmethod
    def from_dict(cls, decomp, data):
        entries = []
        for e in data["entries"]:
            root = decomp.system.root(tuple(e["root"]))
            dim = decomp.algebra.dim
            if any(len(row) != dim for row in e["basis"]):
                raise ConstructionError(f"basis rows for {root_label(root)} must have {dim} coordinates")
            entries.append((root, exact.qarray([[Fraction(x) for x in row] for row in e["basis"]])))
        return cls(entries, data.get("case", "custom"))


def orbit_of(decomp, vspec, verify=True):
    return build_orbit(decomp, vspec.entries, verify=verify)


# ----- cases (I) and (II) ---------------------------------------------------


def build_case_I(decomp, lam, dim=None, basis=None):
    """Orbit with V inside the single root space g_lam, lam in the reduced simple roots."""
    lam = decomp.system.canonical(lam)
    if lam not in decomp.system.reduced_simple:
        raise ConstructionError(f"{root_label(lam)} is not a simple root with 2*root not a root")
    if basis is None:
        space = decomp.space(lam)
        dim = space.shape[0] if dim is None else dim
        if not 1 <= dim <= space.shape[0]:
            raise ConstructionError(f"dim V must lie in [1, {space.shape[0]}]")
        basis = space[:dim]
    return orbit_of(decomp, VSpec([(lam, exact.qarray(basis))], "I"))


def _check_a2_pair(decomp, a0, a1):
    sysm = decomp.system
    for a in (a0, a1):
        if a not in sysm.reduced_simple:
            raise ConstructionError(f"{root_label(a)} is not in the reduced simple roots")
    if decomp.cartan_integer(a0, a1) != -1 or decomp.cartan_integer(a1, a0) != -1:
        raise ConstructionError(f"{root_label(a0)} and {root_label(a1)} are not joined by a single edge")


def build_case_II(decomp, a0, a1, v0, v1, tag="custom"):
    _check_a2_pair(decomp, a0, a1)
    spec = VSpec([(a0, exact.qarray(v0)), (a1, exact.qarray(v1))], tag)
    return orbit_of(decomp, spec)


@dataclass
class Characterization:
    holds: bool
    dim_v0: int
    dim_v1: int
    dim_bracket: int

    def to_dict(self):
        return {"holds": self.holds, "dims": [self.dim_v0, self.dim_v1, self.dim_bracket]}


def bracket_span(decomp, u_rows, v_rows):
    alg = decomp.algebra
    rows = [alg.bracket_vec(u, v) for u in u_rows for v in v_rows]
    return exact.row_basis(np.array(rows, dtype=object)) if rows else exact.qzeros((0, alg.dim))


def characterization_check(decomp, v0, v1):
    """dim V0 = dim V1 = dim [V0, V1], decided by exact ranks."""
    v0, v1 = exact.qarray(v0), exact.qarray(v1)
    d0, d1 = exact.rank(v0), exact.rank(v1)
    alg = decomp.algebra
    db = exact.rank(np.array([alg.bracket_vec(u, v) for u in v0 for v in v1], dtype=object))
    return Characterization(d0 == d1 == db, d0, d1, db)


# ----- complex and quaternionic structures ---------------------------------


@dataclass
class StructureCertificate:
    kind: str
    generators: list
    residuals: dict
    scales: list = field(default_factory=list)

    @property
    def valid(self):
        return all(r <= 1e-10 for r in self.residuals.values())

    def to_dict(self):
        return {
            "kind": self.kind,
            "generators": [[str(x) for x in g] for g in self.generators],
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "valid": self.valid,
        }


def _max_abs(arr):
    arr = np.asarray(arr, dtype=object)
    return float(max((abs(x) for x in arr.reshape(-1)), default=0))


def _op_residual(op, rows, target):
    """max |op rows^T - target rows^T| (exact)."""
    if rows.shape[0] == 0:
        return 0.0
    return _max_abs(op @ rows.T - target @ rows.T)


def _equal_orthogonal(decomp, vecs, root):
    space = decomp.space(root)
    for v in vecs:
        if not exact.in_span(space, v):
            raise StructureError(f"vector is not in g_{root_label(root)}")
    s = decomp.an_inner(vecs[0], vecs[0])
    if s == 0:
        raise StructureError("zero vector")
    for i, u in enumerate(vecs):
        for j, v in enumerate(vecs):
            want = s if i == j else 0
            if decomp.an_inner(u, v) != want:
                raise StructureError("vectors must be pairwise orthogonal with equal length")
    return s


def _sum_root(decomp, a0, a1):
    top = a0 + a1
    if not decomp.system.is_root(top):
        raise StructureError(f"{root_label(top)} is not a root")
    return decomp.system.canonical(top)


def complex_structure(decomp, a0, a1, x, y):
    """Certificate that ad([theta x, y]) gives complex structures on g_a0, g_a1 and span(x, y)."""
    top = _sum_root(decomp, a0, a1)
    if decomp.multiplicity(top) < 2:
        raise StructureError(f"dim g_{root_label(top)} < 2: no complex structure")
    x, y = exact.qarray(x), exact.qarray(y)
    s = _equal_orthogonal(decomp, [x, y], top)
    alg = decomp.algebra
    t = alg.bracket_vec(alg.theta @ x, y)
    ad = alg.ad(t)
    j_root = ad / (2 * s)
    j_top = ad / (4 * s)
    minus = -exact.qeye(alg.dim)
    xy = np.array([x, y], dtype=object)
    res = {
        "J^2+1 on g_a0": _op_residual(j_root @ j_root, decomp.space(a0), minus),
        "J^2+1 on g_a1": _op_residual(j_root @ j_root, decomp.space(a1), minus),
        "J^2+1 on span(X,Y)": _op_residual(j_top @ j_top, xy, minus),
        "[theta X, Y] in k0": _max_abs(t - decomp.project(t, "k0")),
    }
    return StructureCertificate("complex", [t], res, [Fraction(1, 2) / s])


def quaternionic_structure(decomp, a0, a1, x, y, z):
    """Certificate for J1 = ad[theta x, y]/(2s), J2 = ad[theta x, z]/(2s), J3 = J1 J2."""
    top = _sum_root(decomp, a0, a1)
    if decomp.multiplicity(top) < 3:
        raise StructureError(f"dim g_{root_label(top)} < 3: no quaternionic structure")
    x, y, z = exact.qarray(x), exact.qarray(y), exact.qarray(z)
    s = _equal_orthogonal(decomp, [x, y, z], top)
    alg = decomp.algebra
    t1 = alg.bracket_vec(alg.theta @ x, y)
    t2 = alg.bracket_vec(alg.theta @ x, z)
    j1 = alg.ad(t1) / (2 * s)
    j2 = alg.ad(t2) / (2 * s)
    j3 = j1 @ j2
    minus = -exact.qeye(alg.dim)
    zero = exact.qzeros((alg.dim, alg.dim))
    res = {}
    for name, root in (("g_a0", a0), ("g_a1", a1)):
        rows = decomp.space(root)
        res[f"J1^2+1 on {name}"] = _op_residual(j1 @ j1, rows, minus)
        res[f"J2^2+1 on {name}"] = _op_residual(j2 @ j2, rows, minus)
        res[f"J3^2+1 on {name}"] = _op_residual(j3 @ j3, rows, minus)
        res[f"J1J2+J2J1 on {name}"] = _op_residual(j1 @ j2 + j2 @ j1, rows, zero)
    for name, t in (("T1", t1), ("T2", t2)):
        res[f"{name} in k0"] = _max_abs(t - decomp.project(t, "k0"))
    return StructureCertificate("quaternionic", [t1, t2], res, [Fraction(1, 2) / s] * 2)


def _sqrt_fraction(q):
    if q <= 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def normalized_structure(decomp, t, x):
    """J = ad(t)/c with c > 0 chosen so that J^2 x = -x; requires c rational."""
    alg = decomp.algebra
    ad = alg.ad(t)
    x = exact.qarray(x)
    img = ad @ (ad @ x)
    # img = -c^2 x
    k = next((i for i, v in enumerate(x) if v != 0), None)
    if k is None:
        raise StructureError("zero vector")
    c2 = -img[k] / x[k]
    if not exact.is_zero(img + c2 * x):
        raise StructureError("ad(T)^2 is not a negative multiple of the identity on this vector")
    c = _sqrt_fraction(c2)
    if c is None:
        raise StructureError(f"ad(T)^2 = -{c2} is not a rational square; pass a rescaled T")
    return ad / c


def _annihilation_residual(decomp, ops, v0, v1):
    span = bracket_span(decomp, v0, v1)
    return max((_max_abs(op @ span.T) for op in ops), default=0.0) if span.shape[0] else 0.0


def build_V_complex(decomp, a0, a1, x0, x1, t):
    """V_k = span{X_k, J X_k} with J = ad(T) normalized; case (II)(ii)(b)."""
    _check_a2_pair(decomp, a0, a1)
    x0, x1 = exact.qarray(x0), exact.qarray(x1)
    j = normalized_structure(decomp, t, x0)
    minus = -exact.qeye(decomp.dim)
    v0 = np.array([x0, j @ x0], dtype=object)
    v1 = np.array([x1, j @ x1], dtype=object)
    for rows, root in ((v0, a0), (v1, a1)):
        res = _op_residual(j @ j, rows, minus)
        if res > 0:
            raise StructureError(f"J^2 + 1 does not vanish on V_{root_label(root)}", res)
        for v in rows:
            if not exact.in_span(decomp.space(root), v):
                raise StructureError(f"J does not preserve g_{root_label(root)}")
    res = _annihilation_residual(decomp, [j], v0, v1)
    if res > 0:
        raise StructureError("ad(T) does not vanish on [V0, V1]", res)
    ch = characterization_check(decomp, v0, v1)
    if not ch.holds or ch.dim_v0 != 2:
        raise StructureError(f"expected dim [V0, V1] = 2, got {ch.dim_bracket}")
    return VSpec([(a0, v0), (a1, v1)], "II-ii-b")


def build_V_quaternionic(decomp, a0, a1, x0, x1, t1, t2):
    """V_k = span{X_k, J1 X_k, J2 X_k, J3 X_k}; case (II)(ii)(c)."""
    _check_a2_pair(decomp, a0, a1)
    x0, x1 = exact.qarray(x0), exact.qarray(x1)
    j1 = normalized_structure(decomp, t1, x0)
    j2 = normalized_structure(decomp, t2, x0)
    j3 = j1 @ j2
    ops = [j1, j2, j3]
    minus = -exact.qeye(decomp.dim)
    vs = []
    for x, root in ((x0, a0), (x1, a1)):
        rows = np.array([x, j1 @ x, j2 @ x, j3 @ x], dtype=object)
        for op in ops:
            res = _op_residual(op @ op, rows, minus)
            if res > 0:
                raise StructureError(f"J^2 + 1 does not vanish on V_{root_label(root)}", res)
        vs.append(rows)
    res = _annihilation_residual(decomp, ops, vs[0], vs[1])
    if res > 0:
        raise StructureError("the structures do not vanish on [V0, V1]", res)
    ch = characterization_check(decomp, vs[0], vs[1])
    if not ch.holds or ch.dim_v0 != 4:
        raise StructureError(f"expected dim [V0, V1] = 4, got {ch.dim_bracket}")
    return VSpec([(a0, vs[0]), (a1, vs[1])], "II-ii-c")


def canonical_extension_scenario(decomp, a0, a1, vspec):
    """Orbit in the full space for V living in the A2 subsystem spanned by a0, a1."""
    _check_a2_pair(decomp, a0, a1)
    allowed = {a0.coeffs, a1.coeffs}
    for r in vspec.roots:
        if r.coeffs not in allowed:
            raise ConstructionError(f"V has a component in g_{root_label(r)} outside the pair")
    orbit = orbit_of(decomp, vspec)
    covered = sorted(m.coeffs for c, _ in orbit.string_partition for m in c.members)
    if covered != sorted(r.coeffs for r in decomp.positive_roots):
        raise ConstructionError("string partition does not cover all positive roots")
    return orbit


# ----- explicit block matrices --------------------------------------------


@dataclass
class BlockResult:
    kind: str
    matrix: np.ndarray
    spectrum: np.ndarray
    exact_matrix: object = None

    def to_dict(self):
        return {
            "kind": self.kind,
            "matrix": np.asarray(self.matrix, float).tolist(),
            "spectrum": [float(x) for x in self.spectrum],
        }


BLOCK_KINDS = ("G2", "orthogonal4", "case-ii-3x3", "case-iii-6x6", "tail-3x3")


def obstruction_block(kind, phi=0.0, alpha0_length=sqrt(2)):
    """The explicit shape-operator blocks and their spectra.

    ``alpha0_length`` is |alpha_0|. The G2 matrix is not symmetric (its basis is
    not orthonormal), so its spectrum comes from the exact characteristic polynomial.
    """
    c, s = np.cos(phi), np.sin(phi)
    h = alpha0_length / 2
    r2 = sqrt(2)
    if kind == "G2":
        m = exact.qarray([[0, 4, 0], ["1/2", 0, 3], [0, "1/2", 0]])
        vals = np.sort(eigen.char_poly_roots(m).real)
        return BlockResult(kind, exact.to_float(m), vals, m)
    if kind == "orthogonal4":
        m = h * np.array([[0, c, s, 0], [c, 0, 0, s], [s, 0, 0, c], [0, s, c, 0]])
    elif kind == "case-ii-3x3":
        m = h * np.array([[0, c, 0], [c, 0, s], [0, s, 0]])
    elif kind == "tail-3x3":
        m = h * np.array([[0, s, 0], [s, 0, c], [0, c, 0]])
    elif kind == "case-iii-6x6":
        m = h * np.array([
            [0, r2 * c, 0, 0, 0, 0],
            [r2 * c, 0, r2 * c, s, 0, 0],
            [0, r2 * c, 0, 0, r2 * s, 0],
            [0, s, 0, 0, c, 0],
            [0, 0, r2 * s, c, 0, r2 * s],
            [0, 0, 0, 0, r2 * s, 0],
        ])
    else:
        raise ConstructionError(f"unknown block kind {kind!r}; choose from {', '.join(BLOCK_KINDS)}")
    return BlockResult(kind, m, eigen.jacobi_eigenvalues(m))


# ----- scans ---------------------------------------------------------------


def random_subspace(rng, space, dim, bound=3):
    """Exact random dim-dimensional subspace of span(space): bounded integer combinations."""
    m = space.shape[0]
    if not 1 <= dim <= m:
        raise ConstructionError(f"subspace dimension must lie in [1, {m}]")
    while True:
        coeffs = rng.integers(-bound, bound + 1, size=(dim, m))
        q = exact.qarray(coeffs.tolist())
        if exact.rank(q) == dim:
            return q @ space


@dataclass
class ScanReport:
    space: str
    dims: tuple
    trials: int
    characterization_passes: int
    sweep_passes: int
    bracket_dims: dict
    agreement: int
    seed: int

    def to_dict(self):
        return {
            "space": self.space,
            "dims": list(self.dims),
            "trials": self.trials,
            "characterization_passes": self.characterization_passes,
            "sweep_passes": self.sweep_passes,
            "bracket_dims": {str(k): v for k, v in sorted(self.bracket_dims.items())},
            "agreement": self.agreement,
            "seed": self.seed,
        }


def codimension_scan(decomp, dims, trials, seed=0, sweep=True, config=None, pair=None):
    """Random (d0, d1) subspace pairs in an A2 pair of root spaces.

    Records how often dim V0 = dim V1 = dim [V0, V1] holds and, with ``sweep``,
    how often the CPC sweep passes and whether both verdicts agree. With
    ``dims=None`` each trial draws its own dimensions.
    """
    a0, a1 = pair or decomp.simple_roots[:2]
    _check_a2_pair(decomp, a0, a1)
    rng = np.random.default_rng(seed)
    config = config or SamplerConfig(seed=seed)
    m0, m1 = decomp.multiplicity(a0), decomp.multiplicity(a1)
    ch_pass = sw_pass = agree = 0
    hist = {}
    for _ in range(trials):
        if dims is None:
            d0, d1 = int(rng.integers(1, m0 + 1)), int(rng.integers(1, m1 + 1))
        else:
            d0, d1 = dims
        v0 = random_subspace(rng, decomp.space(a0), d0)
        v1 = random_subspace(rng, decomp.space(a1), d1)
        ch = characterization_check(decomp, v0, v1)
        hist[ch.dim_bracket] = hist.get(ch.dim_bracket, 0) + 1
        ch_pass += ch.holds
        if sweep:
            orbit = build_orbit(decomp, [(a0, v0), (a1, v1)], verify=False)
            ok = cpc_sweep(orbit, config).is_cpc
            sw_pass += ok
            agree += ok == ch.holds
    label = ("random", "random") if dims is None else tuple(dims)
    return ScanReport(decomp.algebra.name, label, trials, ch_pass, sw_pass, hist, agree, seed)


@dataclass
class LengthObstruction:
    verdict: object
    witness: list
    max_witness_error: float

    def to_dict(self):
        return {
            "verdict": self.verdict.to_dict(),
            "witness": self.witness,
            "max_witness_error": self.max_witness_error,
        }


def length_obstruction_scenario(decomp, phis=None, config=None):
    """so(2, 2+n): V = (codim-1 subspace of g_short) + g_long; the sweep must fail.

    The witness w = X + phi_{xi_long}(X), X the unit tangent vector left in
    g_short, satisfies S_xi w = sin(phi) |long|/2 w for xi = cos(phi) xi_short + sin(phi) xi_long.
    """
    sysm = decomp.system
    if sysm.family != "B" or sysm.rank != 2:
        raise ConstructionError("the length obstruction scenario needs a B2 system")
    longr = max(decomp.simple_roots, key=lambda r: r.length_sq)
    short = min(decomp.simple_roots, key=lambda r: r.length_sq)
    g_short = decomp.space(short)
    n = g_short.shape[0]
    if n < 2:
        raise ConstructionError("needs dim g_short >= 2")
    vspec = [(short, g_short[: n - 1]), (longr, decomp.space(longr))]
    orbit = build_orbit(decomp, vspec)
    verdict = cpc_sweep(orbit, config)
    xi_s = orbit.normal_basis[0]
    xi_l = orbit.normal_basis[-1]
    x = next(v for v, r in zip(orbit.tangent_basis, orbit.tangent_roots) if r == short)
    w = x + phi_apply(decomp, xi_l, longr, x, short)
    g = decomp.an_gram_float
    wc = orbit.tangent_basis @ g @ w
    half_len = sqrt(float(longr.length_sq)) / 2
    phis = np.linspace(0, np.pi / 2, 33) if phis is None else phis
    out, worst = [], 0.0
    for phi in phis:
        xi = np.cos(phi) * xi_s + np.sin(phi) * xi_l
        coords = orbit.normal_basis @ g @ xi
        m = np.tensordot(coords, orbit.normal_operators, axes=1)
        image = m.T @ wc  # S_xi w in tangent coordinates (m is symmetric)
        mu = float(image @ wc / (wc @ wc))
        resid = float(np.abs(image - mu * wc).max())
        expected = np.sin(phi) * half_len
        worst = max(worst, abs(mu - expected), resid)
        out.append({"phi": float(phi), "eigenvalue": mu, "expected": float(expected), "residual": resid})
    return LengthObstruction(verdict, out, worst)


# ----- normalizer certificate ----------------------------------------------


@dataclass
class NormalizerReport:
    m_dim: int
    orbit_ranks: list
    dim_v: int
    transitive_possible: bool
    witness: list = None
    m_basis: object = None
    tangent_normalizer_dim: int = None

    def to_dict(self):
        return {
            "m_dim": self.m_dim,
            "tangent_normalizer_dim": self.tangent_normalizer_dim,
            "dim_v": self.dim_v,
            "orbit_ranks": self.orbit_ranks,
            "transitive_possible": self.transitive_possible,
            "witness": self.witness,
        }


def _pairing(decomp, left, right, target):
    """Tensor <[left_a, right_i], target_j>_Btheta as object array (a, i, j), exact."""
    alg = decomp.algebra
    l_int, dl = exact.integer_scaled(left)
    r_int, dr = exact.integer_scaled(right)
    c = alg.bracket_int.astype(object)
    out = []
    for t in target:
        w = decomp.metric @ t
        w_int, dw = exact.integer_scaled(w)
        k = np.tensordot(c, w_int, axes=([2], [0]))
        out.append(l_int @ k @ r_int.T)
    return np.stack(out, axis=2) if out else np.zeros((left.shape[0], right.shape[0], 0), dtype=object)


def _closure_refine(decomp, m_basis, s_rows):
    """Largest subspace m' of span(m_basis) with [m', s] inside m' + s (exact fixed point)."""
    alg = decomp.algebra
    while m_basis.shape[0]:
        span = np.vstack([m_basis, s_rows]) if s_rows.shape[0] else m_basis
        ann = exact.nullspace(span)  # v in span  <=>  ann @ v = 0
        if ann.shape[0] == 0:
            return m_basis
        blocks = [(ann @ alg.ad(z) @ s_rows.T).reshape(-1) for z in m_basis]
        cond = np.array(blocks, dtype=object).T
        coeffs = exact.nullspace(cond)
        if coeffs.shape[0] == m_basis.shape[0]:
            return m_basis
        m_basis = coeffs @ m_basis if coeffs.shape[0] else exact.qzeros((0, alg.dim))
    return m_basis


def normalizer_check(orbit, seed=0, samples=16, bound=3):
    """Upper bound m for the Lie algebra of the normalizer of the orbit in K, and the
    rank of its action on normal directions.

    Start from {Z in k : [Z, (1-theta)s] inside (1-theta)s}; since ad(k) preserves
    p = (1-theta)s + (1-theta)V (an orthogonal sum) this is the condition
    [Z, (1-theta)s] orthogonal to (1-theta)V. The normalizer in G has Lie algebra
    m + s, a subalgebra, so m is then shrunk to the largest subspace with
    [m, s] inside m + s. For each sampled xi the report records
    dim([m, (1-theta)xi] + R(1-theta)xi); transitivity on the unit normal sphere
    is impossible as soon as one rank is below dim V.
    """
    decomp = orbit.decomposition
    alg = decomp.algebra
    n = alg.dim
    one = exact.qeye(n)
    k_basis = exact.nullspace(alg.theta - one)
    ps = (orbit.tangent_exact @ (one - alg.theta).T) if orbit.tangent_exact.shape[0] else exact.qzeros((0, n))
    pv = orbit.normal_exact @ (one - alg.theta).T
    t = _pairing(decomp, k_basis, ps, pv)
    cond = t.reshape(t.shape[0], -1).T  # rows: conditions, columns: k basis
    coeffs = exact.nullspace(cond) if cond.shape[0] else exact.qeye(k_basis.shape[0])
    m0 = coeffs @ k_basis if coeffs.shape[0] else exact.qzeros((0, n))
    m_basis = _closure_refine(decomp, m0, orbit.tangent_exact)
    dim_v = pv.shape[0]
    rng = np.random.default_rng(seed)
    dirs = [exact.unit(dim_v, i) for i in range(dim_v)]
    for _ in range(samples):
        c = rng.integers(-bound, bound + 1, size=dim_v)
        if np.any(c):
            dirs.append(exact.qarray(c.tolist()))
    ranks, witness, ok = [], None, True
    for c in dirs:
        xi = c @ pv
        rows = [alg.bracket_vec(z, xi) for z in m_basis] + [xi]
        rk = exact.rank(np.array(rows, dtype=object))
        ranks.append(rk)
        if rk != dim_v and ok:
            ok = False
            witness = [str(x) for x in c]
    return NormalizerReport(int(m_basis.shape[0]), ranks, dim_v, ok, witness, m_basis, int(m0.shape[0]))


# ----- convenience ---------------------------------------------------------


def kernel_dimension(orbit, xi, tol=1e-7):
    rep = principal_curvatures(orbit, xi, cluster_tol=tol)
    return sum(m for v, m in rep.eigenvalues if abs(v) <= tol)


__all__ = [
    "BLOCK_KINDS",
    "CASE_TAGS",
    "BlockResult",
    "Characterization",
    "ConstructionError",
    "GeometryError",
    "LengthObstruction",
    "NormalizerReport",
    "NotASubalgebra",
    "ScanReport",
    "StructureCertificate",
    "StructureError",
    "VSpec",
    "bracket_span",
    "build_V_complex",
    "build_V_quaternionic",
    "build_case_I",
    "build_case_II",
    "canonical_extension_scenario",
    "characterization_check",
    "codimension_scan",
    "complex_structure",
    "kernel_dimension",
    "length_obstruction_scenario",
    "normalized_structure",
    "normalizer_check",
    "obstruction_block",
    "orbit_of",
    "quaternionic_structure",
    "random_subspace",
]
