"""Exact identity checks on a realized algebra and its restricted root decomposition.

Every check returns the largest absolute residual it saw (a Fraction or int);
zero means the identity holds exactly on everything tested.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import exact
from ..geometry import levi_civita
from ..rootsys import root_label


@dataclass
class IdentityReport:
    algebra: str
    residuals: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    def record(self, name, residual, count=1):
        prev = self.residuals.get(name, 0)
        self.residuals[name] = max(prev, abs(residual))
        self.counts[name] = self.counts.get(name, 0) + count

    @property
    def ok(self):
        return all(r == 0 for r in self.residuals.values())

    def to_dict(self):
        return {
            "algebra": self.algebra,
            "ok": self.ok,
            "residuals": {k: str(v) for k, v in self.residuals.items()},
            "counts": dict(self.counts),
        }


def _maxabs(arr):
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(x) for x in arr.reshape(-1))
    return int(np.abs(arr).max())


def _safe_einsum(spec, *ops):
    """int64 einsum when the result provably fits, object ints otherwise."""
    bound = 1
    for op in ops:
        bound *= max(1, _maxabs(op))
    terms = 1
    for op in ops:
        terms *= max(op.shape)
    if bound * terms < 2**62 and all(op.dtype != object for op in ops):
        return np.einsum(spec, *ops)
    return np.einsum(spec, *[op.astype(object) for op in ops])


def jacobi_residual(alg):
    """Exhaustive over basis triples: [[i,j],k] + [[j,k],i] + [[k,i],j]."""
    c = alg.bracket_int
    t = _safe_einsum("ijl,lkm->ijkm", c, c)
    total = t + np.transpose(t, (2, 0, 1, 3)) + np.transpose(t, (1, 2, 0, 3))
    return _maxabs(total), c.shape[0] ** 3


def antisymmetry_residual(alg):
    c = alg.bracket_int
    return _maxabs(c + np.transpose(c, (1, 0, 2))), c.shape[0] ** 2


def killing_invariance_residual(alg):
    """B([i,j],k) - B(i,[j,k]) over all basis triples."""
    b, _ = exact.integer_scaled(alg.killing)
    b = exact.as_int64(b) if exact.as_int64(b) is not None else b
    c = alg.bracket_int
    lhs = _safe_einsum("ijl,lk->ijk", c, b)
    rhs = _safe_einsum("il,jkl->ijk", b, c)
    return _maxabs(lhs - rhs), c.shape[0] ** 3


def theta_residuals(alg):
    """theta^2 = 1 and theta[x, y] = [theta x, theta y] on all basis pairs."""
    th = alg.theta
    sq = _maxabs(exact.qmatmul(th, th) - exact.qeye(alg.dim))
    t_int, dt = exact.integer_scaled(th)
    t_int = exact.as_int64(t_int) if exact.as_int64(t_int) is not None else t_int
    c = alg.bracket_int
    # theta [e_i, e_j] = sum_l c_ijl theta e_l ; [theta e_i, theta e_j] = sum_ab t_ai t_bj c_abm
    lhs = _safe_einsum("ijl,ml->ijm", c, t_int) * dt
    tmp = _safe_einsum("ai,abm->ibm", t_int, c)
    rhs = _safe_einsum("bj,ibm->ijm", t_int, tmp)
    return sq, _maxabs(lhs - rhs)


def cartan_inner_residual(alg):
    """<ad(x) y, z>_Btheta + <y, ad(theta x) z>_Btheta over all basis triples."""
    bt, dbt = exact.integer_scaled(alg.btheta_raw)
    th, dth = exact.integer_scaled(alg.theta)
    bt64, th64 = exact.as_int64(bt), exact.as_int64(th)
    bt = bt64 if bt64 is not None else bt
    th = th64 if th64 is not None else th
    c = alg.bracket_int
    lhs = _safe_einsum("ijl,lk->ijk", c, bt) * dth
    d = _safe_einsum("ai,akl->ikl", th, c)
    rhs = _safe_einsum("jl,ikl->ijk", bt, d)
    return _maxabs(lhs + rhs), c.shape[0] ** 3


def positive_definite(alg):
    """Leading principal minors of B_theta, all positive (exact)."""
    m = alg.btheta_raw
    for k in range(1, alg.dim + 1):
        sub = m[:k, :k]
        if _det(sub) <= 0:
            return False
    return True


def _det(m):
    m = exact.qarray(m)
    n = m.shape[0]
    det = Fraction(1)
    m = m.copy()
    for c in range(n):
        p = next((i for i in range(c, n) if m[i, c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[[c, p]] = m[[p, c]]
            det = -det
        det *= m[c, c]
        for i in range(c + 1, n):
            if m[i, c] != 0:
                m[i] = m[i] - (m[i, c] / m[c, c]) * m[c]
    return det


def _tags(decomp):
    _, tags, _ = decomp._adapted
    return tags


def _weight(tag, rank):
    if tag in ("a", "k0"):
        return (0,) * rank
    return tag


def bracket_relation_residual(decomp):
    """Structure constants in the adapted basis vanish unless weights add up."""
    p, tags, pt_inv = decomp._adapted
    alg = decomp.algebra
    rank = len(decomp.a_basis)
    p_int, dp = exact.integer_scaled(p)
    q_int, dq = exact.integer_scaled(pt_inv)
    c = alg.bracket_int.astype(object)
    step = np.tensordot(p_int, c, axes=([1], [0]))  # (a, j, k)
    step = np.tensordot(step, p_int, axes=([1], [1]))  # (a, k, b)
    adapted = np.tensordot(step, q_int, axes=([1], [1]))  # (a, b, c)
    weights = [_weight(t, rank) for t in tags]
    worst = 0
    n = len(tags)
    wset = {tuple(w) for w in weights}
    for a in range(n):
        for b in range(n):
            target = tuple(x + y for x, y in zip(weights[a], weights[b]))
            for k in range(n):
                if adapted[a, b, k] != 0 and (tuple(weights[k]) != target or target not in wset):
                    worst = max(worst, abs(Fraction(adapted[a, b, k], dp * dp * dq * alg.bracket_den)))
    return worst, n * n


def theta_root_residual(decomp):
    """theta g_lam = g_{-lam} for every root, as exact membership."""
    bad, count = 0, 0
    th = decomp.algebra.theta
    for r in decomp.roots:
        for v in decomp.space(r):
            count += 1
            if not decomp.in_root_space(th @ v, -r):
                bad += 1
        if decomp.multiplicity(r) != decomp.multiplicity(-r):
            bad += 1
    return bad, count


def _doubled(decomp, r):
    return decomp.system.is_root(r + r)


def lemma_a_k0(decomp, report):
    """[theta X, X] = <X,X>_Btheta H_lam, [theta X, Y] in k0, the k0 inner products, nabla_X Y = 0."""
    alg = decomp.algebra
    for r in decomp.positive_roots:
        rows = decomp.space(r)
        h = decomp.H[r.coeffs]
        lsq = decomp.length_sq(r)
        for i, x in enumerate(rows):
            tx = alg.theta @ x
            lhs = alg.bracket_vec(tx, x)
            report.record("[theta X, X] = <X,X>_Btheta H_lam", _maxabs(lhs - decomp.inner(x, x) * h))
            report.record("[theta X, X] = 2<X,X>_AN H_lam", _maxabs(lhs - 2 * decomp.an_inner(x, x) * h))
            for j, y in enumerate(rows):
                if j == i:
                    continue
                t = alg.bracket_vec(tx, y)
                report.record("[theta X, Y] in k0", _maxabs(t - decomp.project(t, "k0")))
                if _doubled(decomp, r):
                    continue
                nab = levi_civita(decomp, x, y)
                report.record("nabla_X Y = 0", _maxabs(nab))
                for k, z in enumerate(rows):
                    if k == i:
                        continue
                    t2 = alg.bracket_vec(tx, z)
                    lhs = decomp.inner(t, t2)
                    rhs = 4 * lsq * decomp.an_inner(x, x) * decomp.an_inner(y, z)
                    report.record("<[tX,Y],[tX,Z]> = 4|lam|^2 <X,X><Y,Z>", lhs - rhs)
                    if len({i, j, k}) == 3:
                        report.record("[[theta X, Y], Z] = 0", _maxabs(alg.bracket_vec(t, z)))


def minimum_level_pairs(decomp):
    """(gamma, nu) with gamma at the bottom of a non-trivial nu-string, non-proportional."""
    sysm = decomp.system
    out = []
    for nu in decomp.positive_roots:
        for g in decomp.positive_roots:
            if g == nu or sysm.is_root(g - nu) or (g - nu).is_zero():
                continue
            if g.coeffs == (nu + nu).coeffs or nu.coeffs == (g + g).coeffs:
                continue
            if sysm.is_root(g + nu):
                out.append((g, nu))
    return out


def lemma_ad(decomp, report):
    """ad(xi) identities along minimum-level strings, in homogeneous form (s = <xi,xi>_AN)."""
    alg = decomp.algebra
    sysm = decomp.system
    for g, nu in minimum_level_pairs(decomp):
        a0 = decomp.cartan_integer(nu, g)
        lsq = decomp.length_sq(nu)
        xs = list(decomp.space(g))
        for xi in decomp.space(nu):
            s = decomp.an_inner(xi, xi)
            txi = alg.theta @ xi
            for x in xs:
                y1 = alg.bracket_vec(xi, x)
                lhs = alg.bracket_vec(txi, y1)
                report.record("[theta xi,[xi,X]] = A|nu|^2 X", _maxabs(lhs - a0 * lsq * s * x))
                for x2 in xs:
                    lhs = decomp.an_inner(y1, alg.bracket_vec(xi, x2))
                    report.record("<ad xi X, ad xi Y> = -A|nu|^2 <X,Y>", lhs + a0 * lsq * s * decomp.an_inner(x, x2))
                g1 = g + nu
                a1 = decomp.cartan_integer(nu, g1)
                y2 = alg.bracket_vec(xi, y1)
                lhs = alg.bracket_vec(txi, y2)
                report.record("[theta xi,[xi,[xi,X]]] identity", _maxabs(lhs - (a1 + a0) * lsq * s * y1))
                if a0 <= -2:
                    a2 = decomp.cartan_integer(nu, g + nu + nu) if sysm.is_root(g + nu + nu) else 0
                    y3 = alg.bracket_vec(xi, y2)
                    lhs = alg.bracket_vec(txi, y3)
                    report.record("4-fold ad identity", _maxabs(lhs - (a2 + a1 + a0) * lsq * s * y2))


def root_space_dimensions(decomp):
    """Equal dimensions along length-2 and length-3 strings; returns mismatch count."""
    sysm = decomp.system
    bad = 0
    for g, nu in minimum_level_pairs(decomp):
        a = decomp.cartan_integer(nu, g)
        if a == -1 and decomp.multiplicity(g) != decomp.multiplicity(g + nu):
            bad += 1
        if a == -2 and sysm.is_root(g + nu + nu):
            if decomp.multiplicity(nu) != decomp.multiplicity(g + nu):
                bad += 1
            if decomp.multiplicity(g) != decomp.multiplicity(g + nu + nu):
                bad += 1
    return bad


def identity_battery(decomp):
    """All exact identities on one realized decomposition."""
    alg = decomp.algebra
    rep = IdentityReport(alg.name)
    res, n = antisymmetry_residual(alg)
    rep.record("antisymmetry", res, n)
    res, n = jacobi_residual(alg)
    rep.record("Jacobi", res, n)
    res, n = killing_invariance_residual(alg)
    rep.record("Killing ad-invariance", res, n)
    sq, aut = theta_residuals(alg)
    rep.record("theta^2 = 1", sq)
    rep.record("theta automorphism", aut)
    res, n = cartan_inner_residual(alg)
    rep.record("<ad(X)Y,Z> = -<Y,ad(theta X)Z>", res, n)
    rep.record("B_theta positive definite", 0 if positive_definite(alg) else 1)
    res, n = bracket_relation_residual(decomp)
    rep.record("[g_lam, g_mu] in g_{lam+mu}", res, n)
    bad, n = theta_root_residual(decomp)
    rep.record("theta g_lam = g_-lam", bad, n)
    lemma_a_k0(decomp, rep)
    lemma_ad(decomp, rep)
    rep.record("root space dimensions along strings", root_space_dimensions(decomp))
    # a and k0 are B_theta-orthogonal and fill g0
    g = decomp.a_basis @ decomp.metric @ decomp.k0_basis.T if decomp.k0_basis.shape[0] else np.zeros((0,))
    rep.record("a orthogonal to k0", _maxabs(g))
    return rep


def describe(rep):
    lines = [f"{rep.algebra}: {'ok' if rep.ok else 'FAILED'}"]
    for k, v in rep.residuals.items():
        lines.append(f"  {k:<45} residual {v}  ({rep.counts[k]} checks)")
    return "\n".join(lines)


__all__ = ["IdentityReport", "identity_battery", "describe", "minimum_level_pairs", "root_label"]
