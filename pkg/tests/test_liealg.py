from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpclie import exact
from cpclie.geometry import levi_civita
from cpclie.liealg import identities as ids
from cpclie.liealg.algebra import AlgebraError
from cpclie.liealg.decomposition import DecompositionError, orthonormalize, orthonormalize_an
from cpclie.liealg.models import build_model, so_pq, sl_complex, sl_quaternion, sl_real, sp_real
from cpclie.scenarios import get_decomposition

SMALL = ["sl_real:3", "sl_complex:3", "sl_real:4", "sp_real:3", "so_pq:2,5"]


# ----- models and decompositions --------------------------------------------


@pytest.mark.parametrize(
    "space,dim,k0,mults",
    [
        ("sl_real:3", 8, 0, [1, 1, 1]),
        ("sl_complex:3", 16, 2, [2, 2, 2]),
        ("sl_quaternion:3", 35, 9, [4, 4, 4]),
        ("sl_real:4", 15, 0, [1] * 6),
        ("sp_real:3", 21, 0, [1] * 9),
    ],
)
def test_dimensions_and_multiplicities(space, dim, k0, mults):
    d = get_decomposition(space)
    assert d.dim == dim
    assert d.k0_basis.shape[0] == k0
    assert [d.multiplicity(r) for r in d.positive_roots] == mults
    total = d.a_basis.shape[0] + k0 + 2 * sum(mults)
    assert total == dim


def test_so25_is_b2_with_short_multiplicity_three(so25):
    assert so25.system.family == "B" and so25.system.rank == 2
    longr, short = so25.simple_roots
    assert longr.length_sq == 4 and short.length_sq == 2
    assert so25.multiplicity(longr) == 1
    assert so25.multiplicity(short) == 3
    assert so25.k0_basis.shape[0] == 3


def test_sp6_is_c3(sp6):
    assert sp6.system.family == "C"
    assert len(sp6.positive_roots) == 9
    assert sp6.metric_scale == Fraction(1, 16)


@pytest.mark.parametrize(
    "space,scale",
    [("sl_real:3", Fraction(1, 6)), ("sl_complex:3", Fraction(1, 12)), ("sl_quaternion:3", Fraction(1, 24)),
     ("sl_real:4", Fraction(1, 8)), ("so_pq:2,5", Fraction(1, 20))],
)
def test_metric_scale(space, scale):
    assert get_decomposition(space).metric_scale == scale


@pytest.mark.parametrize(
    "builder,args",
    [(sl_real, (1,)), (sl_complex, (1,)), (sl_quaternion, (0,)), (sp_real, (1,)), (so_pq, (0, 3)), (so_pq, (3, 2))],
)
def test_constructors_reject_bad_sizes(builder, args):
    with pytest.raises(AlgebraError):
        builder(*args)


def test_build_model_rejects_unknown_family():
    with pytest.raises(AlgebraError):
        build_model({"family": "su_pq", "p": 1, "q": 2})
    with pytest.raises(AlgebraError):
        build_model({"family": "so_pq", "p": 2})


# ----- exact identities, basis triples --------------------------------------


@pytest.mark.parametrize("space", SMALL)
def test_structure_identities_exhaustive(space):
    alg = get_decomposition(space).algebra
    assert ids.antisymmetry_residual(alg)[0] == 0
    assert ids.jacobi_residual(alg)[0] == 0
    assert ids.killing_invariance_residual(alg)[0] == 0
    assert ids.theta_residuals(alg) == (0, 0)
    assert ids.cartan_inner_residual(alg)[0] == 0
    assert ids.positive_definite(alg)


@pytest.mark.parametrize("space", SMALL + ["sl_quaternion:3"])
def test_jacobi_on_random_basis_triples(space):
    alg = get_decomposition(space).algebra
    rng = np.random.default_rng(7)
    n = alg.dim
    # Jacobi is homogeneous, so the integer numerators of the structure constants suffice
    c = alg.bracket_int.astype(object)
    for i, j, k in rng.integers(0, n, size=(1000, 3)):
        total = c[i, j] @ c[:, k] + c[j, k] @ c[:, i] + c[k, i] @ c[:, j]
        assert not any(total)


def _rand_vec(rng, n, bound=3):
    return exact.qarray([Fraction(int(a), int(b)) for a, b in zip(rng.integers(-bound, bound + 1, n), rng.integers(1, 4, n))])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["sl_real:3", "sl_complex:3", "sp_real:3"]), st.integers(0, 2**32 - 1))
def test_bracket_agrees_with_matrix_commutator(space, seed):
    alg = get_decomposition(space).algebra
    rng = np.random.default_rng(seed)
    x, y = _rand_vec(rng, alg.dim), _rand_vec(rng, alg.dim)
    mx, my = alg.to_matrix(x), alg.to_matrix(y)
    assert exact.is_zero(alg.to_matrix(alg.bracket_vec(x, y)) - (mx @ my - my @ mx))
    # Cartan involution of a matrix model: X -> -X^T
    assert exact.is_zero(alg.to_matrix(alg.theta @ x) + mx.T)
    assert exact.is_zero(alg.from_matrix(mx) - x)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["sl_real:3", "sl_complex:3", "so_pq:2,5"]), st.integers(0, 2**32 - 1))
def test_killing_invariance_random_vectors(space, seed):
    alg = get_decomposition(space).algebra
    rng = np.random.default_rng(seed)
    x, y, z = (_rand_vec(rng, alg.dim) for _ in range(3))
    b = alg.killing_form
    assert b(alg.bracket_vec(x, y), z) == b(x, alg.bracket_vec(y, z))
    # Killing form from the adjoint representation, recomputed directly
    assert b(x, y) == np.trace(alg.ad(x) @ alg.ad(y))


def test_from_matrix_rejects_outside_algebra(sl3r):
    m = np.eye(3, dtype=object)
    with pytest.raises(AlgebraError):
        sl3r.algebra.from_matrix(m)


# ----- root data ------------------------------------------------------------


@pytest.mark.parametrize("space", ["sl_real:3", "sl_complex:3", "sl_quaternion:3"])
def test_root_vector_gram_a2(space):
    d = get_decomposition(space)
    h = [d.H[r.coeffs] for r in d.simple_roots]
    gram = [[d.inner(x, y) for y in h] for x in h]
    assert gram == [[2, -1], [-1, 2]]


@pytest.mark.parametrize("space", SMALL)
def test_root_vectors_reproduce_abstract_inner_product(space):
    d = get_decomposition(space)
    for r in d.positive_roots:
        h = d.H[r.coeffs]
        coords = exact.solve(d.a_basis.T, h)
        assert coords @ d.functionals[r.coeffs] == d.length_sq(r)
        for s in d.positive_roots:
            assert d.inner(h, d.H[s.coeffs]) == d.system.inner(r, s)


@pytest.mark.parametrize("space", SMALL)
def test_theta_maps_root_spaces_to_negatives(space):
    d = get_decomposition(space)
    for r in d.roots:
        for v in d.space(r):
            assert d.in_root_space(d.algebra.theta @ v, -r)


@pytest.mark.parametrize("space", ["sl_real:3", "sl_complex:3", "so_pq:2,5"])
def test_theta_x_x_is_multiple_of_root_vector(space):
    d = get_decomposition(space)
    alg = d.algebra
    for r in d.positive_roots:
        for x in d.space(r):
            lhs = alg.bracket_vec(alg.theta @ x, x)
            assert exact.is_zero(lhs - 2 * d.an_inner(x, x) * d.H[r.coeffs])


def test_theta_x_y_in_k0_and_connection_vanishes(sl3c):
    a0 = sl3c.simple_roots[0]
    x, y = sl3c.space(a0)
    assert sl3c.an_inner(x, y) == 0
    t = sl3c.algebra.bracket_vec(sl3c.algebra.theta @ x, y)
    assert not exact.is_zero(t)
    assert exact.is_zero(sl3c.project(t, "k0") - t)
    assert exact.is_zero(levi_civita(sl3c, x, y))


def test_an_metric_blocks(sl3c):
    h = sl3c.a_basis[0]
    assert sl3c.an_inner(h, h) == sl3c.inner(h, h)
    x = sl3c.space(sl3c.simple_roots[0])[0]
    assert sl3c.an_inner(x, x) == sl3c.inner(x, x) / 2
    assert sl3c.an_inner(h, x) == 0


@pytest.mark.parametrize("space", ["sl_real:3", "sl_complex:3", "so_pq:2,5"])
def test_projectors_partition_identity(space):
    d = get_decomposition(space)
    total = d.projector("a") + d.projector("k0")
    for r in d.roots:
        total = total + d.projector(r)
    assert exact.is_zero(total - exact.qeye(d.dim))
    p = d.projector("an")
    assert exact.is_zero(exact.qmatmul(p, p) - p)
    assert exact.is_zero(d.projector("g0") - d.projector("a") - d.projector("k0"))


def test_unknown_subspace_tag(sl3r):
    with pytest.raises(DecompositionError):
        sl3r.project(sl3r.a_basis[0], "tangent")
    with pytest.raises(DecompositionError):
        sl3r.space(sl3r.system.root((1, 1)).scaled(2))


def test_bracket_relation(sl3c):
    alg = sl3c.algebra
    sysm = sl3c.system
    for r in sl3c.roots:
        for s in sl3c.roots:
            t = r + s
            for x in sl3c.space(r):
                for y in sl3c.space(s):
                    z = alg.bracket_vec(x, y)
                    if t.is_zero():
                        assert exact.is_zero(sl3c.project(z, "g0") - z)
                    elif sysm.is_root(t):
                        assert sl3c.in_root_space(z, t)
                    else:
                        assert exact.is_zero(z)


# ----- orthonormalization ---------------------------------------------------


def test_orthonormalize_an_a_basis(sl3r):
    out = orthonormalize_an(sl3r, sl3r.a_basis)
    assert out.shape == (2, 8)
    g = out @ sl3r.an_gram_float @ out.T
    assert np.abs(g - np.eye(2)).max() < 1e-12


def test_orthonormalize_an_quaternionic_root_space(sl3h):
    rows = sl3h.space(sl3h.simple_roots[0])
    out = orthonormalize_an(sl3h, rows)
    assert out.shape == (4, 35)
    assert np.abs(out @ sl3h.an_gram_float @ out.T - np.eye(4)).max() < 1e-12


def test_orthonormalize_is_idempotent(sl3c):
    rows = sl3c.an_basis
    once = orthonormalize_an(sl3c, rows)
    twice = orthonormalize(once, sl3c.an_gram_float)
    assert np.abs(once - twice).max() < 1e-12


def test_orthonormalize_an_errors(sl3r):
    a = sl3r.a_basis
    with pytest.raises(DecompositionError, match="row 2"):
        orthonormalize_an(sl3r, np.array([a[0], a[1], a[0] + a[1]], dtype=object))
    k = sl3r.algebra.theta @ sl3r.space(sl3r.simple_roots[0])[0]
    with pytest.raises(DecompositionError, match="row 1"):
        orthonormalize_an(sl3r, np.array([a[0], k], dtype=object))


# ----- lemma batteries --------------------------------------------------------


@pytest.mark.parametrize("space", ["sl_real:3", "sl_complex:3", "sl_real:4", "so_pq:2,5"])
def test_identity_battery_exact(space):
    rep = ids.identity_battery(get_decomposition(space))
    assert rep.ok, ids.describe(rep)
    assert rep.counts["Jacobi"] == get_decomposition(space).dim ** 3


def test_quaternionic_k0_identity(sl3h):
    rep = ids.IdentityReport("sl3(H)")
    ids.lemma_a_k0(sl3h, rep)
    assert rep.ok, ids.describe(rep)
    assert rep.counts["[[theta X, Y], Z] = 0"] > 0


def test_minimum_level_pairs_in_sp6(sp6):
    pairs = ids.minimum_level_pairs(sp6)
    cart = {sp6.cartan_integer(nu, g) for g, nu in pairs}
    assert cart == {-1, -2}
    rep = ids.IdentityReport("sp6")
    ids.lemma_ad(sp6, rep)
    assert rep.ok and rep.counts["4-fold ad identity"] > 0


def test_summary_serializes(so25):
    s = so25.summary()
    assert s["family"] == "B" and s["dim_k0"] == 3
    assert [r["multiplicity"] for r in s["positive_roots"]] == [1, 3, 3, 1]
