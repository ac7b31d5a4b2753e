"""Matrix models of the real semisimple Lie algebras used by the workbench.

Each model is a real matrix Lie algebra closed under transpose, so that
X -> -X^T is a Cartan involution. Complex and quaternionic entries are
written as real 2x2 and 4x4 blocks.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import exact
from .algebra import AlgebraError, from_matrix_basis


@dataclass(frozen=True, eq=False)
class MatrixModel:
    """An algebra together with the data needed to decompose it."""

    algebra: object
    family: str
    rank: int
    # maps |root|^2 (after normalization) to the root-space dimension
    profile: dict
    a_basis: np.ndarray
    regular_element: np.ndarray
    space: dict


def _unit(n, i, j):
    m = np.zeros((n, n), dtype=np.int64)
    m[i, j] = 1
    return m


# real forms of the scalars: 1, i (, j, k) as left-multiplication matrices
def _complex_units():
    one = np.eye(2, dtype=np.int64)
    i = np.array([[0, -1], [1, 0]], dtype=np.int64)
    return [one, i]


def _quaternion_units():
    # left multiplication on the basis (1, i, j, k)
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    names = ["1", "i", "j", "k"]
    out = []
    for q in names:
        m = np.zeros((4, 4), dtype=np.int64)
        for col, b in enumerate(names):
            sign, res = table[(q, b)]
            m[names.index(res), col] = sign
        out.append(m)
    return out


def _sl_model(n, units, unit_names, kind):
    if n < 2:
        raise AlgebraError("sl_n needs n >= 2")
    s = units[0].shape[0]
    size = n * s
    mats, labels = [], []

    def block(i, j, u):
        m = np.zeros((size, size), dtype=np.int64)
        m[i * s:(i + 1) * s, j * s:(j + 1) * s] = u
        return m

    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for u, name in zip(units, unit_names):
                mats.append(block(i, j, u))
                labels.append(f"{name}E{i + 1}{j + 1}")
    for k in range(n - 1):
        for u, name in zip(units, unit_names):
            if name and kind == "quaternion":
                continue
            mats.append(block(k, k, u) - block(k + 1, k + 1, u))
            labels.append(f"{name}H{k + 1}")
    if kind == "quaternion":
        for k in range(n):
            for u, name in zip(units[1:], unit_names[1:]):
                mats.append(block(k, k, u))
                labels.append(f"{name}E{k + 1}{k + 1}")
    return mats, labels


def _finish_sl(name, n, mats, labels, mult, space):
    alg = from_matrix_basis(name, labels, mats)
    a_basis = exact.qarray([exact.unit(alg.dim, alg.label_index(f"H{k + 1}")) for k in range(n - 1)])
    # H_reg = diag(n-1, n-3, ..., 1-n) written in the H_k basis: coefficient of H_k is sum of first k entries
    diag = [n - 1 - 2 * i for i in range(n)]
    coeffs = [sum(diag[: k + 1]) for k in range(n - 1)]
    h_reg = exact.qarray(coeffs) @ a_basis
    return MatrixModel(alg, "A", n - 1, {Fraction(2): mult}, a_basis, h_reg, space)


def sl_real(n):
    units = [np.eye(1, dtype=np.int64)]
    mats, labels = _sl_model(n, units, [""], "real")
    return _finish_sl(f"sl{n}(R)", n, mats, labels, 1, {"family": "sl_real", "n": n})


def sl_complex(n):
    mats, labels = _sl_model(n, _complex_units(), ["", "i"], "complex")
    return _finish_sl(f"sl{n}(C)", n, mats, labels, 2, {"family": "sl_complex", "n": n})


def sl_quaternion(n):
    mats, labels = _sl_model(n, _quaternion_units(), ["", "i", "j", "k"], "quaternion")
    return _finish_sl(f"sl{n}(H)", n, mats, labels, 4, {"family": "sl_quaternion", "n": n})


def so_pq(p, q):
    """so(p, q), p <= q, preserving S = [[0,0,I_p],[0,-I_{q-p},0],[I_p,0,0]]."""
    if not (1 <= p <= q) or (p == q and p < 3) or p + q < 3:
        raise AlgebraError(f"so({p},{q}) is not supported (need 1 <= p <= q, and p >= 3 when p == q)")
    n = p + q
    s = np.zeros((n, n), dtype=np.int64)
    for i in range(p):
        s[i, q + i] = 1
        s[q + i, i] = 1
    for i in range(p, q):
        s[i, i] = -1
    mats, labels = [], []
    for a in range(n):
        for b in range(a + 1, n):
            mats.append(s @ (_unit(n, a, b) - _unit(n, b, a)))
            labels.append(f"X{a + 1}_{b + 1}")
    alg = from_matrix_basis(f"so({p},{q})", labels, mats)
    a_mats = [_unit(n, i, i) - _unit(n, q + i, q + i) for i in range(p)]
    a_basis = exact.qarray([alg.from_matrix(m) for m in a_mats])
    h_reg = exact.qarray([p - i for i in range(p)]) @ a_basis
    if p == q:
        family, profile = "D", {Fraction(2): 1}
    elif p == 1:
        family, profile = "B", {Fraction(2): q - 1}
    else:
        family, profile = "B", {Fraction(4): 1, Fraction(2): q - p}
    return MatrixModel(alg, family, p, profile, a_basis, h_reg, {"family": "so_pq", "p": p, "q": q})


def sp_real(n):
    """sp_2n(R) preserving J = [[0, I], [-I, 0]]."""
    if n < 2:
        raise AlgebraError("sp_2n(R) needs n >= 2")
    m = 2 * n
    j = np.zeros((m, m), dtype=np.int64)
    j[:n, n:] = np.eye(n, dtype=np.int64)
    j[n:, :n] = -np.eye(n, dtype=np.int64)
    mats, labels = [], []
    for a in range(m):
        for b in range(a, m):
            sym = _unit(m, a, b) + _unit(m, b, a)
            mats.append(-j @ sym)
            labels.append(f"Y{a + 1}_{b + 1}")
    alg = from_matrix_basis(f"sp{m}(R)", labels, mats)
    a_mats = [_unit(m, i, i) - _unit(m, n + i, n + i) for i in range(n)]
    a_basis = exact.qarray([alg.from_matrix(x) for x in a_mats])
    h_reg = exact.qarray([n - i for i in range(n)]) @ a_basis
    return MatrixModel(alg, "C", n, {Fraction(2): 1, Fraction(4): 1}, a_basis, h_reg,
                       {"family": "sp_real", "n": n})


_BUILDERS = {
    "sl_real": lambda d: sl_real(d["n"]),
    "sl_complex": lambda d: sl_complex(d["n"]),
    "sl_quaternion": lambda d: sl_quaternion(d["n"]),
    "so_pq": lambda d: so_pq(d["p"], d["q"]),
    "sp_real": lambda d: sp_real(d["n"]),
}

SPACE_FAMILIES = tuple(_BUILDERS)


def build_model(space):
    """Build a model from a space description such as {"family": "sl_real", "n": 3}."""
    family = space.get("family")
    if family not in _BUILDERS:
        raise AlgebraError(f"unknown space family {family!r}; choose from {', '.join(_BUILDERS)}")
    try:
        return _BUILDERS[family](space)
    except KeyError as e:
        raise AlgebraError(f"space {family} is missing parameter {e.args[0]!r}") from None
