"""Named spaces and V presets shared by the CLI and the acceptance battery."""

from dataclasses import dataclass
from functools import lru_cache

from . import construct
from .liealg.decomposition import decompose
from .liealg.models import SPACE_FAMILIES, build_model


class ScenarioError(ValueError):
    """A space or preset request that cannot be honoured."""


_PARAMS = {
    "sl_real": ("n",),
    "sl_complex": ("n",),
    "sl_quaternion": ("n",),
    "sp_real": ("n",),
    "so_pq": ("p", "q"),
}


def normalize_space(space):
    """Canonical dict form of a space: accepts a dict or a string like 'so_pq:2,5'."""
    if isinstance(space, str):
        family, _, args = space.partition(":")
        family = family.strip()
        if family not in _PARAMS:
            raise ScenarioError(f"unknown space family {family!r}; choose from {', '.join(SPACE_FAMILIES)}")
        names = _PARAMS[family]
        vals = [a for a in args.split(",") if a.strip()] if args else []
        if len(vals) != len(names):
            raise ScenarioError(f"{family} needs {len(names)} parameter(s): {', '.join(names)}")
        try:
            space = {"family": family, **{k: int(v) for k, v in zip(names, vals)}}
        except ValueError:
            raise ScenarioError(f"non-integer parameter in {space!r}") from None
    if not isinstance(space, dict) or space.get("family") not in _PARAMS:
        raise ScenarioError(f"bad space description {space!r}")
    names = _PARAMS[space["family"]]
    missing = [k for k in names if k not in space]
    if missing:
        raise ScenarioError(f"space {space['family']} is missing {', '.join(missing)}")
    return {"family": space["family"], **{k: int(space[k]) for k in names}}


def space_label(space):
    space = normalize_space(space)
    return space["family"] + ":" + ",".join(str(space[k]) for k in _PARAMS[space["family"]])


@lru_cache(maxsize=None)
def _decomposition(key):
    return decompose(build_model(dict(key)))


def get_decomposition(space):
    """Decomposition of a space, built once per process."""
    space = normalize_space(space)
    return _decomposition(tuple(sorted(space.items())))


# ----- presets --------------------------------------------------------------


@dataclass(frozen=True)
class Preset:
    name: str
    space: str
    expect: str
    description: str
    builder: object

    def build(self, decomp):
        """(VSpec, A2 pair or None) for this preset in ``decomp``."""
        return self.builder(decomp)


def a2_pair(decomp):
    """First adjacent pair of equal-length simple roots."""
    s = decomp.simple_roots
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            a, b = s[i], s[j]
            if decomp.cartan_integer(a, b) == -1 and decomp.cartan_integer(b, a) == -1:
                return a, b
    raise ScenarioError(f"{decomp.algebra.name} has no A2 pair of simple roots")


def _full_pair(decomp):
    a0, a1 = a2_pair(decomp)
    return construct.VSpec([(a0, decomp.space(a0)), (a1, decomp.space(a1))], "II-i"), (a0, a1)


def _lines(decomp):
    a0, a1 = a2_pair(decomp)
    tag = "II-i" if decomp.multiplicity(a0) == 1 else "II-ii-a"
    return construct.VSpec([(a0, decomp.space(a0)[:1]), (a1, decomp.space(a1)[:1])], tag), (a0, a1)


def complex_lines(decomp):
    """Case (II)(ii)(b): V_k = span{X_k, J X_k} with J from the complex structure on g_{a0+a1}."""
    a0, a1 = a2_pair(decomp)
    top = decomp.system.canonical(a0 + a1)
    g = decomp.space(top)
    if g.shape[0] < 2:
        raise ScenarioError("complex lines need dim g_{a0+a1} >= 2")
    cert = construct.complex_structure(decomp, a0, a1, g[0], g[1])
    t = cert.generators[0]
    x0 = decomp.space(a0)[0]
    last = None
    for x1 in decomp.space(a1):
        try:
            return construct.build_V_complex(decomp, a0, a1, x0, x1, t), (a0, a1)
        except construct.StructureError as e:
            last = e
    raise ScenarioError(f"no complex-line pair found: {last}")


def _case_i(decomp):
    lam = decomp.system.reduced_simple[0]
    lam = decomp.root(lam.coeffs)
    dim = min(2, decomp.multiplicity(lam))
    return construct.VSpec([(lam, decomp.space(lam)[:dim])], "I"), None


def _orthogonal_roots(decomp):
    s = decomp.simple_roots
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if decomp.cartan_integer(s[i], s[j]) == 0:
                return construct.VSpec([(s[i], decomp.space(s[i])), (s[j], decomp.space(s[j]))]), None
    raise ScenarioError(f"{decomp.algebra.name} has no orthogonal simple roots")


def _length_obstruction(decomp):
    sysm = decomp.system
    if sysm.family != "B" or sysm.rank != 2:
        raise ScenarioError("length-obstruction needs a B2 space such as so_pq:2,5")
    longr = max(decomp.simple_roots, key=lambda r: r.length_sq)
    short = min(decomp.simple_roots, key=lambda r: r.length_sq)
    g = decomp.space(short)
    return construct.VSpec([(short, g[: g.shape[0] - 1]), (longr, decomp.space(longr))]), None


def _maximal_flat_extension(decomp):
    """Remove all of n of the sl3 corner: V = g_a1 + g_a2 + g_{a1+a2}."""
    a0, a1 = a2_pair(decomp)
    top = decomp.system.canonical(a0 + a1)
    return construct.VSpec([(a0, decomp.space(a0)), (a1, decomp.space(a1)), (top, decomp.space(top))]), None


PRESETS = {
    p.name: p
    for p in [
        Preset("a2-complex-lines", "sl_complex:3", "pass",
               "real lines V0, V1 in sl3(C): spectrum +-1/sqrt2, 0 x4", _lines),
        Preset("a2-real-lines", "sl_real:3", "pass",
               "V0 = g_a0, V1 = g_a1 in sl3(R): totally geodesic", _lines),
        Preset("main-theorem-II-i", "sl_complex:3", "pass",
               "V = g_a0 + g_a1", _full_pair),
        Preset("main-theorem-II-ii-a", "sl_complex:3", "pass",
               "V0, V1 real lines with dim [V0, V1] = 1", _lines),
        Preset("main-theorem-II-ii-b", "sl_quaternion:3", "pass",
               "V0, V1 complex lines built from ad(T), T in k0", complex_lines),
        Preset("case-I", "sl_quaternion:3", "pass",
               "V inside a single simple root space", _case_i),
        Preset("orthogonal-roots", "sl_real:4", "fail",
               "V = g_a1 + g_a3 for orthogonal simple roots: not CPC", _orthogonal_roots),
        Preset("length-obstruction", "so_pq:2,5", "fail",
               "V = (codim-1 part of g_short) + g_long in so(2,5): not CPC", _length_obstruction),
        Preset("maximal-flat-extension", "sl_real:4", "fail",
               "canonical extension of the maximal flat of sl3(R): not austere", _maximal_flat_extension),
        Preset("canonical-extension-ii", "sl_real:4", "pass",
               "real lines in the first A2 pair of sl4(R): length-3 string blocks", _lines),
        Preset("canonical-extension-iii", "sp_real:3", "pass",
               "real lines in the short A2 pair of sp6(R): length-6 string block", _lines),
    ]
}


def preset(name):
    if name not in PRESETS:
        raise ScenarioError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}")
    return PRESETS[name]
