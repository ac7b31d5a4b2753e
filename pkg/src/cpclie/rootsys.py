"""Abstract restricted root systems.

Roots are integer coefficient vectors over the simple roots. The inner
product is a rational Gram matrix on coefficient space, scaled so that the
shortest simple root has squared length 2.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

FAMILIES = ("A", "B", "C", "D", "BC", "G2")


class RootSystemError(ValueError):
    pass


class InvalidRootSystem(RootSystemError):
    """The (family, rank) pair does not name a root system."""


class NotARoot(RootSystemError):
    pass


class NotMinimumLevel(RootSystemError):
    """pair_string_class was given a root that is not the lowest in its class."""


@dataclass(frozen=True, order=False)
class RootVector:
    coeffs: tuple
    length_sq: Fraction = field(default=Fraction(0), compare=False, repr=False)

    def __add__(self, other):
        return _vec(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return _vec(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return _vec(tuple(-a for a in self.coeffs))

    def scaled(self, k):
        return _vec(tuple(k * a for a in self.coeffs))

    @property
    def level(self):
        return sum(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def is_positive(self):
        return any(self.coeffs) and all(c >= 0 for c in self.coeffs)

    def sort_key(self):
        return (abs(self.level), tuple(-abs(c) for c in self.coeffs), self.level < 0)

    def __str__(self):
        return root_label(self)


def _vec(coeffs):
    return RootVector(tuple(int(c) for c in coeffs))


def root_label(r):
    if r.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(r.coeffs):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign}{mag}a{i}")
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def _ambient_simple_roots(family, rank):
    """Simple roots in the usual orthonormal ambient coordinates (Bourbaki order)."""
    if family == "G2":
        # alpha_0 long, alpha_1 short, as in the G2 obstruction computation
        return [(Fraction(-2), Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1), Fraction(0))]
    n = rank + 1 if family == "A" else rank
    def e(i):
        v = [Fraction(0)] * n
        v[i] = Fraction(1)
        return v
    roots = []
    for i in range(rank - 1):
        v = e(i)
        v[i + 1] = Fraction(-1)
        roots.append(v)
    if family == "A":
        v = e(rank - 1)
        v[rank] = Fraction(-1)
        roots.append(v)
    elif family in ("B", "BC"):
        roots.append(e(rank - 1))
    elif family == "C":
        roots.append([2 * x for x in e(rank - 1)])
    elif family == "D":
        v = e(rank - 2)
        v[rank - 1] = Fraction(1)
        roots.append(v)
    return [tuple(r) for r in roots]


def _validate(family, rank):
    if family not in FAMILIES:
        raise InvalidRootSystem(f"unknown family {family!r}")
    if not isinstance(rank, int) or rank < 1:
        raise InvalidRootSystem(f"rank must be a positive integer, got {rank!r}")
    minimum = {"A": 1, "B": 1, "C": 2, "D": 3, "BC": 1, "G2": 2}[family]
    if rank < minimum or (family == "G2" and rank != 2):
        raise InvalidRootSystem(f"({family}, {rank}) is not a valid root system")


@dataclass(frozen=True, eq=False)
class AbstractRootSystem:
    family: str
    rank: int
    gram: tuple
    simple_roots: tuple
    positive_roots: tuple
    multiplicities: tuple = ()

    @cached_property
    def _positive_set(self):
        return frozenset(r.coeffs for r in self.positive_roots)

    @cached_property
    def cartan_matrix(self):
        return tuple(
            tuple(cartan_integer(self, a, b) for b in self.simple_roots) for a in self.simple_roots
        )

    @cached_property
    def reduced_simple(self):
        return tuple(a for a in self.simple_roots if not self.is_root(a.scaled(2)))

    @property
    def roots(self):
        return self.positive_roots + tuple(-r for r in self.positive_roots)

    def inner(self, a, b):
        g = self.gram
        x, y = a.coeffs, b.coeffs
        return sum(x[i] * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank) if x[i] and y[j])

    def length_sq(self, a):
        return self.inner(a, a)

    def root(self, coeffs):
        """The root with the given coefficients, carrying its length."""
        r = _vec(coeffs)
        if not self.is_root(r):
            raise NotARoot(f"{root_label(r)} is not a root")
        return self.canonical(r)

    def canonical(self, r):
        return RootVector(r.coeffs, self.length_sq(r))

    def is_root(self, r):
        c = r.coeffs
        if len(c) != self.rank:
            return False
        return c in self._positive_set or tuple(-x for x in c) in self._positive_set

    def in_delta0(self, r):
        return r.is_zero() or self.is_root(r)

    def multiplicity(self, r):
        if not self.multiplicities:
            return None
        return dict(self.multiplicities).get(self.canonical(r if r.is_positive() else -r).coeffs)

    def sorted_roots(self, roots):
        return sorted(roots, key=lambda r: r.sort_key())


def _gram_from_ambient(ambient):
    r = len(ambient)
    g = [[sum(a * b for a, b in zip(ambient[i], ambient[j])) for j in range(r)] for i in range(r)]
    shortest = min(g[i][i] for i in range(r))
    scale = Fraction(2) / shortest
    return tuple(tuple(scale * x for x in row) for row in g)


def _enumerate_positive(rank, gram):
    """Level-by-level enumeration of the reduced positive roots via strings."""
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    def ip(a, b):
        return sum(a[i] * gram[i][j] * b[j] for i in range(rank) for j in range(rank))
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i, a in enumerate(simple):
                cand = tuple(b + (1 if j == i else 0) for j, b in enumerate(beta))
                if cand in found:
                    continue
                if beta == a:
                    continue
                # p = how far the a-string through beta extends downwards
                p = 0
                down = tuple(b - (1 if j == i else 0) for j, b in enumerate(beta))
                while down in found:
                    p += 1
                    down = tuple(b - (1 if j == i else 0) for j, b in enumerate(down))
                a_int = 2 * ip(beta, a) / ip(a, a)
                q = p - a_int
                if q > 0:
                    found.add(cand)
                    nxt.append(cand)
        layer = nxt
    return found


def build_root_system(family, rank, multiplicity_profile=None):
    """Enumerate the positive roots of (family, rank).

    ``multiplicity_profile`` maps root lengths squared (as Fractions or ints)
    to positive integers; roots of equal length form one Weyl orbit in an
    irreducible system.
    """
    _validate(family, rank)
    gram = _gram_from_ambient(_ambient_simple_roots(family, rank))
    coeffs = _enumerate_positive(rank, gram)
    if family == "BC":
        extra = set()
        for c in coeffs:
            r = _vec(c)
            if sum(c[i] * gram[i][j] * c[j] for i in range(rank) for j in range(rank)) == 2:
                extra.add(r.scaled(2).coeffs)
        coeffs = coeffs | extra
    proto = AbstractRootSystem(family, rank, gram, (), ())
    pos = sorted((proto.canonical(_vec(c)) for c in coeffs), key=lambda r: r.sort_key())
    simple = tuple(proto.canonical(_vec(tuple(1 if j == i else 0 for j in range(rank)))) for i in range(rank))
    mults = ()
    if multiplicity_profile is not None:
        prof = {Fraction(k): int(v) for k, v in dict(multiplicity_profile).items()}
        lengths = {r.length_sq for r in pos}
        if set(prof) != lengths:
            raise InvalidRootSystem(
                f"multiplicity profile keys {sorted(prof)} do not match root lengths {sorted(lengths)}"
            )
        if any(v < 1 for v in prof.values()):
            raise InvalidRootSystem("multiplicities must be positive")
        mults = tuple((r.coeffs, prof[r.length_sq]) for r in pos)
    return AbstractRootSystem(family, rank, gram, simple, tuple(pos), mults)


def _check_root(sys, r, allow_zero=False):
    if allow_zero and r.is_zero() and len(r.coeffs) == sys.rank:
        return
    if not sys.is_root(r):
        raise NotARoot(f"{root_label(r)} is not a root of {sys.family}{sys.rank}")


def cartan_integer(sys, alpha, lam):
    """A_{alpha,lam} = 2<lam,alpha>/|alpha|^2."""
    _check_root(sys, alpha)
    _check_root(sys, lam, allow_zero=True)
    v = 2 * sys.inner(lam, alpha) / sys.length_sq(alpha)
    if v.denominator != 1:
        raise RootSystemError("non-integral Cartan integer; the inner product is inconsistent")
    return int(v)


def alpha_string(sys, alpha, lam):
    """The alpha-string through lam, from lam - p*alpha up to lam + q*alpha."""
    _check_root(sys, alpha)
    _check_root(sys, lam, allow_zero=True)
    lo = lam
    while sys.in_delta0(lo - alpha):
        lo = lo - alpha
    out = [sys.canonical(lo)]
    cur = lo
    while sys.in_delta0(cur + alpha):
        cur = cur + alpha
        out.append(sys.canonical(cur))
    return out


def string_pq(sys, alpha, lam):
    s = alpha_string(sys, alpha, lam)
    p = next(i for i, r in enumerate(s) if r.coeffs == lam.coeffs)
    return p, len(s) - 1 - p


def level(sys, lam):
    if not (sys.is_root(lam) and lam.is_positive()):
        raise NotARoot(f"{root_label(lam)} is not a positive root")
    return lam.level


def weyl_reflect(sys, alpha, lam):
    """s_alpha(lam) = lam - A_{alpha,lam} alpha."""
    _check_root(sys, lam, allow_zero=True)
    return sys.canonical(lam - alpha.scaled(cartan_integer(sys, alpha, lam)))


@dataclass(frozen=True)
class StringClass:
    representative: RootVector
    members: tuple
    shape: str


_SHAPES = {1: "singleton", 3: "len3", 6: "len6"}


def pair_class_members(sys, a0, a1, lam):
    """All positive roots lam + n*a0 + m*a1 (exhaustive scan), sorted."""
    out = []
    for r in sys.positive_roots:
        d = r - lam
        if _in_lattice(d, a0, a1):
            out.append(r)
    return sys.sorted_roots(out)


def _in_lattice(d, a0, a1):
    """Is d an integer combination of a0 and a1 (as coefficient vectors)?"""
    for n, m in product(range(-4, 5), repeat=2):
        if all(x == n * p + m * q for x, p, q in zip(d.coeffs, a0.coeffs, a1.coeffs)):
            return True
    return False


def _in_plane(lam, a0, a1):
    return all(
        c == 0 for i, c in enumerate(lam.coeffs) if a0.coeffs[i] == 0 and a1.coeffs[i] == 0
    )


def _check_a2_pair(sys, a0, a1):
    if a0 not in sys.simple_roots or a1 not in sys.simple_roots:
        raise RootSystemError("alpha_0 and alpha_1 must be simple roots")
    if cartan_integer(sys, a0, a1) != -1 or cartan_integer(sys, a1, a0) != -1:
        raise RootSystemError("alpha_0 and alpha_1 must be joined by a single edge")


def pair_string_class(sys, a0, a1, lam):
    """The (a0, a1)-class of a minimum-level positive root lam outside span(a0, a1)."""
    _check_a2_pair(sys, a0, a1)
    _check_root(sys, lam)
    if not lam.is_positive():
        raise NotARoot(f"{root_label(lam)} is not positive")
    if _in_plane(lam, a0, a1):
        raise RootSystemError("lam lies in the span of alpha_0 and alpha_1")
    members = pair_class_members(sys, a0, a1, lam)
    lowest = min(r.level for r in members)
    if lam.level != lowest:
        raise NotMinimumLevel(f"{root_label(lam)} is not of minimum level in its class")
    lam = sys.canonical(lam)
    ip0, ip1 = sys.inner(lam, a0), sys.inner(lam, a1)
    if ip0 == 0 and ip1 == 0:
        expected = [lam]
    else:
        k, kk = (a0, a1) if ip0 != 0 else (a1, a0)
        if sys.length_sq(k) >= sys.length_sq(lam):
            expected = [lam, lam + k, lam + k + kk]
        else:
            expected = [lam, lam + k, lam + k + kk, lam + k.scaled(2),
                        lam + k.scaled(2) + kk, lam + k.scaled(2) + kk.scaled(2)]
    got = {r.coeffs for r in members}
    if got != {r.coeffs for r in expected}:
        raise RootSystemError(
            f"class of {root_label(lam)} is {sorted(got)}, not one of the three string shapes"
        )
    return StringClass(lam, tuple(sys.canonical(r) for r in expected), _SHAPES[len(expected)])


def string_partition(sys, a0, a1):
    """Partition of the positive roots into (a0, a1)-classes.

    Classes inside span(a0, a1) are grouped together and tagged "a2";
    the others carry their string shape.
    """
    _check_a2_pair(sys, a0, a1)
    seen = set()
    classes = []
    for r in sys.positive_roots:
        if r.coeffs in seen:
            continue
        members = pair_class_members(sys, a0, a1, r)
        seen.update(m.coeffs for m in members)
        if _in_plane(r, a0, a1):
            classes.append(StringClass(members[0], tuple(members), "a2"))
        else:
            rep = min(members, key=lambda m: m.sort_key())
            classes.append(pair_string_class(sys, a0, a1, rep))
    return classes


def debug_table(sys):
    """Text table of the positive roots with levels, lengths and Cartan integers."""
    names = [root_label(a) for a in sys.simple_roots]
    header = ["root", "level", "|root|^2"] + [f"A({n},.)" for n in names]
    rows = []
    for r in sys.positive_roots:
        rows.append([root_label(r), str(r.level), str(r.length_sq)]
                    + [str(cartan_integer(sys, a, r)) for a in sys.simple_roots])
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows]
    lines.append("cartan matrix: " + str([list(row) for row in sys.cartan_matrix]))
    lines.append("reduced simple roots: " + ", ".join(root_label(a) for a in sys.reduced_simple))
    return "\n".join(lines)
