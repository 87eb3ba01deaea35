"""Combinatorial invariants of equivariant locally free sheaves.

A bundle on a cone is never materialized; everything is driven by its
complete invariants: the multiset of characters, the weighted flags its
restrictions induce on rays, the matrix of infima of character
differences, and, for rank-two degenerations, chains of lattices over a
discretely valued field.

Conventions.  Characters are row vectors in the chart lattice and pair
with realization points.  Flag subspaces are stored over the rationals
as reduced row-echelon bases, so equality of subspaces is equality of
tuples.  Lattices are given by nonsingular 2x2 matrices whose columns
generate; scalars are exact (fractions for a prime uniformizer,
rational functions in the uniformizer for a formal one).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .complexes import PoGroup, _face_quotient, dual_chart, po_group
from .cone import Cone, face_lattice
from .errors import (
    HypothesisViolation,
    IncompatibleChern,
    InfUndefined,
    SingularLattice,
)
from .lattice import mat_vec, vec_sub
from .monoid import FineMonoid
from .morphism import InfResult, infimum


# --- exact rational row spaces ------------------------------------------------

def _rref(rows):
    """Reduced row echelon form over the rationals, zero rows dropped."""
    m = [[Fraction(x) for x in r] for r in rows]
    lead = 0
    out = []
    ncols = len(m[0]) if m else 0
    rows_left = list(range(len(m)))
    for col in range(ncols):
        piv = None
        for r in rows_left:
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows_left.remove(piv)
        inv = m[piv][col]
        m[piv] = [x / inv for x in m[piv]]
        for r in range(len(m)):
            if r != piv and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[piv])]
        out.append(tuple(m[piv]))
    return tuple(sorted(out, key=lambda r: [x != 0 for x in r], reverse=True))


def _row_space(rows, ncols):
    if not rows:
        return ()
    assert all(len(r) == ncols for r in rows)
    return _rref(rows)


def _dim(space):
    return len(space)


def _intersect_spaces(a, b, ncols):
    """Basis of the intersection of two rational row spaces."""
    if not a:
        return ()
    if not b:
        return ()
    # x = s.a = t.b; solve for (s, t) in the kernel of [a^T | -b^T]
    rows = []
    for i in range(ncols):
        rows.append([Fraction(v[i]) for v in a]
                    + [-Fraction(v[i]) for v in b])
    ker = _rational_kernel(rows)
    out = []
    for k in ker:
        vec = [sum(k[i] * a[i][j] for i in range(len(a)))
               for j in range(ncols)]
        if any(vec):
            out.append(vec)
    return _row_space(out, ncols)


def _rational_kernel(rows):
    """Basis of the right kernel of a rational matrix."""
    if not rows:
        return ()
    ncols = len(rows[0])
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = {}
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col]
        m[rank] = [x / inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        pivots[col] = rank
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for col, r in pivots.items():
            v[col] = -m[r][fc]
        basis.append(tuple(v))
    return tuple(basis)


def _unit_row(n, j):
    return tuple(Fraction(int(i == j)) for i in range(n))


# --- multicharacters ------------------------------------------------------------

@dataclass(frozen=True)
class MultiCharacter:
    """A finite multiset of characters, stored sorted."""

    characters: tuple

    def __post_init__(self):
        chars = tuple(sorted(tuple(int(x) for x in c)
                             for c in self.characters))
        if not chars:
            raise HypothesisViolation("a multicharacter has rank >= 1")
        if len({len(c) for c in chars}) != 1:
            raise HypothesisViolation("characters live in one lattice")
        object.__setattr__(self, "characters", chars)

    @property
    def rank(self):
        return len(self.characters)

    @property
    def width(self):
        return len(self.characters[0])

    @classmethod
    def of_integers(cls, values):
        return cls(tuple((int(v),) for v in values))

    def values(self):
        """Entries as plain integers; only for width-one multisets."""
        if self.width != 1:
            raise HypothesisViolation("not a rank-one character lattice")
        return tuple(c[0] for c in self.characters)


def restrict_multichar(u, tau):
    """Image multiset in the chart quotient of a face.

    A ray is paired against its primitive generator, so the result is
    the multiset of values on the ray; a general face goes through the
    exact lattice quotient by its orthogonal sublattice.
    """
    n = tau.ambient_rank
    if u.width != n:
        raise HypothesisViolation("characters and face disagree on rank")
    if len(tau.rays) == 1 and not tau.lineality:
        pm = (tau.rays[0],)
    else:
        pm, _ = _face_quotient(n, tau)
    return MultiCharacter(tuple(tuple(mat_vec(pm, c)) for c in
                                u.characters)) if pm else \
        MultiCharacter(tuple(() for _ in u.characters))


# --- weighted flags -------------------------------------------------------------

@dataclass(frozen=True)
class WeightedFlag:
    """An increasing chain of rational subspaces with strictly
    decreasing integer weights; the last subspace is the whole space."""

    dim: int
    steps: tuple  # ((weight, rref basis of the cumulative subspace), ...)

    def __post_init__(self):
        steps = tuple((int(w), _row_space(basis, self.dim))
                      for w, basis in self.steps)
        object.__setattr__(self, "steps", steps)
        weights = [w for w, _ in steps]
        dims = [_dim(b) for _, b in steps]
        if weights != sorted(weights, reverse=True) or \
                len(set(weights)) != len(weights):
            raise HypothesisViolation("weights must strictly decrease")
        if dims != sorted(dims) or len(set(dims)) != len(dims) or \
                (dims and dims[-1] != self.dim):
            raise HypothesisViolation("subspace dimensions must strictly "
                                      "increase to the full space")
        for (_, small), (_, big) in zip(steps, steps[1:]):
            inter = _intersect_spaces(small, big, self.dim)
            if inter != small:
                raise HypothesisViolation("flag subspaces must be nested")

    @property
    def weights(self):
        return tuple(w for w, _ in self.steps)

    @property
    def dims(self):
        return tuple(_dim(b) for _, b in self.steps)

    def space_at(self, delta):
        """The subspace at parameter delta: the largest step whose
        weight is at least -delta."""
        best = ()
        for w, basis in self.steps:
            if w >= -delta:
                best = basis
        return best

    def multiset(self):
        """The character multiset the flag came from (split model)."""
        values = []
        prev = 0
        for w, basis in self.steps:
            values.extend([w] * (_dim(basis) - prev))
            prev = _dim(basis)
        return MultiCharacter.of_integers(values)


def klyachko_filtration(u):
    """The weighted coordinate flag of a ray multicharacter.

    The subspace of weight w is spanned by the coordinates whose
    character value is at least w, so dimensions are the cumulative
    multiplicities of the distinct values in decreasing order.
    """
    values = u.values() if isinstance(u, MultiCharacter) else \
        tuple(int(v) for v in u)
    r = len(values)
    steps = []
    for w in sorted(set(values), reverse=True):
        rows = [_unit_row(r, i) for i, v in enumerate(values) if v >= w]
        steps.append((w, tuple(rows)))
    return WeightedFlag(r, tuple(steps))


# --- Payne compatibility ---------------------------------------------------------

@dataclass(frozen=True)
class PayneReport:
    ok: bool
    at: Optional[tuple] = None  # (cone, delta)
    expected: Optional[int] = None
    got: Optional[int] = None

    def __bool__(self):
        return self.ok


def _is_face(tau, sigma):
    return tau in face_lattice(sigma)


def payne_compatibility(flags, psi):
    """Counting criterion tying ray flags to cone multicharacters.

    flags maps primitive ray generators to WeightedFlags in a common
    space; psi maps cones to multicharacters.  Restriction consistency
    of psi along faces is checked first (IncompatibleChern); then for
    every cone and every weight jump delta the dimension of the
    intersection of the ray subspaces at delta must equal the number of
    characters that are at least -delta on every ray.
    """
    flags = dict(flags)
    psi = dict(psi)
    if not psi:
        return PayneReport(True)
    ranks = {f.dim for f in flags.values()}
    ranks |= {u.rank for u in psi.values()}
    if len(ranks) > 1:
        raise HypothesisViolation("flags and multicharacters disagree "
                                  "on the rank")
    r = ranks.pop()
    for sigma, u in psi.items():
        for tau, v in psi.items():
            if tau is sigma or not _is_face(tau, sigma):
                continue
            if restrict_multichar(u, tau) != v:
                raise IncompatibleChern(
                    "multicharacters do not restrict compatibly "
                    "along a face")
    full = tuple(_unit_row(r, i) for i in range(r))
    for sigma, u in psi.items():
        ray_flags = []
        for ray in sigma.rays:
            if ray not in flags:
                raise HypothesisViolation("missing flag for a ray")
            ray_flags.append((ray, flags[ray]))
        jumps = sorted({-w for _, f in ray_flags for w in f.weights})
        if not jumps:
            jumps = [0]
        deltas = [jumps[0] - 1] + jumps + [jumps[-1] + 1]
        for delta in deltas:
            space = full
            for _, f in ray_flags:
                space = _intersect_spaces(space, f.space_at(delta), r)
            count = 0
            for c in u.characters:
                if all(sum(a * b for a, b in zip(c, ray)) >= -delta
                       for ray, _ in ray_flags):
                    count += 1
            if _dim(space) != count:
                return PayneReport(False, at=(sigma, delta),
                                   expected=count, got=_dim(space))
    return PayneReport(True)


# --- automorphism dimension ------------------------------------------------------

def aut_dimension(sigma, lam):
    """Number of character pairs whose difference is nonnegative on the
    cone; this is the dimension of the endomorphism algebra, and the
    unit group inside it has the same dimension."""
    if lam.width != sigma.ambient_rank:
        raise HypothesisViolation("characters and cone disagree on rank")
    dual = sigma.dual()
    count = 0
    for ci in lam.characters:
        for cj in lam.characters:
            if dual.contains(vec_sub(cj, ci)):
                count += 1
    return count


# --- infimum matrices ------------------------------------------------------------

NON_REPRESENTABLE_WARNING = (
    "entry (%d, %d) has no maximum among its lower bounds; the "
    "automorphism group it bounds is not representable by a cone")


@dataclass(frozen=True)
class InfMatrix:
    """Matrix of infima of character differences over a based cone.

    entry(i, j) is the infimum of lambda_j - lambda_i, a value in the
    base group when a maximum exists.  Diagonal entries are Max(0); for
    finite symmetric pairs the two values add to at most zero in the
    base order.
    """

    base: FineMonoid
    entries: tuple
    warnings: tuple = ()

    def __post_init__(self):
        n = len(self.entries)
        zero = (0,) * self.base.ambient_rank
        for i in range(n):
            if len(self.entries[i]) != n:
                raise HypothesisViolation("infimum matrix must be square")
            d = self.entries[i][i]
            if d.kind != "max" or tuple(d.value) != zero:
                raise HypothesisViolation("diagonal infima must be zero")
            for j in range(n):
                a, b = self.entries[i][j], self.entries[j][i]
                if a.kind == "max" and b.kind == "max":
                    s = tuple(-x - y for x, y in zip(a.value, b.value))
                    if not self.base.contains(s):
                        raise HypothesisViolation(
                            "finite infima must be antisymmetric in the "
                            "base order")

    @property
    def size(self):
        return len(self.entries)

    def entry(self, i, j):
        return self.entries[i][j]


def inf_matrix(sigma, lam, budget=None):
    """Infima of all pairwise character differences over the cone.

    Any entry with incomparable maximal lower bounds triggers a
    non-representability warning naming the entry.
    """
    if lam.width != sigma.ambient_rank:
        raise HypothesisViolation("characters and cone disagree on rank")
    h = sigma.base_monoid_map()
    chars = lam.characters
    n = len(chars)
    entries = []
    warnings = []
    for i in range(n):
        row = []
        for j in range(n):
            res = infimum(h, vec_sub(chars[j], chars[i]), budget)
            if res.kind == "no_max":
                warnings.append(NON_REPRESENTABLE_WARNING % (i + 1, j + 1))
            row.append(res)
        entries.append(tuple(row))
    return InfMatrix(sigma.base, tuple(entries), tuple(warnings))


def weyl_hull(sigma, lam, budget=None):
    """The weakly convex cone cut out by the attained infima.

    Each finite entry contributes the inequality
    lambda_j - lambda_i >= mu over the base; entries with no lower
    bound impose nothing.  Entries with incomparable maximal lower
    bounds leave the hull undefined (InfUndefined).
    """
    mat = inf_matrix(sigma, lam, budget)
    n = sigma.ambient_rank
    chars = lam.characters
    rows = [mat_vec(sigma.base_matrix, g) for g in sigma.base.gens]
    for i in range(mat.size):
        for j in range(mat.size):
            res = mat.entry(i, j)
            if res.kind == "no_max":
                raise InfUndefined(
                    "no maximum for the infimum of a character "
                    "difference; the hull is undefined")
            if res.kind == "max":
                if res.localized_source is not None and \
                        res.localized_source.ambient_rank != \
                        sigma.base_rank:
                    raise HypothesisViolation(
                        "localized base changed rank; hull inequalities "
                        "would live in a different group")
                bound = mat_vec(sigma.base_matrix, res.value)
                rows.append(vec_sub(vec_sub(chars[j], chars[i]), bound))
    hull = Cone.from_inequalities(n, [list(r) for r in rows])
    return po_group(n, dual_chart(hull), base=sigma.base,
                    base_matrix=sigma.base_matrix,
                    name="weyl_hull(%s)" % sigma.name if sigma.name
                    else "weyl_hull")


# --- filtrations indexed by a monoid order --------------------------------------

@dataclass(frozen=True)
class Filtration:
    """Subspace-valued data indexed by a monoid-ordered group.

    jumps lists (index, subspace) pairs; the value at delta is the span
    of all jump subspaces whose index is bounded by delta in the order
    of the indexing monoid.
    """

    monoid: FineMonoid
    dim: int
    jumps: tuple

    def __post_init__(self):
        merged = {}
        for gamma, basis in self.jumps:
            key = tuple(int(x) for x in gamma)
            if len(key) != self.monoid.ambient_rank:
                raise HypothesisViolation("jump index outside the "
                                          "indexing group")
            prev = merged.get(key, ())
            merged[key] = _row_space(tuple(prev) + tuple(basis), self.dim)
        object.__setattr__(
            self, "jumps",
            tuple(sorted((k, v) for k, v in merged.items())))

    def value_at(self, delta):
        rows = []
        for gamma, basis in self.jumps:
            if self.monoid.contains(vec_sub(delta, gamma)):
                rows.extend(basis)
        return _row_space(tuple(rows), self.dim)

    def jump_indices(self):
        return tuple(g for g, _ in self.jumps)


def split_filtration(u, monoid):
    """The filtration of a split model: coordinate i jumps at the
    negative of its character."""
    if u.width != monoid.ambient_rank:
        raise HypothesisViolation("characters and monoid disagree on rank")
    jumps = [(tuple(-x for x in c), (_unit_row(u.rank, i),))
             for i, c in enumerate(u.characters)]
    return Filtration(monoid, u.rank, tuple(jumps))


def pullback_filtration(h, family):
    """Push the jump indices through the map; colimits of subspaces are
    spans, so equal images merge by summing."""
    if family.monoid is not h.source and \
            family.monoid.ambient_rank != h.source.ambient_rank:
        raise HypothesisViolation("family is not indexed by the source")
    jumps = [(h.apply(g), basis) for g, basis in family.jumps]
    return Filtration(h.target, family.dim, tuple(jumps))


# --- rank-two lattice chains over a valued field ----------------------------------

class _Laurent:
    """Rational functions in one uniformizer, kept as Laurent
    numerator/denominator dictionaries with exact coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = {int(k): Fraction(v) for k, v in num.items()
                    if Fraction(v) != 0}
        self.den = {0: Fraction(1)} if den is None else \
            {int(k): Fraction(v) for k, v in den.items() if Fraction(v) != 0}
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls({0: c} if c else {})

    @classmethod
    def monomial(cls, c, k):
        c = Fraction(c)
        return cls({int(k): c} if c else {})

    def is_zero(self):
        return not self.num

    @staticmethod
    def _mul(a, b):
        out = {}
        for i, x in a.items():
            for j, y in b.items():
                out[i + j] = out.get(i + j, Fraction(0)) + x * y
        return {k: v for k, v in out.items() if v != 0}

    def __mul__(self, other):
        return _Laurent(self._mul(self.num, other.num),
                        self._mul(self.den, other.den))

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        return _Laurent(self._mul(self.num, other.den),
                        self._mul(self.den, other.num))

    def __add__(self, other):
        num = dict(self._mul(self.num, other.den))
        for k, v in self._mul(other.num, self.den).items():
            num[k] = num.get(k, Fraction(0)) + v
        return _Laurent({k: v for k, v in num.items() if v != 0},
                        self._mul(self.den, other.den))

    def __sub__(self, other):
        return self + _Laurent({k: -v for k, v in other.num.items()},
                               other.den)

    def __neg__(self):
        return _Laurent({k: -v for k, v in self.num.items()}, self.den)

    def valuation(self):
        if self.is_zero():
            return None
        return min(self.num) - min(self.den)

    def as_pairs(self):
        """Canonical (exponent, coefficient) pairs; reduces the
        denominator when it is a monomial times a unit polynomial only
        in the trivial case, otherwise keeps the fraction."""
        if len(self.den) == 1:
            (k, c), = self.den.items()
            return tuple(sorted((e - k, str(v / c))
                                for e, v in self.num.items()))
        return (tuple(sorted((e, str(v)) for e, v in self.num.items())),
                tuple(sorted((e, str(v)) for e, v in self.den.items())))

    def __eq__(self, other):
        return isinstance(other, _Laurent) and \
            not (self - other).num

    def __hash__(self):
        raise TypeError("unhashable")


class _PrimeScalars:
    """Exact arithmetic with the valuation of a chosen prime."""

    def __init__(self, p):
        self.p = int(p)
        if self.p < 2:
            raise HypothesisViolation("the uniformizer must be a prime "
                                      "or the formal symbol")

    def coerce(self, x):
        return Fraction(x)

    def uniformizer(self, k=1):
        return Fraction(self.p) ** k

    def is_zero(self, x):
        return x == 0

    def val(self, x):
        if x == 0:
            return None
        v = 0
        num, den = x.numerator, x.denominator
        while num % self.p == 0:
            num //= self.p
            v += 1
        while den % self.p == 0:
            den //= self.p
            v -= 1
        return v

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def render(self, x):
        return str(x)


class _FormalScalars:
    """Exact arithmetic in rational functions of a formal uniformizer."""

    def coerce(self, x):
        if isinstance(x, _Laurent):
            return x
        if isinstance(x, (int, Fraction, str)):
            return _Laurent.const(Fraction(x))
        if isinstance(x, dict):
            return _Laurent(x)
        pairs = tuple(x)
        return _Laurent({int(k): Fraction(v) for k, v in pairs})

    def uniformizer(self, k=1):
        return _Laurent.monomial(1, k)

    def is_zero(self, x):
        return x.is_zero()

    def val(self, x):
        return x.valuation()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def render(self, x):
        return x.as_pairs()


def _scalars(uniformizer):
    if uniformizer in ("t", "pi"):
        return _FormalScalars()
    return _PrimeScalars(uniformizer)


def _mat_mul2(S, A, B):
    return tuple(tuple(S.add(S.mul(A[i][0], B[0][j]),
                             S.mul(A[i][1], B[1][j]))
                       for j in range(2)) for i in range(2))


def _det2(S, A):
    return S.sub(S.mul(A[0][0], A[1][1]), S.mul(A[0][1], A[1][0]))


def _inv2(S, A):
    d = _det2(S, A)
    if S.is_zero(d):
        raise SingularLattice("lattice matrix is singular")
    return ((S.div(A[1][1], d), S.div(S.neg(A[0][1]), d)),
            (S.div(S.neg(A[1][0]), d), S.div(A[0][0], d)))


@dataclass(frozen=True)
class LatticeChain:
    """Rank-two lattices over one discretely valued field.

    Each lattice is a nonsingular 2x2 matrix whose columns generate;
    classes are taken up to homothety, so only valuation differences
    matter.  The uniformizer is a prime number or the formal symbol
    "t"/"pi"."""

    lattices: tuple
    uniformizer: object = "t"

    def __post_init__(self):
        S = _scalars(self.uniformizer)
        mats = []
        for L in self.lattices:
            M = tuple(tuple(S.coerce(x) for x in row) for row in L)
            if len(M) != 2 or any(len(r) != 2 for r in M):
                raise HypothesisViolation("lattices must be 2x2 matrices")
            if S.is_zero(_det2(S, M)):
                raise SingularLattice("lattice matrix is singular")
            mats.append(M)
        object.__setattr__(self, "lattices", tuple(mats))

    @property
    def size(self):
        return len(self.lattices)

    def scalars(self):
        return _scalars(self.uniformizer)


def _relative_position(S, A, B):
    """(vmin, vdet) of the transition matrix from A to B."""
    T = _mat_mul2(S, _inv2(S, A), B)
    vdet = S.val(_det2(S, T))
    vmin = min(S.val(x) for row in T for x in row if not S.is_zero(x))
    return T, vmin, vdet


def _tree_distance(S, A, B):
    """Distance between homothety classes on the rank-two tree: the gap
    of the two elementary divisor exponents."""
    _, vmin, vdet = _relative_position(S, A, B)
    return vdet - 2 * vmin


def _dvr_smith_basis(S, A, T):
    """A basis diagonalizing the pair (A, A.T): row-reduce T by
    valuation pivots, tracking the inverse row operations on A."""
    B = tuple(tuple(row) for row in A)
    T = tuple(tuple(row) for row in T)
    # choose the minimal-valuation entry as pivot
    vals = [(S.val(T[i][j]), i, j) for i in range(2) for j in range(2)
            if not S.is_zero(T[i][j])]
    _, pi, pj = min(vals)
    if pi == 1:
        T = (T[1], T[0])
        B = (tuple(B[0][1 - k] for k in range(2))
             if False else B)  # placeholder, replaced below
    return B, T, pi, pj


def _diagonalizing_basis(S, A, Bm):
    """Columns e, f with A = <e, f> and Bm = <pi^a e, pi^b f> up to
    homothety."""
    T, _, _ = _relative_position(S, A, Bm)
    base = [[A[i][j] for j in range(2)] for i in range(2)]
    work = [[T[i][j] for j in range(2)] for i in range(2)]
    # pivot: minimal valuation entry to (0, 0)
    vals = [(S.val(work[i][j]), i, j) for i in range(2) for j in range(2)
            if not S.is_zero(work[i][j])]
    _, pi, pj = min(vals)
    if pi == 1:
        # swapping rows of T is a unit row operation; apply the inverse
        # swap to the basis columns
        work[0], work[1] = work[1], work[0]
        for i in range(2):
            base[i][0], base[i][1] = base[i][1], base[i][0]
    if pj == 1:
        for i in range(2):
            work[i][0], work[i][1] = work[i][1], work[i][0]
    # clear the rest of the pivot row and column with operations in the
    # valuation ring
    f = S.div(work[1][0], work[0][0])
    for j in range(2):
        work[1][j] = S.sub(work[1][j], S.mul(f, work[0][j]))
    # row op T <- R.T with R = [[1,0],[-f,1]]; basis picks up R^{-1}
    for i in range(2):
        base[i][0] = S.add(base[i][0], S.mul(f, base[i][1]))
    g = S.div(work[0][1], work[0][0])
    for i in range(2):
        work[i][1] = S.sub(work[i][1], S.mul(g, work[i][0]))
    return tuple(tuple(row) for row in base)


def lattice_in_basis(S, basis, L):
    """Exponents (a, b) with L = <pi^a e, pi^b f> up to homothety, or
    None when L is not diagonal in the basis."""
    C = _mat_mul2(S, _inv2(S, basis), L)
    a = min(S.val(x) for x in C[0] if not S.is_zero(x))
    b = min(S.val(x) for x in C[1] if not S.is_zero(x))
    scaled = (tuple(S.div(x, S.uniformizer(a)) for x in C[0]),
              tuple(S.div(x, S.uniformizer(b)) for x in C[1]))
    if any(S.val(x) is not None and S.val(x) < 0
           for row in scaled for x in row):
        return None
    if S.val(_det2(S, scaled)) != 0:
        return None
    return a, b


def common_apartment(chain):
    """A basis diagonalizing every lattice of the chain, or None.

    Classes are plotted on the rank-two tree through pairwise
    elementary divisors; the convex hull of the vertices is a path if
    and only if every class sits on the geodesic between the two
    farthest ones, and then that geodesic's apartment basis
    diagonalizes everything."""
    S = chain.scalars()
    mats = chain.lattices
    if not mats:
        raise HypothesisViolation("empty chain")
    # dedupe homothety classes
    reps = []
    for M in mats:
        if all(_tree_distance(S, M, R) != 0 for R in reps):
            reps.append(M)
    if len(reps) == 1:
        return mats[0]
    pairs = [(i, j) for i in range(len(reps)) for j in range(i)]
    dist = {(i, j): _tree_distance(S, reps[j], reps[i]) for i, j in pairs}
    (x, y), dmax = max(dist.items(), key=lambda kv: kv[1])
    for k in range(len(reps)):
        if k in (x, y):
            continue
        dx = dist.get((max(k, x), min(k, x)))
        dy = dist.get((max(k, y), min(k, y)))
        if dx + dy != dmax:
            return None
    basis = _diagonalizing_basis(S, reps[x], reps[y])
    if any(lattice_in_basis(S, basis, M) is None for M in mats):
        return None
    return basis
