"""Rational polyhedral cones with exact integer arithmetic.

A cone is stored in both descriptions at once: extreme rays plus lineality
basis on one side, irredundant facet normals plus span equations on the
other.  Both are computed at construction time by one core routine that
converts a halfspace description into extreme rays, so dualizing is just a
swap of the two descriptions.

Rays are primitive integer vectors, reduced to canonical representatives
modulo the lineality lattice and sorted, so cones compare and hash by
value.
"""

from fractions import Fraction
from itertools import combinations, product

from .errors import NotStrictlyConvex
from .lattice import (
    kernel_basis,
    lattice_complement,
    matrix_rank,
    primitive,
    row_span_basis,
    saturate_subgroup,
    solve_diophantine,
    transpose,
)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _reduce_mod_rows(x, rows):
    """Canonical representative of x modulo the lattice spanned by HNF rows."""
    x = list(x)
    for row in rows:
        p = next(j for j, a in enumerate(row) if a)
        q = x[p] // row[p]
        if q:
            for j in range(len(x)):
                x[j] -= q * row[j]
    return tuple(x)


def _halfspace_core(n, rows):
    """Extreme rays and lineality of {x in Z^n : row . x >= 0 for all rows}.

    Every extreme ray of the region lies on a rank n-l-1 subset of the
    constraints (l the lineality dimension), so candidates are enumerated
    from constraint subsets in the coordinates of the quotient by the
    lineality space, then filtered by sign and by tightness rank.
    """
    rows = [tuple(r) for r in rows]
    lin = kernel_basis([list(r) for r in rows]) if rows else None
    if lin is None:
        lin = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    lin = [tuple(r) for r in row_span_basis(lin)]
    l = len(lin)
    d = n - l
    if d == 0:
        return (), tuple(lin)
    proj, lift = lattice_complement(lin, n)
    lifted_units = [
        lift(tuple(1 if i == j else 0 for i in range(d))) for j in range(d)]
    qrows = [tuple(_dot(row, lu) for lu in lifted_units) for row in rows]
    uniq = []
    seen = set()
    for r in qrows:
        if any(r):
            p = primitive(r)
            if p not in seen:
                seen.add(p)
                uniq.append(p)
    candidates = set()
    for S in combinations(uniq, d - 1):
        kern = kernel_basis([list(r) for r in S]) if S else \
            [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
        if len(kern) != 1:
            continue
        v = primitive(kern[0])
        candidates.add(v)
        candidates.add(tuple(-a for a in v))
    rays = []
    for v in candidates:
        if any(_dot(r, v) < 0 for r in qrows):
            continue
        tight = [list(r) for r in uniq if _dot(r, v) == 0]
        if matrix_rank(tight) == d - 1:
            rays.append(v)
    out = []
    for v in rays:
        x = lift(v)
        out.append(_reduce_mod_rows(x, lin))
    return tuple(sorted(set(out))), tuple(lin)


class Cone:
    """A rational polyhedral cone, canonically represented."""

    __slots__ = ("ambient_rank", "rays", "lineality",
                 "facet_normals", "span_equations")

    def __init__(self, ambient_rank, rays, lineality,
                 facet_normals, span_equations):
        self.ambient_rank = ambient_rank
        self.rays = rays
        self.lineality = lineality
        self.facet_normals = facet_normals
        self.span_equations = span_equations

    @classmethod
    def from_inequalities(cls, n, normals, equations=()):
        rows = [tuple(r) for r in normals]
        for e in equations:
            rows.append(tuple(e))
            rows.append(tuple(-x for x in e))
        rays, lin = _halfspace_core(n, rows)
        dual_rows = list(rays)
        for v in lin:
            dual_rows.append(v)
            dual_rows.append(tuple(-x for x in v))
        facets, span_eqs = _halfspace_core(n, dual_rows)
        return cls(n, rays, lin, facets, span_eqs)

    @classmethod
    def from_generators(cls, n, generators, lines=()):
        rows = [tuple(g) for g in generators]
        for v in lines:
            rows.append(tuple(v))
            rows.append(tuple(-x for x in v))
        facets, span_eqs = _halfspace_core(n, rows)
        dual_rows = list(facets)
        for v in span_eqs:
            dual_rows.append(v)
            dual_rows.append(tuple(-x for x in v))
        rays, lin = _halfspace_core(n, dual_rows)
        return cls(n, rays, lin, facets, span_eqs)

    def dual(self):
        """The dual cone {y : <x, y> >= 0 for all x in self}."""
        return Cone(self.ambient_rank, self.facet_normals, self.span_equations,
                    self.rays, self.lineality)

    @property
    def dim(self):
        return matrix_rank(
            [list(r) for r in self.rays] + [list(v) for v in self.lineality])

    @property
    def is_strictly_convex(self):
        return not self.lineality

    def contains(self, v):
        return (all(_dot(f, v) >= 0 for f in self.facet_normals)
                and all(_dot(e, v) == 0 for e in self.span_equations))

    def contains_cone(self, other):
        return (all(self.contains(r) for r in other.rays)
                and all(self.contains(v) and self.contains(
                    tuple(-x for x in v)) for v in other.lineality))

    def intersection(self, other):
        assert self.ambient_rank == other.ambient_rank
        return Cone.from_inequalities(
            self.ambient_rank,
            list(self.facet_normals) + list(other.facet_normals),
            list(self.span_equations) + list(other.span_equations))

    def relative_interior_point(self):
        n = self.ambient_rank
        return tuple(sum(r[i] for r in self.rays) for i in range(n))

    def generators(self):
        """Rays plus both signs of the lineality basis."""
        out = list(self.rays)
        for v in self.lineality:
            out.append(v)
            out.append(tuple(-x for x in v))
        return out

    def __eq__(self, other):
        return (isinstance(other, Cone)
                and self.ambient_rank == other.ambient_rank
                and self.rays == other.rays
                and self.lineality == other.lineality)

    def __hash__(self):
        return hash((self.ambient_rank, self.rays, self.lineality))

    def __repr__(self):
        return (f"Cone(rank={self.ambient_rank}, rays={list(self.rays)}, "
                f"lineality={list(self.lineality)})")


def image_cone(M, cone):
    """Image of a cone under the integer linear map with matrix M."""
    from .lattice import mat_vec

    gens = [mat_vec(M, r) for r in cone.rays]
    lines = [mat_vec(M, v) for v in cone.lineality]
    m = len(M)
    return Cone.from_generators(m, gens, lines)


def face_lattice(cone):
    """All faces of the cone, sorted by dimension then rays.

    Faces of a face are cut out by the facet normals of the original
    cone, so a breadth-first closure over tightened normal subsets finds
    every face; each face is returned as a Cone sharing the lineality.
    """
    top_key = frozenset(cone.rays)
    by_key = {top_key: cone}
    frontier = [top_key]
    while frontier:
        new = []
        for key in frontier:
            face = by_key[key]
            for nrm in cone.facet_normals:
                sub = frozenset(
                    r for r in face.rays if _dot(nrm, r) == 0)
                if sub == key or sub in by_key:
                    continue
                child = Cone.from_generators(
                    cone.ambient_rank, sorted(sub), cone.lineality)
                by_key[frozenset(child.rays)] = child
                new.append(frozenset(child.rays))
        frontier = new
    faces = sorted(by_key.values(), key=lambda f: (f.dim, f.rays))
    return faces


def face_leq(f, g):
    """Is f a face of g, both being faces of a common cone?"""
    return set(f.rays) <= set(g.rays)


def _triangulate(cone):
    """Split a strictly convex cone into simplicial ray lists (pulling)."""
    rays = list(cone.rays)
    d = cone.dim
    if len(rays) == d:
        return [rays]
    v = rays[0]
    simplices = []
    for nrm in cone.facet_normals:
        if _dot(nrm, v) == 0:
            continue
        facet_rays = [r for r in rays if _dot(nrm, r) == 0]
        facet = Cone.from_generators(cone.ambient_rank, facet_rays)
        for T in _triangulate(facet):
            simplices.append(T + [v])
    return simplices


def _fraction_inverse(C):
    d = len(C)
    M = [[Fraction(C[i][j]) for j in range(d)] + \
         [Fraction(1 if j == i else 0) for j in range(d)] for i in range(d)]
    for c in range(d):
        pr = next(i for i in range(c, d) if M[i][c] != 0)
        M[c], M[pr] = M[pr], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(d):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [row[d:] for row in M]


def hilbert_basis(cone):
    """The minimal generating set of the monoid of lattice points.

    Raises NotStrictlyConvex when the cone contains a line.  The cone is
    projected onto the saturated lattice of its span, triangulated, and
    candidate generators are read off the fundamental parallelepipeds of
    the simplicial pieces; a global pass then removes every candidate that
    splits off another candidate inside the cone.
    """
    if not cone.is_strictly_convex:
        raise NotStrictlyConvex(
            "Hilbert bases are defined for strictly convex cones only")
    if not cone.rays:
        return ()
    n = cone.ambient_rank
    W = saturate_subgroup(cone.rays)
    d = len(W)
    WT = transpose([list(w) for w in W])
    coords = []
    for r in cone.rays:
        sol = solve_diophantine(WT, r)
        assert sol is not None, "ray outside the saturated span lattice"
        coords.append(sol[0])
    work = Cone.from_generators(d, coords)
    assert work.dim == d and len(work.rays) == len(cone.rays)
    candidates = set(work.rays)
    for simplex in _triangulate(work):
        C = [[simplex[j][i] for j in range(d)] for i in range(d)]
        Cinv = _fraction_inverse(C)
        lo = [sum(min(0, C[i][j]) for j in range(d)) for i in range(d)]
        hi = [sum(max(0, C[i][j]) for j in range(d)) for i in range(d)]
        for z in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
            t = [sum(Cinv[i][j] * z[j] for j in range(d)) for i in range(d)]
            if all(0 <= x < 1 for x in t) and any(z):
                candidates.add(z)
    basis = []
    cand = sorted(candidates, key=lambda v: (sum(abs(a) for a in v), v))
    for h in cand:
        reducible = False
        for g in cand:
            if g != h and work.contains(tuple(a - b for a, b in zip(h, g))):
                if any(a - b for a, b in zip(h, g)):
                    reducible = True
                    break
        if not reducible:
            basis.append(h)
    out = [tuple(sum(v[i] * W[i][r] for i in range(d)) for r in range(n))
           for v in basis]
    return tuple(sorted(out))
