"""Finitely generated integral (fine) commutative monoids.

A monoid is stored as a finite list of generators inside an ambient
lattice Z^r, together with an optional relation lattice L: elements are
congruence classes modulo L, so quotient presentations and groups with
torsion fit the same data.  A presentation by abstract generators and
relations embeds as the unit vectors of Z^k modulo the relation rows.

Membership, divisibility, units, sharpening, and saturation all reduce to
exact integer problems: nonnegative feasibility modulo L for membership,
cone geometry on the free quotient for everything convex.
"""

from .cone import Cone, hilbert_basis, image_cone
from .errors import HypothesisViolation
from .lattice import (
    intersect_subgroups,
    lattice_complement,
    mat_vec,
    matrix_rank,
    member_of_subgroup,
    rational_coords_primitive,
    row_span_basis,
    saturate_subgroup,
    solve_diophantine,
    transpose,
)
from .nonneg import feasible_mod_lattice


def _tuplize(vectors):
    return tuple(tuple(int(x) for x in v) for v in vectors)


def cone_lattice_generators(cone):
    """Monoid generators of cone ∩ Z^n, lineality allowed.

    The lineality lattice is saturated, so the ambient splits; a lift of
    a Hilbert-basis element of the pointed quotient stays in the cone
    because the cone absorbs its own lineality span.
    """
    if cone.is_strictly_convex:
        return tuple(hilbert_basis(cone)) if cone.rays else ()
    n = cone.ambient_rank
    lin = row_span_basis(cone.lineality)
    proj, lift = lattice_complement(lin, n)
    eye = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    pr = transpose([list(proj(e)) for e in eye])
    pointed = Cone.from_generators(n, cone.rays)
    quot = image_cone(pr, pointed)
    out = [lift(h) for h in hilbert_basis(quot)] if quot.rays else []
    for b in lin:
        out.append(tuple(b))
        out.append(tuple(-x for x in b))
    return tuple(out)


def hilbert_in_lattice(cone, lattice_rows):
    """Hilbert basis of cone ∩ span_Z(lattice_rows), as ambient vectors.

    The cone must be strictly convex and contained in the rational span
    of the given lattice.
    """
    B = row_span_basis(lattice_rows)
    if not cone.rays:
        return ()
    coords = [rational_coords_primitive(B, r) for r in cone.rays]
    work = Cone.from_generators(len(B), coords)
    hb = hilbert_basis(work)
    n = cone.ambient_rank
    return tuple(sorted(
        tuple(sum(c[i] * B[i][j] for i in range(len(B))) for j in range(n))
        for c in hb))


class FineMonoid:
    """A fine monoid presented by generators in Z^r modulo a relation
    lattice."""

    __slots__ = ("ambient_rank", "gens", "relations", "_cache")

    def __init__(self, ambient_rank, gens, relations=()):
        self.ambient_rank = int(ambient_rank)
        self.gens = _tuplize(gens)
        self.relations = _tuplize(relations)
        for v in self.gens + self.relations:
            if len(v) != self.ambient_rank:
                raise HypothesisViolation(
                    "generator length disagrees with the ambient rank")
        self._cache = {}

    @classmethod
    def from_relations(cls, num_gens, relations):
        """Monoid on abstract generators x_1..x_k subject to relations,
        each relation a vector of exponent differences."""
        gens = [tuple(1 if i == j else 0 for i in range(num_gens))
                for j in range(num_gens)]
        return cls(num_gens, gens, relations)

    # -- structural helpers -------------------------------------------------

    def _free_data(self):
        """(saturated relation rows, proj, lift) for the free quotient."""
        if "free" not in self._cache:
            sat = saturate_subgroup(self.relations) if self.relations else []
            proj, lift = lattice_complement(sat, self.ambient_rank)
            self._cache["free"] = (sat, proj, lift)
        return self._cache["free"]

    def free_cone(self):
        """Cone generated by the images of the generators in the free
        quotient of the ambient group by the torsion of the relations."""
        if "cone" not in self._cache:
            sat, proj, _ = self._free_data()
            d = self.ambient_rank - len(sat)
            self._cache["cone"] = Cone.from_generators(
                d, [proj(g) for g in self.gens if any(proj(g))])
        return self._cache["cone"]

    def group_basis(self):
        """Rows spanning the preimage in Z^r of the group generated by
        the monoid (its groupification inside the ambient quotient)."""
        return row_span_basis(list(self.gens) + list(self.relations))

    def torsion_gens(self):
        """Generators of the torsion subgroup of the groupification."""
        if not self.relations:
            return ()
        sat = saturate_subgroup(self.relations)
        tors = intersect_subgroups(self.group_basis(), sat)
        return tuple(t for t in tors
                     if not member_of_subgroup(self.relations, t))

    # -- element relations ---------------------------------------------------

    def contains(self, v, budget=None):
        """Is v (an ambient vector) a nonnegative combination of the
        generators, modulo the relation lattice?"""
        cols = transpose([list(g) for g in self.gens]) if self.gens else \
            [[] for _ in range(self.ambient_rank)]
        return feasible_mod_lattice(
            cols, [tuple(r) for r in self.relations], tuple(v), budget)

    def leq(self, a, b, budget=None):
        """Divisibility order: a <= b iff b - a lies in the monoid."""
        return self.contains(tuple(y - x for x, y in zip(a, b)), budget)

    def same_class(self, a, b):
        """Do a and b represent the same element (equal modulo relations)?"""
        diff = tuple(y - x for x, y in zip(a, b))
        if not any(diff):
            return True
        if not self.relations:
            return False
        return member_of_subgroup(self.relations, diff)

    @property
    def is_zero(self):
        return all(self.same_class(g, (0,) * self.ambient_rank)
                   for g in self.gens)

    # -- units and sharpness --------------------------------------------------

    def unit_rows(self, budget=None):
        """Basis rows of the ambient preimage of the unit subgroup.

        A generator appearing in any unit is itself a unit, so the unit
        group is generated by the invertible generators (and in-monoid
        torsion); the relation lattice is included so the rows cut out
        the units as a subgroup of the ambient lattice.
        """
        inv = [g for g in self.gens
               if self.contains(tuple(-x for x in g), budget)]
        tors = [t for t in self.torsion_gens() if self.contains(t, budget)]
        return row_span_basis(inv + tors + list(self.relations))

    def is_sharp(self, budget=None):
        """Only unit is zero.

        With a strictly convex cone the only possible units are torsion
        classes, and a torsion class of the monoid is a nonnegative
        combination of the generators that project to torsion, so it is
        enough that every such generator is trivial.
        """
        if not self.free_cone().is_strictly_convex:
            return False
        _, proj, _ = self._free_data()
        zero = (0,) * self.ambient_rank
        return all(self.same_class(g, zero)
                   for g in self.gens if not any(proj(g)))

    def localize(self, elements):
        """Invert the given monoid elements."""
        for s in elements:
            if not self.contains(s):
                raise HypothesisViolation(
                    "can only localize at elements of the monoid")
        extra = [tuple(-x for x in s) for s in elements]
        return FineMonoid(
            self.ambient_rank, list(self.gens) + extra, self.relations)

    def localize_sharpen(self, elements):
        """Localize at the given elements, then kill all units.

        Returns (sharp monoid, unit rows): the sharp quotient lives in the
        same ambient coordinates with the unit subgroup added to the
        relation lattice, so the projection map is the identity on
        representatives.
        """
        loc = self.localize(elements)
        units = loc.unit_rows()
        # units already span the relation lattice, so they are the full
        # relation data of the sharp quotient; HNF rows keep this canonical.
        sharp = FineMonoid(self.ambient_rank, self.gens, units)
        return sharp, units

    # -- saturation -----------------------------------------------------------

    def saturation(self):
        """The saturation of the monoid inside its own group.

        An element of the group is saturated-in iff its free-quotient
        image lies in the cone of the generators, so the result is the
        preimage of cone ∩ group lattice: Hilbert generators of the
        pointed part, both signs of the lineality part, and the torsion.
        """
        sat_rel, proj, _ = self._free_data()
        pg = [proj(g) for g in self.gens]
        lam = row_span_basis(pg)
        new_gens = list(self.torsion_gens())
        if lam:
            cone = self.free_cone()
            colsB = transpose([list(b) for b in lam])
            pg_cols = transpose([list(v) for v in pg])

            def in_group(target):
                # a group element whose free-quotient image is the target
                sol = solve_diophantine(pg_cols, target)
                assert sol is not None, "target outside the group lattice"
                return tuple(
                    sum(sol[0][i] * self.gens[i][j]
                        for i in range(len(self.gens)))
                    for j in range(self.ambient_rank))

            def to_lam(v):
                sol = solve_diophantine(colsB, v)
                assert sol is not None
                return sol[0]

            lin = cone.lineality
            lamlin = intersect_subgroups(lam, lin) if lin else []
            lamlin_coords = row_span_basis([to_lam(v) for v in lamlin])
            proj2, lift2 = lattice_complement(lamlin_coords, len(lam))
            img_gens = [proj2(to_lam(g)) for g in pg]
            work = Cone.from_generators(
                len(lam) - len(lamlin_coords),
                [g for g in img_gens if any(g)])
            assert work.is_strictly_convex
            for h in hilbert_basis(work):
                coords = lift2(h)
                target = tuple(
                    sum(coords[i] * lam[i][j] for i in range(len(lam)))
                    for j in range(len(lam[0])))
                new_gens.append(in_group(target))
            for w in lamlin:
                y = in_group(w)
                new_gens.append(y)
                new_gens.append(tuple(-x for x in y))
        return FineMonoid(self.ambient_rank, new_gens, self.relations)

    def is_saturated(self, budget=None):
        """Is the monoid saturated in its group (n x in P implies x in P)?"""
        if "saturated" not in self._cache:
            sat = self.saturation()
            self._cache["saturated"] = all(
                self.contains(g, budget) for g in sat.gens)
        return self._cache["saturated"]

    # -- generators -----------------------------------------------------------

    def minimal_generators(self, budget=None):
        """Irredundant generating set (unique when the monoid is sharp)."""
        gens = [g for g in self.gens
                if not self.same_class(g, (0,) * self.ambient_rank)]
        # dedupe classes first
        kept = []
        for g in gens:
            if not any(self.same_class(g, h) for h in kept):
                kept.append(g)
        changed = True
        while changed:
            changed = False
            for i, g in enumerate(kept):
                others = kept[:i] + kept[i + 1:]
                sub = FineMonoid(self.ambient_rank, others, self.relations)
                if sub.contains(g, budget):
                    kept = others
                    changed = True
                    break
        return tuple(kept)

    # -- plumbing --------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FineMonoid)
                and self.ambient_rank == other.ambient_rank
                and self.gens == other.gens
                and self.relations == other.relations)

    def __hash__(self):
        return hash((self.ambient_rank, self.gens, self.relations))

    def __repr__(self):
        rel = f", relations={list(self.relations)}" if self.relations else ""
        return (f"FineMonoid(rank={self.ambient_rank}, "
                f"gens={list(self.gens)}{rel})")


def free_monoid(n):
    """N^n as a FineMonoid."""
    return FineMonoid(
        n, [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)])


def pushout(P, f, A, g, B, saturated=False):
    """Pushout of A <-f- P -g-> B in integral monoids.

    f and g are ambient matrices of monoid homomorphisms out of P.  The
    integral pushout is the image of A + B in the quotient of the ambient
    sum by the antidiagonal copy of P's group; with saturated=True the
    result is saturated afterwards.
    """
    ra, rb = A.ambient_rank, B.ambient_rank
    gens = [tuple(v) + (0,) * rb for v in A.gens]
    gens += [(0,) * ra + tuple(v) for v in B.gens]
    rel = [tuple(v) + (0,) * rb for v in A.relations]
    rel += [(0,) * ra + tuple(v) for v in B.relations]
    for t in list(P.gens) + list(P.relations):
        ft = mat_vec(f, t)
        gt = mat_vec(g, t)
        rel.append(tuple(ft) + tuple(-x for x in gt))
    out = FineMonoid(ra + rb, gens, row_span_basis(rel))
    return out.saturation() if saturated else out
