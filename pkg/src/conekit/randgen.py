"""Seeded random inputs for cross-validation sweeps.

Monoids are drawn as Hilbert bases of random full-dimensional pointed
cones, so they are saturated and sharp by construction; maps are drawn
with full-rank matrices and targets enlarged to contain the image, so
they are injective valid homomorphisms by construction.
"""

from .cone import Cone, hilbert_basis
from .lattice import mat_vec, matrix_rank
from .monoid import FineMonoid
from .morphism import MonoidMap


def random_pointed_monoid(rng, rank, max_gens=5, coord_bound=3):
    """A saturated sharp monoid of the given rank with at most max_gens
    Hilbert generators."""
    while True:
        k = rng.randint(rank, max_gens + 2)
        raw = [tuple(rng.randint(0, coord_bound) for _ in range(rank))
               for _ in range(k)]
        raw = [g for g in raw if any(g)]
        cone = Cone.from_generators(rank, raw)
        if cone.dim != rank:
            continue
        hb = hilbert_basis(cone)
        if 0 < len(hb) <= max_gens:
            return FineMonoid(rank, hb)


def random_injective_map(rng, max_rank=3, max_gens=5, coord_bound=2):
    """A group-injective map between saturated sharp monoids."""
    while True:
        rp = rng.randint(1, max_rank)
        rq = rng.randint(rp, max_rank)
        P = random_pointed_monoid(rng, rp, max_gens, coord_bound + 1)
        M = [[rng.randint(-coord_bound, coord_bound) for _ in range(rp)]
             for _ in range(rq)]
        if matrix_rank(M) < rp:
            continue
        gens = [tuple(mat_vec(M, g)) for g in P.gens]
        for _ in range(rng.randint(0, 2)):
            extra = tuple(rng.randint(0, coord_bound) for _ in range(rq))
            if any(extra):
                gens.append(extra)
        cone = Cone.from_generators(rq, gens)
        if not cone.is_strictly_convex or not cone.rays:
            continue
        hb = hilbert_basis(cone)
        if not hb or len(hb) > max_gens:
            continue
        if any(abs(c) > 2 * coord_bound for g in hb for c in g):
            continue
        return MonoidMap(P, FineMonoid(rq, hb), M)


def random_integral_subdivision(rng, family=None):
    """A pair (sigma, pieces) forming an integral subdivision.

    Three families: an interval over the base N split at lattice
    breakpoints, a pointed plane fan split along primitive rays, and the
    octant split by reflection hyperplanes.  Every cell in each family
    has an integral, exact base map, so the cofinality and commutation
    lemmas apply to the output.
    """
    from .complexes import dual_chart, po_group
    fam = family or rng.choice(("interval", "fan2d", "octant"))
    if fam == "interval":
        top = rng.randint(2, 6)
        cuts = sorted(rng.sample(range(1, top), rng.randint(1, min(3, top - 1))))
        marks = [0] + cuts + [top]
        base = FineMonoid(1, ((1,),))
        bm = ((0,), (1,))
        def interval_cell(name, a, b):
            cone = Cone.from_generators(2, ((a, 1), (b, 1)))
            return po_group(2, dual_chart(cone), base=base, base_matrix=bm,
                            name=name)
        sigma = interval_cell("interval", 0, top)
        pieces = [interval_cell("seg%d" % i, marks[i], marks[i + 1])
                  for i in range(len(marks) - 1)]
        return sigma, pieces
    if fam == "fan2d":
        rays = {(1, 0), (0, 1)}
        while len(rays) < rng.randint(3, 5):
            rays.add((rng.randint(1, 4), rng.randint(1, 4)))
        from math import gcd
        prim = sorted({(a // gcd(a, b), b // gcd(a, b)) for a, b in rays},
                      key=lambda v: (v[1], v[0]) if v[0] else (10 ** 9, 0))
        prim.sort(key=lambda v: v[1] / v[0] if v[0] else float("inf"))
        def fan_cell(name, *gens):
            return po_group(2, dual_chart(Cone.from_generators(2, gens)),
                            name=name)
        sigma = fan_cell("wedge", prim[0], prim[-1])
        pieces = [fan_cell("sector%d" % i, prim[i], prim[i + 1])
                  for i in range(len(prim) - 1)]
        return sigma, pieces
    axes = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    i, j = rng.sample(range(3), 2)
    mid = tuple(1 if k in (i, j) else 0 for k in range(3))
    def oct_cell(name, *gens):
        return po_group(3, dual_chart(Cone.from_generators(3, gens)),
                        name=name)
    sigma = oct_cell("octant", *axes)
    k = 3 - i - j
    pieces = [oct_cell("half0", axes[i], mid, axes[k]),
              oct_cell("half1", mid, axes[j], axes[k])]
    return sigma, pieces


def star_test_points(sigma):
    """Deterministic rank-1 star points: apex, each ray, the relative
    interior."""
    real = sigma.realization()
    pts = [(0,) * sigma.ambient_rank]
    pts.extend(real.rays)
    if real.rays:
        pts.append(real.relative_interior_point())
    return pts
