"""Independent brute-force deciders used to pin expected values.

These run elementary searches over coordinate boxes and cone data. They
never call the decision procedures they are used to check; only the
cone and lattice primitives are shared.
"""

from itertools import product

from conekit.cone import Cone, face_lattice, image_cone
from conekit.lattice import member_of_subgroup, transpose, vec_add, vec_sub


def box(rank, lo, hi):
    return [tuple(v) for v in product(range(lo, hi + 1), repeat=rank)]


def group_box(mon, lo, hi):
    """Box vectors that lie in the group generated by the monoid."""
    basis = mon.group_basis()
    return [v for v in box(mon.ambient_rank, lo, hi)
            if member_of_subgroup(basis, v)]


def exactness_gap(h, bound=3):
    """A source group element outside the source whose image lies in the
    target, or None when the box holds none."""
    for x in group_box(h.source, -bound, bound):
        if h.target.contains(h.apply(x)) and not h.source.contains(x):
            return x
    return None


def lower_bounds(h, q, bound=5):
    """Source group elements in a box whose image is below q."""
    return [x for x in group_box(h.source, -bound, bound)
            if h.target.contains(vec_sub(q, h.apply(x)))]


def maximal_lower_bounds(h, q, bound=5):
    lbs = lower_bounds(h, q, bound)
    return sorted(x for x in lbs
                  if not any(y != x and h.source.contains(vec_sub(y, x))
                             for y in lbs))


def kato_decomposition(h, x1, x2, y1, y2, bound=6):
    """Box search for (x3, x4, y) splitting one pair of equal sums."""
    for x3 in box(h.source.ambient_rank, 0, bound):
        if not h.source.contains(x3):
            continue
        x4 = vec_sub(vec_add(x1, x3), x2)
        if not h.source.contains(x4):
            continue
        y = vec_sub(y1, h.apply(x3))
        if h.target.contains(y):
            return x3, x4, y
    return None


def monoid_ball(mon, depth):
    """Ambient vectors of all sums of at most `depth` generators."""
    seen = {(0,) * mon.ambient_rank}
    layer = set(seen)
    for _ in range(depth):
        layer = {tuple(vec_add(v, g)) for v in layer
                 for g in mon.gens} - seen
        seen |= layer
    return sorted(seen)


def integrality_gap(h, depth=2, bound=6):
    """A quadruple h(x1) + y1 = h(x2) + y2 with no decomposition inside
    the search box, or None."""
    src = monoid_ball(h.source, depth)
    tgt = monoid_ball(h.target, depth)
    for x1, x2, y1 in product(src, src, tgt):
        y2 = vec_sub(vec_add(h.apply(x1), y1), h.apply(x2))
        if not h.target.contains(y2):
            continue
        if kato_decomposition(h, x1, x2, y1, y2, bound) is None:
            return x1, x2, y1, y2
    return None


def dual_cone(mon):
    return Cone.from_generators(mon.ambient_rank, mon.gens).dual()


def faces_map_onto_faces(h):
    """Every dual-cone face of the target maps onto a dual-cone face of
    the source (the cone-level shadow of exactness at every face)."""
    c = h.core()
    if c.P.ambient_rank == 0 or c.Q.ambient_rank == 0:
        return True
    phi = transpose(c.M)
    p_faces = face_lattice(dual_cone(c.P))
    return all(image_cone(phi, tau) in p_faces
               for tau in face_lattice(dual_cone(c.Q)))


def stacked_relations(point):
    """Target relation rows stacked to the point's total height."""
    total = len(point.matrix)
    rel, off = [], 0
    for t in point.targets:
        for r in t.relations:
            row = [0] * total
            for i in range(t.ambient_rank):
                row[off + i] = r[i]
            rel.append(tuple(row))
        off += t.ambient_rank
    return rel


def star_box(cell, point, bound):
    """Box elements of the positives on which the flag vanishes
    identically (the brute-force star chart)."""
    from conekit.lattice import mat_vec
    rel = stacked_relations(point)
    out = []
    for w in box(cell.ambient_rank, -bound, bound):
        if not cell.positives.contains(w):
            continue
        img = mat_vec(point.matrix, w)
        dead = (member_of_subgroup(rel, img) if rel
                else all(x == 0 for x in img))
        if dead:
            out.append(w)
    return sorted(out)


def cover_gap(sigma_real, piece_reals, bound):
    """A box point of the big cone missed by every piece, or None."""
    for v in box(sigma_real.ambient_rank, -bound, bound):
        if sigma_real.contains(v) and \
                not any(p.contains(v) for p in piece_reals):
            return v
    return None


def geometric_faces(pieces):
    """Deduped faces of the piece realizations with the face order."""
    cones = []
    for p in pieces:
        for f in face_lattice(p.realization()):
            if f not in cones:
                cones.append(f)
    leq = set()
    for i, f in enumerate(cones):
        for j, g in enumerate(cones):
            if g.contains_cone(f) and f in face_lattice(g):
                leq.add((i, j))
    return cones, leq


def pl_compatible_box(cx, bound):
    """All conewise linear tuples with entries in a box, brute force."""
    from conekit.lattice import mat_vec
    dims = [c.ambient_rank for c in cx.cells]
    out = []
    for combo in product(*[box(d, -bound, bound) for d in dims]):
        if all(tuple(mat_vec(a.matrix, combo[a.src])) == combo[a.dst]
               for a in cx.arrows):
            out.append(tuple(x for part in combo for x in part))
    return out


def pl_trivial_span(cx):
    """Generators of the support and base-pullback sublattice."""
    from conekit.lattice import mat_vec
    dims = [c.ambient_rank for c in cx.cells]
    gens = []
    if cx.support_maps is not None:
        width = max((len(r) for m in cx.support_maps for r in m), default=0)
        for k in range(width):
            gens.append(tuple(m[i][k]
                              for m, d in zip(cx.support_maps, dims)
                              for i in range(d)))
    for b in cx.base.group_basis():
        gens.append(tuple(x for c in cx.cells
                          for x in mat_vec(c.base_matrix, b)))
    return gens
