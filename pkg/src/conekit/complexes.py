"""Partially ordered abelian groups, their stars, and weak cone complexes.

A cell is an ambient lattice Z^n together with a fine submonoid of
"positive" elements (the chart functions) and a structure map from a
common base monoid.  Its realization is the dual cone of the positives,
so refining the realization means enlarging the positives.  A complex
glues cells along face maps: surjections of the chart lattices whose
kernels are generated, up to saturation, by the positives they kill.
On top of this the module decides subdivision certificates, integrality
profiles, cofinality of the integral-and-exact cells inside the full
face poset, groups of conewise linear functions modulo global ones, and
symbolic presentations of the chart algebra of a single morphism.

Conventions:
  * matrices act on column vectors and are stored as row tuples, one row
    per target coordinate, exactly as in MonoidMap;
  * points of a cell are lexicographic flags: a stack of matrices into
    ordered target monoids, where the first block with a nonzero value
    decides nonnegativity;
  * face cells carry the full saturated dual chart of the face, which is
    intrinsic to the face geometry and independent of the incident cell;
  * a violated hypothesis raises HypothesisViolation; malformed gluing
    data raises ValueError.
"""

from dataclasses import dataclass, field
from typing import Optional

from .cone import Cone, face_lattice, face_leq, image_cone
from .errors import HypothesisViolation
from .lattice import (identity_matrix, intersect_subgroups, kernel_basis,
                      lattice_complement, mat_mul, mat_vec,
                      rational_coords_primitive, row_span_basis,
                      saturate_subgroup, smith_normal_form,
                      solve_diophantine, transpose, vec_sub)
from .monoid import FineMonoid, cone_lattice_generators, free_monoid
from .morphism import MonoidMap, is_exact, is_integral
from .nonneg import minimal_nonneg_solutions, minimal_solutions_mod_lattice


def _rows(m):
    return tuple(tuple(int(x) for x in row) for row in m)


def _unit(n, j):
    return tuple(int(i == j) for i in range(n))


def _kernel_rows(matrix, ncols):
    # kernel_basis cannot infer the width of a matrix without rows
    if not matrix:
        return [tuple(r) for r in identity_matrix(ncols)]
    return kernel_basis([list(r) for r in matrix])


def _sat_span(rows):
    if not rows:
        return []
    return [tuple(r) for r in
            saturate_subgroup(row_span_basis([list(r) for r in rows]))]


def _preimage_lattice(M, rel_rows, n):
    """Basis of {v in Z^n : M v lies in span(rel_rows)}."""
    m = len(M)
    if m == 0:
        return [tuple(r) for r in identity_matrix(n)]
    rows = []
    for i in range(m):
        rows.append(list(M[i]) + [-int(r[i]) for r in rel_rows])
    ker = kernel_basis(rows)
    return [tuple(r) for r in row_span_basis([list(v[:n]) for v in ker])]


def _monoid_lattice_gens(mon, sub_rows, budget=None):
    """Generators of the submonoid of elements lying in span(sub_rows).

    Saturated relation-free monoids go through the dual-cone route:
    intersect the generator cone with the exact sublattice and read off
    its Hilbert generators in sublattice coordinates.  Everything else
    falls back to the nonnegative solver with the sublattice as free
    columns.
    """
    n = mon.ambient_rank
    if not mon.gens or not sub_rows:
        return ()
    if not mon.relations and mon.is_saturated(budget):
        lam = intersect_subgroups([list(r) for r in mon.group_basis()],
                                  [list(r) for r in sub_rows])
        if not lam:
            return ()
        span = Cone.from_generators(n, (), lines=lam)
        w = mon.free_cone().intersection(span)
        small = Cone.from_generators(
            len(lam),
            [rational_coords_primitive(lam, g) for g in w.rays],
            lines=[rational_coords_primitive(lam, g) for g in w.lineality])
        gens = set()
        for c in cone_lattice_generators(small):
            gens.add(tuple(sum(c[i] * lam[i][j] for i in range(len(lam)))
                           for j in range(n)))
        return tuple(sorted(gens))
    A = [[g[i] for g in mon.gens] for i in range(n)]
    out = set()
    for a in minimal_solutions_mod_lattice(
            A, [tuple(r) for r in sub_rows], None, budget=budget):
        v = tuple(sum(a[k] * mon.gens[k][i] for k in range(len(mon.gens)))
                  for i in range(n))
        if any(v):
            out.add(v)
    return tuple(sorted(out))


# --- cells -----------------------------------------------------------------

@dataclass(frozen=True)
class PoGroup:
    """An ambient lattice ordered by a fine submonoid, over a base monoid.

    positives must be presented without relations (it is an honest
    submonoid of Z^n); the base structure map is an ambient matrix that
    must carry base generators into the positives and base relations to
    zero.
    """

    positives: FineMonoid
    base: FineMonoid
    base_matrix: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "base_matrix", _rows(self.base_matrix))
        if self.positives.relations:
            raise ValueError("positives must live in a free ambient group")
        n = self.positives.ambient_rank
        if len(self.base_matrix) != n or any(
                len(r) != self.base.ambient_rank for r in self.base_matrix):
            raise ValueError("base matrix shape disagrees with the ranks")
        for rel in self.base.relations:
            if any(mat_vec(self.base_matrix, rel)):
                raise ValueError("a base relation survives in the chart")
        for g in self.base.gens:
            if not self.positives.contains(mat_vec(self.base_matrix, g)):
                raise ValueError("base does not map into the positives")

    @property
    def ambient_rank(self):
        return self.positives.ambient_rank

    @property
    def base_rank(self):
        return self.base.ambient_rank

    def chart_cone(self):
        return Cone.from_generators(self.ambient_rank, self.positives.gens)

    def realization(self):
        """The dual cone of the positives; refinements shrink it."""
        return self.chart_cone().dual()

    def base_monoid_map(self, budget=None):
        return MonoidMap(self.base, self.positives, self.base_matrix,
                         budget=budget)

    def sharp_base_map(self, budget=None):
        """The structure map into the sharpened positives.

        Killing the chart units keeps the ambient coordinates, so the
        matrix is unchanged and only the target gains relations.
        """
        pos = self.positives
        if not pos.is_sharp(budget):
            pos, _units = pos.localize_sharpen([])
        return MonoidMap(self.base, pos, self.base_matrix, budget=budget)


def po_group(ambient_rank, positive_gens, base=None, base_matrix=None,
             name=""):
    """PoGroup constructor defaulting to the trivial base."""
    pos = FineMonoid(ambient_rank, positive_gens)
    if base is None:
        base = FineMonoid(0, ())
        base_matrix = tuple(() for _ in range(ambient_rank))
    return PoGroup(pos, base, base_matrix, name=name)


def dual_chart(cone):
    """Generators of the lattice points of the dual cone."""
    return tuple(cone_lattice_generators(cone.dual()))


# --- points and stars ------------------------------------------------------

@dataclass(frozen=True)
class ComplexPoint:
    """A lexicographic point of a cell: stacked matrices into ordered
    targets, earlier blocks dominating later ones."""

    cell: int
    matrix: tuple
    targets: tuple = (free_monoid(1),)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _rows(self.matrix))
        total = sum(t.ambient_rank for t in self.targets)
        if len(self.matrix) != total:
            raise ValueError("row count disagrees with the target ranks")

    @property
    def width(self):
        return len(self.matrix[0]) if self.matrix else 0


def as_point(x, cell=0, targets=None):
    """Coerce a vector or matrix into a ComplexPoint with free targets."""
    if isinstance(x, ComplexPoint):
        return x
    seq = list(x)
    if seq and isinstance(seq[0], (tuple, list)):
        rows = _rows(seq)
    else:
        rows = (tuple(int(a) for a in seq),)
    if targets is None:
        targets = tuple(free_monoid(1) for _ in rows)
    return ComplexPoint(cell, rows, tuple(targets))


def refine_point(x, y):
    """Stack y below x: the composite point whose star is the star of y
    taken on the star of x."""
    x, y = as_point(x), as_point(y)
    if x.width != y.width:
        raise ValueError("points live on different ambient ranks")
    return ComplexPoint(x.cell, x.matrix + y.matrix, x.targets + y.targets)


def _lex_nonneg(point, w, budget=None):
    off = 0
    for t in point.targets:
        block = tuple(w[off:off + t.ambient_rank])
        off += t.ambient_rank
        if t.same_class(block, (0,) * t.ambient_rank):
            continue
        return t.contains(block, budget)
    return True


def _stacked_target_relations(point):
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


def point_kernel(point, n):
    """Basis of the directions on which the point vanishes identically."""
    return _preimage_lattice(point.matrix, _stacked_target_relations(point),
                             n)


def star(cell, x, budget=None):
    """The cell at a point: same ambient, positives cut down to the part
    the point kills, and the base starred along the composite.

    Raises HypothesisViolation when the point is not order nonnegative
    on the cell.
    """
    pt = as_point(x)
    n = cell.ambient_rank
    if pt.width != n:
        raise HypothesisViolation("point width disagrees with the cell")
    for g in cell.positives.gens:
        if not _lex_nonneg(pt, mat_vec(pt.matrix, g), budget):
            raise HypothesisViolation(
                "point is not order nonnegative on the cell")
    sub = point_kernel(pt, n)
    pos = FineMonoid(n, _monoid_lattice_gens(cell.positives, sub, budget))
    comp = mat_mul([list(r) for r in pt.matrix],
                   [list(r) for r in cell.base_matrix])
    bsub = _preimage_lattice(comp, _stacked_target_relations(pt),
                             cell.base_rank)
    base = FineMonoid(cell.base_rank,
                      _monoid_lattice_gens(cell.base, bsub, budget),
                      cell.base.relations)
    name = "star(%s)" % cell.name if cell.name else "star"
    return PoGroup(pos, base, cell.base_matrix, name=name)


# --- face cells ------------------------------------------------------------

@dataclass(frozen=True)
class FaceMap:
    """A gluing arrow: a chart surjection whose kernel is generated, up
    to saturation, by the killed positives."""

    src: int
    dst: int
    matrix: tuple
    killed: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "matrix", _rows(self.matrix))
        object.__setattr__(self, "killed", _rows(self.killed))


def _face_quotient(n, face):
    """Chart projection pm and section L for a realization face.

    pm kills the integral annihilator of the face; L is a matrix section
    of pm (pm . L = id) and transpose(L) carries the face span into the
    small coordinates, inverse to transpose(pm) on that span.
    """
    fg = [list(v) for v in face.generators()]
    sub = kernel_basis(fg) if fg else [tuple(r) for r in identity_matrix(n)]
    proj, lift = lattice_complement([list(r) for r in sub], n)
    n2 = n - len(sub)
    cols = [proj(_unit(n, j)) for j in range(n)]
    pm = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n2))
    lcols = [lift(_unit(n2, j)) for j in range(n2)]
    lmat = tuple(tuple(lcols[j][i] for j in range(n2)) for i in range(n))
    return pm, lmat


def face_cell(cell, face, name="", budget=None):
    """The intrinsic cell of a realization face: (cell, matrix, killed).

    The face chart is the full saturated dual of the face in the chart
    quotient, so two cells sharing the face produce the same cell and
    the same matrix; only the killed positives depend on the incident
    cell.
    """
    n = cell.ambient_rank
    real = cell.realization()
    if not real.contains_cone(face):
        raise HypothesisViolation("not a face of the realization")
    span_dual = cell.chart_cone().intersection(Cone.from_inequalities(
        n, (), equations=[list(g) for g in face.generators()]))
    smallest = real.intersection(Cone.from_inequalities(
        n, (), equations=[list(g) for g in span_dual.generators()]))
    if smallest != face:
        raise HypothesisViolation("not a face of the realization")
    pm, lmat = _face_quotient(n, face)
    small = image_cone([list(r) for r in transpose([list(r) for r in lmat])],
                       face)
    pos = FineMonoid(len(pm), dual_chart(small))
    bm = _rows(mat_mul([list(r) for r in pm],
                       [list(r) for r in cell.base_matrix]))
    out = PoGroup(pos, cell.base, bm, name=name)
    killed = _monoid_lattice_gens(cell.positives,
                                  _sat_span(span_dual.generators()), budget)
    return out, pm, killed


# --- subdivision certificates ----------------------------------------------

@dataclass(frozen=True)
class SubdivisionReport:
    """Outcome of the three-part subdivision check.

    condition is the first failing part (1 refinement data, 2 pairwise
    proper-face with an exchange certificate, 3 covering), None when all
    hold; certificates collects the pairwise exchange vectors (i, j, f)
    with cone(C_i u C_j) = cone(C_i u {-f}) = cone(C_j u {f}).
    """

    ok: bool
    condition: Optional[int] = None
    reason: str = ""
    witness: dict = field(default_factory=dict)
    certificates: tuple = ()

    def __bool__(self):
        return self.ok


def _fail(condition, reason, witness, certs):
    return SubdivisionReport(False, condition, reason, witness,
                             tuple(certs))


def _covers_lex(chart_gens, v1, v2):
    for r in chart_gens:
        t = sum(a * b for a, b in zip(r, v1))
        if t < 0:
            return False
        if t == 0 and sum(a * b for a, b in zip(r, v2)) < 0:
            return False
    return True


def _rank2_samples(cell):
    """Pairs (v1, v2) of lexicographic directions probing the realization:
    v1 runs over face interior points, v2 over the directions that keep
    the order nonnegative at v1."""
    n = cell.ambient_rank
    chart = cell.chart_cone()
    out = []
    for f in face_lattice(cell.realization()):
        v1 = f.relative_interior_point()
        wall = chart.intersection(
            Cone.from_inequalities(n, (), equations=[list(v1)]))
        allowed = wall.dual()
        dirs = [tuple(v) for v in allowed.generators()]
        seconds = set(dirs) | {(0,) * n}
        for a in dirs:
            for b in dirs:
                seconds.add(tuple(x + y for x, y in zip(a, b)))
        for v2 in sorted(seconds):
            out.append((v1, v2))
    return out


def check_subdivision(sigma, pieces, budget=None):
    """Certify that the pieces subdivide the cell.

    Checks, in order: every piece refines the cell over the same base;
    realizations meet pairwise in a common proper face, witnessed by an
    exchange vector f in C_i cap -C_j with
    cone(C_i u C_j) = cone(C_i u {-f}) = cone(C_j u {f}); the pieces are
    equidimensional and cover the realization (interior facets shared by
    exactly two pieces, connected through shared facets, and every
    lexicographic sample order nonnegative on some piece).
    """
    pieces = tuple(pieces)
    certs = []
    if not pieces:
        return _fail(1, "no pieces", {}, certs)
    n = sigma.ambient_rank
    for k, p in enumerate(pieces):
        if p.ambient_rank != n:
            return _fail(1, "ambient rank disagrees", {"piece": k}, certs)
        if p.base != sigma.base or p.base_matrix != sigma.base_matrix:
            return _fail(1, "piece is not over the same base",
                         {"piece": k}, certs)
        for g in sigma.positives.gens:
            if not p.positives.contains(g, budget):
                return _fail(1, "piece does not refine the cell",
                             {"piece": k, "generator": g}, certs)
    reals = [p.realization() for p in pieces]
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            tau = reals[i].intersection(reals[j])
            if tau == reals[i] or tau == reals[j]:
                return _fail(2, "intersection is not a proper face",
                             {"pair": (i, j)}, certs)
            ci = pieces[i].chart_cone()
            cj = pieces[j].chart_cone()
            slab = ci.intersection(Cone.from_generators(
                n, [tuple(-x for x in g) for g in cj.rays],
                lines=cj.lineality))
            ann = Cone.from_inequalities(
                n, (), equations=[list(g) for g in tau.generators()])
            f = slab.intersection(ann).relative_interior_point()
            joint = Cone.from_generators(
                n, list(ci.generators()) + list(cj.generators()))
            left = Cone.from_generators(
                n, list(ci.generators()) + [tuple(-x for x in f)])
            right = Cone.from_generators(
                n, list(cj.generators()) + [tuple(f)])
            if not (any(f) and joint == left == right):
                return _fail(2, "no exchange certificate",
                             {"pair": (i, j), "vector": tuple(f)}, certs)
            certs.append((i, j, tuple(f)))
    whole = sigma.realization()
    d = whole.dim
    for k, r in enumerate(reals):
        if r.dim != d:
            return _fail(3, "piece is not equidimensional",
                         {"piece": k, "dim": r.dim}, certs)
    if d > 0 and len(pieces) > 1:
        shared = {}
        adj = {k: set() for k in range(len(pieces))}
        for k, r in enumerate(reals):
            for f in face_lattice(r):
                if f.dim == d - 1:
                    shared.setdefault(f, []).append(k)
        for f, owners in shared.items():
            on_boundary = any(
                all(sum(a * b for a, b in zip(nrm, g)) == 0
                    for g in f.generators())
                for nrm in whole.facet_normals)
            if on_boundary:
                if len(owners) != 1:
                    return _fail(3, "boundary facet shared by two pieces",
                                 {"facet": f.rays, "pieces": tuple(owners)},
                                 certs)
            elif len(owners) != 2:
                return _fail(3, "interior facet not shared by exactly two "
                             "pieces", {"facet": f.rays,
                                        "pieces": tuple(owners)}, certs)
            else:
                adj[owners[0]].add(owners[1])
                adj[owners[1]].add(owners[0])
        seen, queue = {0}, [0]
        while queue:
            k = queue.pop()
            for t in adj[k]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        if len(seen) != len(pieces):
            return _fail(3, "pieces are not facet connected",
                         {"reached": tuple(sorted(seen))}, certs)
    for v1, v2 in _rank2_samples(sigma):
        if not any(_covers_lex(p.positives.gens, v1, v2) for p in pieces):
            return _fail(3, "sample direction not covered",
                         {"v1": v1, "v2": v2}, certs)
    return SubdivisionReport(True, None, "", {}, tuple(certs))


# --- complexes --------------------------------------------------------------

_CLOSURE_CAP = 4096


@dataclass(frozen=True)
class Complex:
    """Cells over a common base glued along face maps.

    arrows exclude identities and are closed under composition;
    support_maps, when present, give each cell a matrix from a common
    support lattice, compatible with every arrow.
    """

    cells: tuple
    arrows: tuple
    support_maps: Optional[tuple] = None

    @property
    def base(self):
        return self.cells[0].base

    @classmethod
    def build(cls, cells, arrows, support_maps=None, budget=None):
        """Validate gluing data and close the arrows under composition.

        Composites get their killed positives recomputed from the kernel
        of the composed matrix; a composite landing back on its source
        means the gluing has a cycle and is rejected.
        """
        cells = tuple(cells)
        if not cells:
            raise ValueError("a complex needs at least one cell")
        for c in cells[1:]:
            if c.base != cells[0].base:
                raise ValueError("cells are not over a common base")
        if support_maps is not None:
            support_maps = tuple(_rows(m) for m in support_maps)
            if len(support_maps) != len(cells):
                raise ValueError("one support matrix per cell required")
            widths = {len(r) for m in support_maps for r in m}
            if len(widths) > 1:
                raise ValueError("support matrices disagree on the rank")
            for c, m in zip(cells, support_maps):
                if len(m) != c.ambient_rank:
                    raise ValueError("support matrix shape disagrees")
        work = []
        seen = set()
        for a in arrows:
            a = FaceMap(a.src, a.dst, a.matrix, a.killed)
            _check_arrow(cells, a, support_maps, budget)
            key = (a.src, a.dst, a.matrix)
            if key not in seen:
                seen.add(key)
                work.append(a)
        changed = True
        while changed:
            changed = False
            for a in list(work):
                for b in list(work):
                    if a.dst != b.src:
                        continue
                    m = _rows(mat_mul([list(r) for r in b.matrix],
                                      [list(r) for r in a.matrix]))
                    if a.src == b.dst:
                        raise ValueError("gluing has a cycle")
                    key = (a.src, b.dst, m)
                    if key in seen:
                        continue
                    killed = _monoid_lattice_gens(
                        cells[a.src].positives,
                        _kernel_rows(m, cells[a.src].ambient_rank), budget)
                    comp = FaceMap(a.src, b.dst, m, killed)
                    _check_arrow(cells, comp, support_maps, budget)
                    seen.add(key)
                    work.append(comp)
                    changed = True
                    if len(work) > _CLOSURE_CAP:
                        raise ValueError("arrow closure did not terminate")
        return cls(cells, tuple(work), support_maps)

    @classmethod
    def from_subdivision(cls, sigma, pieces, budget=None):
        """The complex of a certified subdivision: the pieces, one
        intrinsic cell per geometric proper face, and all face maps,
        with support maps restricting the common ambient chart."""
        report = check_subdivision(sigma, pieces, budget=budget)
        if not report.ok:
            raise ValueError("not a subdivision: " + report.reason)
        pieces = tuple(pieces)
        n = sigma.ambient_rank
        cells = list(pieces)
        support = [tuple(_unit(n, i) for i in range(n)) for _ in pieces]
        index = {}
        data = {}
        arrows = []
        for k, p in enumerate(pieces):
            top = p.realization()
            for f in face_lattice(top):
                if f == top:
                    continue
                if f not in index:
                    cell, pm, killed = face_cell(
                        p, f, name="face%d" % len(index), budget=budget)
                    index[f] = len(cells)
                    data[f] = pm
                    cells.append(cell)
                    support.append(pm)
                else:
                    cell, pm, killed = face_cell(p, f, budget=budget)
                arrows.append(FaceMap(k, index[f], data[f], killed))
        faces = sorted(index, key=lambda f: (f.dim, f.rays, f.lineality))
        for f in faces:
            lmat = _face_quotient(n, f)[1]
            for g in faces:
                if g is f or f.dim <= g.dim or not f.contains_cone(g):
                    continue
                m = _rows(mat_mul([list(r) for r in data[g]],
                                  [list(r) for r in lmat]))
                killed = _monoid_lattice_gens(
                    cells[index[f]].positives,
                    _kernel_rows(m, cells[index[f]].ambient_rank), budget)
                arrows.append(FaceMap(index[f], index[g], m, killed))
        return cls.build(cells, arrows, support_maps=tuple(support),
                         budget=budget)

    def with_support_from_cell(self, idx):
        """Support maps read off one maximal cell: that cell gets the
        identity and every arrow out of it hands its matrix to the
        target cell."""
        n = self.cells[idx].ambient_rank
        support = [None] * len(self.cells)
        support[idx] = tuple(_unit(n, i) for i in range(n))
        for a in self.arrows:
            if a.src != idx:
                continue
            if support[a.dst] is not None and support[a.dst] != a.matrix:
                raise ValueError("cell %d is reached by two distinct "
                                 "arrows" % a.dst)
            support[a.dst] = a.matrix
        if any(m is None for m in support):
            raise ValueError("cell %d does not reach every cell" % idx)
        return Complex.build(self.cells, self.arrows,
                             support_maps=tuple(support))


def _check_arrow(cells, a, support_maps, budget=None):
    if not (0 <= a.src < len(cells) and 0 <= a.dst < len(cells)):
        raise ValueError("arrow endpoints out of range")
    if a.src == a.dst:
        raise ValueError("self gluing not supported")
    src, dst = cells[a.src], cells[a.dst]
    if len(a.matrix) != dst.ambient_rank or any(
            len(r) != src.ambient_rank for r in a.matrix):
        raise ValueError("arrow matrix shape disagrees with the cells")
    for g in src.positives.gens:
        if not dst.positives.contains(mat_vec(a.matrix, g), budget):
            raise ValueError("arrow does not map positives to positives")
    if _rows(mat_mul([list(r) for r in a.matrix],
                     [list(r) for r in src.base_matrix])) != dst.base_matrix:
        raise ValueError("arrow does not commute with the base")
    for k in a.killed:
        if any(mat_vec(a.matrix, k)):
            raise ValueError("a killed element survives the arrow")
        if not src.positives.contains(k, budget):
            raise ValueError("a killed element is not positive")
    ker = [tuple(r) for r in
           row_span_basis([list(r) for r in
                           _kernel_rows(a.matrix, src.ambient_rank)])]
    if _sat_span(a.killed) != ker:
        raise ValueError("kernel is not generated by the killed positives")
    if support_maps is not None:
        lhs = _rows(mat_mul([list(r) for r in a.matrix],
                            [list(r) for r in support_maps[a.src]]))
        if lhs != support_maps[a.dst]:
            raise ValueError("arrow does not commute with the support")


# --- integrality profiles ----------------------------------------------------

@dataclass(frozen=True)
class ProfileEntry:
    cell: int
    name: str
    integral: bool
    exact: bool


def integrality_profile(cx, budget=None):
    """Integrality and exactness of each cell's sharpened structure map."""
    out = []
    for i, cell in enumerate(cx.cells):
        h = cell.sharp_base_map(budget)
        out.append(ProfileEntry(i, cell.name, is_integral(h, budget).holds,
                                is_exact(h, budget).holds))
    return tuple(out)


# --- face posets and cofinality ----------------------------------------------

@dataclass(frozen=True)
class Poset:
    """A finite poset with reflexive-transitive leq pairs and optional
    per-element metadata."""

    elements: tuple
    leq: frozenset
    meta: Optional[dict] = None

    @classmethod
    def from_relations(cls, elements, pairs, meta=None):
        elements = tuple(elements)
        leq = {(a, a) for a in elements}
        leq |= {tuple(p) for p in pairs}
        changed = True
        while changed:
            changed = False
            for a, b in list(leq):
                for c, d in list(leq):
                    if b == c and (a, d) not in leq:
                        leq.add((a, d))
                        changed = True
        return cls(elements, frozenset(leq), meta)

    def up_set(self, a):
        return tuple(b for b in self.elements if (a, b) in self.leq)


class _DSU:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def intersection_complexes(cx, budget=None):
    """The face poset J of a complex and its integral-exact part I.

    Faces of cell realizations are identified along the transposed
    arrow matrices (which embed target realizations into sources); each
    class is one element, ordered by the face order, with metadata
    recording dimension, members and the flags of the intrinsic face
    cell.  Returns (J, I) with I the induced subposet of cells both
    integral and exact.
    """
    faces = [tuple(face_lattice(c.realization())) for c in cx.cells]
    dsu = _DSU()
    for i, fl in enumerate(faces):
        for f in fl:
            dsu.find((i, f))
    for a in cx.arrows:
        ns = cx.cells[a.src].ambient_rank
        nd = cx.cells[a.dst].ambient_rank
        # explicit shape: transpose alone cannot recover empty row counts
        emb = [[a.matrix[j][i] for j in range(nd)] for i in range(ns)]
        for f in faces[a.dst]:
            img = image_cone(emb, f)
            if img not in faces[a.src]:
                raise ValueError("gluing image is not a face")
            dsu.union((a.dst, f), (a.src, img))
    classes = {}
    for i, fl in enumerate(faces):
        for f in fl:
            classes.setdefault(dsu.find((i, f)), []).append((i, f))
    def member_key(m):
        return (m[0], m[1].rays, m[1].lineality)
    ordered = sorted(classes.values(),
                     key=lambda ms: (ms[0][1].dim,
                                     sorted(member_key(m) for m in ms)))
    label = {}
    for k, ms in enumerate(ordered):
        for m in ms:
            label[m] = "F%d" % k
    pairs = set()
    for i, fl in enumerate(faces):
        for f in fl:
            for g in fl:
                if face_leq(f, g):
                    pairs.add((label[(i, f)], label[(i, g)]))
    meta = {}
    for k, ms in enumerate(ordered):
        i, f = min(ms, key=member_key)
        cell = cx.cells[i]
        if f == cell.realization():
            h = cell.sharp_base_map(budget)
        else:
            h = face_cell(cell, f, budget=budget)[0].sharp_base_map(budget)
        meta["F%d" % k] = {
            "dim": f.dim,
            "members": tuple(sorted(member_key(m) for m in ms)),
            "integral": is_integral(h, budget).holds,
            "exact": is_exact(h, budget).holds,
        }
    elements = tuple("F%d" % k for k in range(len(ordered)))
    full = Poset.from_relations(elements, pairs, meta)
    good = tuple(e for e in elements
                 if meta[e]["integral"] and meta[e]["exact"])
    sub = Poset(good,
                frozenset((a, b) for a, b in full.leq
                          if a in set(good) and b in set(good)),
                {e: meta[e] for e in good})
    return full, sub


@dataclass(frozen=True)
class CofinalityReport:
    ok: bool
    at: Optional[str] = None
    up_set: tuple = ()
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_cofinal(I, J):
    """Is the subposet I cofinal in J in the comma sense: above every
    element of J the elements of I are nonempty and connected?"""
    members = tuple(I.elements) if isinstance(I, Poset) else tuple(I)
    for j in J.elements:
        up = tuple(i for i in members if (j, i) in J.leq)
        if not up:
            return CofinalityReport(False, j, (), "empty up-set")
        seen, queue = {up[0]}, [up[0]]
        while queue:
            a = queue.pop()
            for b in up:
                if b not in seen and ((a, b) in J.leq or (b, a) in J.leq):
                    seen.add(b)
                    queue.append(b)
        if len(seen) != len(up):
            return CofinalityReport(False, j, up, "disconnected up-set")
    return CofinalityReport(True)


# --- conewise linear classes --------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group in invariant-factor form."""

    free_rank: int
    torsion: tuple = ()

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append("Z^%d" % self.free_rank)
        parts.extend("Z/%d" % t for t in self.torsion)
        return " x ".join(parts) if parts else "0"


def pl_classes(cx):
    """Conewise linear functions modulo support and base functions.

    A conewise linear function assigns a chart element to every cell,
    compatibly with all arrows; the quotient is by the functions coming
    from the support lattice (when present) and by pullbacks of base
    group elements.
    """
    dims = [c.ambient_rank for c in cx.cells]
    offs = [0]
    for d in dims:
        offs.append(offs[-1] + d)
    total = offs[-1]
    rows = []
    for a in cx.arrows:
        for i in range(dims[a.dst]):
            row = [0] * total
            for j in range(dims[a.src]):
                row[offs[a.src] + j] = a.matrix[i][j]
            row[offs[a.dst] + i] -= 1
            rows.append(row)
    basis = _kernel_rows(rows, total)
    if not basis:
        return AbelianGroup(0)
    gens = []
    if cx.support_maps is not None:
        width = max((len(r) for m in cx.support_maps for r in m), default=0)
        for k in range(width):
            gens.append(tuple(m[i][k] for m, d in zip(cx.support_maps, dims)
                              for i in range(d)))
    for b in cx.base.group_basis():
        gens.append(tuple(x for c in cx.cells
                          for x in mat_vec(c.base_matrix, b)))
    bt = transpose([list(v) for v in basis])
    coords = []
    for s in gens:
        sol = solve_diophantine(bt, s)
        if sol is None:
            raise ValueError("a global function is not conewise linear")
        coords.append(sol[0])
    if not coords:
        return AbelianGroup(len(basis))
    _, d, _ = smith_normal_form([list(c) for c in coords])
    k = min(len(coords), len(basis))
    diag = [d[i][i] for i in range(k)]
    free = len(basis) - sum(1 for x in diag if x != 0)
    torsion = tuple(abs(x) for x in diag if abs(x) > 1)
    return AbelianGroup(free, torsion)


# --- chart algebra presentations ----------------------------------------------

@dataclass(frozen=True)
class Token:
    """A named generator of the chart algebra presentation."""

    name: str
    kind: str
    vector: tuple
    degree: tuple


@dataclass(frozen=True)
class Relation:
    """A binomial lhs - rhs, exponents split over the token families."""

    lhs_x: tuple
    rhs_x: tuple
    rhs_u: tuple
    rhs_s: tuple
    kind: str
    essential: bool


def _power(name, e):
    return name if e == 1 else "%s^%d" % (name, e)


def _monomial(pieces):
    parts = [_power(n, e) for n, e in pieces if e]
    return " ".join(parts) if parts else "1"


@dataclass(frozen=True)
class SymbolicPresentation:
    """Generators and binomial relations of the chart algebra of a
    morphism of sharp fine saturated monoids, either over the base or
    with the unit directions sliced away.

    Inessential relations are pure unit identities and eliminations of
    single chart variables; degree_modulus lists the lattice by which
    the displayed degrees are to be read modulo (sliced form only).
    """

    x_tokens: tuple
    u_tokens: tuple
    s_tokens: tuple
    relations: tuple
    degree_modulus: tuple = ()
    sliced: bool = False

    def relation_strings(self, essential_only=False):
        out = []
        for r in self.relations:
            if essential_only and not r.essential:
                continue
            lhs = _monomial(list(zip([t.name for t in self.x_tokens],
                                     r.lhs_x)))
            rhs = _monomial(
                list(zip([t.name for t in self.x_tokens], r.rhs_x))
                + list(zip([t.name for t in self.u_tokens], r.rhs_u))
                + list(zip([t.name for t in self.s_tokens], r.rhs_s)))
            out.append("%s - %s" % (lhs, rhs))
        return tuple(out)

    def summary(self):
        essential = [r for r in self.relations if r.essential]
        if not essential:
            return "no relations beyond units"
        return "%d essential relation(s)" % len(essential)


def _names(prefix, count):
    if count == 1:
        return (prefix,)
    return tuple("%s_%d" % (prefix, i + 1) for i in range(count))


def _coords_in(rows, v):
    sol = solve_diophantine(transpose([list(r) for r in rows]), v)
    if sol is None:
        raise ValueError("vector outside the integer span")
    return tuple(sol[0])


def present_local_algebra(h, sliced=False, budget=None):
    """Symbolic presentation of the chart algebra of h over its base.

    Unsliced, the algebra carries one invertible token per basis vector
    of the source group and one section token per source generator, and
    every target generator power x^{h(p)} is identified with the unit
    twist of the section.  Sliced, the unit directions not killed by h
    are trivialized: tokens u^k survive only for k in ker(h), degrees
    live in the target group modulo the image lattice, and sections
    enter untwisted.
    """
    P, Q = h.source, h.target
    for mon, side in ((P, "source"), (Q, "target")):
        if mon.relations:
            raise HypothesisViolation(side + " must be relation free")
        if not mon.is_sharp(budget):
            raise HypothesisViolation(side + " must be sharp")
        if not mon.is_saturated(budget):
            raise HypothesisViolation(side + " must be saturated")
    rq = Q.ambient_rank
    hb_q = tuple(sorted(Q.minimal_generators(budget)))
    hb_p = tuple(sorted(P.minimal_generators(budget)))
    bp = [tuple(r) for r in P.group_basis()]
    zero_q = (0,) * rq
    xs = tuple(Token(nm, "x", q, q)
               for nm, q in zip(_names("x", len(hb_q)), hb_q))
    ss = tuple(Token(nm, "s", p, zero_q)
               for nm, p in zip(_names("s", len(hb_p)), hb_p))
    if sliced:
        kerrows = [tuple(r) for r in kernel_basis(
            [list(r) for r in h.group_map])] if h.group_map else []
        kb = intersect_subgroups([list(r) for r in kerrows],
                                 [list(r) for r in bp]) if kerrows else []
        kb = [tuple(r) for r in kb]
        us = tuple(Token(nm, "u", k, zero_q)
                   for nm, k in zip(_names("u", len(kb)), kb))
        modulus = tuple(tuple(r) for r in row_span_basis(
            [list(mat_vec(h.group_map, b)) for b in bp]))
        kcoords = [_coords_in(bp, k) for k in kb] if kb else []
    else:
        us = tuple(Token(nm, "u", b,
                         tuple(-x for x in mat_vec(h.group_map, b)))
                   for nm, b in zip(_names("u", len(bp)), bp))
        modulus = ()
    cols = [[q[i] for q in hb_q] for i in range(rq)]
    relations = []
    for idx, p in enumerate(hb_p):
        hp = mat_vec(h.group_map, p)
        if not any(hp):
            e = (0,) * len(hb_q)
        else:
            sols = minimal_nonneg_solutions(cols, list(hp), budget)
            e = tuple(sorted(sols)[0])
        if sliced:
            if kb:
                kpart = _klift(bp, kb, _coords_in(bp, p))
                uexp = _coords_in(kb, kpart) if any(kpart) else (0,) * len(kb)
            else:
                uexp = ()
        else:
            uexp = tuple(-x for x in _coords_in(bp, p))
        sexp = tuple(int(i == idx) for i in range(len(hb_p)))
        if not any(e):
            kind, essential = "unit", False
        elif sum(1 for x in e if x) == 1 and max(e) == 1:
            kind, essential = "elimination", False
        else:
            kind, essential = "structure", True
        relations.append(Relation(e, (0,) * len(hb_q), uexp, sexp, kind,
                                  essential))
    for v in kernel_basis(cols) if hb_q else []:
        plus = tuple(x if x > 0 else 0 for x in v)
        minus = tuple(-x if x < 0 else 0 for x in v)
        relations.append(Relation(plus, minus, (0,) * len(us),
                                  (0,) * len(hb_p), "syzygy", True))
    return SymbolicPresentation(xs, us, ss, tuple(relations), modulus,
                                sliced)


def _klift(bp, kb, coords):
    """The kernel component of the vector with the given basis coords:
    subtract the complement part of its kernel-coordinate split."""
    kcoord_rows = [_coords_in(bp, k) for k in kb]
    proj, lift = lattice_complement([list(r) for r in kcoord_rows],
                                    len(bp))
    comp = lift(proj(tuple(coords)))
    rest = vec_sub(tuple(coords), comp)
    n = len(bp[0]) if bp else 0
    return tuple(sum(rest[i] * bp[i][j] for i in range(len(bp)))
                 for j in range(n))
