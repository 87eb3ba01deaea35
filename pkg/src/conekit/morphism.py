"""Decision procedures for homomorphisms of fine, saturated, sharp monoids.

A homomorphism is an integer matrix between the ambient lattices of two
FineMonoids that carries generators into the target monoid and relations
into relations.  Internally everything is normalized onto free group
coordinates: each monoid is re-expressed inside its own groupification
(free for the monoids accepted here) and the matrix is rewritten
accordingly.  Dual cones, face lattices, Hilbert bases and nonnegative
integer searches then decide locality, exactness, integrality,
saturation, verticality and infima, each with a machine-checkable
certificate.

Conventions:
  * certificates that are monoid elements are reported in the ambient
    coordinates of the monoid they belong to;
  * certificates that live in dual space (rays, faces) are reported in
    the dual coordinates of the groupification, which coincide with the
    ambient dual coordinates whenever the monoid is presented without
    relations by generators spanning the ambient lattice;
  * a violated hypothesis raises HypothesisViolation; a missing
    exactness precondition raises NotExact.
"""

from dataclasses import dataclass
from itertools import combinations
from math import gcd, lcm
from typing import Optional

from .cone import Cone, face_lattice, hilbert_basis, image_cone
from .errors import HypothesisViolation, NotExact
from .lattice import (
    identity_matrix,
    kernel_basis,
    lattice_complement,
    mat_vec,
    matrix_rank,
    member_of_subgroup,
    rational_solve,
    row_span_basis,
    saturate_subgroup,
    solve_diophantine,
    transpose,
    vec_add,
    vec_sub,
)
from .monoid import (
    FineMonoid,
    cone_lattice_generators,
    hilbert_in_lattice,
    pushout,
)
from .nonneg import (
    feasible_mod_lattice,
    has_nonneg_solution,
    minimal_nonneg_solutions,
    minimal_solutions_mod_lattice,
)


# -- group coordinates ---------------------------------------------------------


def _free_core(P):
    """Re-express a monoid inside its own groupification.

    Returns (core, to_core, from_core): core is relation-free with
    generators spanning Z^r; to_core maps an ambient vector of a group
    element to its coordinates; from_core picks an ambient
    representative.  Raises HypothesisViolation when the groupification
    has torsion, since these procedures only treat free groups.
    """
    if P.torsion_gens():
        raise HypothesisViolation(
            "the groupification has torsion; the monoid cannot be "
            "saturated and sharp at the same time")
    G = P.group_basis()
    r0 = len(G)
    if r0 == 0:
        zero = (0,) * P.ambient_rank

        def to_zero(v):
            if any(v):
                raise HypothesisViolation("vector outside the trivial group")
            return ()

        return FineMonoid(0, [() for _ in P.gens]), to_zero, lambda x: zero
    cols = transpose([list(g) for g in G])

    def coords(v):
        sol = solve_diophantine(cols, tuple(v))
        if sol is None:
            raise HypothesisViolation("vector outside the groupification")
        return sol[0]

    L = row_span_basis(P.relations)
    Lc = row_span_basis([coords(l) for l in L])
    # absence of torsion makes the relation lattice saturated in the group
    proj, lift = lattice_complement(Lc, r0)

    def to_core(v):
        return proj(coords(v))

    def from_core(x):
        c = lift(x)
        return tuple(sum(c[i] * G[i][j] for i in range(r0))
                     for j in range(P.ambient_rank))

    core = FineMonoid(r0 - len(Lc), [to_core(g) for g in P.gens])
    return core, to_core, from_core


class _Core:
    """A morphism rewritten on the free group coordinates of both sides."""

    __slots__ = ("P", "Q", "M", "to_p", "from_p", "to_q", "from_q")

    def __init__(self, h):
        self.P, self.to_p, self.from_p = _free_core(h.source)
        self.Q, self.to_q, self.from_q = _free_core(h.target)
        rp = self.P.ambient_rank
        cols = []
        for i in range(rp):
            e = tuple(1 if j == i else 0 for j in range(rp))
            cols.append(self.to_q(h.apply(self.from_p(e))))
        self.M = tuple(
            tuple(cols[i][r] for i in range(rp))
            for r in range(self.Q.ambient_rank))


class MonoidMap:
    """A homomorphism of fine monoids given by an ambient matrix.

    The matrix has one row per target ambient coordinate; construction
    checks that relations map into relations (well-definedness on
    congruence classes) and that every generator lands in the target
    monoid.
    """

    def __init__(self, source, target, group_map, budget=None):
        self.source = source
        self.target = target
        self.group_map = tuple(
            tuple(int(x) for x in row) for row in group_map)
        if len(self.group_map) != target.ambient_rank or any(
                len(r) != source.ambient_rank for r in self.group_map):
            raise HypothesisViolation("matrix shape disagrees with the "
                                      "ambient ranks")
        for rel in source.relations:
            img = self.apply(rel)
            if any(img) and not member_of_subgroup(target.relations, img):
                raise HypothesisViolation(
                    "a relation of the source does not map into the "
                    "relation lattice of the target")
        for g in source.gens:
            if not target.contains(self.apply(g), budget):
                raise HypothesisViolation(
                    "a generator does not map into the target monoid")
        self._core = None

    @classmethod
    def identity(cls, P):
        return cls(P, P, identity_matrix(P.ambient_rank))

    def apply(self, v):
        return tuple(mat_vec(self.group_map, tuple(v)))

    def core(self):
        if self._core is None:
            self._core = _Core(self)
        return self._core

    def __eq__(self, other):
        return (isinstance(other, MonoidMap)
                and self.source == other.source
                and self.target == other.target
                and self.group_map == other.group_map)

    def __hash__(self):
        return hash((self.source, self.target, self.group_map))

    def __repr__(self):
        return (f"MonoidMap({self.source!r} -> {self.target!r}, "
                f"matrix={[list(r) for r in self.group_map]})")


# -- result types --------------------------------------------------------------


@dataclass(frozen=True)
class PropertyReport:
    """Verdict for one property together with its checkable evidence.

    A negative verdict always carries a counterexample; positive
    verdicts for exactness and saturation carry the verifying cone or
    lattice data.  `method` names the procedure that produced the
    verdict.
    """

    name: str
    holds: bool
    certificate: Optional[dict] = None
    method: str = ""


@dataclass(frozen=True)
class InfResult:
    """Greatest lower bound data for one target group element.

    kind is one of "no_lower_bound", "max", "no_max".  A max value
    dominates every lower bound; a no_max antichain lists the maximal
    lower bounds, pairwise incomparable and sorted lexicographically.
    Elements are ambient vectors of the localized source, whose identity
    base change is recorded by `localized_source`.
    """

    kind: str
    value: Optional[tuple] = None
    maximal_elements: tuple = ()
    localized_source: Optional[FineMonoid] = None


@dataclass(frozen=True)
class PushforwardClass:
    """Classifier for the pushforward of a character sheaf."""

    kind: str  # "invertible" | "ideal_like" | "zero"
    value: Optional[tuple] = None
    antichain: tuple = ()


# -- hypothesis plumbing -------------------------------------------------------


def _require_sharp(h, budget=None):
    for mon in (h.source, h.target):
        if not mon.is_sharp(budget):
            raise HypothesisViolation("expected sharp monoids")


def _require_fss(h, budget=None):
    _require_sharp(h, budget)
    for mon in (h.source, h.target):
        if not mon.is_saturated(budget):
            raise HypothesisViolation("expected saturated monoids")


def _sigma(core_mon):
    """Dual cone of the monoid, in group dual coordinates."""
    return Cone.from_generators(
        core_mon.ambient_rank, core_mon.gens).dual()


# -- basic flags ---------------------------------------------------------------


def basic_flags(h, budget=None):
    """Locality, group injectivity and verticality, with certificates.

    local: the rational kernel of the group map meets the cone of the
    source only at 0 (equivalently only units pull back to units).
    vertical: the image of the target in coker of the group map is a
    group; it is enough that each generator class has an inverse there,
    an integer feasibility problem modulo the image lattice.
    """
    _require_sharp(h, budget)
    c = h.core()
    rp, rq = c.P.ambient_rank, c.Q.ambient_rank
    if rp == 0:
        ker = []
    elif rq == 0:
        # a zero-row matrix keeps no column count, so spell the kernel out
        ker = [tuple(r) for r in identity_matrix(rp)]
    else:
        ker = kernel_basis(c.M)
    flags = {
        "injective_gp": PropertyReport(
            "injective_gp", not ker,
            {"kernel": tuple(ker)} if ker else None, "kernel basis")}
    if not ker:
        flags["local"] = PropertyReport("local", True, None, "kernel cone")
    else:
        span = Cone.from_generators(rp, [], ker)
        meet = Cone.from_generators(rp, c.P.gens).intersection(span)
        witness = None
        if meet.dim > 0:
            w = meet.rays[0] if meet.rays else meet.lineality[0]
            witness = {"element": c.from_p(w)}
        flags["local"] = PropertyReport(
            "local", meet.dim == 0, witness, "kernel cone")
    if rq == 0:
        flags["vertical"] = PropertyReport(
            "vertical", True, None, "coset feasibility")
        return flags
    A = transpose([list(g) for g in c.Q.gens]) if c.Q.gens else \
        [[] for _ in range(rq)]
    img_cols = [col for col in transpose(c.M)] if rp else []
    vertical, cert = True, None
    for g in c.Q.gens:
        target = tuple(-x for x in g)
        if not feasible_mod_lattice(A, img_cols, target, budget):
            vertical, cert = False, {"generator": c.from_q(g)}
            break
    flags["vertical"] = PropertyReport(
        "vertical", vertical, cert, "coset feasibility")
    return flags


# -- exactness -----------------------------------------------------------------


def is_exact(h, budget=None):
    """Exactness via surjectivity of the dual cone map.

    The morphism is exact iff the dual map carries the dual cone of the
    target onto the dual cone of the source; a ray left uncovered is a
    rank one valuation of the source with no extension.
    """
    _require_fss(h, budget)
    c = h.core()
    rp = c.P.ambient_rank
    if rp == 0:
        return PropertyReport("exact", True, {"image_rays": ()},
                              "dual cone image")
    if c.Q.ambient_rank == 0:
        im = Cone.from_generators(rp, [])
    else:
        im = image_cone(transpose(c.M), _sigma(c.Q))
    sigma_p = _sigma(c.P)
    for ray in sigma_p.rays:
        if not im.contains(ray):
            return PropertyReport("exact", False, {"ray": ray},
                                  "dual cone image")
    assert sigma_p.contains_cone(im)
    return PropertyReport("exact", True, {"image_rays": im.rays},
                          "dual cone image")


def extend_rank1_valuation(h, v, budget=None):
    """Extend the valuation <v, -> of the source along the morphism.

    Returns (c, w) with w a lattice point of the target dual cone whose
    pullback is c*v, c a positive integer; None when v is outside the
    image of the dual map, which for exact morphisms never happens.
    """
    _require_fss(h, budget)
    c = h.core()
    rp = c.P.ambient_rank
    v = tuple(int(x) for x in v)
    if rp == 0:
        return 1, (0,) * c.Q.ambient_rank
    if not _sigma(c.P).contains(v):
        raise HypothesisViolation("the functional is not in the dual cone")
    phi = transpose(c.M)
    sigma_q = _sigma(c.Q)
    if not image_cone(phi, sigma_q).contains(v):
        return None
    rays = sigma_q.rays
    imgs = [mat_vec(phi, r) for r in rays]
    for size in range(1, rp + 1):
        for idx in combinations(range(len(rays)), size):
            sub = [imgs[i] for i in idx]
            if matrix_rank([list(u) for u in sub]) < size:
                continue
            A = transpose([list(u) for u in sub])
            lam = rational_solve(A, v)
            if lam is None or any(x < 0 for x in lam):
                continue
            mult = lcm(*(x.denominator for x in lam)) if lam else 1
            w = tuple(
                sum(int(lam[t] * mult) * rays[idx[t]][j]
                    for t in range(size))
                for j in range(c.Q.ambient_rank))
            g = gcd(mult, *w)
            return mult // g, tuple(x // g for x in w)
    raise AssertionError("contained in the image cone but not expressible")


# -- localization --------------------------------------------------------------


def localize_morphism(h, budget=None):
    """Invert everything the morphism kills; the result is local.

    The kernel submonoid of the source is generated by the minimal
    nonnegative generator combinations annihilated by the matrix; the
    localization is sharpened in place (identity base change).
    """
    if not h.target.is_sharp(budget):
        raise HypothesisViolation("localization needs a sharp target")
    c = h.core()
    eye = identity_matrix(h.source.ambient_rank)
    if not h.source.gens or c.P.ambient_rank == 0:
        return h, eye
    if c.Q.ambient_rank == 0:
        killed = list(h.source.gens)
    else:
        A = transpose([list(mat_vec(c.M, g)) for g in c.P.gens])
        killed = []
        for a in minimal_nonneg_solutions(A, None, budget):
            s = tuple(
                sum(a[i] * h.source.gens[i][j] for i in range(len(a)))
                for j in range(h.source.ambient_rank))
            if s not in killed:
                killed.append(s)
    if not killed:
        return h, eye
    sharp, _ = h.source.localize_sharpen(killed)
    return MonoidMap(sharp, h.target, h.group_map, budget), eye


def localizations_exact(h, budget=None, jobs=1):
    """Exactness of every localized composite, by target face.

    Each face of the cone of the target corresponds to a localization of
    the target; the composite is localized on the source side and tested
    for exactness.  Faces are visited in ascending dimension, so the
    first failure of a non-exact morphism is the trivial localization.
    """
    _require_fss(h, budget)
    c = h.core()
    rq = c.Q.ambient_rank
    if rq == 0:
        return PropertyReport("localizations_exact", True,
                              {"faces_checked": 1}, "face localization")
    faces = face_lattice(Cone.from_generators(rq, c.Q.gens))

    def check(face):
        loc_target, _ = c.Q.localize_sharpen(face.rays)
        comp = MonoidMap(c.P, loc_target, c.M, budget)
        loc, _ = localize_morphism(comp, budget)
        return is_exact(loc, budget)

    if jobs and jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(check, faces))
        for face, rep in zip(faces, reports):
            if not rep.holds:
                return PropertyReport(
                    "localizations_exact", False,
                    {"inverted_generators": face.rays,
                     "inner": rep.certificate}, "face localization")
    else:
        for face in faces:
            rep = check(face)
            if not rep.holds:
                return PropertyReport(
                    "localizations_exact", False,
                    {"inverted_generators": face.rays,
                     "inner": rep.certificate}, "face localization")
    return PropertyReport("localizations_exact", True,
                          {"faces_checked": len(faces)}, "face localization")


# -- integrality ---------------------------------------------------------------


def _saturated_action_pairs(mon, d):
    """Minimal pairs for a relation-free saturated monoid.

    The second members u2 form the minimal module generators of the slab
    {u2 in cone, u2 + d in cone}; homogenizing the slab by a height
    coordinate turns them into the height-one Hilbert elements.
    """
    r = mon.ambient_rank
    if not member_of_subgroup(mon.group_basis(), tuple(d)):
        return []
    sigma = Cone.from_generators(r, mon.gens)
    normals, equations = [(0,) * r + (1,)], []
    for f in sigma.facet_normals:
        fd = sum(a * b for a, b in zip(f, d))
        normals.append(tuple(f) + (0,))
        normals.append(tuple(f) + (fd,))
    for e in sigma.span_equations:
        equations.append(tuple(e) + (0,))
    hat = Cone.from_inequalities(r + 1, normals, equations)
    rows = [tuple(g) + (0,) for g in mon.group_basis()] + [(0,) * r + (1,)]
    pairs = []
    for v in hilbert_in_lattice(hat, rows):
        if v[r] == 1:
            u2 = tuple(v[:r])
            pairs.append((tuple(vec_add(u2, d)), u2))
    return sorted(pairs)


def _minimal_action_pairs(mon, d, budget=None):
    """Pairs (u1, u2) of monoid elements with u1 - u2 = d, minimal under
    the diagonal action u -> u + q.

    Componentwise-minimal solutions over generator coefficients dominate
    the true minima, and the difference of two pairs with equal gap is
    automatically diagonal, so a final domination pass is exact.
    """
    G = mon.gens
    r, k = mon.ambient_rank, len(G)
    if k == 0:
        zero = (0,) * r
        return [(zero, zero)] if mon.same_class(d, zero) else []
    if (not mon.relations and mon.is_sharp(budget)
            and mon.is_saturated(budget)):
        return _saturated_action_pairs(mon, d)
    A = [[G[j][i] for j in range(k)] + [-G[j][i] for j in range(k)]
         for i in range(r)]
    free = [tuple(rel) for rel in mon.relations]
    sols = minimal_solutions_mod_lattice(A, free, tuple(d), budget)
    pairs = []
    for s in sols:
        u1 = tuple(sum(s[j] * G[j][i] for j in range(k)) for i in range(r))
        u2 = tuple(sum(s[k + j] * G[j][i] for j in range(k))
                   for i in range(r))
        if not any(mon.same_class(u1, p1) and mon.same_class(u2, p2)
                   for p1, p2 in pairs):
            pairs.append((u1, u2))
    keep = []
    for i, (u1, u2) in enumerate(pairs):
        dominated = False
        for j, (w1, _) in enumerate(pairs):
            if i == j:
                continue
            diff = vec_sub(u1, w1)
            if any(diff) and mon.contains(diff, budget):
                dominated = True
                break
        if not dominated:
            keep.append((u1, u2))
    return sorted(keep)


def kato_witness(h, x1, x2, y1, y2, budget=None):
    """A decomposition (x3, x4, y) for one instance of the equational
    criterion, or None when no decomposition exists.

    Witnesses are stable under enlarging (x3, x4) diagonally, so it is
    enough to scan the minimal pairs with gap x2 - x1.
    """
    lhs = tuple(a + b for a, b in zip(h.apply(x1), y1))
    rhs = tuple(a + b for a, b in zip(h.apply(x2), y2))
    if not h.target.same_class(lhs, rhs):
        raise HypothesisViolation("the two sides are not equal in the target")
    for x3, x4 in _minimal_action_pairs(h.source, vec_sub(x2, x1), budget):
        y = vec_sub(y1, h.apply(x3))
        if h.target.contains(y, budget):
            return x3, x4, y
    return None


def is_integral(h, budget=None):
    """Kato's equational criterion over minimal generator pairs.

    For generators x1, x2 of the source, every minimal pair (y1, y2)
    with y1 - y2 = h(x2) - h(x1) must admit a decomposition; witnesses
    extend additively to sums and are stable under the diagonal action,
    so generator pairs and minimal pairs suffice.  The negative
    certificate is the failing quadruple.
    """
    _require_sharp(h, budget)
    gens = h.source.minimal_generators(budget)
    for x1, x2 in combinations(gens, 2):
        d = vec_sub(h.apply(x2), h.apply(x1))
        xpairs = _minimal_action_pairs(h.source, vec_sub(x2, x1), budget)
        for y1, y2 in _minimal_action_pairs(h.target, d, budget):
            good = any(
                h.target.contains(vec_sub(y1, h.apply(x3)), budget)
                for x3, _ in xpairs)
            if not good:
                return PropertyReport(
                    "integral", False,
                    {"x1": x1, "x2": x2, "y1": y1, "y2": y2},
                    "Kato minimal pairs")
    return PropertyReport("integral", True, None, "Kato minimal pairs")


def _elements_upto(mon, bound):
    """All distinct monoid elements that are sums of at most `bound`
    generators (representatives, deduplicated by congruence class)."""
    zero = (0,) * mon.ambient_rank
    layer, seen = {zero}, [zero]
    for _ in range(bound):
        nxt = set()
        for v in layer:
            for g in mon.gens:
                w = tuple(a + b for a, b in zip(v, g))
                if w not in nxt and not any(
                        mon.same_class(w, u) for u in seen):
                    nxt.add(w)
        seen.extend(sorted(nxt))
        layer = nxt
    return seen


def integral_spot_check(h, bound=3, budget=None):
    """Brute-force audit of the generator reduction in is_integral.

    Scans every quadruple (x1, x2, y1, y2) with elements of generator
    degree at most `bound` and verifies each with the exact witness
    search, which is complete per quadruple.
    """
    src = _elements_upto(h.source, bound)
    tgt = _elements_upto(h.target, bound)
    checked = 0
    for x1 in src:
        for x2 in src:
            base = vec_sub(h.apply(x1), h.apply(x2))
            for y1 in tgt:
                y2 = tuple(a + b for a, b in zip(base, y1))
                if not h.target.contains(y2, budget):
                    continue
                checked += 1
                if kato_witness(h, x1, x2, y1, y2, budget) is None:
                    return PropertyReport(
                        "integral", False,
                        {"x1": x1, "x2": x2, "y1": y1, "y2": y2},
                        "brute force")
    return PropertyReport("integral", True, {"quadruples": checked},
                          "brute force")


# -- saturation ----------------------------------------------------------------


def is_saturated(h, budget=None, jobs=1):
    """Weak semistability: every face of the target dual cone surjects
    onto a face of the source dual cone, with surjective face lattices.

    The lattice condition on a face t asks that the images of the
    Hilbert basis of t generate the full monoid of lattice points of the
    image face; a missed point is the certificate.
    """
    _require_fss(h, budget)
    c = h.core()
    rp, rq = c.P.ambient_rank, c.Q.ambient_rank
    if rp and (rq == 0 or kernel_basis(c.M)):
        raise HypothesisViolation(
            "the saturation test needs a group-injective morphism")
    if rq == 0:
        return PropertyReport("saturated", True, {"faces_checked": 1},
                              "weak semistability")
    phi = transpose(c.M)
    sigma_p = _sigma(c.P) if rp else Cone.from_generators(0, [])
    p_faces = face_lattice(sigma_p)
    faces = face_lattice(_sigma(c.Q))

    def check(tau):
        if rp == 0:
            return None
        im = image_cone(phi, tau)
        if im not in p_faces:
            return {"face_rays": tau.rays, "image_rays": im.rays,
                    "reason": "image is not a face"}
        if not tau.rays:
            return None
        img_gens = [mat_vec(phi, r) for r in hilbert_basis(tau)]
        A = transpose([list(u) for u in img_gens])
        for w in hilbert_basis(im):
            if not has_nonneg_solution(A, w, budget):
                return {"face_rays": tau.rays, "missing": w,
                        "reason": "lattice points not surjective"}
        return None

    if jobs and jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            certs = list(pool.map(check, faces))
    else:
        certs = [check(tau) for tau in faces]
    for cert in certs:
        if cert is not None:
            return PropertyReport("saturated", False, cert,
                                  "weak semistability")
    return PropertyReport("saturated", True,
                          {"faces_checked": len(faces)},
                          "weak semistability")


# -- quasisaturation -----------------------------------------------------------


def _pushout_member_fn(P, Q, M, n):
    """Membership test for the pushout of multiplication by n along M,
    for saturated sharp relation-free P and Q with spanning generators.

    (a, b) lies in the pushout iff some integer shift u puts a + n*u in
    P and b - M*u in Q; homogenizing over the shift gives a strictly
    convex cone whose height-one Hilbert elements decide feasibility.
    """
    rp, rq = P.ambient_rank, Q.ambient_rank
    sp = Cone.from_generators(rp, P.gens)
    sq = Cone.from_generators(rq, Q.gens)

    def member(v):
        a, b = tuple(v[:rp]), tuple(v[rp:])
        if rp == 0:
            return Q.contains(b)
        normals = [(0,) * rp + (1,)]
        equations = []
        for f in sp.facet_normals:
            normals.append(tuple(n * fi for fi in f)
                           + (sum(fi * ai for fi, ai in zip(f, a)),))
        for e in sp.span_equations:
            equations.append(tuple(n * ei for ei in e)
                             + (sum(ei * ai for ei, ai in zip(e, a)),))
        for g in sq.facet_normals:
            row = tuple(-sum(g[r] * M[r][j] for r in range(rq))
                        for j in range(rp))
            normals.append(row + (sum(gi * bi for gi, bi in zip(g, b)),))
        for e in sq.span_equations:
            row = tuple(-sum(e[r] * M[r][j] for r in range(rq))
                        for j in range(rp))
            equations.append(row + (sum(ei * bi for ei, bi in zip(e, b)),))
        hat = Cone.from_inequalities(rp + 1, normals, equations)
        return any(x[rp] == 1 for x in hilbert_basis(hat))

    return member


def _exact_into(src, rows, tgt, budget=None, member=None):
    """Exactness of a morphism from any fine monoid into a relation-free
    saturated sharp monoid whose generators span.

    Torsion of the source group maps to zero, so every torsion generator
    must already lie in the source; the free part reduces to the
    generators of the preimage cone of the target cone.
    """
    if member is None:
        def member(v):
            return src.contains(v, budget)
    for t in src.torsion_gens():
        if not member(t):
            return False, {"kind": "torsion", "element": t}
    G = src.group_basis()
    r0 = len(G)
    if r0 == 0:
        return True, {"generators_checked": 0}
    cols = transpose([list(g) for g in G])

    def coords(v):
        sol = solve_diophantine(cols, tuple(v))
        assert sol is not None
        return sol[0]

    Lc = saturate_subgroup([coords(l) for l in src.relations]) \
        if src.relations else []
    proj, lift = lattice_complement(Lc, r0)
    rfree = r0 - len(Lc)
    if rfree == 0:
        return True, {"generators_checked": 0}

    def ambient(x):
        cc = lift(x)
        return tuple(sum(cc[i] * G[i][j] for i in range(r0))
                     for j in range(src.ambient_rank))

    eye = identity_matrix(rfree)
    img_cols = [mat_vec(rows, ambient(e)) for e in eye]
    rq = tgt.ambient_rank
    Mfree = [[img_cols[i][r] for i in range(rfree)] for r in range(rq)]
    tgt_cone = Cone.from_generators(rq, tgt.gens)
    ineqs = [tuple(sum(nrm[i] * Mfree[i][j] for i in range(rq))
                   for j in range(rfree))
             for nrm in tgt_cone.facet_normals]
    eqs = [tuple(sum(eq[i] * Mfree[i][j] for i in range(rq))
                 for j in range(rfree))
           for eq in tgt_cone.span_equations]
    pre = Cone.from_inequalities(rfree, ineqs, eqs)
    gens = cone_lattice_generators(pre)
    for g in gens:
        v = ambient(g)
        if not member(v):
            return False, {"kind": "gap", "element": v}
    return True, {"generators_checked": len(gens)}


def quasisaturated_upto(h, n_max, budget=None):
    """Exactness of the n-th root construction for each n up to n_max.

    For each n, the pushout of the morphism along multiplication by n
    receives a morphism back to the target; quasisaturation requires it
    to be exact for all n, and this is the bounded spot-check.
    """
    c = h.core()
    rp, rq = c.P.ambient_rank, c.Q.ambient_rank
    saturated_cores = (c.P.is_saturated(budget) and
                       c.Q.is_saturated(budget))
    for n in range(1, n_max + 1):
        scaled = [tuple(n * x for x in row) for row in identity_matrix(rp)]
        po = pushout(c.P, scaled, c.P, c.M, c.Q)
        rows = [tuple(c.M[r]) + tuple(n if i == r else 0 for i in range(rq))
                for r in range(rq)]
        member = _pushout_member_fn(c.P, c.Q, c.M, n) if saturated_cores \
            else None
        ok, cert = _exact_into(po, rows, c.Q, budget, member)
        if not ok:
            return PropertyReport(
                "quasisaturated_upto", False,
                {"n": n, "inner": cert}, f"pushout roots up to {n_max}")
    return PropertyReport("quasisaturated_upto", True, {"n_max": n_max},
                          f"pushout roots up to {n_max}")


# -- infima --------------------------------------------------------------------


def infimum(h, q, budget=None):
    """Greatest lower bound of a target group element along the morphism.

    Requires exactness; the morphism is first localized, making the
    group map injective.  Maximal lower bounds correspond to the minimal
    target elements congruent to q modulo the image lattice, a minimal
    nonnegative solution enumeration; exactness identifies the induced
    order with cone divisibility.
    """
    rep = is_exact(h, budget)
    if not rep.holds:
        raise NotExact("the infimum is defined through the localized "
                       "morphism of an exact morphism")
    loc, _ = localize_morphism(h, budget)
    c = loc.core()
    rq = c.Q.ambient_rank
    q_core = c.to_q(q)
    if c.P.ambient_rank:
        assert not kernel_basis(c.M), "localized exact map must be injective"
    image_rows = row_span_basis(transpose(c.M)) if c.P.ambient_rank else []
    A = transpose([list(g) for g in c.Q.gens]) if c.Q.gens else \
        [[] for _ in range(rq)]
    sols = minimal_solutions_mod_lattice(
        A, [tuple(r) for r in image_rows], q_core, budget)
    ys = []
    k = len(c.Q.gens)
    for s in sols:
        y = tuple(sum(s[j] * c.Q.gens[j][i] for j in range(k))
                  for i in range(rq))
        if y not in ys:
            ys.append(y)
    cone_q = Cone.from_generators(rq, c.Q.gens)
    minimal = [y for y in ys
               if not any(w != y and cone_q.contains(vec_sub(y, w))
                          for w in ys)]
    if not minimal:
        return InfResult("no_lower_bound", localized_source=loc.source)
    rows = [list(r) for r in c.M]
    xs = []
    for y in minimal:
        sol = solve_diophantine(rows, vec_sub(q_core, y))
        assert sol is not None, "congruent class must meet the image"
        xs.append(c.from_p(sol[0]))
    xs = sorted(set(xs))
    if len(xs) == 1:
        return InfResult("max", value=xs[0], localized_source=loc.source)
    return InfResult("no_max", maximal_elements=tuple(xs),
                     localized_source=loc.source)


def pushforward_character(h, q, budget=None):
    """Classify the pushforward of the character q: an invertible twist
    by the minimum, an ideal-like antichain, or zero."""
    r = infimum(h, q, budget)
    if r.kind == "max":
        return PushforwardClass("invertible", value=r.value)
    if r.kind == "no_max":
        return PushforwardClass("ideal_like", antichain=r.maximal_elements)
    return PushforwardClass("zero")
