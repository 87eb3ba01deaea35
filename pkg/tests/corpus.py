"""Worked morphisms shared across test modules.

Each constructor returns a fresh map. Presentations are pinned
(relation-free where possible, generators spanning the ambient lattice)
so that certificates come out in these exact coordinates.
"""

from conekit.monoid import FineMonoid, free_monoid
from conekit.morphism import MonoidMap


def exact_not_integral_target():
    """The saturated monoid <x, y, z-x, z-y> inside Z^3."""
    return FineMonoid(3, [(1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 1)])


def exact_not_integral_map():
    """N^2 -> <x, y, z-x, z-y>, sending the basis to x and y."""
    return MonoidMap(free_monoid(2), exact_not_integral_target(),
                     [[1, 0], [0, 1], [0, 0]])


def even_slope_monoid():
    """<(2,0), (1,1), (0,2)>: lattice points of the quadrant with even
    coordinate sum."""
    return FineMonoid(2, [(2, 0), (1, 1), (0, 2)])


def even_slope_map():
    return MonoidMap(even_slope_monoid(), free_monoid(2),
                     [[1, 0], [0, 1]])


def even_slope_quotient_map():
    """The same inclusion, with the source presented abstractly on three
    generators subject to a rank-one relation."""
    src = FineMonoid(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
                     relations=[(1, -2, 1)])
    return MonoidMap(src, free_monoid(2), [[2, 1, 0], [0, 1, 2]])


def sum_map():
    """N^2 -> N, (a, b) |-> a + b."""
    return MonoidMap(free_monoid(2), free_monoid(1), [[1, 1]])


def projection_map():
    """N^2 -> N, (a, b) |-> a."""
    return MonoidMap(free_monoid(2), free_monoid(1), [[1, 0]])


def diagonal_map():
    """N -> N^2, a |-> (a, a)."""
    return MonoidMap(free_monoid(1), free_monoid(2), [[1], [1]])


def mult_map(n):
    """N -> N, a |-> n * a."""
    return MonoidMap(free_monoid(1), free_monoid(1), [[n]])


def identity_map(n=2):
    return MonoidMap.identity(free_monoid(n))


def zero_map_into(n=2):
    return MonoidMap(FineMonoid(0, []), free_monoid(n),
                     [[] for _ in range(n)])


def zero_map_from(n=2):
    return MonoidMap(free_monoid(n), FineMonoid(0, []), [])


def named_corpus():
    """(name, map) pairs used by the invariant loops."""
    return [
        ("exact_not_integral", exact_not_integral_map()),
        ("even_slope", even_slope_map()),
        ("even_slope_quotient", even_slope_quotient_map()),
        ("sum", sum_map()),
        ("projection", projection_map()),
        ("diagonal", diagonal_map()),
        ("mult2", mult_map(2)),
        ("mult3", mult_map(3)),
        ("identity", identity_map(2)),
    ]


# --- cells and complexes ----------------------------------------------------

def edge_chart():
    """<gamma, delta - gamma> inside Z^2: functions on an interval of
    length delta."""
    return FineMonoid(2, [(1, 0), (-1, 1)])


def edge_map():
    """N -> edge chart, delta |-> gamma + (delta - gamma)."""
    return MonoidMap(free_monoid(1), edge_chart(), [[0], [1]])


def quadrant_cell():
    from conekit.complexes import po_group
    return po_group(2, ((1, 0), (0, 1)), name="quad")


def _interval_cell(name, a, b):
    from conekit.complexes import dual_chart, po_group
    from conekit.cone import Cone
    cone = Cone.from_generators(2, ((a, 1), (b, 1)))
    return po_group(2, dual_chart(cone), base=free_monoid(1),
                    base_matrix=((0,), (1,)), name=name)


def midpoint_cells():
    """The interval 0 <= gamma <= 2*delta0 split at gamma = delta0."""
    return (_interval_cell("interval", 0, 2),
            [_interval_cell("lo", 0, 1), _interval_cell("hi", 1, 2)])


def square_interval_cells():
    """The cone over a unit square, fibered over an interval, split by
    both diagonals through the center ray."""
    from conekit.complexes import dual_chart, po_group
    from conekit.cone import Cone
    base = edge_chart()
    bm = ((1, 0), (0, 0), (0, 1))
    def cell(name, *rays):
        cone = Cone.from_generators(3, rays)
        return po_group(3, dual_chart(cone), base=base, base_matrix=bm,
                        name=name)
    c = (1, 1, 2)
    sigma = cell("square", (0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1))
    pieces = [cell("south", (0, 0, 1), (1, 0, 1), c),
              cell("east", (1, 0, 1), (1, 1, 1), c),
              cell("north", (1, 1, 1), (0, 1, 1), c),
              cell("west", (0, 1, 1), (0, 0, 1), c)]
    return sigma, pieces


def loop_complex():
    """One edge with both endpoints glued to a single vertex."""
    from conekit.complexes import Complex, FaceMap, po_group
    edge = po_group(2, ((1, 0), (-1, 1)), base=free_monoid(1),
                    base_matrix=((0,), (1,)), name="edge")
    vertex = po_group(1, ((1,),), base=free_monoid(1),
                      base_matrix=((1,),), name="vertex")
    return Complex.build(
        [edge, vertex],
        [FaceMap(0, 1, ((0, 1),), killed=((1, 0),)),
         FaceMap(0, 1, ((1, 1),), killed=((-1, 1),))])
