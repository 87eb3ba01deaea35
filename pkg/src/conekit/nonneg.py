"""Complete search for nonnegative integer solutions of linear systems.

The solver is a breadth-first frontier search over N^k in the style of
Contejean and Devie: a node x is extended by a unit vector e_i only when
<A x, A e_i> < 0, which preserves completeness while forcing progress
toward the solution set, and Dickson's lemma plus domination pruning make
the search terminate.  It decides feasibility of A x = b with x >= 0 and
enumerates the finitely many componentwise-minimal solutions.

All enumeration is guarded by a node budget so callers can bound runtime;
exhausting the budget raises BudgetExceeded rather than returning a wrong
answer.
"""

import os

from .errors import BudgetExceeded

DEFAULT_BUDGET = 400_000


def _default_budget():
    value = os.environ.get("CONEKIT_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


def _dominates(x, y):
    return all(a >= b for a, b in zip(x, y))


def minimal_filter(vectors):
    """Componentwise-minimal elements, deduplicated, in stable order."""
    out = []
    for v in sorted(set(vectors), key=lambda t: (sum(t), t)):
        if not any(_dominates(v, w) for w in out):
            out.append(v)
    return out


def _cd_search(cols, budget, collect, stop=None):
    """Core frontier search for sum_i x_i * cols[i] = 0, x in N^k nonzero.

    collect(x) is called on every solution found; stop(x), when given,
    short-circuits the search with x as the return value.
    """
    k = len(cols)
    if k == 0:
        return None
    m = len(cols[0])

    def val_of(x):
        return tuple(
            sum(x[i] * cols[i][r] for i in range(k)) for r in range(m))

    solutions = []
    frontier = {}
    zero = (0,) * m
    for i in range(k):
        x = tuple(1 if j == i else 0 for j in range(k))
        frontier[x] = tuple(cols[i])
    spent = 0
    while frontier:
        next_frontier = {}
        for x, val in frontier.items():
            if val == zero:
                solutions.append(x)
                collect(x)
                if stop is not None and stop(x):
                    return x
                continue
            for i in range(k):
                if sum(v * c for v, c in zip(val, cols[i])) >= 0:
                    continue
                y = tuple(
                    a + (1 if j == i else 0) for j, a in enumerate(x))
                if y in next_frontier or y in frontier:
                    continue
                if any(_dominates(y, s) for s in solutions):
                    continue
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(
                        "nonnegative solver exceeded its node budget "
                        f"({budget})", nodes=spent)
                next_frontier[y] = tuple(
                    v + c for v, c in zip(val, cols[i]))
        frontier = next_frontier
    return None


def _homogenize(A, b):
    """Columns of [A | -b] as tuples."""
    m = len(A)
    k = len(A[0]) if A else 0
    cols = [tuple(A[r][i] for r in range(m)) for i in range(k)]
    cols.append(tuple(-x for x in b))
    return cols, k


def minimal_nonneg_solutions(A, b=None, budget=None):
    """Componentwise-minimal x in N^k with A x = b.

    With b omitted, returns the minimal *nonzero* solutions of the
    homogeneous system, i.e. the Hilbert basis of ker(A) cap N^k.  An
    explicit zero b is the inhomogeneous problem, whose unique minimal
    solution is the origin.
    """
    budget = _default_budget() if budget is None else budget
    m = len(A)
    k = len(A[0]) if A else 0
    found = []
    if b is None:
        cols = [tuple(A[r][i] for r in range(m)) for i in range(k)]
        _cd_search(cols, budget, found.append)
        return minimal_filter(found)
    if all(x == 0 for x in b):
        return [(0,) * k]
    cols, k = _homogenize(A, b)
    _cd_search(cols, budget, found.append)
    sols = [x[:k] for x in found if x[k] == 1]
    return minimal_filter(sols)


def has_nonneg_solution(A, b, budget=None):
    """Is A x = b solvable with x a vector of nonnegative integers?"""
    budget = _default_budget() if budget is None else budget
    if all(x == 0 for x in b):
        return True
    cols, k = _homogenize(A, b)
    hit = _cd_search(
        cols, budget, lambda x: None, stop=lambda x: x[k] == 1)
    return hit is not None


def _with_free_columns(A, free_cols):
    """Append each free column and its negative; returns (matrix, k)."""
    m = len(A)
    k = len(A[0]) if A else 0
    rows = [list(r) for r in A] if A else [[] for _ in range(m)]
    for col in free_cols:
        for r in range(m):
            rows[r].append(col[r])
    for col in free_cols:
        for r in range(m):
            rows[r].append(-col[r])
    return rows, k


def feasible_mod_lattice(A, free_cols, b, budget=None):
    """Is A x = b solvable with x >= 0, modulo the span of free_cols?

    free_cols is a list of integer column vectors whose coefficients are
    unrestricted in sign.
    """
    if not free_cols:
        return has_nonneg_solution(A, b, budget)
    rows, _ = _with_free_columns(A, free_cols)
    return has_nonneg_solution(rows, b, budget)


def minimal_solutions_mod_lattice(A, free_cols, b, budget=None):
    """Componentwise-minimal x >= 0 with A x = b modulo span(free_cols).

    Minimality refers to the x part only; the projection of the minimal
    solutions of the sign-split system is minimal-filtered, which yields
    exactly the minimal elements of the projection.
    """
    if not free_cols:
        return minimal_nonneg_solutions(A, b, budget)
    rows, k = _with_free_columns(A, free_cols)
    sols = minimal_nonneg_solutions(rows, b, budget)
    return minimal_filter([x[:k] for x in sols])
