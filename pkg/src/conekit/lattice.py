"""Exact integer matrix normal forms and linear diophantine solving.

Matrices are lists of rows of Python ints, vectors are tuples of ints.
Everything is arbitrary precision; nothing here ever touches floats.
"""

from fractions import Fraction


def exgcd(a, b):
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if k else 0
    assert all(len(row) == k for row in A)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def mat_vec(A, x):
    assert all(len(row) == len(x) for row in A)
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_gcd(v):
    g = 0
    for a in v:
        g = exgcd(g, a)[0]
    return g


def primitive(v):
    """Divide a nonzero integer vector by the gcd of its entries."""
    g = vec_gcd(v)
    assert g > 0, "zero vector has no primitive representative"
    return tuple(a // g for a in v)


def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _combine_rows(A, i, j, s, t, u, v):
    # (row_i, row_j) <- (s*row_i + t*row_j, u*row_i + v*row_j); s*v - t*u = +-1
    for k in range(len(A[i])):
        a, b = A[i][k], A[j][k]
        A[i][k] = s * a + t * b
        A[j][k] = u * a + v * b


def hermite_normal_form(A):
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular, U*A == H, H in row echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    H = [list(row) for row in A]
    U = identity_matrix(m)
    pivot_row = 0
    for col in range(n):
        row = None
        for i in range(pivot_row, m):
            if H[i][col] != 0:
                row = i
                break
        if row is None:
            continue
        _swap_rows(H, pivot_row, row)
        _swap_rows(U, pivot_row, row)
        for i in range(pivot_row + 1, m):
            while H[i][col] != 0:
                a, b = H[pivot_row][col], H[i][col]
                g, s, t = exgcd(a, b)
                # replace pivot row with the gcd combination, kill the other
                _combine_rows(H, pivot_row, i, s, t, -(b // g), a // g)
                _combine_rows(U, pivot_row, i, s, t, -(b // g), a // g)
        if H[pivot_row][col] < 0:
            H[pivot_row] = [-x for x in H[pivot_row]]
            U[pivot_row] = [-x for x in U[pivot_row]]
        p = H[pivot_row][col]
        for i in range(pivot_row):
            q = H[i][col] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[pivot_row])]
                U[i] = [x - q * y for x, y in zip(U[i], U[pivot_row])]
        pivot_row += 1
        if pivot_row == m:
            break
    return H, U


def smith_normal_form(M):
    """Smith normal form with transforms.

    Returns (U, D, V) with U, V unimodular, U*M*V == D, D diagonal with
    nonnegative entries satisfying D[i][i] | D[i+1][i+1].
    """
    m = len(M)
    n = len(M[0]) if M else 0
    D = [list(row) for row in M]
    U = identity_matrix(m)
    V = identity_matrix(n)
    if m == 0 or n == 0:
        return U, D, V

    def col_op(i, j, s, t, u, v):
        for r in range(m):
            a, b = D[r][i], D[r][j]
            D[r][i] = s * a + t * b
            D[r][j] = u * a + v * b
        for r in range(n):
            a, b = V[r][i], V[r][j]
            V[r][i] = s * a + t * b
            V[r][j] = u * a + v * b

    def row_op(i, j, s, t, u, v):
        _combine_rows(D, i, j, s, t, u, v)
        _combine_rows(U, i, j, s, t, u, v)

    def eliminate(k):
        """Clear row and column k against a gcd pivot at (k, k)."""
        piv = None
        for i in range(k, m):
            for j in range(k, n):
                if D[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            return False
        i, j = piv
        if i != k:
            row_op(k, i, 0, 1, 1, 0)
        if j != k:
            col_op(k, j, 0, 1, 1, 0)
        while True:
            # each op zeroes its target entry; a plain subtraction leaves the
            # pivot row/column alone, a gcd op strictly shrinks the pivot, so
            # the re-dirtying loop below terminates
            for i in range(k + 1, m):
                b = D[i][k]
                if b == 0:
                    continue
                a = D[k][k]
                if b % a == 0:
                    q = b // a
                    D[i] = [x - q * y for x, y in zip(D[i], D[k])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[k])]
                else:
                    g, s, t = exgcd(a, b)
                    row_op(k, i, s, t, -(b // g), a // g)
            dirty = False
            for j in range(k + 1, n):
                b = D[k][j]
                if b == 0:
                    continue
                a = D[k][k]
                if b % a == 0:
                    q = b // a
                    for r in range(m):
                        D[r][j] -= q * D[r][k]
                    for r in range(n):
                        V[r][j] -= q * V[r][k]
                else:
                    g, s, t = exgcd(a, b)
                    col_op(k, j, s, t, -(b // g), a // g)
                    dirty = True
            if not dirty and all(D[i][k] == 0 for i in range(k + 1, m)):
                break
        if D[k][k] < 0:
            for r in range(m):
                D[r][k] = -D[r][k]
            for r in range(n):
                V[r][k] = -V[r][k]
        return True

    r = 0
    for k in range(min(m, n)):
        if not eliminate(k):
            break
        r += 1

    # enforce the divisibility chain; the pivot at k only ever shrinks
    k = 0
    while k < r - 1:
        bad = None
        for i in range(k + 1, r):
            if D[i][i] % D[k][k] != 0:
                bad = i
                break
        if bad is None:
            k += 1
            continue
        col_op(k, bad, 1, 1, 0, 1)
        eliminate(k)
        for j in range(k + 1, r):
            eliminate(j)
    return U, D, V


def invert_unimodular(V):
    """Invert an integer matrix with determinant +-1."""
    H, U = hermite_normal_form(V)
    n = len(V)
    assert H == identity_matrix(n), "matrix is not unimodular"
    return U


def kernel_basis(A):
    """Basis of the integer kernel {x : A x = 0}, as a list of tuples.

    Each basis vector is sign-normalized so its first nonzero entry is > 0.
    """
    if not A:
        return []
    m, n = len(A), len(A[0])
    U, D, V = smith_normal_form(A)
    basis = []
    for j in range(n):
        d = D[j][j] if j < m and j < n else 0
        if j >= m or d == 0:
            v = tuple(V[i][j] for i in range(n))
            if any(v):
                basis.append(_sign_normalize(v))
    return basis


def _sign_normalize(v):
    for a in v:
        if a != 0:
            return v if a > 0 else tuple(-x for x in v)
    return v


def solve_diophantine(A, b):
    """Solve A x = b over the integers.

    Returns (particular, kernel) where kernel is a basis of the homogeneous
    solution lattice, or None when no integer solution exists.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    assert len(b) == m
    if n == 0:
        return ((), []) if all(x == 0 for x in b) else None
    U, D, V = smith_normal_form(A)
    Ub = mat_vec(U, b)
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if Ub[i] != 0:
                return None
        else:
            if Ub[i] % d != 0:
                return None
            y[i] = Ub[i] // d
    particular = mat_vec(V, tuple(y))
    return particular, kernel_basis(A)


def row_span_basis(rows):
    """Canonical basis (HNF rows) of the subgroup generated by the rows."""
    if not rows:
        return []
    H, _ = hermite_normal_form([list(r) for r in rows])
    return [tuple(r) for r in H if any(r)]


def member_of_subgroup(rows, v):
    """Is v in the subgroup of Z^n generated by the given rows?"""
    if not rows:
        return all(x == 0 for x in v)
    A = transpose([list(r) for r in rows])
    return solve_diophantine(A, v) is not None


def saturate_subgroup(rows):
    """Basis of the saturation of the subgroup generated by the rows.

    The saturation of L in Z^n is (L tensor Q) intersect Z^n: all integer
    vectors some positive multiple of which lies in L.
    """
    basis = row_span_basis(rows)
    if not basis:
        return []
    r = len(basis)
    n = len(basis[0])
    B = [list(v) for v in basis]
    U, D, V = smith_normal_form(B)
    # B = U^-1 D V^-1; over Q the row span is that of the first r rows of
    # V^-1, and those rows are integral and unimodularly extendable, so they
    # are a basis of the saturation.
    Vinv = invert_unimodular(V)
    return row_span_basis([tuple(Vinv[i]) for i in range(r)])


def matrix_rank(A):
    """Rank of an integer matrix."""
    return len(row_span_basis(A))


def lattice_complement(sub_rows, n):
    """Unimodular coordinates splitting Z^n as a saturated sublattice plus
    a complement.

    Returns (proj, lift): proj maps x in Z^n to its complement coordinates
    (length n - l), lift maps complement coordinates back to a
    distinguished representative in Z^n.  The sublattice must be
    saturated, so that the splitting exists.
    """
    sub_rows = [list(r) for r in sub_rows]
    l = len(sub_rows)
    if l == 0:
        return (lambda x: tuple(x)), (lambda c: tuple(c))
    U, D, V = smith_normal_form(sub_rows)
    assert all(D[i][i] == 1 for i in range(l)), "sublattice is not saturated"
    W = invert_unimodular(V)  # rows w_1..w_n, first l span the sublattice

    def proj(x):
        return tuple(
            sum(V[r][i] * x[r] for r in range(n)) for i in range(l, n))

    def lift(c):
        return tuple(
            sum(c[i - l] * W[i][r] for i in range(l, n)) for r in range(n))

    return proj, lift


def intersect_subgroups(rows_a, rows_b):
    """Basis of the intersection of two subgroups of Z^n given by rows."""
    A = row_span_basis(rows_a)
    B = row_span_basis(rows_b)
    if not A or not B:
        return []
    n = len(A[0])
    # x = a . A = b . B: solve the concatenated homogeneous system
    M = transpose([list(r) for r in A] + [[-x for x in r] for r in B])
    combined = []
    for v in kernel_basis(M):
        coeffs = v[:len(A)]
        combined.append(tuple(
            sum(coeffs[i] * A[i][j] for i in range(len(A)))
            for j in range(n)))
    return row_span_basis(combined)


def rational_solve(A, b):
    """One exact rational solution of A x = b, or None."""
    m = len(A)
    n = len(A[0]) if A else 0
    aug = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])]
           for i in range(m)]
    R, pivots = rref(aug)
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        if p == n:
            return None
        x[p] = row[n]
    # rows beyond the pivots are zero by construction of rref
    for i in range(m):
        if sum(Fraction(A[i][j]) * x[j] for j in range(n)) != b[i]:
            return None
    return tuple(x)


def rational_coords_primitive(B, v):
    """Integer-primitive coordinate vector c with c . B parallel to v.

    B rows must rationally span v; used to re-express cone rays in the
    coordinates of a finite-index sublattice.
    """
    BT = transpose([list(r) for r in B])
    x = rational_solve(BT, v)
    assert x is not None, "vector outside the rational span"
    den = 1
    for q in x:
        den = den * q.denominator // exgcd(den, q.denominator)[0]
    w = tuple(int(q * den) for q in x)
    return primitive(w) if any(w) else w


# --- exact rational elimination -------------------------------------------

def rref(A):
    """Reduced row echelon form over Q.

    Takes rows of ints or Fractions, returns (rows, pivot_columns) with the
    zero rows dropped.
    """
    M = [[Fraction(x) for x in row] for row in A]
    if not M:
        return [], []
    n = len(M[0])
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, len(M)):
            if M[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [row for row in M[:r]], pivots


def rational_kernel_basis(A):
    """Basis of the rational kernel of an integer/rational matrix, cleared
    to integer vectors."""
    if not A or not A[0]:
        n = len(A[0]) if A else 0
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    R, pivots = rref(A)
    n = len(A[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][f]
        den = 1
        for x in v:
            den = den * x.denominator // exgcd(den, x.denominator)[0]
        w = tuple(int(x * den) for x in v)
        basis.append(_sign_normalize(w))
    return basis
