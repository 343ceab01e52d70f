"""Small exact linear algebra helpers over ZZ and QQ.

Matrices are tuples of row tuples.  Nothing here is clever; sizes are tiny.
"""

from fractions import Fraction


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matmul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a):
    return tuple(zip(*a))


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def rank_q(rows):
    """Rank over QQ of a list of integer vectors."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def solve_q(columns, target):
    """Solve sum_j c_j * columns[j] = target over QQ.

    Returns the coefficient list, or None if there is no solution.  The
    columns are assumed linearly independent.
    """
    n = len(target)
    k = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    row = 0
    pivots = []
    for c in range(k):
        piv = next((r for r in range(row, n) if aug[r][c] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][c]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(c)
        row += 1
    for r in range(row, n):
        if aug[r][k] != 0:
            return None
    sol = [Fraction(0)] * k
    for r, c in enumerate(pivots):
        sol[c] = aug[r][k]
    return sol


def smith(a):
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U*a*V = D, U and V unimodular and D diagonal with
    d_1 | d_2 | ... (all diagonal entries non-negative).
    """
    m = [list(r) for r in a]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    u = [list(r) for r in identity(nr)]
    v = [list(r) for r in identity(nc)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):
        m[dst] = [x + f * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for r in m:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    t = 0
    while t < min(nr, nc):
        entries = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if m[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, nr):
                q = m[i][t] // m[t][t]
                if q:
                    add_row(i, t, -q)
                if m[i][t]:
                    swap_rows(t, i)
                    done = False
                    break
            if not done:
                continue
            for j in range(t + 1, nc):
                q = m[t][j] // m[t][t]
                if q:
                    add_col(j, t, -q)
                if m[t][j]:
                    swap_cols(t, j)
                    done = False
                    break
            if not done:
                continue
            # divisibility: pull in any entry the pivot does not divide
            for i in range(t + 1, nr):
                bad = next((j for j in range(t + 1, nc) if m[i][j] % m[t][t]), None)
                if bad is not None:
                    add_row(t, i, 1)
                    done = False
                    break
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (tuple(map(tuple, u)), tuple(map(tuple, m)), tuple(map(tuple, v)))


def integer_kernel(a, ncols):
    """Basis (list of integer vectors) of {x in ZZ^ncols : a x = 0}."""
    if not a:
        return [tuple(r) for r in identity(ncols)]
    _, d, v = smith(a)
    r = sum(1 for i in range(min(len(d), ncols)) if d[i][i] != 0)
    cols = transpose(v)
    return [tuple(cols[j]) for j in range(r, ncols)]
