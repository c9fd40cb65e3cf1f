"""
Exact Gaussian elimination over any field whose elements support
+, -, *, / and truth testing (K elements, rational functions, Fractions).
"""

__all__ = ["row_echelon", "rank", "solve", "nullspace"]


def row_echelon(rows):
    """Reduced row echelon form.  Returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c] if not hasattr(rows[r][c], "inverse") else rows[r][c].inverse()
        rows[r] = [v * inv if v else v for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows):
    return len(row_echelon(rows)[1])


def solve(matrix, rhs):
    """One solution x of matrix * x = rhs, or None if inconsistent.

    Free variables are set to zero.
    """
    if not matrix:
        return []
    ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    ech, pivots = row_echelon(aug)
    if pivots and pivots[-1] == ncols:
        return None
    zero = rhs[0] - rhs[0] if rhs else None
    if zero is None:
        zero = matrix[0][0] - matrix[0][0]
    x = [zero] * ncols
    for row, c in zip(ech, pivots):
        x[c] = row[ncols]
    return x


def nullspace(matrix, ncols=None):
    """Basis of the right kernel of ``matrix``."""
    if not matrix:
        raise ValueError("nullspace of an empty matrix needs explicit columns")
    ncols = ncols or len(matrix[0])
    ech, pivots = row_echelon(matrix)
    sample = matrix[0][0]
    zero = sample - sample
    one = zero + 1
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [zero] * ncols
        v[free] = one
        for row, c in zip(ech, pivots):
            v[c] = -row[free]
        basis.append(v)
    return basis
