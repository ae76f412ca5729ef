"""Small exact linear algebra over `fractions.Fraction`.

Everything in this package that needs a kernel, a rank or a linear solve
goes through these routines, so that no floating point ever enters the
math.  Matrices are plain lists of row lists; dimensions stay in the low
hundreds, so naive Gaussian elimination is fine.
"""

from __future__ import annotations

from fractions import Fraction

Row = list[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def rref(rows: list[Row]) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form; returns (new rows, pivot column indices)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = ONE / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def matrix_rank(rows: list[Row]) -> int:
    return len(rref(rows)[0])


def solve(rows: list[Row], rhs: list[Fraction], free_value: Fraction = ZERO) -> list[Fraction] | None:
    """Solve A x = b exactly.

    Returns one solution with every free coordinate set to `free_value`
    (the deterministic tiebreak used by the associator solver), or None
    when the system is inconsistent.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    x = [free_value] * ncols
    pivot_cols = [c for c in pivots if c < ncols]
    for i, c in enumerate(pivot_cols):
        acc = red[i][ncols]
        for j in range(c + 1, ncols):
            if j not in pivots and red[i][j] != 0:
                acc -= red[i][j] * free_value
        x[c] = acc
    return x


def kernel_basis(rows: list[Row], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column."""
    red, pivots = rref(rows)
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free_cols:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


def span_contains(span_rows: list[Row], vec: list[Fraction]) -> bool:
    if all(x == 0 for x in vec):
        return True
    base = matrix_rank(span_rows) if span_rows else 0
    return matrix_rank(span_rows + [vec]) == base


def span_equal(a_rows: list[Row], b_rows: list[Row]) -> bool:
    ra = matrix_rank(a_rows) if a_rows else 0
    rb = matrix_rank(b_rows) if b_rows else 0
    if ra != rb:
        return False
    return matrix_rank(a_rows + b_rows) == ra
