"""Exact linear algebra over the rationals.

Matrices are lists of lists of ints or Fractions.  Everything here is
plain Gaussian elimination with exact arithmetic; the matrices in this
package are small (at most a few hundred rows), so clarity wins over
asymptotics.
"""

from __future__ import annotations

from fractions import Fraction


def _echelon(rows, ncols):
    """Reduce rows in place to row echelon form, returning pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        # find a pivot in column c at or below row r
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, len(rows)):
            if rows[i][c] != 0:
                factor = Fraction(rows[i][c], 1) / pv
                row_i = rows[i]
                row_r = rows[r]
                for j in range(c, ncols):
                    row_i[j] = row_i[j] - factor * row_r[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(matrix):
    """Rank of a matrix (list of rows) over the rationals."""
    if not matrix:
        return 0
    ncols = len(matrix[0])
    rows = [list(row) for row in matrix]
    return len(_echelon(rows, ncols))


def nullspace(matrix, ncols=None):
    """Basis of the right kernel, as a list of length-ncols vectors.

    `ncols` must be given when `matrix` has no rows.
    """
    if not matrix:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[Fraction(1) if j == i else Fraction(0) for j in range(ncols)]
                for i in range(ncols)]
    ncols = len(matrix[0])
    rows = [[Fraction(x) for x in row] for row in matrix]
    pivots = _echelon(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        # back-substitute over pivot rows, bottom up
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            s = sum(rows[r][j] * vec[j] for j in range(pc + 1, ncols))
            vec[pc] = -s / rows[r][pc]
        basis.append(vec)
    return basis


def rank_of_stack(*blocks):
    """Rank of the matrix whose columns are the concatenated column lists.

    Each block is a list of column vectors (all the same length).  Handy
    for span computations: rank_of_stack(A) and rank_of_stack(A, B)
    """
    cols = []
    for block in blocks:
        cols.extend(block)
    if not cols:
        return 0
    # transpose: elimination works on rows
    return rank([list(col) for col in cols])


def span_dimension_mod(vectors, relations):
    """Dimension of span(vectors) inside V / span(relations).

    Both arguments are lists of coordinate vectors of equal length.
    """
    base = rank_of_stack(relations)
    return rank_of_stack(vectors, relations) - base


def solve_square(matrix, rhs_columns):
    """Solve M X = B for an invertible square M; returns X's columns.

    `rhs_columns` is a list of right-hand-side column vectors.
    Raises ValueError if M is singular.
    """
    n = len(matrix)
    k = len(rhs_columns)
    aug = [[Fraction(matrix[i][j]) for j in range(n)] +
           [Fraction(col[i]) for col in rhs_columns] for i in range(n)]
    pivots = _echelon(aug, n + k)
    if len(pivots) < n or pivots != list(range(n)):
        raise ValueError("matrix is singular")
    # back substitution
    solutions = [[Fraction(0)] * n for _ in range(k)]
    for r in range(n - 1, -1, -1):
        for c in range(k):
            s = sum(aug[r][j] * solutions[c][j] for j in range(r + 1, n))
            solutions[c][r] = (aug[r][n + c] - s) / aug[r][r]
    return solutions


def feasible_nonneg(matrix, rhs, ncols=None):
    """A nonnegative solution x of A x = b, or None when none exists.

    Phase-one simplex with Bland's rule throughout, so it terminates on
    every input and, being exact, never misjudges feasibility by
    rounding.  `ncols` is only needed when the system has no rows.
    """
    if not matrix:
        if ncols is None:
            raise ValueError("ncols required for an empty system")
        return [Fraction(0)] * ncols
    n = len(matrix[0])
    m = len(matrix)
    # tableau columns: the n unknowns, m artificials, right-hand side
    tab = []
    basis = []
    for i in range(m):
        row = [Fraction(x) for x in matrix[i]]
        b = Fraction(rhs[i])
        if b < 0:
            row = [-x for x in row]
            b = -b
        row.extend(Fraction(1) if j == i else Fraction(0) for j in range(m))
        row.append(b)
        tab.append(row)
        basis.append(n + i)
    # reduced-cost row for minimizing the artificial sum; the last entry
    # tracks the negated objective value
    obj = [Fraction(0)] * (n + m + 1)
    for row in tab:
        for j, v in enumerate(row):
            obj[j] -= v
    for i in range(m):
        obj[n + i] = Fraction(0)
    while True:
        enter = None
        for j in range(n + m):
            if obj[j] < 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if (best is None or ratio < best
                        or (ratio == best and basis[i] < basis[leave])):
                    best = ratio
                    leave = i
        assert leave is not None, "phase-one objective is bounded below"
        pv = tab[leave][enter]
        tab[leave] = [x / pv for x in tab[leave]]
        pivot_row = tab[leave]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], pivot_row)]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [a - f * b for a, b in zip(obj, pivot_row)]
        basis[leave] = enter
    if obj[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
        else:
            assert tab[i][-1] == 0, "artificial stuck at a nonzero value"
    return x


def rank_gf2(matrix):
    """Rank over GF(2) of an integer matrix given as a list of rows."""
    if not matrix:
        return 0
    ncols = len(matrix[0])
    rows = []
    for row in matrix:
        packed = 0
        for x in row:
            packed = (packed << 1) | (x & 1)
        rows.append(packed)
    rank_ = 0
    for bit in range(ncols):
        mask = 1 << (ncols - 1 - bit)
        pivot = None
        for i in range(rank_, len(rows)):
            if rows[i] & mask:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank_], rows[pivot] = rows[pivot], rows[rank_]
        for i in range(len(rows)):
            if i != rank_ and rows[i] & mask:
                rows[i] ^= rows[rank_]
        rank_ += 1
    return rank_
