"""Dense exact linear algebra over the rationals (Gaussian elimination)."""

from __future__ import annotations

from fractions import Fraction

from .errors import RecognitionError


def solve_overdetermined(rows, rhs, labels=None):
    """Solve ``rows @ x = rhs`` exactly, requiring full column rank and
    global consistency.

    ``rows`` is a list of coefficient lists (all the same length), ``rhs`` the
    right-hand sides.  Every equation is checked; an inconsistent equation
    raises :class:`RecognitionError` whose witness is the label (or index) of
    the first failing row.  Returns the unique solution as a list.
    """
    m = len(rows)
    if m != len(rhs):
        raise ValueError("row/rhs length mismatch")
    ncols = len(rows[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    order = list(range(m))
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, m):
            if aug[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        order[r], order[pivot] = order[pivot], order[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == ncols:
            # keep reducing the remaining rows against the pivots found so far
            for i in range(r, m):
                for pr, pc in enumerate(pivots):
                    if aug[i][pc]:
                        f = aug[i][pc]
                        aug[i] = [x - f * y for x, y in zip(aug[i], aug[pr])]
            break
    if len(pivots) < ncols:
        raise RecognitionError(
            f"system is underdetermined: rank {len(pivots)} < {ncols} unknowns"
        )
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][ncols]
    # consistency of every non-pivot row (the surplus certificate)
    for i in range(len(pivots), m):
        if any(aug[i][:ncols]) or aug[i][ncols]:
            idx = order[i]
            witness = labels[idx] if labels is not None else idx
            raise RecognitionError(
                f"inconsistent overdetermined system at row {witness}", witness=witness
            )
    return x


def kernel_basis(rows, ncols):
    """Basis of the right kernel of the matrix given by ``rows``."""
    m = len(rows)
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots = {}
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, m):
            if mat[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(m):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for pc, pr in pivots.items():
            vec[pc] = -mat[pr][fc]
        basis.append(vec)
    return basis
