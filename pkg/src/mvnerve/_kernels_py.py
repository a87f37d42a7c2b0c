"""Pure-Python twin of the compiled kernels in ``_kernels.pyx``."""


def rref_mod_p(a, p):
    """Reduce the 2-D integer array ``a`` in place to RREF mod ``p``.

    Works on numpy arrays or lists of lists; entries must lie in ``[0, p)``.
    Returns the list of pivot columns.
    """
    rows = [list(map(int, row)) for row in a]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        pivot_row = [(x * inv) % p for x in rows[r]]
        rows[r] = pivot_row
        nz = [j for j in range(c, ncols) if pivot_row[j]]
        for i in range(nrows):
            f = rows[i][c]
            if i == r or not f:
                continue
            row = rows[i]
            for j in nz:
                row[j] = (row[j] - f * pivot_row[j]) % p
        pivots.append(c)
        r += 1
    for i, row in enumerate(rows):
        a[i][:] = row
    return pivots
