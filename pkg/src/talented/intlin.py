"""
Exact integer row reduction: echelon forms for lattice membership and a
Smith diagonal for describing cokernels. Matrices are lists of int rows.
"""

from __future__ import annotations


def echelon_rows(rows: list[list[int]]) -> list[list[int]]:
    """
    Row-echelon basis of the integer row span, with positive pivots and
    entries above each pivot reduced into [0, pivot).
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    basis: list[list[int]] = []
    col = 0
    while m and col < ncols:
        live = [r for r in m if r[col] != 0]
        rest = [r for r in m if r[col] == 0]
        if not live:
            col += 1
            continue
        # Euclid on column `col` until one row keeps a nonzero entry.
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            nxt = [pivot]
            for r in live[1:]:
                q = r[col] // pivot[col]
                r = [a - q * b for a, b in zip(r, pivot)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        pivot = live[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis.append(pivot)
        m = rest
        col += 1
    pivots = [next(j for j, a in enumerate(r) if a) for r in basis]
    for i, (r, c) in enumerate(zip(basis, pivots)):
        for k in range(i):
            q = basis[k][c] // r[c]
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], r)]
    return basis


def in_row_span(basis: list[list[int]], vec: list[int]) -> bool:
    """Membership of `vec` in the lattice spanned by an `echelon_rows` basis."""
    v = list(vec)
    for r in basis:
        c = next(j for j, a in enumerate(r) if a)
        if v[c] % r[c]:
            return False
        q = v[c] // r[c]
        if q:
            v = [a - q * b for a, b in zip(v, r)]
    return not any(v)


def smith_diagonal(rows: list[list[int]], ncols: int) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = [list(r) for r in rows]
    if any(len(r) != ncols for r in a):
        raise ValueError(f"every row must have {ncols} entries")
    nrows = len(a)
    diag = []
    t = 0
    while t < min(nrows, ncols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, nrows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, ncols):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                # Pivot must divide the remaining block, else fold a row in.
                bad = next(
                    (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                continue
            nonzero = [(abs(a[i][t]), i, t) for i in range(t, nrows) if a[i][t]]
            nonzero += [(abs(a[t][j]), t, j) for j in range(t, ncols) if a[t][j]]
            _, i, j = min(nonzero)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def cokernel_invariants(rows: list[list[int]], ncols: int) -> tuple[list[int], int]:
    """Torsion coefficients (> 1) and free rank of Z^ncols modulo the row span."""
    diag = smith_diagonal(rows, ncols)
    return [d for d in diag if d > 1], ncols - len(diag)
