"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples holding ``int`` or ``fractions.Fraction``
entries. Every routine here is exact; nothing ever touches floating point.
Functions accept any nested sequence and return freshly built tuples, so
results are immutable and safe to share.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Matrix = tuple  # tuple[tuple[int | Fraction, ...], ...]
Vector = tuple


# ---------------------------------------------------------------------------
# construction and basic arithmetic
# ---------------------------------------------------------------------------

def freeze(m) -> Matrix:
    return tuple(tuple(row) for row in m)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def shape(m) -> tuple[int, int]:
    rows = len(m)
    return rows, (len(m[0]) if rows else 0)


def transpose(m) -> Matrix:
    if not m:
        return ()
    return tuple(zip(*m))


def matmul(a, b) -> Matrix:
    """Product ``a @ b``; zero entries of ``a`` are skipped, which matters
    for the sparse Gram and generator matrices used throughout."""
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(cols):
                    y = bk[j]
                    if y:
                        acc[j] += x * y
        out.append(tuple(acc))
    return tuple(out)


def matvec(m, v) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v) if x and y) for row in m)


def vecmat(v, m) -> Vector:
    cols = len(m[0]) if m else 0
    acc = [0] * cols
    for x, row in zip(v, m):
        if x:
            for j in range(cols):
                if row[j]:
                    acc[j] += x * row[j]
    return tuple(acc)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v) if x and y)


def bilinear(g, u, v):
    """``u^T g v``."""
    return dot(u, matvec(g, v))


def gram_of_rows(basis, g) -> Matrix:
    """``basis @ g @ basis^T``."""
    return matmul(matmul(basis, g), transpose(basis))


def scale_matrix(m, c) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in m)


def block_diag(*blocks) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return freeze(out)


def is_symmetric(m) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def is_integral(m) -> bool:
    return all(_is_int(x) for row in m for x in row)


def _is_int(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


def as_int_matrix(m) -> Matrix:
    if not is_integral(m):
        raise ValueError("matrix has non-integral entries")
    return tuple(tuple(int(x) for x in row) for row in m)


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else abs(a or b)


def common_denominator(values) -> int:
    d = 1
    for x in values:
        d = lcm(d, Fraction(x).denominator)
    return d


def clear_denominators(v) -> Vector:
    """Smallest positive integer multiple of a rational vector that is integral."""
    d = common_denominator(v)
    return tuple(int(Fraction(x) * d) for x in v)


def primitive(v) -> Vector:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


# ---------------------------------------------------------------------------
# determinants, rank, rational solving
# ---------------------------------------------------------------------------

def det(m):
    """Determinant. Integer input uses Bareiss elimination and stays integral."""
    n = len(m)
    if n == 0:
        return 1
    if is_integral(m):
        a = [[int(x) for x in row] for row in m]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            akk = a[k][k]
            for i in range(k + 1, n):
                aik = a[i][k]
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            prev = akk
        return sign * a[n - 1][n - 1]
    a = [[Fraction(x) for x in row] for row in m]
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        result *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return result


def _row_reduce(m):
    """Reduced row echelon form over Q; returns (rref rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = shape(a)
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m) -> int:
    if not m:
        return 0
    return len(_row_reduce(m)[1])


def solve_rational(a, b) -> Optional[Vector]:
    """Some rational ``x`` with ``a x = b``, or ``None`` when inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    rows, cols = shape(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = _row_reduce(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return tuple(x)


def inverse(m) -> Matrix:
    n = len(m)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    red, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def rational_row_coordinates(rows, basis) -> Optional[Matrix]:
    """Coefficients ``C`` with ``rows = C @ basis`` over Q, or None."""
    bt = transpose(basis)
    out = []
    for v in rows:
        x = solve_rational(bt, v)
        if x is None:
            return None
        out.append(x)
    return tuple(out)


# ---------------------------------------------------------------------------
# Hermite and Smith normal forms
# ---------------------------------------------------------------------------

def hnf(m) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``. Nonzero rows
    of ``h`` come first, pivots are positive and strictly move right, and the
    entries above each pivot lie in ``[0, pivot)``.
    """
    rows, cols = shape(m)
    h = [[int(x) for x in row] for row in m]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if h[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(h[i][c]), i))
            if p != r:
                h[r], h[p] = h[p], h[r]
                u[r], u[p] = u[p], u[r]
            done = True
            hr, ur, pv = h[r], u[r], h[r][c]
            for i in range(r + 1, rows):
                if h[i][c]:
                    q = h[i][c] // pv
                    h[i] = [x - q * y for x, y in zip(h[i], hr)]
                    u[i] = [x - q * y for x, y in zip(u[i], ur)]
                    if h[i][c]:
                        done = False
            if done:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        pv = h[r][c]
        for i in range(r):
            q = h[i][c] // pv
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return freeze(h), freeze(u)


def hnf_basis(m) -> Matrix:
    """Nonzero rows of the HNF: a canonical basis of the row lattice."""
    h, _ = hnf(m)
    return tuple(row for row in h if any(row))


def snf(m) -> tuple[tuple[int, ...], Matrix, Matrix]:
    """Smith normal form.

    Returns ``(factors, u, v)`` with ``u @ m @ v`` diagonal, the diagonal
    reading ``factors`` followed by zeros, ``factors[i] | factors[i+1]`` and
    all factors positive. ``u`` and ``v`` are unimodular.
    """
    rows, cols = shape(m)
    a = [[int(x) for x in row] for row in m]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, q):
        # column dst -= q * column src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        if i0 != t:
            a[t], a[i0] = a[i0], a[t]
            u[t], u[i0] = u[i0], u[t]
        if j0 != t:
            swap_cols(t, j0)
        while True:
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        clean = False
            if clean:
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                # fold the offending row in so the next pass lowers the pivot
                i = bad[0]
                a[t] = [x + y for x, y in zip(a[t], a[i])]
                u[t] = [x + y for x, y in zip(u[t], u[i])]
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            nz += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, i0, j0 = min(nz)
            if i0 != t:
                a[t], a[i0] = a[i0], a[t]
                u[t], u[i0] = u[i0], u[t]
            if j0 != t:
                swap_cols(t, j0)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    factors = tuple(a[i][i] for i in range(min(rows, cols)) if a[i][i])
    return factors, freeze(u), freeze(v)


# ---------------------------------------------------------------------------
# kernels and integer solving
# ---------------------------------------------------------------------------

def integer_kernel(m) -> Matrix:
    """HNF basis (as rows) of ``{x in Z^cols : m x = 0}``.

    The returned lattice is saturated, since it is read off a unimodular
    transform. Rational matrices are accepted; each row is scaled to be
    integral first, which does not change the kernel.
    """
    rows, cols = shape(m)
    if rows == 0:
        return identity(cols)
    m = tuple(clear_denominators(row) for row in m)
    h, u = hnf(transpose(m))
    kernel = [u[i] for i in range(cols) if not any(h[i])]
    if not kernel:
        return ()
    return hnf_basis(kernel)


def solve_integer(m, b) -> Optional[Vector]:
    """Some integer ``x`` with ``m x = b``, or ``None`` if there is none."""
    rows, cols = shape(m)
    factors, u, v = snf(m)
    ub = matvec(u, b)
    y = [0] * cols
    for i in range(rows):
        if i < len(factors):
            q, r = divmod(ub[i], factors[i])
            if r:
                return None
            y[i] = q
        elif ub[i] != 0:
            return None
    return matvec(v, y)


# ---------------------------------------------------------------------------
# symmetric forms
# ---------------------------------------------------------------------------

def diagonalize_symmetric(g) -> tuple[tuple[Fraction, ...], Matrix]:
    """Rational congruence diagonalization.

    Returns ``(d, p)`` with ``p @ g @ p^T == diag(d)``. When every remaining
    diagonal entry vanishes, a hyperbolic 2x2 pivot ``[[0, b], [b, 0]]`` is
    split off and replaced by the orthogonal pair of norms ``2b`` and ``-2b``.
    """
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(i, j):
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        p[i], p[j] = p[j], p[i]

    def eliminate(target, src, f):
        # row/col target -= f * row/col src
        a[target] = [x - f * y for x, y in zip(a[target], a[src])]
        for row in a:
            row[target] -= f * row[src]
        p[target] = [x - f * y for x, y in zip(p[target], p[src])]

    diag = []
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is not None:
            swap(k, piv)
            for i in range(k + 1, n):
                if a[i][k]:
                    eliminate(i, k, a[i][k] / a[k][k])
            diag.append(a[k][k])
            k += 1
            continue
        off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
        if off is None:
            diag.extend([Fraction(0)] * (n - k))
            break
        swap(k, off[0])
        swap(k + 1, off[1] if off[1] != k else off[0])
        b = a[k][k + 1]
        for i in range(k + 2, n):
            ck, ck1 = a[i][k + 1] / b, a[i][k] / b
            if ck:
                eliminate(i, k, ck)
            if ck1:
                eliminate(i, k + 1, ck1)
        p[k], p[k + 1] = ([x + y for x, y in zip(p[k], p[k + 1])],
                          [x - y for x, y in zip(p[k], p[k + 1])])
        diag.extend([2 * b, -2 * b])
        k += 2
    return tuple(diag), freeze(p)


def signature_of_symmetric(g) -> tuple[int, int, int]:
    """Sylvester signature ``(positive, negative, zero)`` of a symmetric matrix."""
    d, _ = diagonalize_symmetric(g)
    return (sum(1 for x in d if x > 0), sum(1 for x in d if x < 0),
            sum(1 for x in d if x == 0))


def positive_definite(g) -> bool:
    pos, _, _ = signature_of_symmetric(g)
    return pos == len(g)
