"""Exact linear algebra over the rationals.

Vectors are tuples of Fraction, matrices are tuples of row tuples.  Everything
here is elementary Gaussian elimination with exact pivoting; sizes in this
package stay small (ambient dimensions <= 6, Lie algebra dimensions <= 36), so
clarity wins over asymptotics.  Subspaces are passed around as lists of
spanning vectors and compared through their reduced row echelon form, which is
a canonical signature.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(entries: Iterable) -> Vec:
    return tuple(frac(x) for x in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zeros(n: int, m: int) -> Mat:
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def eye(n: int) -> Mat:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c, u: Vec) -> Vec:
    c = frac(c)
    return tuple(c * a for a in u)


def dot(u: Vec, v: Vec) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0))


def is_zero_vec(u: Vec) -> bool:
    return all(a == 0 for a in u)


def madd(a: Mat, b: Mat) -> Mat:
    return tuple(vadd(x, y) for x, y in zip(a, b, strict=True))


def msub(a: Mat, b: Mat) -> Mat:
    return tuple(vsub(x, y) for x, y in zip(a, b, strict=True))


def mscale(c, a: Mat) -> Mat:
    return tuple(vscale(c, r) for r in a)


def mmul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mvec(a: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in a)


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a)) if a else ()


def bracket(a: Mat, b: Mat) -> Mat:
    return msub(mmul(a, b), mmul(b, a))


def mat_vecs_as_columns(vectors: Sequence[Vec]) -> Mat:
    return transpose(tuple(vectors))


def _int_rows(a: Mat) -> list[list[int]]:
    """Scale each row to coprime integers (sign preserved)."""
    out = []
    for row in a:
        denom = 1
        for x in row:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        ints = [int(x * denom) for x in row]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def rref(a: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns.

    Fraction-free integer Gauss-Jordan with per-row gcd reduction; the final
    normalisation by the pivot is the only division.
    """
    n = len(a)
    m = len(a[0]) if n else 0
    rows = _int_rows(a)
    pivots: list[int] = []
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, n) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow = rows[r]
        pv = prow[c]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                row = rows[i]
                new = [pv * x - f * y for x, y in zip(row, prow)]
                g = 0
                for v in new:
                    g = gcd(g, v)
                if g > 1:
                    new = [v // g for v in new]
                rows[i] = new
        pivots.append(c)
        r += 1
        if r == n:
            break
    out = []
    for i, row in enumerate(rows):
        if i < len(pivots):
            pv = row[pivots[i]]
            out.append(tuple(Fraction(x, pv) for x in row))
        else:
            out.append(tuple(Fraction(x) for x in row))
    return tuple(out), tuple(pivots)


def rank(a: Mat) -> int:
    """Rank via fraction-free forward elimination on integer rows."""
    if not a or not a[0]:
        return 0
    rows = _int_rows(a)
    n, m = len(rows), len(rows[0])
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, n) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow = rows[r]
        pv = prow[c]
        for i in range(r + 1, n):
            if rows[i][c]:
                f = rows[i][c]
                new = [pv * x - f * y for x, y in zip(rows[i], prow)]
                g = 0
                for v in new:
                    g = gcd(g, v)
                if g > 1:
                    new = [v // g for v in new]
                rows[i] = new
        r += 1
        if r == n:
            break
    return r


def det(a: Mat) -> Fraction:
    rows = [list(r) for r in a]
    n = len(rows)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            sign = -sign
        result *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return sign * result


def solve(a: Mat, b: Vec) -> Vec | None:
    """One exact solution of a x = b, or None if inconsistent."""
    n = len(a)
    m = len(a[0]) if n else 0
    aug = mat([list(a[i]) + [b[i]] for i in range(n)])
    red, pivots = rref(aug)
    if m in pivots:
        return None
    x = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        x[c] = red[i][m]
    return tuple(x)


def nullspace(a: Mat) -> list[Vec]:
    """Basis of the right kernel of a."""
    if not a:
        return []
    m = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(tuple(v))
    return basis


def row_space_signature(vectors: Sequence[Vec]) -> Mat:
    """Canonical form of span(vectors): nonzero rows of the RREF."""
    if not vectors:
        return ()
    red, pivots = rref(tuple(vectors))
    return red[: len(pivots)]


def span_dim(vectors: Sequence[Vec]) -> int:
    return len(row_space_signature(vectors))


def span_contains(vectors: Sequence[Vec], v: Vec) -> bool:
    if is_zero_vec(v):
        return True
    base = span_dim(vectors)
    return span_dim(list(vectors) + [v]) == base


def span_subset(inner: Sequence[Vec], outer: Sequence[Vec]) -> bool:
    base = span_dim(outer)
    return span_dim(list(outer) + list(inner)) == base


def span_eq(a: Sequence[Vec], b: Sequence[Vec]) -> bool:
    return row_space_signature(a) == row_space_signature(b)


def span_sum(a: Sequence[Vec], b: Sequence[Vec]) -> list[Vec]:
    return list(row_space_signature(list(a) + list(b)))


def span_intersect(a: Sequence[Vec], b: Sequence[Vec]) -> list[Vec]:
    """Basis of span(a) & span(b), via kernel of the stacked coefficient map."""
    a = list(row_space_signature(a))
    b = list(row_space_signature(b))
    if not a or not b:
        return []
    cols = mat_vecs_as_columns(a + b)
    combos = nullspace(cols)
    out = []
    for cmb in combos:
        v = None
        for coef, basis_vec in zip(cmb[: len(a)], a):
            term = vscale(coef, basis_vec)
            v = term if v is None else vadd(v, term)
        if v is not None and not is_zero_vec(v):
            out.append(v)
    return list(row_space_signature(out))


def orthogonal_complement(vectors: Sequence[Vec], gram: Mat) -> list[Vec]:
    """Basis of {v : <v, w> = 0 for all w in span(vectors)} w.r.t. gram."""
    n = len(gram)
    if not vectors:
        return [tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)]
    rows = tuple(mvec(gram, w) for w in vectors)
    return nullspace(rows)


def project_onto(v: Vec, basis: Sequence[Vec], gram: Mat) -> Vec:
    """Orthogonal projection of v onto span(basis) w.r.t. gram."""
    if not basis:
        return tuple(Fraction(0) for _ in v)
    k = len(basis)
    g = tuple(tuple(dot(mvec(gram, basis[i]), basis[j]) for j in range(k)) for i in range(k))
    rhs = tuple(dot(mvec(gram, b), v) for b in basis)
    coeffs = solve(g, rhs)
    assert coeffs is not None, "projection Gram system must be solvable"
    out = tuple(Fraction(0) for _ in v)
    for c, b in zip(coeffs, basis):
        out = vadd(out, vscale(c, b))
    return out


def gram_det(vectors: Sequence[Vec], gram: Mat) -> Fraction:
    """det of the pairwise inner product matrix; squared parallelepiped volume."""
    k = len(vectors)
    if k == 0:
        return Fraction(1)
    g = tuple(tuple(dot(mvec(gram, vectors[i]), vectors[j]) for j in range(k)) for i in range(k))
    return det(g)


def mat_to_vec(a: Mat) -> Vec:
    """Row-major flattening, used to treat matrices as vectors."""
    return tuple(x for row in a for x in row)


def vec_to_mat(v: Vec, n: int, m: int) -> Mat:
    return tuple(tuple(v[i * m + j] for j in range(m)) for i in range(n))
