"""Matrix Lie algebras gl_n and sp_2n over the rationals.

An algebra carries an explicit rational basis; elements are matrices and all
membership, coordinate and bracket computations are exact.  The symplectic
form is an arbitrary nondegenerate antisymmetric rational Gram matrix J, with
membership condition  Z^T J + J Z = 0.  Unipotent group elements are handled
through the exact polynomial exp/log of nilpotent matrices.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import gcd

from . import linalg as la
from .errors import DomainError


class MatrixLieAlgebra:
    """gl(n) or sp(V, omega) with a fixed rational basis."""

    def __init__(self, kind: str, n: int, omega: la.Mat | None = None):
        if kind not in ("gl", "sp"):
            raise DomainError(f"unsupported algebra kind {kind!r}")
        self.kind = kind
        self.n = n
        self.omega = omega
        if kind == "sp":
            assert omega is not None and len(omega) == n
            if la.transpose(omega) != la.mscale(-1, omega) or la.det(omega) == 0:
                raise DomainError("omega must be antisymmetric and nondegenerate")

    @cached_property
    def basis(self) -> list[la.Mat]:
        n = self.n
        if self.kind == "gl":
            out = []
            for i in range(n):
                for j in range(n):
                    m = [[Fraction(0)] * n for _ in range(n)]
                    m[i][j] = Fraction(1)
                    out.append(la.mat(m))
            return out
        # (Z^T J)_{ij} = sum_k Z_{ki} J_{kj};  (J Z)_{ij} = sum_k J_{ik} Z_{kj}
        rows = []
        for i in range(n):
            for j in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[k * n + i] += self.omega[k][j]
                    row[k * n + j] += self.omega[i][k]
                rows.append(tuple(row))
        return [la.vec_to_mat(v, n, n) for v in la.nullspace(tuple(rows))]

    @cached_property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _basis_columns(self) -> la.Mat:
        return la.mat_vecs_as_columns([la.mat_to_vec(b) for b in self.basis])

    def contains(self, z: la.Mat) -> bool:
        if self.kind == "gl":
            return True
        lhs = la.madd(la.mmul(la.transpose(z), self.omega), la.mmul(self.omega, z))
        return all(x == 0 for row in lhs for x in row)

    def coords(self, z: la.Mat) -> la.Vec:
        sol = la.solve(self._basis_columns, la.mat_to_vec(z))
        if sol is None:
            raise DomainError("matrix does not lie in the algebra")
        return sol

    def from_coords(self, v: la.Vec) -> la.Mat:
        out = [[Fraction(0)] * self.n for _ in range(self.n)]
        for c, b in zip(v, self.basis):
            if c:
                for i in range(self.n):
                    for j in range(self.n):
                        out[i][j] += c * b[i][j]
        return la.mat(out)

    def ad_matrix(self, m: la.Mat) -> la.Mat:
        """Matrix of ad(m) = [m, .] in the chosen basis."""
        cols = [self.coords(la.bracket(m, b)) for b in self.basis]
        return la.mat_vecs_as_columns(cols)

    def group_contains(self, g: la.Mat) -> bool:
        if self.kind == "gl":
            return la.det(g) != 0
        return la.mmul(la.mmul(la.transpose(g), self.omega), g) == self.omega


def gl(n: int) -> MatrixLieAlgebra:
    return MatrixLieAlgebra("gl", n)


def standard_omega(n2: int) -> la.Mat:
    """Antidiagonal symplectic Gram: omega(e_i, e_(n2+1-i)) = 1 for i <= n2/2."""
    assert n2 % 2 == 0
    half = n2 // 2
    m = [[Fraction(0)] * n2 for _ in range(n2)]
    for i in range(half):
        m[i][n2 - 1 - i] = Fraction(1)
        m[n2 - 1 - i][i] = Fraction(-1)
    return la.mat(m)


def sp(n2: int, omega: la.Mat | None = None) -> MatrixLieAlgebra:
    return MatrixLieAlgebra("sp", n2, omega if omega is not None else standard_omega(n2))


# -- nilpotent matrix utilities ------------------------------------------------------
#
# Rank and nilpotency are invariant under scaling, so the hot loops work on
# integer-scaled matrices with plain int arithmetic.


def _to_int_matrix(x: la.Mat) -> tuple[list[list[int]], int]:
    denom = 1
    for row in x:
        for v in row:
            denom = denom * v.denominator // gcd(denom, v.denominator)
    return [[int(v * denom) for v in row] for row in x], denom


def _int_mmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _int_rank(rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows if any(r)]
    n = len(rows)
    if n == 0:
        return 0
    m = len(rows[0])
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


def mat_power(x: la.Mat, k: int) -> la.Mat:
    out = la.eye(len(x))
    for _ in range(k):
        out = la.mmul(out, x)
    return out


def is_nilpotent(x: la.Mat) -> bool:
    ints, _ = _to_int_matrix(x)
    n = len(x)
    power = ints
    for _ in range(n.bit_length()):
        if not any(any(row) for row in power):
            return True
        power = _int_mmul(power, power)
    return not any(any(row) for row in power)


def exp_nilpotent(x: la.Mat) -> la.Mat:
    if not is_nilpotent(x):
        raise DomainError("exp is exact only for nilpotent matrices")
    n = len(x)
    ints, denom = _to_int_matrix(x)
    out = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    term = ints
    fact = 1
    scale = 1
    for k in range(1, n):
        fact *= k
        scale *= denom
        if not any(any(row) for row in term):
            break
        for i in range(n):
            for j in range(n):
                if term[i][j]:
                    out[i][j] += Fraction(term[i][j], fact * scale)
        term = _int_mmul(term, ints)
    return la.mat(out)


def log_unipotent(u: la.Mat) -> la.Mat:
    n = len(u)
    x = la.msub(u, la.eye(n))
    if not is_nilpotent(x):
        raise DomainError("log is exact only for unipotent matrices")
    ints, denom = _to_int_matrix(x)
    out = [[Fraction(0) for _ in range(n)] for _ in range(n)]
    term = ints
    scale = 1
    for k in range(1, n):
        scale *= denom
        if not any(any(row) for row in term):
            break
        sign = (-1) ** (k + 1)
        for i in range(n):
            for j in range(n):
                if term[i][j]:
                    out[i][j] += Fraction(sign * term[i][j], k * scale)
        term = _int_mmul(term, ints)
    return la.mat(out)


def jordan_type(x: la.Mat) -> tuple[int, ...]:
    """Partition of dim V attached to a nilpotent matrix via ranks of powers."""
    n = len(x)
    ints, _ = _to_int_matrix(x)
    ranks = [n]
    power = ints
    for _ in range(n + 1):
        ranks.append(_int_rank(power))
        power = _int_mmul(power, ints)
    if ranks[n] != 0:
        raise DomainError("jordan_type requires a nilpotent matrix")
    parts = []
    for k in range(1, n + 1):
        mult = ranks[k - 1] - 2 * ranks[k] + ranks[k + 1]
        parts.extend([k] * mult)
    parts.sort(reverse=True)
    assert sum(parts) == n
    return tuple(parts)


def jordan_type_unipotent(u: la.Mat) -> tuple[int, ...]:
    return jordan_type(la.msub(u, la.eye(len(u))))


def conjugate(g: la.Mat, x: la.Mat) -> la.Mat:
    g_inv = invert(g)
    return la.mmul(la.mmul(g, x), g_inv)


def invert(g: la.Mat) -> la.Mat:
    n = len(g)
    aug = la.mat([list(g[i]) + list(la.eye(n)[i]) for i in range(n)])
    red, pivots = la.rref(aug)
    if pivots != tuple(range(n)):
        raise DomainError("matrix is singular")
    return la.mat([row[n:] for row in red])


def kernel_of_matrix(x: la.Mat) -> list[la.Vec]:
    """Right kernel of x acting on column vectors."""
    return la.nullspace(x)


def image_of_matrix(x: la.Mat) -> list[la.Vec]:
    """Column space of x, canonicalised."""
    return list(la.row_space_signature(list(la.transpose(x))))


def random_group_element(alg: MatrixLieAlgebra, rng, scale: int = 2) -> la.Mat:
    """Random rational element of GL(n) resp. Sp(V, omega), built from exact
    exponentials of nilpotent algebra elements (keeps entries rational)."""
    n = alg.n
    g = la.eye(n)
    for _ in range(2):
        z = la.zeros(n, n)
        for b in alg.basis:
            if rng.random() < 0.4:
                z = la.madd(z, la.mscale(Fraction(rng.randint(-scale, scale), rng.randint(1, 3)), b))
        # keep only the strictly triangular parts so z is nilpotent
        upper = la.mat([[z[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)])
        lower = la.mat([[z[i][j] if j < i else Fraction(0) for j in range(n)] for i in range(n)])
        for part in (upper, lower):
            if alg.contains(part) and is_nilpotent(part):
                g = la.mmul(g, exp_nilpotent(part))
    assert alg.group_contains(g)
    return g
