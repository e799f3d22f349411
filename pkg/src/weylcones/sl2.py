"""sl2-triples through nilpotent elements and the associated graded data.

Given a nilpotent X in gl_n or sp_2n, a triple (X, H, Y) with

    [H, X] = 2X,   [H, Y] = -2Y,   [X, Y] = H

is found by exact linear algebra: first solve [[X, W], X] = 2X for W inside
the algebra and set H = [X, W] (any such H, being in the image of ad X, is
the neutral element of a triple); then solve [X, Y0] = H and keep the
eigencomponent of Y0 of ad H-eigenvalue -2.  The randomisable kernel choice
in the first solve produces genuinely different triples whose graded
subalgebras must nevertheless coincide.

The grading g_k (ad H-eigenspaces) determines the filtration subalgebras

    q = sum_(k>=0) g_k,  u = sum_(k>0),  u' = sum_(k>1),  u'' = sum_(k>2),

and the canonical flag of V: the distinct proper nonzero subspaces V_(>=k)
spanned by H-eigenvectors of eigenvalue >= k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .errors import DomainError
from .liealg import (
    MatrixLieAlgebra,
    is_nilpotent,
    jordan_type,
    mat_power,
)

Subspace = tuple[la.Vec, ...]


@dataclass
class Sl2Triple:
    x: la.Mat
    h: la.Mat
    y: la.Mat

    def verify(self) -> bool:
        two_x = la.mscale(2, self.x)
        minus_two_y = la.mscale(-2, self.y)
        return (
            la.bracket(self.h, self.x) == two_x
            and la.bracket(self.h, self.y) == minus_two_y
            and la.bracket(self.x, self.y) == self.h
        )


def jm_triple(x: la.Mat, alg: MatrixLieAlgebra, rng: random.Random | None = None) -> Sl2Triple:
    """Jacobson-Morozov triple through the nilpotent x, inside the algebra."""
    if not is_nilpotent(x):
        raise DomainError("jm_triple requires a nilpotent element")
    if not alg.contains(x):
        raise DomainError("element does not lie in the algebra")
    d = alg.dim
    # solve [[x, W], x] = 2x for W in the algebra
    cols = []
    for b in alg.basis:
        img = la.bracket(la.bracket(x, b), x)
        cols.append(la.mat_to_vec(img))
    system = la.mat_vecs_as_columns(cols)
    rhs = la.mat_to_vec(la.mscale(2, x))
    w_coords = la.solve(system, rhs)
    assert w_coords is not None, "the Jacobson-Morozov system must be solvable"
    if rng is not None:
        for k in la.nullspace(system):
            w_coords = la.vadd(
                w_coords, la.vscale(Fraction(rng.randint(-3, 3), rng.randint(1, 2)), k)
            )
    w = alg.from_coords(w_coords)
    h = la.bracket(x, w)

    # solve [x, Y0] = h, then project onto the ad-H eigenvalue -2 component
    cols = [la.mat_to_vec(la.bracket(x, b)) for b in alg.basis]
    system = la.mat_vecs_as_columns(cols)
    y0_coords = la.solve(system, la.mat_to_vec(h))
    assert y0_coords is not None
    ad_h = alg.ad_matrix(h)
    y_coords = _eigencomponent(ad_h, y0_coords, Fraction(-2))
    y = alg.from_coords(y_coords)
    triple = Sl2Triple(x, h, y)
    assert triple.verify(), "bracket relations must hold exactly"
    return triple


def _eigencomponent(op: la.Mat, v: la.Vec, eigenvalue: Fraction) -> la.Vec:
    """Component of v in the eigenspace, along the other generalized eigenspaces."""
    d = len(op)
    eigs = integer_eigenvalues(op)
    assert eigenvalue in eigs
    # annihilate all other eigenvalues: apply prod (op - mu) / (eigenvalue - mu)
    out = v
    for mu in eigs:
        if mu == eigenvalue:
            continue
        shifted = la.msub(op, la.mscale(mu, la.eye(d)))
        out = la.vscale(Fraction(1, 1) / (eigenvalue - mu), la.mvec(shifted, out))
    return out


def integer_eigenvalues(op: la.Mat) -> list[Fraction]:
    """All integer eigenvalues of a rational matrix known to be semisimple
    with integer spectrum (ad H for a triple); found by kernel ranks."""
    d = len(op)
    eigs = []
    total = 0
    bound = d + 2
    for k in range(-bound, bound + 1):
        shifted = la.msub(op, la.mscale(k, la.eye(d)))
        mult = d - la.rank(shifted)
        if mult:
            eigs.append(Fraction(k))
            total += mult
    assert total == d, "operator must be semisimple with integer eigenvalues"
    return eigs


@dataclass
class CanonicalData:
    """Grading and filtration data attached to one nilpotent element."""

    alg: MatrixLieAlgebra
    x: la.Mat
    triple: Sl2Triple
    partition: tuple[int, ...]
    graded: dict[int, list[la.Vec]]          # algebra coordinates of g_k
    flag: list[Subspace]                     # canonical flag of V, ascending

    def graded_span(self, lo: int, hi: int | None = None) -> list[la.Vec]:
        """Algebra coordinates spanning sum of g_k for lo <= k (< hi)."""
        vecs = []
        for k, basis in self.graded.items():
            if k >= lo and (hi is None or k < hi):
                vecs.extend(basis)
        return list(la.row_space_signature(vecs))

    @property
    def q_basis(self):
        return self.graded_span(0)

    @property
    def u_basis(self):
        return self.graded_span(1)

    @property
    def u1_basis(self):
        return self.graded_span(2)

    @property
    def u2_basis(self):
        return self.graded_span(3)

    @property
    def levi_basis(self):
        return list(la.row_space_signature(self.graded.get(0, [])))

    def matrices(self, coords_list) -> list[la.Mat]:
        return [self.alg.from_coords(v) for v in coords_list]

    def dims(self) -> dict:
        return {
            "q": len(self.q_basis),
            "u": len(self.u_basis),
            "u_prime": len(self.u1_basis),
            "u_second": len(self.u2_basis),
            "levi": len(self.levi_basis),
            "graded": {k: len(v) for k, v in sorted(self.graded.items())},
        }


def canonical_data(x: la.Mat, alg: MatrixLieAlgebra, rng: random.Random | None = None) -> CanonicalData:
    """Grading, filtration subalgebras, and the canonical flag of x."""
    triple = jm_triple(x, alg, rng)
    ad_h = alg.ad_matrix(triple.h)
    d = alg.dim
    graded: dict[int, list[la.Vec]] = {}
    total = 0
    for k in range(-2 * alg.n, 2 * alg.n + 1):
        shifted = la.msub(ad_h, la.mscale(k, la.eye(d)))
        kern = la.nullspace(shifted)
        if kern:
            graded[k] = kern
            total += len(kern)
    assert total == d, "ad H must be semisimple with integer eigenvalues"
    assert la.span_contains(graded.get(2, []), alg.coords(x)), "x must lie in g_2"

    # canonical flag: V_(>=k) for descending k, deduplicated, proper and nonzero
    n = alg.n
    eigen_v: dict[int, list[la.Vec]] = {}
    seen = 0
    for k in range(-n, n + 1):
        shifted = la.msub(triple.h, la.mscale(k, la.eye(n)))
        kern = la.nullspace(shifted)
        if kern:
            eigen_v[k] = kern
            seen += len(kern)
    assert seen == n, "H must act semisimply with integer eigenvalues on V"
    flag: list[Subspace] = []
    acc: list[la.Vec] = []
    for k in sorted(eigen_v, reverse=True):
        acc = la.span_sum(acc, eigen_v[k])
        if 0 < len(acc) < n:
            sig = la.row_space_signature(acc)
            if not flag or flag[-1] != sig:
                flag.append(sig)
    data = CanonicalData(alg, x, triple, jordan_type(x), graded, flag)
    _verify_canonical(data)
    return data


def _verify_canonical(data: CanonicalData):
    alg = data.alg
    u = data.matrices(data.u_basis)
    u1_span = data.u1_basis
    u2_span = data.u2_basis
    for i, a in enumerate(u):
        for b in u[i:]:
            br = alg.coords(la.bracket(a, b))
            assert la.span_contains(u1_span, br), "[u, u] must lie in u'"
    for a in u:
        for bv in u1_span:
            br = alg.coords(la.bracket(a, alg.from_coords(bv)))
            assert la.span_contains(u2_span, br), "[u, u'] must lie in u''"
    if alg.kind == "sp":
        r = len(data.flag)
        for i, sub in enumerate(data.flag):
            perp = symplectic_perp(sub, alg.omega)
            assert la.span_eq(perp, data.flag[r - 1 - i]), "flag must be self-dual"


def symplectic_perp(subspace, omega: la.Mat):
    rows = tuple(la.mvec(omega, v) for v in subspace)
    return la.row_space_signature(la.nullspace(rows)) if rows else la.row_space_signature(la.eye(len(omega)))


def alternative_triple(x: la.Mat, alg: MatrixLieAlgebra, seed: int = 1) -> Sl2Triple:
    """A second valid triple through x, from a randomised kernel choice."""
    rng = random.Random(seed)
    for _ in range(50):
        t = jm_triple(x, alg, rng)
        if t.h != jm_triple(x, alg).h:
            return t
    return jm_triple(x, alg, rng)


# -- kernel/image flag formulas for the catalog cases ----------------------------------


def _ker(x, k):
    return la.row_space_signature(la.nullspace(mat_power(x, k)))


def _im(x, k):
    return la.row_space_signature(list(la.transpose(mat_power(x, k))))


def flag_by_formulas(x: la.Mat, partition: tuple[int, ...]) -> list[Subspace]:
    """The canonical flag expressed through kernels and images of powers.

    Catalog cases:
      gl_3 [2,1]:  V- = Im X,                 V+ = Ker X
      sp_4 [2,2]:  V0 = Ker X = Im X
      gl_4 [3,1]:  V- = Ker X & Im X = Im X^2, V+ = Ker X + Im X = Ker X^2
      sp_6 [4,2]:  V- = Ker X & Im X^2 = Im X^3,
                   V0 = Ker X^2 & Im X = Ker X + Im X^2,
                   V+ = Ker X^3 = Ker X^2 + Im X
    """
    if partition == (2, 1):
        return [_im(x, 1), _ker(x, 1)]
    if partition == (2, 2):
        return [_ker(x, 1)]
    if partition == (3, 1):
        lower = la.row_space_signature(la.span_intersect(_ker(x, 1), _im(x, 1)))
        upper = la.row_space_signature(la.span_sum(_ker(x, 1), _im(x, 1)))
        return [lower, upper]
    if partition == (4, 2):
        lower = la.row_space_signature(la.span_intersect(_ker(x, 1), _im(x, 2)))
        mid = la.row_space_signature(la.span_intersect(_ker(x, 2), _im(x, 1)))
        return [lower, mid, _ker(x, 3)]
    raise DomainError(f"no kernel-image flag formulas for partition {partition}")


def flag_formula_check(x: la.Mat, alg: MatrixLieAlgebra) -> dict:
    """Compare the grading flag with the kernel-image expressions, exactly.

    Also verifies the redundant alternative expressions for each subspace.
    """
    data = canonical_data(x, alg)
    expected = flag_by_formulas(x, data.partition)
    agree = len(expected) == len(data.flag) and all(
        la.span_eq(a, b) for a, b in zip(expected, data.flag)
    )
    extra = True
    if data.partition == (3, 1):
        extra = la.span_eq(expected[0], _im(x, 2)) and la.span_eq(expected[1], _ker(x, 2))
    elif data.partition == (4, 2):
        extra = (
            la.span_eq(expected[0], _im(x, 3))
            and la.span_eq(expected[1], la.span_sum(_ker(x, 1), _im(x, 2)))
            and la.span_eq(expected[2], la.span_sum(_ker(x, 2), _im(x, 1)))
        )
    return {"flag_matches": agree, "alternative_expressions": extra, "partition": data.partition}
