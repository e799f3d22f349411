"""Prehomogeneous subquotients u'/u'' with their Levi action.

The quotient is canonically the weight-2 graded piece; the Levi g_0 acts by
the bracket.  For the four catalog cases the module builds the basic relative
invariants in adapted coordinates (a single Hom coordinate, discriminants of
the induced symmetric forms, and the composition invariant), verifies
infinitesimal relative invariance exactly, certifies dense orbits by rank,
checks regularity of d(p)/p, and computes modular characters and the split
central torus of generic stabilisers.

The symmetric forms b+-(u, v) = omega(u, X v) on the designated flag
subquotients live here as well; their rational isotropy (discriminant a
nonzero square) distinguishes the split and anisotropic classes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .errors import ConsistencyError, DomainError
from .exppoly import Poly
from .liealg import MatrixLieAlgebra, mat_power
from .sl2 import CanonicalData, canonical_data, flag_by_formulas, symplectic_perp

Subspace = tuple[la.Vec, ...]


def quotient_basis(upper, lower) -> list[la.Vec]:
    """Deterministic representatives of span(upper) modulo span(lower)."""
    reps = []
    current = list(lower)
    for v in upper:
        if not la.span_contains(current, v):
            reps.append(v)
            current.append(v)
    return reps


def quotient_coords(v: la.Vec, reps, lower) -> la.Vec:
    """Coordinates of v + span(lower) in the chosen representatives."""
    cols = la.mat_vecs_as_columns(list(reps) + list(lower))
    sol = la.solve(cols, v)
    if sol is None:
        raise DomainError("vector does not lie in the quotient's ambient space")
    return sol[: len(reps)]


def is_rational_square(q: Fraction) -> bool:
    if q <= 0:
        return False
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    return ra * ra == a and rb * rb == b


# ---------------------------------------------------------------------------------
# the symmetric forms of symplectic representatives


@dataclass
class BForms:
    upper_reps: list[la.Vec]
    lower_reps: list[la.Vec]
    gram_upper: la.Mat           # b+ on the upper subquotient
    gram_lower: la.Mat           # b- on the lower subquotient
    split: bool


def b_forms(x: la.Mat, alg: MatrixLieAlgebra) -> BForms:
    """b+(u, v) = omega(u, X v) = b-(X u, X v) on the designated subquotients.

    sp4 [2,2]: b+ on V/V0,     b- on V0;
    sp6 [4,2]: b+ on V+/V0,    b- on V0/V-.
    """
    if alg.kind != "sp":
        raise DomainError("b forms require a symplectic algebra")
    from .liealg import jordan_type

    partition = jordan_type(x)
    flag = flag_by_formulas(x, partition)
    omega = alg.omega
    n = alg.n
    if partition == (2, 2):
        upper_amb, upper_lower = tuple(la.eye(n)), flag[0]
        lower_amb, lower_lower = flag[0], ()
    elif partition == (4, 2):
        upper_amb, upper_lower = flag[2], flag[1]
        lower_amb, lower_lower = flag[1], flag[0]
    else:
        raise DomainError(f"no designated b forms for partition {partition}")
    u_reps = quotient_basis(upper_amb, upper_lower)
    pair_val = lambda a, b: la.dot(la.mvec(omega, a), la.mvec(x, b))
    # well-definedness: omega(lower ambient shifts, X upper) must vanish
    for s in upper_lower:
        for u in u_reps:
            if pair_val(s, u) != 0 or pair_val(u, s) != 0:
                raise ConsistencyError("b+ is not well defined on the subquotient")
    gram_upper = la.mat([[pair_val(a, b) for b in u_reps] for a in u_reps])
    if gram_upper != la.transpose(gram_upper):
        raise DomainError("b+ must be symmetric; wrong partition?")
    # b- is carried over through the isomorphism induced by X
    l_reps = [la.mvec(x, u) for u in u_reps]
    assert la.span_eq(
        la.span_sum(l_reps, lower_lower), la.span_sum(lower_amb, lower_lower)
    ), "X must map the upper subquotient onto the lower one"
    gram_lower = gram_upper
    disc = -la.det(gram_upper)
    if disc == 0:
        raise DomainError("degenerate b form; wrong partition?")
    return BForms(u_reps, l_reps, gram_upper, gram_lower, is_rational_square(disc))


def isotropic_directions(gram: la.Mat) -> tuple[la.Vec, la.Vec]:
    """The two isotropic lines of a split binary symmetric form, exactly."""
    a, b, c = gram[0][0], gram[0][1], gram[1][1]
    if a == 0:
        first = la.vec([1, 0])
        second = la.vec([c, -2 * b]) if b != 0 else None
        if second is None or la.span_eq([first], [second]):
            raise DomainError("form is degenerate or not split")
        return first, second
    disc = b * b - a * c
    if not is_rational_square(disc):
        raise DomainError("form is not split over the rationals")
    num, den = disc.numerator, disc.denominator
    root = Fraction(math.isqrt(num), math.isqrt(den))
    return la.vec([-b + root, a]), la.vec([-b - root, a])


def split_extra_subspaces(x: la.Mat, alg: MatrixLieAlgebra) -> list[Subspace]:
    """U-, U+, W-, W+ for a split symplectic representative.

    U+ is the preimage of an isotropic line of b+ in the upper subquotient;
    U- = X U+ (+ the image of the lower flag member), and U-^perp = U+.
    """
    forms = b_forms(x, alg)
    if not forms.split:
        return []
    from .liealg import jordan_type

    partition = jordan_type(x)
    flag = flag_by_formulas(x, partition)
    base = flag[0] if partition == (2, 2) else flag[1]
    floor = () if partition == (2, 2) else flag[0]
    out = []
    for direction in isotropic_directions(forms.gram_upper):
        lift = tuple(Fraction(0) for _ in range(alg.n))
        for c, rep in zip(direction, forms.upper_reps):
            lift = la.vadd(lift, la.vscale(c, rep))
        plus = la.row_space_signature(list(base) + [lift])
        minus_gens = [la.mvec(x, v) for v in plus]
        minus = la.row_space_signature(list(minus_gens) + list(floor))
        perp = symplectic_perp(plus, alg.omega)
        assert la.span_eq(perp, minus), "X U+ must equal the symplectic perp of U+"
        out.extend([tuple(minus), tuple(plus)])
    return out


# ---------------------------------------------------------------------------------
# the prehomogeneous vector space u'/u''


@dataclass
class PVSpace:
    data: CanonicalData
    basis: list[la.Vec]                  # algebra coordinates of the quotient basis
    action: dict[int, la.Mat]            # Levi basis index -> matrix on the quotient
    levi: list[la.Vec]                   # algebra coordinates of g_0

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coords) -> la.Vec:
        out = tuple(Fraction(0) for _ in range(self.data.alg.dim))
        for c, b in zip(coords, self.basis):
            out = la.vadd(out, la.vscale(c, b))
        return out

    def matrix_of(self, coords) -> la.Mat:
        return self.data.alg.from_coords(self.element(coords))


def build_pv(data: CanonicalData) -> PVSpace:
    """u'/u'' with the bracket action of the Levi g_0, exactly."""
    alg = data.alg
    u1 = data.u1_basis
    u2 = data.u2_basis
    reps = quotient_basis(u1, u2)
    levi = data.levi_basis
    action = {}
    for i, l_coords in enumerate(levi):
        l_mat = alg.from_coords(l_coords)
        cols = []
        for r in reps:
            img = alg.coords(la.bracket(l_mat, alg.from_coords(r)))
            cols.append(quotient_coords(img, reps, u2))
        action[i] = la.mat_vecs_as_columns(cols)
    pv = PVSpace(data, reps, action, levi)
    _verify_representation(pv)
    return pv


def _verify_representation(pv: PVSpace):
    alg = pv.data.alg
    mats = [alg.from_coords(v) for v in pv.levi]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            br = alg.coords(la.bracket(mats[i], mats[j]))
            br_quots = la.mat_vecs_as_columns(
                [
                    quotient_coords(
                        alg.coords(la.bracket(alg.from_coords(br), alg.from_coords(r))),
                        pv.basis,
                        pv.data.u2_basis,
                    )
                    for r in pv.basis
                ]
            )
            commutator = la.msub(
                la.mmul(pv.action[i], pv.action[j]), la.mmul(pv.action[j], pv.action[i])
            )
            if br_quots != commutator:
                raise ConsistencyError("action matrices do not form a representation")


def dense_orbit_check(pv: PVSpace, coords) -> tuple[bool, int]:
    """Is the orbit of xi open? Returns (is_generic, stabiliser dimension).

    The acting algebra is the full nonnegative part q = g_0 + u; the
    positive part acts trivially on the quotient, so the rank condition is
    carried by the Levi.
    """
    coords = la.vec(coords)
    rows = [la.mvec(pv.action[i], coords) for i in pv.action]
    rank = la.span_dim(rows)
    stab_dim = len(pv.levi) - rank + (len(pv.data.u_basis))
    return rank == pv.dim, stab_dim


# ---------------------------------------------------------------------------------
# relative invariants


@dataclass
class RelativeInvariant:
    poly: Poly                     # polynomial on the quotient coordinates
    character: la.Vec              # d(chi) as a covector on the Levi basis
    name: str

    def value(self, coords) -> Fraction:
        return self.poly.eval(coords)


def _infinitesimal_character(pv: PVSpace, poly: Poly) -> la.Vec:
    """Solve (W . p) = dchi(W) p for every Levi basis element, exactly."""
    grads = poly.gradient()
    char = []
    ref_mono, ref_coef = next(iter(sorted(poly.coeffs.items())))
    for i in range(len(pv.levi)):
        a = pv.action[i]
        # (W.p)(xi) = grad p(xi) . (A xi)
        derived = Poly(pv.dim)
        for row in range(pv.dim):
            lin = Poly.linear_form(a[row])
            derived = derived + grads[row] * lin
        if derived.is_zero():
            char.append(Fraction(0))
            continue
        c = derived.coeffs.get(ref_mono, Fraction(0)) / ref_coef
        if derived != poly * c:
            raise ConsistencyError("polynomial is not relatively invariant")
        char.append(c)
    return tuple(char)


def _sym_gram_polys(pv: PVSpace, upper_amb, upper_lower) -> list[list[Poly]]:
    """Entries of the b-form Gram of a variable element, as linear polynomials."""
    alg = pv.data.alg
    omega = alg.omega
    u_reps = quotient_basis(upper_amb, upper_lower)
    k = len(u_reps)
    entries = [[Poly(pv.dim) for _ in range(k)] for _ in range(k)]
    for idx, b in enumerate(pv.basis):
        xi = alg.from_coords(b)
        for i in range(k):
            for j in range(k):
                val = la.dot(la.mvec(omega, u_reps[i]), la.mvec(xi, u_reps[j]))
                if val:
                    entries[i][j] = entries[i][j] + Poly.variable(pv.dim, idx) * val
    return entries


def _hom_polys(pv: PVSpace, src_amb, src_lower, dst_amb, dst_lower) -> list[list[Poly]]:
    """Matrix entries of the induced map src -> dst of a variable element."""
    alg = pv.data.alg
    src = quotient_basis(src_amb, src_lower)
    dst = quotient_basis(dst_amb, dst_lower)
    out = [[Poly(pv.dim) for _ in range(len(src))] for _ in range(len(dst))]
    for idx, b in enumerate(pv.basis):
        xi = alg.from_coords(b)
        for j, s in enumerate(src):
            img = quotient_coords(la.mvec(xi, s), dst, tuple(dst_lower))
            for i, c in enumerate(img):
                if c:
                    out[i][j] = out[i][j] + Poly.variable(pv.dim, idx) * c
    return out


def catalog_invariants(pv: PVSpace) -> list[RelativeInvariant]:
    """The basic relative invariants of the four catalog cases."""
    alg = pv.data.alg
    partition = pv.data.partition
    n = alg.n
    flag = pv.data.flag
    full = tuple(la.eye(n))
    if partition == (2, 1):
        # one-dimensional Hom(V/V+, V-): the single coordinate
        hom = _hom_polys(pv, full, flag[1], flag[0], ())
        polys = [("hom_coordinate", hom[0][0])]
    elif partition == (2, 2):
        g = _sym_gram_polys(pv, full, flag[0])
        disc = g[0][0] * g[1][1] - g[0][1] * g[0][1]
        polys = [("discriminant", disc)]
    elif partition == (3, 1):
        nu1 = _hom_polys(pv, full, flag[1], flag[1], flag[0])
        nu2 = _hom_polys(pv, flag[1], flag[0], flag[0], ())
        comp = Poly(pv.dim)
        for k in range(len(nu1)):
            comp = comp + nu2[0][k] * nu1[k][0]
        polys = [("composition", comp)]
    elif partition == (4, 2):
        g = _sym_gram_polys(pv, flag[2], flag[1])
        disc = g[0][0] * g[1][1] - g[0][1] * g[0][1]
        nu = _hom_polys(pv, full, flag[2], flag[2], flag[1])
        pullback = Poly(pv.dim)
        for i in range(2):
            for j in range(2):
                pullback = pullback + nu[i][0] * nu[j][0] * g[i][j]
        polys = [("discriminant", disc), ("pullback_form", pullback)]
    else:
        raise DomainError(f"no catalog invariants for partition {partition}")
    out = []
    for name, poly in polys:
        if poly.is_zero():
            raise ConsistencyError(f"catalog invariant {name} degenerated to zero")
        out.append(RelativeInvariant(poly, _infinitesimal_character(pv, poly), name))
    return out


def regularity_check(pv: PVSpace, inv: RelativeInvariant, seed: int = 0, attempts: int = 200) -> bool:
    """Rank of the Jacobian of xi -> grad p / p at 5 generic rational points."""
    if inv.poly.is_zero():
        raise DomainError("zero polynomial cannot witness regularity")
    rng = random.Random(seed)
    grads = inv.poly.gradient()
    hessian = [[g.diff(j) for j in range(pv.dim)] for g in grads]
    found = 0
    for _ in range(attempts):
        xi = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(pv.dim))
        generic, _sd = dense_orbit_check(pv, xi)
        p_val = inv.poly.eval(xi)
        if not generic or p_val == 0:
            continue
        grad_vals = [g.eval(xi) for g in grads]
        jac = [
            [
                (hessian[i][j].eval(xi) * p_val - grad_vals[i] * grad_vals[j]) / (p_val * p_val)
                for j in range(pv.dim)
            ]
            for i in range(pv.dim)
        ]
        if la.rank(la.mat(jac)) != pv.dim:
            return False
        found += 1
        if found == 5:
            return True
    raise ConsistencyError("could not find five generic sample points")


# ---------------------------------------------------------------------------------
# modular characters and generic stabiliser tori


def modular_character(data: CanonicalData, lo: int, hi: int | None = None) -> la.Vec:
    """Trace of ad(.) on the graded span [lo, hi), as a covector on the Levi."""
    alg = data.alg
    w_basis = data.graded_span(lo, hi)
    if any(k < 1 for k in data.graded if data.graded[k] and k >= lo and (hi is None or k < hi) and k < 1):
        raise DomainError("the subquotient must lie inside u")
    out = []
    for l_coords in data.levi_basis:
        l_mat = alg.from_coords(l_coords)
        if not w_basis:
            out.append(Fraction(0))
            continue
        cols = []
        for w in w_basis:
            img = alg.coords(la.bracket(l_mat, alg.from_coords(w)))
            sol = la.solve(la.mat_vecs_as_columns(w_basis), img)
            assert sol is not None, "subquotient must be Levi stable"
            cols.append(sol)
        trace = sum((cols[i][i] for i in range(len(cols))), Fraction(0))
        out.append(trace)
    return tuple(out)


def stabiliser_subalgebra(pv: PVSpace, coords) -> list[la.Vec]:
    """Levi coordinates of the stabiliser of xi (kernel of the action map)."""
    coords = la.vec(coords)
    rows = []
    cols = [la.mvec(pv.action[i], coords) for i in pv.action]
    stacked = la.mat_vecs_as_columns(cols)
    return la.nullspace(stacked)


def generic_torus(pv: PVSpace, coords, designated=None) -> dict:
    """Dimension of the split central torus of the generic stabiliser mod A_G.

    Computes the stabiliser s inside the Levi, its centre z, the subspace of
    z acting with rational eigenvalues on every primary component of V, and
    subtracts the central directions of the ambient group.  Reports the
    action on a designated flag subquotient (pair of nested subspaces) when
    one is supplied.
    """
    generic, _sd = dense_orbit_check(pv, coords)
    if not generic:
        raise DomainError("torus computation requires a generic point")
    alg = pv.data.alg
    n = alg.n
    stab = stabiliser_subalgebra(pv, coords)
    stab_mats = []
    for v in stab:
        l_coords = tuple(Fraction(0) for _ in range(alg.dim))
        for c, lb in zip(v, pv.levi):
            l_coords = la.vadd(l_coords, la.vscale(c, lb))
        stab_mats.append(alg.from_coords(l_coords))
    # centre of the stabiliser
    centre = []
    if stab_mats:
        rows = []
        for m in stab_mats:
            for s in stab_mats:
                rows.append(la.mat_to_vec(la.bracket(s, m)))
        # z = {combo of stab_mats commuting with all stab_mats}
        cols = []
        for m in stab_mats:
            col = []
            for s in stab_mats:
                col.extend(la.mat_to_vec(la.bracket(s, m)))
            cols.append(tuple(col))
        kernel = la.nullspace(la.mat_vecs_as_columns(cols))
        for v in kernel:
            z = la.zeros(n, n)
            for c, m in zip(v, stab_mats):
                z = la.madd(z, la.mscale(c, m))
            centre.append(z)
    split_basis = _split_part(centre, n)
    # remove ambient central torus directions (scalars for gl, none for sp)
    if alg.kind == "gl" and split_basis:
        scalars = [la.mat_to_vec(la.eye(n))]
        flat = [la.mat_to_vec(m) for m in split_basis]
        dim = la.span_dim(flat) - la.span_dim(la.span_intersect(flat, scalars))
    else:
        dim = la.span_dim([la.mat_to_vec(m) for m in split_basis])
    report = {"dim": dim}
    if designated is not None and split_basis:
        upper, lower = designated
        reps = quotient_basis(upper, lower)
        mats = []
        for z in split_basis:
            cols = [quotient_coords(la.mvec(z, r), reps, tuple(lower)) for r in reps]
            mats.append(la.mat_vecs_as_columns(cols))
        report["designated_action"] = mats
        report["homothety"] = all(
            m == la.mscale(m[0][0], la.eye(len(m))) for m in mats
        )
    return report


def _split_part(centre: list[la.Mat], n: int) -> list[la.Mat]:
    """Basis of the subspace of a commuting family acting with rational
    semisimple spectrum on V (the Lie algebra of the split torus part)."""
    if not centre:
        return []
    flat = la.row_space_signature([la.mat_to_vec(m) for m in centre])
    centre = [la.vec_to_mat(v, n, n) for v in flat]
    # primary components of a generic member of the commuting family
    generic = la.zeros(n, n)
    for i, m in enumerate(centre):
        generic = la.madd(generic, la.mscale(Fraction(1 + 3 * i), m))
    components = _rational_primary_components(generic, n)
    for comp in components:
        cols_matrix = la.mat_vecs_as_columns(list(comp))
        for m in centre:
            if any(la.solve(cols_matrix, la.mvec(m, v)) is None for v in comp):
                return []  # centre does not preserve the splitting: no split part
    # a combination sum c_i centre_i is split iff it acts as a rational scalar
    # on every component: impose "off-scalar part vanishes" linearly in c
    out_rows = []
    for comp in components:
        cols_matrix = la.mat_vecs_as_columns(list(comp))
        k = len(comp)
        per_member = []
        for m in centre:
            mat_rest = la.mat_vecs_as_columns([la.solve(cols_matrix, la.mvec(m, v)) for v in comp])
            per_member.append(mat_rest)
        for i in range(k):
            for j in range(k):
                row = []
                for mat_rest in per_member:
                    val = mat_rest[i][j]
                    if i == j:
                        val = val - Fraction(sum(mat_rest[d][d] for d in range(k)), k)
                    row.append(val)
                out_rows.append(tuple(row))
    kernel = la.nullspace(tuple(out_rows)) if out_rows else [
        tuple(Fraction(1 if i == j else 0) for j in range(len(centre))) for i in range(len(centre))
    ]
    out = []
    for v in kernel:
        z = la.zeros(n, n)
        for c, m in zip(v, centre):
            z = la.madd(z, la.mscale(c, m))
        # demand rational semisimplicity: minimal polynomial splits; for a
        # commuting family acting scalar-per-component this is automatic
        out.append(z)
    return out


def _rational_primary_components(m: la.Mat, n: int) -> list[list[la.Vec]]:
    """Generalized eigenspace decomposition over Q of a rational matrix,
    via exact kernels of (m - r)^n for the rational roots r of the
    characteristic polynomial, plus one residual component."""
    # rational eigenvalues via integer root search on the characteristic polynomial
    from sympy import Matrix, Rational

    sm = Matrix([[Rational(v.numerator, v.denominator) for v in row] for row in m])
    poly = sm.charpoly()
    roots = [r for r in poly.all_roots() if r.is_rational]
    comps = []
    used = []
    for r in roots:
        rr = Fraction(int(r.p), int(r.q))
        shifted = la.msub(m, la.mscale(rr, la.eye(n)))
        kern = la.nullspace(mat_power(shifted, n))
        if kern:
            comps.append(list(la.row_space_signature(kern)))
            used.extend(comps[-1])
    residual_dim = n - la.span_dim(used)
    if residual_dim:
        # complement: kernel of the product of all (m - r)^n projectors' sum
        into = la.row_space_signature(used)
        comp = []
        for v in la.eye(n):
            if not la.span_contains(la.span_sum(into, comp), v):
                comp.append(v)
        # the residual space must be m-stable in our use cases; keep as one block
        prod = la.eye(n)
        for r in roots:
            rr = Fraction(int(r.p), int(r.q))
            prod = la.mmul(prod, mat_power(la.msub(m, la.mscale(rr, la.eye(n))), n))
        comps.append(list(la.row_space_signature(la.transpose(prod))))
    return comps
