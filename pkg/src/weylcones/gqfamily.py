"""Families of exponential polynomials indexed by parabolic subgroups.

A family over a base parabolic Q assigns to every standard parabolic P with
Q <= P <= top an exponential polynomial c_P on a_Q*, subject to the wall
compatibility: whenever P < P' are adjacent (dim a_P^(P') = 1), the two
entries agree on the hyperplane where the a_P^(P') component of lambda
vanishes.  Frugal families arise from a single function on a_Q by projection
(c_P(lam) = c_Q(lam_P)); cofrugal ones from a function on a_Q^G by the
complementary projection (c_P(lam) = c_top(lam^P)).

The regularised value

    c_Q'(lam) = sum_P eps_Q^P c_P(lam) / (thetahat_Q^P(lam) theta_P(lam))

is singular term by term but holomorphic as a sum.  Following the single-ray
recipe, we restrict to lam = z*lam0 for a rational direction lam0 off every
singular hyperplane; each term contributes an exact rational Taylor series in
z divided by z^d (d = dim a_Q^top), the eta constants entering as floating
square roots only at the very end.  The operation checks that the pole part
cancels and returns the Laurent data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .errors import DomainError, IncompatibleFamilyError
from .exppoly import ExpPoly
from .rootdata import RootDatum, StdParabolic


def theta(rd: RootDatum, q: StdParabolic, p: StdParabolic, lam: la.Vec) -> float:
    """theta_Q^P(lambda) = eta_Q^P * prod of pairings with the pair coroots."""
    data = rd.pair(q, p)
    prod = Fraction(1)
    for cr in data.coroots:
        prod *= rd.pairing(lam, cr)
    return data.eta * float(prod)


def hat_theta(rd: RootDatum, q: StdParabolic, p: StdParabolic, lam: la.Vec) -> float:
    """thetahat_Q^P(lambda) = etahat_Q^P * prod of pairings with the coweights."""
    data = rd.pair(q, p)
    prod = Fraction(1)
    for cw in data.coweights:
        prod *= rd.pairing(lam, cw)
    return data.etahat * float(prod)


def _theta_rational(rd, q, p, lam) -> Fraction:
    prod = Fraction(1)
    for cr in rd.pair(q, p).coroots:
        prod *= rd.pairing(lam, cr)
    return prod


def _hat_theta_rational(rd, q, p, lam) -> Fraction:
    prod = Fraction(1)
    for cw in rd.pair(q, p).coweights:
        prod *= rd.pairing(lam, cw)
    return prod


def epsilon_pair(q: StdParabolic, p: StdParabolic) -> int:
    return -1 if len(p.subset - q.subset) % 2 else 1


def _proj_matrix(rd: RootDatum, basis) -> la.Mat:
    cols = [la.project_onto(e_i, basis, rd.gram) for e_i in la.eye(rd.dim)]
    return la.transpose(tuple(cols))


@dataclass
class CPrimeResult:
    """Laurent data of c_Q'(z lam0) around z = 0."""

    laurent: dict[int, float]
    value: float
    pole_residual: float


class GQFamily:
    """Exponential-polynomial family on the parabolic interval [base, top]."""

    def __init__(
        self,
        rd: RootDatum,
        base: StdParabolic,
        entries: dict[StdParabolic, ExpPoly],
        top: StdParabolic | None = None,
        modes: frozenset[str] = frozenset(),
        check: bool = True,
    ):
        self.rd = rd
        self.base = base
        self.top = top if top is not None else rd.group
        if not base.is_contained_in(self.top):
            raise DomainError(f"base {base} not contained in top {self.top}")
        self.modes = frozenset(modes)
        proj_q = _proj_matrix(rd, rd.a_basis(base))
        self.entries: dict[StdParabolic, ExpPoly] = {}
        for p in rd.parabolics_between(base, self.top):
            if p not in entries:
                raise DomainError(f"family is missing an entry for {p}")
            self.entries[p] = entries[p].compose_linear(proj_q)
        if check:
            self.check_compatibility()

    # -- constructors ----------------------------------------------------------------

    @classmethod
    def frugal(cls, rd, base, c_base: ExpPoly, top=None) -> "GQFamily":
        top = top if top is not None else rd.group
        entries = {}
        for p in rd.parabolics_between(base, top):
            entries[p] = c_base.compose_linear(_proj_matrix(rd, rd.a_basis(p)))
        return cls(rd, base, entries, top, modes=frozenset({"frugal"}))

    @classmethod
    def cofrugal(cls, rd, base, c_top: ExpPoly, top=None) -> "GQFamily":
        top = top if top is not None else rd.group
        entries = {}
        for p in rd.parabolics_between(base, top):
            upper = _proj_matrix(rd, rd.pair(base, p).space_basis)
            entries[p] = c_top.compose_linear(upper)
        return cls(rd, base, entries, top, modes=frozenset({"cofrugal"}))

    @classmethod
    def constant(cls, rd, base, value=1, top=None) -> "GQFamily":
        c = ExpPoly.constant(rd.dim, value)
        fam = cls.frugal(rd, base, c, top)
        fam.modes = frozenset({"frugal", "cofrugal"})
        return fam

    @classmethod
    def exponential(cls, rd, base, x_vec: la.Vec, top=None) -> "GQFamily":
        """The frugal family c_P = exp(<lambda, X_P>)."""
        return cls.frugal(rd, base, ExpPoly.exponential(x_vec), top)

    @classmethod
    def exponential_cofrugal(cls, rd, base, x_vec: la.Vec, top=None) -> "GQFamily":
        """The cofrugal family c_P = exp(<lambda, X^P>)."""
        return cls.cofrugal(rd, base, ExpPoly.exponential(x_vec), top)

    # -- structure ---------------------------------------------------------------------

    def product(self, other: "GQFamily") -> "GQFamily":
        assert self.base == other.base and self.top == other.top
        entries = {p: self.entries[p] * other.entries[p] for p in self.entries}
        return GQFamily(self.rd, self.base, entries, self.top, modes=self.modes & other.modes)

    def check_compatibility(self):
        """Exact wall compatibility on all adjacent pairs in the interval."""
        rd = self.rd
        for p in self.entries:
            for extra in sorted(self.top.subset - p.subset):
                p2 = rd.parabolic(p.subset | {extra})
                wall = rd.pair(p, p2).space_basis
                normal_rows = tuple(la.mvec(rd.gram, w) for w in wall)
                hyper = la.nullspace(normal_rows)
                basis_matrix = la.mat_vecs_as_columns(tuple(hyper))
                lhs = self.entries[p].compose_linear(basis_matrix)
                rhs = self.entries[p2].compose_linear(basis_matrix)
                if lhs != rhs:
                    raise IncompatibleFamilyError(
                        f"entries at {p} and {p2} disagree on their common wall"
                    )

    def restrict_to(self, p: StdParabolic) -> "GQFamily":
        """The family on [P, top] obtained by lambda -> lambda_P."""
        if not self.base.is_contained_in(p):
            raise DomainError(f"{p} does not contain the base {self.base}")
        proj = _proj_matrix(self.rd, self.rd.a_basis(p))
        entries = {
            p2: self.entries[p2].compose_linear(proj)
            for p2 in self.rd.parabolics_between(p, self.top)
        }
        return GQFamily(self.rd, p, entries, self.top, modes=self.modes)

    def descend_to(self, p: StdParabolic) -> "GQFamily":
        """The Levi family on [base, P] (re-indexing, entries unchanged)."""
        if not (self.base.is_contained_in(p) and p.is_contained_in(self.top)):
            raise DomainError(f"{p} is not between {self.base} and {self.top}")
        entries = {
            p2: self.entries[p2] for p2 in self.rd.parabolics_between(self.base, p)
        }
        return GQFamily(self.rd, self.base, entries, p, modes=self.modes)

    # -- evaluation ----------------------------------------------------------------------

    def singular_pairings(self) -> list[la.Vec]:
        """Vectors whose pairing with lambda must not vanish in c' evaluations."""
        out = []
        for p in self.entries:
            out.extend(self.rd.pair(self.base, p).coweights)
            out.extend(self.rd.pair(p, self.top).coroots)
        return out

    def is_regular_direction(self, lam: la.Vec) -> bool:
        return all(self.rd.pairing(lam, v) != 0 for v in self.singular_pairings())

    def c_prime_at(self, lam: la.Vec) -> float:
        """Direct evaluation of c'_base(lambda) away from the walls."""
        if not self.is_regular_direction(lam):
            raise DomainError("lambda lies on a singular hyperplane")
        rd = self.rd
        total = 0.0
        for p, c_p in self.entries.items():
            denom = hat_theta(rd, self.base, p, lam) * theta(rd, p, self.top, lam)
            total += epsilon_pair(self.base, p) * c_p.eval_float(lam) / denom
        return total

    def c_prime_ray(self, lam0: la.Vec, max_order: int = 0, tol: float = 1e-9) -> CPrimeResult:
        """Laurent coefficients of c'_base(z lam0) and the regularised value at 0.

        Raises IncompatibleFamilyError when the negative orders fail to cancel.
        """
        if not self.is_regular_direction(lam0):
            raise DomainError("ray direction lies on a singular hyperplane")
        rd = self.rd
        d = len(self.top.subset - self.base.subset)
        order_top = d + max_order
        laurent = [0.0] * (order_top + 1)
        scale = 0.0
        for p, c_p in self.entries.items():
            pair_lo = rd.pair(self.base, p)
            pair_hi = rd.pair(p, self.top)
            rational = _hat_theta_rational(rd, self.base, p, lam0) * _theta_rational(
                rd, p, self.top, lam0
            )
            irrational = pair_lo.etahat * pair_hi.eta
            eps = epsilon_pair(self.base, p)
            series = c_p.ray_series(lam0, order_top)
            for k, coeff in enumerate(series):
                value = eps * float(coeff / rational) / irrational
                laurent[k] += value
                scale = max(scale, abs(value))
        result = {k - d: laurent[k] for k in range(order_top + 1)}
        residual = max((abs(result[o]) for o in range(-d, 0)), default=0.0)
        if residual > tol * max(1.0, scale):
            raise IncompatibleFamilyError(
                f"pole part of c' does not cancel (residual {residual:.3e})"
            )
        for o in range(-d, 0):
            result[o] = 0.0
        return CPrimeResult(result, result.get(0, 0.0), residual)

    def c_prime_value(self, rng: random.Random | None = None, tol: float = 1e-9) -> float:
        """c'_base(0) along a deterministically chosen admissible ray."""
        lam0 = self.regular_direction(rng or random.Random(0))
        return self.c_prime_ray(lam0, 0, tol).value

    def regular_direction(self, rng: random.Random) -> la.Vec:
        basis = self.rd.ag_basis(self.base)
        for _ in range(1000):
            lam = tuple(Fraction(0) for _ in range(self.rd.dim))
            for b in basis:
                lam = la.vadd(lam, la.vscale(Fraction(rng.randint(-12, 12), rng.randint(1, 3)), b))
            if self.is_regular_direction(lam):
                return lam
        raise RuntimeError("could not find a regular direction")


# -- identity checks -----------------------------------------------------------------


def sample_regular(rd: RootDatum, family: GQFamily, rng: random.Random, min_gap: Fraction | None = None) -> la.Vec:
    """Rational lambda in a_Q^G off the singular hyperplanes of the family."""
    basis = rd.ag_basis(family.base)
    vectors = family.singular_pairings()
    min_gap = min_gap if min_gap is not None else Fraction(1, 20)
    while True:
        lam = tuple(Fraction(0) for _ in range(rd.dim))
        for b in basis:
            lam = la.vadd(lam, la.vscale(Fraction(rng.randint(-8, 8), rng.randint(1, 2)), b))
        if all(abs(rd.pairing(lam, v)) >= min_gap for v in vectors):
            return lam


def check_recursion(family: GQFamily, mode: str, samples: int = 100, seed: int = 0, tol: float = 1e-8) -> dict:
    """Sampled verification of the frugal / cofrugal recursion identities.

    frugal:    c_Q(lam)/theta_Q(lam)      = sum_P c'_P(lam_P) / theta_Q^P(lam)
    cofrugal:  c_top(lam)/thetahat_Q(lam) = sum_P eps_Q^P (c^P)'(lam) / thetahat_P(lam)
    """
    if mode not in ("frugal", "cofrugal"):
        raise DomainError(f"mode must be frugal or cofrugal, got {mode!r}")
    if mode not in family.modes:
        raise DomainError(f"family is not declared {mode!r}")
    rd = family.rd
    rng = random.Random(seed)
    q, top = family.base, family.top
    paras = rd.parabolics_between(q, top)
    sub = {p: (family.restrict_to(p) if mode == "frugal" else family.descend_to(p)) for p in paras}
    worst = 0.0
    witness = None
    for _ in range(samples):
        lam = sample_regular(rd, family, rng)
        if mode == "frugal":
            lhs = family.entries[q].eval_float(lam) / theta(rd, q, top, lam)
            rhs = 0.0
            for p in paras:
                rhs += sub[p].c_prime_at(lam) / theta(rd, q, p, lam)
        else:
            lhs = family.entries[top].eval_float(lam) / hat_theta(rd, q, top, lam)
            rhs = 0.0
            for p in paras:
                rhs += epsilon_pair(q, p) * sub[p].c_prime_at(lam) / hat_theta(rd, p, top, lam)
        dev = abs(lhs - rhs) / max(1.0, abs(lhs))
        if dev > worst:
            worst, witness = dev, lam
    return {"max_deviation": worst, "witness": witness, "passed": worst <= tol, "tol": tol}


def product_split(c: GQFamily, d: GQFamily, samples: int = 100, seed: int = 0, tol: float = 1e-8) -> dict:
    """Sampled verification of the splitting formula for (cd)'.

    Requires c cofrugal or d frugal;
    (cd)'_Q(lam) = sum_P (c^P)'(lam) d'_P(lam_P).
    """
    if "cofrugal" not in c.modes and "frugal" not in d.modes:
        raise DomainError(
            "splitting formula requires the first family cofrugal or the second frugal"
        )
    rd = c.rd
    q = c.base
    prod = c.product(d)
    paras = rd.parabolics_between(q, c.top)
    c_desc = {p: c.descend_to(p) for p in paras}
    d_rest = {p: d.restrict_to(p) for p in paras}
    rng = random.Random(seed)
    worst = 0.0
    witness = None
    for _ in range(samples):
        lam = sample_regular(rd, prod, rng)
        lhs = prod.c_prime_at(lam)
        rhs = 0.0
        for p in paras:
            rhs += c_desc[p].c_prime_at(lam) * d_rest[p].c_prime_at(lam)
        dev = abs(lhs - rhs) / max(1.0, abs(lhs))
        if dev > worst:
            worst, witness = dev, lam
    return {"max_deviation": worst, "witness": witness, "passed": worst <= tol, "tol": tol}


# -- triangular transforms over the parabolic lattice -----------------------------------


def _complement_parabolic(rd: RootDatum, q: StdParabolic, p: StdParabolic) -> StdParabolic:
    """R with Delta_Q = Delta_Q^P  |_|  Delta_Q^R (complementary subsets)."""
    full = frozenset(range(1, rd.rank + 1))
    return rd.parabolic(full - (p.subset - q.subset))


def complement_argument_matrix(rd: RootDatum, q: StdParabolic, p: StdParabolic) -> la.Mat:
    """Matrix M such that M lam is the lambda^(P/Q) component of lam.

    lambda^(P/Q) is the functional vanishing on a_P that agrees with lambda on
    a_R (R complementary to P over Q); its vector representative lies in
    a_Q^P.  As a map it is the transpose of: orthogonal projection onto a_Q^G
    followed by the oblique projection onto a_R^G along a_P^G.
    """
    r = _complement_parabolic(rd, q, p)
    basis_p = rd.pair(p, rd.group).space_basis
    basis_r = rd.pair(r, rd.group).space_basis
    combined = list(basis_p) + list(basis_r)
    stack = la.mat_vecs_as_columns(tuple(combined)) if combined else ()
    cols_out = []
    for e_i in la.eye(rd.dim):
        v = la.project_onto(e_i, rd.ag_basis(q), rd.gram)
        if not combined:
            cols_out.append(tuple(Fraction(0) for _ in range(rd.dim)))
            continue
        coeffs = la.solve(stack, v)
        assert coeffs is not None, "a_Q^G must split as a_P^G + a_R^G"
        w = tuple(Fraction(0) for _ in range(rd.dim))
        for cf, b in zip(coeffs[len(basis_p):], basis_r):
            w = la.vadd(w, la.vscale(cf, b))
        cols_out.append(w)
    oblique = la.transpose(tuple(cols_out))  # columns were images of e_i
    return la.transpose(oblique)


def theta_inversion_walls(rd: RootDatum, q: StdParabolic) -> list[la.Vec]:
    """Covectors whose vanishing makes a theta-inversion denominator singular."""
    paras = rd.parabolics_between(q, rd.group)
    out = []
    for p1 in paras:
        m_t = la.transpose(complement_argument_matrix(rd, q, p1))
        for p in rd.parabolics_between(q, p1):
            for w in rd.pair(p, p1).coweights:
                pulled = la.mvec(m_t, w)
                if not la.is_zero_vec(pulled):
                    out.append(pulled)
    return out


def theta_inversion(rd: RootDatum, q: StdParabolic, values: dict[StdParabolic, ExpPoly]):
    """Forward and inverse triangular transforms over the interval [Q, G].

    `values[P]` is an exponential polynomial read as a function of the
    lambda^(P/Q) component.  The forward transform subtracts principal parts
    with alternating signs,

        tilde[P1](lam) = sum_{P <= P1} eps_P^(P1) values[P](lam^(P/Q))
                                       / thetahat_P^(P1)(lam),

    and the inverse reassembles the plain values,

        values[P1](lam) = sum_{P <= P1} tilde[P](lam^(P/Q))
                                       / thetahat_P^(P1)(lam).

    Returns (forward, inverse, orig_eval): maps from parabolics to callables
    on ambient rational lambda.
    """
    paras = rd.parabolics_between(q, rd.group)
    arg_matrix = {p: complement_argument_matrix(rd, q, p) for p in paras}
    for p in paras:
        if p not in values:
            raise DomainError(f"missing transform input at {p}")

    def orig_eval(p, lam):
        return values[p].eval_float(la.mvec(arg_matrix[p], lam))

    # Every level-P1 function is a function of the lambda^(P1/Q) component
    # only; evaluation first canonicalises the argument through M_(P1), which
    # keeps the inner theta denominators in the internal variable of the
    # Levi of P1 (mixing ambient and internal arguments breaks the
    # triangular cancellation at intermediate levels).

    def forward_at(p1):
        members = rd.parabolics_between(q, p1)

        def ev(lam):
            mu = la.mvec(arg_matrix[p1], lam)
            total = 0.0
            for p in members:
                denom = hat_theta(rd, p, p1, mu)
                total += epsilon_pair(p, p1) * orig_eval(p, mu) / denom
            return total

        return ev

    forward = {p1: forward_at(p1) for p1 in paras}

    def inverse_at(p1):
        members = rd.parabolics_between(q, p1)

        def ev(lam):
            mu = la.mvec(arg_matrix[p1], lam)
            total = 0.0
            for p in members:
                denom = hat_theta(rd, p, p1, mu)
                total += forward[p](mu) / denom
            return total

        return ev

    inverse = {p1: inverse_at(p1) for p1 in paras}
    return forward, inverse, orig_eval
