"""Exact polynomials and exponential polynomials in several variables.

A Poly is a dense-free dict {exponent tuple -> Fraction}.  An ExpPoly is a
finite sum  sum_j p_j(x) * exp(<x, X_j>)  with rational polynomials p_j and
pairwise distinct rational exponent vectors X_j; the pairing is the ambient
dot product.  Canonical form (zero terms dropped, exponents deduplicated)
makes equality decidable exactly.  Restriction of the series to a rational
ray x = z*x0 has exact rational Taylor coefficients in z.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from . import linalg as la
from .linalg import frac

Monomial = tuple[int, ...]


class Poly:
    """Polynomial with rational coefficients in a fixed number of variables."""

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: dict[Monomial, Fraction] | None = None):
        self.nvars = nvars
        self.coeffs: dict[Monomial, Fraction] = {}
        if coeffs:
            for mono, c in coeffs.items():
                c = frac(c)
                if c != 0:
                    assert len(mono) == nvars
                    self.coeffs[tuple(int(k) for k in mono)] = c

    # -- constructors ----------------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {tuple([0] * nvars): frac(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): Fraction(1)})

    @classmethod
    def linear_form(cls, vector: Iterable) -> "Poly":
        vector = [frac(x) for x in vector]
        n = len(vector)
        out = cls(n)
        for i, c in enumerate(vector):
            if c != 0:
                mono = [0] * n
                mono[i] = 1
                out.coeffs[tuple(mono)] = c
        return out

    # -- ring structure --------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.nvars, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            s = out.get(mono, Fraction(0)) + c
            if s == 0:
                out.pop(mono, None)
            else:
                out[mono] = s
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = frac(other)
            return Poly(self.nvars, {m: c * v for m, v in self.coeffs.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        return self * frac(c)

    # -- calculus ----------------------------------------------------------------

    def degree(self) -> int:
        return max((sum(m) for m in self.coeffs), default=-1)

    def homogeneous_value(self, d: int, point: Iterable) -> Fraction:
        """Value at `point` of the degree-d homogeneous part."""
        point = [frac(x) for x in point]
        total = Fraction(0)
        for mono, c in self.coeffs.items():
            if sum(mono) != d:
                continue
            term = c
            for x, k in zip(point, mono):
                term *= x**k
            total += term
        return total

    def eval(self, point: Iterable) -> Fraction:
        point = [frac(x) for x in point]
        total = Fraction(0)
        for mono, c in self.coeffs.items():
            term = c
            for x, k in zip(point, mono):
                term *= x**k
            total += term
        return total

    def diff(self, i: int) -> "Poly":
        out: dict[Monomial, Fraction] = {}
        for mono, c in self.coeffs.items():
            if mono[i] == 0:
                continue
            m2 = list(mono)
            m2[i] -= 1
            out[tuple(m2)] = c * mono[i]
        return Poly(self.nvars, out)

    def gradient(self) -> list["Poly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def compose_linear(self, matrix: la.Mat) -> "Poly":
        """p(A x) as a polynomial in x; A maps x-space to this poly's space."""
        nvars_new = len(matrix[0]) if matrix else 0
        lin = [Poly.linear_form(row) for row in matrix]
        out = Poly(nvars_new)
        for mono, c in self.coeffs.items():
            term = Poly.constant(nvars_new, c)
            for i, k in enumerate(mono):
                for _ in range(k):
                    term = term * lin[i]
            out = out + term
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for mono, c in sorted(self.coeffs.items()):
            vars_part = "*".join(
                f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(mono) if k
            )
            bits.append(f"{c}" + (f"*{vars_part}" if vars_part else ""))
        return " + ".join(bits)


class ExpPoly:
    """Finite sum of terms  poly(x) * exp(<x, X>)  with rational data."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[Fraction, ...], Poly] | None = None):
        self.nvars = nvars
        self.terms: dict[tuple[Fraction, ...], Poly] = {}
        if terms:
            for exp_vec, poly in terms.items():
                if poly.is_zero():
                    continue
                key = tuple(frac(x) for x in exp_vec)
                assert len(key) == nvars and poly.nvars == nvars
                if key in self.terms:
                    merged = self.terms[key] + poly
                    if merged.is_zero():
                        del self.terms[key]
                    else:
                        self.terms[key] = merged
                else:
                    self.terms[key] = poly

    # -- constructors -------------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "ExpPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "ExpPoly":
        return cls(nvars, {tuple([Fraction(0)] * nvars): Poly.constant(nvars, c)})

    @classmethod
    def from_poly(cls, poly: Poly) -> "ExpPoly":
        return cls(poly.nvars, {tuple([Fraction(0)] * poly.nvars): poly})

    @classmethod
    def exponential(cls, exp_vec: Iterable) -> "ExpPoly":
        exp_vec = tuple(frac(x) for x in exp_vec)
        n = len(exp_vec)
        return cls(n, {exp_vec: Poly.constant(n, 1)})

    # -- algebra -------------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, ExpPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset((k, hash(v)) for k, v in self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        merged = {k: Poly(self.nvars, dict(v.coeffs)) for k, v in self.terms.items()}
        out = ExpPoly(self.nvars, merged)
        for k, v in other.terms.items():
            if k in out.terms:
                s = out.terms[k] + v
                if s.is_zero():
                    del out.terms[k]
                else:
                    out.terms[k] = s
            else:
                out.terms[k] = v
        return out

    def __neg__(self) -> "ExpPoly":
        return ExpPoly(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            return ExpPoly(self.nvars, {k: v * frac(other) for k, v in self.terms.items()})
        out = ExpPoly(self.nvars)
        for x1, p1 in self.terms.items():
            for x2, p2 in other.terms.items():
                key = tuple(a + b for a, b in zip(x1, x2))
                prod = p1 * p2
                if key in out.terms:
                    s = out.terms[key] + prod
                    if s.is_zero():
                        del out.terms[key]
                    else:
                        out.terms[key] = s
                else:
                    out.terms[key] = prod
        return out

    __rmul__ = __mul__

    def compose_linear(self, matrix: la.Mat) -> "ExpPoly":
        """f(A x); exponent vectors transform by the transpose of A."""
        at = la.transpose(matrix)
        nvars_new = len(matrix[0]) if matrix else 0
        out = ExpPoly(nvars_new)
        for exp_vec, poly in self.terms.items():
            new_exp = la.mvec(at, exp_vec)
            new_poly = poly.compose_linear(matrix)
            out = out + ExpPoly(nvars_new, {tuple(new_exp): new_poly})
        return out

    # -- evaluation ------------------------------------------------------------------

    def eval_float(self, point: Iterable) -> float:
        point = [frac(x) for x in point]
        total = 0.0
        for exp_vec, poly in self.terms.items():
            pairing = sum((a * b for a, b in zip(exp_vec, point)), Fraction(0))
            total += float(poly.eval(point)) * math.exp(float(pairing))
        return total

    def ray_series(self, direction: Iterable, order: int) -> list[Fraction]:
        """Exact Taylor coefficients in z of f(z * direction), orders 0..order."""
        direction = [frac(x) for x in direction]
        coeffs = [Fraction(0)] * (order + 1)
        for exp_vec, poly in self.terms.items():
            a = sum((u * v for u, v in zip(exp_vec, direction)), Fraction(0))
            poly_coeffs = [poly.homogeneous_value(d, direction) for d in range(min(poly.degree(), order) + 1)]
            exp_coeffs = [Fraction(1)]
            fact = 1
            for k in range(1, order + 1):
                fact *= k
                exp_coeffs.append(a**k / fact)
            for d, pc in enumerate(poly_coeffs):
                if pc == 0:
                    continue
                for k in range(0, order + 1 - d):
                    coeffs[d + k] += pc * exp_coeffs[k]
        return coeffs

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exp_vec, poly in sorted(self.terms.items()):
            bits.append(f"({poly})*exp<x,{tuple(str(e) for e in exp_vec)}>")
        return " + ".join(bits)
