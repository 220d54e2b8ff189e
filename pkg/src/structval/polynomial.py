"""Sparse multivariate polynomials with rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .padic import INF, reduce_mod, val


class Poly:
    """Terms map exponent tuples to nonzero Fractions."""

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: Mapping[tuple, object] | None = None, nvars: int = 1):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            e = tuple(int(k) for k in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, c, nvars: int = 1) -> "Poly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars)

    @classmethod
    def from_dense(cls, coeffs: Sequence, nvars: int = 1, var: int = 0) -> "Poly":
        """sum c_k X_var^k, coefficients low degree first."""
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * nvars
            e[var] = k
            terms[tuple(e)] = c
        return cls(terms, nvars)

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable counts differ")
            return other
        return Poly.constant(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return Poly(t, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return Poly(t, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self == self._lift(other)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, point: Sequence) -> Fraction:
        pt = [Fraction(x) for x in point]
        if len(pt) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def eval_mod(self, point: Sequence[int], p: int, k: int) -> int:
        """Value mod p^k at an integer point; coefficients must be p-integral."""
        m = p ** k
        total = 0
        for e, c in self.terms.items():
            term = reduce_mod(c, p, k)
            for x, d in zip(point, e):
                if d:
                    term = term * pow(x, d, m) % m
            total += term
        return total % m

    def derivative(self, i: int) -> "Poly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Poly(t, self.nvars)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def coefficient_in(self, i: int, k: int) -> "Poly":
        """Coefficient of X_i^k as a polynomial (X_i set to 0)."""
        t = {}
        for e, c in self.terms.items():
            if e[i] == k:
                ne = list(e)
                ne[i] = 0
                t[tuple(ne)] = c
        return Poly(t, self.nvars)

    def is_monic_in(self, i: int) -> bool:
        d = self.degree_in(i)
        return d >= 1 and self.coefficient_in(i, d) == Poly.constant(1, self.nvars)

    def val(self, p: int):
        """min over coefficients of v_p."""
        return min((val(c, p) for c in self.terms.values()), default=INF)

    def scale_inputs(self, s) -> "Poly":
        """f(X_1/s, ..., X_n/s)."""
        s = Fraction(s)
        return Poly({e: c / s ** sum(e) for e, c in self.terms.items()}, self.nvars)

    def coefficients(self) -> list:
        return list(self.terms.values())

    def to_json(self) -> list:
        return [[list(e), str(c)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data, nvars: int | None = None) -> "Poly":
        """Either a dense list (univariate) or a list of [exponents, coefficient] pairs."""
        if isinstance(data, dict) and "terms" in data:
            data = data["terms"]
        if data and all(isinstance(t, list) and len(t) == 2 and isinstance(t[0], list) for t in data):
            n = nvars if nvars is not None else len(data[0][0])
            return cls({tuple(e): Fraction(c) for e, c in data}, n)
        return cls.from_dense([Fraction(c) for c in data], nvars or 1)

    def __repr__(self):
        return f"Poly({self.to_json()}, nvars={self.nvars})"


def variables(nvars: int) -> list[Poly]:
    return [Poly.var(i, nvars) for i in range(nvars)]
