"""Valuations of the rationals, patch-topology expressions, and bounded-precision p-adics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DivisionByZero, NotMonic, PrecisionExhausted, PrimeMismatch, ZeroInput

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_upto(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if is_prime(q)]


def _int_val(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(q, p: int) -> int:
    """Exact p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ZeroInput("valuation of 0 is +inf")
    return _int_val(q.numerator, p) - _int_val(q.denominator, p)


def val(q, p: int):
    """Like vp but returns +inf for 0."""
    q = Fraction(q)
    return INF if q == 0 else vp(q, p)


def val_vector(xs, p: int):
    return min((val(x, p) for x in xs), default=INF)


def reduce_mod(q, p: int, k: int) -> int:
    """Residue of a p-integral rational modulo p^k."""
    q = Fraction(q)
    m = p ** k
    if q.denominator % p == 0:
        raise ValueError(f"{q} is not {p}-integral")
    return q.numerator * pow(q.denominator, -1, m) % m


# --------------------------------------------------------------- valuations

@dataclass(frozen=True)
class ValuationPoint:
    prime: int | None = None        # None is the trivial valuation

    def __post_init__(self):
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    def __call__(self, a):
        a = Fraction(a)
        if a == 0:
            return INF
        return 0 if self.prime is None else vp(a, self.prime)

    def __str__(self):
        return f"v_{self.prime or 0}"


def catalog_points(bound: int = 97) -> list[ValuationPoint]:
    return [ValuationPoint(q) for q in primes_upto(bound)] + [ValuationPoint(None)]


class PatchExpr:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Val(PatchExpr):
    """{v : v(a) > 0}"""
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))

    def __str__(self):
        return f"Val({self.a})"


@dataclass(frozen=True)
class ValPrime(PatchExpr):
    """{v : v(a) >= 0}"""
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))

    def __str__(self):
        return f"Val'({self.a})"


@dataclass(frozen=True)
class And(PatchExpr):
    left: PatchExpr
    right: PatchExpr


@dataclass(frozen=True)
class Or(PatchExpr):
    left: PatchExpr
    right: PatchExpr


@dataclass(frozen=True)
class Not(PatchExpr):
    inner: PatchExpr


def eval_patch(v: ValuationPoint, e: PatchExpr) -> bool:
    if isinstance(e, Val):
        return v(e.a) > 0
    if isinstance(e, ValPrime):
        return v(e.a) >= 0
    if isinstance(e, And):
        return eval_patch(v, e.left) and eval_patch(v, e.right)
    if isinstance(e, Or):
        return eval_patch(v, e.left) or eval_patch(v, e.right)
    if isinstance(e, Not):
        return not eval_patch(v, e.inner)
    raise TypeError(f"not a patch expression: {e!r}")


def parse_patch(text: str) -> PatchExpr:
    """Parse expressions like ``Val(7) & ~(Val'(1/3) | Val(2))``."""
    import re
    tokens = re.findall(r"Val'|Val|\(|\)|&|\||~|-?\d+(?:/\d+)?", text.replace(" ", ""))
    if "".join(tokens) != text.replace(" ", ""):
        raise ValueError(f"cannot parse patch expression {text!r}")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'token'} in {text!r}")
        pos += 1
        return tok

    def atom():
        tok = take()
        if tok == "~":
            return Not(atom())
        if tok == "(":
            e = disj()
            take(")")
            return e
        if tok in ("Val", "Val'"):
            take("(")
            a = Fraction(take())
            take(")")
            return Val(a) if tok == "Val" else ValPrime(a)
        raise ValueError(f"unexpected {tok!r} in {text!r}")

    def conj():
        e = atom()
        while peek() == "&":
            take()
            e = And(e, atom())
        return e

    def disj():
        e = conj()
        while peek() == "|":
            take()
            e = Or(e, conj())
        return e

    e = disj()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return e


def sign_vector(v: ValuationPoint, S: Sequence) -> list[int]:
    return [-1 if v(a) < 0 else 0 for a in S]


# ------------------------------------------------------------------- p-adics

@dataclass(frozen=True)
class PAdic:
    """unit * p^valuation, known modulo p^(valuation + precision).

    The exact zero has valuation +inf, unit 0 and precision +inf.
    """
    p: int
    valuation: int | float
    unit: int
    precision: int | float

    @classmethod
    def zero(cls, p: int) -> "PAdic":
        return cls(p, INF, 0, INF)

    @classmethod
    def from_rational(cls, q, p: int, precision: int) -> "PAdic":
        q = Fraction(q)
        if q == 0:
            return cls.zero(p)
        if precision < 1:
            raise ValueError("precision must be positive")
        k = vp(q, p)
        u = q / Fraction(p) ** k
        return cls(p, k, reduce_mod(u, p, precision), precision)

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def absolute_precision(self):
        return self.valuation + self.precision

    def residue(self):
        """The represented value as a rational with least nonnegative unit."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def mod(self) -> int:
        """Least nonnegative integer congruent to the value mod p^(absolute precision)."""
        if self.valuation < 0:
            raise ValueError("value is not p-integral")
        return int(self.residue()) % self.p ** int(self.absolute_precision)

    def digits(self) -> list[int]:
        out, u = [], self.unit
        for _ in range(int(self.precision)):
            out.append(u % self.p)
            u //= self.p
        return out

    def _same(self, other: "PAdic"):
        if not isinstance(other, PAdic):
            raise TypeError("expected a PAdic")
        if other.p != self.p:
            raise PrimeMismatch(f"primes {self.p} and {other.p} differ")

    def __add__(self, other: "PAdic") -> "PAdic":
        self._same(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        a, b = (self, other) if self.valuation <= other.valuation else (other, self)
        p = self.p
        top = min(a.absolute_precision, b.absolute_precision)
        rel = top - a.valuation
        m = p ** rel
        s = (a.unit + b.unit * p ** (b.valuation - a.valuation)) % m
        if s == 0:
            raise PrecisionExhausted(f"sum is 0 modulo {p}^{top}", witness={"lower_bound": top})
        k = _int_val(s, p)
        n = rel - k
        return PAdic(p, a.valuation + k, (s // p ** k) % p ** n, n)

    def __neg__(self) -> "PAdic":
        if self.is_zero:
            return self
        return PAdic(self.p, self.valuation, (-self.unit) % self.p ** self.precision, self.precision)

    def __sub__(self, other: "PAdic") -> "PAdic":
        self._same(other)
        return self + (-other)

    def __mul__(self, other: "PAdic") -> "PAdic":
        self._same(other)
        if self.is_zero or other.is_zero:
            return PAdic.zero(self.p)
        n = min(self.precision, other.precision)
        return PAdic(self.p, self.valuation + other.valuation, self.unit * other.unit % self.p ** n, n)

    def inverse(self) -> "PAdic":
        if self.is_zero:
            raise DivisionByZero("inverse of 0")
        m = self.p ** self.precision
        return PAdic(self.p, -self.valuation, pow(self.unit, -1, m), self.precision)

    def __truediv__(self, other: "PAdic") -> "PAdic":
        self._same(other)
        return self * other.inverse()

    def __pow__(self, k: int) -> "PAdic":
        if k < 0:
            return self.inverse() ** (-k)
        out = PAdic.from_rational(1, self.p, self.precision if not self.is_zero else 1)
        if self.is_zero:
            return PAdic.zero(self.p) if k else out
        for _ in range(k):
            out = out * self
        return out

    def __str__(self):
        if self.is_zero:
            return "0"
        return f"{self.unit}*{self.p}^{self.valuation} + O({self.p}^{self.absolute_precision})"


def padic_arith(op: str, a: PAdic, b: PAdic | None = None) -> PAdic:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


@dataclass
class HenselianFormResult:
    holds: bool
    root: PAdic | None = None
    reason: str = ""


def check_henselian_form(coeffs: Sequence, p: int, precision: int = 10) -> HenselianFormResult:
    """Is f = X^n + X^(n-1) + a_(n-2) X^(n-2) + ... + a_0 with every v_p(a_i) > 0?

    When it is, the root congruent to -1 mod p is returned to ``precision`` digits.
    """
    c = [Fraction(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    n = len(c) - 1
    if c[-1] != 1:
        raise NotMonic("leading coefficient is not 1")
    if n < 2:
        raise ValueError("degree must be at least 2")
    if c[n - 1] != 1:
        return HenselianFormResult(False, reason="coefficient of X^(n-1) is not 1")
    for i in range(n - 1):
        if val(c[i], p) <= 0:
            return HenselianFormResult(False, reason=f"coefficient of X^{i} has valuation <= 0")
    m = p ** precision
    ci = [reduce_mod(x, p, precision) for x in c]

    def ev(cs, x):
        acc = 0
        for a in reversed(cs):
            acc = (acc * x + a) % m
        return acc
    dcs = [(k * ci[k]) % m for k in range(1, n + 1)]
    r = (-1) % m
    for _ in range(precision.bit_length() + 2):
        fr = ev(ci, r)
        if fr == 0:
            break
        r = (r - fr * pow(ev(dcs, r), -1, m)) % m
    assert ev(ci, r) == 0 and (r + 1) % p == 0
    return HenselianFormResult(True, PAdic.from_rational(r, p, precision) if r else PAdic.zero(p))
