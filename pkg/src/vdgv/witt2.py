"""Witt vectors of length 2 over binary fields, their characters, and Gauss sums.

W_2(F_2) is Z/4 via m -> m*(1,0); the base character sends (1,0) to +i, so
every character value is an exact power of i in Z[i].
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .errors import FieldMismatch, GateExceeded, InvalidSubfield, PreconditionFailed
from .field2k import FieldCtx, FieldElem, default_field

DIRECT_GAUSS_MAX_N = 20


class GaussInt:
    """Exact a + bi with Python ints."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        self.re = int(re)
        self.im = int(im)

    @staticmethod
    def _coerce(o) -> "GaussInt":
        if isinstance(o, GaussInt):
            return o
        if isinstance(o, int):
            return GaussInt(o, 0)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __mul__(self, o):
        o = self._coerce(o)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        r, b = GaussInt(1), self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def unit_inverse(self) -> "GaussInt":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of Z[i]")
        return self.conj()

    def __eq__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussInt({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_json(self) -> dict:
        return {"re": self.re, "im": self.im}

    @classmethod
    def from_json(cls, d: dict) -> "GaussInt":
        return cls(d["re"], d["im"])


I_POWERS = (GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1))


def i_pow(m: int) -> GaussInt:
    return I_POWERS[m % 4]


# -- raw pair arithmetic on ints ---------------------------------------------

def _wadd(ctx: FieldCtx, x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
    return x[0] ^ y[0], x[1] ^ y[1] ^ ctx.mul(x[0], y[0])


def _wmul(ctx: FieldCtx, x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
    a, b = x
    c, d = y
    return ctx.mul(a, c), ctx.mul(b, ctx.sq(c)) ^ ctx.mul(ctx.sq(a), d)


def wtrace_raw(ctx: FieldCtx, x: Tuple[int, int], sub: int, src: Optional[int] = None) -> Tuple[int, int]:
    """Witt trace from F_{2^src} (default the whole field) to F_{2^sub}.

    With src < ctx.k the input must lie in the subfield W_2(F_{2^src}).
    """
    src = ctx.k if src is None else src
    if sub < 1 or src % sub or ctx.k % src:
        raise InvalidSubfield(f"cannot trace from degree {src} to {sub}")
    acc = (0, 0)
    a, b = x
    for _ in range(src // sub):
        acc = _wadd(ctx, acc, (a, b))
        a, b = ctx.frob(a, sub), ctx.frob(b, sub)
    return acc


def xi_exponent(ctx: FieldCtx, x: Tuple[int, int], src: Optional[int] = None) -> int:
    """m in Z/4 with Tr_{2^src/2}(x) = m*(1,0)."""
    t0, t1 = wtrace_raw(ctx, x, 1, src)
    return t0 + 2 * t1


class W2Elem:
    __slots__ = ("ctx", "a", "b")

    def __init__(self, ctx: FieldCtx, a, b):
        self.ctx = ctx
        self.a = a.v if isinstance(a, FieldElem) else a
        self.b = b.v if isinstance(b, FieldElem) else b

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.a, self.b)

    def _other(self, o: "W2Elem") -> Tuple[int, int]:
        if not isinstance(o, W2Elem):
            raise TypeError("expected a W2Elem")
        if not self.ctx.same_field(o.ctx):
            raise FieldMismatch("Witt vectors over different fields")
        return o.pair

    def __add__(self, o):
        return W2Elem(self.ctx, *_wadd(self.ctx, self.pair, self._other(o)))

    def __neg__(self):
        return W2Elem(self.ctx, self.a, self.b ^ self.ctx.sq(self.a))

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        return W2Elem(self.ctx, *_wmul(self.ctx, self.pair, self._other(o)))

    def inv(self) -> "W2Elem":
        if self.a == 0:
            raise ZeroDivisionError("(0, b) is not a unit of W_2")
        ia = self.ctx.inv(self.a)
        return W2Elem(self.ctx, ia, self.ctx.mul(self.ctx.pow(ia, 4), self.b))

    def frobenius(self, j: int = 1) -> "W2Elem":
        return W2Elem(self.ctx, self.ctx.frob(self.a, j), self.ctx.frob(self.b, j))

    def __eq__(self, o):
        if not isinstance(o, W2Elem):
            return NotImplemented
        return self.ctx.same_field(o.ctx) and self.pair == o.pair

    def __hash__(self):
        return hash((self.ctx.k, self.pair))

    def __repr__(self):
        return f"W2({self.a:#x}, {self.b:#x})"

    def to_json(self) -> dict:
        return {"a": format(self.a, "x"), "b": format(self.b, "x")}


def w_add(x: W2Elem, y: W2Elem) -> W2Elem:
    return x + y


def w_neg(x: W2Elem) -> W2Elem:
    return -x


def w_mul(x: W2Elem, y: W2Elem) -> W2Elem:
    return x * y


def w_inv(x: W2Elem) -> W2Elem:
    return x.inv()


def w_frobenius(x: W2Elem, j: int = 1) -> W2Elem:
    return x.frobenius(j)


def w_trace(x: W2Elem, sub_degree: int, src_degree: Optional[int] = None) -> W2Elem:
    return W2Elem(x.ctx, *wtrace_raw(x.ctx, x.pair, sub_degree, src_degree))


def xi(x: W2Elem, src_degree: Optional[int] = None) -> GaussInt:
    """The order-4 character xi_2 o Tr_{2^src/2}; xi_2(1,0) = i."""
    return i_pow(xi_exponent(x.ctx, x.pair, src_degree))


class W2Char:
    """The character (x,y) -> xi_2(Tr_{p/2}((a,b) * (x,y))) of W_2(F_p).

    Elements of F_p are stored in the ambient field `ctx`, which must contain
    F_p as the subfield of degree ctx.f0.
    """

    def __init__(self, ctx: FieldCtx, a: int, b: int):
        for v in (a, b):
            if ctx.frob(v, ctx.f0) != v:
                raise PreconditionFailed(f"{v:#x} is not in F_{ctx.p}")
        self.ctx = ctx
        self.a = a
        self.b = b

    def exponent(self, x: Tuple[int, int]) -> int:
        return xi_exponent(self.ctx, _wmul(self.ctx, (self.a, self.b), x), self.ctx.f0)

    def __call__(self, x: W2Elem) -> GaussInt:
        return i_pow(self.exponent(x.pair))

    def order(self) -> int:
        return 4 if self.a else (2 if self.b else 1)


def char_eval(chi: W2Char, x: W2Elem) -> GaussInt:
    return chi(x)


def lang(x: FieldElem, y: FieldElem) -> W2Elem:
    """(x^p, y^p) - (x, y) = (x^p + x, y^p + y + x^(p+1) + x^2)."""
    ctx = x.ctx
    f0 = ctx.f0
    xp = ctx.frob(x.v, f0)
    return W2Elem(ctx, xp ^ x.v,
                  ctx.frob(y.v, f0) ^ y.v ^ ctx.mul(xp, x.v) ^ ctx.sq(x.v))


def gauss_sum_formula(n: int) -> GaussInt:
    return GaussInt(-1, -1) ** n


def xi_exponent_array(ctx: FieldCtx, a: np.ndarray) -> np.ndarray:
    """Exponents of xi(x, 0) for an array of x, via the Witt sum of the
    conjugates (x^(2^i), 0): first entry the trace, second the elementary
    symmetric function of degree 2."""
    s = np.zeros_like(a)
    e = np.zeros_like(a)
    c = a.copy()
    for _ in range(ctx.k):
        e ^= ctx.vmul(s, c)
        s ^= c
        c = ctx.vmul(c, c)
    return (s & 1) + 2 * (e & 1)


def gauss_sum_direct(n: int) -> GaussInt:
    """-sum over x in F_{2^n} of xi(x, 0), by enumerating the field."""
    if n < 1:
        raise PreconditionFailed("n must be positive")
    if n > DIRECT_GAUSS_MAX_N:
        raise GateExceeded(f"direct Gauss sum gated to n <= {DIRECT_GAUSS_MAX_N}")
    ctx = default_field(n)
    counts = np.bincount(xi_exponent_array(ctx, np.arange(ctx.q, dtype=np.int64)), minlength=4)
    total = GaussInt(0)
    for m in range(4):
        total = total + i_pow(m) * int(counts[m])
    return -total
