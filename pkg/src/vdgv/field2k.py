"""Binary fields F_{2^k} in a polynomial basis.

Elements are ints whose bit i is the coefficient of x^i. A FieldCtx does the
arithmetic on raw ints; FieldElem is a thin wrapper for the public API.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ._gf2 import F2Span, nullspace, parity, preimage_span, span_elements
from .errors import FieldMismatch, InvalidSubfield, InvariantViolation, PreconditionFailed

MAX_K = 24
TABLE_MAX_K = 16  # log/exp tables are built up to this degree


# -- polynomials over F_2 packed into ints ---------------------------------

def _deg(a: int) -> int:
    return a.bit_length() - 1


def _pmod(a: int, m: int) -> int:
    dm = _deg(m)
    while a and _deg(a) >= dm:
        a ^= m << (_deg(a) - dm)
    return a


def _pmulmod(a: int, b: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> _deg(m) & 1:
            a ^= m
    return r


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _prime_factors(n: int) -> List[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's test for a polynomial over F_2 of degree >= 1."""
    k = _deg(f)
    if k < 1:
        return False
    if k == 1:
        return True

    def x_pow_2j(j):
        t = 2
        for _ in range(j):
            t = _pmulmod(t, t, f)
        return t

    if x_pow_2j(k) != _pmod(2, f):
        return False
    for r in _prime_factors(k):
        if _pgcd(f, x_pow_2j(k // r) ^ 2) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(k: int) -> int:
    for f in range(1 << k, 1 << (k + 1)):
        if is_irreducible(f):
            return f
    raise InvariantViolation(f"no irreducible polynomial of degree {k}")


# -- contexts ----------------------------------------------------------------

class FieldCtx:
    """The field F_2[x]/(irred) of degree k, with designated subfield F_{2^f0}."""

    def __init__(self, k: int, irred: Optional[int] = None, f0: int = 1):
        if k < 1 or k > MAX_K:
            raise PreconditionFailed(f"field degree {k} outside 1..{MAX_K}")
        if f0 < 1 or k % f0:
            raise InvalidSubfield(f"f0={f0} does not divide k={k}")
        if irred is None:
            irred = smallest_irreducible(k)
        if _deg(irred) != k or not is_irreducible(irred):
            raise PreconditionFailed(f"{irred:#x} is not irreducible of degree {k}")
        self.k = k
        self.f0 = f0
        self.irred = irred
        self.q = 1 << k
        self.p = 1 << f0
        self._cache: Dict = {}
        self._log: Optional[List[int]] = None
        self._exp: Optional[List[int]] = None
        if k <= TABLE_MAX_K:
            self._build_tables()

    # identity
    def key(self) -> Tuple[int, int]:
        return (self.k, self.irred)

    def same_field(self, other: "FieldCtx") -> bool:
        return self.key() == other.key()

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.k, self.irred, self.f0) == (
            other.k, other.irred, other.f0)

    def __hash__(self):
        return hash((self.k, self.irred, self.f0))

    def __repr__(self):
        return f"FieldCtx(k={self.k}, irred={self.irred:#x}, f0={self.f0})"

    def with_f0(self, f0: int) -> "FieldCtx":
        return self if f0 == self.f0 else FieldCtx(self.k, self.irred, f0)

    def to_json(self) -> dict:
        return {"k": self.k, "f0": self.f0, "irred": format(self.irred, "x")}

    @classmethod
    def from_json(cls, d: dict) -> "FieldCtx":
        return cls(int(d["k"]), int(d["irred"], 16), int(d.get("f0", 1)))

    # element construction
    def __call__(self, v: int) -> "FieldElem":
        return FieldElem(self, v)

    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    def elements(self) -> Iterator["FieldElem"]:
        for v in range(self.q):
            yield FieldElem(self, v)

    def parse(self, s: str) -> int:
        v = int(s, 16)
        if v >> self.k:
            raise PreconditionFailed(f"hex {s} does not fit in F_2^{self.k}")
        return v

    # raw arithmetic
    def _build_tables(self):
        n = self.q - 1
        if n == 1:
            self._exp, self._log = [1, 1], [0, 0]
            return
        factors = _prime_factors(n)
        g = 2
        while True:
            if all(self._slow_pow(g, n // r) != 1 for r in factors):
                break
            g += 1
        exp = [0] * (2 * n)
        log = [0] * self.q
        x = 1
        for i in range(n):
            exp[i] = exp[i + n] = x
            log[x] = i
            x = self._slow_mul(x, g)
        self._exp, self._log = exp, log
        self.generator = g

    def _slow_mul(self, a: int, b: int) -> int:
        r, k, m = 0, self.k, self.irred
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> k:
                a ^= m
        return r

    def _slow_pow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            n >>= 1
        return r

    def mul(self, a: int, b: int) -> int:
        if self._log is None:
            return self._slow_mul(a, b)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def sq(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        if self._log is not None:
            if a == 0:
                return 1 if n == 0 else 0
            return self._exp[(self._log[a] * n) % (self.q - 1)]
        return self._slow_pow(a, n)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a binary field")
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int, j: int = 1) -> int:
        """a^(2^j); negative j gives inverse Frobenius."""
        j %= self.k
        if a == 0 or j == 0:
            return a
        if self._log is not None:
            return self._exp[(self._log[a] << j) % (self.q - 1)]
        for _ in range(j):
            a = self._slow_mul(a, a)
        return a

    def sqrt(self, a: int) -> int:
        return self.frob(a, self.k - 1)

    def trace(self, a: int, d: int = 1, src: Optional[int] = None) -> int:
        """Tr from F_{2^src} (default the whole field) down to F_{2^d}.

        With src < k the argument must already lie in F_{2^src}.
        """
        src = self.k if src is None else src
        if d < 1 or src % d or self.k % src:
            raise InvalidSubfield(f"cannot trace from degree {src} to {d}")
        t, x = 0, a
        for _ in range(src // d):
            t ^= x
            x = self.frob(x, d)
        return t

    def trace_mask(self) -> int:
        """Mask w with Tr_{q/2}(a) = parity(a & w)."""
        if "tmask" not in self._cache:
            self._cache["tmask"] = sum(self.trace(1 << i) << i for i in range(self.k))
        return self._cache["tmask"]

    def abs_trace(self, a: int) -> int:
        return parity(a & self.trace_mask())

    def linear_images(self, fn) -> List[int]:
        """Images of the polynomial basis under an F_2-linear map."""
        return [fn(1 << i) for i in range(self.k)]

    def subfield_basis(self, d: int) -> List[int]:
        """Sorted-greedy F_2-basis of the subfield F_{2^d}."""
        if d < 1 or self.k % d:
            raise InvalidSubfield(f"{d} does not divide {self.k}")
        key = ("sub", d)
        if key not in self._cache:
            ker = nullspace(self.linear_images(lambda x: self.frob(x, d) ^ x))
            elems = span_elements(ker)
            basis = F2Span()
            for v in elems:
                basis.add(v)
            self._cache[key] = (basis.basis, elems)
        return self._cache[key][0]

    def subfield(self, d: int) -> List[int]:
        """All elements of F_{2^d} inside this field, sorted."""
        self.subfield_basis(d)
        return self._cache[("sub", d)][1]

    def solve_as(self, c: int, f0: Optional[int] = None) -> Optional[int]:
        """Smallest y with y^(2^f0) + y = c, or None if Tr_{k/f0}(c) != 0."""
        f0 = self.f0 if f0 is None else f0
        if self.k % f0:
            raise InvalidSubfield(f"{f0} does not divide {self.k}")
        key = ("as", f0)
        if key not in self._cache:
            self._cache[key] = preimage_span(self.linear_images(lambda y: self.frob(y, f0) ^ y))
        y0 = self._cache[key].coords(c)
        if y0 is None:
            return None
        return min(y0 ^ s for s in self.subfield(f0))

    # array arithmetic for exhaustive scans
    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self._log is not None:
            log, exp = self._np_tables()
            out = exp[log[a] + log[b]]
            out[(a == 0) | (b == 0)] = 0
            return out
        a = a.astype(np.int64, copy=True)
        r = np.zeros_like(a)
        for i in range(self.k):
            r ^= a * ((b >> i) & 1)
            a <<= 1
            a ^= ((a >> self.k) & 1) * self.irred
        return r

    def vmul_const(self, a: np.ndarray, c: int) -> np.ndarray:
        """Multiply an array by a constant using the basis images of x -> c*x."""
        cols = self.linear_images(lambda x: self.mul(x, c))
        return _vlinear(a, cols)

    def vfrob(self, a: np.ndarray, j: int) -> np.ndarray:
        j %= self.k
        cols = self.linear_images(lambda x: self.frob(x, j))
        return _vlinear(a, cols)

    def vabs_trace(self, a: np.ndarray) -> np.ndarray:
        return _vparity(a & self.trace_mask())

    def _np_tables(self):
        if "nptab" not in self._cache:
            log = np.array(self._log, dtype=np.int64)
            exp = np.array(self._exp + [0], dtype=np.int64)
            self._cache["nptab"] = (log, exp)
        return self._cache["nptab"]


def _vlinear(a: np.ndarray, cols: List[int]) -> np.ndarray:
    out = np.zeros_like(a, dtype=np.int64)
    for i, c in enumerate(cols):
        if c:
            out ^= ((a >> i) & 1) * c
    return out


def _vparity(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64, copy=True)
    for s in (32, 16, 8, 4, 2, 1):
        a ^= a >> s
    return a & 1


@lru_cache(maxsize=None)
def default_field(k: int, f0: int = 1) -> FieldCtx:
    """F_{2^k} over the smallest irreducible polynomial, viewed over F_{2^f0}."""
    if f0 < 1 or k % f0:
        raise InvalidSubfield(f"f0={f0} does not divide k={k}")
    return FieldCtx(k, smallest_irreducible(k), f0)


def extension(ctx: FieldCtx, m: int) -> FieldCtx:
    """The default context of degree k*m carrying the same f0."""
    return ctx if m == 1 else default_field(ctx.k * m, ctx.f0)


# -- element wrapper ---------------------------------------------------------

class FieldElem:
    __slots__ = ("ctx", "v")

    def __init__(self, ctx: FieldCtx, v: int):
        if v < 0 or v >> ctx.k:
            raise PreconditionFailed(f"{v:#x} is not an element of F_2^{ctx.k}")
        self.ctx = ctx
        self.v = v

    def _other(self, o) -> int:
        if isinstance(o, FieldElem):
            if not self.ctx.same_field(o.ctx):
                raise FieldMismatch(f"{self.ctx!r} vs {o.ctx!r}")
            return o.v
        raise TypeError(f"cannot combine FieldElem with {type(o).__name__}")

    def __add__(self, o):
        return FieldElem(self.ctx, self.v ^ self._other(o))

    __sub__ = __add__
    __radd__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, o):
        return FieldElem(self.ctx, self.ctx.mul(self.v, self._other(o)))

    def __truediv__(self, o):
        return FieldElem(self.ctx, self.ctx.div(self.v, self._other(o)))

    def __pow__(self, n: int):
        return FieldElem(self.ctx, self.ctx.pow(self.v, n))

    def inv(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.v))

    def frobenius(self, j: int = 1) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.frob(self.v, j))

    def sqrt(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.sqrt(self.v))

    def trace_to(self, d: int) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.trace(self.v, d))

    def is_zero(self) -> bool:
        return self.v == 0

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __eq__(self, o):
        if isinstance(o, FieldElem):
            return self.ctx.same_field(o.ctx) and self.v == o.v
        return NotImplemented

    def __lt__(self, o):
        return self.v < self._other(o)

    def __hash__(self):
        return hash((self.ctx.k, self.v))

    def hex(self) -> str:
        return format(self.v, "x")

    def __repr__(self):
        return f"F{self.ctx.q}({self.v:#x})"


# -- module-level functions ------------------------------------------------

def frobenius(x: FieldElem, j: int = 1) -> FieldElem:
    return x.frobenius(j)


def sqrt(x: FieldElem) -> FieldElem:
    return x.sqrt()


def trace_to(x: FieldElem, sub_degree: int) -> FieldElem:
    return x.trace_to(sub_degree)


def solve_AS(c: FieldElem, f0: Optional[int] = None) -> Optional[FieldElem]:
    y = c.ctx.solve_as(c.v, f0)
    return None if y is None else FieldElem(c.ctx, y)


_EMBED_CACHE: Dict[Tuple, List[int]] = {}


def embedding_columns(src: FieldCtx, dst: FieldCtx) -> List[int]:
    """Images in dst of the powers x^i of src's generator."""
    if dst.k % src.k:
        raise InvalidSubfield(f"F_2^{src.k} does not embed in F_2^{dst.k}")
    key = (src.key(), dst.key())
    if key not in _EMBED_CACHE:
        if src.same_field(dst):
            cols = [1 << i for i in range(src.k)]
        else:
            root = None
            for r in dst.subfield(src.k):
                acc = 0  # Horner evaluation of src.irred at r
                for i in range(src.k, -1, -1):
                    acc = dst.mul(acc, r) ^ (src.irred >> i & 1)
                if acc == 0:
                    root = r
                    break
            if root is None:
                raise InvariantViolation("no root of the source polynomial in target")
            cols, t = [], 1
            for _ in range(src.k):
                cols.append(t)
                t = dst.mul(t, root)
        _EMBED_CACHE[key] = cols
    return _EMBED_CACHE[key]


def embed_int(v: int, src: FieldCtx, dst: FieldCtx) -> int:
    cols = embedding_columns(src, dst)
    out, i = 0, 0
    while v:
        if v & 1:
            out ^= cols[i]
        v >>= 1
        i += 1
    return out


def embed(x: FieldElem, src: Optional[FieldCtx] = None, dst: Optional[FieldCtx] = None) -> FieldElem:
    src = x.ctx if src is None else src
    if not src.same_field(x.ctx):
        raise FieldMismatch("element is not in the source field")
    return FieldElem(dst, embed_int(x.v, src, dst))
