"""Linearized polynomials under composition, plain sparse polynomials, and
F_p-subspaces of binary fields.

A LinPoly over a context with subfield degree f0 represents
sum a_i x^(p^i) with p = 2^f0. Composition is the (non-commutative) ring
product; division is Euclidean on the right or left.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ._gf2 import F2Span, nullspace, span_elements
from .errors import (FieldMismatch, InvariantViolation, NotSeparable, PreconditionFailed,
                     SplitCapExceeded)
from .field2k import MAX_K, FieldCtx, FieldElem, embed_int, extension

Scalar = Union[int, FieldElem]


def _raw(ctx: FieldCtx, c: Scalar) -> int:
    if isinstance(c, FieldElem):
        if not c.ctx.same_field(ctx):
            raise FieldMismatch("coefficient lives in a different field")
        return c.v
    return c


class LinPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[Scalar] = ()):
        cs = [_raw(ctx, c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.ctx = ctx
        self.coeffs: Tuple[int, ...] = tuple(cs)

    @classmethod
    def x(cls, ctx: FieldCtx) -> "LinPoly":
        return cls(ctx, [1])

    @classmethod
    def monomial(cls, ctx: FieldCtx, i: int, c: Scalar = 1) -> "LinPoly":
        return cls(ctx, [0] * i + [c])

    @classmethod
    def frobenius_minus_id(cls, ctx: FieldCtx, n: int) -> "LinPoly":
        """x^(p^n) + x; for n = k/f0 this is x^q + x."""
        return cls(ctx, [1] + [0] * (n - 1) + [1]) if n else cls(ctx)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def e(self) -> int:
        """log_p of the degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return self.p ** self.e if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_separable(self) -> bool:
        return bool(self.coeffs) and self.coeffs[0] != 0

    def coeff(self, i: int) -> FieldElem:
        return FieldElem(self.ctx, self.coeffs[i] if i < len(self.coeffs) else 0)

    def _check(self, other: "LinPoly"):
        if not self.ctx.same_field(other.ctx) or self.ctx.f0 != other.ctx.f0:
            raise FieldMismatch("linearized polynomials over different rings")

    def __add__(self, other: "LinPoly") -> "LinPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return LinPoly(self.ctx, [x ^ y for x, y in zip(a, b)])

    __sub__ = __add__

    def __eq__(self, other):
        if not isinstance(other, LinPoly):
            return NotImplemented
        return (self.ctx.same_field(other.ctx) and self.ctx.f0 == other.ctx.f0
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ctx.key(), self.ctx.f0, self.coeffs))

    def __repr__(self):
        terms = [f"{c:#x}*x^(p^{i})" for i, c in enumerate(self.coeffs) if c]
        return f"LinPoly[p={self.p}](" + (" + ".join(terms) or "0") + ")"

    def scale(self, c: Scalar) -> "LinPoly":
        """c * L(x), i.e. (c x) o L."""
        c = _raw(self.ctx, c)
        return LinPoly(self.ctx, [self.ctx.mul(c, a) for a in self.coeffs])

    def frobenius_power(self, j: int = 1) -> "LinPoly":
        """L(x)^(p^j) = x^(p^j) o L."""
        f = self.ctx.f0 * j
        return LinPoly(self.ctx, [0] * j + [self.ctx.frob(a, f) for a in self.coeffs])

    def eval_int(self, x: int) -> int:
        ctx, f0 = self.ctx, self.ctx.f0
        acc = 0
        for a in self.coeffs:
            if a:
                acc ^= ctx.mul(a, x)
            x = ctx.frob(x, f0)
        return acc

    def __call__(self, x: Scalar) -> Scalar:
        return eval(self, x)

    def embed(self, dst: FieldCtx) -> "LinPoly":
        if dst.same_field(self.ctx) and dst.f0 == self.ctx.f0:
            return self
        if dst.f0 != self.ctx.f0:
            dst = dst.with_f0(self.ctx.f0)
        return LinPoly(dst, [embed_int(a, self.ctx, dst) for a in self.coeffs])

    def to_plain(self) -> "PlainPoly":
        return PlainPoly(self.ctx, {self.p ** i: a for i, a in enumerate(self.coeffs)})

    def to_json(self) -> dict:
        return {"field": self.ctx.to_json(), "coeffs": [format(a, "x") for a in self.coeffs]}

    @classmethod
    def from_json(cls, d: dict) -> "LinPoly":
        ctx = FieldCtx.from_json(d["field"])
        return cls(ctx, [ctx.parse(h) for h in d["coeffs"]])


def eval(L: LinPoly, x: Scalar) -> Scalar:  # noqa: A001 - mirrors the operation name
    """sum a_i x^(p^i); coefficients are embedded if x lives in an extension."""
    if isinstance(x, FieldElem):
        if not x.ctx.same_field(L.ctx):
            L = L.embed(x.ctx)
        return FieldElem(x.ctx, L.eval_int(x.v))
    return L.eval_int(x)


def compose(L1: LinPoly, L2: LinPoly) -> LinPoly:
    """L1 o L2, using (a x^(p^i)) o (b x^(p^j)) = a b^(p^i) x^(p^(i+j))."""
    L1._check(L2)
    ctx, f0 = L1.ctx, L1.ctx.f0
    if not L1.coeffs or not L2.coeffs:
        return LinPoly(ctx)
    out = [0] * (len(L1.coeffs) + len(L2.coeffs) - 1)
    for i, a in enumerate(L1.coeffs):
        if not a:
            continue
        for j, b in enumerate(L2.coeffs):
            if b:
                out[i + j] ^= ctx.mul(a, ctx.frob(b, f0 * i))
    return LinPoly(ctx, out)


def right_divide(L: LinPoly, M: LinPoly) -> Tuple[LinPoly, LinPoly]:
    """(Q, Rem) with L = Q o M + Rem and deg Rem < deg M."""
    L._check(M)
    if M.is_zero():
        raise ZeroDivisionError("division by the zero linearized polynomial")
    ctx, f0, d = L.ctx, L.ctx.f0, M.e
    rem = list(L.coeffs)
    quo = [0] * max(len(rem) - d, 0)
    for n in range(len(rem) - 1, d - 1, -1):
        c = rem[n]
        if not c:
            continue
        i = n - d
        qi = ctx.div(c, ctx.frob(M.coeffs[d], f0 * i))
        quo[i] = qi
        for j, m in enumerate(M.coeffs):
            if m:
                rem[i + j] ^= ctx.mul(qi, ctx.frob(m, f0 * i))
    return LinPoly(ctx, quo), LinPoly(ctx, rem[:d])


def left_divide(L: LinPoly, M: LinPoly) -> Tuple[LinPoly, LinPoly]:
    """(Q, Rem) with L = M o Q + Rem; quotient coefficients need p^(-d)-th roots."""
    L._check(M)
    if M.is_zero():
        raise ZeroDivisionError("division by the zero linearized polynomial")
    ctx, f0, d = L.ctx, L.ctx.f0, M.e
    rem = list(L.coeffs)
    quo = [0] * max(len(rem) - d, 0)
    md = M.coeffs[d]
    for n in range(len(rem) - 1, d - 1, -1):
        c = rem[n]
        if not c:
            continue
        i = n - d
        qi = ctx.frob(ctx.div(c, md), -f0 * d)
        quo[i] = qi
        for j, m in enumerate(M.coeffs):
            if m:
                rem[i + j] ^= ctx.mul(m, ctx.frob(qi, f0 * j))
    return LinPoly(ctx, quo), LinPoly(ctx, rem[:d])


def adjoint(L: LinPoly, target_ctx: Optional[FieldCtx] = None) -> LinPoly:
    """The trace-dual t -> sum (b_i t)^(p^-i), as a linearized polynomial over F_q.

    On F_q the p^-i power equals the p^(N-i) power with N = k/f0, so the
    result has at most N coefficients.
    """
    ctx = L.ctx if target_ctx is None else target_ctx
    if not ctx.same_field(L.ctx):
        L = L.embed(ctx)
    f0 = L.ctx.f0
    n = ctx.k // f0
    out = [0] * n
    for i, b in enumerate(L.coeffs):
        if b:
            out[(-i) % n] ^= ctx.frob(b, -f0 * i)
    return LinPoly(L.ctx, out)


# -- plain sparse polynomials ------------------------------------------------

class PlainPoly:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms: Union[Dict[int, Scalar], Iterable] = ()):
        items = terms.items() if isinstance(terms, dict) else terms
        t: Dict[int, int] = {}
        for d, c in items:
            c = _raw(ctx, c)
            if d < 0:
                raise PreconditionFailed("negative degree")
            t[d] = t.get(d, 0) ^ c
        self.ctx = ctx
        self.terms = {d: c for d, c in sorted(t.items()) if c}

    @classmethod
    def monomial(cls, ctx: FieldCtx, d: int, c: Scalar = 1) -> "PlainPoly":
        return cls(ctx, {d: c})

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, d: int) -> FieldElem:
        return FieldElem(self.ctx, self.terms.get(d, 0))

    def _check(self, other: "PlainPoly"):
        if not self.ctx.same_field(other.ctx):
            raise FieldMismatch("polynomials over different fields")

    def __add__(self, other: "PlainPoly") -> "PlainPoly":
        self._check(other)
        t = dict(self.terms)
        for d, c in other.terms.items():
            t[d] = t.get(d, 0) ^ c
        return PlainPoly(self.ctx, t)

    __sub__ = __add__

    def __mul__(self, other: "PlainPoly") -> "PlainPoly":
        self._check(other)
        mul = self.ctx.mul
        t: Dict[int, int] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                t[d1 + d2] = t.get(d1 + d2, 0) ^ mul(c1, c2)
        return PlainPoly(self.ctx, t)

    def scale(self, c: Scalar) -> "PlainPoly":
        c = _raw(self.ctx, c)
        return PlainPoly(self.ctx, {d: self.ctx.mul(c, a) for d, a in self.terms.items()})

    def shift(self, n: int) -> "PlainPoly":
        """x^n * P(x)."""
        return PlainPoly(self.ctx, {d + n: a for d, a in self.terms.items()})

    def frobenius_power(self, j: int) -> "PlainPoly":
        """P(x)^(2^j), computed termwise since squaring is additive."""
        return PlainPoly(self.ctx, {d << j: self.ctx.frob(a, j) for d, a in self.terms.items()})

    def p_power(self) -> "PlainPoly":
        return self.frobenius_power(self.ctx.f0)

    def __eq__(self, other):
        if not isinstance(other, PlainPoly):
            return NotImplemented
        return self.ctx.same_field(other.ctx) and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx.key(), tuple(self.terms.items())))

    def __repr__(self):
        return "PlainPoly(" + (" + ".join(f"{c:#x}*x^{d}" for d, c in self.terms.items()) or "0") + ")"

    def eval_int(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        for d, c in self.terms.items():
            acc ^= ctx.mul(c, ctx.pow(x, d))
        return acc

    def __call__(self, x: Scalar) -> Scalar:
        if isinstance(x, FieldElem):
            P = self if x.ctx.same_field(self.ctx) else self.embed(x.ctx)
            return FieldElem(x.ctx, P.eval_int(x.v))
        return self.eval_int(x)

    def compose_linear(self, L: LinPoly) -> "PlainPoly":
        """P(L(x)). Powers of L(x) are built from its 2^j-th powers, which are
        again sparse because L is additive."""
        if not self.ctx.same_field(L.ctx):
            raise FieldMismatch("polynomials over different fields")
        base = L.to_plain()
        frob_pows: Dict[int, PlainPoly] = {}
        out = PlainPoly(self.ctx)
        for d, c in self.terms.items():
            term = PlainPoly.monomial(self.ctx, 0, 1)
            j = 0
            while d >> j:
                if d >> j & 1:
                    if j not in frob_pows:
                        frob_pows[j] = base.frobenius_power(j)
                    term = term * frob_pows[j]
                j += 1
            out = out + term.scale(c)
        return out

    def embed(self, dst: FieldCtx) -> "PlainPoly":
        return PlainPoly(dst, {d: embed_int(c, self.ctx, dst) for d, c in self.terms.items()})

    def to_json(self) -> list:
        return [[d, format(c, "x")] for d, c in self.terms.items()]

    @classmethod
    def from_json(cls, ctx: FieldCtx, data: list) -> "PlainPoly":
        return cls(ctx, [(int(d), ctx.parse(h)) for d, h in data])


def artin_schreier_reduce(P: PlainPoly) -> Tuple[PlainPoly, PlainPoly]:
    """Delta with Delta(0) = 0 and Delta^p + Delta + P = residue, where the
    residue has no monomial of positive degree divisible by p.

    The highest term c x^d with p | d is traded for c^(1/p) x^(d/p), which
    enters Delta and the work polynomial. P ~ 0 exactly when the residue is 0
    (for P without constant term).
    """
    ctx, f0 = P.ctx, P.ctx.f0
    p = ctx.p
    work = dict(P.terms)
    delta: Dict[int, int] = {}
    while True:
        ds = [d for d, c in work.items() if c and d > 0 and d % p == 0]
        if not ds:
            break
        d = max(ds)
        c = ctx.frob(work.pop(d), -f0)
        delta[d // p] = delta.get(d // p, 0) ^ c
        work[d // p] = work.get(d // p, 0) ^ c
    Delta = PlainPoly(ctx, delta)
    residue = PlainPoly(ctx, work)
    if Delta.p_power() + Delta + P != residue:
        raise InvariantViolation("Artin-Schreier reduction lost track of a term")
    return Delta, residue


# -- F_p-subspaces -------------------------------------------------------------

class KernelBasis:
    """An F_p-subspace of the field `ambient`, with an F_p-basis sorted by encoding.

    f2_basis spans the same space over F_2 (the products lambda_j * b_i for an
    F_2-basis lambda_j of F_p).
    """

    def __init__(self, ambient: FieldCtx, basis: Sequence[int]):
        self.ambient = ambient
        self.basis: Tuple[int, ...] = tuple(sorted(basis))
        lam = ambient.subfield_basis(ambient.f0)
        self._lambdas = lam
        self._span = F2Span()
        f2 = []
        for b in self.basis:
            for l in lam:
                v = ambient.mul(l, b)
                f2.append(v)
                if not self._span.add(v, 1 << (len(f2) - 1)):
                    raise InvariantViolation("basis is not F_p-independent")
        self.f2_basis = f2

    @classmethod
    def from_f2(cls, ambient: FieldCtx, f2_vectors: Iterable[int]) -> "KernelBasis":
        """Greedy F_p-basis of an F_p-stable F_2-subspace: repeatedly take the
        smallest element not yet covered and absorb its F_p-multiples."""
        f2 = F2Span(f2_vectors)
        lam = ambient.subfield_basis(ambient.f0)
        covered = F2Span()
        basis = []
        for v in span_elements(f2.basis):
            if v and v not in covered:
                basis.append(v)
                for l in lam:
                    w = ambient.mul(l, v)
                    if w not in f2:
                        raise InvariantViolation("subspace is not F_p-stable")
                    covered.add(w)
            if len(covered) == len(f2):
                break
        return cls(ambient, basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def size(self) -> int:
        return self.ambient.p ** self.dim

    def elements(self) -> List[int]:
        return span_elements(self.f2_basis)

    def __contains__(self, v) -> bool:
        if isinstance(v, FieldElem):
            v = v.v
        return v in self._span

    def coords(self, v: int) -> Optional[List[int]]:
        """F_p-coordinates (as ambient elements) of v in the basis."""
        tag = self._span.coords(v)
        if tag is None:
            return None
        n = len(self._lambdas)
        out = []
        for i in range(self.dim):
            c = 0
            for j, l in enumerate(self._lambdas):
                if tag >> (i * n + j) & 1:
                    c ^= l
            out.append(c)
        return out

    def basis_elems(self) -> List[FieldElem]:
        return [FieldElem(self.ambient, b) for b in self.basis]

    def image(self, fn) -> "KernelBasis":
        """Image of the space under an F_p-linear map given on raw ints."""
        return KernelBasis.from_f2(self.ambient, [fn(v) for v in self.f2_basis])

    def to_json(self) -> dict:
        return {"field": self.ambient.to_json(), "basis": [format(b, "x") for b in self.basis]}

    def __repr__(self):
        return f"KernelBasis(F_{self.ambient.q}, [{', '.join(hex(b) for b in self.basis)}])"


def f2_kernel(L: LinPoly, ambient: FieldCtx) -> List[int]:
    """F_2-basis of the kernel of L acting on the whole of `ambient`."""
    Le = L.embed(ambient)
    return nullspace(ambient.linear_images(Le.eval_int))


def kernel_basis(L: LinPoly, m: int = 1) -> KernelBasis:
    """F_p-basis of Ker L inside F_{q^m}."""
    if not L.is_separable():
        raise NotSeparable("kernel_basis needs a nonzero linear coefficient")
    ambient = extension(L.ctx, m)
    return KernelBasis.from_f2(ambient, f2_kernel(L, ambient))


def splitting_extension(L: LinPoly, base: Optional[FieldCtx] = None, cap: int = 24) -> int:
    """Smallest m with Ker L of full dimension e inside F_{q^m}."""
    if not L.is_separable():
        raise NotSeparable("splitting_extension needs a separable polynomial")
    base = L.ctx if base is None else base
    if not base.same_field(L.ctx):
        L = L.embed(base)
    want = L.e * base.f0
    m = 1
    while m <= cap and base.k * m <= MAX_K:
        if len(f2_kernel(L, extension(base, m))) == want:
            return m
        m += 1
    raise SplitCapExceeded(f"kernel of degree-p^{L.e} polynomial not split within cap",
                           cap=cap, max_k=MAX_K)
