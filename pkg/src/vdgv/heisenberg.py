"""The forms E_R, f_R, omega_R attached to a linearized R, the Heisenberg group
acting on y^p + y = xR(x), and the search for rational Lagrangian subspaces."""

from __future__ import annotations

import random
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from ._gf2 import F2Span, nullspace
from .errors import FieldMismatch, InvariantViolation, PreconditionFailed
from .field2k import FieldCtx, FieldElem, embed_int, extension
from .skewpoly import KernelBasis, LinPoly, f2_kernel, splitting_extension


class BiadditiveForm:
    """sum c[u, v] x^(p^u) y^(p^v), stored sparsely."""

    def __init__(self, ctx: FieldCtx, coeffs: Dict[Tuple[int, int], int]):
        self.ctx = ctx
        self.c = {uv: v for uv, v in sorted(coeffs.items()) if v}

    def eval_int(self, x: int, y: int) -> int:
        ctx, f0 = self.ctx, self.ctx.f0
        xs: Dict[int, int] = {}
        ys: Dict[int, int] = {}
        acc = 0
        for (u, v), c in self.c.items():
            if u not in xs:
                xs[u] = ctx.frob(x, f0 * u)
            if v not in ys:
                ys[v] = ctx.frob(y, f0 * v)
            acc ^= ctx.mul(c, ctx.mul(xs[u], ys[v]))
        return acc

    def __call__(self, x: FieldElem, y: FieldElem) -> FieldElem:
        if not x.ctx.same_field(y.ctx):
            raise FieldMismatch("arguments in different fields")
        form = self if x.ctx.same_field(self.ctx) else self.embed(x.ctx)
        return FieldElem(x.ctx, form.eval_int(x.v, y.v))

    def embed(self, dst: FieldCtx) -> "BiadditiveForm":
        dst = dst.with_f0(self.ctx.f0)
        return BiadditiveForm(dst, {uv: embed_int(c, self.ctx, dst) for uv, c in self.c.items()})

    def transpose(self) -> "BiadditiveForm":
        return BiadditiveForm(self.ctx, {(v, u): c for (u, v), c in self.c.items()})

    def __add__(self, other: "BiadditiveForm") -> "BiadditiveForm":
        out = dict(self.c)
        for uv, c in other.c.items():
            out[uv] = out.get(uv, 0) ^ c
        return BiadditiveForm(self.ctx, out)

    def __eq__(self, other):
        return isinstance(other, BiadditiveForm) and self.ctx.same_field(other.ctx) and self.c == other.c

    def in_x(self, y: int) -> LinPoly:
        """x -> form(x, y) as a linearized polynomial in x."""
        ctx, f0 = self.ctx, self.ctx.f0
        n = max((u for u, _ in self.c), default=-1) + 1
        cs = [0] * n
        for (u, v), c in self.c.items():
            cs[u] ^= ctx.mul(c, ctx.frob(y, f0 * v))
        return LinPoly(ctx, cs)

    def to_json(self) -> list:
        return [[u, v, format(c, "x")] for (u, v), c in self.c.items()]

    def __repr__(self):
        return "BiadditiveForm(" + " + ".join(
            f"{c:#x}*x^(p^{u})*y^(p^{v})" for (u, v), c in self.c.items()) + ")"


def _bivariate(terms: Iterable[Tuple[int, int, int]]) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for dx, dy, c in terms:
        out[(dx, dy)] = out.get((dx, dy), 0) ^ c
    return {k: v for k, v in out.items() if v}


def build_forms(R: LinPoly) -> Tuple[LinPoly, BiadditiveForm, BiadditiveForm]:
    """E_R, f_R and omega_R = f_R + f_R^T for R of degree p^e, e >= 1."""
    e = R.e
    if e < 1:
        raise PreconditionFailed("R must have degree p^e with e >= 1")
    ctx, f0, p = R.ctx, R.ctx.f0, R.p
    a = R.coeffs
    fr = lambda v, j: ctx.frob(v, f0 * j)

    E = [0] * (2 * e + 1)
    for i, ai in enumerate(a):
        E[i + e] ^= fr(ai, e)
        E[e - i] ^= fr(ai, e - i)
    E_R = LinPoly(ctx, E)

    c: Dict[Tuple[int, int], int] = {}
    for i in range(e):
        for j in range(e - i):
            # (a_i x^(p^i) y)^(p^j)
            c[(i + j, j)] = c.get((i + j, j), 0) ^ fr(a[i], j)
        for k, ak in enumerate(a):
            # (x R(y))^(p^i)
            c[(i, i + k)] = c.get((i, i + k), 0) ^ fr(ak, i)
    f_R = BiadditiveForm(ctx, c)
    omega = f_R + f_R.transpose()

    # exact check of f^p + f = x^(p^e) E_R(y) + x R(y) + y R(x)
    lhs = _bivariate([(p ** (u + 1), p ** (v + 1), fr(cv, 1)) for (u, v), cv in f_R.c.items()]
                     + [(p ** u, p ** v, cv) for (u, v), cv in f_R.c.items()])
    rhs = _bivariate([(p ** e, p ** j, ej) for j, ej in enumerate(E_R.coeffs)]
                     + [(1, p ** j, aj) for j, aj in enumerate(a)]
                     + [(p ** j, 1, aj) for j, aj in enumerate(a)])
    if lhs != rhs:
        raise InvariantViolation("f_R does not satisfy its defining identity")
    return E_R, f_R, omega


class SymplecticSpace:
    def __init__(self, basis: KernelBasis, gram: List[List[int]], m: int):
        self.basis = basis
        self.gram = gram
        self.m = m

    @property
    def ambient(self) -> FieldCtx:
        return self.basis.ambient

    @property
    def dim(self) -> int:
        return self.basis.dim


def _rank(ctx: FieldCtx, rows: List[List[int]]) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ctx.inv(rows[rank][col])
        rows[rank] = [ctx.mul(inv, v) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [v ^ ctx.mul(f, w) for v, w in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def v_space(R: LinPoly, base_ctx: Optional[FieldCtx] = None, cap: int = 24) -> SymplecticSpace:
    """V_R = Ker E_R inside the smallest F_{q^m} containing it, with its Gram matrix."""
    base = R.ctx if base_ctx is None else base_ctx
    if not base.same_field(R.ctx):
        R = R.embed(base)
    E_R, _, omega = build_forms(R)
    m = splitting_extension(E_R, base, cap)
    amb = extension(base, m)
    V = KernelBasis.from_f2(amb, f2_kernel(E_R, amb))
    if V.dim != 2 * R.e:
        raise InvariantViolation(f"dim V_R = {V.dim}, expected {2 * R.e}")
    om = omega.embed(amb)
    gram = [[om.eval_int(x, y) for y in V.basis] for x in V.basis]
    for i, row in enumerate(gram):
        if row[i]:
            raise InvariantViolation("Gram matrix is not alternating")
        for g in row:
            if amb.frob(g, amb.f0) != g:
                raise InvariantViolation("omega_R takes a value outside F_p on V_R")
    if _rank(amb, gram) != len(gram):
        raise InvariantViolation("omega_R is degenerate on V_R")
    return SymplecticSpace(V, gram, m)


class HElem(NamedTuple):
    a: int
    b: int

    def to_json(self) -> dict:
        return {"a": format(self.a, "x"), "b": format(self.b, "x")}


class HeisenbergGroup:
    """H_R realised over an ambient field: pairs (a, b) with a in V_R and
    b^p + b = a R(a), under (a,b)(a',b') = (a+a', b+b'+f_R(a,a'))."""

    def __init__(self, R: LinPoly, ambient: Optional[FieldCtx] = None):
        ambient = R.ctx if ambient is None else ambient.with_f0(R.ctx.f0)
        self.R0 = R
        self.E0, self.f0_form, self.omega0 = build_forms(R)
        self.ambient = ambient
        self.R = R.embed(ambient)
        self.E = self.E0.embed(ambient)
        self.f = self.f0_form.embed(ambient)
        self.omega = self.omega0.embed(ambient)

    @property
    def p(self) -> int:
        return self.ambient.p

    def identity(self) -> HElem:
        return HElem(0, 0)

    def contains(self, g: HElem) -> bool:
        ctx = self.ambient
        if self.E.eval_int(g.a):
            return False
        return ctx.frob(g.b, ctx.f0) ^ g.b == ctx.mul(g.a, self.R.eval_int(g.a))

    def _check(self, *gs: HElem):
        for g in gs:
            if not self.contains(g):
                raise PreconditionFailed(f"{g} is not in H_R")

    def lift(self, a: int) -> Optional[HElem]:
        """(a, b) with the smallest admissible b, if one exists in the ambient field."""
        b = self.ambient.solve_as(self.ambient.mul(a, self.R.eval_int(a)))
        return None if b is None else HElem(a, b)

    def mul(self, g: HElem, h: HElem) -> HElem:
        self._check(g, h)
        return HElem(g.a ^ h.a, g.b ^ h.b ^ self.f.eval_int(g.a, h.a))

    def inv(self, g: HElem) -> HElem:
        self._check(g)
        return HElem(g.a, g.b ^ self.f.eval_int(g.a, g.a))

    def commutator(self, g: HElem, h: HElem) -> HElem:
        self._check(g, h)
        return HElem(0, self.omega.eval_int(g.a, h.a))

    def on_curve(self, pt: Tuple[int, int]) -> bool:
        x, y = pt
        ctx = self.ambient
        return ctx.frob(y, ctx.f0) ^ y == ctx.mul(x, self.R.eval_int(x))

    def act(self, pt: Tuple[int, int], g: HElem) -> Tuple[int, int]:
        if not self.on_curve(pt):
            raise PreconditionFailed(f"{pt} is not on the curve")
        self._check(g)
        x, y = pt
        return x ^ g.a, y ^ g.b ^ self.f.eval_int(x, g.a)

    def preimage(self, A_bar: KernelBasis) -> List[HElem]:
        """pi^{-1}(A_bar) inside the ambient field; raises if some fibre is not rational."""
        out = []
        fp = self.ambient.subfield(self.ambient.f0)
        for a in A_bar.elements():
            a = embed_int(a, A_bar.ambient, self.ambient)
            g = self.lift(a)
            if g is None:
                raise PreconditionFailed(f"fibre over {a:#x} is not rational")
            out.extend(HElem(a, g.b ^ lam) for lam in fp)
        return out


def h_mul(G: HeisenbergGroup, g: HElem, h: HElem) -> HElem:
    return G.mul(g, h)


def h_inv(G: HeisenbergGroup, g: HElem) -> HElem:
    return G.inv(g)


def h_commutator(G: HeisenbergGroup, g: HElem, h: HElem) -> HElem:
    return G.commutator(g, h)


def act(G: HeisenbergGroup, pt: Tuple[int, int], g: HElem) -> Tuple[int, int]:
    return G.act(pt, g)


def _psi_images(R: LinPoly, vectors: List[int]) -> List[int]:
    ctx = R.ctx
    return [ctx.trace(ctx.mul(v, R.eval_int(v)), ctx.f0) for v in vectors]


def rational_isotropic_candidates(R: LinPoly, base_ctx: Optional[FieldCtx] = None) -> KernelBasis:
    """{a in V_R cap F_q : Tr_{q/p}(a R(a)) = 0} as an F_p-subspace of F_q."""
    base = R.ctx if base_ctx is None else base_ctx
    if not base.same_field(R.ctx):
        R = R.embed(base)
    E_R, _, _ = build_forms(R)
    K = f2_kernel(E_R, base)
    combos = nullspace(_psi_images(R, K))
    vecs = []
    for mask in combos:
        v = 0
        for i, b in enumerate(K):
            if mask >> i & 1:
                v ^= b
        vecs.append(v)
    return KernelBasis.from_f2(base, vecs)


def find_lagrangian(R: LinPoly, base_ctx: Optional[FieldCtx] = None,
                    rng: Optional[random.Random] = None) -> Optional[KernelBasis]:
    """An e-dimensional omega_R-isotropic subspace of the rational candidates.

    Candidates are swept in increasing order (or in rng order when given),
    each one joining the current space if it is new and orthogonal to it. The
    sweep ends with a maximal isotropic subspace; since all maximal isotropic
    subspaces of an alternating space have the same dimension, a shortfall
    means no rational Lagrangian exists, and no backtracking is needed.
    """
    base = R.ctx if base_ctx is None else base_ctx
    if not base.same_field(R.ctx):
        R = R.embed(base)
    e = R.e
    _, _, omega = build_forms(R)
    L = rational_isotropic_candidates(R, base)
    cands = L.elements()
    if rng is not None:
        rng.shuffle(cands)
    chosen: List[int] = []
    span = F2Span()
    lam = base.subfield_basis(base.f0)
    for v in cands:
        if len(chosen) == e:
            break
        if v == 0 or v in span:
            continue
        if any(omega.eval_int(v, w) for w in chosen):
            continue
        chosen.append(v)
        for l in lam:
            span.add(base.mul(l, v))
    if len(chosen) < e:
        return None
    return KernelBasis(base, chosen)


def is_HR_rational(R: LinPoly, base_ctx: Optional[FieldCtx] = None) -> bool:
    """V_R lies in F_q and every fibre of H_R -> V_R is rational."""
    base = R.ctx if base_ctx is None else base_ctx
    if not base.same_field(R.ctx):
        R = R.embed(base)
    E_R, _, _ = build_forms(R)
    K = f2_kernel(E_R, base)
    if len(K) != 2 * R.e * base.f0:
        return False
    return not any(_psi_images(R, K))


def is_rational_lagrangian(R: LinPoly, A_bar: KernelBasis) -> bool:
    """A_bar in F_q, inside V_R, isotropic, of dimension e, with rational fibres."""
    ctx = A_bar.ambient
    Rq = R.embed(ctx)
    E_R, _, omega = build_forms(Rq)
    if A_bar.dim != R.e:
        return False
    for a in A_bar.f2_basis:
        if E_R.eval_int(a) or ctx.trace(ctx.mul(a, Rq.eval_int(a)), ctx.f0):
            return False
    return not any(omega.eval_int(x, y) for x in A_bar.basis for y in A_bar.basis)
