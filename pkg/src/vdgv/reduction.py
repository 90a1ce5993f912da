"""Quotienting y^p + y = xR(x) down to a binomial curve y^p + y = x^(p+1) + s0 x^2.

Given a rational Lagrangian A_bar, each step divides out the line spanned by
one element of the isotropic kernel U_bar and lowers the degree of R by p.
The result records the polynomials that describe the covering C_R -> C_S and
the data needed to split A as W_2(F_p) x U_bar.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ._gf2 import F2Span, nullspace
from .errors import InvariantViolation, PreconditionFailed, ResidueNonzero
from .field2k import FieldCtx, FieldElem
from .heisenberg import BiadditiveForm, HElem, HeisenbergGroup, build_forms, is_rational_lagrangian
from .skewpoly import (KernelBasis, LinPoly, PlainPoly, artin_schreier_reduce, compose,
                       right_divide)


@dataclass
class ReductionData:
    ctx: FieldCtx
    R: LinPoly
    A_bar: KernelBasis
    U_basis: KernelBasis
    f_U: LinPoly
    S: LinPoly
    Delta: PlainPoly
    F_A: LinPoly
    alpha: int
    a_poly: LinPoly
    pivot_a0: int

    @property
    def s0(self) -> int:
        return self.S.coeffs[0] if self.S.coeffs else 0

    @property
    def e(self) -> int:
        return self.R.e

    def to_json(self) -> dict:
        return {
            "f_U": self.f_U.to_json()["coeffs"],
            "S": self.S.to_json()["coeffs"],
            "Delta": self.Delta.to_json(),
            "F_A": self.F_A.to_json()["coeffs"],
            "alpha": format(self.alpha, "x"),
            "a_poly": self.a_poly.to_json()["coeffs"],
            "pivot_a0": format(self.pivot_a0, "x"),
            "A_bar": [format(b, "x") for b in self.A_bar.basis],
            "U_bar": [format(b, "x") for b in self.U_basis.basis],
        }


def ubar(R: LinPoly, A_bar: KernelBasis, f_R: Optional[BiadditiveForm] = None) -> KernelBasis:
    """{a in A_bar : f_R(a, a) = 0}; a -> f_R(a,a) is additive on an isotropic space."""
    ctx = A_bar.ambient
    if f_R is None:
        f_R = build_forms(R)[1]
    f_R = f_R.embed(ctx) if not f_R.ctx.same_field(ctx) else f_R
    vals = [f_R.eval_int(a, a) for a in A_bar.f2_basis]
    for v in vals:
        if ctx.frob(v, ctx.f0) != v:
            raise InvariantViolation("f_R(a, a) left F_p on a Lagrangian")
    vecs = []
    for mask in nullspace(vals):
        v = 0
        for i, b in enumerate(A_bar.f2_basis):
            if mask >> i & 1:
                v ^= b
        vecs.append(v)
    U = KernelBasis.from_f2(ctx, vecs)
    if U.dim != A_bar.dim - 1:
        raise InvariantViolation(f"dim U_bar = {U.dim}, expected {A_bar.dim - 1}")
    return U


def _identity_holds(R: LinPoly, f: LinPoly, S: LinPoly, Delta: PlainPoly) -> bool:
    """Delta^p + Delta == x R(x) + f(x) S(f(x)) as polynomials."""
    return Delta.p_power() + Delta == _covering_rhs(R, f, S)


def step_quotient(R: LinPoly, g: HElem, f_R: Optional[BiadditiveForm] = None
                  ) -> Tuple[LinPoly, LinPoly, PlainPoly]:
    """Quotient by the line F_p a for (a, b) in H_R with f_R(a, a) = 0.

    Returns f = x^p + a^(p-1) x, P_b with deg P_b = deg R / p, and
    Delta_b = (x/a)(b x/a + f_R(x, a)), satisfying
    Delta_b^p + Delta_b = x R(x) + f(x) P_b(f(x)).
    """
    ctx, p, f0 = R.ctx, R.p, R.ctx.f0
    a, b = g.a, g.b
    if a == 0:
        raise PreconditionFailed("step_quotient needs a != 0")
    if f_R is None:
        f_R = build_forms(R)[1]
    if f_R.eval_int(a, a):
        raise PreconditionFailed("f_R(a, a) must vanish")
    if ctx.frob(b, f0) ^ b != ctx.mul(a, R.eval_int(a)):
        raise PreconditionFailed("(a, b) is not in H_R")
    ia = ctx.inv(a)
    f = LinPoly(ctx, [ctx.pow(a, p - 1), 1])
    fx_a = f_R.in_x(a)  # x -> f_R(x, a)
    Delta_b = (PlainPoly(ctx, {2: ctx.mul(b, ctx.sq(ia))})
               + fx_a.to_plain().shift(1).scale(ia))
    ia_p = ctx.pow(ia, p)
    inner = (R.scale(a)
             + LinPoly(ctx, [0, ctx.mul(ctx.pow(ia, p - 1), R.eval_int(a))])
             + LinPoly(ctx, [ctx.mul(b, ia), ctx.mul(b, ia_p)])
             + fx_a)
    P = inner.scale(ia_p)
    P_b, rem = right_divide(P, f)
    if not rem.is_zero():
        raise InvariantViolation("quotient step: division by f is not exact")
    if P_b.e != R.e - 1:
        raise InvariantViolation("quotient step: unexpected degree")
    if not _identity_holds(R, f, P_b, Delta_b):
        raise InvariantViolation("quotient step: Artin-Schreier identity fails")
    return f, P_b, Delta_b


def _pick(elements: List[int], rng: Optional[random.Random]) -> int:
    return elements[0] if rng is None else rng.choice(elements)


def _recurse(R: LinPoly, A_bar: KernelBasis, rng) -> Tuple[LinPoly, LinPoly, PlainPoly]:
    ctx = R.ctx
    if R.e == 1:
        return LinPoly.x(ctx), R, PlainPoly(ctx)
    _, f_R, _ = build_forms(R)
    U = ubar(R, A_bar, f_R)
    a = _pick([u for u in U.elements() if u], rng)
    b = ctx.solve_as(ctx.mul(a, R.eval_int(a)))
    if b is None:
        raise InvariantViolation("fibre over a U_bar element is not rational")
    f, P_b, Delta_b = step_quotient(R, HElem(a, b), f_R)
    A_next = A_bar.image(f.eval_int)
    if A_next.dim != A_bar.dim - 1:
        raise InvariantViolation("image of A_bar has the wrong dimension")
    g, S, Delta_1 = _recurse(P_b, A_next, rng)
    return compose(g, f), S, Delta_1.compose_linear(f) + Delta_b


def reduce_to_binomial(R: LinPoly, A_bar: KernelBasis,
                       rng: Optional[random.Random] = None) -> ReductionData:
    """Run the quotient chain and normalise so that S = x^p + s0 x and f_U(A_bar) = F_p.

    With rng unset every choice is the smallest admissible one; an rng picks
    the recursion pivots, alpha and the pivot a0 at random instead.
    """
    ctx = A_bar.ambient
    R = R.embed(ctx)
    p, f0 = ctx.p, ctx.f0
    if R.e < 1:
        raise PreconditionFailed("R must have degree at least p")
    if not is_rational_lagrangian(R, A_bar):
        raise PreconditionFailed("A_bar is not a rational Lagrangian for R")

    f_U, S, Delta = _recurse(R, A_bar, rng)

    image = A_bar.image(f_U.eval_int)
    if image.dim != 1:
        raise InvariantViolation("f_U(A_bar) is not one-dimensional")
    eta = image.basis[0]
    f_U = f_U.scale(ctx.inv(eta))
    s1 = ctx.mul(S.coeffs[1], ctx.pow(eta, p + 1))
    s0 = ctx.mul(S.coeffs[0] if S.coeffs else 0, ctx.sq(eta))
    if ctx.frob(s1, f0) != s1:
        raise InvariantViolation("leading coefficient of S is not in F_p")
    f_U = f_U.scale(ctx.sqrt(s1))
    s0 = canonical_s0(f_U, ctx.div(s0, s1))
    S = LinPoly(ctx, [s0, 1])
    Delta, residue = artin_schreier_reduce(_covering_rhs(R, f_U, S))
    if not residue.is_zero():
        raise ResidueNonzero("x R(x) + f_U S(f_U) is not Artin-Schreier trivial")

    rhs = ctx.frob(s0 ^ 1, f0)
    alpha = ctx.solve_as(rhs)
    if alpha is None:
        raise InvariantViolation("no alpha with alpha + alpha^p = (s0+1)^p in F_q")
    if rng is not None:
        alpha ^= rng.choice(ctx.subfield(f0))

    F_A = f_U.frobenius_power(1) + f_U
    n = ctx.k // f0
    a_poly, rem = right_divide(LinPoly.frobenius_minus_id(ctx, n), F_A)
    if not rem.is_zero():
        raise InvariantViolation("x^q + x is not a multiple of F_A")

    pivots = [a for a in A_bar.elements() if f_U.eval_int(a) == 1]
    if not pivots:
        raise InvariantViolation("no a in A_bar with f_U(a) = 1")
    a0 = _pick(pivots, rng)

    data = ReductionData(ctx, R, A_bar, ubar(R, A_bar), f_U, S, Delta, F_A, alpha, a_poly, a0)
    validate(data)
    return data


def _covering_rhs(R: LinPoly, f: LinPoly, S: LinPoly) -> PlainPoly:
    return R.to_plain().shift(1) + f.to_plain() * compose(S, f).to_plain()


def canonical_s0(f_U: LinPoly, s0: int) -> int:
    """Smallest s with x R(x) + f_U S(f_U) unchanged up to Artin-Schreier
    equivalence when s0 x in S is replaced by s x.

    Changing s0 by s alters the right-hand side by s f_U^2, so the admissible
    values form the coset of {s : s f_U(x)^2 ~ 0}.
    """
    ctx = f_U.ctx
    f2 = f_U.to_plain() * f_U.to_plain()
    residues = [artin_schreier_reduce(f2.scale(1 << i))[1].terms for i in range(ctx.k)]
    degs = sorted({d for r in residues for d in r})
    pos = {d: j for j, d in enumerate(degs)}
    images = [sum(c << (ctx.k * pos[d]) for d, c in r.items()) for r in residues]
    ker = F2Span()
    for mask in nullspace(images):
        ker.add(mask)
    return ker.min_coset(s0)


def validate(data: ReductionData) -> None:
    """Assert every ReductionData invariant exactly; raises InvariantViolation."""
    ctx, R, A_bar = data.ctx, data.R, data.A_bar
    p, f0 = ctx.p, ctx.f0
    f_U, S, F_A = data.f_U, data.S, data.F_A
    if S.e != 1 or S.coeffs[1] != 1:
        raise InvariantViolation("S is not of the form x^p + s0 x")
    if data.Delta.terms.get(0):
        raise InvariantViolation("Delta(0) != 0")
    if not _identity_holds(R, f_U, S, data.Delta):
        raise InvariantViolation("covering identity fails")
    if F_A != f_U.frobenius_power(1) + f_U:
        raise InvariantViolation("F_A != f_U^p + f_U")
    if f_U.e != R.e - 1 or not f_U.is_separable():
        raise InvariantViolation("f_U has the wrong degree")
    U = ubar(R, A_bar)
    if sorted(U.elements()) != sorted(data.U_basis.elements()):
        raise InvariantViolation("stored U_bar differs from {a : f_R(a, a) = 0}")
    # both kernels have the right size (separable of degree p^dim), so vanishing suffices
    if any(f_U.eval_int(u) for u in U.f2_basis):
        raise InvariantViolation("f_U does not vanish on U_bar")
    if any(F_A.eval_int(a) for a in A_bar.f2_basis):
        raise InvariantViolation("F_A does not vanish on A_bar")
    if sorted(A_bar.image(f_U.eval_int).elements()) != ctx.subfield(f0):
        raise InvariantViolation("f_U(A_bar) is not F_p")
    if data.alpha ^ ctx.frob(data.alpha, f0) != ctx.frob(data.s0 ^ 1, f0):
        raise InvariantViolation("alpha + alpha^p != (s0+1)^p")
    xq = LinPoly.frobenius_minus_id(ctx, ctx.k // f0)
    if compose(data.a_poly, F_A) != xq or compose(F_A, data.a_poly) != xq:
        raise InvariantViolation("a(F_A(x)) = F_A(a(x)) = x^q + x fails")
    if data.pivot_a0 not in A_bar or f_U.eval_int(data.pivot_a0) != 1:
        raise InvariantViolation("pivot a0 is not in A_bar with f_U(a0) = 1")


def retraction(data: ReductionData, x: int) -> int:
    """r(x) = x + f_U(x) a0: the projection of A_bar onto U_bar along F_p a0."""
    if isinstance(x, FieldElem):
        x = x.v
    if x not in data.A_bar:
        raise PreconditionFailed(f"{x:#x} is not in A_bar")
    return x ^ data.ctx.mul(data.f_U.eval_int(x), data.pivot_a0)


def covering_map(data: ReductionData, pt: Tuple[int, int]) -> Tuple[int, int]:
    """(x, y) -> (f_U(x), y + Delta(x)) from C_R to C_S."""
    x, y = pt
    return data.f_U.eval_int(x), y ^ data.Delta.eval_int(x)


def group_of(data: ReductionData) -> HeisenbergGroup:
    return HeisenbergGroup(data.R, data.ctx)


def split_elem(data: ReductionData, g: HElem) -> Tuple[Tuple[int, int], int]:
    """(a, b) -> (f_eta(f_U(a), b + Delta(a)), r(a)) with eta = alpha^(1/p)."""
    ctx = data.ctx
    eta = ctx.frob(data.alpha, -ctx.f0)
    a1 = data.f_U.eval_int(g.a)
    b1 = g.b ^ data.Delta.eval_int(g.a) ^ ctx.mul(ctx.sq(a1), eta)
    return (a1, b1), retraction(data, g.a)


def splitting_iso(data: ReductionData, A: Optional[List[HElem]] = None,
                  max_pairs: int = 1 << 20) -> Dict[HElem, Tuple[Tuple[int, int], int]]:
    """The isomorphism A -> W_2(F_p) x U_bar as a table, checked to be a
    bijection onto W_2(F_p) x U_bar and a homomorphism (exhaustively when
    |A|^2 <= max_pairs, otherwise on a deterministic sample)."""
    ctx = data.ctx
    G = group_of(data)
    if A is None:
        A = G.preimage(data.A_bar)
    p, e = ctx.p, data.e
    if len(A) != p ** (e + 1):
        raise PreconditionFailed(f"|A| = {len(A)}, expected {p ** (e + 1)}")
    table = {g: split_elem(data, g) for g in A}
    fp = set(ctx.subfield(ctx.f0))
    for (w, u) in table.values():
        if w[0] not in fp or w[1] not in fp or u not in data.U_basis:
            raise InvariantViolation("splitting map leaves W_2(F_p) x U_bar")
    if len(set(table.values())) != len(A):
        raise InvariantViolation("splitting map is not injective")

    def plus(x, y):
        (w1, u1), (w2, u2) = x, y
        return (w1[0] ^ w2[0], w1[1] ^ w2[1] ^ ctx.mul(w1[0], w2[0])), u1 ^ u2

    if len(A) ** 2 <= max_pairs:
        pairs = [(g, h) for g in A for h in A]
    else:
        rng = random.Random(0)
        pairs = [(rng.choice(A), rng.choice(A)) for _ in range(max_pairs)]
    for g, h in pairs:
        if table[G.mul(g, h)] != plus(table[g], table[h]):
            raise InvariantViolation("splitting map is not a homomorphism")
    return table
