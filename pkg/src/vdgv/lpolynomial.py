"""Frobenius eigenvalues and L-polynomials of y^p + y = xR(x) over F_q.

Characters of the maximal abelian group A are labelled by (a_W, b_W, u_dual):
a character (a_W, b_W) of W_2(F_p) with a_W != 0 and a character of U_bar
given by F_p-coordinates against the stored basis. Each label contributes one
reciprocal root tau = xi_q(c, 0)^(-1) (-1-i)^k, with c computed from alpha and
a linear functional beta.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb, isqrt
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from ._gf2 import F2Span, parity, preimage_span
from .errors import (InvariantViolation, NoRationalLagrangian, PreconditionFailed,
                     ResidueNonzero)
from .field2k import FieldCtx, FieldElem, default_field
from .heisenberg import find_lagrangian, is_HR_rational, is_rational_lagrangian
from .reduction import ReductionData, _covering_rhs, reduce_to_binomial, validate
from .skewpoly import (KernelBasis, LinPoly, PlainPoly, adjoint, artin_schreier_reduce,
                       right_divide)
from .witt2 import GaussInt, i_pow, xi_exponent

GAUSS_BASE = GaussInt(-1, -1)


class CharacterLabel(NamedTuple):
    a_W: int
    b_W: int
    u_dual: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"a": format(self.a_W, "x"), "b": format(self.b_W, "x"),
                "u": [format(u, "x") for u in self.u_dual]}


class TauEntry(NamedTuple):
    label: CharacterLabel
    c: int
    tau: GaussInt


def enumerate_characters(p: Union[int, FieldCtx], e: int) -> List[CharacterLabel]:
    """All labels with a_W in F_p^x, b_W in F_p, u_dual in F_p^(e-1), in lexicographic order.

    Given an int p the F_p elements are the integers 0..p-1 of F_p's own
    encoding; given a context they are the encodings of its subfield F_p.
    """
    if isinstance(p, FieldCtx):
        fp = p.subfield(p.f0)
    else:
        if p < 2 or p & (p - 1):
            raise PreconditionFailed(f"p = {p} is not a power of 2")
        fp = list(range(p))
    if e < 1:
        raise PreconditionFailed("e must be at least 1")
    return [CharacterLabel(a, b, u)
            for a in fp if a
            for b in fp
            for u in itertools.product(fp, repeat=e - 1)]


def _xi_U_exponent(ctx: FieldCtx, U: KernelBasis, u_dual: Sequence[int], u: int) -> int:
    coords = U.coords(u)
    if coords is None:
        raise InvariantViolation(f"{u:#x} is not in U_bar")
    s = 0
    for w, c in zip(u_dual, coords):
        s ^= ctx.mul(w, c)
    return ctx.trace(s, 1, ctx.f0)


def beta_xi(label: CharacterLabel, data: ReductionData, exhaustive_max_q: int = 256) -> int:
    """The beta with xi_U(r(a(x))) = (-1)^Tr_{q/2}(a_W^2 beta x) for all x in F_q."""
    ctx = data.ctx
    if not any(label.u_dual):
        return 0
    from .reduction import retraction

    def lam(x: int) -> int:
        return _xi_U_exponent(ctx, data.U_basis, label.u_dual, retraction(data, data.a_poly.eval_int(x)))

    target = sum(lam(1 << j) << j for j in range(ctx.k))
    cols = [sum(ctx.abs_trace(ctx.mul(1 << i, 1 << j)) << j for j in range(ctx.k))
            for i in range(ctx.k)]
    gamma = preimage_span(cols).coords(target)
    if gamma is None:
        raise InvariantViolation("trace pairing failed to represent the functional")
    beta = ctx.div(gamma, ctx.sq(label.a_W))
    if ctx.q <= exhaustive_max_q:
        w = ctx.sq(label.a_W)
        for x in range(ctx.q):
            if lam(x) != ctx.abs_trace(ctx.mul(w, ctx.mul(beta, x))):
                raise InvariantViolation("beta does not represent xi_U o r o a")
    return beta


def c_and_tau(label: CharacterLabel, data: ReductionData,
              beta: Optional[int] = None) -> Tuple[int, GaussInt]:
    ctx = data.ctx
    if beta is None:
        beta = beta_xi(label, data)
    a, b = label.a_W, label.b_W
    c = ctx.sqrt(data.alpha ^ ctx.div(b, ctx.sq(a))) ^ ctx.mul(a, beta)
    tau = i_pow(-xi_exponent(ctx, (c, 0))) * GAUSS_BASE ** ctx.k
    if tau.norm() != ctx.q:
        raise InvariantViolation(f"|tau|^2 = {tau.norm()} != q = {ctx.q}")
    return c, tau


def expand(taus: Sequence[GaussInt]) -> List[int]:
    """Coefficients of prod (1 - tau T), asserting they are rational integers."""
    poly = [GaussInt(1)]
    for t in taus:
        nxt = poly + [GaussInt(0)]
        for j, c in enumerate(poly):
            nxt[j + 1] = nxt[j + 1] - t * c
        poly = nxt
    if any(c.im for c in poly):
        raise InvariantViolation("L-polynomial has non-real coefficients")
    return [c.re for c in poly]


def functional_equation_holds(coeffs: Sequence[int], q: int) -> bool:
    g2 = len(coeffs) - 1
    if g2 % 2:
        return False
    g = g2 // 2
    # c_{2g-j} = q^(g-j) c_j, checked for j <= g only since the rest is the same equation
    return all(coeffs[g2 - j] == q ** (g - j) * coeffs[j] for j in range(g + 1))


def classify(coeffs: Sequence[int], q: int) -> str:
    """'maximal/minimal/neither over F_q', or 'not applicable' when q is not a square."""
    where = f"over F_{q}"
    r = isqrt(q)
    if r * r != q:
        return f"not applicable {where}"
    n = len(coeffs) - 1
    if list(coeffs) == [comb(n, j) * r ** j for j in range(n + 1)]:
        return f"maximal {where}"
    if list(coeffs) == [comb(n, j) * (-r) ** j for j in range(n + 1)]:
        return f"minimal {where}"
    return f"neither {where}"


@dataclass
class LData:
    ctx: FieldCtx
    R: LinPoly
    data: ReductionData
    taus: List[TauEntry]
    L_coeffs: List[int]
    genus: int
    classification: str
    classify_m: int = 1

    @property
    def q(self) -> int:
        return self.ctx.q

    def tau_values(self) -> List[GaussInt]:
        return [t.tau for t in self.taus]

    def coeffs_over(self, m: int) -> List[int]:
        return expand([t ** m for t in self.tau_values()])

    def power_sum(self, m: int) -> GaussInt:
        s = GaussInt(0)
        for t in self.tau_values():
            s = s + t ** m
        return s

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "alpha": format(self.data.alpha, "x"),
            "s0": format(self.data.s0, "x"),
            "taus": [{"label": t.label.to_json(), "c": format(t.c, "x"), "tau": t.tau.to_json()}
                     for t in self.taus],
            "L": list(self.L_coeffs),
            "classification": self.classification,
        }


def taus_from_data(data: ReductionData) -> List[TauEntry]:
    out = []
    for label in enumerate_characters(data.ctx, data.e):
        c, tau = c_and_tau(label, data)
        out.append(TauEntry(label, c, tau))
    return out


def check_parity(data: ReductionData) -> None:
    """When H_R lies over F_q, [F_q:F_2] is even and Tr_{q/2}(alpha) = [F_q:F_2]/2 mod 2."""
    ctx = data.ctx
    if not is_HR_rational(data.R, ctx):
        return
    if ctx.k % 2 or ctx.abs_trace(data.alpha) != (ctx.k // 2) % 2:
        raise InvariantViolation("trace of alpha contradicts the parity of [F_q:F_2]")


def assemble(data: ReductionData, classify_m: int = 1) -> LData:
    ctx = data.ctx
    p, e = ctx.p, data.e
    taus = taus_from_data(data)
    genus = p ** e * (p - 1) // 2
    if len(taus) != 2 * genus:
        raise InvariantViolation("number of eigenvalues differs from 2g")
    coeffs = expand([t.tau for t in taus])
    if not functional_equation_holds(coeffs, ctx.q):
        raise InvariantViolation("functional equation fails")
    check_parity(data)
    ld = LData(ctx, data.R, data, taus, coeffs, genus, "", classify_m)
    ld.classification = classify(ld.coeffs_over(classify_m), ctx.q ** classify_m)
    return ld


def l_polynomial(R: LinPoly, A_bar: Optional[KernelBasis] = None,
                 base_ctx: Optional[FieldCtx] = None, rng: Optional[random.Random] = None,
                 classify_m: int = 1) -> LData:
    """Lagrangian -> quotient chain -> characters -> eigenvalues -> L(T)."""
    base = A_bar.ambient if A_bar is not None else (R.ctx if base_ctx is None else base_ctx)
    base = base.with_f0(R.ctx.f0)
    R = R.embed(base)
    if A_bar is None:
        A_bar = find_lagrangian(R, base, rng)
        if A_bar is None:
            raise NoRationalLagrangian(f"no rational Lagrangian for R over F_{base.q}; "
                                      "a larger base field may contain one", q=base.q)
    data = reduce_to_binomial(R, A_bar, rng)
    return assemble(data, classify_m)


# -- twists --------------------------------------------------------------------

def twist_coefficient(data: ReductionData, t: int) -> int:
    """F_A^*(t)^2, the coefficient added to the linear term of R."""
    ctx = data.ctx
    return ctx.sq(adjoint(data.F_A).eval_int(t))


def twist(R: LinPoly, data: ReductionData, t: int) -> Tuple[LinPoly, PlainPoly]:
    """R_t = R + F_A^*(t)^2 x and the Delta_t of its covering of
    y^p + y = x^(p+1) + ((t^(1/p) + t)^2 + s0) x^2."""
    ctx = data.ctx
    if isinstance(t, FieldElem):
        t = t.v
    R = R.embed(ctx)
    R_t = R + LinPoly(ctx, [twist_coefficient(data, t)])
    S_t = LinPoly(ctx, [_twisted_s0(data, t), 1])
    Delta_t, residue = artin_schreier_reduce(_covering_rhs(R_t, data.f_U, S_t))
    if not residue.is_zero():
        raise ResidueNonzero("twisted covering identity leaves a residue")
    return R_t, Delta_t


def _twisted_s0(data: ReductionData, t: int) -> int:
    ctx = data.ctx
    return ctx.sq(ctx.frob(t, -ctx.f0) ^ t) ^ data.s0


def twisted_data(data: ReductionData, t: int) -> ReductionData:
    """ReductionData of R_t sharing A_bar, f_U, a(x) and a0, with alpha_t = alpha + t^2."""
    ctx = data.ctx
    R_t, Delta_t = twist(data.R, data, t)
    if not is_rational_lagrangian(R_t, data.A_bar):
        raise InvariantViolation("A_bar is not a rational Lagrangian for the twist")
    out = ReductionData(ctx, R_t, data.A_bar, data.U_basis, data.f_U,
                        LinPoly(ctx, [_twisted_s0(data, t), 1]), Delta_t, data.F_A,
                        data.alpha ^ ctx.sq(t), data.a_poly, data.pivot_a0)
    validate(out)
    return out


def tau_twist(tau0: GaussInt, c: int, t: int, ctx: FieldCtx) -> GaussInt:
    """xi_q(t, t^2 + c t) * tau0."""
    return i_pow(xi_exponent(ctx, (t, ctx.sq(t) ^ ctx.mul(c, t)))) * tau0


@dataclass
class TwistComparison:
    t: int
    R_t: LinPoly
    rows: List[Tuple[CharacterLabel, GaussInt, GaussInt]]
    L_direct: List[int]
    L_fresh: Optional[List[int]]

    @property
    def ok(self) -> bool:
        same = all(a == b for _, a, b in self.rows)
        return same and (self.L_fresh is None or self.L_fresh == self.L_direct)


def compare_twist(base: LData, t: int, fresh: bool = True) -> TwistComparison:
    """Eigenvalues of R_t computed directly against the twist formula, label by label.

    With fresh=True the L-polynomial of R_t is also recomputed from scratch
    (its own Lagrangian and quotient chain) and compared.
    """
    ctx = base.ctx
    dt = twisted_data(base.data, t)
    rows = []
    for entry in base.taus:
        c_t, tau_t = c_and_tau(entry.label, dt)
        if c_t != entry.c ^ t:
            raise InvariantViolation("twisted c differs from c + t")
        rows.append((entry.label, tau_t, tau_twist(entry.tau, entry.c, t, ctx)))
    L_direct = expand([r[1] for r in rows])
    L_fresh = l_polynomial(dt.R, base_ctx=ctx).L_coeffs if fresh else None
    return TwistComparison(t, dt.R, rows, L_direct, L_fresh)


# -- named families ----------------------------------------------------------------

def _f0_of(p: int) -> int:
    if p < 2 or p & (p - 1):
        raise PreconditionFailed(f"p = {p} is not a power of 2")
    return p.bit_length() - 1


@dataclass
class CurveJob:
    """A curve y^p + y = xR(x) over ctx, plus what is expected of it."""
    ctx: FieldCtx
    R: LinPoly
    name: str = "custom"
    A_bar: Optional[List[int]] = None
    twist_t: Optional[int] = None
    expected: Optional[str] = None
    classify_m: int = 1
    extra: Dict[str, Any] = field(default_factory=dict)

    def a_bar_basis(self) -> Optional[KernelBasis]:
        return None if self.A_bar is None else KernelBasis(self.ctx, self.A_bar)

    def to_json(self) -> dict:
        d = {"name": self.name, "field": self.ctx.to_json(), "R": self.R.to_json()["coeffs"],
             "classify_m": self.classify_m}
        if self.A_bar is not None:
            d["A_bar"] = [format(a, "x") for a in self.A_bar]
        if self.twist_t is not None:
            d["twist_t"] = format(self.twist_t, "x")
        if self.expected is not None:
            d["expected"] = self.expected
        if self.extra:
            d["extra"] = self.extra
        return d

    @classmethod
    def from_json(cls, d: dict) -> "CurveJob":
        ctx = FieldCtx.from_json(d["field"])
        R = LinPoly(ctx, [int(c, 16) for c in d["R"]])
        A_bar = [int(a, 16) for a in d["A_bar"]] if d.get("A_bar") is not None else None
        t = int(d["twist_t"], 16) if d.get("twist_t") is not None else None
        return cls(ctx, R, d.get("name", "custom"), A_bar, t, d.get("expected"),
                   int(d.get("classify_m", 1)), d.get("extra", {}))


def _smallest(cands, pred, what: str):
    for c in cands:
        if pred(c):
            return c
    raise PreconditionFailed(f"no {what}")


def prop_2pp(p: int, a0: Optional[int] = None) -> CurveJob:
    """y^p + y = x^(p+1) + a0 x^2 with a0 in F_(p^2), Tr_{p/2}(a0^(p+1)) = 1; F_(p^4)-maximal."""
    f0 = _f0_of(p)
    ctx = default_field(4 * f0, f0)

    def ok(a):
        return ctx.trace(ctx.pow(a, p + 1), 1, f0) == 1

    if a0 is None:
        a0 = _smallest(ctx.subfield(2 * f0), ok, "a0 in F_p^2 with Tr(a0^(p+1)) = 1")
    if ctx.frob(a0, 2 * f0) != a0:
        raise PreconditionFailed(f"a0 = {a0:#x} is not in F_{p * p}")
    if not ok(a0):
        raise PreconditionFailed(f"Tr_(p/2)(a0^(p+1)) = 0 for a0 = {a0:#x}")
    return CurveJob(ctx, LinPoly(ctx, [a0, 1]), "prop_2pp", expected=f"maximal over F_{ctx.q}")


def cor_abc(p: int, a0: Optional[int] = None) -> CurveJob:
    """y^p + y = x^(p+1) + a0 x^2 with a0 in F_p of trace 1; F_(p^4)-maximal."""
    f0 = _f0_of(p)
    ctx = default_field(4 * f0, f0)

    def ok(a):
        return ctx.trace(a, 1, f0) == 1

    if a0 is None:
        a0 = _smallest(ctx.subfield(f0), ok, "a0 in F_p with trace 1")
    if ctx.frob(a0, f0) != a0:
        raise PreconditionFailed(f"a0 = {a0:#x} is not in F_{p}")
    if not ok(a0):
        raise PreconditionFailed(f"Tr_(p/2)(a0) = 0 for a0 = {a0:#x}")
    job = prop_2pp(p, a0)
    job.name = "cor_abc"
    return job


def cor_abcd(p: int, a: Optional[int] = None) -> CurveJob:
    """z^2 + z = x Q_a(x), where Q_a(x^2 + a x) = a^(-2) sum_{i=1}^{f0} (a x)^(2^i).

    Needs f0 odd and a in Ker Tr_{p/2} minus 0; F_(p^4)-maximal.
    """
    f0 = _f0_of(p)
    if f0 % 2 == 0:
        raise PreconditionFailed(f"f0 = {f0} must be odd")
    ctx = default_field(4 * f0, 1)
    fp = ctx.subfield(f0)

    def ok(v):
        return v != 0 and ctx.trace(v, 1, f0) == 0

    if a is None:
        a = _smallest(fp, ok, "nonzero a in F_p with trace 0")
    if a not in fp:
        raise PreconditionFailed(f"a = {a:#x} is not in F_{p}")
    if not ok(a):
        raise PreconditionFailed(f"a = {a:#x} must be nonzero with Tr_(p/2)(a) = 0",
                                 trace=ctx.trace(a, 1, f0))
    ia2 = ctx.inv(ctx.sq(a))
    P = LinPoly(ctx, [0] + [ctx.mul(ia2, ctx.frob(a, i)) for i in range(1, f0 + 1)])
    Q_a, rem = right_divide(P, LinPoly(ctx, [a, 1]))
    if not rem.is_zero():
        raise InvariantViolation("P is not divisible by x^2 + a x")
    # the covering of z^2 + z = x Q_a(x) by y^p + y = x^(p+1) + x^2
    Delta0 = PlainPoly(ctx, {(1 << i) + 1: ctx.mul(ia2, ctx.mul(a, ctx.frob(a, i))) for i in range(f0)})
    rhs = (PlainPoly(ctx, {p + 1: 1, 2: 1})
           + PlainPoly(ctx, {2: 1, 1: a}) * P.to_plain())
    if Delta0.p_power() + Delta0 != rhs:
        raise InvariantViolation("Delta_0 identity fails")
    extra = {"p": p, "a": format(a, "x"), "P": P.to_json()["coeffs"],
             "Q_a": Q_a.to_json()["coeffs"]}
    return CurveJob(ctx, Q_a, "cor_abcd", expected=f"maximal over F_{ctx.q}", extra=extra)


def cor_maximal_example(p: int, n: int, t: Optional[int] = None) -> CurveJob:
    """R_t = sum_{i=1}^{n/2} x^(p^(2i-1)) + (sum_{i<n} t^(p^-i))^2 x over F_q, q = p^(4n);
    F_(q^2)-maximal when Tr_{q/2}(t) = 1."""
    f0 = _f0_of(p)
    if n < 2 or n % 2:
        raise PreconditionFailed(f"n = {n} must be positive and even")
    ctx = default_field(4 * n * f0, f0)
    if t is None:
        t = _smallest(range(1, ctx.q), lambda v: ctx.abs_trace(v) == 1, "t of trace 1")
    if not 0 <= t < ctx.q:
        raise PreconditionFailed(f"t = {t:#x} is not in F_{ctx.q}")
    if ctx.abs_trace(t) != 1:
        raise PreconditionFailed("Tr_(q/2)(t) must be 1", trace=0)
    fstar = 0
    for i in range(n):
        fstar ^= ctx.frob(t, -i * f0)
    coeffs = [0] * n
    for i in range(1, n // 2 + 1):
        coeffs[2 * i - 1] = 1
    coeffs[0] = ctx.sq(fstar)
    extra = {"n": n, "t": format(t, "x")}
    return CurveJob(ctx, LinPoly(ctx, coeffs), "cor_maximal_example",
                    expected=f"maximal over F_{ctx.q ** 2}", classify_m=2, extra=extra)


FAMILIES = {
    "prop_2pp": prop_2pp,
    "cor_abc": cor_abc,
    "cor_abcd": cor_abcd,
    "cor_maximal_example": cor_maximal_example,
}


def family(kind: str, **params) -> CurveJob:
    if kind not in FAMILIES:
        raise PreconditionFailed(f"unknown family {kind!r}; choose from {sorted(FAMILIES)}")
    return FAMILIES[kind](**params)


def run_job(job: CurveJob, rng: Optional[random.Random] = None) -> LData:
    R = job.R
    ld = l_polynomial(R, job.a_bar_basis(), job.ctx, rng, job.classify_m)
    if job.twist_t is not None:
        dt = twisted_data(ld.data, job.twist_t)
        ld = assemble(dt, job.classify_m)
    return ld


# -- elliptic quotients ------------------------------------------------------------

@dataclass
class EllipticQuotient:
    ctx: FieldCtx
    alpha: int
    a: int
    b: int
    c: int

    @property
    def a2(self) -> int:
        """Coefficient of x^2 in z^2 + z = x^3 + (c^2 + c + 1) x^2."""
        return self.ctx.sq(self.c) ^ self.c ^ 1

    @property
    def R(self) -> LinPoly:
        """E_c written as z^2 + z = x R(x) with R = x^2 + (c^2+c+1) x over F_2."""
        return LinPoly(self.ctx.with_f0(1), [self.a2, 1])

    @property
    def s0(self) -> int:
        """s0 of the binomial curve whose alpha this is."""
        ctx = self.ctx
        return ctx.frob(self.alpha, -ctx.f0) ^ self.alpha ^ 1

    def on_curve(self, pt: Tuple[int, int]) -> bool:
        ctx = self.ctx
        x, z = pt
        return ctx.sq(z) ^ z == ctx.mul(ctx.sq(x), x ^ self.a2)

    def h0(self, pt: Tuple[int, int]) -> Tuple[int, int]:
        """Image of a point (x, z) of y^p + y = x^(p+1) + s0 x^2 on E_c."""
        ctx = self.ctx
        x, z = pt
        y = z ^ ctx.mul(ctx.frob(self.alpha, -ctx.f0), ctx.sq(x))
        X, Y = 0, 0
        u, v = ctx.mul(self.a, x), ctx.mul(self.b, ctx.sq(x)) ^ ctx.mul(ctx.sq(self.a), y)
        for _ in range(ctx.f0):
            X, Y = X ^ u, Y ^ v ^ ctx.mul(X, u)
            u, v = ctx.sq(u), ctx.sq(v)
        out = (X, Y ^ ctx.mul(self.c, ctx.sq(X)))
        if not self.on_curve(out):
            raise InvariantViolation(f"h0{pt} = {out} is not on E_c")
        return out

    def L_formula(self) -> List[int]:
        """(1 - xi(c,0)^(-1) G T)(1 - xi(c,0) conj(G) T) with G = (-1-i)^n."""
        ctx = self.ctx
        m = xi_exponent(ctx, (self.c, 0))
        G = GAUSS_BASE ** ctx.k
        return expand([i_pow(-m) * G, i_pow(m) * G.conj()])


def elliptic_quotient(ctx: FieldCtx, alpha: int, ab: Tuple[int, int]) -> EllipticQuotient:
    """c = (alpha + b/a^2)^(1/2) and the quotient z^2 + z = x^3 + (c^2+c+1) x^2."""
    a, b = ab
    fp = set(ctx.subfield(ctx.f0))
    if a not in fp or b not in fp:
        raise PreconditionFailed("(a, b) must lie in W_2(F_p)")
    if a == 0:
        raise PreconditionFailed("a must be nonzero")
    c = ctx.sqrt(alpha ^ ctx.div(b, ctx.sq(a)))
    return EllipticQuotient(ctx, alpha, a, b, c)
