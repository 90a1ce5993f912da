"""Brute-force counterparts of the formula side: point counts, L-polynomial
checks and audits of the group action.

Nothing here uses characters or the quotient chain; counts come from scanning
the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CountMismatch, GateExceeded, InvariantViolation, PreconditionFailed
from .field2k import FieldCtx, _vlinear, embed_int, extension
from .heisenberg import HElem, HeisenbergGroup
from .lpolynomial import CurveJob, LData, expand, run_job
from .skewpoly import KernelBasis, LinPoly, PlainPoly
from .witt2 import GaussInt

ENUM_GATE = 20
NAIVE_GATE = 16
ACTION_GATE = 1 << 14
CHUNK = 1 << 16


def _field_for(R: LinPoly, m: int, gate: int) -> Tuple[FieldCtx, LinPoly]:
    if m < 1:
        raise PreconditionFailed("extension degree must be positive")
    if R.ctx.k * m > gate:
        raise GateExceeded(f"[F_q^m : F_2] = {R.ctx.k * m} exceeds the gate {gate}",
                           degree=R.ctx.k * m, gate=gate)
    F = extension(R.ctx, m)
    return F, R.embed(F)


def count_affine(R: LinPoly, m: int = 1, gate: int = ENUM_GATE) -> int:
    """p * #{x in F_(q^m) : Tr_(q^m/p)(x R(x)) = 0}, scanning x in fixed-size chunks."""
    F, Rm = _field_for(R, m, gate)
    r_cols = F.linear_images(Rm.eval_int)
    tr_cols = F.linear_images(lambda v: F.trace(v, F.f0))
    zeros = 0
    for lo in range(0, F.q, CHUNK):
        xs = np.arange(lo, min(lo + CHUNK, F.q), dtype=np.int64)
        t = _vlinear(F.vmul(xs, _vlinear(xs, r_cols)), tr_cols)
        zeros += int(np.count_nonzero(t == 0))
    return F.p * zeros


def count_affine_naive(R: LinPoly, m: int = 1, gate: int = NAIVE_GATE) -> int:
    """#{(x, y) : y^p + y = x R(x)} by tabulating y -> y^p + y over the whole field."""
    F, Rm = _field_for(R, m, gate)
    ys = np.arange(F.q, dtype=np.int64)
    fibre = np.bincount(F.vfrob(ys, F.f0) ^ ys, minlength=F.q)
    xs = ys
    rhs = F.vmul(xs, _vlinear(xs, F.linear_images(Rm.eval_int)))
    return int(fibre[rhs].sum())


def count_affine_plain(P: PlainPoly, m: int = 1, gate: int = NAIVE_GATE) -> int:
    """#{(x, y) : y^p + y = P(x)} over F_(q^m) for an arbitrary polynomial P."""
    if P.ctx.k * m > gate:
        raise GateExceeded(f"[F_q^m : F_2] = {P.ctx.k * m} exceeds the gate {gate}")
    F = extension(P.ctx, m)
    Pm = P.embed(F)
    ys = np.arange(F.q, dtype=np.int64)
    fibre = np.bincount(F.vfrob(ys, F.f0) ^ ys, minlength=F.q)
    return sum(int(fibre[Pm.eval_int(x)]) for x in range(F.q))


def count_projective(R: LinPoly, m: int = 1, gate: int = ENUM_GATE) -> int:
    """Affine count plus the single point at infinity (deg x R(x) = p^e + 1 is odd)."""
    if (R.degree + 1) % 2 == 0:
        raise InvariantViolation("deg x R(x) is even; more than one place at infinity")
    return count_affine(R, m, gate) + 1


def expected_count(taus: Union[LData, Sequence[GaussInt]], q: int, m: int) -> int:
    """q^m + 1 - sum tau^m."""
    if isinstance(taus, LData):
        taus = taus.tau_values()
    s = GaussInt(0)
    for t in taus:
        s = s + t ** m
    if s.im:
        raise InvariantViolation("power sum of eigenvalues is not real")
    return q ** m + 1 - s.re


def count_from_coeffs(coeffs: Sequence[int], q: int, m: int) -> int:
    """q^m + 1 - (sum of m-th powers of reciprocal roots), via Newton's identities."""
    c = list(coeffs)
    # L = prod (1 - t_j T) = sum c_i T^i, so e_i = (-1)^i c_i
    e = [(-1) ** i * ci for i, ci in enumerate(c)]
    n = len(c) - 1
    s = [0] * (m + 1)
    for k in range(1, m + 1):
        acc = (-1) ** (k - 1) * k * (e[k] if k <= n else 0)
        for i in range(1, k):
            acc += (-1) ** (i - 1) * (e[i] if i <= n else 0) * s[k - i]
        s[k] = acc
    return q ** m + 1 - s[m]


@dataclass
class CountReport:
    m: int
    affine: int
    projective: int
    expected_from_L: int

    @property
    def match(self) -> bool:
        return self.projective == self.expected_from_L

    def to_json(self) -> dict:
        return {"m": self.m, "count": self.projective, "affine": self.affine,
                "expected": self.expected_from_L, "match": self.match}


def verify_curve(job: Union[CurveJob, LData], m_max: int = 3, gate: int = ENUM_GATE,
                 strict: bool = True) -> List[CountReport]:
    """Compare brute-force counts with q^m + 1 - sum tau^m for m = 1..m_max.

    Degrees above the gate are skipped when strict is False and raise otherwise.
    """
    ld = job if isinstance(job, LData) else run_job(job)
    reports = []
    for m in range(1, m_max + 1):
        if ld.ctx.k * m > gate and not strict:
            break
        aff = count_affine(ld.R, m, gate)
        rep = CountReport(m, aff, aff + 1, expected_count(ld, ld.q, m))
        if strict and not rep.match:
            raise CountMismatch(f"over F_{ld.q ** m}: counted {rep.projective}, "
                                f"L-polynomial predicts {rep.expected_from_L}",
                                m=m, count=rep.projective, expected=rep.expected_from_L)
        reports.append(rep)
    return reports


def brute_force_L(R: LinPoly, gate: int = ENUM_GATE) -> List[int]:
    """L-polynomial from counts over F_q^m, m = 1..g (Newton's identities); genus <= gate / k."""
    p, e = R.p, R.e
    g = p ** e * (p - 1) // 2
    q = R.ctx.q
    # power sums S_m = q^m + 1 - N_m, then e_i from Newton, then c_i = (-1)^i e_i
    S = [0] + [q ** m + 1 - (count_affine(R, m, gate) + 1) for m in range(1, g + 1)]
    el = [1] + [0] * g
    for k in range(1, g + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * el[k - i] * S[i]
        if acc % k:
            raise InvariantViolation("Newton identities produced a non-integer")
        el[k] = acc // k
    c = [(-1) ** i * el[i] for i in range(g + 1)]
    # functional equation supplies the top half
    return c + [q ** (g - j) * c[j] for j in range(g - 1, -1, -1)]


@dataclass
class ActionAudit:
    points: int
    group_order: int
    orbits: int
    free: bool
    fibres_constant: bool
    central_ok: bool

    @property
    def ok(self) -> bool:
        return (self.free and self.fibres_constant and self.central_ok
                and self.orbits * self.group_order == self.points)

    def to_json(self) -> dict:
        return {"points": self.points, "group_order": self.group_order, "orbits": self.orbits,
                "free": self.free, "fibres_constant": self.fibres_constant,
                "central_ok": self.central_ok, "ok": self.ok}


def affine_points(R: LinPoly, m: int = 1, limit: int = ACTION_GATE) -> List[Tuple[int, int]]:
    F, Rm = _field_for(R, m, ENUM_GATE)
    fp = F.subfield(F.f0)
    pts = []
    for x in range(F.q):
        y = F.solve_as(F.mul(x, Rm.eval_int(x)))
        if y is not None:
            pts.extend((x, y ^ lam) for lam in fp)
            if len(pts) > limit:
                raise GateExceeded(f"more than {limit} affine points", limit=limit)
    return pts


def audit_action(R: LinPoly, A: Union[KernelBasis, Sequence[HElem]], F_A: LinPoly,
                 m: int = 1, limit: int = ACTION_GATE) -> ActionAudit:
    """Orbits of A on the affine points over F_(q^m): free, of size |A|, with
    F_A(x) constant along each orbit, and the center moving only y."""
    F = extension(R.ctx, m)
    G = HeisenbergGroup(R, F)
    if isinstance(A, KernelBasis):
        A = G.preimage(A)
    else:
        A = [HElem(embed_int(g.a, R.ctx, F), embed_int(g.b, R.ctx, F)) for g in A]
    FA = F_A.embed(F)
    pts = affine_points(R, m, limit)
    seen = set()
    orbits = 0
    free = fibres = True
    for pt in pts:
        if pt in seen:
            continue
        orbits += 1
        orb = {G.act(pt, g) for g in A}
        free &= len(orb) == len(A)
        v = FA.eval_int(pt[0])
        fibres &= all(FA.eval_int(x) == v for x, _ in orb)
        seen |= orb
    central = True
    fp = F.subfield(F.f0)
    for pt in pts[:64]:
        orb = {G.act(pt, HElem(0, lam)) for lam in fp}
        central &= len(orb) == F.p and all(x == pt[0] for x, _ in orb)
    return ActionAudit(len(pts), len(A), orbits, free, fibres, central)
