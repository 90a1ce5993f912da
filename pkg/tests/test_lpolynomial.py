import random

import pytest

from vdgv.errors import NoRationalLagrangian, PreconditionFailed
from vdgv.field2k import default_field
from vdgv.heisenberg import find_lagrangian, is_HR_rational, is_rational_lagrangian
from vdgv.lpolynomial import (CharacterLabel, CurveJob, assemble, beta_xi, c_and_tau, classify,
                              compare_twist, cor_abc, cor_abcd, cor_maximal_example,
                              elliptic_quotient, enumerate_characters, expand, family,
                              functional_equation_holds, l_polynomial, prop_2pp, run_job, tau_twist,
                              twist, twisted_data)
from vdgv.oracle import brute_force_L, count_affine
from vdgv.reduction import reduce_to_binomial, retraction
from vdgv.skewpoly import KernelBasis, LinPoly
from vdgv.witt2 import GaussInt, W2Elem, xi

I = GaussInt(0, 1)


@pytest.fixture(scope="module")
def ldatas(instances):
    return [l_polynomial(R, A) for R, A in instances]


def test_enumerate_characters_counts():
    labels = enumerate_characters(2, 1)
    assert labels == [CharacterLabel(1, 0, ()), CharacterLabel(1, 1, ())]
    assert len(enumerate_characters(4, 1)) == 12
    assert len(enumerate_characters(2, 3)) == 8
    ctx = default_field(6, 3)
    labels = enumerate_characters(ctx, 2)
    assert len(labels) == 7 * 8 * 8 and labels == sorted(labels)
    assert all(l.a_W for l in labels)
    with pytest.raises(PreconditionFailed):
        enumerate_characters(6, 1)


def test_worked_example_over_f4():
    F4 = default_field(2)
    R = LinPoly(F4, [1, 1])
    ld = l_polynomial(R)
    d = ld.data
    assert d.s0 == 1 and d.alpha == 0
    by_label = {t.label: (t.c, t.tau) for t in ld.taus}
    assert by_label[CharacterLabel(1, 0, ())] == (0, GaussInt(0, 2))
    assert by_label[CharacterLabel(1, 1, ())] == (1, GaussInt(0, -2))
    assert ld.L_coeffs == [1, 0, 4]
    assert ld.classification == "neither over F_4"
    assert count_affine(R) + 1 == 5


def test_worked_example_over_f2():
    R = LinPoly(default_field(1), [1, 1])
    ld = l_polynomial(R)
    assert ld.taus[0].c == 0 and ld.taus[0].tau == GaussInt(-1, -1)
    assert ld.L_coeffs == [1, 2, 2]
    assert ld.classification == "not applicable over F_2"


def test_beta_vanishes_without_u_part(ldatas):
    for ld in ldatas:
        for t in ld.taus:
            if not any(t.label.u_dual):
                assert beta_xi(t.label, ld.data) == 0


def test_beta_represents_the_functional(ldatas):
    """Re-derive the defining identity from U-coordinates on every x in F_q."""
    checked = 0
    for ld in ldatas:
        d = ld.data
        ctx = d.ctx
        if d.e < 2 or ctx.q > 256:
            continue
        for label in enumerate_characters(ctx, d.e)[:8]:
            beta = beta_xi(label, d)
            w = ctx.sq(label.a_W)
            for x in range(ctx.q):
                coords = d.U_basis.coords(retraction(d, d.a_poly.eval_int(x)))
                s = 0
                for u, c in zip(label.u_dual, coords):
                    s ^= ctx.mul(u, c)
                assert ctx.trace(s, 1, ctx.f0) == ctx.abs_trace(ctx.mul(w, ctx.mul(beta, x)))
            checked += 1
    assert checked >= 5


def test_tau_formula(ldatas):
    for ld in ldatas:
        ctx, d = ld.ctx, ld.data
        G = GaussInt(-1, -1) ** ctx.k
        for t in ld.taus:
            a, b = t.label.a_W, t.label.b_W
            c = ctx.sqrt(d.alpha ^ ctx.div(b, ctx.sq(a))) ^ ctx.mul(a, beta_xi(t.label, d))
            assert t.c == c
            assert t.tau * xi(W2Elem(ctx, c, 0)) == G
            assert c_and_tau(t.label, d) == (t.c, t.tau)


def test_ldata_invariants(ldatas):
    for ld in ldatas:
        p, e, q = ld.ctx.p, ld.data.e, ld.q
        assert ld.genus == p ** e * (p - 1) // 2
        assert len(ld.taus) == 2 * ld.genus == len(ld.L_coeffs) - 1
        assert all(t.tau.norm() == q for t in ld.taus)
        assert functional_equation_holds(ld.L_coeffs, q)
        assert ld.L_coeffs[0] == 1


def test_matches_brute_force_L(ldatas):
    done = 0
    for ld in ldatas:
        if ld.ctx.k * ld.genus <= 16:
            assert ld.L_coeffs == brute_force_L(ld.R)
            done += 1
    assert done >= 8


def test_counts_over_extensions(ldatas):
    for ld in ldatas:
        for m in range(1, 4):
            if ld.ctx.k * m > 16:
                break
            s = ld.power_sum(m)
            assert s.im == 0
            assert count_affine(ld.R, m) + 1 == ld.q ** m + 1 - s.re


def test_choice_independence(instances):
    for i, (R, A) in enumerate(instances):
        base = l_polynomial(R, A).L_coeffs
        for seed in range(3):
            rng = random.Random(1000 * i + seed)
            assert l_polynomial(R, rng=rng).L_coeffs == base
        A2 = find_lagrangian(R, rng=random.Random(i))
        assert l_polynomial(R, A2).L_coeffs == base


def test_alpha_shift_does_not_change_L(instances):
    for R, A in instances[:10]:
        d = reduce_to_binomial(R, A)
        ctx = d.ctx
        base = assemble(d).L_coeffs
        for lam in ctx.subfield(ctx.f0):
            d.alpha ^= lam
            assert assemble(d).L_coeffs == base
            d.alpha ^= lam


def test_parity_of_alpha(ldatas):
    for ld in ldatas:
        if is_HR_rational(ld.R):
            k = ld.ctx.k
            assert k % 2 == 0 and ld.ctx.abs_trace(ld.data.alpha) == (k // 2) % 2
    for p_exp, n in ((1, 2), (2, 2)):
        ctx = default_field(4 * n * p_exp, p_exp)
        R = LinPoly(ctx, [0, 1])
        ld = l_polynomial(R)
        assert ctx.abs_trace(ld.data.alpha) == (ctx.k // 2) % 2


@pytest.mark.parametrize("p_exp,n", [(1, 2), (1, 4), (2, 2)])
def test_trace_family_has_single_eigenvalue(p_exp, n):
    ctx = default_field(4 * n * p_exp, p_exp)
    R = LinPoly(ctx, [1 if i % 2 else 0 for i in range(n)])
    ld = l_polynomial(R)
    assert len(set(ld.tau_values())) == 1


def test_classify_examples():
    assert classify([1, 0, 4], 4) == "neither over F_4"
    assert classify([1, 4, 4], 4) == "maximal over F_4"
    assert classify([1, -32, 256], 256) == "minimal over F_256"
    assert classify([1, 2, 2], 2) == "not applicable over F_2"
    assert expand([GaussInt(0, 2), GaussInt(0, -2)]) == [1, 0, 4]


def test_families():
    job = cor_abc(2, 1)
    assert job.R == LinPoly(job.ctx, [1, 1]) and job.ctx.q == 16
    assert run_job(job).classification == job.expected == "maximal over F_16"
    job = prop_2pp(4)
    assert run_job(job).classification == job.expected
    assert family("cor_abc", p=2).R == CurveJob.from_json(cor_abc(2).to_json()).R
    with pytest.raises(PreconditionFailed):
        family("nope")
    with pytest.raises(PreconditionFailed):
        prop_2pp(4, a0=0)
    with pytest.raises(PreconditionFailed):
        cor_abcd(4)
    with pytest.raises(PreconditionFailed):
        cor_maximal_example(2, 3)


def test_cor_maximal_example_is_a_twist():
    ctx = default_field(8)
    R0 = LinPoly(ctx, [0, 1])
    d0 = l_polynomial(R0).data
    for t in range(1, ctx.q, 37):
        R_t, _ = twist(R0, d0, t)
        assert R_t == LinPoly(ctx, [ctx.sq(t) ^ t, 1])
        if ctx.abs_trace(t) == 1:
            assert cor_maximal_example(2, 2, t).R == R_t


def test_twist_at_zero(ldatas):
    for ld in ldatas[:8]:
        R_0, Delta_0 = twist(ld.R, ld.data, 0)
        assert R_0 == ld.R and Delta_0 == ld.data.Delta
        for t in ld.taus:
            assert tau_twist(t.tau, t.c, 0, ld.ctx) == t.tau


def test_twists_two_paths(ldatas):
    rng = random.Random(8)
    n = 0
    for ld in ldatas:
        if ld.ctx.q > 64:
            continue
        for _ in range(3):
            t = rng.randrange(ld.ctx.q)
            cmp = compare_twist(ld, t)
            assert cmp.ok
            assert is_rational_lagrangian(cmp.R_t, ld.data.A_bar)
            n += 1
    assert n >= 30


def test_minimal_becomes_maximal_under_trace_one_twist():
    ctx = default_field(8)
    R0 = LinPoly(ctx, [0, 1])
    ld0 = l_polynomial(R0, classify_m=2)
    assert ld0.classification == "minimal over F_65536"
    t = next(t for t in range(ctx.q) if ctx.abs_trace(t) == 1)
    dt = twisted_data(ld0.data, t)
    assert assemble(dt, 2).classification == "maximal over F_65536"


def test_elliptic_quotient():
    ctx = default_field(4)
    R = LinPoly(ctx, [1, 1])
    d = l_polynomial(R).data
    E = elliptic_quotient(ctx, d.alpha, (1, 0))
    assert E.c == ctx.sqrt(d.alpha)
    assert E.L_formula() == brute_force_L(LinPoly(ctx, [E.a2, 1]))
    with pytest.raises(PreconditionFailed):
        elliptic_quotient(ctx, d.alpha, (0, 1))
    for c in range(ctx.q):
        if ctx.abs_trace(c) == 1:
            assert xi(W2Elem(ctx, c, 0)) in (I, -I)


def test_no_lagrangian_is_reported():
    ctx = default_field(3)
    rng = random.Random(2)
    while True:
        R = LinPoly(ctx, [rng.randrange(ctx.q) for _ in range(2)] + [1])
        if find_lagrangian(R) is None:
            break
    with pytest.raises(NoRationalLagrangian) as err:
        l_polynomial(R)
    assert "larger base field" in str(err.value)


def test_json_shapes(ldatas):
    js = ldatas[0].to_json()
    assert set(js) == {"genus", "alpha", "s0", "taus", "L", "classification"}
    assert set(js["taus"][0]) == {"label", "c", "tau"}
    job = CurveJob(default_field(4), LinPoly(default_field(4), [1, 1]), A_bar=[1], twist_t=3)
    again = CurveJob.from_json(job.to_json())
    assert again.R == job.R and again.A_bar == [1] and again.twist_t == 3
    assert isinstance(job.a_bar_basis(), KernelBasis)
