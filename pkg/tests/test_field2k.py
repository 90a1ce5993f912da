import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vdgv.errors import FieldMismatch, InvalidSubfield, PreconditionFailed
from vdgv.field2k import (FieldCtx, default_field, embed, embed_int, extension,
                          is_irreducible, smallest_irreducible, solve_AS, sqrt, trace_to)


def _brute_irreducible(f):
    """Trial division by every polynomial of degree 1..deg/2."""
    n = f.bit_length() - 1
    for g in range(2, 1 << (n // 2 + 1)):
        a = f
        dg = g.bit_length() - 1
        while a.bit_length() - 1 >= dg:
            a ^= g << (a.bit_length() - 1 - dg)
        if a == 0:
            return False
    return True


def test_default_irreducibles_small():
    assert default_field(1).irred == 0b10
    assert default_field(2).irred == 0b111


def test_smallest_octic_matches_exhaustive_search():
    first = next(f for f in range(1 << 8, 1 << 9) if _brute_irreducible(f))
    assert first == 0x11b
    ctx = default_field(8, 2)
    assert ctx.irred == first and ctx.p == 4 and ctx.q == 256


@pytest.mark.parametrize("k", range(2, 11))
def test_rabin_test_agrees_with_trial_division(k):
    for f in range(1 << k, 1 << (k + 1)):
        assert is_irreducible(f) == _brute_irreducible(f)
    assert smallest_irreducible(k) == next(f for f in range(1 << k, 1 << (k + 1)) if _brute_irreducible(f))


def test_bad_subfield_and_reducible_modulus():
    with pytest.raises(InvalidSubfield):
        default_field(4, 3)
    with pytest.raises(PreconditionFailed):
        FieldCtx(4, 0x15)


def test_f4_worked_values(F4):
    w = 2
    assert F4.mul(w, w ^ 1) == 1
    assert F4.frob(w, 1) == w ^ 1
    assert F4.inv(w) == w ^ 1
    assert F4.sqrt(w) == w ^ 1
    assert F4.sqrt(0) == 0 and F4.sqrt(1) == 1


def test_inverse_of_zero(F4):
    with pytest.raises(ZeroDivisionError):
        F4.inv(0)


def test_traces(F4):
    assert F4.trace(2, 1) == 1
    assert F4.trace(1, 1) == 0
    F16 = default_field(4)
    values = [F16.trace(x, 1) for x in range(16)]
    assert values.count(0) == 8


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_field_axioms_exhaustive(k):
    ctx = default_field(k)
    els = range(ctx.q)
    for a in els:
        assert ctx.frob(a, k) == a
        assert ctx.sq(ctx.sqrt(a)) == a
        if a:
            assert ctx.mul(a, ctx.inv(a)) == 1
        for b in els:
            assert ctx.mul(a, b) == ctx.mul(b, a)
            for c in els:
                assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
                assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)


@settings(max_examples=300, deadline=None)
@given(k=st.sampled_from([5, 8, 12, 17, 20, 24]), data=st.data())
def test_field_axioms_random(k, data):
    ctx = default_field(k)
    a, b, c = (data.draw(st.integers(0, ctx.q - 1)) for _ in range(3))
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
    assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)
    assert ctx.frob(ctx.mul(a, b), 3) == ctx.mul(ctx.frob(a, 3), ctx.frob(b, 3))
    assert ctx.frob(a, k) == a
    assert ctx.sq(ctx.sqrt(a)) == a
    if a:
        assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.pow(a, -5) == ctx.inv(ctx.pow(a, 5))


@pytest.mark.parametrize("k", [4, 6, 8, 12])
def test_trace_linear_onto_and_transitive(k):
    ctx = default_field(k)
    rng = random.Random(k)
    for d in (d for d in range(1, k + 1) if k % d == 0):
        sub = set(ctx.subfield(d))
        assert len(sub) == 1 << d
        image = {ctx.trace(x, d) for x in (range(ctx.q) if ctx.q <= 4096 else
                                          (rng.randrange(ctx.q) for _ in range(3000)))}
        assert image == sub
        for m in (m for m in range(d, k + 1) if k % m == 0 and m % d == 0):
            for _ in range(50):
                x, y = rng.randrange(ctx.q), rng.randrange(ctx.q)
                assert ctx.trace(x ^ y, d) == ctx.trace(x, d) ^ ctx.trace(y, d)
                assert ctx.trace(x, d) == ctx.trace(ctx.trace(x, m), d, src=m)


def test_abs_trace_mask_matches_trace():
    ctx = default_field(10)
    for x in range(0, ctx.q, 7):
        assert ctx.abs_trace(x) == ctx.trace(x, 1)


def test_solve_as_examples(F4):
    assert F4.solve_as(0) == 0
    roots = [y for y in range(4) if F4.sq(y) ^ y == 1]
    assert F4.solve_as(1) == min(roots) == 2
    assert default_field(1).solve_as(1) is None


@pytest.mark.parametrize("k", range(1, 9))
def test_solve_as_exists_iff_trace_zero(k):
    for f0 in (d for d in range(1, k + 1) if k % d == 0):
        ctx = default_field(k, f0)
        table = {}
        for y in range(ctx.q):
            table.setdefault(ctx.frob(y, f0) ^ y, []).append(y)
        for c in range(ctx.q):
            y = ctx.solve_as(c)
            if ctx.trace(c, f0):
                assert y is None and c not in table
            else:
                assert y == min(table[c])


def test_embed_f4_into_f16():
    F4, F16 = default_field(2), default_field(4)
    roots = [r for r in range(16) if F16.mul(r, r) ^ r ^ 1 == 0]
    assert embed_int(2, F4, F16) == min(roots)
    assert embed_int(0, F4, F16) == 0 and embed_int(1, F4, F16) == 1


def test_embedding_is_a_homomorphism_along_a_chain():
    F4, F16, F256 = default_field(2), default_field(4), default_field(8)
    for src, dst in ((F4, F16), (F16, F256), (F4, F256)):
        for a in range(src.q):
            for b in range(src.q):
                ea, eb = embed_int(a, src, dst), embed_int(b, src, dst)
                assert embed_int(a ^ b, src, dst) == ea ^ eb
                assert embed_int(src.mul(a, b), src, dst) == dst.mul(ea, eb)
    images = {embed_int(embed_int(a, F4, F16), F16, F256) for a in range(4)}
    assert images == {embed_int(a, F4, F256) for a in range(4)}
    assert images == set(F256.subfield(2))


def test_embed_into_nonmultiple_fails():
    with pytest.raises(InvalidSubfield):
        embed_int(1, default_field(3), default_field(4))


def test_field_elem_wrapper(F4):
    w = F4(2)
    assert w * (w + F4.one()) == F4.one()
    assert w / w == F4.one()
    assert w ** 3 == F4.one()
    assert sqrt(w) == F4(3)
    assert trace_to(w, 1) == F4.one()
    assert w.frobenius() == F4(3)
    assert solve_AS(F4.one()) == w
    assert solve_AS(default_field(1).one()) is None
    e = embed(w, F4, default_field(4))
    assert e.ctx.k == 4 and e * e + e == e.ctx.one()
    with pytest.raises(FieldMismatch):
        w + default_field(4).one()


def test_json_roundtrip_and_parse():
    ctx = default_field(12, 3)
    assert FieldCtx.from_json(ctx.to_json()) == ctx
    assert ctx.to_json() == {"k": 12, "f0": 3, "irred": "1009"}
    assert ctx.parse("ff") == 0xff
    assert extension(ctx, 1) is ctx and extension(ctx, 2).k == 24


@pytest.mark.parametrize("k", [8, 18])
def test_vector_ops_match_scalar(k):
    ctx = default_field(k)
    rng = np.random.default_rng(k)
    a = rng.integers(0, ctx.q, 500)
    b = rng.integers(0, ctx.q, 500)
    prod = ctx.vmul(a, b)
    fr = ctx.vfrob(a, 3)
    cm = ctx.vmul_const(a, 0x35)
    tr = ctx.vabs_trace(a)
    for i in range(500):
        x, y = int(a[i]), int(b[i])
        assert prod[i] == ctx.mul(x, y)
        assert fr[i] == ctx.frob(x, 3)
        assert cm[i] == ctx.mul(x, 0x35)
        assert tr[i] == ctx.abs_trace(x)
