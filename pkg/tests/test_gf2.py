import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from oracles import NaiveField

from ppf.gf2 import (
    FieldCtx,
    FieldError,
    clmul,
    default_poly,
    is_irreducible,
    parse_field_spec,
    smallest_factor_degree,
)

X = sympy.symbols("x")


def sympy_poly(p: int) -> sympy.Poly:
    return sympy.Poly([(p >> i) & 1 for i in range(p.bit_length() - 1, -1, -1)], X, modulus=2)


@pytest.mark.parametrize("n", range(1, 11))
def test_default_poly_is_least_irreducible(n):
    p = default_poly(n)
    assert sympy_poly(p).is_irreducible
    smaller = [q for q in range((1 << n) | 1, p, 2)]
    assert not any(sympy_poly(q).is_irreducible for q in smaller)


def test_known_default_polys():
    assert default_poly(1) == 0x3
    assert default_poly(8) == 0x11B
    assert FieldCtx(3).poly == 0xB


@pytest.mark.parametrize("p", range(0b100, 0b1000000))
def test_smallest_factor_degree_matches_sympy(p):
    factors = sympy.factor_list(sympy_poly(p).as_expr(), modulus=2)[1]
    assert smallest_factor_degree(p) == min(sympy.degree(f, X) for f, _ in factors)
    assert is_irreducible(p) == (len(factors) == 1 and factors[0][1] == 1)


def test_reducible_poly_rejected():
    with pytest.raises(FieldError, match="factor of degree 1"):
        FieldCtx(4, 0b10001)  # x^4 + 1 = (x + 1)^4
    with pytest.raises(FieldError, match="not monic of degree"):
        FieldCtx(4, 0b111)


def test_aes_product():
    ctx = FieldCtx(8, 0x11B)
    assert ctx.mul(0x57, 0x83) == 0xC1
    assert ctx.mul(0x57, 0x13) == 0xFE
    assert ctx.inv(0x53) == 0xCA


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_mul_matches_schoolbook(n):
    ctx = FieldCtx(n)
    ref = NaiveField(n, ctx.poly)
    for a in range(min(ctx.size, 40)):
        for b in range(ctx.size):
            assert ctx.mul(a, b) == ref.mul(a, b) == ctx.mul_slow(a, b)


def test_tables_vs_slow_path_large_field():
    ctx = FieldCtx(24)  # no tables built
    assert not ctx.has_tables
    a, b = 0xABCDEF, 0x123457
    assert ctx.mul(a, b) == ctx.mul_slow(a, b)
    assert ctx.mul(ctx.inv(a), a) == 1


@given(st.integers(2, 12), st.data())
def test_field_axioms(n, data):
    ctx = FieldCtx(n)
    el = st.integers(0, ctx.size - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
    assert ctx.frob(ctx.mul(a, b)) == ctx.mul(ctx.frob(a), ctx.frob(b))
    assert ctx.frob(a, n) == a
    assert ctx.sqrt(ctx.mul(a, a)) == a
    if a:
        assert ctx.div(ctx.mul(a, b), a) == b
        assert ctx.pow(a, -3) == ctx.inv(ctx.pow(a, 3))


@pytest.mark.parametrize("n,k", [(6, 1), (6, 2), (6, 3), (8, 4), (9, 3)])
def test_traces_and_norms(n, k):
    ctx = FieldCtx(n)
    xs = np.arange(ctx.size)
    tr = ctx.vtrace(xs, k)
    assert all(ctx.in_subfield(int(v), k) for v in tr)
    # tr is GF(2^k)-linear and onto; each value taken 2^(n-k) times
    assert np.all(np.bincount(tr, minlength=ctx.size)[ctx.subfield_elements(k)] == 1 << (n - k))
    assert all(ctx.trace(int(x), k) == int(t) for x, t in zip(xs[:50], tr[:50]))
    for x in range(1, 40):
        assert ctx.in_subfield(ctx.norm(x, k), k)


def test_transitivity_of_trace():
    ctx = FieldCtx(12)
    for x in range(0, ctx.size, 97):
        assert ctx.rel_trace(ctx.trace(x, 4), 4, 2) == ctx.trace(x, 2)
        assert ctx.rel_trace(ctx.trace(x, 6), 6, 1) == ctx.trace(x, 1)


def test_vectorized_agree_with_scalar():
    ctx = FieldCtx(10)
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, ctx.size, 300), rng.integers(0, ctx.size, 300)
    assert [ctx.mul(int(x), int(y)) for x, y in zip(a, b)] == list(ctx.vmul(a, b))
    assert [ctx.pow(int(x), 77) for x in a] == list(ctx.vpow(a, 77))
    assert [ctx.frob(int(x), 3) for x in a] == list(ctx.vfrob(a, 3))
    nz = a[a != 0]
    assert [ctx.inv(int(x)) for x in nz] == list(ctx.vinv(nz))


def test_generator_and_orders():
    ctx = FieldCtx(8)
    assert ctx.mult_order(ctx.generator) == 255
    assert ctx.mult_order(1) == 1
    assert sorted(ctx.nonzero_in_generator_order()) == list(range(1, 256))
    assert ctx.subfield_elements(2) == sorted({0, 1} | {ctx.pow(ctx.generator, 85 * i) for i in range(3)})


def test_char_poly_roots():
    ctx = FieldCtx(6, m=2)
    for b in range(1, ctx.size, 5):
        cp = ctx.char_poly(b)
        assert cp.degree == 3
        assert all(ctx.in_subfield(c, 2) for c in cp.coeffs)
        for r in ctx.conjugates(b):
            assert cp.evaluate(ctx, r) == 0
        B1, B2, B3 = cp.coeffs
        assert B1 == ctx.trace(b, 2)
        assert B3 == ctx.norm(b, 2)
        # symmetric-function identity tr(b^3) = B1^3 + B3 + B1 B2
        assert ctx.trace(ctx.pow(b, 3), 2) == ctx.pow(B1, 3) ^ B3 ^ ctx.mul(B1, B2)


def test_subfield_poly_irreducible_vs_sympy_degree3_over_gf2():
    ctx = FieldCtx(3, m=1)
    for b1 in (0, 1):
        for b2 in (0, 1):
            for b3 in (0, 1):
                p = 0b1000 | b1 << 2 | b2 << 1 | b3
                assert ctx.subfield_poly_irreducible((b1, b2, b3)) == sympy_poly(p).is_irreducible


def test_quad_irreducible():
    ctx = FieldCtx(5)
    for a in range(1, ctx.size):
        for b in range(ctx.size):
            has_root = any(ctx.mul(x, x) ^ ctx.mul(a, x) ^ b == 0 for x in range(ctx.size))
            assert ctx.quad_irreducible(a, b) == (not has_root)


def test_field_spec_parsing():
    ctx = parse_field_spec("n=6,poly=0x43,m=2")
    assert (ctx.n, ctx.poly, ctx.m, ctx.t, ctx.q) == (6, 0x43, 2, 3, 4)
    assert parse_field_spec(ctx.spec()) == ctx
    assert parse_field_spec("n=4").m is None
    for bad in ("n=", "m=2", "n=6,m=4", "n=6,poly=0x41"):
        with pytest.raises(FieldError):
            parse_field_spec(bad)
    with pytest.raises(FieldError):
        FieldCtx(6).t


def test_with_split_shares_tables():
    ctx = FieldCtx(12)
    s = ctx.with_split(4)
    assert s.tables is ctx.tables
    assert (s.t, s.q) == (3, 16)
    assert s != ctx and s.with_split(None) == ctx


def test_clmul_small():
    assert clmul(0b11, 0b11) == 0b101
    assert clmul(0, 123) == 0
