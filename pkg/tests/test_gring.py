import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import Z4Ring

from ppf import families as fam
from ppf.functions import DOQuad, is_pp_bruteforce
from ppf.gf2 import FieldCtx, FieldError
from ppf.gring import GaloisRing, GrElem, gr_add, gr_mul, rds_from_function, tr_r, verify_rds


def ring(n):
    return GaloisRing(FieldCtx(n))


def all_elems(R):
    s = R.ctx.size
    return [GrElem(a, b) for b in range(s) for a in range(s)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_hensel_lift_model(n):
    R = ring(n)
    Z = Z4Ring(n, R.ctx.poly)
    image = {x: Z.element(*x) for x in all_elems(R)}
    assert len(set(image.values())) == 4**n  # a + 2b is a unique representation
    for x, y in itertools.product(image, repeat=2):
        assert image[gr_add(R, x, y)] == Z.add(image[x], image[y])
        assert image[gr_mul(R, x, y)] == Z.mul(image[x], image[y])
    for x, zx in image.items():
        assert tr_r(R, x) == Z.trace(zx)


def test_teichmuller_lift_in_oracle_is_multiplicative():
    Z = Z4Ring(3, FieldCtx(3).poly)
    for u, v in itertools.product(range(8), repeat=2):
        assert Z.mul(Z.teich(u), Z.teich(v)) == Z.teich(FieldCtx(3).mul(u, v))


def test_small_examples():
    R = ring(1)
    one = R.one
    two = gr_add(R, one, one)
    assert two == GrElem(0, 1)
    assert gr_add(R, two, one) == GrElem(1, 1)
    assert tr_r(R, GrElem(1, 1)) == 3
    assert gr_mul(R, two, two) == R.zero
    assert [R.from_z4(k) for k in range(4)] == [R.zero, one, two, GrElem(1, 1)]
    R3 = ring(3)
    assert tr_r(R3, R3.one) == 3
    assert tr_r(R3, R3.zero) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exhaustive_associativity(n):
    R = ring(n)
    E = all_elems(R)
    for x, y, z in itertools.product(E, repeat=3):
        assert R.add(R.add(x, y), z) == R.add(x, R.add(y, z))


@pytest.mark.parametrize("n", [4, 6, 8])
def test_random_associativity_vectorized(n):
    R = ring(n)
    rng = np.random.default_rng(n)
    s = R.ctx.size
    a, b, c, d, e, f = (rng.integers(0, s, 100_000) for _ in range(6))
    left = R.vadd(*R.vadd(a, b, c, d), e, f)
    right = R.vadd(a, b, *R.vadd(c, d, e, f))
    assert np.array_equal(left[0], right[0]) and np.array_equal(left[1], right[1])
    # distributivity on a subsample
    for k in range(0, 2000, 7):
        x, y, z = GrElem(int(a[k]), int(b[k])), GrElem(int(c[k]), int(d[k])), GrElem(int(e[k]), int(f[k]))
        assert R.mul(x, R.add(y, z)) == R.add(R.mul(x, y), R.mul(x, z))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_trace_additive_and_frobenius_invariant(n):
    R = ring(n)
    E = all_elems(R)
    for x in E:
        assert tr_r(R, R.frob(x)) == tr_r(R, x)
        assert R.add(x, R.neg(x)) == R.zero
    for x, y in itertools.product(E, repeat=2):
        assert tr_r(R, R.add(x, y)) == (tr_r(R, x) + tr_r(R, y)) % 4


@given(st.integers(1, 10), st.data())
def test_commutative_ring_laws(n, data):
    R = ring(n)
    el = st.builds(GrElem, st.integers(0, R.ctx.size - 1), st.integers(0, R.ctx.size - 1))
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert R.add(x, y) == R.add(y, x)
    assert R.mul(x, y) == R.mul(y, x)
    assert R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))
    assert R.sub(R.add(x, y), y) == x
    assert R.mul(x, R.one) == x
    # 2x + 2y = 2(b-parts XOR) once the a-parts vanish
    assert R.add(R.two(x.b), R.two(y.b)) == R.two(x.b ^ y.b)
    assert R.from_index(R.index(x)) == x


def test_vectorized_trace_matches_scalar():
    R = ring(7)
    rng = np.random.default_rng(1)
    a, b = rng.integers(0, 128, 500), rng.integers(0, 128, 500)
    assert list(R.vtr(a, b)) == [tr_r(R, GrElem(int(x), int(y))) for x, y in zip(a, b)]


def test_rds_sizes_and_zero_function():
    R = ring(1)
    D = rds_from_function(None, R.ctx)
    assert set(D) == {R.zero, R.one}
    for n in (1, 2, 3, 4):
        R = ring(n)
        rep = verify_rds(R, rds_from_function(None, R.ctx))
        assert rep.ok and rep.histogram() == {"1": 4**n - 2**n} and rep.forbidden_hits == 0


def test_rds_x6_x10():
    ctx = FieldCtx(3, m=1)
    F = DOQuad.from_terms(ctx, [(1, 6), (1, 10)])
    R = GaloisRing(ctx)
    D = rds_from_function(F)
    assert len(set(D)) == 8
    rep = verify_rds(R, D)
    assert rep.ok and rep.histogram() == {"1": 56} and rep.forbidden_hits == 0


def test_mutated_rds_fails():
    ctx = FieldCtx(3, m=1)
    R = GaloisRing(ctx)
    D = rds_from_function(DOQuad.from_terms(ctx, [(1, 6), (1, 10)]))
    D[5] = R.add(D[2], R.two(1))  # a 2R-translate of another element
    rep = verify_rds(R, D)
    assert not rep.ok and rep.forbidden_hits > 0 and rep.first_violation is not None
    assert not verify_rds(R, D[:-1]).ok


@pytest.mark.parametrize("n,m", [(3, 1), (4, 1), (4, 2), (6, 2), (6, 3)])
def test_rds_iff_pseudo_planar(n, m):
    ctx = FieldCtx(n, m=m)
    R = GaloisRing(ctx)
    rng = np.random.default_rng(n * 7 + m)
    seen = set()
    for k in range(25):
        t = ctx.t
        famc = {(kk, i): int(rng.integers(0, ctx.size)) for kk in range(1, t) for i in range((t - kk) * m) if rng.random() < 0.5}
        F = DOQuad.from_family(ctx, famc) if k else fam.fam_t3_binomial(ctx, 1) if t == 3 else DOQuad.zero(ctx)
        pp = is_pp_bruteforce(F)
        seen.add(pp)
        assert verify_rds(R, rds_from_function(F)).ok == pp
    assert seen == {True, False}


def test_rds_guard():
    with pytest.raises(FieldError):
        rds_from_function(None, FieldCtx(13))
    with pytest.raises(FieldError):
        rds_from_function(None)
