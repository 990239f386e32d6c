"""Constructors for the explicit families and the closed-form conditions."""

from __future__ import annotations

import numpy as np

from .functions import DOQuad
from .gf2 import FieldCtx, FieldError


def _need_t(ctx: FieldCtx, t: int, name: str):
    if ctx.m is None or ctx.t != t:
        raise FieldError(f"{name} needs a split with t={t} (n = {t}*m), got {ctx!r}")


# ---------- t = 3


def fam_t3_binomial(ctx: FieldCtx, c: int) -> DOQuad:
    """c x^(2(q+1)) + c^q x^(2(q^2+1)); pseudo-planar for every c."""
    _need_t(ctx, 3, "fam_t3_binomial")
    q = ctx.q
    return DOQuad.from_terms(ctx, [(c, 2 * (q + 1)), (ctx.frob(c, ctx.m), 2 * (q * q + 1))])


def fam_t3_quadrinomial(ctx: FieldCtx) -> DOQuad:
    """x^(2(q+1)) + x^(q^2+1) + x^(q^2+q) + x^(2(q^2+1)); pseudo-planar iff m != 1 mod 3."""
    _need_t(ctx, 3, "fam_t3_quadrinomial")
    q = ctx.q
    return DOQuad.from_terms(ctx, [(1, 2 * (q + 1)), (1, q * q + 1), (1, q * q + q), (1, 2 * (q * q + 1))])


def trinomial_t3(ctx: FieldCtx, c1: int, c2: int, c3: int) -> DOQuad:
    """c1 x^(q+1) + c2 x^(q^2+q) + c3 x^(q^2+1)."""
    _need_t(ctx, 3, "trinomial_t3")
    q = ctx.q
    return DOQuad.from_terms(ctx, [(c1, q + 1), (c2, q * q + q), (c3, q * q + 1)])


def alpha_root(ctx: FieldCtx) -> int:
    """Least-encoding root of x^3 + x^2 + 1 (lives in GF(8), so needs 3 | n)."""
    if ctx.n % 3:
        raise FieldError("x^3 + x^2 + 1 has roots only when 3 | n")
    for a in ctx.subfield_elements(3):
        if ctx.mul(ctx.mul(a, a), a) ^ ctx.mul(a, a) ^ 1 == 0:
            return a
    raise AssertionError("unreachable")  # pragma: no cover


def fam_t3_trinomial_alpha(ctx: FieldCtx, alpha: int | None = None) -> DOQuad:
    """x^(q+1) + alpha x^(q^2+q) + x^(q^2+1) with alpha^3 + alpha^2 + 1 = 0."""
    _need_t(ctx, 3, "fam_t3_trinomial_alpha")
    if alpha is None:
        alpha = alpha_root(ctx)
    elif ctx.mul(ctx.mul(alpha, alpha), alpha) ^ ctx.mul(alpha, alpha) ^ 1:
        raise FieldError(f"{alpha:#x} is not a root of x^3 + x^2 + 1")
    return trinomial_t3(ctx, 1, alpha, 1)


def mono_t3(ctx: FieldCtx, c: int) -> DOQuad:
    """c x^(q^2+q)."""
    _need_t(ctx, 3, "mono_t3")
    q = ctx.q
    return DOQuad.from_terms(ctx, [(c, q * q + q)])


def hu_binomial_a(ctx: FieldCtx, a: int) -> DOQuad:
    """a^-(q+1) x^(q+1) + a^(q^2+1) x^(q^2+1), a != 0."""
    _need_t(ctx, 3, "hu_binomial_a")
    if not a:
        raise FieldError("hu_binomial_a needs a != 0")
    q = ctx.q
    return trinomial_t3(ctx, ctx.pow(a, -(q + 1)), 0, ctx.pow(a, q * q + 1))


# ---------- t = 4


def fam_t4_quadrinomial(ctx: FieldCtx) -> DOQuad:
    """x^(q+1) + x^(q^2+1) + x^(q^3+q) + x^(q^3+1)."""
    _need_t(ctx, 4, "fam_t4_quadrinomial")
    q = ctx.q
    return DOQuad.from_terms(ctx, [(1, q + 1), (1, q**2 + 1), (1, q**3 + q), (1, q**3 + 1)])


def fam_t4_trinomial(ctx: FieldCtx) -> DOQuad:
    """x^(q^2+q) + x^(q^3+q^2) + x^(q^3+q)."""
    _need_t(ctx, 4, "fam_t4_trinomial")
    q = ctx.q
    return DOQuad.from_terms(ctx, [(1, q**2 + q), (1, q**3 + q**2), (1, q**3 + q)])


# ---------- t = 2


def mono_t2(ctx: FieldCtx, c: int) -> DOQuad:
    """c x^(q+1) over GF(q^2)."""
    _need_t(ctx, 2, "mono_t2")
    return DOQuad.from_terms(ctx, [(c, ctx.q + 1)])


def mono_t2_condition(ctx: FieldCtx, c: int) -> bool:
    """tr_{m/1}(c^(q+1)) = 0."""
    _need_t(ctx, 2, "mono_t2_condition")
    return ctx.rel_trace(ctx.pow(c, ctx.q + 1), ctx.m, 1) == 0


def mono_t2_census(m: int) -> int:
    """Number of c in GF(2^(2m)) with tr_{m/1}(c^(q+1)) = 0 (c = 0 included)."""
    ctx = FieldCtx(2 * m, m=m)
    cs = np.arange(ctx.size, dtype=np.int64)
    return int(np.count_nonzero(ctx.vrel_trace(ctx.vpow(cs, ctx.q + 1), m, 1) == 0))


def t2_general(ctx: FieldCtx, cs) -> DOQuad:
    """sum_i c_i x^(2^(m+i) + 2^i) for i < m."""
    _need_t(ctx, 2, "t2_general")
    m = ctx.m
    if len(cs) != m:
        raise FieldError(f"need exactly m={m} coefficients")
    return DOQuad.from_family(ctx, {(1, i): c for i, c in enumerate(cs)})


# ---------- Kantor family


def kantor(ctx: FieldCtx, chain, zetas) -> DOQuad:
    """(x sum_i tr_i(zeta_i x))^2 for a chain of subfield degrees n = d_0 > d_1 > ... > d_r.

    ``chain`` lists the degrees (d_0, ..., d_r) with d_{i+1} | d_i and n/d_r odd;
    ``zetas`` holds zeta_1..zeta_r (nonzero).  Linearized terms are dropped.
    """
    chain = list(chain)
    if not chain or chain[0] != ctx.n:
        raise FieldError(f"chain must start at n={ctx.n}")
    if len(chain) < 2:
        raise FieldError("chain needs at least one proper subfield")
    for big, small in zip(chain, chain[1:]):
        if small >= big or big % small:
            raise FieldError(f"chain {chain} is not a strictly decreasing divisor chain")
    if (ctx.n // chain[-1]) % 2 == 0:
        raise FieldError(f"[GF(2^{ctx.n}) : GF(2^{chain[-1]})] must be odd")
    if len(zetas) != len(chain) - 1 or any(not z for z in zetas):
        raise FieldError("need one nonzero zeta per proper subfield in the chain")
    if ctx.m is not None and chain[-1] % ctx.m:
        raise FieldError(f"split m={ctx.m} must divide the smallest chain degree {chain[-1]}")
    terms = []
    for d, z in zip(chain[1:], zetas):
        # x^2 * (zeta x)^(2^(d k + 1)) for each conjugate in tr_{n/d}
        for k in range(ctx.n // d):
            e = 2 ** (d * k + 1)
            terms.append((ctx.frob(z, d * k + 1), 2 + e))
    return DOQuad.from_terms(ctx, terms)


def kantor_table(ctx: FieldCtx, chain, zetas) -> np.ndarray:
    """Value table of (x sum tr_i(zeta_i x))^2 computed directly (linearized part kept)."""
    xs = np.arange(ctx.size, dtype=np.int64)
    inner = np.zeros_like(xs)
    for d, z in zip(chain[1:], zetas):
        inner ^= ctx.vtrace(ctx.vmul(z, xs), d)
    y = ctx.vmul(xs, inner)
    return ctx.vmul(y, y)


# ---------- closed-form t = 3 conditions


def trinomial_condition_values(ctx: FieldCtx, c1: int, c2: int, c3: int, bs=None) -> np.ndarray:
    """b^(q^2+q+1) + tr_{n/m}(c1^2 b^(q^2+2) + c2^2 b^3 + c3^2 b^(q+2))."""
    _need_t(ctx, 3, "trinomial_condition")
    q, m = ctx.q, ctx.m
    if bs is None:
        bs = ctx.nonzero_in_generator_order()
    P = ctx.vpow
    inner = ctx.vmul(ctx.mul(c1, c1), P(bs, q * q + 2))
    inner ^= ctx.vmul(ctx.mul(c2, c2), P(bs, 3))
    inner ^= ctx.vmul(ctx.mul(c3, c3), P(bs, q + 2))
    return P(bs, q * q + q + 1) ^ ctx.vtrace(inner, m)


def trinomial_condition(ctx: FieldCtx, c1: int, c2: int, c3: int) -> bool:
    return bool(trinomial_condition_values(ctx, c1, c2, c3).all())


def hu_condition(ctx: FieldCtx, a: int) -> bool:
    """b^(q^2+q+1) + tr_{n/m}(a^(-2(q^2+q)) b^(2q+1) + a^(2(q^2+1)) b^(q+2)) != 0 for all b != 0."""
    _need_t(ctx, 3, "hu_condition")
    q, m = ctx.q, ctx.m
    bs = ctx.nonzero_in_generator_order()
    P = ctx.vpow
    inner = ctx.vmul(ctx.pow(a, -2 * (q * q + q)), P(bs, 2 * q + 1))
    inner ^= ctx.vmul(ctx.pow(a, 2 * (q * q + 1)), P(bs, q + 2))
    return bool((P(bs, q * q + q + 1) ^ ctx.vtrace(inner, m)).all())


def is_cube(ctx: FieldCtx, c: int) -> bool:
    if not c:
        return False
    g = 3 if ctx.order % 3 == 0 else 1
    return ctx.pow(c, ctx.order // g) == 1


def cube_roots(ctx: FieldCtx, c: int) -> list[int]:
    """All cube roots of c, sorted by encoding."""
    xs = np.arange(1, ctx.size, dtype=np.int64)
    return [int(x) for x in xs[ctx.vpow(xs, 3) == c]]


def mono_t3_u(ctx: FieldCtx, c: int, root: int | None = None) -> int:
    """u = c0^(-2(q^2+q+1)) for a chosen cube root c0 of c (default: least encoding)."""
    _need_t(ctx, 3, "mono_t3_condition")
    if not is_cube(ctx, c):
        raise FieldError(f"{c:#x} is not a nonzero cube")
    if root is None:
        root = cube_roots(ctx, c)[0]
    q = ctx.q
    return ctx.pow(root, -2 * (q * q + q + 1))


def mono_t3_condition(ctx: FieldCtx, c: int, root: int | None = None) -> bool:
    """u != 1 and x^3 + x^2 + B2 x + (B2 + 1)/(u + 1) is reducible over GF(q) for all B2."""
    u = mono_t3_u(ctx, c, root)
    if u == 1:
        return False
    inv_u1 = ctx.inv(u ^ 1)
    for B2 in ctx.subfield_elements(ctx.m):
        if ctx.subfield_poly_irreducible((1, B2, ctx.mul(B2 ^ 1, inv_u1))):
            return False
    return True


def is_q1_power(ctx: FieldCtx, c: int, k: int = 1) -> bool:
    """Whether c is a (k(q-1))-th power in GF(2^n)*."""
    if not c:
        return False
    g = np.gcd(k * (ctx.q - 1), ctx.order)
    return ctx.pow(c, ctx.order // int(g)) == 1
