"""Linearized polynomials over GF(2^n).

A :class:`LinPoly` with base exponent ``s`` is ``L(x) = sum_i a_i x^(2^(s*i))``
for ``i < n/s``.  With ``s = m`` these are the q-polynomials whose permutation
behaviour is decided by the Dickson determinant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import FieldCtx, FieldError

KERNEL_ENUM_MAX_N = 16


@dataclass(frozen=True)
class LinPoly:
    ctx: FieldCtx
    s: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.s < 1 or self.ctx.n % self.s:
            raise FieldError(f"base exponent s={self.s} must divide n={self.ctx.n}")
        if len(self.coeffs) != self.ctx.n // self.s:
            raise FieldError(f"need exactly n/s = {self.ctx.n // self.s} coefficients, got {len(self.coeffs)}")

    @classmethod
    def identity(cls, ctx: FieldCtx, s: int = 1) -> "LinPoly":
        return cls(ctx, s, (1,) + (0,) * (ctx.n // s - 1))

    @classmethod
    def trace_map(cls, ctx: FieldCtx) -> "LinPoly":
        return cls(ctx, 1, (1,) * ctx.n)

    def __call__(self, x: int) -> int:
        return lin_eval(self, x)


def lin_eval(L: LinPoly, x: int) -> int:
    ctx = L.ctx
    acc = 0
    for i, a in enumerate(L.coeffs):
        if a:
            acc ^= ctx.mul(a, ctx.frob(x, L.s * i))
    return acc


def lin_eval_all(L: LinPoly) -> np.ndarray:
    """L evaluated on every field element (index = element encoding)."""
    ctx = L.ctx
    xs = np.arange(ctx.size, dtype=np.int64)
    acc = np.zeros_like(xs)
    for i, a in enumerate(L.coeffs):
        if a:
            acc ^= ctx.vmul(a, ctx.vfrob(xs, L.s * i))
    return acc


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of a list of bit-vector rows."""
    rank = 0
    rows = [r for r in rows if r]
    while rows:
        pivot = max(rows)
        top = pivot.bit_length() - 1
        rank += 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows if r != pivot]
        rows = [r for r in rows if r]
    return rank


def is_lin_permutation(L: LinPoly) -> bool:
    """True iff ker L = {0}."""
    ctx = L.ctx
    if ctx.n <= KERNEL_ENUM_MAX_N:
        return int(np.count_nonzero(lin_eval_all(L) == 0)) == 1
    # images of the polynomial basis span the image; full rank <=> injective
    return gf2_rank([lin_eval(L, 1 << i) for i in range(ctx.n)]) == ctx.n


def dickson_matrix(L: LinPoly) -> list[list[int]]:
    """Rows (a_0 .. a_{t-1}), (a_{t-1}^q, a_0^q, ...), ..."""
    ctx = L.ctx
    t = len(L.coeffs)
    return [[ctx.frob(L.coeffs[(j - k) % t], k * L.s) for j in range(t)] for k in range(t)]


def field_det(ctx: FieldCtx, M: list[list[int]]) -> int:
    """Determinant over GF(2^n) by Gaussian elimination (row swaps are free in char 2)."""
    M = [row[:] for row in M]
    t = len(M)
    det = 1
    for c in range(t):
        p = next((r for r in range(c, t) if M[r][c]), None)
        if p is None:
            return 0
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        det = ctx.mul(det, piv)
        inv = ctx.inv(piv)
        for r in range(c + 1, t):
            if M[r][c]:
                f = ctx.mul(M[r][c], inv)
                M[r] = [x ^ ctx.mul(f, y) for x, y in zip(M[r], M[c])]
    return det


def dickson_det(L: LinPoly) -> int:
    """Dickson determinant of a q-polynomial (s = m of the context split)."""
    ctx = L.ctx
    if ctx.m is None or L.s != ctx.m:
        raise FieldError("dickson_det needs a LinPoly with s equal to the split m")
    return field_det(ctx, dickson_matrix(L))


def field_det_vec(ctx: FieldCtx, M: list[list[np.ndarray]]) -> np.ndarray:
    """Batched determinant: ``M[r][c]`` are equal-length arrays, one matrix per index."""
    t = len(M)
    width = len(M[0][0])
    A = np.stack([np.stack([np.asarray(x, dtype=np.int64) for x in row]) for row in M])  # (t, t, B)
    det = np.ones(width, dtype=np.int64)
    cols = np.arange(width)
    for c in range(t):
        nz = A[c:, c, :] != 0
        has = nz.any(axis=0)
        det = np.where(has, det, 0)
        p = c + np.argmax(nz, axis=0)
        pivot_row = A[p, :, cols].T  # (t, B)
        A[p, :, cols] = A[c, :, cols]
        A[c] = pivot_row
        piv = np.where(has, A[c, c], 1)
        det = ctx.vmul(det, piv)
        inv = ctx.vinv(piv)
        for r in range(c + 1, t):
            f = ctx.vmul(A[r, c], inv)
            if f.any():
                A[r] ^= ctx.vmul(f[None, :], A[c])
    return det


def dual_coefficients(F, bs: np.ndarray) -> list[np.ndarray]:
    """(A_0, ..., A_{t-1}) of the dual of the derivative of F, batched over b.

    A_0 = b and A_j = sum_i (c_{j,i} b)^(2^(n-i)) + sum_i (c_{t-j,i} b)^(2^(jm-i)).
    """
    ctx = F.ctx
    n, m, t = ctx.n, ctx.m, ctx.t
    fam = F.family_view()
    bs = np.asarray(bs, dtype=np.int64)
    A = [bs]
    for j in range(1, t):
        acc = np.zeros_like(bs)
        for (k, i), c in fam.items():
            if k == j:
                acc ^= ctx.vfrob(ctx.vmul(c, bs), n - i)
            if k == t - j:
                acc ^= ctx.vfrob(ctx.vmul(c, bs), j * m - i)
        A.append(acc)
    return A


def dual_of_derivative(F, b: int) -> LinPoly:
    """The dual q-polynomial L*_b with L*_b(a) = sum_j A_j a^(q^j)."""
    ctx = F.ctx
    n, m, t = ctx.n, ctx.m, ctx.t
    fam = F.family_view()
    coeffs = [b]
    for j in range(1, t):
        acc = 0
        for (k, i), c in fam.items():
            if k == j:
                acc ^= ctx.frob(ctx.mul(c, b), n - i)
            if k == t - j:
                acc ^= ctx.frob(ctx.mul(c, b), j * m - i)
        coeffs.append(acc)
    return LinPoly(ctx, m, tuple(coeffs))


def dickson_det_vec(ctx: FieldCtx, A: list[np.ndarray]) -> np.ndarray:
    """Dickson determinant of (A_0..A_{t-1}) batched over the array axis."""
    t = len(A)
    m = ctx.m
    M = [[ctx.vfrob(A[(j - k) % t], k * m) for j in range(t)] for k in range(t)]
    return field_det_vec(ctx, M)
