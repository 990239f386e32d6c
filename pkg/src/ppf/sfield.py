"""Commutative presemifields x * y = xy + F(x+y) + F(x) + F(y) and their semifields."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .functions import DOQuad
from .gf2 import FieldCtx, FieldError

TABLE_MAX_N = 10
SCAN_MAX_N = 8


def star(F: DOQuad, x: int, y: int) -> int:
    ctx = F.ctx
    return ctx.mul(x, y) ^ F.eval(x ^ y) ^ F.eval(x) ^ F.eval(y)


def _guard(n: int, limit: int, what: str, allow_large: bool):
    if n > limit and not allow_large:
        raise FieldError(f"{what} limited to n <= {limit} (pass allow_large=True to override)")


class Presemifield:
    """The product table of x * y; construction rejects zero divisors."""

    def __init__(self, F: DOQuad, check: bool = True):
        ctx = F.ctx
        _guard(ctx.n, TABLE_MAX_N, "presemifield tables", False)
        self.F = F
        self.ctx = ctx
        xs = np.arange(ctx.size, dtype=np.int64)
        T = F.table()
        self.table = ctx.vmul(xs[:, None], xs[None, :]) ^ T[xs[:, None] ^ xs[None, :]] ^ T[:, None] ^ T[None, :]
        self.table.setflags(write=False)
        if check:
            zd = np.argwhere(self.table[1:, 1:] == 0)
            if len(zd):
                x, y = (int(v) + 1 for v in zd[0])
                raise FieldError(f"zero divisor: {x:#x} * {y:#x} = 0, so F is not pseudo-planar")

    def __call__(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    @property
    def commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))


@dataclass
class SemifieldTable:
    ctx: FieldCtx
    table: np.ndarray
    identity: int
    e: int

    def __call__(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    @property
    def size(self) -> int:
        return self.table.shape[0]

    @cached_property
    def commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def check_axioms(self) -> bool:
        """Identity laws and both distributive laws, exhaustively."""
        S = self.table
        xs = np.arange(self.size)
        if not (np.array_equal(S[self.identity], xs) and np.array_equal(S[:, self.identity], xs)):
            return False
        for a in range(self.size):
            # a o (x + y) = a o x + a o y  and  (x + y) o a = x o a + y o a
            xy = xs[:, None] ^ xs[None, :]
            if not np.array_equal(S[a][xy], S[a][:, None] ^ S[a][None, :]):
                return False
            if not np.array_equal(S[:, a][xy], S[:, a][:, None] ^ S[:, a][None, :]):
                return False
        return True


def derive_semifield(F: DOQuad | Presemifield, e: int = 1) -> SemifieldTable:
    """x o y = R^-1(x) * L^-1(y) with R(u) = u * e and L(v) = e * v; identity e * e."""
    P = F if isinstance(F, Presemifield) else Presemifield(F)
    ctx = P.ctx
    if not 0 < e < ctx.size:
        raise FieldError("e must be a nonzero field element")
    right, left = P.table[:, e], P.table[e, :]
    rinv = np.full(ctx.size, -1, dtype=np.int64)
    linv = np.full(ctx.size, -1, dtype=np.int64)
    rinv[right] = np.arange(ctx.size)
    linv[left] = np.arange(ctx.size)
    if (rinv < 0).any() or (linv < 0).any():
        raise FieldError(f"translation by e={e:#x} is not bijective, so F is not pseudo-planar")
    table = P.table[rinv[:, None], linv[None, :]]
    table.setflags(write=False)
    return SemifieldTable(ctx, table, int(P.table[e, e]), e)


def is_associative(S: SemifieldTable, allow_large: bool = False) -> bool:
    _guard(S.ctx.n, SCAN_MAX_N, "associativity scan", allow_large)
    T = S.table
    for a in range(S.size):
        # (a o x) o y == a o (x o y) for all x, y
        if not np.array_equal(T[T[a]], T[a][T]):
            return False
    return True


@dataclass
class Nuclei:
    left: np.ndarray
    middle: np.ndarray
    right: np.ndarray

    def sizes(self) -> dict[str, int]:
        return {k: int(getattr(self, k).sum()) for k in ("left", "middle", "right")}

    def elements(self, which: str) -> list[int]:
        return [int(x) for x in np.flatnonzero(getattr(self, which))]


def nuclei(S: SemifieldTable, allow_large: bool = False) -> Nuclei:
    """Left, middle and right nuclei by exhaustive scan; each is checked to be a subfield."""
    _guard(S.ctx.n, SCAN_MAX_N, "nucleus scan", allow_large)
    T = S.table
    size = S.size
    left = np.zeros(size, dtype=bool)
    middle = np.zeros(size, dtype=bool)
    right = np.zeros(size, dtype=bool)
    for a in range(size):
        Ta, Tca = T[a], T[:, a]
        left[a] = np.array_equal(T[Ta], Ta[T])  # (a x) y = a (x y)
        middle[a] = np.array_equal(T[Tca], T[:, Ta])  # (x a) y = x (a y)
        right[a] = np.array_equal(Tca[T], T[:, Tca])  # (x y) a = x (y a)
    out = Nuclei(left, middle, right)
    for name in ("left", "middle", "right"):
        els = np.flatnonzero(getattr(out, name))
        if not _is_subfield(T, els):
            raise AssertionError(f"{name} nucleus is not closed")  # pragma: no cover
    return out


def _is_subfield(T: np.ndarray, els: np.ndarray) -> bool:
    if len(els) & (len(els) - 1):
        return False
    member = np.zeros(T.shape[0], dtype=bool)
    member[els] = True
    sums = els[:, None] ^ els[None, :]
    prods = T[els[:, None], els[None, :]]
    return bool(member[sums].all() and member[prods].all())
