"""The Galois ring GR(4^n) in Teichmuller coordinates.

Every ring element is uniquely ``t(a) + 2 t(b)`` with ``t`` the Teichmuller
lift, so a :class:`GrElem` is just the pair ``(a, b)`` of GF(2^n) elements.
The carry rule ``t(u) + t(v) = t(u + v) + 2 t(sqrt(uv))`` drives addition;
multiplication only needs multiplicativity of ``t`` and ``4 = 0``.

Z4 values are plain ints in ``0..3``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .functions import DOQuad
from .gf2 import FieldCtx, FieldError

RDS_MAX_N = 12


class GrElem(NamedTuple):
    a: int
    b: int


class GaloisRing:
    """GR(4^n) over the residue field ``ctx``; scalar and vectorized ops."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.size = ctx.size * ctx.size

    def __repr__(self):
        return f"GaloisRing({self.ctx!r})"

    # ----- constants / coercions

    zero = GrElem(0, 0)
    one = GrElem(1, 0)

    def teich(self, u: int) -> GrElem:
        return GrElem(u, 0)

    def two(self, u: int = 1) -> GrElem:
        """2 t(u)."""
        return GrElem(0, u)

    def from_z4(self, k: int) -> GrElem:
        """Image of k in the prime ring Z4."""
        return (self.zero, self.one, GrElem(0, 1), GrElem(1, 1))[k % 4]

    def index(self, x: GrElem) -> int:
        return x.a + self.ctx.size * x.b

    def from_index(self, i: int) -> GrElem:
        return GrElem(i % self.ctx.size, i // self.ctx.size)

    # ----- scalar ring operations

    def add(self, x: GrElem, y: GrElem) -> GrElem:
        ctx = self.ctx
        return GrElem(x.a ^ y.a, x.b ^ y.b ^ ctx.sqrt(ctx.mul(x.a, y.a)))

    def neg(self, x: GrElem) -> GrElem:
        # -t(u) = 3 t(u) = t(u) + 2 t(u)
        return GrElem(x.a, x.a ^ x.b)

    def sub(self, x: GrElem, y: GrElem) -> GrElem:
        return self.add(x, self.neg(y))

    def mul(self, x: GrElem, y: GrElem) -> GrElem:
        ctx = self.ctx
        return GrElem(ctx.mul(x.a, y.a), ctx.mul(x.a, y.b) ^ ctx.mul(x.b, y.a))

    def frob(self, x: GrElem, k: int = 1) -> GrElem:
        ctx = self.ctx
        return GrElem(ctx.frob(x.a, k), ctx.frob(x.b, k))

    @cached_property
    def trace_table(self) -> np.ndarray:
        """tr_R(t(a)) in Z4 for every a, via the carry chain t(a) + t(a^2) + ..."""
        ctx = self.ctx
        xs = np.arange(ctx.size, dtype=np.int64)
        sa, sb = np.zeros_like(xs), np.zeros_like(xs)
        y = xs
        for _ in range(ctx.n):
            sa, sb = self.vadd(sa, sb, y, np.zeros_like(y))
            y = ctx.vfrob(y, 1)
        # the sum lies in Z4 = {0, 1, 2, 1+2}: a-part and b-part are 0 or 1
        if np.any(sa > 1) or np.any(sb > 1):  # pragma: no cover - structural
            raise AssertionError("ring trace left the prime ring")
        out = (sa + 2 * sb) % 4
        out.setflags(write=False)
        return out

    def tr(self, x: GrElem) -> int:
        """tr_R(t(a) + 2 t(b)) = tr_R(t(a)) + 2 tr(b) in Z4."""
        return int(self.trace_table[x.a] + 2 * self.ctx.trace(x.b)) % 4

    # ----- vectorized (a, b arrays)

    def vadd(self, a, b, c, d):
        ctx = self.ctx
        a, c = np.asarray(a, dtype=np.int64), np.asarray(c, dtype=np.int64)
        return a ^ c, np.asarray(b) ^ np.asarray(d) ^ ctx.vfrob(ctx.vmul(a, c), ctx.n - 1)

    def vneg(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        return a, a ^ np.asarray(b, dtype=np.int64)

    def vmul(self, a, b, c, d):
        ctx = self.ctx
        return ctx.vmul(a, c), ctx.vmul(a, d) ^ ctx.vmul(b, c)

    def vtr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (self.trace_table[a] + 2 * self.ctx.vtrace(b)) % 4


def gr_add(R: GaloisRing, x: GrElem, y: GrElem) -> GrElem:
    return R.add(x, y)


def gr_mul(R: GaloisRing, x: GrElem, y: GrElem) -> GrElem:
    return R.mul(x, y)


def tr_r(R: GaloisRing, x: GrElem) -> int:
    return R.tr(x)


# ---------- relative difference sets


def rds_from_function(F: DOQuad | None, ctx: FieldCtx | None = None) -> list[GrElem]:
    """D = {t(x) + 2 t(sqrt(F(x)))}, listed in order of x.  ``F=None`` means F = 0."""
    if F is not None:
        ctx = F.ctx
    if ctx is None:
        raise FieldError("need a field context when F is None")
    if ctx.n > RDS_MAX_N:
        raise FieldError(f"RDS construction limited to n <= {RDS_MAX_N}")
    xs = np.arange(ctx.size, dtype=np.int64)
    vals = F.table() if F is not None else np.zeros_like(xs)
    roots = ctx.vfrob(vals, ctx.n - 1)
    return [GrElem(int(x), int(r)) for x, r in zip(xs, roots)]


@dataclass
class RdsReport:
    ok: bool
    size: int
    unit_coverage: Counter = field(default_factory=Counter)
    forbidden_hits: int = 0
    first_violation: GrElem | None = None
    violation_count: int | None = None

    def histogram(self) -> dict[str, int]:
        """Number of non-forbidden elements hit k times, keyed by k."""
        return {str(k): v for k, v in sorted(self.unit_coverage.items())}


def difference_counts(R: GaloisRing, D) -> np.ndarray:
    """Multiplicity of every ring element (by index) among d - d', d != d'."""
    size = R.ctx.size
    a = np.fromiter((d.a for d in D), dtype=np.int64, count=len(D))
    b = np.fromiter((d.b for d in D), dtype=np.int64, count=len(D))
    na, nb = R.vneg(a, b)
    counts = np.zeros(R.size, dtype=np.int64)
    rows = max(1, (1 << 20) // max(1, len(D)))
    for lo in range(0, len(D), rows):
        hi = min(len(D), lo + rows)
        sa, sb = R.vadd(a[lo:hi, None], b[lo:hi, None], na[None, :], nb[None, :])
        idx = sa + size * sb
        keep = np.ones(idx.shape, dtype=bool)
        i = np.arange(lo, hi)
        keep[i - lo, i] = False
        counts += np.bincount(idx[keep], minlength=R.size)
    return counts


def verify_rds(R: GaloisRing, D) -> RdsReport:
    """(2^n, 2^n, 2^n, 1) RDS test in (R, +) relative to the forbidden subgroup 2R."""
    ctx = R.ctx
    D = list(D)
    if len(D) != ctx.size:
        return RdsReport(False, len(D))
    counts = difference_counts(R, D).reshape(ctx.size, ctx.size)  # [b, a]
    unit = counts[:, 1:]
    forbidden = counts[1:, 0]
    hist = Counter(int(k) for k in np.asarray(unit).ravel())
    bad_unit = unit != 1
    report = RdsReport(
        ok=not bad_unit.any() and not forbidden.any(),
        size=len(D),
        unit_coverage=hist,
        forbidden_hits=int(forbidden.sum()),
    )
    if not report.ok:
        wrong = np.zeros(counts.shape, dtype=bool)
        wrong[:, 1:] = bad_unit
        wrong[1:, 0] = forbidden != 0
        bs, as_ = np.nonzero(wrong)  # row-major = ring index order
        report.first_violation = GrElem(int(as_[0]), int(bs[0]))
        report.violation_count = int(wrong.sum())
    return report
