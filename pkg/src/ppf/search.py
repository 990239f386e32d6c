"""Exhaustive searches over structured candidate spaces.

The candidate space is split into disjoint ranges of an outer coefficient;
every range is scanned independently (optionally in worker processes) and the
results are merged in lexicographic order, so counts and listings never depend
on the number of jobs.  Each scan evaluates the determinant criterion through
per-coefficient value tables: the criterion value is the XOR of a b-only term
and one table row per coefficient, and candidates are filtered progressively
over b.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gf2 import FieldCtx, FieldError

log = logging.getLogger(__name__)

DEFAULT_MAX_M = {"trinomial-t3": 2, "t2-general": 3}
B_CHUNK = 8


class LongRunRequired(FieldError):
    """The requested search exceeds the default size guard."""


@dataclass
class SearchResult:
    kind: str
    m: int
    field_spec: str
    candidates: int
    members: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.members)


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("PPF_JOBS", "1")))
    except ValueError:
        return 1


# ---------- per-search tables


def _coset_reps(ctx: FieldCtx) -> np.ndarray:
    """Representatives g^0..g^(R-1) of GF(2^n)* / GF(q)*."""
    reps = ctx.order // (ctx.q - 1)
    return ctx.nonzero_in_generator_order()[:reps]


def trinomial_tables(ctx: FieldCtx):
    """(N, T1, T2, T3) with criterion(c1,c2,c3; b) = N[b] ^ T1[c1,b] ^ T2[c2,b] ^ T3[c3,b].

    b runs over coset representatives of GF(q)*: the value scales by lam^3
    for lam in GF(q)*, so vanishing is a property of the coset.
    """
    q, m = ctx.q, ctx.m
    bs = _coset_reps(ctx)
    cs = np.arange(ctx.size, dtype=np.int64)
    sq = ctx.vmul(cs, cs)
    P = ctx.vpow

    def table(xb):
        return ctx.vtrace(ctx.vmul(sq[:, None], xb[None, :]), m).astype(np.uint16)

    N = P(bs, q * q + q + 1).astype(np.uint16)
    return N, table(P(bs, q * q + 2)), table(P(bs, 3)), table(P(bs, q + 2))


def t2_tables(ctx: FieldCtx):
    """(N, [G_0..G_{m-1}]) with det M_b = N[b] ^ XOR_i G_i[c_i, b] over all b != 0."""
    n, m, q = ctx.n, ctx.m, ctx.q
    bs = ctx.nonzero_in_generator_order()
    cs = np.arange(ctx.size, dtype=np.int64)
    G = []
    for i in range(m):
        cb = ctx.vmul(cs[:, None], bs[None, :])
        a1 = ctx.vfrob(cb, n - i) ^ ctx.vfrob(cb, m - i)
        G.append(ctx.vmul(a1, a1).astype(np.uint16))
    N = ctx.vpow(bs, q + 1).astype(np.uint16)
    return N, G


def _filter(base: np.ndarray, rows: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
    """Indices of candidates whose value base[b] ^ XOR table[idx, b] is nonzero for every b."""
    nb = base.shape[0]
    alive = np.arange(len(rows[0][1]))
    for lo in range(0, nb, B_CHUNK):
        if not len(alive):
            break
        cols = np.arange(lo, min(nb, lo + B_CHUNK))
        val = np.broadcast_to(base[cols], (len(alive), len(cols))).copy()
        for table, idx in rows:
            val ^= table[idx[alive][:, None], cols[None, :]]
        alive = alive[(val != 0).all(axis=1)]
    return alive


# ---------- range workers (module level so they pickle)


def _trinomial_range(args):
    n, poly, m, lo, hi = args
    ctx = FieldCtx(n, poly, m)
    N, T1, T2, T3 = trinomial_tables(ctx)
    size = ctx.size
    c2, c3 = (a.ravel() for a in np.meshgrid(np.arange(size), np.arange(size), indexing="ij"))
    out = []
    for c1 in range(lo, hi):
        alive = _filter(N ^ T1[c1], [(T2, c2), (T3, c3)])
        out.extend((c1, int(c2[k]), int(c3[k])) for k in alive)
    return lo, hi, out


def _t2_range(args):
    n, poly, m, lo, hi = args
    ctx = FieldCtx(n, poly, m)
    N, G = t2_tables(ctx)
    size = ctx.size
    rest = m - 1
    out = []
    for c0 in range(lo, hi):
        base = N ^ G[0][c0]
        if rest == 0:
            if base.all():
                out.append((c0,))
            continue
        if rest == 1:
            idx = [np.arange(size)]
        else:
            idx = [a.ravel() for a in np.meshgrid(*[np.arange(size)] * rest, indexing="ij")]
        alive = _filter(base, [(G[i + 1], idx[i]) for i in range(rest)])
        out.extend((c0,) + tuple(int(ix[k]) for ix in idx) for k in alive)
    return lo, hi, out


_WORKERS = {"trinomial-t3": (_trinomial_range, 3), "t2-general": (_t2_range, 2)}


# ---------- driver


def _load_checkpoint(path: Path | None):
    if path is None or not path.exists():
        return [], []
    data = json.loads(path.read_text())
    done = [tuple(r) for r in data.get("range_done", [])]
    members = [tuple(x) for x in data.get("members", [])]
    if len(members) != data.get("partial_count", len(members)):
        raise ValueError(f"checkpoint {path} is inconsistent: partial_count != len(members)")
    return done, members


def _save_checkpoint(path: Path | None, done, members):
    if path is None:
        return
    tmp = path.with_suffix(path.suffix + ".tmp")
    payload = {"range_done": sorted([list(r) for r in done]), "partial_count": len(members), "members": sorted(members)}
    tmp.write_text(json.dumps(payload))
    tmp.replace(path)


def run_search(
    kind: str,
    m: int,
    jobs: int | None = None,
    long_run: bool = False,
    checkpoint: str | Path | None = None,
    chunk: int | None = None,
    poly: int | None = None,
) -> SearchResult:
    """Exhaustive search ``kind`` in {"trinomial-t3", "t2-general"} for subfield degree m."""
    if kind not in _WORKERS:
        raise ValueError(f"unknown search {kind!r}")
    if m < 1:
        raise FieldError("m must be positive")
    if m > DEFAULT_MAX_M[kind] and not long_run:
        raise LongRunRequired(f"{kind} with m={m} is a long run; pass long_run=True (--long-run)")
    worker, t = _WORKERS[kind]
    ctx = FieldCtx(t * m, poly, m)
    jobs = jobs or default_jobs()
    size = ctx.size
    chunk = chunk or max(1, size // max(8, 4 * jobs))
    ranges = [(lo, min(size, lo + chunk)) for lo in range(0, size, chunk)]
    path = Path(checkpoint) if checkpoint else None
    done, members = _load_checkpoint(path)
    todo = [r for r in ranges if r not in set(done)]
    args = [(ctx.n, ctx.poly, m, lo, hi) for lo, hi in todo]
    log.info("%s m=%d: %d ranges (%d resumed), jobs=%d", kind, m, len(ranges), len(done), jobs)
    if jobs == 1 or len(args) <= 1:
        results = map(worker, args)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(worker, args)
    try:
        for lo, hi, out in results:
            members.extend(out)
            done.append((lo, hi))
            _save_checkpoint(path, done, members)
            log.debug("range [%d,%d) -> %d members", lo, hi, len(out))
    finally:
        if pool is not None:
            pool.shutdown()
    return SearchResult(kind, m, ctx.spec(), size**t, sorted(members))


def search_trinomials_t3(m: int, **kw) -> SearchResult:
    return run_search("trinomial-t3", m, **kw)


def search_t2_general(m: int, **kw) -> SearchResult:
    return run_search("t2-general", m, **kw)
