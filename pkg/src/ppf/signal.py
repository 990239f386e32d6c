"""Complete MUB sets, optimal codebooks and sensing matrices.

Every vector handled here has entries ``(re + i*im) / sqrt(d)`` with ``re, im``
in {-1, 0, 1} and an integer ``d`` (the squared scale, 1 or 2^n for the objects
built from a pseudo-planar function).  Inner products are sums of such entries,
so ``|<x, y>|^2 = |gaussian integer|^2 / (d_x d_y)`` is compared as an exact
rational.  The Gaussian-integer sums are evaluated with float64 BLAS products;
all operands and partial sums are integers far below 2^53, so these products
are exact, and the result is checked to be integral before use.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .functions import DOQuad, is_pp_table
from .gf2 import FieldCtx, FieldError
from .gring import GaloisRing, GrElem, verify_rds

MUB_MAX_N = 10
VERIFY_MAX_N = 6
CODEBOOK_MAX_N = 6

# omega^k for k in Z4
_RE = np.array([1, 0, -1, 0], dtype=np.int8)
_IM = np.array([0, 1, 0, -1], dtype=np.int8)


def _exact(x: np.ndarray) -> np.ndarray:
    r = np.rint(x)
    if not np.array_equal(r, x):  # pragma: no cover - guarded by magnitudes
        raise ArithmeticError("non-integral Gaussian inner product")
    return r.astype(np.int64)


def gaussian_gram(ar, ai, br, bi) -> tuple[np.ndarray, np.ndarray]:
    """(Re, Im) of the integer matrix a^H-pairing: G[i, j] = sum_k conj(a_ik) b_jk."""
    ar, ai, br, bi = (np.asarray(x, dtype=np.float64) for x in (ar, ai, br, bi))
    re = ar @ br.T + ai @ bi.T
    im = ar @ bi.T - ai @ br.T
    return _exact(re), _exact(im)


# ---------- bases


@dataclass(frozen=True)
class Basis:
    """K vectors of dimension K sharing the squared scale ``dsq``."""

    label: object
    re: np.ndarray
    im: np.ndarray
    dsq: int

    @classmethod
    def from_exponents(cls, label, exps: np.ndarray, dsq: int) -> "Basis":
        e = np.asarray(exps) % 4
        return cls(label, _RE[e], _IM[e], dsq)

    @classmethod
    def standard(cls, k: int, label="inf") -> "Basis":
        return cls(label, np.eye(k, dtype=np.int8), np.zeros((k, k), dtype=np.int8), 1)

    def __len__(self):
        return self.re.shape[0]


class MubBases(Sequence):
    """B_m for m in field order followed by the standard basis B_inf (built on demand)."""

    def __init__(self, F: DOQuad):
        self.F = F
        self.ctx = F.ctx
        self.R = GaloisRing(F.ctx)

    def __len__(self):
        return self.ctx.size + 1

    @cached_property
    def _pairing(self) -> np.ndarray:
        """2 tr(v w) as a (v, w) table."""
        ctx = self.ctx
        xs = np.arange(ctx.size, dtype=np.int64)
        return (2 * ctx.vtrace(ctx.vmul(xs[:, None], xs[None, :]))).astype(np.uint8)

    @cached_property
    def _fw(self):
        ctx = self.ctx
        ws = np.arange(ctx.size, dtype=np.int64)
        return ctx.vmul(ws, ws), self.F.table()

    def exponents(self, m: int) -> np.ndarray:
        """Z4 exponents tr_R(t(m w^2) + 2 t(m F(w) + v w)) indexed [v, w]."""
        ctx = self.ctx
        w2, fw = self._fw
        base = self.R.vtr(ctx.vmul(m, w2), ctx.vmul(m, fw))
        return ((base[None, :] + self._pairing) % 4).astype(np.uint8)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        if i == self.ctx.size:
            return Basis.standard(self.ctx.size)
        return Basis.from_exponents(i, self.exponents(i), self.ctx.size)


def mub_from_function(F: DOQuad, check: bool = True) -> MubBases:
    """The 2^n + 1 bases; F is brute-force checked for pseudo-planarity first."""
    ctx = F.ctx
    if ctx.n > MUB_MAX_N:
        raise FieldError(f"MUB construction limited to n <= {MUB_MAX_N}")
    if check and not is_pp_table(ctx, F.table()):
        raise FieldError("F is not pseudo-planar; the bases would not be mutually unbiased")
    return MubBases(F)


@dataclass
class MubReport:
    ok: bool
    dimension: int
    bases: int
    cross_pairs: int = 0
    orthonormal: bool = True
    worst_deviation: Fraction = Fraction(0)
    worst_pair: tuple | None = None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "dimension": self.dimension,
            "bases": self.bases,
            "cross_pairs": self.cross_pairs,
            "orthonormal": self.orthonormal,
            "worst_deviation": str(self.worst_deviation),
            "worst_pair": None if self.worst_pair is None else [str(x) for x in self.worst_pair],
        }


def verify_mub(bases, max_n: int = VERIFY_MAX_N) -> MubReport:
    """Exact check: every basis orthonormal, every cross pair |<x,y>|^2 = 1/K."""
    bases = list(bases)
    K = len(bases[0])
    if K > 1 << max_n:
        raise FieldError(f"exhaustive MUB verification limited to dimension <= 2^{max_n}")
    rep = MubReport(ok=True, dimension=K, bases=len(bases))
    for s, X in enumerate(bases):
        re, im = gaussian_gram(X.re, X.im, X.re, X.im)
        if not (np.array_equal(re, X.dsq * np.eye(K, dtype=np.int64)) and not im.any()):
            rep.ok = rep.orthonormal = False
            bad = np.argwhere((re != X.dsq * np.eye(K, dtype=np.int64)) | (im != 0))[0]
            if rep.worst_pair is None:
                rep.worst_pair = (X.label, int(bad[0]), X.label, int(bad[1]))
        for Y in bases[s + 1 :]:
            re, im = gaussian_gram(X.re, X.im, Y.re, Y.im)
            num = re * re + im * im
            rep.cross_pairs += num.size
            # |<x,y>|^2 = num / (dx dy) must equal 1/K, i.e. K num = dx dy
            dev = np.abs(K * num - X.dsq * Y.dsq)
            k = int(np.argmax(dev))
            worst = Fraction(int(dev.flat[k]), K * X.dsq * Y.dsq)
            if worst:
                rep.ok = False
            if worst > rep.worst_deviation:
                i, j = divmod(k, num.shape[1])
                rep.worst_deviation = worst
                rep.worst_pair = (X.label, i, Y.label, j)
    return rep


# ---------- codebooks


@dataclass
class Codebook:
    """N unit vectors of dimension K; row r is (re[r] + i im[r]) / sqrt(dsq[r])."""

    re: np.ndarray
    im: np.ndarray
    dsq: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.re = np.asarray(self.re, dtype=np.int8)
        self.im = np.asarray(self.im, dtype=np.int8)
        self.dsq = np.asarray(self.dsq, dtype=np.int64)
        norms = (self.re.astype(np.int64) ** 2 + self.im.astype(np.int64) ** 2).sum(axis=1)
        if not np.array_equal(norms, self.dsq):
            bad = int(np.flatnonzero(norms != self.dsq)[0])
            raise ValueError(f"codeword {bad} does not have unit norm")

    @property
    def N(self) -> int:
        return self.re.shape[0]

    @property
    def K(self) -> int:
        return self.re.shape[1]

    @classmethod
    def from_bases(cls, bases, meta=None) -> "Codebook":
        bases = list(bases)
        return cls(
            np.concatenate([B.re for B in bases]),
            np.concatenate([B.im for B in bases]),
            np.concatenate([np.full(len(B), B.dsq) for B in bases]),
            dict(meta or {}),
        )

    def alphabet(self) -> list[tuple[int, int, int]]:
        """Distinct entry values as (re, im, dsq); zero is (0, 0, 1)."""
        d = np.broadcast_to(self.dsq[:, None], self.re.shape)
        zero = (self.re == 0) & (self.im == 0)
        d = np.where(zero, 1, d)
        trip = np.stack([self.re.astype(np.int64).ravel(), self.im.astype(np.int64).ravel(), d.ravel()], axis=1)
        return sorted(tuple(int(v) for v in row) for row in np.unique(trip, axis=0))

    def _scaled_pairs(self, block: int = 1024):
        """Yield (rows, |<c_i, c_j>|^2 * L^2) with L = lcm of the squared scales."""
        L = math.lcm(*{int(x) for x in self.dsq})
        for lo in range(0, self.N, block):
            hi = min(self.N, lo + block)
            re, im = gaussian_gram(self.re[lo:hi], self.im[lo:hi], self.re, self.im)
            num = re * re + im * im
            scale = (L * L) // np.outer(self.dsq[lo:hi], self.dsq)
            yield lo, hi, num * scale, L

    @cached_property
    def imax_sq(self) -> Fraction:
        """max_{i != j} |<c_i, c_j>|^2, exact."""
        best, L = 0, 1
        for lo, hi, val, L in self._scaled_pairs():
            idx = np.arange(lo, hi)
            val[idx - lo, idx] = -1
            best = max(best, int(val.max()))
        return Fraction(best, L * L)

    @property
    def imax(self) -> float:
        return math.sqrt(self.imax_sq)

    def gram_spectrum(self) -> Counter:
        """Multiset of off-diagonal |<c_i, c_j>|^2 values (ordered pairs)."""
        out: Counter = Counter()
        for lo, hi, val, L in self._scaled_pairs():
            idx = np.arange(lo, hi)
            val[idx - lo, idx] = -1
            vals, counts = np.unique(val[val >= 0], return_counts=True)
            for v, c in zip(vals, counts):
                out[Fraction(int(v), L * L)] += int(c)
        return out

    def vector_set(self) -> set:
        return {
            (r.tobytes(), i.tobytes(), int(d)) for r, i, d in zip(self.re, self.im, self.dsq)
        }

    def to_complex(self) -> np.ndarray:
        return (self.re + 1j * self.im) / np.sqrt(self.dsq)[:, None]


def codebook_from_function(F: DOQuad) -> Codebook:
    """Union of the MUB vectors B_m (m, v in field order) and the standard basis."""
    ctx = F.ctx
    if ctx.n > CODEBOOK_MAX_N:
        raise FieldError(f"codebook materialization limited to n <= {CODEBOOK_MAX_N}")
    return Codebook.from_bases(mub_from_function(F), meta={"field": ctx.spec(), "source": "mub"})


def rds_character_exponents(R: GaloisRing, D) -> np.ndarray:
    """tr_R(y d_j) for every y in R (by ring index a + 2^n b) and d_j in D."""
    ctx = R.ctx
    a = np.fromiter((d.a for d in D), dtype=np.int64, count=len(D))
    b = np.fromiter((d.b for d in D), dtype=np.int64, count=len(D))
    out = np.empty((R.size, len(D)), dtype=np.uint8)
    betas = np.arange(ctx.size, dtype=np.int64)[:, None]
    for alpha in range(ctx.size):
        # (alpha + 2 beta)(a + 2 b) = alpha a + 2 (alpha b + beta a)
        pa, pb = ctx.vmul(alpha, a)[None, :], ctx.vmul(alpha, b)[None, :] ^ ctx.vmul(betas, a[None, :])
        out[alpha + ctx.size * betas.ravel()] = R.vtr(np.broadcast_to(pa, pb.shape), pb)
    return out


def rds_codebook(R: GaloisRing, D, check: bool = True) -> Codebook:
    """Codewords chi_y(D)/sqrt(k) for all additive characters chi_y(x) = omega^tr_R(yx), plus E_k."""
    D = list(D)
    if R.ctx.n > CODEBOOK_MAX_N:
        raise FieldError(f"codebook materialization limited to n <= {CODEBOOK_MAX_N}")
    if check and not verify_rds(R, D).ok:
        raise FieldError("D is not a relative difference set relative to 2R")
    E = rds_character_exponents(R, D)
    k = len(D)
    chars = Basis.from_exponents("chars", E, k)
    return Codebook.from_bases([chars, Basis.standard(k)], meta={"field": R.ctx.spec(), "source": "rds"})


def rds_character_for(ctx: FieldCtx, m: int, v: int) -> GrElem:
    """The ring element y whose character codeword equals the MUB vector b_{m,v}.

    With D ordered by x, chi_y(d_x) for y = t(sqrt m) + 2 t(v) equals the
    w = x entry of b_{m,v} (Frobenius invariance of tr_R).
    """
    return GrElem(ctx.sqrt(m), v)


# ---------- bounds and sensing


def levenstein_bound_sq(N: int, K: int) -> Fraction:
    """(2N - K^2 - K) / ((K + 1)(N - K)), defined for N > K^2."""
    if N <= K * K:
        raise ValueError(f"Levenstein bound needs N > K^2 (got N={N}, K={K})")
    return Fraction(2 * N - K * K - K, (K + 1) * (N - K))


def levenstein_bound(N: int, K: int) -> float:
    return math.sqrt(levenstein_bound_sq(N, K))


def welch_bound_sq(N: int, K: int) -> Fraction:
    """(N - K) / ((N - 1) K) for N > K >= 1."""
    if not N > K >= 1:
        raise ValueError(f"Welch bound needs N > K >= 1 (got N={N}, K={K})")
    return Fraction(N - K, (N - 1) * K)


def welch_bound(N: int, K: int) -> float:
    return math.sqrt(welch_bound_sq(N, K))


def meets_levenstein(cb: Codebook) -> bool:
    return cb.imax_sq == levenstein_bound_sq(cb.N, cb.K)


@dataclass
class SensingMatrix:
    matrix: np.ndarray  # K x N, column j is codeword j
    coherence_sq: Fraction

    @property
    def coherence(self) -> float:
        return math.sqrt(self.coherence_sq)


def sensing_matrix(cb: Codebook) -> SensingMatrix:
    """Measurement matrix whose columns are the codewords; coherence = Imax."""
    return SensingMatrix(cb.to_complex().T, cb.imax_sq)


# ---------- export


def codebook_to_dict(cb: Codebook, n: int | None = None) -> dict:
    K = cb.K
    return {
        "n": n if n is not None else K.bit_length() - 1,
        "N": cb.N,
        "K": K,
        "imax_sq": f"{cb.imax_sq.numerator}/{cb.imax_sq.denominator}",
        "imax": float(f"{cb.imax:.17g}"),
        "alphabet": [list(a) for a in cb.alphabet()],
        "alphabet_size": len(cb.alphabet()),
        "scale_denominator_sq": int(cb.dsq.max()),
        "vector_denominator_sq": [int(d) for d in cb.dsq],
        "vectors": [[[int(r), int(i)] for r, i in zip(rr, ii)] for rr, ii in zip(cb.re, cb.im)],
    }


def codebook_to_csv(cb: Codebook) -> str:
    rows = []
    for row in cb.to_complex():
        rows.append(",".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row))
    return "\n".join(rows) + "\n"
