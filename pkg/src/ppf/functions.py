"""Quadratic (Dembowski-Ostrom) functions and the two pseudo-planarity tests.

A :class:`DOQuad` stores ``F(x) = sum c_ij x^(2^i + 2^j)`` over pairs
``0 <= i < j < n``.  When the field carries a split ``n = t*m`` and every pair
has ``m | j - i``, the function also has the structured view
``sum c_{k,i} x^(2^i (q^k + 1))`` with ``k = (j - i)/m`` and ``i < (t - k) m``.
"""

from __future__ import annotations

import re
from types import MappingProxyType

import numpy as np

from .gf2 import FieldCtx, FieldError
from .linop import dickson_det_vec, dual_coefficients

BRUTE_MAX_N = 20
CHUNK = 1 << 16


class DOQuad:
    """A quadratic function with no linearized terms."""

    def __init__(self, ctx: FieldCtx, coeffs=None):
        n = ctx.n
        clean = {}
        for (i, j), c in dict(coeffs or {}).items():
            if not (0 <= i < j < n):
                raise FieldError(f"pair ({i},{j}) must satisfy 0 <= i < j < n={n}")
            if not 0 <= c < ctx.size:
                raise FieldError(f"coefficient {c:#x} is not an element of GF(2^{n})")
            if c:
                clean[(i, j)] = c
        self.ctx = ctx
        self._coeffs = dict(sorted(clean.items()))

    # ----- constructors

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "DOQuad":
        return cls(ctx)

    @classmethod
    def from_family(cls, ctx: FieldCtx, fam) -> "DOQuad":
        """Build from structured coefficients ``{(k, i): c}`` (no wrapping allowed)."""
        t, m = ctx.t, ctx.m
        coeffs = {}
        for (k, i), c in dict(fam).items():
            if not 1 <= k <= t - 1:
                raise FieldError(f"family index k={k} outside 1..{t - 1}")
            if not 0 <= i < (t - k) * m:
                raise FieldError(f"family index i={i} outside 0..{(t - k) * m - 1} for k={k}")
            coeffs[(i, k * m + i)] = c
        return cls(ctx, coeffs)

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms) -> "DOQuad":
        """Build from ``[(coefficient, exponent), ...]``.

        Exponents are reduced with x^(2^n) = x; terms that collapse to a
        linearized monomial are dropped (they never affect pseudo-planarity).
        """
        n = ctx.n
        coeffs: dict[tuple[int, int], int] = {}
        for c, e in terms:
            bits = [p % n for p in range(e.bit_length()) if (e >> p) & 1]
            if len(bits) == 1 or (len(bits) == 2 and bits[0] == bits[1]):
                continue
            if len(bits) != 2:
                raise FieldError(f"exponent {e} does not have 2-weight 2")
            key = (min(bits), max(bits))
            coeffs[key] = coeffs.get(key, 0) ^ c
        return cls(ctx, coeffs)

    # ----- views

    @property
    def coeffs(self):
        return MappingProxyType(self._coeffs)

    def __eq__(self, other):
        return isinstance(other, DOQuad) and self.ctx == other.ctx and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.ctx, tuple(self._coeffs.items())))

    def __repr__(self):
        terms = " + ".join(f"{c:#x}*x^{(1 << i) + (1 << j)}" for (i, j), c in self._coeffs.items())
        return f"DOQuad({terms or '0'} over {self.ctx!r})"

    @property
    def is_family_form(self) -> bool:
        m = self.ctx.m
        return m is not None and all((j - i) % m == 0 for i, j in self._coeffs)

    def family_view(self) -> dict[tuple[int, int], int]:
        """Structured coefficients ``{(k, i): c}``; raises if F is not in family form."""
        m = self.ctx.m
        if m is None:
            raise FieldError("family view needs a (t, m) split on the field")
        fam = {}
        for (i, j), c in self._coeffs.items():
            if (j - i) % m:
                raise FieldError(f"term x^(2^{i}+2^{j}) is not of the form x^(2^i (q^k + 1)) for q = 2^{m}")
            fam[((j - i) // m, i)] = c
        return fam

    def with_ctx(self, ctx: FieldCtx) -> "DOQuad":
        if (ctx.n, ctx.poly) != (self.ctx.n, self.ctx.poly):
            raise FieldError("can only re-split the same field")
        return DOQuad(ctx, self._coeffs)

    # ----- evaluation

    def __call__(self, x: int) -> int:
        return self.eval(x)

    def eval(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        for (i, j), c in self._coeffs.items():
            acc ^= ctx.mul(c, ctx.mul(ctx.frob(x, i), ctx.frob(x, j)))
        return acc

    def veval(self, xs) -> np.ndarray:
        ctx = self.ctx
        xs = np.asarray(xs, dtype=np.int64)
        frobs = {}
        acc = np.zeros_like(xs)
        for (i, j), c in self._coeffs.items():
            for k in (i, j):
                if k not in frobs:
                    frobs[k] = ctx.vfrob(xs, k)
            acc ^= ctx.vmul(c, ctx.vmul(frobs[i], frobs[j]))
        return acc

    def table(self) -> np.ndarray:
        return self.veval(np.arange(self.ctx.size, dtype=np.int64))


# ---------- pseudo-planarity: definition level


def is_pp_table(ctx: FieldCtx, table) -> bool:
    """Pseudo-planarity of an arbitrary function given by its value table.

    For each a != 0 checks that x -> T(x + a) + T(x) + a x hits every element once.
    """
    if ctx.n > BRUTE_MAX_N:
        raise FieldError(f"brute force limited to n <= {BRUTE_MAX_N}; use the criterion test")
    T = np.asarray(table, dtype=np.int64)
    size = ctx.size
    xs = np.arange(size, dtype=np.int64)
    rows = max(1, CHUNK // size)
    for lo in range(1, size, rows):
        a = np.arange(lo, min(size, lo + rows), dtype=np.int64)[:, None]
        d = T[xs[None, :] ^ a] ^ T[None, :] ^ ctx.vmul(a, xs[None, :])
        flat = (np.arange(d.shape[0])[:, None] * size + d).ravel()
        if np.bincount(flat, minlength=d.size).max() != 1:
            return False
    return True


def is_pp_bruteforce(F: DOQuad) -> bool:
    return is_pp_table(F.ctx, F.table())


def bruteforce_witness(ctx: FieldCtx, table) -> int | None:
    """Least a != 0 whose derivative map is not a permutation, or None."""
    T = np.asarray(table, dtype=np.int64)
    xs = np.arange(ctx.size, dtype=np.int64)
    for a in range(1, ctx.size):
        d = T[xs ^ a] ^ T ^ ctx.vmul(a, xs)
        if len(np.unique(d)) != ctx.size:
            return a
    return None


# ---------- pseudo-planarity: determinant criterion


def _det_generic(F: DOQuad, bs: np.ndarray) -> np.ndarray:
    return dickson_det_vec(F.ctx, dual_coefficients(F, bs))


def _det_specialized(F: DOQuad, bs: np.ndarray) -> np.ndarray:
    ctx = F.ctx
    t, m, q = ctx.t, ctx.m, ctx.q
    A = dual_coefficients(F, bs)
    P = ctx.vpow
    if t == 2:
        return P(bs, q + 1) ^ ctx.vmul(A[1], A[1])
    if t == 3:
        return P(bs, q * q + q + 1) ^ ctx.vtrace(ctx.vmul(P(bs, q), P(A[2], 2)), m)
    if t == 4:
        A2, A3 = A[2], A[3]
        q2, q3 = q * q, q**3
        val = P(bs, q3 + q2 + q + 1)
        val ^= P(A2, 2 * q + 2)
        val ^= P(A3, 2 * q2 + 2) ^ P(A3, 2 * q3 + 2 * q)
        val ^= ctx.vmul(P(bs, q2 + 1), P(A2, 2 * q)) ^ ctx.vmul(P(bs, q3 + q), P(A2, 2))
        val ^= ctx.vtrace(ctx.vmul(P(bs, q2 + q), P(A3, 2)), m)
        return val
    raise FieldError(f"no specialized determinant formula for t={t}")


def det_values(F: DOQuad, bs=None, method: str = "generic") -> np.ndarray:
    """det M_b for every b in ``bs`` (default: all nonzero b in generator order)."""
    if not F.is_family_form:
        F.family_view()  # raises with the offending term
    if bs is None:
        bs = F.ctx.nonzero_in_generator_order()
    bs = np.asarray(bs, dtype=np.int64)
    if method == "generic":
        return _det_generic(F, bs)
    if method == "specialized":
        return _det_specialized(F, bs)
    raise ValueError(f"unknown method {method!r}")


def is_pp_criterion(F: DOQuad, method: str = "auto") -> bool:
    """Pseudo-planarity through the nonvanishing of det M_b for all b != 0.

    ``method``: ``"generic"`` (batched Gaussian elimination), ``"specialized"``
    (closed forms for t = 2, 3, 4) or ``"auto"`` (specialized when available).
    """
    ctx = F.ctx
    if ctx.m is None:
        raise FieldError("criterion test needs a (t, m) split on the field")
    if method == "auto":
        method = "specialized" if ctx.t in (2, 3, 4) else "generic"
    bs = ctx.nonzero_in_generator_order()
    step = 4096
    for lo in range(0, len(bs), step):
        if not det_values(F, bs[lo : lo + step], method).all():
            return False
    return True


def criterion_witness(F: DOQuad) -> int | None:
    """First b (generator-power order) with det M_b = 0, or None."""
    bs = F.ctx.nonzero_in_generator_order()
    zero = np.flatnonzero(det_values(F, bs) == 0)
    return int(bs[zero[0]]) if len(zero) else None


# ---------- coefficient spec strings

_TERM_RE = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*=\s*(0[xX][0-9a-fA-F]+|\d+)\s*$")


def parse_function_spec(ctx: FieldCtx, spec: str, generic: bool = False) -> DOQuad:
    """Parse ``"k,i=0xHEX;..."`` (structured) or ``"i,j=0xHEX;..."`` (generic)."""
    pairs = {}
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        mt = _TERM_RE.match(part)
        if not mt:
            raise FieldError(f"bad coefficient term {part!r}; expected a,b=0xHEX")
        a, b = int(mt.group(1)), int(mt.group(2))
        pairs[(a, b)] = pairs.get((a, b), 0) ^ int(mt.group(3), 0)
    if generic:
        return DOQuad(ctx, pairs)
    if ctx.m is None:
        ctx = ctx.with_split(1)
    fam: dict[tuple[int, int], int] = {}
    for (k, i), c in pairs.items():
        key = normalize_family_index(ctx, k, i)
        fam[key] = fam.get(key, 0) ^ c
    return DOQuad.from_family(ctx, fam)


def normalize_family_index(ctx: FieldCtx, k: int, i: int) -> tuple[int, int]:
    """Canonical (k, i) for x^(2^i (q^k + 1)).

    With i >= (t - k) m the exponent wraps modulo 2^n - 1 and equals the
    term (t - k, i - (t - k) m).
    """
    t, m = ctx.t, ctx.m
    if not 1 <= k <= t - 1:
        raise FieldError(f"family index k={k} outside 1..{t - 1}")
    if not 0 <= i < ctx.n:
        raise FieldError(f"family index i={i} outside 0..{ctx.n - 1}")
    if i >= (t - k) * m:
        return t - k, i - (t - k) * m
    return k, i


def format_function_spec(F: DOQuad, generic: bool = False) -> str:
    items = F.coeffs.items() if generic else sorted(F.family_view().items())
    return ";".join(f"{a},{b}={c:#x}" for (a, b), c in items)
