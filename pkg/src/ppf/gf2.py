"""Arithmetic in GF(2^n) and its subfield tower.

Elements are plain Python ints: bit ``i`` is the coefficient of ``x^i`` in the
polynomial basis defined by the context's irreducible polynomial.  The
vectorized helpers (``v*`` methods) operate on numpy integer arrays and need
exp/log tables, which exist for ``n <= 20``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

MAX_N = 32
TABLE_EAGER_N = 16
TABLE_MAX_N = 20


class FieldError(ValueError):
    """Raised for invalid field parameters or out-of-domain operations."""


# ---------- GF(2)[x] helpers (ints as coefficient vectors)


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit vectors."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(clmul(a, b), m)


def smallest_factor_degree(poly: int) -> int:
    """Degree of the smallest irreducible factor of ``poly`` over GF(2).

    Uses distinct-degree style gcds: ``gcd(x^(2^d) - x, f)`` is nontrivial for
    the first time at the least factor degree ``d``.
    """
    n = poly.bit_length() - 1
    if n < 1:
        raise FieldError("polynomial must have degree >= 1")
    if n == 1:
        return 1
    if poly & 1 == 0:
        return 1
    xpow = 0b10
    for d in range(1, n // 2 + 1):
        xpow = poly_mulmod(xpow, xpow, poly)
        if poly_gcd(poly, xpow ^ 0b10) != 1:
            return d
    return n


def is_irreducible(poly: int) -> bool:
    return smallest_factor_degree(poly) == poly.bit_length() - 1


def default_poly(n: int) -> int:
    """Least monic irreducible of degree ``n`` with nonzero constant term."""
    for p in range((1 << n) | 1, 1 << (n + 1), 2):
        if is_irreducible(p):
            return p
    raise FieldError(f"no irreducible polynomial of degree {n}")  # pragma: no cover


def _prime_factors(x: int) -> list[int]:
    out = []
    d = 2
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            while x % d == 0:
                x //= d
        d += 1
    if x > 1:
        out.append(x)
    return out


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=8)
def _build_tables(n: int, poly: int, g: int) -> tuple[np.ndarray, np.ndarray]:
    order = (1 << n) - 1
    exp = np.zeros(2 * order + 1, dtype=np.int64)
    log = np.full(1 << n, -1, dtype=np.int64)
    x = 1
    for k in range(order):
        exp[k] = x
        x <<= 1
        if x >> n:
            x ^= poly
    if g != 2:
        # x was not primitive: rebuild by repeated multiplication by g
        x = 1
        for k in range(order):
            exp[k] = x
            x = poly_mod(clmul(x, g), poly)
    log[exp[:order]] = np.arange(order)
    exp[order : 2 * order] = exp[:order]
    exp[2 * order] = exp[0]
    exp.flags.writeable = False
    log.flags.writeable = False
    return exp, log


# ---------- field context


@dataclass(frozen=True)
class SubfieldPoly:
    """Monic ``x^t + B_1 x^(t-1) + ... + B_t`` with coefficients in GF(q)."""

    coeffs: tuple[int, ...]  # (B_1, ..., B_t)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def evaluate(self, ctx: "FieldCtx", x: int) -> int:
        acc = 1
        for c in self.coeffs:
            acc = ctx.mul(acc, x) ^ c
        return acc


class FieldCtx:
    """The field GF(2^n), optionally viewed as a degree-t extension of GF(2^m).

    Instances are immutable; exp/log tables are built eagerly for n <= 16 and
    on first vectorized use up to n = 20.
    """

    def __init__(self, n: int, poly: int | None = None, m: int | None = None):
        if not isinstance(n, int) or not 1 <= n <= MAX_N:
            raise FieldError(f"extension degree n={n} outside 1..{MAX_N}")
        if poly is None:
            poly = default_poly(n)
        else:
            if poly.bit_length() - 1 != n:
                raise FieldError(f"polynomial 0x{poly:x} is not monic of degree {n}")
            d = smallest_factor_degree(poly)
            if d != n:
                raise FieldError(f"polynomial 0x{poly:x} is reducible: has a factor of degree {d}")
        if m is not None:
            if m < 1 or n % m or n // m < 2:
                raise FieldError(f"invalid split m={m} for n={n} (need m | n and t = n/m >= 2)")
        self.n = n
        self.poly = poly
        self.m = m
        self.size = 1 << n
        self.order = self.size - 1
        if n <= TABLE_EAGER_N:
            self.tables  # noqa: B018 - force build

    # ----- identity / split

    def __repr__(self):
        split = f", m={self.m}" if self.m else ""
        return f"FieldCtx(n={self.n}, poly=0x{self.poly:x}{split})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.n, self.poly, self.m) == (other.n, other.poly, other.m)

    def __hash__(self):
        return hash((self.n, self.poly, self.m))

    def with_split(self, m: int | None) -> "FieldCtx":
        """Same field, different (t, m) split; tables are shared."""
        if m == self.m:
            return self
        new = FieldCtx.__new__(FieldCtx)
        if m is not None and (m < 1 or self.n % m or self.n // m < 2):
            raise FieldError(f"invalid split m={m} for n={self.n} (need m | n and t = n/m >= 2)")
        new.n, new.poly, new.m, new.size, new.order = self.n, self.poly, m, self.size, self.order
        if "tables" in self.__dict__:
            new.__dict__["tables"] = self.__dict__["tables"]
        return new

    @property
    def t(self) -> int:
        self._need_split()
        return self.n // self.m

    @property
    def q(self) -> int:
        self._need_split()
        return 1 << self.m

    def _need_split(self):
        if self.m is None:
            raise FieldError("operation needs a (t, m) split on the field context")

    def spec(self) -> str:
        s = f"n={self.n},poly=0x{self.poly:x}"
        return s + (f",m={self.m}" if self.m else "")

    def elements(self) -> range:
        return range(self.size)

    # ----- tables

    @cached_property
    def generator(self) -> int:
        """Least-encoding primitive element."""
        if self.n == 1:
            return 1
        factors = _prime_factors(self.order)
        for g in range(2, self.size):
            if all(self._pow_slow(g, self.order // p) != 1 for p in factors):
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log) with exp of length 2*order + 1 and log[0] = -1."""
        if self.n > TABLE_MAX_N:
            raise FieldError(f"exp/log tables are limited to n <= {TABLE_MAX_N}")
        return _build_tables(self.n, self.poly, self.generator)

    @property
    def has_tables(self) -> bool:
        return "tables" in self.__dict__

    # ----- scalar arithmetic

    def _mul_slow(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.poly)

    def mul_slow(self, a: int, b: int) -> int:
        """Shift-and-reduce multiplication; never touches the tables."""
        return self._mul_slow(a, b)

    def _pow_slow(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, x)
            x = self._mul_slow(x, x)
            e >>= 1
        return r

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.has_tables:
            exp, log = self.tables
            return int(exp[log[a] + log[b]])
        return self._mul_slow(a, b)

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x = self.inv(x)
            e = -e
        if e == 0:
            return 1
        if not x:
            return 0
        if self.has_tables:
            exp, log = self.tables
            return int(exp[(int(log[x]) * e) % self.order])
        return self._pow_slow(x, e % self.order or self.order)

    def inv(self, x: int) -> int:
        if not x:
            raise ZeroDivisionError("inverse of 0 in GF(2^n)")
        return self.pow(x, self.order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, x: int, k: int = 1) -> int:
        """x^(2^k); k is taken modulo n."""
        k %= self.n
        if not k or x < 2:
            return x
        if self.has_tables:
            exp, log = self.tables
            return int(exp[(int(log[x]) << k) % self.order])
        for _ in range(k):
            x = self._mul_slow(x, x)
        return x

    def sqrt(self, x: int) -> int:
        return self.frob(x, self.n - 1)

    def _check_divisor(self, k: int):
        if k < 1 or self.n % k:
            raise FieldError(f"{k} does not divide n={self.n}")

    def trace(self, x: int, k: int = 1) -> int:
        """Relative trace tr_{n/k}(x)."""
        self._check_divisor(k)
        acc = 0
        y = x
        for _ in range(self.n // k):
            acc ^= y
            y = self.frob(y, k)
        return acc

    def rel_trace(self, x: int, d: int, k: int) -> int:
        """tr_{d/k}(x) for x in the subfield GF(2^d), k | d | n."""
        self._check_divisor(d)
        if d % k:
            raise FieldError(f"{k} does not divide {d}")
        acc = 0
        for i in range(d // k):
            acc ^= self.frob(x, i * k)
        return acc

    def norm(self, x: int, k: int = 1) -> int:
        """Relative norm N_{n/k}(x) = x^((2^n - 1)/(2^k - 1))."""
        self._check_divisor(k)
        return self.pow(x, self.order // ((1 << k) - 1))

    def mult_order(self, x: int) -> int:
        if not x:
            raise FieldError("multiplicative order of 0 is undefined")
        e = self.order
        for p in _prime_factors(self.order):
            while e % p == 0 and self.pow(x, e // p) == 1:
                e //= p
        return e

    def in_subfield(self, x: int, k: int) -> bool:
        self._check_divisor(k)
        return self.frob(x, k) == x

    def subfield_elements(self, k: int) -> list[int]:
        """Elements of GF(2^k) inside this field, sorted by encoding."""
        self._check_divisor(k)
        if k == self.n:
            return list(range(self.size))
        step = self.order // ((1 << k) - 1)
        h = self.pow(self.generator, step)
        out = [0]
        y = 1
        for _ in range((1 << k) - 1):
            out.append(y)
            y = self.mul(y, h)
        return sorted(out)

    def conjugates(self, b: int) -> list[int]:
        """b, b^q, ..., b^(q^(t-1)) for the context's split."""
        return [self.frob(b, i * self.m) for i in range(self.t)]

    def char_poly(self, b: int) -> SubfieldPoly:
        """Characteristic polynomial of b over GF(q): B_j = e_j(b, b^q, ...)."""
        self._need_split()
        # coefficients of prod (x + x_i), constant term first
        poly = [1]
        for r in self.conjugates(b):
            nxt = [0] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] ^= c
                nxt[i] ^= self.mul(c, r)
            poly = nxt
        # poly[t] == 1; B_j is the coefficient of x^(t-j)
        t = self.t
        return SubfieldPoly(tuple(poly[t - j] for j in range(1, t + 1)))

    def subfield_poly_irreducible(self, coeffs) -> bool:
        """Irreducibility over GF(q) of monic x^t + B_1 x^(t-1) + ... + B_t.

        Decided through its roots in GF(q^t): irreducible iff some root lies in
        no proper intermediate field GF(q^r), r | t.
        """
        self._need_split()
        t = len(coeffs)
        if t != self.t:
            raise FieldError(f"expected degree {self.t}, got {t}")
        if any(not self.in_subfield(c, self.m) for c in coeffs):
            raise FieldError("coefficients must lie in GF(q)")
        proper = [r for r in divisors(t) if r < t]
        xs = np.arange(self.size, dtype=np.int64)
        acc = np.ones_like(xs)
        for c in coeffs:
            acc = self.vmul(acc, xs) ^ c
        for root in np.flatnonzero(acc == 0):
            root = int(root)
            if not any(self.in_subfield(root, r * self.m) for r in proper):
                return True
        return False

    def quad_irreducible(self, a: int, b: int) -> bool:
        """Whether x^2 + a x + b has no root in the field (a != 0)."""
        if not a:
            raise FieldError("x^2 + a x + b criterion needs a != 0")
        return self.trace(self.mul(b, self.inv(self.mul(a, a))), 1) == 1

    # ----- vectorized arithmetic (numpy int64 arrays)

    def vmul(self, a, b):
        exp, log = self.tables
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, x, e: int):
        exp, log = self.tables
        x = np.asarray(x, dtype=np.int64)
        if e == 0:
            return np.ones_like(x)
        if e < 0:
            e %= self.order
        r = exp[(log[x] * (e % self.order)) % self.order]
        return np.where(x == 0, 0, r)

    def vfrob(self, x, k: int):
        k %= self.n
        x = np.asarray(x, dtype=np.int64)
        if not k:
            return x
        return self.vpow(x, 1 << k)

    def vinv(self, x):
        x = np.asarray(x, dtype=np.int64)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of 0 in GF(2^n)")
        return self.vpow(x, self.order - 1)

    def vtrace(self, x, k: int = 1):
        self._check_divisor(k)
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros_like(x)
        y = x
        for _ in range(self.n // k):
            acc ^= y
            y = self.vfrob(y, k)
        return acc

    def vrel_trace(self, x, d: int, k: int):
        """Batched tr_{d/k} on elements of GF(2^d)."""
        self._check_divisor(d)
        if d % k:
            raise FieldError(f"{k} does not divide {d}")
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros_like(x)
        for i in range(d // k):
            acc ^= self.vfrob(x, i * k)
        return acc

    def nonzero_in_generator_order(self) -> np.ndarray:
        """g^0, g^1, ..., g^(2^n - 2)."""
        return self.tables[0][: self.order].copy()


# ---------- construction / parsing


def field_new(n: int, poly: int | None = None, m: int | None = None) -> FieldCtx:
    return FieldCtx(n, poly, m)


_SPEC_RE = re.compile(r"^\s*n\s*=\s*(\d+)\s*((?:,\s*(?:poly|m)\s*=\s*[0-9a-fA-Fx]+\s*)*)$")


def parse_field_spec(spec: str) -> FieldCtx:
    """Parse ``"n=<int>[,poly=0x<hex>][,m=<int>]"``."""
    mt = _SPEC_RE.match(spec)
    if not mt:
        raise FieldError(f"bad field spec {spec!r}; expected n=<int>[,poly=0x<hex>][,m=<int>]")
    n = int(mt.group(1))
    poly = m = None
    for part in filter(None, (p.strip() for p in mt.group(2).split(","))):
        key, val = (s.strip() for s in part.split("="))
        if key == "poly":
            poly = int(val, 16) if val.lower().startswith("0x") else int(val, 0)
        else:
            m = int(val)
    return FieldCtx(n, poly, m)

