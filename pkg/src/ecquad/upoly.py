"""Dense univariate polynomials over GF(p).

Coefficients are canonical ints, lowest degree first; the zero polynomial
has an empty coefficient tuple.
"""
from __future__ import annotations

import random
from typing import Iterable, Sequence

from .errors import DivisionByZero, UsageError
from .field import FieldCtx

BRUTE_FORCE_ROOT_LIMIT = 1 << 12


def _strip(cs: list[int]) -> tuple[int, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


class UPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[int] = ()):
        self.ctx = ctx
        p = ctx.p
        self.coeffs = _strip([int(c) % p for c in coeffs])

    @classmethod
    def _raw(cls, ctx: FieldCtx, coeffs: tuple[int, ...]) -> UPoly:
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.coeffs = coeffs
        return obj

    @classmethod
    def x(cls, ctx: FieldCtx) -> UPoly:
        return cls._raw(ctx, (0, 1))

    @classmethod
    def constant(cls, ctx: FieldCtx, c: int) -> UPoly:
        return cls(ctx, [c])

    @classmethod
    def from_roots(cls, ctx: FieldCtx, roots: Iterable[int]) -> UPoly:
        out = cls.constant(ctx, 1)
        for r in roots:
            out = out * cls(ctx, [-int(r), 1])
        return out

    # basic queries

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.ctx.p == other.ctx.p and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _strip([other % self.ctx.p])
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)

    def _coerce(self, other) -> UPoly:
        if isinstance(other, UPoly):
            if other.ctx.p != self.ctx.p:
                raise UsageError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return UPoly(self.ctx, [other])
        if hasattr(other, "value") and hasattr(other, "ctx"):
            return UPoly(self.ctx, [other.value])
        return NotImplemented

    # ring operations

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.ctx.p
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return UPoly._raw(self.ctx, _strip(out))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return UPoly._raw(self.ctx, tuple((-c) % p for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return UPoly._raw(self.ctx, ())
        p = self.ctx.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return UPoly._raw(self.ctx, _strip([c % p for c in out]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise UsageError("negative polynomial power")
        result = UPoly.constant(self.ctx, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c: int) -> UPoly:
        p = self.ctx.p
        c %= p
        if c == 0:
            return UPoly._raw(self.ctx, ())
        return UPoly._raw(self.ctx, tuple(a * c % p for a in self.coeffs))

    def shift(self, k: int) -> UPoly:
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return UPoly._raw(self.ctx, (0,) * k + self.coeffs)

    def monic(self) -> UPoly:
        if not self.coeffs:
            return self
        return self.scale(self.ctx.inv(self.coeffs[-1]))

    def divrem(self, other) -> tuple[UPoly, UPoly]:
        b = self._coerce(other)
        if b.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        p = self.ctx.p
        r = list(self.coeffs)
        db = len(b.coeffs) - 1
        inv_lc = self.ctx.inv(b.coeffs[-1])
        if len(r) - 1 < db:
            return UPoly._raw(self.ctx, ()), self
        q = [0] * (len(r) - db)
        bc = b.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] * inv_lc % p
            if c:
                q[k - db] = c
                base = k - db
                for j in range(db + 1):
                    r[base + j] = (r[base + j] - c * bc[j]) % p
        return UPoly._raw(self.ctx, _strip(q)), UPoly._raw(self.ctx, _strip(r[:db]))

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def __call__(self, x) -> int:
        """Horner evaluation at an int (or FieldElement); returns an int."""
        x = int(x)
        p = self.ctx.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    evaluate = __call__

    def derivative(self) -> UPoly:
        p = self.ctx.p
        return UPoly._raw(self.ctx, _strip([i * c % p for i, c in enumerate(self.coeffs)][1:]))

    def compose(self, other: UPoly) -> UPoly:
        out = UPoly._raw(self.ctx, ())
        for c in reversed(self.coeffs):
            out = out * other + c
        return out

    def powmod(self, e: int, mod: UPoly) -> UPoly:
        result = UPoly.constant(self.ctx, 1) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result


def gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd by Euclid's algorithm."""
    if a.is_zero() and b.is_zero():
        raise UsageError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def derivative(a: UPoly) -> UPoly:
    return a.derivative()


def curve_cubic(curve) -> UPoly:
    """s(x) = x^3 + Ax + B."""
    return UPoly(curve.ctx, [curve.B, curve.A, 0, 1])


def curve_resultant(g: UPoly, h: UPoly, curve) -> UPoly:
    """h^2 - g^2 * (x^3 + Ax + B).

    This is the determinant of the Sylvester matrix of (y*g + h, y^2 - s)
    laid out with descending powers of y, so no sign correction is needed.
    """
    return h * h - g * g * curve_cubic(curve)


def valuation_at(a: UPoly, x0) -> int:
    """Largest k such that (x - x0)^k divides a."""
    if a.is_zero():
        raise UsageError("valuation of the zero polynomial is undefined")
    x0 = int(x0) % a.ctx.p
    p = a.ctx.p
    cs = list(a.coeffs)
    k = 0
    while True:
        # synthetic division by (x - x0)
        n = len(cs)
        q = [0] * (n - 1)
        acc = 0
        for i in range(n - 1, 0, -1):
            acc = (acc * x0 + cs[i]) % p
            q[i - 1] = acc
        rem = (acc * x0 + cs[0]) % p
        if rem or n == 1:
            return k
        cs = q
        k += 1


def roots_in_field(a: UPoly, rng: random.Random | None = None) -> list[tuple[int, int]]:
    """All GF(p)-rational roots of ``a`` with multiplicities, ascending.

    For p below 2^12 every residue is scanned.  Otherwise the rational part
    gcd(a, x^p - x) is split by Cantor-Zassenhaus using ``rng`` (seeded
    deterministically when omitted).
    """
    if a.is_zero():
        raise UsageError("roots of the zero polynomial are undefined")
    ctx = a.ctx
    p = ctx.p
    if a.degree <= 0:
        return []
    if p < BRUTE_FORCE_ROOT_LIMIT:
        roots = [x for x in range(p) if a(x) == 0]
    else:
        if rng is None:
            rng = random.Random(0)
        x = UPoly.x(ctx)
        split = gcd(a, x.powmod(p, a) - x)
        roots = sorted(_equal_degree_roots(split, rng))
    return [(r, valuation_at(a, r)) for r in roots]


def _equal_degree_roots(f: UPoly, rng: random.Random) -> list[int]:
    """Roots of a monic squarefree product of distinct linear factors."""
    p = f.ctx.p
    if f.degree <= 0:
        return []
    if f.degree == 1:
        return [(-f.coeffs[0]) % p]
    if f.degree == 2 and f(0) == 0:
        return [0, (-f.coeffs[1]) % p]
    e = (p - 1) // 2
    while True:
        delta = rng.randrange(p)
        t = UPoly(f.ctx, [delta, 1]).powmod(e, f) - 1
        if t.is_zero():
            continue
        h = gcd(f, t)
        if 0 < h.degree < f.degree:
            return _equal_degree_roots(h, rng) + _equal_degree_roots(f // h, rng)


def sylvester_matrix(f: Sequence[UPoly], e: Sequence[UPoly]) -> list[list[UPoly]]:
    """Sylvester matrix in y of two polynomials given as y-coefficient lists.

    ``f[j]`` is the coefficient of y^j.  Rows hold descending powers of y.
    """
    df, de = len(f) - 1, len(e) - 1
    ctx = f[-1].ctx
    zero = UPoly(ctx)
    size = df + de
    rows = []
    for i in range(de):
        row = [zero] * size
        for j in range(df + 1):
            row[i + j] = f[df - j]
        rows.append(row)
    for i in range(df):
        row = [zero] * size
        for j in range(de + 1):
            row[i + j] = e[de - j]
        rows.append(row)
    return rows


def _trim_y(f: Sequence[UPoly]) -> list[UPoly]:
    f = list(f)
    while f and f[-1].is_zero():
        f.pop()
    return f


def sylvester_resultant(f: Sequence[UPoly], e: Sequence[UPoly]) -> UPoly:
    """Res_y(f, e) in GF(p)[x] for f, e given as lists of y-coefficients.

    Computed as the Sylvester determinant with fraction-free (Bareiss)
    elimination, which only ever divides exactly in GF(p)[x].
    """
    f, e = _trim_y(f), _trim_y(e)
    if not f or not e:
        raise UsageError("resultant with the zero polynomial")
    ctx = f[-1].ctx
    if len(f) == 1 and len(e) == 1:
        return UPoly.constant(ctx, 1)
    if len(f) == 1:
        return f[0] ** (len(e) - 1)
    if len(e) == 1:
        return e[0] ** (len(f) - 1)
    return bareiss_det(sylvester_matrix(f, e))


def bareiss_det(M: list[list[UPoly]]) -> UPoly:
    n = len(M)
    ctx = M[0][0].ctx
    M = [list(row) for row in M]
    sign = 1
    prev = UPoly.constant(ctx, 1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return UPoly(ctx)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                q, r = num.divrem(prev)
                assert r.is_zero()
                M[i][j] = q
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det
