"""Short Weierstrass curves y^2 = x^3 + Ax + B over GF(p), affine coordinates."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import CapabilityExceeded, InconsistencyError, UsageError
from .field import FieldCtx, FieldElement

GROUP_ORDER_CAP = 1 << 22


@dataclass(frozen=True)
class CurvePoint:
    """A point of E(GF(p)); ``x is None`` encodes the point at infinity O.

    Coordinates are canonical ints; use :meth:`Curve.point` to build a
    checked point.
    """

    curve: Curve
    x: int | None = None
    y: int | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> CurvePoint:
        return self.curve.neg(self)

    def __add__(self, other: CurvePoint) -> CurvePoint:
        return self.curve.add(self, other)

    def __sub__(self, other: CurvePoint) -> CurvePoint:
        return self.curve.add(self, self.curve.neg(other))

    def __rmul__(self, k: int) -> CurvePoint:
        return self.curve.scalar_mul(k, self)

    def xy(self) -> tuple[FieldElement, FieldElement]:
        if self.is_infinity:
            raise UsageError("the point at infinity has no affine coordinates")
        f = self.curve.ctx
        return f(self.x), f(self.y)

    def to_json(self):
        return None if self.is_infinity else [self.x, self.y]

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


class Curve:
    """E: y^2 = x^3 + Ax + B over GF(p), p > 3, nonsingular."""

    def __init__(self, ctx: FieldCtx | int, A: int, B: int):
        if not isinstance(ctx, FieldCtx):
            ctx = FieldCtx(ctx)
        self.ctx = ctx
        p = ctx.p
        self.A = int(A) % p
        self.B = int(B) % p
        if (4 * self.A**3 + 27 * self.B**2) % p == 0:
            raise UsageError(f"singular curve: 4A^3 + 27B^2 = 0 mod {p}")
        self.O = CurvePoint(self)

    @property
    def p(self) -> int:
        return self.ctx.p

    def __eq__(self, other):
        return (isinstance(other, Curve) and self.p == other.p
                and self.A == other.A and self.B == other.B)

    def __hash__(self):
        return hash((self.p, self.A, self.B))

    def __repr__(self):
        return f"Curve(p={self.p}, A={self.A}, B={self.B})"

    def rhs(self, x: int) -> int:
        """s(x) = x^3 + Ax + B."""
        p = self.p
        return (x * x % p * x + self.A * x + self.B) % p

    def contains(self, x: int, y: int) -> bool:
        return (y * y - self.rhs(x)) % self.p == 0

    def point(self, x, y) -> CurvePoint:
        x, y = int(x) % self.p, int(y) % self.p
        if not self.contains(x, y):
            raise UsageError(f"({x}, {y}) is not on {self}")
        return CurvePoint(self, x, y)

    def lift_x(self, x: int) -> CurvePoint | None:
        """The point above x with the canonical (smaller) y, if any."""
        y = self.ctx.sqrt(self.rhs(x))
        return None if y is None else CurvePoint(self, int(x) % self.p, y)

    def _check(self, P: CurvePoint):
        if P.curve != self:
            raise UsageError("point belongs to a different curve")

    def neg(self, P: CurvePoint) -> CurvePoint:
        self._check(P)
        if P.is_infinity:
            return P
        return CurvePoint(self, P.x, (-P.y) % self.p)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        self._check(P)
        self._check(Q)
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        p = self.p
        if P.x == Q.x:
            if (P.y + Q.y) % p == 0:
                return self.O
            lam = (3 * P.x * P.x + self.A) * pow(2 * P.y, -1, p) % p
        else:
            lam = (Q.y - P.y) * pow(Q.x - P.x, -1, p) % p
        x3 = (lam * lam - P.x - Q.x) % p
        y3 = (lam * (P.x - x3) - P.y) % p
        return CurvePoint(self, x3, y3)

    def double(self, P: CurvePoint) -> CurvePoint:
        return self.add(P, P)

    def scalar_mul(self, k: int, P: CurvePoint) -> CurvePoint:
        self._check(P)
        if k < 0:
            return self.scalar_mul(-k, self.neg(P))
        result = self.O
        addend = P
        while k:
            if k & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            k >>= 1
        return result

    def points(self):
        """Every point of E(GF(p)), O first.  Only sensible for tiny p."""
        yield self.O
        for x in range(self.p):
            y = self.ctx.sqrt(self.rhs(x))
            if y is None:
                continue
            yield CurvePoint(self, x, y)
            if y:
                yield CurvePoint(self, x, self.p - y)

    def group_order(self) -> int:
        """#E(GF(p)) = p + 1 + sum_x chi(x^3 + Ax + B)."""
        p = self.p
        if p > GROUP_ORDER_CAP:
            raise CapabilityExceeded(f"p = {p} exceeds the point-counting cap 2^22")
        e = (p - 1) // 2
        total = p + 1
        A, B = self.A, self.B
        for x in range(p):
            v = (x * x * x + A * x + B) % p
            if v:
                total += 1 if pow(v, e, p) == 1 else -1
        return total

    def point_order(self, P: CurvePoint, group_order: int | None = None) -> int:
        """Order of P, by stripping prime factors off the group order."""
        self._check(P)
        if P.is_infinity:
            return 1
        n = self.group_order() if group_order is None else group_order
        if not self.scalar_mul(n, P).is_infinity:
            raise InconsistencyError(f"{n} * P != O; {n} is not the group order")
        for q, _ in factorize(n):
            while n % q == 0 and self.scalar_mul(n // q, P).is_infinity:
                n //= q
        return n

    def random_point(self, rng: random.Random) -> CurvePoint:
        """Sample x until s(x) is a square, then pick a random sign of y."""
        p = self.p
        while True:
            x = rng.randrange(p)
            y = self.ctx.sqrt(self.rhs(x))
            if y is None:
                continue
            if rng.getrandbits(1):
                y = (-y) % p
            return CurvePoint(self, x, y)

    @classmethod
    def random(cls, ctx: FieldCtx | int, rng: random.Random) -> Curve:
        if not isinstance(ctx, FieldCtx):
            ctx = FieldCtx(ctx)
        while True:
            A, B = rng.randrange(ctx.p), rng.randrange(ctx.p)
            if (4 * A**3 + 27 * B**2) % ctx.p:
                return cls(ctx, A, B)


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorisation, ascending primes."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            k = 0
            while n % q == 0:
                n //= q
                k += 1
            out.append((q, k))
        q += 1 if q == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def hasse_ok(p: int, order: int) -> bool:
    return (order - p - 1) ** 2 <= 4 * p


def bit_length_m(N: int) -> int:
    """m = floor(log2 N)."""
    return N.bit_length() - 1


def isqrt_ceil(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1
