"""Prime field GF(p) arithmetic.

Elements are canonical residues in ``[0, p)``.  Hot loops elsewhere in the
package work on raw ``int`` residues together with a :class:`FieldCtx`;
:class:`FieldElement` is the checked, operator-friendly wrapper.
"""
from __future__ import annotations

import random
from functools import total_ordering

from .errors import DivisionByZero, UsageError

# Deterministic for every n < 3.3 * 10^24 (Sorenson & Webster).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

MAX_MODULUS = 1 << 61


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for n < 2^64."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldCtx:
    """The field GF(p) for an odd prime 3 < p < 2^61."""

    __slots__ = ("p", "_nonresidue")

    def __init__(self, p: int):
        p = int(p)
        if not 3 < p < MAX_MODULUS:
            raise UsageError(f"modulus must satisfy 3 < p < 2^61, got {p}")
        if not is_prime(p):
            raise UsageError(f"modulus {p} is not prime")
        self.p = p
        self._nonresidue = None

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.p == self.p

    def __hash__(self):
        return hash(("FieldCtx", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise UsageError("element belongs to a different field")
            return value
        return FieldElement(self, int(value) % self.p)

    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self):
        return (FieldElement(self, v) for v in range(self.p))

    def random(self, rng: random.Random) -> FieldElement:
        return FieldElement(self, rng.randrange(self.p))

    # raw-residue helpers used by the polynomial modules

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.p})")
        return pow(a, -1, self.p)

    def is_square(self, a: int) -> bool:
        a %= self.p
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a: int) -> int | None:
        """Canonical square root (the smaller of r, p - r) or None."""
        p = self.p
        a %= p
        if a == 0:
            return 0
        if pow(a, (p - 1) // 2, p) != 1:
            return None
        if p % 4 == 3:
            r = pow(a, (p + 1) // 4, p)
        else:
            r = self._tonelli_shanks(a)
        return min(r, p - r)

    def nonresidue(self) -> int:
        # smallest quadratic non-residue: deterministic, no rng needed
        if self._nonresidue is None:
            z = 2
            while pow(z, (self.p - 1) // 2, self.p) != self.p - 1:
                z += 1
            self._nonresidue = z
        return self._nonresidue

    def _tonelli_shanks(self, a: int) -> int:
        p = self.p
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        c = pow(self.nonresidue(), q, p)
        x = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        m = s
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            x = x * b % p
            c = b * b % p
            t = t * c % p
            m = i
        return x


@total_ordering
class FieldElement:
    """An immutable element of GF(p)."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx.p != self.ctx.p:
                raise UsageError(f"cannot mix GF({self.ctx.p}) and GF({other.ctx.p})")
            return other.value
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def _new(self, v: int) -> FieldElement:
        return FieldElement(self.ctx, v % self.ctx.p)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value * self.ctx.inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o * self.ctx.inv(self.value))

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return FieldElement(self.ctx, pow(self.value, e, self.ctx.p))

    def inv(self) -> FieldElement:
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def sqrt(self) -> FieldElement | None:
        r = self.ctx.sqrt(self.value)
        return None if r is None else FieldElement(self.ctx, r)

    def is_square(self) -> bool:
        return self.ctx.is_square(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx.p == other.ctx.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.ctx.p
        return NotImplemented

    def __lt__(self, other):
        # canonical-representative order, only used for deterministic sorting
        return self.value < self._coerce(other)

    def __hash__(self):
        return hash((self.ctx.p, self.value))

    def __int__(self):
        return self.value

    __index__ = __int__

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.p})"
