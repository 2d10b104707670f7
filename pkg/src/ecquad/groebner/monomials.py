"""Order-preserving integer encoding of monomials.

Each exponent occupies one 8-bit digit.  For grevlex the digits hold
``127 - e_i`` (variable i at digit i) under a total-degree digit; for lex
the digits hold ``e_i`` with variable 0 most significant.  Either way the
encoded integer compares exactly like the monomial, products are sums up to
a constant, and divisibility is a borrow-free digit comparison.
"""
from __future__ import annotations

import numpy as np

from ..errors import ResourceError
from ..mpoly import MAX_EXPONENT

_BITS = 8
_BASE = 1 << _BITS
_DIGIT = _BASE - 1
_TOP = 127
# digits per int64 word in the vectorized layout, with the guard bit of
# each digit set
_WORD_DIGITS = 7
_WORD_GUARD = sum(128 << (8 * i) for i in range(_WORD_DIGITS))


class MonoCodec:
    __slots__ = ("order", "n", "offset", "low_mask", "guard", "_shifts", "lex")

    def __init__(self, order: str, nvars: int):
        self.order = order
        self.n = nvars
        self.lex = order == "lex"
        self._shifts = [_BITS * i for i in range(nvars)]
        self.low_mask = (1 << (_BITS * nvars)) - 1
        self.guard = sum(128 << s for s in self._shifts)
        self.offset = 0 if self.lex else sum(_TOP << s for s in self._shifts)

    def encode(self, e) -> int:
        n = self.n
        if self.lex:
            v = 0
            for x in e:
                v = (v << _BITS) | x
            return v
        v = sum(e) << (_BITS * n)
        for i, x in enumerate(e):
            v |= (_TOP - x) << (_BITS * i)
        return v

    def decode(self, v: int) -> tuple:
        n = self.n
        if self.lex:
            out = [0] * n
            for i in range(n - 1, -1, -1):
                out[i] = v & _DIGIT
                v >>= _BITS
            return tuple(out)
        return tuple(_TOP - ((v >> (_BITS * i)) & _DIGIT) for i in range(n))

    def mul(self, a: int, b: int) -> int:
        return a + b - self.offset

    def div(self, a: int, b: int) -> int:
        """a / b, assuming b | a."""
        return a - b + self.offset

    def divides(self, b: int, a: int) -> bool:
        """True if monomial b divides monomial a."""
        if self.lex:
            return ((a | self.guard) - b) & self.guard == self.guard
        m = self.low_mask
        return (((b & m) | self.guard) - (a & m)) & self.guard == self.guard

    def _ge_mask(self, a: int, b: int) -> int:
        """0xFF in every digit where a's digit >= b's digit (low part only)."""
        g = self.guard
        return ((((a | g) - b) & g) >> 7) * _DIGIT

    def lcm(self, a: int, b: int) -> int:
        m = self.low_mask
        if self.lex:
            ge = self._ge_mask(a, b)
            return (a & ge) | (b & ~ge & m)
        a &= m
        b &= m
        ge = self._ge_mask(a, b)
        low = (b & ge) | (a & ~ge & m)
        deg = _TOP * self.n - sum(low.to_bytes(self.n, "little"))
        return (deg << (_BITS * self.n)) | low

    def coprime(self, a: int, b: int) -> bool:
        m = self.low_mask
        if self.lex:
            ge = self._ge_mask(a, b)
            return (b & ge) | (a & ~ge & m) == 0
        a &= m
        b &= m
        ge = self._ge_mask(a, b)
        return (a & ge) | (b & ~ge & m) == self.offset

    def words(self, vals) -> np.ndarray:
        """Low digits of encoded monomials packed as an int64 array (k, W)."""
        nw = max(1, (self.n + _WORD_DIGITS - 1) // _WORD_DIGITS)
        mask = self.low_mask
        wbits = _BITS * _WORD_DIGITS
        wmask = (1 << wbits) - 1
        out = np.empty((len(vals), nw), dtype=np.int64)
        for w in range(nw):
            sh = wbits * w
            out[:, w] = [((v & mask) >> sh) & wmask for v in vals]
        return out

    def divides_words(self, B: np.ndarray, A: np.ndarray) -> np.ndarray:
        """Broadcast divisibility: ``B[..., w]`` divides ``A[..., w]``."""
        G = _WORD_GUARD
        ok = None
        for w in range(A.shape[-1]):
            if self.lex:
                t = ((A[..., w] | G) - B[..., w]) & G
            else:
                t = ((B[..., w] | G) - A[..., w]) & G
            ok = (t == G) if ok is None else ok & (t == G)
        return ok

    def degree(self, a: int) -> int:
        if self.lex:
            return sum(self.decode(a))
        return a >> (_BITS * self.n)

    @property
    def one(self) -> int:
        return self.encode((0,) * self.n)

    def check_cap(self, a: int) -> None:
        e = self.decode(a)
        if max(e, default=0) > MAX_EXPONENT or sum(e) > MAX_EXPONENT:
            raise ResourceError(f"monomial degree exceeds cap {MAX_EXPONENT}")
