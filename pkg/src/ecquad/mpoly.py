"""Sparse multivariate polynomials over GF(p).

A monomial is a tuple of exponents.  An :class:`MPoly` keeps its terms as a
tuple of ``(monomial, coefficient)`` pairs, strictly descending in the ring's
monomial order, with no zero coefficients.
"""
from __future__ import annotations

import heapq
import re
from typing import Iterable, Mapping, Sequence

from .errors import UsageError
from .field import FieldCtx

MAX_EXPONENT = 64

Monomial = tuple


class MonomialOrder:
    """grevlex or lex on a fixed number of variables.

    ``key`` maps a monomial to a flat int tuple such that larger monomials
    get larger keys.
    """

    NAMES = ("grevlex", "lex")

    def __init__(self, name: str, nvars: int):
        if name not in self.NAMES:
            raise UsageError(f"unknown monomial order {name!r}")
        self.name = name
        self.nvars = nvars
        self._cache: dict = {}

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.name == other.name
                and self.nvars == other.nvars)

    def __hash__(self):
        return hash((self.name, self.nvars))

    def __repr__(self):
        return f"{self.name}({self.nvars})"

    def key(self, m: Monomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            if self.name == "lex":
                k = m
            else:
                k = (sum(m),) + tuple(-e for e in reversed(m))
            if len(self._cache) < 1_000_000:
                self._cache[m] = k
        return k

    def compare(self, a: Monomial, b: Monomial) -> int:
        """-1, 0 or 1 as a <, =, > b."""
        if len(a) != len(b) or len(a) != self.nvars:
            raise UsageError("monomial length mismatch")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if a | b."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """GF(p)[x_0, ..., x_{n-1}] with a monomial order."""

    def __init__(self, ctx: FieldCtx | int, names: Sequence[str] | int, order: str = "grevlex"):
        if not isinstance(ctx, FieldCtx):
            ctx = FieldCtx(ctx) if ctx > 3 else _TinyCtx(ctx)
        if isinstance(names, int):
            names = [f"x{i}" for i in range(names)]
        names = tuple(names)
        if len(set(names)) != len(names):
            raise UsageError("duplicate variable names")
        self.ctx = ctx
        self.p = ctx.p
        self.names = names
        self.nvars = len(names)
        self.order = MonomialOrder(order, self.nvars)
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.p == other.p
                and self.names == other.names and self.order == other.order)

    def __hash__(self):
        return hash((self.p, self.names, self.order.name))

    def __repr__(self):
        return f"GF({self.p})[{', '.join(self.names)}] <{self.order.name}>"

    def with_order(self, order: str) -> PolyRing:
        return PolyRing(self.ctx, self.names, order)

    def subring(self, names: Sequence[str]) -> PolyRing:
        return PolyRing(self.ctx, names, self.order.name)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"unknown variable {name!r}") from None

    @property
    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def zero(self) -> MPoly:
        return MPoly(self, ())

    def one(self) -> MPoly:
        return self.constant(1)

    def constant(self, c: int) -> MPoly:
        c %= self.p
        return MPoly(self, ((self.one_monomial, c),) if c else ())

    def var(self, i: int | str) -> MPoly:
        if isinstance(i, str):
            i = self.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return MPoly(self, ((tuple(e), 1),))

    def gens(self) -> list[MPoly]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Monomial, c: int = 1) -> MPoly:
        return self.from_dict({tuple(exps): c})

    def from_dict(self, d: Mapping[Monomial, int]) -> MPoly:
        p = self.p
        items = [(m, c % p) for m, c in d.items() if c % p]
        key = self.order.key
        items.sort(key=lambda t: key(t[0]), reverse=True)
        return MPoly(self, tuple(items))

    def affine(self, coeffs: Sequence[int], const: int = 0) -> MPoly:
        """sum coeffs[i] * x_i + const."""
        d = {}
        for i, c in enumerate(coeffs):
            if c % self.p:
                e = [0] * self.nvars
                e[i] = 1
                d[tuple(e)] = c
        if const % self.p:
            d[self.one_monomial] = const
        return self.from_dict(d)

    def parse(self, text: str) -> MPoly:
        return parse_poly(self, text)


class _TinyCtx:
    """Arithmetic-only context for small primes (p = 2, 3) in ring tests."""

    def __init__(self, p: int):
        self.p = p

    def inv(self, a: int) -> int:
        return pow(a % self.p, -1, self.p)


class MPoly:
    __slots__ = ("ring", "terms", "_dict")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms
        self._dict = None

    # queries

    def as_dict(self) -> dict:
        if self._dict is None:
            self._dict = dict(self.terms)
        return self._dict

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def lm(self) -> Monomial:
        if not self.terms:
            raise UsageError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    def lc(self) -> int:
        return self.terms[0][1] if self.terms else 0

    def total_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m, _ in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {i for m, _ in self.terms for i, e in enumerate(m) if e}

    def coeff(self, m: Monomial) -> int:
        return self.as_dict().get(tuple(m), 0)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == self.ring.constant(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return format_poly(self)

    # arithmetic

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise UsageError("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        if hasattr(other, "value") and hasattr(other, "ctx"):
            return self.ring.constant(other.value)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.terms:
            return self
        if not self.terms:
            return o
        d = dict(self.terms)
        p = self.ring.p
        for m, c in o.terms:
            d[m] = (d.get(m, 0) + c) % p
        return self.ring.from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return MPoly(self.ring, tuple((m, (-c) % p) for m, c in self.terms))

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
        if not self.terms or not o.terms:
            return self.ring.zero()
        if o.is_constant():
            return self.scale(o.terms[0][1])
        if self.is_constant():
            return o.scale(self.terms[0][1])
        p = self.ring.p
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in o.terms:
                m = tuple(x + y for x, y in zip(m1, m2))
                d[m] = d.get(m, 0) + c1 * c2
        return self.ring.from_dict({m: c % p for m, c in d.items()})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c: int) -> MPoly:
        p = self.ring.p
        c = int(c) % p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        return MPoly(self.ring, tuple((m, v * c % p) for m, v in self.terms))

    def mul_term(self, mono: Monomial, c: int = 1) -> MPoly:
        """Multiply by c * mono; order-preserving so no resort is needed."""
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return MPoly(self.ring, tuple(
            (tuple(x + y for x, y in zip(m, mono)), v * c % p) for m, v in self.terms))

    def monic(self) -> MPoly:
        if not self.terms or self.terms[0][1] == 1:
            return self
        return self.scale(self.ring.ctx.inv(self.terms[0][1]))

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.ring.nvars:
            raise UsageError(f"expected {self.ring.nvars} coordinates, got {len(point)}")
        p = self.ring.p
        pt = [int(v) % p for v in point]
        acc = 0
        for m, c in self.terms:
            t = c
            for v, e in zip(pt, m):
                if e:
                    t = t * pow(v, e, p) % p
            acc += t
        return acc % p

    __call__ = evaluate

    def substitute(self, bindings: Mapping, ring: PolyRing | None = None) -> MPoly:
        return substitute(self, bindings, ring)

    def to_ring(self, ring: PolyRing) -> MPoly:
        """Re-express in a ring with the same field, matching variables by name.

        Variables missing from ``ring`` must not occur in the polynomial.
        """
        if ring == self.ring:
            return self
        idx = [ring._index.get(n, -1) for n in self.ring.names]
        d = {}
        for m, c in self.terms:
            e = [0] * ring.nvars
            for i, k in enumerate(m):
                if k:
                    if idx[i] < 0:
                        raise UsageError(f"variable {self.ring.names[i]} not in target ring")
                    e[idx[i]] = k
            d[tuple(e)] = c
        return ring.from_dict(d)


def normal_form(f: MPoly, G: Sequence[MPoly], with_quotients: bool = False):
    """Full multivariate division remainder of ``f`` by ``G``.

    Each reducible term, largest first, is reduced by the divisor with the
    smallest leading monomial that divides it (ties broken by input index).
    With ``with_quotients`` returns ``(remainder, quotients)`` such that
    ``f = sum(q_i * G[i]) + remainder``.
    """
    ring = f.ring
    p = ring.p
    key = ring.order.key
    divs = [(key(g.lm()), i, g) for i, g in enumerate(G) if not g.is_zero()]
    divs.sort(key=lambda t: (t[0], t[1]))
    lead = [(g.lm(), i, g, ring.ctx.inv(g.lc())) for _, i, g in divs]
    quotients = [dict() for _ in G] if with_quotients else None

    coeffs = dict(f.terms)
    heap = [(_neg(key(m)), m) for m in coeffs]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = coeffs.pop(m, 0)
        if not c:
            continue
        for lm, i, g, ilc in lead:
            if all(a <= b for a, b in zip(lm, m)):
                t = tuple(b - a for a, b in zip(lm, m))
                factor = c * ilc % p
                if quotients is not None:
                    qd = quotients[i]
                    qd[t] = (qd.get(t, 0) + factor) % p
                for gm, gc in g.terms[1:]:
                    mm = tuple(x + y for x, y in zip(gm, t))
                    old = coeffs.get(mm)
                    if old is None:
                        coeffs[mm] = (-factor * gc) % p
                        heapq.heappush(heap, (_neg(key(mm)), mm))
                    else:
                        coeffs[mm] = (old - factor * gc) % p
                break
        else:
            rem[m] = c
    r = ring.from_dict(rem)
    if with_quotients:
        return r, [ring.from_dict(q) for q in quotients]
    return r


def _neg(k: tuple) -> tuple:
    return tuple(-v for v in k)


def substitute(f: MPoly, bindings: Mapping, ring: PolyRing | None = None) -> MPoly:
    """Replace bound variables by polynomials of the same ring.

    ``bindings`` maps a variable (index or name) to an MPoly or int.  Chains
    are followed; cycles raise :class:`UsageError`.  When ``ring`` is given
    the result is moved into it (bound variables must have disappeared).
    """
    src = f.ring
    b = {}
    for k, v in bindings.items():
        i = src.index(k) if isinstance(k, str) else int(k)
        b[i] = v if isinstance(v, MPoly) else src.constant(int(v))
    resolved = _resolve_bindings(src, b)

    out = src.zero()
    if resolved:
        cache: dict = {}
        acc: dict = {}
        p = src.p
        for m, c in f.terms:
            term = src.constant(c)
            rest = list(m)
            for i, e in enumerate(m):
                if e and i in resolved:
                    rest[i] = 0
                    key = (i, e)
                    pw = cache.get(key)
                    if pw is None:
                        pw = cache[key] = resolved[i] ** e
                    term = term * pw
            term = term.mul_term(tuple(rest))
            for mm, cc in term.terms:
                acc[mm] = (acc.get(mm, 0) + cc) % p
        out = src.from_dict(acc)
    else:
        out = f
    if ring is not None:
        out = out.to_ring(ring)
    return out


def _resolve_bindings(ring: PolyRing, b: dict) -> dict:
    resolved: dict = {}
    state: dict = {}

    def visit(i):
        if state.get(i) == 1:
            raise UsageError("cyclic variable bindings")
        if i in resolved:
            return resolved[i]
        state[i] = 1
        expr = b[i]
        deps = expr.variables() & set(b)
        if deps:
            expr = substitute(expr, {j: visit(j) for j in deps})
        state[i] = 2
        resolved[i] = expr
        return expr

    for i in b:
        visit(i)
    return resolved


def evaluate(f: MPoly, point: Sequence[int]) -> int:
    return f.evaluate(point)


# text format: "3*g0^2*h1 + 2"

def format_poly(f: MPoly) -> str:
    if not f.terms:
        return "0"
    names = f.ring.names
    parts = []
    for m, c in f.terms:
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


_TERM_SPLIT = re.compile(r"([+-])")
_FACTOR = re.compile(r"^\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)(?:\s*\^\s*(\d+))?)\s*$")


def parse_poly(ring: PolyRing, text: str) -> MPoly:
    text = text.strip()
    if not text:
        raise UsageError("empty polynomial")
    pieces = _TERM_SPLIT.split(text)
    p = ring.p
    acc: dict = {}
    sign = 1
    pending = False
    for piece in pieces:
        if piece in ("+", "-"):
            if piece == "-":
                sign = -sign
            continue
        if not piece.strip():
            if pending:
                raise UsageError(f"malformed polynomial {text!r}")
            continue
        coeff = sign
        exps = [0] * ring.nvars
        for factor in piece.split("*"):
            mt = _FACTOR.match(factor)
            if not mt:
                raise UsageError(f"cannot parse factor {factor!r}")
            num, name, power = mt.groups()
            if num is not None:
                coeff *= int(num)
            else:
                exps[ring.index(name)] += int(power) if power else 1
        m = tuple(exps)
        acc[m] = (acc.get(m, 0) + coeff) % p
        sign = 1
    return ring.from_dict(acc)


def parse_system(text: str, p: int, order: str = "grevlex",
                 names: Iterable[str] | None = None) -> list[MPoly]:
    """One polynomial per non-empty, non-comment line; variables auto-detected."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln.rstrip(",;") for ln in lines if ln]
    if names is None:
        found = []
        for ln in lines:
            for tok in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", ln):
                if tok not in found:
                    found.append(tok)
        names = sorted(found, key=_natural_key)
    ring = PolyRing(p, list(names), order)
    return [parse_poly(ring, ln) for ln in lines]


def _natural_key(name: str):
    # g0 < g1 < ... < h0 < ... with numeric suffixes compared as numbers
    m = re.match(r"^(.*?)(\d*)$", name)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


_HEADER = re.compile(r"^#\s*(p|vars|order)\s*=\s*(.*?)\s*$")


def system_to_text(gens: Sequence[MPoly], ring: PolyRing | None = None) -> str:
    """Text form with ``# p``, ``# vars`` and ``# order`` header lines."""
    ring = ring or gens[0].ring
    head = [f"# p = {ring.p}", f"# vars = {', '.join(ring.names)}", f"# order = {ring.order.name}"]
    return "\n".join(head + [format_poly(g) for g in gens]) + "\n"


def parse_system_file(text: str, p: int | None = None, order: str | None = None) -> list[MPoly]:
    """Parse a system file; header lines supply p, variables and order unless
    overridden by the arguments."""
    hdr = {}
    for ln in text.splitlines():
        m = _HEADER.match(ln.strip())
        if m:
            hdr[m.group(1)] = m.group(2)
    if p is None:
        if "p" not in hdr:
            raise UsageError("the field characteristic is missing (no '# p = ...' header)")
        try:
            p = int(hdr["p"])
        except ValueError:
            raise UsageError(f"bad characteristic {hdr['p']!r}") from None
    order = order or hdr.get("order", "grevlex")
    names = None
    if "vars" in hdr:
        names = [v.strip() for v in hdr["vars"].replace(",", " ").split()]
    return parse_system(text, p, order, names)
