"""Intersection multiplicities of plane curves with an elliptic curve.

The multiplicity of C: f(x, y) = 0 with E at a point P0 is the t-adic
valuation of f along the local branch of E through P0.  E is smooth, so
there is exactly one branch: x = x0 + t with y(t) a power series when
y0 != 0, and y = u with x(u) a power series when y0 = 0.  The resultant
side Res_y(f, y^2 - s(x)) is computed independently in :mod:`.upoly`.
"""
from __future__ import annotations

from .curve import Curve, CurvePoint
from .errors import ContainmentSuspected, DivisionByZero, UsageError
from .field import FieldCtx
from .upoly import UPoly, curve_cubic, sylvester_resultant, valuation_at

START_PRECISION = 8
MAX_PRECISION = 1024


class PowerSeries:
    """Truncated power series sum c_k t^k + O(t^precision) over GF(p)."""

    __slots__ = ("ctx", "coeffs", "precision")

    def __init__(self, ctx: FieldCtx, coeffs, precision: int):
        p = ctx.p
        cs = [int(c) % p for c in list(coeffs)[:precision]]
        cs += [0] * (precision - len(cs))
        self.ctx = ctx
        self.coeffs = cs
        self.precision = precision

    @classmethod
    def constant(cls, ctx, c, precision):
        return cls(ctx, [c], precision)

    @classmethod
    def variable(cls, ctx, precision, shift: int = 0):
        """shift + t."""
        return cls(ctx, [shift, 1], precision)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        terms = [f"{c}*t^{k}" for k, c in enumerate(self.coeffs) if c]
        return (" + ".join(terms) or "0") + f" + O(t^{self.precision})"

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.precision, other.precision)
        return self.ctx.p == other.ctx.p and self.coeffs[:n] == other.coeffs[:n]

    def _lift(self, other):
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.constant(self.ctx, int(other), self.precision)

    def __add__(self, other):
        other = self._lift(other)
        n = min(self.precision, other.precision)
        return PowerSeries(self.ctx, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(self.ctx, [-c for c in self.coeffs], self.precision)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries(self.ctx, [c * int(other) for c in self.coeffs], self.precision)
        n = min(self.precision, other.precision)
        p = self.ctx.p
        a, b = self.coeffs[:n], other.coeffs[:n]
        out = [0] * n
        for i, ai in enumerate(a):
            if ai:
                for j in range(n - i):
                    out[i + j] += ai * b[j]
        return PowerSeries(self.ctx, [c % p for c in out], n)

    __rmul__ = __mul__

    def truncate(self, precision: int) -> PowerSeries:
        return PowerSeries(self.ctx, self.coeffs, min(precision, self.precision))

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None if zero to precision."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def inverse(self) -> PowerSeries:
        """Multiplicative inverse by Newton iteration (needs a unit constant)."""
        if self.coeffs[0] == 0:
            raise DivisionByZero("series with zero constant term is not invertible")
        ctx = self.ctx
        inv = PowerSeries(ctx, [ctx.inv(self.coeffs[0])], 1)
        prec = 1
        while prec < self.precision:
            prec = min(2 * prec, self.precision)
            a = self.truncate(prec)
            inv = PowerSeries(ctx, inv.coeffs, prec)
            inv = inv * (2 - a * inv)
        return inv


def eval_upoly(f: UPoly, s: PowerSeries) -> PowerSeries:
    """f(s) by Horner's rule."""
    acc = PowerSeries.constant(s.ctx, 0, s.precision)
    for c in reversed(f.coeffs):
        acc = acc * s + c
    return acc


class PlaneCurve:
    """C: f(x, y) = sum_j c_j(x) y^j = 0, coefficients listed by y-degree."""

    def __init__(self, coeffs, check_curve: Curve | None = None):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            raise UsageError("the zero polynomial does not define a curve")
        self.coeffs = cs
        self.ctx = cs[0].ctx
        if check_curve is not None and self.contains_curve(check_curve):
            raise UsageError("C contains the elliptic curve")

    @classmethod
    def from_gh(cls, g: UPoly, h: UPoly) -> PlaneCurve:
        """f = y g(x) + h(x)."""
        return cls([h, g])

    @classmethod
    def line(cls, ctx, a: int, b: int, c: int) -> PlaneCurve:
        """a x + b y + c = 0."""
        return cls([UPoly(ctx, [c, a]), UPoly(ctx, [b])])

    @property
    def deg_y(self) -> int:
        return len(self.coeffs) - 1

    @property
    def deg_x(self) -> int:
        return max(c.degree for c in self.coeffs)

    def __call__(self, x: int, y: int) -> int:
        p = self.ctx.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * y + c(x)) % p
        return acc

    def __mul__(self, other: PlaneCurve) -> PlaneCurve:
        zero = UPoly(self.ctx, [])
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PlaneCurve(out)

    def reduce_mod(self, curve: Curve) -> tuple[UPoly, UPoly]:
        """(a, b) with f = a(x) + b(x) y modulo y^2 - s(x)."""
        s = curve_cubic(curve)
        a = UPoly(self.ctx, [])
        b = UPoly(self.ctx, [])
        spow = UPoly.constant(self.ctx, 1)
        for j, c in enumerate(self.coeffs):
            if j % 2 == 0:
                a = a + c * spow
            else:
                b = b + c * spow
                spow = spow * s
        return a, b

    def contains_curve(self, curve: Curve) -> bool:
        a, b = self.reduce_mod(curve)
        return a.is_zero() and b.is_zero()

    def eval_series(self, X: PowerSeries, Y: PowerSeries) -> PowerSeries:
        acc = PowerSeries.constant(X.ctx, 0, min(X.precision, Y.precision))
        for c in reversed(self.coeffs):
            acc = acc * Y + eval_upoly(c, X)
        return acc

    def __repr__(self):
        return " + ".join(f"({c})*y^{j}" for j, c in enumerate(self.coeffs))


def _newton_sqrt(target: PowerSeries, y0: int) -> PowerSeries:
    """Square root of target with constant term y0 (y0 != 0)."""
    ctx = target.ctx
    half = ctx.inv(2)
    y = PowerSeries(ctx, [y0], 1)
    prec = 1
    while prec < target.precision:
        prec = min(2 * prec, target.precision)
        y = PowerSeries(ctx, y.coeffs, prec)
        y = (y + target.truncate(prec) * y.inverse()) * half
    return y


def local_parametrization(curve: Curve, P0: CurvePoint, precision: int) -> PowerSeries:
    """The nontrivial coordinate series of the branch of E through P0.

    For y0 != 0 this is y(t) with y(t)^2 = s(x0 + t); for y0 = 0 it is x(u)
    with u^2 = s(x(u)), x(0) = x0.
    """
    if P0.is_infinity:
        raise UsageError("no affine parametrization at the point at infinity")
    if not curve.contains(P0.x, P0.y):
        raise UsageError("point is not on the curve")
    ctx = curve.ctx
    s = curve_cubic(curve)
    if P0.y != 0:
        S = eval_upoly(s, PowerSeries.variable(ctx, precision, P0.x))
        return _newton_sqrt(S, P0.y)
    ds = s.derivative()
    u2 = PowerSeries(ctx, [0, 0, 1], precision)
    X = PowerSeries.constant(ctx, P0.x, precision)
    # quadratic convergence: ~log2(precision) + 2 rounds suffice
    for _ in range(precision.bit_length() + 2):
        F = eval_upoly(s, X) - u2
        X = X - F * eval_upoly(ds, X).inverse()
    return X


def branch(curve: Curve, P0: CurvePoint, precision: int) -> tuple[PowerSeries, PowerSeries]:
    """(X, Y) series tracing E near P0."""
    ctx = curve.ctx
    if P0.y != 0:
        return (PowerSeries.variable(ctx, precision, P0.x),
                local_parametrization(curve, P0, precision))
    return (local_parametrization(curve, P0, precision),
            PowerSeries.variable(ctx, precision, 0))


def intersection_multiplicity(C: PlaneCurve, curve: Curve, P0: CurvePoint) -> int:
    """(C . E) at P0, by valuation along the branch of E through P0."""
    if P0.is_infinity:
        raise UsageError("intersection multiplicity at infinity is not supported")
    if C(P0.x, P0.y) != 0:
        return 0
    precision = START_PRECISION
    while precision <= MAX_PRECISION:
        X, Y = branch(curve, P0, precision)
        v = C.eval_series(X, Y).valuation()
        if v is not None and v < precision:
            return v
        precision *= 2
    raise ContainmentSuspected(f"valuation exceeds {MAX_PRECISION}; does C contain E?")


def curve_as_y_poly(curve: Curve) -> list[UPoly]:
    """y^2 - s(x) as a list of y-coefficients."""
    ctx = curve.ctx
    return [-curve_cubic(curve), UPoly(ctx, []), UPoly.constant(ctx, 1)]


def resultant_valuation(C: PlaneCurve, curve: Curve, x0: int) -> int:
    r = sylvester_resultant(C.coeffs, curve_as_y_poly(curve))
    if r.is_zero():
        raise ContainmentSuspected("resultant vanishes identically: common component")
    return valuation_at(r, x0)


def check_proposition(C: PlaneCurve, curve: Curve, x0: int) -> dict:
    """Compare v_{x - x0}(Res_y(C, E)) with IM(P0) + IM(-P0).

    Needs s(x0) to be a square so that the points above x0 are rational.
    When y0 = 0 (P0 = -P0) the single multiplicity at P0 is used.
    """
    ctx = curve.ctx
    x0 = int(x0) % ctx.p
    y0 = ctx.sqrt(curve.rhs(x0))
    if y0 is None:
        raise UsageError("no rational point above x0")
    P0 = curve.point(x0, y0)
    v = resultant_valuation(C, curve, x0)
    if y0 == 0:
        mu = intersection_multiplicity(C, curve, P0)
    else:
        mu = intersection_multiplicity(C, curve, P0) + intersection_multiplicity(C, curve, curve.neg(P0))
    return {"x0": x0, "y0": y0, "v": v, "mu": mu, "equal": v == mu}


def tangent_line(curve: Curve, P0: CurvePoint) -> PlaneCurve:
    """Tangent to E at an affine point with y0 != 0."""
    if P0.y == 0:
        return PlaneCurve.line(curve.ctx, 1, 0, -P0.x)
    p = curve.p
    lam = (3 * P0.x * P0.x + curve.A) * pow(2 * P0.y, -1, p) % p
    # y - y0 = lam (x - x0)  ->  lam x - y + (y0 - lam x0) = 0
    return PlaneCurve.line(curve.ctx, lam, -1, P0.y - lam * P0.x)


def is_flex(curve: Curve, P0: CurvePoint) -> bool:
    """True iff the tangent at P0 meets E with multiplicity 3 there (3 P0 = O)."""
    return not P0.is_infinity and curve.scalar_mul(3, P0).is_infinity and P0.y != 0


def random_triple(p: int, rng, max_deg_y: int = 2, max_deg_x: int = 4):
    """(curve, C, x0) with a rational point above x0 and C not containing E.

    Half of the time C is forced through P0 = (x0, y0) so that the
    multiplicities are nonzero.
    """
    from .field import FieldCtx
    ctx = FieldCtx(p)
    while True:
        curve = Curve.random(ctx, rng)
        P0 = curve.random_point(rng)
        if P0.is_infinity:
            continue
        cs = [UPoly(ctx, [rng.randrange(p) for _ in range(rng.randint(0, max_deg_x) + 1)])
              for _ in range(rng.randint(0, max_deg_y) + 1)]
        if rng.random() < 0.5:
            val = sum(c(P0.x) * pow(P0.y, j, p) for j, c in enumerate(cs)) % p
            cs[0] = cs[0] - val
        if all(c.is_zero() for c in cs):
            continue
        C = PlaneCurve(cs)
        if C.contains_curve(curve):
            continue
        return curve, C, P0.x


__all__ = ["random_triple", "PowerSeries", "PlaneCurve", "local_parametrization", "branch",
           "intersection_multiplicity", "resultant_valuation", "check_proposition",
           "tangent_line", "is_flex", "curve_as_y_poly", "eval_upoly",
           "START_PRECISION", "MAX_PRECISION"]
