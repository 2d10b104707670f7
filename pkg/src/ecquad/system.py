"""Construction of the quadric system whose solutions encode a DLP relation.

For a target point T and basis points P_i = 2^i P (i < d), a solution is a
function f = y*g(x) + h(x) with g monic of degree d-1 and deg h <= d whose
norm r(x) = h^2 - g^2 (x^3 + Ax + B) has a double root at every x_i and a
simple root at x(T).  Unknowns are the coefficients g_0..g_{d-2}, h_0..h_d.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .curve import Curve, CurvePoint, bit_length_m
from .errors import Degenerate, NoSolution, UsageError
from .mpoly import MPoly, PolyRing, system_to_text
from .upoly import UPoly, curve_cubic

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DlpInstance:
    curve: Curve
    P: CurvePoint
    Q: CurvePoint
    N: int
    m: int
    basis_points: tuple
    q_x: int
    q_y: int

    @property
    def d(self) -> int:
        """Number of basis points (m, or m - 1 when N = 2^m)."""
        return len(self.basis_points)


def degeneracy(curve: Curve, basis_points, Q: CurvePoint) -> str | None:
    """Reason the instance cannot be encoded, or None."""
    if Q.is_infinity:
        return "target is the point at infinity"
    xs = []
    for i, Pi in enumerate(basis_points):
        if Pi.is_infinity:
            return f"P_{i} is the point at infinity"
        if Pi.y == 0:
            return f"P_{i} is a 2-torsion point"
        xs.append(Pi.x)
    if len(set(xs)) != len(xs):
        return "basis points share an x-coordinate"
    if Q.x in xs:
        return f"target equals +-P_{xs.index(Q.x)}"
    if Q.y == 0:
        return "target is a 2-torsion point"
    return None


def basis_size(N: int) -> int:
    """d = floor(log2 N), except d = m - 1 when N = 2^m.

    Even logs 2 * sum eps_i 2^i with d bits reach 2^(d+1) - 2 >= N - 2.  For
    N = 2^m the point 2^(m-1) P has order 2, which no rerandomization of the
    target can avoid, and m - 1 bits already suffice.
    """
    m = bit_length_m(N)
    return m - 1 if N == 1 << m else m


def build_instance(curve: Curve, P: CurvePoint, Q: CurvePoint, N: int | None = None) -> DlpInstance:
    """Doubling chain and coordinates for Q = nP; raises Degenerate."""
    if P.is_infinity:
        raise UsageError("P must not be the point at infinity")
    if N is None:
        N = curve.point_order(P)
    m = bit_length_m(N)
    d = basis_size(N)
    pts = [P]
    for _ in range(d - 1):
        pts.append(curve.double(pts[-1]))
    pts = tuple(pts[:d])
    reason = degeneracy(curve, pts, Q)
    if reason:
        raise Degenerate(reason)
    return DlpInstance(curve, P, Q, N, m, pts, Q.x, Q.y)


def variable_names(d: int) -> list[str]:
    return [f"g{j}" for j in range(d - 1)] + [f"h{j}" for j in range(d + 1)]


def coefficient_ring(p_or_ctx, d: int, order: str = "grevlex") -> PolyRing:
    return PolyRing(p_or_ctx, variable_names(d), order)


def generic_f(ring: PolyRing, d: int) -> tuple[list[MPoly], list[MPoly]]:
    """Coefficient lists of g (monic, degree d-1) and h (degree d)."""
    if d < 2:
        raise UsageError("degree parameter must be at least 2")
    gens = ring.gens()
    g = gens[:d - 1] + [ring.one()]
    h = gens[d - 1:]
    return g, h


def _eval_affine(coeffs: list[MPoly], x: int, p: int) -> MPoly:
    """sum coeffs[j] * x^j for affine-linear MPoly coefficients."""
    ring = coeffs[0].ring
    acc: dict = {}
    xp = 1
    for c in coeffs:
        for m, v in c.terms:
            acc[m] = (acc.get(m, 0) + v * xp) % p
        xp = xp * x % p
    return ring.from_dict(acc)


def linear_conditions(inst: DlpInstance, ring: PolyRing, g, h) -> list[MPoly]:
    """f(P_i) = 0 for every basis point and f(-T) = 0."""
    p = inst.curve.p
    out = []
    pts = [(Pi.x, Pi.y) for Pi in inst.basis_points] + [(inst.q_x, (-inst.q_y) % p)]
    for x, y in pts:
        out.append(_eval_affine(g, x, p).scale(y) + _eval_affine(h, x, p))
    return out


def symbolic_r(ring: PolyRing, g, h, curve: Curve) -> list[MPoly]:
    """Coefficients (in x) of r = h^2 - g^2 s as quadrics in the unknowns."""
    s = curve_cubic(curve).coeffs
    deg = max(2 * (len(h) - 1), 2 * (len(g) - 1) + 3)
    zero = ring.zero()
    r = [zero] * (deg + 1)

    def square(c):
        sq = [zero] * (2 * len(c) - 1)
        for i, a in enumerate(c):
            for j, b in enumerate(c):
                sq[i + j] = sq[i + j] + a * b
        return sq

    for k, c in enumerate(square(h)):
        r[k] = r[k] + c
    gg = square(g)
    for k, c in enumerate(gg):
        for j, sj in enumerate(s):
            if sj:
                r[k + j] = r[k + j] - c.scale(sj)
    return r


def quadratic_conditions(inst: DlpInstance, ring: PolyRing, g, h) -> list[MPoly]:
    """r'(x_i) = 0 for every basis point."""
    p = inst.curve.p
    r = symbolic_r(ring, g, h, inst.curve)
    dr = [r[k].scale(k) for k in range(1, len(r))]
    out = []
    for Pi in inst.basis_points:
        acc = ring.zero()
        xp = 1
        for c in dr:
            if xp and not c.is_zero():
                acc = acc + c.scale(xp)
            xp = xp * Pi.x % p
        out.append(acc)
    return out


def target_norm(inst: DlpInstance) -> UPoly:
    """-(x - x_0)^2 ... (x - x_{m-1})^2 (x - x_T)."""
    ctx = inst.curve.ctx
    t = UPoly.from_roots(ctx, [Pi.x for Pi in inst.basis_points] * 2 + [inst.q_x])
    return -t


def coefficient_conditions(inst: DlpInstance, ring: PolyRing, g, h) -> list[MPoly]:
    """Coefficient matching r(x) = target_norm(x), degrees 0..2d."""
    r = symbolic_r(ring, g, h, inst.curve)
    t = target_norm(inst)
    out = [r[k] - t[k] for k in range(len(r))]
    return [c for c in out if not c.is_zero()]


@dataclass
class QuadraticSystem:
    d: int
    ring: PolyRing
    linear_gens: list
    quadratic_gens: list
    extra_gens: list = field(default_factory=list)
    elimination: dict = field(default_factory=dict)    # var index -> affine MPoly
    reduced_ring: PolyRing | None = None
    reduced_gens: list = field(default_factory=list)
    rank: int = 0

    @property
    def variables(self) -> tuple:
        return self.ring.names

    @property
    def surviving(self) -> tuple:
        return self.reduced_ring.names if self.reduced_ring else self.ring.names

    def all_gens(self) -> list:
        return self.linear_gens + self.quadratic_gens + self.extra_gens

    def lift(self, point) -> tuple[int, ...]:
        """Full coefficient vector from a point of the reduced system."""
        ring = self.ring
        surv = {name: int(v) for name, v in zip(self.reduced_ring.names, point)}
        full = [surv.get(name, 0) for name in ring.names]
        for i, expr in self.elimination.items():
            full[i] = expr.evaluate(full)
        return tuple(full)

    def to_text(self, reduced: bool = True) -> str:
        if reduced:
            return system_to_text(self.reduced_gens, self.reduced_ring)
        return system_to_text(self.all_gens(), self.ring)


def build_system(inst: DlpInstance, extra_gens: bool = False, order: str = "grevlex") -> QuadraticSystem:
    d = inst.d
    ring = coefficient_ring(inst.curve.ctx, d, order)
    g, h = generic_f(ring, d)
    lin = linear_conditions(inst, ring, g, h)
    quad = quadratic_conditions(inst, ring, g, h)
    extra = coefficient_conditions(inst, ring, g, h) if extra_gens else []
    return QuadraticSystem(d, ring, lin, quad, extra)


def eliminate_linear(sys: QuadraticSystem) -> QuadraticSystem:
    """Solve the linear conditions and substitute into the quadrics.

    Gaussian elimination over the affine system: pivot columns are taken
    left to right (g's before h's) and the pivot row is the largest row
    index with a nonzero entry.  Raises NoSolution if inconsistent.
    """
    ring = sys.ring
    n = ring.nvars
    p = ring.p
    one = ring.one_monomial
    rows = []
    for f in sys.linear_gens:
        if f.total_degree() > 1:
            raise UsageError("linear generator of degree > 1")
        row = [0] * (n + 1)
        for m, c in f.terms:
            if m == one:
                row[n] = c
            else:
                row[m.index(1)] = c
        rows.append(row)
    pivots = []
    r = 0
    for col in range(n):
        cand = [i for i in range(r, len(rows)) if rows[i][col]]
        if not cand:
            continue
        i = max(cand)
        rows[r], rows[i] = rows[i], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                c = rows[k][col]
                rows[k] = [(a - c * b) % p for a, b in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    for k in range(r, len(rows)):
        if rows[k][n]:
            raise NoSolution("linear conditions are inconsistent")
    rank = len(pivots)
    if rank < len(rows):
        log.info("linear conditions have rank %d < %d", rank, len(rows))
    free = [c for c in range(n) if c not in pivots]
    elimination = {}
    for k, col in enumerate(pivots):
        coeffs = [0] * n
        for c in free:
            coeffs[c] = (-rows[k][c]) % p
        elimination[col] = ring.affine(coeffs, (-rows[k][n]) % p)
    red_ring = ring.subring([ring.names[c] for c in free])
    # every original variable as an affine vector over (free vars..., 1)
    k = len(free)
    vecs = []
    for col in range(n):
        v = [0] * (k + 1)
        if col in elimination:
            e = rows[pivots.index(col)]
            for q, c in enumerate(free):
                v[q] = (-e[c]) % p
            v[k] = (-e[n]) % p
        else:
            v[free.index(col)] = 1
        vecs.append(v)
    reduced = []
    for f in sys.quadratic_gens + sys.extra_gens:
        if f.total_degree() <= 2:
            q = _substitute_affine(f, vecs, red_ring)
        else:
            q = f.substitute(elimination, red_ring)
        if not q.is_zero():
            reduced.append(q)
    return QuadraticSystem(sys.d, ring, sys.linear_gens, sys.quadratic_gens, sys.extra_gens,
                           elimination, red_ring, reduced, rank)


def _substitute_affine(f: MPoly, vecs, ring: PolyRing) -> MPoly:
    """Substitute affine forms into a polynomial of degree <= 2."""
    p = ring.p
    k = ring.nvars
    quad = [[0] * (k + 1) for _ in range(k + 1)]
    for m, c in f.terms:
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        if not idx:
            quad[k][k] += c
        elif len(idx) == 1:
            for a, va in enumerate(vecs[idx[0]]):
                if va:
                    quad[a][k] += c * va
        else:
            u, w = vecs[idx[0]], vecs[idx[1]]
            for a, ua in enumerate(u):
                if ua:
                    cu = c * ua
                    row = quad[a]
                    for b, wb in enumerate(w):
                        if wb:
                            row[b] += cu * wb
    d = {}
    for a in range(k + 1):
        for b in range(k + 1):
            c = quad[a][b] % p
            if c:
                e = [0] * k
                if a < k:
                    e[a] += 1
                if b < k:
                    e[b] += 1
                e = tuple(e)
                d[e] = (d.get(e, 0) + c) % p
    return ring.from_dict(d)


def split_assignment(d: int, assignment) -> tuple[list[int], list[int]]:
    """(g coefficients incl. the leading 1, h coefficients)."""
    a = [int(v) for v in assignment]
    return a[:d - 1] + [1], a[d - 1:]


def assignment_polys(ctx, d: int, assignment) -> tuple[UPoly, UPoly]:
    g, h = split_assignment(d, assignment)
    return UPoly(ctx, g), UPoly(ctx, h)


def sign_companion(d: int, assignment, p: int) -> tuple[int, ...]:
    """Negate every h-coordinate."""
    a = [int(v) for v in assignment]
    return tuple(a[:d - 1] + [(-v) % p for v in a[d - 1:]])


def assignment_from_polys(d: int, g: UPoly, h: UPoly) -> tuple[int, ...]:
    if g.degree != d - 1 or g.lc() != 1:
        raise UsageError("g must be monic of degree d - 1")
    if h.degree > d:
        raise UsageError("h has degree above d")
    return tuple(g[j] for j in range(d - 1)) + tuple(h[j] for j in range(d + 1))
