"""Elliptic curves y^2 = x^3 + Ax + B over F_q.

Contents: a three-chart projective group law, division polynomials,
Schoof's trace computation and a brute-force counting oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from sympy import nextprime
from sympy.ntheory.modular import crt

from .errors import CapExceeded, FactorFound, InconsistencyError, InvariantViolation, NoChartApplies
from .ff import FieldCtx, FieldElement
from .upoly import UPoly, invmod, poly_gcd, powmod

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class EllipticCurve:
    ctx: FieldCtx
    A: FieldElement
    B: FieldElement
    disc: FieldElement = field(init=False, compare=False)

    def __post_init__(self):
        d = -16 * (4 * self.A**3 + 27 * self.B**2)
        if not d:
            raise InvariantViolation("4A^3 + 27B^2 = 0: the cubic is singular")
        object.__setattr__(self, "disc", d)

    @classmethod
    def from_ints(cls, ctx: FieldCtx, A, B) -> "EllipticCurve":
        return cls(ctx, ctx.element(A), ctx.element(B))

    @property
    def q(self) -> int:
        return self.ctx.q

    def rhs(self) -> UPoly:
        """x^3 + Ax + B."""
        return UPoly(self.ctx, [self.B, self.A, 0, 1])

    def identity(self) -> "ProjPoint":
        return ProjPoint(self.ctx.zero, self.ctx.one, self.ctx.zero)

    def point(self, x, y) -> "ProjPoint":
        P = ProjPoint(self.ctx.element(x), self.ctx.element(y), self.ctx.one)
        if not self.contains(P):
            raise InvariantViolation(f"{P} is not on the curve")
        return P

    def contains(self, P: "ProjPoint") -> bool:
        X, Y, Z = P.X, P.Y, P.Z
        return Y * Y * Z == X**3 + self.A * X * Z * Z + self.B * Z**3

    def points(self) -> list:
        """Every F_q-point, identity first (enumeration; small q only)."""
        out = [self.identity()]
        f = self.rhs()
        for xv in range(self.ctx.q):
            x = FieldElement(self.ctx, xv)
            fx = f(x)
            if not fx:
                out.append(ProjPoint(x, self.ctx.zero, self.ctx.one))
                continue
            for yv in range(self.ctx.q):
                y = FieldElement(self.ctx, yv)
                if y * y == fx:
                    out.append(ProjPoint(x, y, self.ctx.one))
        return out


@dataclass(frozen=True)
class ProjPoint:
    X: FieldElement
    Y: FieldElement
    Z: FieldElement

    def is_identity(self) -> bool:
        return not self.Z

    def normalized(self) -> "ProjPoint":
        if self.Z:
            inv = self.Z.inverse()
            return ProjPoint(self.X * inv, self.Y * inv, self.Z.ctx.one)
        if self.Y:
            inv = self.Y.inverse()
            return ProjPoint(self.X * inv, self.Y.ctx.one, self.Z)
        raise InvariantViolation("(0:0:0) is not a projective point")

    def __neg__(self):
        return ProjPoint(self.X, -self.Y, self.Z)

    def __repr__(self):
        return f"({self.X.v}:{self.Y.v}:{self.Z.v})"


# -- addition charts ----------------------------------------------------------
#
# Each chart is a triple of bihomogeneous forms; where it is not (0,0,0) it
# equals P + Q.  Exceptional sets: chord law = diagonal and pairs involving
# the identity; the two (2,2) laws fail exactly when P - Q lies on the line
# Y = 0 resp. Z = 0.  Those two sets are disjoint, so the charts cover E x E.


def _chord(P, Q, A, B):
    X1, Y1, Z1 = P.X, P.Y, P.Z
    X2, Y2, Z2 = Q.X, Q.Y, Q.Z
    u = Y2 * Z1 - Y1 * Z2
    v = X2 * Z1 - X1 * Z2
    vv = v * v
    vvv = vv * v
    w = u * u * Z1 * Z2 - vvv - 2 * vv * X1 * Z2
    return (v * w, u * (vv * X1 * Z2 - w) - vvv * Y1 * Z2, vvv * Z1 * Z2)


def _doubling_adapted(P, Q, A, B):
    X1, Y1, Z1 = P.X, P.Y, P.Z
    X2, Y2, Z2 = Q.X, Q.Y, Q.Z
    b3 = 3 * B
    s = X1 * Z2 + X2 * Z1
    t = Y1 * Z2 + Y2 * Z1
    m = X1 * Y2 + X2 * Y1
    e = 3 * X1 * X2 + A * Z1 * Z2
    g = A * X1 * X2 + b3 * s - A * A * Z1 * Z2
    plus = Y1 * Y2 + A * s + b3 * Z1 * Z2
    minus = Y1 * Y2 - A * s - b3 * Z1 * Z2
    return (m * minus - t * g, plus * minus + e * g, t * plus + m * e)


def _identity_safe(P, Q, A, B):
    X1, Y1, Z1 = P.X, P.Y, P.Z
    X2, Y2, Z2 = Q.X, Q.Y, Q.Z
    dxy = X1 * Y2 - X2 * Y1
    dxz = X1 * Z2 - X2 * Z1
    t = Y1 * Z2 + Y2 * Z1
    e = 3 * X1 * X2 + A * Z1 * Z2
    h = A * (X1 * Z2 + X2 * Z1) + 3 * B * Z1 * Z2 - Y1 * Y2
    return (dxy * t - dxz * h, -e * dxy + (Y1 * Z2 - Y2 * Z1) * h, e * dxz - t * (Y1 * Z2 - Y2 * Z1))


@dataclass(frozen=True)
class AdditionChart:
    id: str
    bidegree: tuple
    formulas: Callable

    def __call__(self, P: ProjPoint, Q: ProjPoint, curve: EllipticCurve) -> tuple:
        return self.formulas(P, Q, curve.A, curve.B)


CHARTS = (
    AdditionChart("generic", (4, 4), _chord),
    AdditionChart("doubling", (2, 2), _doubling_adapted),
    AdditionChart("identity", (2, 2), _identity_safe),
)


def evaluate_charts(P: ProjPoint, Q: ProjPoint, curve: EllipticCurve) -> list:
    """Raw output triple of every chart, in chart order."""
    return [chart(P, Q, curve) for chart in CHARTS]


def add_charts(P: ProjPoint, Q: ProjPoint, curve: EllipticCurve) -> ProjPoint:
    for triple in evaluate_charts(P, Q, curve):
        if any(triple):
            return ProjPoint(*triple).normalized()
    raise NoChartApplies(f"no chart covers ({P}, {Q})")


def scalar_mul(n: int, P: ProjPoint, curve: EllipticCurve) -> ProjPoint:
    if n < 0:
        return -scalar_mul(-n, P, curve)
    result = curve.identity()
    base = P
    while n:
        if n & 1:
            result = add_charts(result, base, curve)
        n >>= 1
        if n:
            base = add_charts(base, base, curve)
    return result


# -- counting ------------------------------------------------------------------


def count_naive(curve: EllipticCurve, cap: int = DEFAULT_CAP) -> int:
    """#E(F_q) = 1 + sum over x of (1 + chi(x^3 + Ax + B))."""
    from .upoly import character_sum

    q = curve.ctx.q
    if q > cap:
        raise CapExceeded(q, cap)
    return 1 + q + character_sum(curve.rhs())


# -- division polynomials ----------------------------------------------------


def division_polynomials(curve: EllipticCurve, n_max: int) -> list:
    """psi_0 .. psi_{n_max} with y eliminated.

    Entry n is a polynomial in x alone: psi_n itself for odd n, and psi_n / y
    for even n (so entry 2 is the constant 2).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ctx = curve.ctx
    A, B = curve.A, curve.B
    F = curve.rhs()
    F2 = F * F
    psi = [
        UPoly(ctx, []),
        UPoly(ctx, [1]),
        UPoly(ctx, [2]),
        UPoly(ctx, [-A * A, 12 * B, 6 * A, 0, 3]),
        UPoly(ctx, [-8 * B * B - A**3, -4 * A * B, -5 * A * A, 20 * B, 5 * A, 0, 1]).scale(4),
    ]
    for n in range(5, n_max + 1):
        m = n // 2
        if n % 2:
            if m % 2 == 0:
                val = F2 * psi[m + 2] * psi[m] ** 3 - psi[m - 1] * psi[m + 1] ** 3
            else:
                val = psi[m + 2] * psi[m] ** 3 - F2 * psi[m - 1] * psi[m + 1] ** 3
        else:
            inner = psi[m + 2] * psi[m - 1] ** 2 - psi[m - 2] * psi[m + 1] ** 2
            val = (inner * psi[m]).scale(ctx.element(2).inverse())
        psi.append(val)
    return psi[: n_max + 1]


# -- Schoof ------------------------------------------------------------------
#
# Points of E over R = F_q[x]/(h) are pairs (a, b) standing for (a(x), b(x) y);
# None is the identity.  A non-invertible denominator means h splits; the
# caller retries on a smaller factor.


class _TorsionRing:
    def __init__(self, curve: EllipticCurve, h: UPoly):
        self.h = h
        self.F = curve.rhs() % h
        self.A = UPoly(curve.ctx, [curve.A])
        self.zero = UPoly(curve.ctx, [])

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        h = self.h
        a1, b1 = P
        a2, b2 = Q
        dx = (a2 - a1) % h
        if dx.is_zero():
            dy = (b2 - b1) % h
            if dy.is_zero():
                return self.double(P)
            if ((b1 + b2) % h).is_zero():
                return None
            raise FactorFound(poly_gcd(dy, h))
        r = ((b2 - b1) * invmod(dx, h)) % h
        a3 = (r * r * self.F - a1 - a2) % h
        b3 = (r * (a1 - a3) - b1) % h
        return (a3, b3)

    def double(self, P):
        if P is None:
            return None
        h = self.h
        a, b = P
        if (b % h).is_zero():
            return None
        r = ((a * a).scale(3) + self.A) * invmod((b * self.F).scale(2), h) % h
        a3 = (r * r * self.F - a - a) % h
        b3 = (r * (a - a3) - b) % h
        return (a3, b3)

    def mul(self, n: int, P):
        result, base = None, P
        while n:
            if n & 1:
                result = self.add(result, base)
            n >>= 1
            if n:
                base = self.double(base)
        return result

    def equal(self, P, Q) -> bool:
        if P is None or Q is None:
            return P is None and Q is None
        return ((P[0] - Q[0]) % self.h).is_zero() and ((P[1] - Q[1]) % self.h).is_zero()


def _tau_on_factor(curve: EllipticCurve, ell: int, h: UPoly) -> int:
    ring = _TorsionRing(curve, h)
    q = curve.ctx.q
    x = UPoly.x(curve.ctx) % h
    xq = powmod(x, q, h)
    yq = powmod(ring.F, (q - 1) // 2, h)
    xq2 = powmod(xq, q, h)
    yq2 = powmod(ring.F, (q * q - 1) // 2, h)
    frob = (xq, yq)
    lhs = ring.add((xq2, yq2), ring.mul(q % ell, (x, UPoly(curve.ctx, [1]))))
    acc = None
    for tau in range(ell):
        if ring.equal(lhs, acc):
            return tau
        acc = ring.add(acc, frob)
    raise InconsistencyError(f"no trace residue mod {ell} satisfies the Frobenius relation")


def trace_mod_ell(curve: EllipticCurve, ell: int, psi: UPoly | None = None) -> int:
    """t mod ell from the Frobenius relation on ell-torsion.

    Whenever a nontrivial factor of the working modulus shows up, the
    computation restarts on the smaller of the two cofactors.
    """
    if ell % 2 == 0 or ell < 3:
        raise ValueError("ell must be an odd prime")
    if ell == curve.ctx.p:
        raise ValueError("ell must differ from the characteristic")
    h = (psi if psi is not None else division_polynomials(curve, ell)[ell]).monic()
    while True:
        try:
            return _tau_on_factor(curve, ell, h)
        except FactorFound as exc:
            g = exc.factor.monic()
            if not 0 < g.degree < h.degree:
                raise
            cof = (h // g).monic()
            h = g if g.degree <= cof.degree else cof


def trace_mod_2(curve: EllipticCurve) -> int:
    """t is even iff x^3 + Ax + B has a root in F_q."""
    F = curve.rhs()
    x = UPoly.x(curve.ctx)
    root = poly_gcd(powmod(x, curve.ctx.q, F) - x, F).degree > 0
    return 0 if root else 1


@dataclass(frozen=True)
class SchoofTrace:
    t: int
    residues: tuple
    q: int
    t_mod_2: int

    @property
    def N(self) -> int:
        return self.q + 1 - self.t

    @property
    def modulus(self) -> int:
        return 2 * math.prod(ell for ell, _ in self.residues)


def schoof_ells(q: int, p: int) -> list:
    """Odd primes != p, ascending, until 2 * prod(ell) > 4 sqrt(q)."""
    ells, M = [], 2
    ell = 2
    while M * M <= 16 * q:
        ell = nextprime(ell)
        if ell == p:
            continue
        ells.append(ell)
        M *= ell
    return ells


def schoof_trace(curve: EllipticCurve, executor=None) -> SchoofTrace:
    """Trace of Frobenius by Schoof's method.

    ``executor`` (anything with an order-preserving ``map``) may be given to
    run the per-ell computations concurrently.
    """
    ctx = curve.ctx
    if ctx.p <= 3:
        raise InvariantViolation("Schoof's method here needs characteristic > 3")
    q = ctx.q
    ells = schoof_ells(q, ctx.p)
    n_max = max(ells) if ells else 1
    psis = division_polynomials(curve, n_max)
    args = [(curve, ell, psis[ell]) for ell in ells]
    if executor is None:
        taus = [trace_mod_ell(*a) for a in args]
    else:
        taus = list(executor.map(_trace_star, args))
    t2 = trace_mod_2(curve)
    residues = tuple(zip(ells, taus))
    moduli = [2] + ells
    t, M = crt(moduli, [t2] + taus)
    t, M = int(t), int(M)
    if t > M // 2:
        t -= M
    if t * t > 4 * q:
        raise InconsistencyError(f"trace {t} violates the Hasse bound for q = {q}")
    return SchoofTrace(t=t, residues=residues, q=q, t_mod_2=t2)


def _trace_star(args):
    return trace_mod_ell(*args)
