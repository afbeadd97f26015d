"""Hyperelliptic curves y^2 = f(x): point counts, zeta numerators and
genus-2 Jacobian arithmetic on Mumford pairs (Cantor's algorithm).

Degree-0 classes are written E - (deg E) inf for odd d, and
E - (deg E / 2) D_inf for even d, where D_inf is the (rational) pair of
points at infinity.  For even d the reduced representative is unique only
when the leading coefficient is a non-square, so even-degree curves are
moved to an isomorphic model x = alpha + 1/z with f(alpha) a non-square,
over an extension of F_q when F_q itself has no such alpha.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from math import isqrt

from sympy import factorint

from .errors import CapExceeded, InvalidDivisor, InvariantViolation, NoOrderFound, NonIntegralCoefficient, WeilBoundViolated
from .ff import FieldCtx, FieldElement, extension_of, quadratic_character, sqrt
from .upoly import UPoly, character_sum, discriminant, poly_xgcd
from .zeta import ZetaNumerator

DEFAULT_CAP = 10**6
DEFAULT_INTERVAL_CAP = 10**8


@dataclass(frozen=True)
class MumfordDivisor:
    u: UPoly
    v: UPoly

    def __eq__(self, other):
        if not isinstance(other, MumfordDivisor):
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u.c, self.v.c))

    def key(self) -> tuple:
        return (self.u.c, self.v.c)

    def is_identity(self) -> bool:
        return self.u.is_one()

    def __neg__(self):
        return MumfordDivisor(self.u, (-self.v) % self.u)

    def __repr__(self):
        return f"MumfordDivisor(u={self.u!r}, v={self.v!r})"


@dataclass(frozen=True)
class JacobianModel:
    """The model the group law actually runs on.

    ``alpha`` is None when the model is the curve itself; otherwise the
    model is w^2 = z^d f(alpha + 1/z) over ``ctx`` (which may extend the
    curve's field) and points map by z = 1/(x - alpha), w = y z^3.
    """

    ctx: FieldCtx
    f: UPoly
    alpha: int | None
    embed: tuple

    @property
    def even(self) -> bool:
        return self.f.degree % 2 == 0

    def identity(self) -> MumfordDivisor:
        return MumfordDivisor(UPoly(self.ctx, [1]), UPoly(self.ctx, []))

    def point_divisor(self, x: FieldElement, y: FieldElement) -> MumfordDivisor:
        """Mumford pair (x - x0, y0) of a curve point, in model coordinates."""
        ctx = self.ctx
        xv, yv = self.embed[x.v], self.embed[y.v]
        if self.alpha is not None:
            z = ctx.inv(ctx.sub(xv, self.alpha))
            w = ctx.mul(yv, ctx.pow(z, 3))
            xv, yv = z, w
        return MumfordDivisor(UPoly(ctx, [ctx.neg(xv), 1]), UPoly(ctx, [yv]))


class HyperCurve:
    """y^2 = f(x) with f squarefree of degree d >= 3 (genus (d-1)//2)."""

    def __init__(self, ctx: FieldCtx, f: UPoly):
        if f.ctx != ctx:
            raise InvariantViolation("f must have coefficients in ctx")
        if f.degree < 3:
            raise InvariantViolation(f"degree {f.degree} < 3")
        if not discriminant(f):
            raise InvariantViolation("f is not squarefree (discriminant vanishes)")
        self.ctx = ctx
        self.f = f
        self.d = f.degree
        self.genus = (self.d - 1) // 2

    @classmethod
    def from_ints(cls, ctx: FieldCtx, coeffs_high_first) -> "HyperCurve":
        """Coefficients a_0 (leading) .. a_d, as in y^2 = a_0 x^d + ... + a_d."""
        return cls(ctx, UPoly.from_ints(ctx, list(reversed(coeffs_high_first))))

    def __eq__(self, other):
        return isinstance(other, HyperCurve) and self.ctx == other.ctx and self.f == other.f

    def __hash__(self):
        return hash((self.ctx.q, self.f.c))

    def __repr__(self):
        return f"HyperCurve(y^2 = {self.f!r})"

    @property
    def q(self) -> int:
        return self.ctx.q

    def points(self) -> list:
        """Affine F_q-points (x, y)."""
        out = []
        for xv in range(self.ctx.q):
            x = FieldElement(self.ctx, xv)
            fx = self.f(x)
            if quadratic_character(fx) == -1:
                continue
            r = sqrt(fx)
            out.append((x, r))
            if r:
                out.append((x, -r))
        return out

    @cached_property
    def has_affine_point(self) -> bool:
        return any(self.ctx.is_square(self.f.eval_raw(x)) for x in range(self.ctx.q))

    @cached_property
    def jacobian(self) -> JacobianModel:
        if self.genus != 2:
            raise InvariantViolation("Jacobian arithmetic is implemented for genus 2 only")
        ctx, f = self.ctx, self.f
        ident = tuple(range(ctx.q))
        if self.d == 5 or not ctx.is_square(f.lc()):
            return JacobianModel(ctx, f, None, ident)
        for alpha in range(ctx.q):
            if not ctx.is_square(f.eval_raw(alpha)):
                return JacobianModel(ctx, _shift_to_infinity(f, alpha), alpha, ident)
        m = 2
        while True:
            big, emb = extension_of(ctx, m)
            fb = f.map_coeffs(big, emb)
            for alpha in range(big.q):
                if not big.is_square(fb.eval_raw(alpha)):
                    return JacobianModel(big, _shift_to_infinity(fb, alpha), alpha, emb)
            m += 1


def _shift_to_infinity(f: UPoly, alpha: int) -> UPoly:
    """z^d f(alpha + 1/z)."""
    ctx = f.ctx
    d = f.degree
    lin = UPoly(ctx, [1, alpha])  # alpha z + 1
    z = UPoly.x(ctx)
    out = UPoly(ctx, [])
    for i, a in enumerate(f.c):
        if a:
            out = out + (lin**i * z ** (d - i)).scale(FieldElement(ctx, a))
    return out


# -- Cantor's algorithm ------------------------------------------------------


def is_valid_divisor(D: MumfordDivisor, model: JacobianModel) -> bool:
    u, v = D.u, D.v
    if u.is_zero() or u.lc() != 1 or v.degree >= u.degree:
        return False
    if u.degree > 2:
        return False
    if model.even and u.degree % 2:
        return False
    return ((v * v - model.f) % u).is_zero()


def _compose(D1: MumfordDivisor, D2: MumfordDivisor, f: UPoly):
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    d1, e1, e2 = poly_xgcd(u1, u2)
    d, c1, c2 = poly_xgcd(d1, v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2) // (d * d)
    v = ((s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)) // d) % u
    return u, v


def _reduce(u: UPoly, v: UPoly, f: UPoly, g: int) -> MumfordDivisor:
    while u.degree > g:
        u = ((f - v * v) // u).monic()
        v = (-v) % u
    return MumfordDivisor(u, v % u)


def cantor_add(D1: MumfordDivisor, D2: MumfordDivisor, C: HyperCurve) -> MumfordDivisor:
    model = C.jacobian
    for D in (D1, D2):
        if not is_valid_divisor(D, model):
            raise InvalidDivisor(f"{D!r} fails the Mumford condition on {C!r}")
    u, v = _compose(D1, D2, model.f)
    return _reduce(u, v, model.f, 2)


def cantor_neg(D: MumfordDivisor) -> MumfordDivisor:
    return -D


def cantor_mul(n: int, D: MumfordDivisor, C: HyperCurve) -> MumfordDivisor:
    if n < 0:
        return cantor_mul(-n, -D, C)
    result = C.jacobian.identity()
    base = D
    while n:
        if n & 1:
            result = cantor_add(result, base, C)
        n >>= 1
        if n:
            base = cantor_add(base, base, C)
    return result


def divisor_from_points(C: HyperCurve, pts) -> MumfordDivisor:
    """Class of sum(P_i) - n inf (odd d) or sum(P_i) - (n/2) D_inf (even d)."""
    model = C.jacobian
    if model.even and len(pts) % 2:
        raise InvalidDivisor("even-degree models need an even number of points")
    u, v = UPoly(model.ctx, [1]), UPoly(model.ctx, [])
    for x, y in pts:
        P = model.point_divisor(x, y)
        u, v = _compose(MumfordDivisor(u, v), P, model.f)
    return _reduce(u, v, model.f, 2)


def random_divisor(C: HyperCurve, rng: random.Random) -> MumfordDivisor:
    """Sum of two random affine F_q-points, as a degree-0 class."""
    ctx = C.ctx
    if not C.has_affine_point:
        pairs = _degree_two_pairs(C)
        return pairs[rng.randrange(len(pairs))] if pairs else C.jacobian.identity()
    pts = []
    while len(pts) < 2:
        x = FieldElement(ctx, rng.randrange(ctx.q))
        fx = C.f(x)
        if quadratic_character(fx) == -1:
            continue
        y = sqrt(fx)
        if rng.randrange(2):
            y = -y
        pts.append((x, y))
    return divisor_from_points(C, pts)


def _degree_two_pairs(C: HyperCurve) -> list:
    # only reached for tiny q: Weil forces affine points once q >= 17
    model = C.jacobian
    ctx = model.ctx
    if ctx.q**4 > DEFAULT_CAP:
        raise CapExceeded(ctx.q**4, DEFAULT_CAP)
    out = []
    for u0 in range(ctx.q):
        for u1 in range(ctx.q):
            u = UPoly(ctx, [u0, u1, 1])
            for v0 in range(ctx.q):
                for v1 in range(ctx.q):
                    D = MumfordDivisor(u, UPoly(ctx, [v0, v1]))
                    if is_valid_divisor(D, model):
                        out.append(D)
    return out


# -- counting and zeta -------------------------------------------------------


def count_curve_points(C: HyperCurve, ext_degree: int = 1, cap: int = DEFAULT_CAP) -> int:
    """#C(F_{q^k}) on the smooth model."""
    if ext_degree < 1:
        raise ValueError("extension degree must be at least 1")
    Q = C.q**ext_degree
    if Q > cap:
        raise CapExceeded(Q, cap)
    if ext_degree == 1:
        big, f = C.ctx, C.f
    else:
        big, emb = extension_of(C.ctx, ext_degree)
        f = C.f.map_coeffs(big, emb)
    if C.d % 2:
        at_infinity = 1
    else:
        at_infinity = 2 if big.is_square(f.lc()) else 0
    return Q + character_sum(f) + at_infinity


@dataclass(frozen=True)
class ZetaGenus2:
    a1: int
    a2: int
    q: int

    @property
    def numerator(self) -> ZetaNumerator:
        q = self.q
        return ZetaNumerator((1, self.a1, self.a2, q * self.a1, q * q), q, 2)

    @property
    def jacobian_order(self) -> int:
        return self.numerator(1)


def zeta_from_counts(C: HyperCurve, cap: int = DEFAULT_CAP) -> ZetaGenus2:
    if C.genus != 2:
        raise InvariantViolation("zeta_from_counts here is genus 2; use zeta.zeta_from_counts")
    q = C.q
    N1 = count_curve_points(C, 1, cap)
    N2 = count_curve_points(C, 2, cap)
    S1 = q + 1 - N1
    S2 = q * q + 1 - N2
    if (S1 * S1 - S2) % 2:
        raise NonIntegralCoefficient(f"a2 = ({S1 * S1 - S2})/2 from N1={N1}, N2={N2}")
    a1, a2 = -S1, (S1 * S1 - S2) // 2
    if a1 * a1 > 16 * q or abs(a2) > 6 * q:
        raise WeilBoundViolated(f"a1={a1}, a2={a2} out of range for q={q}")
    return ZetaGenus2(a1, a2, q)


def jacobian_order_check(C: HyperCurve, Z: ZetaGenus2 | int, trials: int, seed: int = 0) -> bool:
    """[n]D = 0 for ``trials`` seeded random divisors D, with n = P(1) (or
    the integer given)."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    n = Z if isinstance(Z, int) else Z.jacobian_order
    rng = random.Random(seed)
    return all(cantor_mul(n, random_divisor(C, rng), C).is_identity() for _ in range(trials))


def weil_interval(q: int, g: int = 2) -> tuple:
    """Integer bounds of [(sqrt q - 1)^2g, (sqrt q + 1)^2g]."""
    # (sqrt q +- 1)^2g = sum_j C(2g, j) q^(j/2) (+-1)^(2g-j); split even/odd j
    from math import comb

    rational = sum(comb(2 * g, j) * q ** (j // 2) for j in range(0, 2 * g + 1, 2))
    irr_sq = sum(comb(2 * g, j) * q ** (j // 2) for j in range(1, 2 * g + 1, 2)) ** 2 * q
    s = isqrt(irr_sq)
    # ceil(r - sqrt m) = r - isqrt(m) and floor(r + sqrt m) = r + isqrt(m)
    lo = rational - s
    hi = rational + s
    return max(lo, 1), hi


def bsgs_order_in_interval(C: HyperCurve, D: MumfordDivisor, cap: int = DEFAULT_INTERVAL_CAP) -> int:
    """ord(D), found from the least n in the Weil interval with [n]D = 0."""
    lo, hi = weil_interval(C.q, 2)
    width = hi - lo + 1
    if width > cap:
        raise CapExceeded(width, cap, "interval")
    m = isqrt(width) + 1
    ident = C.jacobian.identity()
    baby = {}
    P = ident
    for j in range(m):
        baby.setdefault(P.key(), j)
        P = cantor_add(P, D, C)
    giant = cantor_mul(m, D, C)
    G = cantor_mul(lo, D, C)
    n = None
    base = lo
    while base <= hi:
        j = baby.get((-G).key())
        if j is not None and base + j <= hi:
            n = base + j
            break
        G = cantor_add(G, giant, C)
        base += m
    if n is None:
        raise NoOrderFound(f"no multiple of ord(D) in [{lo}, {hi}]")
    for r in factorint(n):
        while n % r == 0 and cantor_mul(n // r, D, C).is_identity():
            n //= r
    return n
