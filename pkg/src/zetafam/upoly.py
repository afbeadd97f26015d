"""Dense univariate polynomials over a finite field.

Coefficients are stored little-endian as encoded field integers (see
:mod:`zetafam.ff`) with no trailing zeros; the zero polynomial has an empty
coefficient tuple and degree -1 (standing in for minus infinity).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from .errors import ContextMismatch, DegreeTooSmall, DivisionByZero, FactorFound, ZeroPolynomial
from .ff import FieldCtx, FieldElement

# Below this length schoolbook beats Kronecker packing.
_KRONECKER_MIN = 12


def _trim(c: list) -> tuple:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


class UPoly:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable = ()):
        vals = []
        for a in coeffs:
            if isinstance(a, FieldElement):
                if a.ctx != ctx:
                    raise ContextMismatch("coefficient from another field")
                vals.append(a.v)
            else:
                if ctx.k == 1:
                    vals.append(a % ctx.p)
                elif 0 <= a < ctx.q:
                    vals.append(a)
                else:
                    raise ValueError(f"encoded coefficient {a} outside [0, {ctx.q})")
        self.ctx = ctx
        self.c = _trim(vals)

    @classmethod
    def _raw(cls, ctx: FieldCtx, c: tuple) -> "UPoly":
        # c must already be trimmed and reduced
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.c = c
        return obj

    @classmethod
    def x(cls, ctx: FieldCtx) -> "UPoly":
        return cls._raw(ctx, (0, 1))

    @classmethod
    def constant(cls, ctx: FieldCtx, a) -> "UPoly":
        return cls(ctx, [a])

    @classmethod
    def from_ints(cls, ctx: FieldCtx, ints: Sequence[int]) -> "UPoly":
        """Little-endian integer coefficients, each reduced into the prime subfield."""
        return cls(ctx, [ctx.from_int(n) for n in ints])

    # -- basic properties ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def coeffs(self) -> list:
        return [FieldElement(self.ctx, v) for v in self.c]

    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.ctx == other.ctx and self.c == other.c
        if isinstance(other, int):
            return self.c == UPoly(self.ctx, [other]).c
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.q, self.c))

    def __repr__(self):
        if not self.c:
            return "UPoly(0)"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            v = self.c[i]
            if not v:
                continue
            coef = str(v) if self.ctx.k == 1 else f"[{','.join(map(str, self.ctx.digits(v)))}]"
            if i == 0:
                terms.append(coef)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if v == 1 else f"{coef}*{mono}")
        return f"UPoly({' + '.join(terms)} over GF({self.ctx.q}))"

    def _check(self, other: "UPoly") -> None:
        if self.ctx is not other.ctx and self.ctx != other.ctx:
            raise ContextMismatch("polynomials over different fields")

    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElement)):
            return UPoly(self.ctx, [other])
        return NotImplemented

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        add = self.ctx.add
        out = list(a)
        for i, v in enumerate(b):
            out[i] = add(out[i], v)
        return UPoly._raw(self.ctx, _trim(out))

    __radd__ = __add__

    def __neg__(self):
        neg = self.ctx.neg
        return UPoly._raw(self.ctx, tuple(neg(v) for v in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return UPoly._raw(self.ctx, _mul(self.ctx, self.c, other.c))

    __rmul__ = __mul__

    def scale(self, a) -> "UPoly":
        v = a.v if isinstance(a, FieldElement) else self.ctx.from_int(a)
        if v == 0:
            return UPoly._raw(self.ctx, ())
        mul = self.ctx.mul
        return UPoly._raw(self.ctx, tuple(mul(x, v) for x in self.c))

    def __pow__(self, e: int):
        result = UPoly._raw(self.ctx, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        q, r = _divmod(self.ctx, self.c, other.c)
        return UPoly._raw(self.ctx, q), UPoly._raw(self.ctx, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return UPoly._raw(self.ctx, _mod(self.ctx, self.c, other.c))

    def monic(self) -> "UPoly":
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(FieldElement(self.ctx, self.ctx.inv(self.c[-1])))

    def derivative(self) -> "UPoly":
        ctx = self.ctx
        return UPoly._raw(
            ctx, _trim([ctx.mul(ctx.from_int(i), v) for i, v in enumerate(self.c)][1:])
        )

    def __call__(self, a):
        """Evaluate at a field element (or int) by Horner's rule."""
        ctx = self.ctx
        x = a.v if isinstance(a, FieldElement) else ctx.from_int(a)
        return FieldElement(ctx, self.eval_raw(x))

    def eval_raw(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        if ctx.k == 1:
            p = ctx.p
            for v in reversed(self.c):
                acc = (acc * x + v) % p
            return acc
        add, mul = ctx.add, ctx.mul
        for v in reversed(self.c):
            acc = add(mul(acc, x), v)
        return acc

    def map_coeffs(self, ctx: FieldCtx, table: Sequence[int]) -> "UPoly":
        """Push coefficients through an embedding table into ``ctx``."""
        return UPoly._raw(ctx, tuple(table[v] for v in self.c))

    def roots(self) -> list:
        """All roots in the coefficient field, by exhaustive search."""
        if not self.c:
            raise ZeroPolynomial("every element is a root of 0")
        return [FieldElement(self.ctx, v) for v in range(self.ctx.q) if self.eval_raw(v) == 0]


# -- kernels on raw coefficient tuples ---------------------------------------


def _mul(ctx: FieldCtx, a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    if ctx.k == 1:
        p = ctx.p
        if min(len(a), len(b)) >= _KRONECKER_MIN:
            return _kronecker(a, b, p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim([v % p for v in out])
    add, mul = ctx.add, ctx.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return _trim(out)


def _kronecker(a: tuple, b: tuple, p: int) -> tuple:
    # pack into one big integer, multiply, unpack; bit-identical to schoolbook
    n = min(len(a), len(b))
    width = ((n * (p - 1) ** 2).bit_length() + 7) // 8
    A = int.from_bytes(b"".join(v.to_bytes(width, "little") for v in a), "little")
    B = int.from_bytes(b"".join(v.to_bytes(width, "little") for v in b), "little")
    m = len(a) + len(b) - 1
    raw = (A * B).to_bytes(width * m, "little")
    return _trim([int.from_bytes(raw[i * width:(i + 1) * width], "little") % p for i in range(m)])


def _divmod(ctx: FieldCtx, f: tuple, g: tuple):
    if not g:
        raise DivisionByZero("polynomial division by zero")
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return (), f
    inv = ctx.inv(g[-1])
    r = list(f)
    q = [0] * (len(f) - dg)
    if ctx.k == 1:
        p = ctx.p
        for i in range(len(f) - 1, dg - 1, -1):
            c = r[i] * inv % p
            if c:
                q[i - dg] = c
                off = i - dg
                for j in range(dg):
                    r[off + j] = (r[off + j] - c * g[j]) % p
            r[i] = 0
    else:
        add, mul, neg = ctx.add, ctx.mul, ctx.neg
        for i in range(len(f) - 1, dg - 1, -1):
            c = mul(r[i], inv)
            if c:
                q[i - dg] = c
                nc = neg(c)
                off = i - dg
                for j in range(dg):
                    if g[j]:
                        r[off + j] = add(r[off + j], mul(nc, g[j]))
            r[i] = 0
    return _trim(q), _trim(r[:dg])


def _mod(ctx: FieldCtx, f: tuple, g: tuple) -> tuple:
    return _divmod(ctx, f, g)[1]


# -- public operations -------------------------------------------------------


def poly_arith(f: UPoly, g: UPoly, op: str):
    """add / sub / mul return a UPoly; divmod returns (quotient, remainder)."""
    f._check(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "divmod":
        return divmod(f, g)
    raise ValueError(f"unknown operation {op!r}")


def poly_gcd(f: UPoly, g: UPoly) -> UPoly:
    """Monic greatest common divisor."""
    f._check(g)
    if f.is_zero() and g.is_zero():
        raise ZeroPolynomial("gcd(0, 0) is undefined")
    a, b = f.c, g.c
    ctx = f.ctx
    while b:
        a, b = b, _mod(ctx, a, b)
    return UPoly._raw(ctx, a).monic()


def poly_xgcd(f: UPoly, g: UPoly):
    """Return (d, s, t) with d = s*f + t*g monic."""
    f._check(g)
    ctx = f.ctx
    zero, one = UPoly._raw(ctx, ()), UPoly._raw(ctx, (1,))
    r0, r1, s0, s1, t0, t1 = f, g, one, zero, zero, one
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        raise ZeroPolynomial("gcd(0, 0) is undefined")
    inv = FieldElement(ctx, ctx.inv(r0.lc()))
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def invmod(a: UPoly, m: UPoly) -> UPoly:
    """Inverse of a modulo m; raises FactorFound when gcd(a, m) is nontrivial."""
    d, s, _ = poly_xgcd(a % m, m)
    if d.degree > 0:
        raise FactorFound(d)
    if d.is_zero():
        raise DivisionByZero("zero is not invertible")
    return s % m


def powmod(base: UPoly, e: int, m: UPoly) -> UPoly:
    ctx = base.ctx
    mc = m.c
    result = _mod(ctx, (1,), mc)
    b = _mod(ctx, base.c, mc)
    while e:
        if e & 1:
            result = _mod(ctx, _mul(ctx, result, b), mc)
        e >>= 1
        if e:
            b = _mod(ctx, _mul(ctx, b, b), mc)
    return UPoly._raw(ctx, result)


def resultant(f: UPoly, g: UPoly) -> FieldElement:
    """Res(f, g) by the Euclidean scheme.

    Convention: Res(f, c) = c^deg f for a constant c, and
    Res(f, g) = (-1)^(deg f * deg g) * lc(g)^(deg f - deg r) * Res(g, r)
    with r = f mod g.
    """
    f._check(g)
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    ctx = f.ctx
    acc = 1
    a, b = f.c, g.c
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return FieldElement(ctx, ctx.mul(acc, ctx.pow(b[0], da)))
        r = _mod(ctx, a, b)
        if not r:
            return ctx.zero
        acc = ctx.mul(acc, ctx.pow(b[-1], da - (len(r) - 1)))
        if (da * db) % 2:
            acc = ctx.neg(acc)
        a, b = b, r


def discriminant(f: UPoly) -> FieldElement:
    """(-1)^(d(d-1)/2) * Res(f, f') / a0, with f' taken at formal degree d - 1."""
    d = f.degree
    if d < 2:
        raise DegreeTooSmall(f"discriminant needs degree >= 2, got {d}")
    ctx = f.ctx
    fp = f.derivative()
    if fp.is_zero():
        return ctx.zero
    a0 = f.lc()
    res = resultant(f, fp).v
    # f' loses its top coefficient when p | d
    res = ctx.mul(res, ctx.pow(a0, d - 1 - fp.degree))
    val = ctx.div(res, a0)
    if (d * (d - 1) // 2) % 2:
        val = ctx.neg(val)
    return FieldElement(ctx, val)


class QuotientRingElem:
    """An element of F_q[x]/(modulus), always fully reduced."""

    __slots__ = ("modulus", "value")

    def __init__(self, value: UPoly, modulus: UPoly):
        if modulus.degree < 1:
            raise DegreeTooSmall("quotient modulus must have positive degree")
        self.modulus = modulus
        self.value = value % modulus

    def _same(self, other: "QuotientRingElem") -> None:
        if self.modulus != other.modulus:
            raise ContextMismatch("elements of different quotient rings")

    def __add__(self, other):
        self._same(other)
        return QuotientRingElem(self.value + other.value, self.modulus)

    def __sub__(self, other):
        self._same(other)
        return QuotientRingElem(self.value - other.value, self.modulus)

    def __mul__(self, other):
        self._same(other)
        return QuotientRingElem(self.value * other.value, self.modulus)

    def __eq__(self, other):
        if not isinstance(other, QuotientRingElem):
            return NotImplemented
        return self.modulus == other.modulus and self.value == other.value

    def __hash__(self):
        return hash((self.modulus, self.value))

    def __repr__(self):
        return f"QuotientRingElem({self.value!r} mod {self.modulus!r})"


def qring_pow(base: QuotientRingElem, e: int) -> QuotientRingElem:
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return QuotientRingElem(powmod(base.value, e, base.modulus), base.modulus)


def is_irreducible(f: UPoly) -> bool:
    """Rabin's test: x^(q^n) = x mod f, and gcd(x^(q^(n/r)) - x, f) = 1
    for every prime r dividing n = deg f."""
    n = f.degree
    if n < 1:
        raise DegreeTooSmall("irreducibility needs degree >= 1")
    if n == 1:
        return True
    f = f.monic()
    q = f.ctx.q
    x = UPoly.x(f.ctx)
    frob = [x % f]
    for _ in range(n):
        frob.append(powmod(frob[-1], q, f))
    if frob[n] != x % f:
        return False
    for r in factorint(n):
        if poly_gcd(frob[n // r] - x, f).degree > 0:
            return False
    return True


def character_sum(f: UPoly) -> int:
    """Sum of chi(f(x)) over every x in the coefficient field.

    Vectorized with numpy: plain residues for prime fields, exp/log/Zech
    tables for extension fields.
    """
    ctx = f.ctx
    q = ctx.q
    if ctx.k == 1 and ctx.p < (1 << 31):
        p = ctx.p
        xs = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for c in reversed(f.c):
            acc = (acc * xs + c) % p
        squares = np.zeros(p, dtype=bool)
        squares[xs * xs % p] = True
        zeros = int(np.count_nonzero(acc == 0))
        sq = int(np.count_nonzero(squares[acc])) - zeros
        return sq - (p - zeros - sq)
    t = ctx._tables
    if t is None:
        total = 0
        for x in range(q):
            v = f.eval_raw(x)
            if v:
                total += 1 if ctx.is_square(v) else -1
        return total
    exp = np.asarray(t.exp, dtype=np.int64)
    log = np.asarray(t.log, dtype=np.int64)
    zech = np.asarray(t.zech, dtype=np.int64)
    order = q - 1
    xs = np.arange(q, dtype=np.int64)
    lx = log[xs]
    acc = np.zeros(q, dtype=np.int64)
    for c in reversed(f.c):
        # acc <- acc * x
        nz = (acc != 0) & (xs != 0)
        prod = np.zeros(q, dtype=np.int64)
        prod[nz] = exp[log[acc[nz]] + lx[nz]]
        # acc <- acc + c
        if c:
            lc = t.log[c]
            out = np.full(q, c, dtype=np.int64)
            nzp = prod != 0
            lp = log[prod[nzp]]
            n = (lc - lp) % order
            z = zech[n]
            vals = np.where(z < 0, 0, exp[np.where(z < 0, 0, lp + z)])
            out[nzp] = vals
            acc = out
        else:
            acc = prod
    nzv = acc != 0
    lv = log[acc[nzv]]
    even = int(np.count_nonzero(lv % 2 == 0))
    return even - (int(np.count_nonzero(nzv)) - even)
