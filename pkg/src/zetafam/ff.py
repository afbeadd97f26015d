"""Arithmetic in prime fields F_p and extension fields F_{p^k}.

Elements are encoded internally as integers in ``[0, q)``: the base-p digits
of the encoding are the coefficients (little-endian) of the element in the
polynomial basis ``1, t, ..., t^{k-1}`` modulo the field's irreducible
modulus.  For k = 1 this is just the residue.  Prime-subfield constants
therefore have the same encoding in every extension.

For extension fields up to ``TABLE_LIMIT`` elements, multiplication and
addition go through exp/log/Zech tables built once per context.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from sympy import factorint, isprime

from .errors import ContextMismatch, DivisionByZero, EvenCharacteristic, NoRoot, NotPrime

TABLE_LIMIT = 1 << 20


@dataclass
class _Tables:
    exp: list
    log: list
    zech: list


@dataclass(frozen=True)
class FieldCtx:
    """The finite field F_q with q = p^k.

    ``modulus`` holds the little-endian coefficients of the monic irreducible
    modulus (length k + 1), or is empty when k = 1.
    """

    p: int
    k: int
    modulus: tuple
    q: int
    _tables: _Tables | None = field(default=None, compare=False, repr=False)

    # -- construction helpers -------------------------------------------------

    @property
    def modulus_poly(self):
        """The modulus as a UPoly over the prime field (None when k = 1)."""
        if self.k == 1:
            return None
        from .upoly import UPoly

        return UPoly(make_field(self.p, 1), self.modulus)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def __call__(self, value) -> "FieldElement":
        return self.element(value)

    def element(self, value) -> "FieldElement":
        """Build an element from an int (reduced mod p) or a digit sequence."""
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise ContextMismatch("element belongs to another field")
            return value
        if isinstance(value, int):
            return FieldElement(self, value % self.p)
        digits = list(value)
        if len(digits) > self.k:
            raise ValueError(f"expected at most {self.k} coefficients")
        return FieldElement(self, self.from_digits([d % self.p for d in digits]))

    def elements(self) -> Iterator["FieldElement"]:
        for v in range(self.q):
            yield FieldElement(self, v)

    def digits(self, a: int) -> tuple:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return tuple(out)

    def from_digits(self, ds: Sequence[int]) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- raw arithmetic on encoded integers ---------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            s = a + b
            return s - self.p if s >= self.p else s
        t = self._tables
        if t is not None:
            if a == 0:
                return b
            if b == 0:
                return a
            la = t.log[a]
            n = t.log[b] - la
            if n < 0:
                n += self.q - 1
            z = t.zech[n]
            if z < 0:
                return 0
            return t.exp[la + z]
        return self._digit_add(a, b, 1)

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            s = a - b
            return s + self.p if s < 0 else s
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if a == 0:
            return 0
        if self.k == 1:
            return self.p - a
        t = self._tables
        if t is not None:
            return t.exp[t.log[a] + (self.q - 1) // 2]
        return self._digit_add(0, a, -1)

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        if t is not None:
            return t.exp[t.log[a] + t.log[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        t = self._tables
        if t is not None:
            return t.exp[self.q - 1 - t.log[a]]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        if e == 0:
            return 1
        if a == 0:
            return 0
        t = self._tables
        if t is not None:
            return t.exp[t.log[a] * e % (self.q - 1)]
        result, base = 1, a
        while e:
            if e & 1:
                result = self._slow_mul(result, base)
            e >>= 1
            if e:
                base = self._slow_mul(base, base)
        return result

    def is_square(self, a: int) -> bool:
        """True for 0 and for nonzero squares."""
        if a == 0:
            return True
        if self.k == 1:
            return pow(a, (self.p - 1) // 2, self.p) == 1
        t = self._tables
        if t is not None:
            return t.log[a] % 2 == 0
        return self.pow(a, (self.q - 1) // 2) == 1

    # -- slow paths (no tables) ----------------------------------------------

    def _digit_add(self, a: int, b: int, sign: int) -> int:
        p = self.p
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([(x + sign * y) % p for x, y in zip(da, db)])

    def _slow_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        m = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(k):
                    prod[d - k + i] -= c * m[i]
            prod[d] = 0
        return self.from_digits([c % p for c in prod[:k]])


class FieldElement:
    """An immutable element of a FieldCtx."""

    __slots__ = ("ctx", "v")

    def __init__(self, ctx: FieldCtx, v: int):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple:
        return self.ctx.digits(self.v)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"GF({self.ctx.q}) vs GF({other.ctx.q})")
            return other.v
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.sub(self.v, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.sub(o, self.v))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.div(self.v, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx.div(o, self.v))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.v))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.v, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.v))

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.k, self.v))

    def __int__(self):
        if self.ctx.k != 1 and self.v >= self.ctx.p:
            raise ValueError("element is not in the prime subfield")
        return self.v

    def __repr__(self):
        if self.ctx.k == 1:
            return f"{self.v} (mod {self.ctx.p})"
        terms = [f"{c}*t^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"({' + '.join(terms) or '0'}) in GF({self.ctx.p}^{self.ctx.k})"


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Binary field operation selected by name: add, sub, mul or div."""
    if a.ctx != b.ctx:
        raise ContextMismatch(f"GF({a.ctx.q}) vs GF({b.ctx.q})")
    try:
        fn = {"add": a.ctx.add, "sub": a.ctx.sub, "mul": a.ctx.mul, "div": a.ctx.div}[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return FieldElement(a.ctx, fn(a.v, b.v))


def field_pow(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return a ** e


def quadratic_character(a: FieldElement) -> int:
    """Return 0, +1 or -1 according as a is zero, a square, or a non-square."""
    ctx = a.ctx
    if a.v == 0:
        return 0
    r = ctx.pow(a.v, (ctx.q - 1) // 2)
    return 1 if r == 1 else -1


@functools.lru_cache(maxsize=None)
def _nonresidue(ctx: FieldCtx) -> int:
    for v in range(2, ctx.q):
        if not ctx.is_square(v):
            return v
    raise AssertionError("no quadratic non-residue in an odd field")


def sqrt(a: FieldElement) -> FieldElement:
    """Square root by Tonelli-Shanks; of the two roots, the one whose
    coefficient vector is lexicographically smaller is returned."""
    ctx = a.ctx
    if a.v == 0:
        return a
    if quadratic_character(a) != 1:
        raise NoRoot(f"{a!r} is not a square")
    q = ctx.q
    s, m = 0, q - 1
    while m % 2 == 0:
        s, m = s + 1, m // 2
    z = _nonresidue(ctx)
    c = ctx.pow(z, m)
    x = ctx.pow(a.v, (m + 1) // 2)
    t = ctx.pow(a.v, m)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = ctx.mul(t2, t2)
            i += 1
        b = c
        for _ in range(s - i - 1):
            b = ctx.mul(b, b)
        x = ctx.mul(x, b)
        c = ctx.mul(b, b)
        t = ctx.mul(t, c)
        s = i
    other = ctx.neg(x)
    if ctx.digits(other) < ctx.digits(x):
        x = other
    return FieldElement(ctx, x)


def _prime_irreducible(p: int, k: int) -> tuple:
    from .upoly import UPoly, is_irreducible

    base = make_field(p, 1)
    for low in itertools.product(range(p), repeat=k):
        coeffs = tuple(low) + (1,)
        if coeffs[0] == 0:
            continue
        if is_irreducible(UPoly(base, coeffs)):
            return coeffs
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


def _build_tables(ctx: FieldCtx) -> _Tables:
    q = ctx.q
    order = q - 1
    prime_divs = list(factorint(order))
    gen = None
    for cand in range(2, q):
        if all(ctx.pow(cand, order // r) != 1 for r in prime_divs):
            gen = cand
            break
    exp = [0] * (2 * order)
    log = [-1] * q
    x = 1
    for n in range(order):
        exp[n] = x
        log[x] = n
        x = ctx._slow_mul(x, gen)
    exp[order:] = exp[:order]
    p = ctx.p
    zech = [0] * order
    for n in range(order):
        e = exp[n]
        d0 = e % p
        s = e - d0 + (d0 + 1) % p
        zech[n] = log[s] if s else -1
    return _Tables(exp=exp, log=log, zech=zech)


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldCtx:
    """Return the (cached) context for F_{p^k}.

    The modulus for k > 1 is the first monic irreducible polynomial when the
    low coefficient vectors (c_0, ..., c_{k-1}) are enumerated in
    lexicographic order.
    """
    if not isinstance(p, int) or not isinstance(k, int):
        raise TypeError("p and k must be integers")
    if k < 1:
        raise ValueError("extension degree must be at least 1")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if p < 2 or not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if k == 1:
        return FieldCtx(p, 1, (), p)
    ctx = FieldCtx(p, k, _prime_irreducible(p, k), p**k)
    if ctx.q <= TABLE_LIMIT:
        object.__setattr__(ctx, "_tables", _build_tables(ctx))
    return ctx


@functools.lru_cache(maxsize=None)
def embedding(small: FieldCtx, big: FieldCtx) -> tuple:
    """Encoded images of every element of ``small`` inside ``big``.

    Requires the same characteristic and ``small.k | big.k``.  The image of
    the generator t is the first root of small's modulus among the powers of
    a fixed element of order q_small - 1.
    """
    if small.p != big.p or big.k % small.k:
        raise ContextMismatch(f"GF({small.q}) does not embed in GF({big.q})")
    if small.k == 1:
        return tuple(range(small.q))
    h = big.pow(_primitive(big), (big.q - 1) // (small.q - 1))
    m = small.modulus
    root, cand = None, 1
    for _ in range(small.q - 1):
        acc = 0
        for c in reversed(m):
            acc = big.add(big.mul(acc, cand), c)
        if acc == 0:
            root = cand
            break
        cand = big.mul(cand, h)
    if root is None:
        raise AssertionError("modulus has no root in the extension")
    powers = [1]
    for _ in range(small.k - 1):
        powers.append(big.mul(powers[-1], root))
    images = []
    for v in range(small.q):
        acc = 0
        for d, pw in zip(small.digits(v), powers):
            if d:
                acc = big.add(acc, big.mul(d, pw))
        images.append(acc)
    return tuple(images)


def _primitive(ctx: FieldCtx) -> int:
    if ctx._tables is not None:
        return ctx._tables.exp[1]
    order = ctx.q - 1
    divs = list(factorint(order))
    for cand in range(2, ctx.q):
        if all(ctx.pow(cand, order // r) != 1 for r in divs):
            return cand
    raise AssertionError("no primitive element")


def extension_of(ctx: FieldCtx, n: int) -> tuple:
    """Return (F_{q^n} context, embedding table of ctx into it)."""
    big = make_field(ctx.p, ctx.k * n)
    return big, embedding(ctx, big)
