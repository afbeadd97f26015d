"""Projective plane curves H(X, Y, Z) = 0 over F_q: point counts, singular
points, and the branch-count correction from plane counts to counts on the
smooth model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import sympy

from .errors import CapExceeded, InvariantViolation, ParseError, UnsupportedSingularity
from .ff import FieldCtx, FieldElement, extension_of

DEFAULT_CAP = 10**6
_XYZ = sympy.symbols("X Y Z")


# -- sparse polynomials in X, Y, Z as {(a, b, c): encoded coefficient} -------


def _padd(ctx, f, g):
    out = dict(f)
    for m, c in g.items():
        v = ctx.add(out.get(m, 0), c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(ctx, f, g):
    out = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            v = ctx.add(out.get(m, 0), ctx.mul(c1, c2))
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _ppow(ctx, f, e):
    out = {(0, 0, 0): 1}
    for _ in range(e):
        out = _pmul(ctx, out, f)
    return out


def _substitute(ctx, H, images):
    """H(L0, L1, L2) for polynomial images L_i of X, Y, Z."""
    out = {}
    cache = {}
    for (a, b, c), coef in H.items():
        term = {(0, 0, 0): coef}
        for var, e in zip(range(3), (a, b, c)):
            if e:
                key = (var, e)
                if key not in cache:
                    cache[key] = _ppow(ctx, images[var], e)
                term = _pmul(ctx, term, cache[key])
        out = _padd(ctx, out, term)
    return out


def _linear(coeffs):
    out = {}
    for i, c in enumerate(coeffs):
        if c:
            e = [0, 0, 0]
            e[i] = 1
            out[tuple(e)] = c
    return out


@dataclass(frozen=True)
class PlaneForm:
    """A nonzero form of degree ``deg``; ``terms`` maps exponent triples to
    encoded field coefficients."""

    ctx: FieldCtx
    terms: dict = field(hash=False)
    deg: int

    def __post_init__(self):
        terms = {m: c for m, c in self.terms.items() if c}
        if not terms:
            raise InvariantViolation("the zero form does not define a curve")
        for m in terms:
            if sum(m) != self.deg or min(m) < 0:
                raise InvariantViolation(f"monomial {m} is not of degree {self.deg}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, ctx: FieldCtx, text: str, params: dict | None = None) -> "PlaneForm":
        """Parse e.g. ``"3*X^2*Y - Z^3 + a*X*Z^2"``; parameter symbols take
        values (ints or FieldElements) from ``params``."""
        poly = parse_form(text, list(params or ()))
        return specialize_form(ctx, poly, params or {})

    def __call__(self, X, Y, Z):
        ctx = self.ctx
        v = [x.v if isinstance(x, FieldElement) else ctx.from_int(x) for x in (X, Y, Z)]
        return FieldElement(ctx, self.eval_raw(*v))

    def eval_raw(self, x: int, y: int, z: int) -> int:
        ctx = self.ctx
        add, mul, pw = ctx.add, ctx.mul, ctx.pow
        acc = 0
        for (a, b, c), coef in self.terms.items():
            t = coef
            if a:
                t = mul(t, pw(x, a))
            if b:
                t = mul(t, pw(y, b))
            if c:
                t = mul(t, pw(z, c))
            acc = add(acc, t)
        return acc

    def partial(self, var: int) -> "PlaneFormLike":
        ctx = self.ctx
        out = {}
        for m, coef in self.terms.items():
            e = m[var]
            if e:
                c = ctx.mul(ctx.from_int(e), coef)
                if c:
                    mm = list(m)
                    mm[var] -= 1
                    out[tuple(mm)] = c
        return PlaneFormLike(ctx, out)

    def over(self, big: FieldCtx, table) -> "PlaneForm":
        return PlaneForm(big, {m: table[c] for m, c in self.terms.items()}, self.deg)

    def transform(self, M) -> dict:
        """Terms of H(M (X, Y, Z)^T) for a 3x3 matrix of encoded entries."""
        images = [_linear(row) for row in M]
        return _substitute(self.ctx, self.terms, images)

    def divisible_by_linear(self, L) -> bool:
        """True iff the linear form L = (l0, l1, l2) divides this form."""
        ctx = self.ctx
        if not any(L):
            return True
        i = max(j for j in range(3) if L[j])
        inv = ctx.inv(L[i])
        images = []
        for j in range(3):
            if j != i:
                images.append(_linear([ctx.from_int(1) if k == j else 0 for k in range(3)]))
            else:
                # X_i = -(sum_{k != i} l_k X_k) / l_i
                images.append(_linear([0 if k == i else ctx.neg(ctx.mul(L[k], inv)) for k in range(3)]))
        return not _substitute(ctx, self.terms, images)

    def __repr__(self):
        return f"PlaneForm(deg {self.deg}, {len(self.terms)} terms over GF({self.ctx.q}))"


@dataclass(frozen=True)
class PlaneFormLike:
    """A homogeneous polynomial that may be zero (used for partials)."""

    ctx: FieldCtx
    terms: dict = field(hash=False)

    def eval_raw(self, x, y, z):
        return PlaneForm.eval_raw(self, x, y, z)


def parse_form(text: str, param_names) -> sympy.Poly:
    """Parse a form string into a sympy Poly in X, Y, Z whose coefficients
    are integer polynomials in the parameters."""
    params = sympy.symbols(list(param_names)) if param_names else []
    if not isinstance(params, (list, tuple)):
        params = [params]
    local = {s.name: s for s in list(_XYZ) + list(params)}
    try:
        expr = sympy.parse_expr(text.replace("^", "**"), local_dict=local, evaluate=True)
    except Exception as exc:
        raise ParseError(f"cannot parse form {text!r}: {exc}", field="form") from None
    unknown = expr.free_symbols - set(local.values())
    if unknown:
        raise ParseError(f"unknown symbols {sorted(map(str, unknown))}", field="form")
    poly = sympy.Poly(sympy.expand(expr), *_XYZ)
    for coeff in poly.coeffs():
        parts = sympy.Poly(coeff, *params).coeffs() if params else [coeff]
        if not all(c.is_integer for c in parts):
            raise ParseError("form coefficients must be integers", field="form")
    if not poly.is_homogeneous:
        raise ParseError("form is not homogeneous", field="form")
    return poly


def specialize_form(ctx: FieldCtx, poly: sympy.Poly, values: dict) -> PlaneForm:
    return PlaneForm(ctx, specialize_terms(ctx, poly, values), poly.total_degree())


def specialize_terms(ctx: FieldCtx, poly: sympy.Poly, values: dict) -> dict:
    """Encoded coefficients of the form at the given parameter values;
    possibly empty."""
    names = list(values)
    syms = sympy.symbols(names) if names else []
    if not isinstance(syms, (list, tuple)):
        syms = [syms]
    raw = {n: (v.v if isinstance(v, FieldElement) else ctx.from_int(int(v))) for n, v in values.items()}
    terms = {}
    for monom, coeff in poly.terms():
        cp = sympy.Poly(coeff, *syms) if syms else None
        acc = 0
        if cp is None:
            acc = ctx.from_int(int(coeff))
        else:
            for exps, c in cp.terms():
                t = ctx.from_int(int(c))
                for n, e in zip(names, exps):
                    if e:
                        t = ctx.mul(t, ctx.pow(raw[n], e))
                acc = ctx.add(acc, t)
        if acc:
            terms[tuple(int(e) for e in monom)] = acc
    return terms


# -- counting ----------------------------------------------------------------


def projective_points(ctx: FieldCtx, order: str = "Z"):
    """Canonical representatives of P^2(F_q).

    order "Z": chart Z = 1, then (x : 1 : 0), then (1 : 0 : 0).
    order "X": chart X = 1, then (0 : 1 : z), then (0 : 0 : 1).
    """
    q = ctx.q
    if order == "Z":
        for x in range(q):
            for y in range(q):
                yield (x, y, 1)
        for x in range(q):
            yield (x, 1, 0)
        yield (1, 0, 0)
    elif order == "X":
        for y in range(q):
            for z in range(q):
                yield (1, y, z)
        for z in range(q):
            yield (0, 1, z)
        yield (0, 0, 1)
    else:
        raise ValueError(f"unknown chart order {order!r}")


def count_plane_points(H: PlaneForm, cap: int = DEFAULT_CAP, order: str = "Z") -> int:
    q = H.ctx.q
    size = q * q + q + 1
    if size > cap:
        raise CapExceeded(size, cap)
    if H.ctx.k == 1 and order == "Z":
        return _count_prime_field(H)
    return sum(1 for P in projective_points(H.ctx, order) if H.eval_raw(*P) == 0)


def _count_prime_field(H: PlaneForm) -> int:
    p = H.ctx.p
    xs = np.arange(p, dtype=np.int64)
    pw = [np.ones(p, dtype=np.int64)]
    for _ in range(H.deg):
        pw.append(pw[-1] * xs % p)
    grid = np.zeros((p, p), dtype=np.int64)
    line = np.zeros(p, dtype=np.int64)
    corner = 0
    for (a, b, c), coef in H.terms.items():
        grid = (grid + coef * np.outer(pw[a], pw[b]) % p) % p
        if c == 0:
            if b == 0:
                corner = (corner + coef) % p
            line = (line + coef * pw[a]) % p  # (x : 1 : 0)
    affine = int(np.count_nonzero(grid == 0))
    return affine + int(np.count_nonzero(line == 0)) + (1 if corner == 0 else 0)


# -- singular points -----------------------------------------------------------


@dataclass(frozen=True)
class SingularPoint:
    point: tuple  # canonical encoded coordinates over the search field
    field_q: int  # size of the field the coordinates live in
    kind: str  # split_node, nonsplit_node, cusp, other
    rational: bool
    chart: tuple = field(default=(), compare=False)  # the linear change used

    def branches(self) -> int:
        return {"split_node": 2, "nonsplit_node": 0, "cusp": 1}[self.kind]

    def to_json(self) -> dict:
        return {"point": list(self.point), "field_q": self.field_q, "kind": self.kind, "rational": self.rational}


def _completion(ctx: FieldCtx, P) -> list:
    """Columns of an invertible matrix whose last column is P."""
    i = next(j for j in range(3) if P[j])
    cols = [[1 if k == j else 0 for k in range(3)] for j in range(3) if j != i]
    cols.append(list(P))
    return [[cols[c][r] for c in range(3)] for r in range(3)]


def _classify(H: PlaneForm, P, base_subfield) -> tuple:
    """Kind of the singular point P via the Taylor expansion at (0:0:1)."""
    ctx = H.ctx
    M = _completion(ctx, P)
    G = H.transform(M)
    quad = {(a, b): c for (a, b, cz), c in G.items() if a + b == 2}
    cub = {(a, b): c for (a, b, cz), c in G.items() if a + b == 3}
    alpha, beta, gamma = quad.get((2, 0), 0), quad.get((1, 1), 0), quad.get((0, 2), 0)
    if not (alpha or beta or gamma):
        return "other", M
    disc = ctx.sub(ctx.mul(beta, beta), ctx.mul(4 % ctx.p, ctx.mul(alpha, gamma)))
    if disc:
        square = ctx.is_square(disc)
        # over the base field only when the point (and so the cone) is rational
        if base_subfield is not None and square:
            square = _square_in_subfield(ctx, disc, base_subfield)
        return ("split_node" if square else "nonsplit_node"), M
    # g2 is a multiple of L^2; direction (u, w) with L(u, w) = 0
    if alpha:
        u, w = ctx.neg(ctx.div(beta, ctx.mul(2, alpha))), 1
    else:
        u, w = 1, 0
    g3 = 0
    for (a, b), c in cub.items():
        g3 = ctx.add(g3, ctx.mul(c, ctx.mul(ctx.pow(u, a), ctx.pow(w, b))))
    return ("cusp" if g3 else "other"), M


def _square_in_subfield(ctx, disc, subfield) -> bool:
    # disc lies in the subfield image; test squareness there
    small, table = subfield
    pre = table.index(disc)
    return small.is_square(pre)


def find_singular_points(H: PlaneForm, search_ext: int = 1, cap: int = DEFAULT_CAP) -> list:
    """Singular points of H over F_{q^s}, classified."""
    if search_ext not in (1, 2):
        raise ValueError("search_ext must be 1 or 2")
    q = H.ctx.q
    Qs = q**search_ext
    size = Qs * Qs + Qs + 1
    if size > cap:
        raise CapExceeded(size, cap)
    if search_ext == 1:
        big, table = H.ctx, tuple(range(q))
    else:
        big, table = extension_of(H.ctx, search_ext)
    G = H.over(big, table)
    parts = [G.partial(i) for i in range(3)]
    in_base = set(table)
    out = []
    for P in projective_points(big):
        if G.eval_raw(*P) or any(d.eval_raw(*P) for d in parts):
            continue
        rational = all(c in in_base for c in P)
        kind, M = _classify(G, P, (H.ctx, list(table)) if rational and search_ext > 1 else None)
        if rational and search_ext > 1:
            P = tuple(table.index(c) for c in P)
        out.append(SingularPoint(P, q if rational else Qs, kind, rational, tuple(map(tuple, M))))
    return out


@dataclass(frozen=True)
class SmoothCount:
    n_plane: int
    n_smooth: int
    singular: tuple
    genus: int
    genus_note: str = "up to search bound"


def corrected_smooth_count(H: PlaneForm, search_ext: int = 2, cap: int = DEFAULT_CAP) -> SmoothCount:
    """Count on the smooth model: plane count plus (branches - 1) for every
    rational singular point."""
    n_plane = count_plane_points(H, cap)
    sing = find_singular_points(H, search_ext, cap)
    for s in sing:
        if s.kind == "other":
            raise UnsupportedSingularity(f"singular point {s.point} is not a node or cusp")
    correction = sum(s.branches() - 1 for s in sing if s.rational)
    d = H.deg
    genus = (d - 1) * (d - 2) // 2 - len(sing)
    return SmoothCount(n_plane, n_plane + correction, tuple(sing), genus)


# -- reduction of smooth cubics ----------------------------------------------


def find_rational_flex(H: PlaneForm):
    """A rational inflection point of a smooth cubic (None if there is none)."""
    ctx = H.ctx
    parts = [H.partial(i) for i in range(3)]
    for P in projective_points(ctx):
        if H.eval_raw(*P):
            continue
        L = [d.eval_raw(*P) for d in parts]
        D = _direction_on_line(ctx, L, P)
        # restrict H to P + t D; flex iff the t^2 coefficient vanishes too
        images = [{(1, 0, 0): P[i], (0, 1, 0): D[i]} for i in range(3)]
        images = [{m: c for m, c in im.items() if c} for im in images]
        line = _substitute(ctx, H.terms, images)
        if not line.get((1, 2, 0), 0):
            return P, D
    return None


def _direction_on_line(ctx, L, P):
    # a vector D != P (projectively) with L . D = 0
    for D in itertools.product(range(ctx.q), repeat=3):
        if not any(D):
            continue
        if ctx.add(ctx.add(ctx.mul(L[0], D[0]), ctx.mul(L[1], D[1])), ctx.mul(L[2], D[2])):
            continue
        # independent of P: some 2x2 minor nonzero
        if any(ctx.sub(ctx.mul(P[i], D[j]), ctx.mul(P[j], D[i])) for i in range(3) for j in range(i + 1, 3)):
            return D
    raise AssertionError("tangent line has no second point")


def weierstrass_reduction(H: PlaneForm):
    """(A, B) of a short Weierstrass model of a smooth cubic with a rational
    flex, or None when no rational flex exists.  Needs p > 3."""
    if H.deg != 3:
        raise InvariantViolation("Weierstrass reduction needs a cubic")
    ctx = H.ctx
    if ctx.p <= 3:
        raise InvariantViolation("short Weierstrass form needs characteristic > 3")
    flex = find_rational_flex(H)
    if flex is None:
        return None
    P, D = flex
    parts = [H.partial(i) for i in range(3)]
    L = [d.eval_raw(*P) for d in parts]
    j = next(i for i in range(3) if L[i])
    E = [1 if i == j else 0 for i in range(3)]
    # X -> D, Y -> P, Z -> E: the flex goes to (0:1:0), its tangent to Z = 0
    M = [[D[r], P[r], E[r]] for r in range(3)]
    G = H.transform(M)
    g = lambda a, b, c: G.get((a, b, c), 0)  # noqa: E731
    alpha, beta, gam = g(0, 2, 1), g(1, 1, 1), g(0, 1, 2)
    c3, d2, e1, z0 = g(3, 0, 0), g(2, 0, 1), g(1, 0, 2), g(0, 0, 3)
    # alpha y^2 + (beta x + gam) y = -(c3 x^3 + d2 x^2 + e1 x + z0)
    inv4a = ctx.inv(ctx.mul(4, alpha))
    k3 = ctx.neg(ctx.div(c3, alpha))
    k2 = ctx.sub(ctx.mul(ctx.mul(beta, beta), ctx.mul(inv4a, ctx.inv(alpha))), ctx.div(d2, alpha))
    k1 = ctx.sub(ctx.mul(ctx.mul(2, ctx.mul(beta, gam)), ctx.mul(inv4a, ctx.inv(alpha))), ctx.div(e1, alpha))
    k0 = ctx.sub(ctx.mul(ctx.mul(gam, gam), ctx.mul(inv4a, ctx.inv(alpha))), ctx.div(z0, alpha))
    # y^2 = k3 x^3 + k2 x^2 + k1 x + k0 -> y^2 = x^3 + b2 x^2 + b4 x + b6
    b2, b4, b6 = k2, ctx.mul(k1, k3), ctx.mul(k0, ctx.mul(k3, k3))
    s = ctx.neg(ctx.div(b2, 3))  # x = X + s removes the square term
    A = ctx.add(ctx.mul(3, ctx.mul(s, s)), ctx.add(ctx.mul(2, ctx.mul(b2, s)), b4))
    B = ctx.add(ctx.add(ctx.pow(s, 3), ctx.mul(b2, ctx.mul(s, s))), ctx.add(ctx.mul(b4, s), b6))
    return FieldElement(ctx, A), FieldElement(ctx, B)
