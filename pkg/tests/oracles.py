"""Independent reference computations used by the tests.

Nothing here goes through the package's fast paths: counts are plain double
loops, polynomial facts come from sympy over GF(p), and extension-field
products are reduced with sympy as well.
"""

from itertools import product

import sympy
from sympy import GF, Poly, symbols

x = symbols("x")


def sym_poly(coeffs_low_first, p):
    return Poly(list(reversed(coeffs_low_first)), x, domain=GF(p))


def ext_mul(a_digits, b_digits, modulus_low_first, p):
    """Product of two F_{p^k} elements given as digit lists, via sympy."""
    m = sym_poly(modulus_low_first, p)
    r = (sym_poly(a_digits, p) * sym_poly(b_digits, p)).rem(m)
    k = len(modulus_low_first) - 1
    out = [int(c) % p for c in reversed(r.all_coeffs())] if not r.is_zero else []
    return (out + [0] * k)[:k]


def ec_count(p, A, B):
    """#E(F_p) for y^2 = x^3 + Ax + B by looping over every (x, y)."""
    n = 1
    for X in range(p):
        rhs = (X**3 + A * X + B) % p
        n += sum(1 for Y in range(p) if (Y * Y - rhs) % p == 0)
    return n


def squares_mod(p):
    return {(y * y) % p for y in range(p)}


def squarefree_mod(coeffs_low_first, p):
    f = sym_poly(coeffs_low_first, p)
    if f.degree() < 1:
        return True
    return sympy.gcd(f, f.diff(x)).degree() == 0


def count_squarefree(p, d):
    """Number of f of degree exactly d over F_p with gcd(f, f') = 1."""
    return sum(
        1
        for lead in range(1, p)
        for low in product(range(p), repeat=d)
        if squarefree_mod(list(low) + [lead], p)
    )


def ec_sum_affine(p, A, P, Q):
    """Textbook affine chord-tangent law; None is the point at infinity."""
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def sylvester_resultant(f_low_first, g_low_first, p):
    """Res(f, g) mod p as the Sylvester determinant (degrees as given)."""
    f = list(reversed(f_low_first))
    g = list(reversed(g_low_first))
    n, m = len(f) - 1, len(g) - 1
    size = n + m
    rows = [[0] * i + f + [0] * (size - n - 1 - i) for i in range(m)]
    rows += [[0] * i + g + [0] * (size - m - 1 - i) for i in range(n)]
    return int(sympy.Matrix(rows).det()) % p


def universal_discriminant(coeffs_low_first, p):
    """Generic discriminant over Z evaluated at integer lifts, reduced mod p."""
    f = sum(c * x**i for i, c in enumerate(coeffs_low_first))
    return int(sympy.discriminant(f, x)) % p


def hyper_count_two_charts(ctx, f_low_first):
    """Points of the smooth genus-2 model of y^2 = f(x) over ``ctx``.

    Affine chart by a double loop over (x, y); the chart at infinity is
    v^2 = u^6 f(1/u), of which only the u = 0 fibre is new.
    """
    elems = list(ctx.elements())
    n = 0
    for X in elems:
        fx = ctx.zero
        for c in reversed(f_low_first):
            fx = fx * X + c
        n += sum(1 for y in elems if y * y == fx)
    top = f_low_first[6] if len(f_low_first) > 6 else 0
    n += sum(1 for v in elems if v * v == ctx.element(top))
    return n


PX, PY, PZ = symbols("X Y Z")


def plane_expr(text):
    return sympy.expand(sympy.sympify(text.replace("^", "**"), locals={"X": PX, "Y": PY, "Z": PZ}))


def transformed(text, M):
    """H(M (X, Y, Z)^T) as a string, for an integer 3x3 matrix M."""
    images = [sum(M[r][c] * v for c, v in enumerate((PX, PY, PZ))) for r in range(3)]
    return str(sympy.expand(plane_expr(text).subs(dict(zip((PX, PY, PZ), images)), simultaneous=True)))


def _evaluator(expr, p):
    terms = Poly(expr, PX, PY, PZ).as_dict()
    return lambda a, b, c: sum(int(k) * a**i * b**j * c**m for (i, j, m), k in terms.items()) % p


def plane_count_naive(text, p):
    """#{H = 0} in P^2(F_p): affine cone zeros minus the origin, over p - 1."""
    h = _evaluator(plane_expr(text), p)
    zeros = sum(1 for t in product(range(p), repeat=3) if any(t) and h(*t) == 0)
    assert zeros % (p - 1) == 0
    return zeros // (p - 1)


def plane_singular_naive(text, p):
    """Normalized F_p-points where H and its three partials vanish."""
    expr = plane_expr(text)
    fs = [_evaluator(e, p) for e in (expr, expr.diff(PX), expr.diff(PY), expr.diff(PZ))]
    out = set()
    for t in product(range(p), repeat=3):
        if any(t) and all(f(*t) == 0 for f in fs):
            lead = next(c for c in reversed(t) if c)
            inv = pow(lead, -1, p)
            out.add(tuple(c * inv % p for c in t))
    return out
