"""Parametric curve families, their specialization into a finite field, and
the discriminant gate deciding whether a specialization is nondegenerate.

A family-spec document is JSON::

    {"kind": "hyperelliptic", "degree": 5, "genus": 2,
     "params": ["a0", "a1", "a2", "a3", "a4", "a5"]}

Elliptic families bind their two params to (A, B) of y^2 = x^3 + Ax + B;
hyperelliptic families bind a_0..a_d (leading first) of y^2 = f(x); plane
families carry a ``form`` string in X, Y, Z whose coefficients are integer
polynomials in the params.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property

import jsonschema

from .ecurve import EllipticCurve
from .errors import CapExceeded, GateFailed, InvariantViolation, ParseError
from .ff import FieldCtx, FieldElement
from .hyperell import HyperCurve
from .planecurve import DEFAULT_CAP, PlaneForm, find_singular_points, parse_form, specialize_form, specialize_terms
from .upoly import UPoly, discriminant

KINDS = ("elliptic_weierstrass", "hyperelliptic", "plane_projective")
DEFAULT_SING_SEARCH_BOUND = 2

SCHEMA = {
    "type": "object",
    "required": ["kind", "degree", "genus", "params"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": list(KINDS)},
        "degree": {"type": "integer"},
        "genus": {"type": "integer", "minimum": 0},
        "params": {
            "type": "array",
            "items": {"type": "string", "pattern": r"^[A-Za-z_][A-Za-z0-9_]*$"},
            "uniqueItems": True,
        },
        "form": {"type": "string"},
        "name": {"type": "string"},
    },
}

_RESERVED = {"X", "Y", "Z"}


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple
    degree: int
    genus: int
    form: str | None = None
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        _check_invariants(self)

    @cached_property
    def form_poly(self):
        """The plane form as a sympy Poly (plane kind only)."""
        if self.form is None:
            return None
        return parse_form(self.form, self.params)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "degree": self.degree, "genus": self.genus, "params": list(self.params)}
        if self.form is not None:
            out["form"] = self.form
        if self.name is not None:
            out["name"] = self.name
        return out


def _check_invariants(fam: FamilySpec) -> None:
    kind, d, g, m = fam.kind, fam.degree, fam.genus, len(fam.params)
    if kind not in KINDS:
        raise InvariantViolation(f"unknown family kind {kind!r}")
    if len(set(fam.params)) != m:
        raise InvariantViolation("parameter names must be distinct")
    if _RESERVED & set(fam.params):
        raise InvariantViolation("X, Y, Z are reserved for plane coordinates")
    if kind != "plane_projective" and fam.form is not None:
        raise InvariantViolation(f"{kind} families take no form")
    if kind == "elliptic_weierstrass":
        if m != 2:
            raise InvariantViolation(f"elliptic families have 2 parameter slots, got {m}")
        if g != 1 or d != 3:
            raise InvariantViolation("elliptic families have genus 1 and degree 3")
    elif kind == "hyperelliptic":
        if d < 3:
            raise InvariantViolation(f"hyperelliptic degree must be at least 3, got {d}")
        if m != d + 1:
            raise InvariantViolation(f"degree {d} needs {d + 1} coefficient slots, got {m}")
        if not (d - 2 <= 2 * g < d):
            raise InvariantViolation(f"genus {g} violates d-2 <= 2g < d for d = {d}")
    else:
        if fam.form is None:
            raise InvariantViolation("plane families need a form")
        if d < 1:
            raise InvariantViolation(f"plane degree must be positive, got {d}")
        poly = parse_form(fam.form, fam.params)
        if poly.total_degree() != d:
            raise InvariantViolation(f"form has degree {poly.total_degree()}, declared {d}")
        used = set()
        for coeff in poly.coeffs():
            used |= {s.name for s in coeff.free_symbols}
        unused = [a for a in fam.params if a not in used]
        if unused:
            raise InvariantViolation(f"parameters {unused} do not occur in the form")
        if not (0 <= g <= (d - 1) * (d - 2) // 2):
            raise InvariantViolation(f"genus {g} impossible for a plane curve of degree {d}")


def _line_of(text: str, key) -> int | None:
    if key is None:
        return None
    m = re.search(r'"' + re.escape(str(key)) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def parse_family(text: str) -> FamilySpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        key = exc.path[0] if exc.path else None
        if key is None and exc.validator == "additionalProperties":
            key = next((k for k in obj if k not in SCHEMA["properties"]), None)
        if key is None and exc.validator == "required":
            key = re.search(r"'(\w+)'", exc.message).group(1)
        raise ParseError(exc.message, field=key, line=_line_of(text, key)) from None
    try:
        return FamilySpec(
            kind=obj["kind"],
            params=tuple(obj["params"]),
            degree=obj["degree"],
            genus=obj["genus"],
            form=obj.get("form"),
            name=obj.get("name"),
        )
    except ParseError as exc:
        raise ParseError(exc.message, field="form", line=_line_of(text, "form")) from None


def serialize_family(fam: FamilySpec) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(fam.to_dict(), sort_keys=True, indent=2) + "\n"


def load_family(path) -> FamilySpec:
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read())


# -- specialization ----------------------------------------------------------


@dataclass(frozen=True)
class Specialization:
    family: FamilySpec
    ctx: FieldCtx
    values: tuple  # (name, FieldElement) in slot order

    @classmethod
    def of(cls, family: FamilySpec, ctx: FieldCtx, values) -> "Specialization":
        values = dict(values)
        missing = [a for a in family.params if a not in values]
        if missing:
            raise InvariantViolation(f"no value for parameters {missing}")
        extra = sorted(set(values) - set(family.params))
        if extra:
            raise InvariantViolation(f"unknown parameters {extra}")
        return cls(family, ctx, tuple((a, ctx.element(values[a])) for a in family.params))

    def value(self, name: str) -> FieldElement:
        return dict(self.values)[name]

    def raw(self) -> list:
        return [v.v for _, v in self.values]

    def plane_form_terms(self) -> dict:
        return specialize_terms(self.ctx, self.family.form_poly, dict(self.values))

    def curve(self):
        """The concrete curve object, without running the gate."""
        kind, ctx = self.family.kind, self.ctx
        if kind == "elliptic_weierstrass":
            A, B = (v for _, v in self.values)
            return EllipticCurve(ctx, A, B)
        if kind == "hyperelliptic":
            return HyperCurve(ctx, _hyper_poly(self))
        return specialize_form(ctx, self.family.form_poly, dict(self.values))


def _hyper_poly(s: Specialization) -> UPoly:
    return UPoly(s.ctx, list(reversed(s.raw())))


@dataclass(frozen=True)
class GateReport:
    passed: bool
    discriminant_values: tuple  # (name, FieldElement | int)
    failure_reason: str | None = None
    notes: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        vals = []
        for name, v in self.discriminant_values:
            if isinstance(v, FieldElement):
                v = v.v if v.ctx.k == 1 else list(v.coeffs)
            vals.append([name, v])
        out = {"passed": self.passed, "values": vals, "failure_reason": self.failure_reason}
        if self.notes:
            out["notes"] = self.notes
        return out


def discriminant_gate(
    s: Specialization, sing_search_bound: int = DEFAULT_SING_SEARCH_BOUND, cap: int = DEFAULT_CAP
) -> GateReport:
    kind, ctx = s.family.kind, s.ctx
    if kind == "elliptic_weierstrass":
        A, B = (v for _, v in s.values)
        disc = (A**3 * 4 + B**2 * 27) * -16
        vals = (("disc", disc),)
        if ctx.p == 3:
            return GateReport(False, vals, "characteristic_3")
        return GateReport(bool(disc), vals, None if disc else "discriminant_zero")
    if kind == "hyperelliptic":
        a0 = s.values[0][1]
        f = _hyper_poly(s)
        disc = discriminant(f) if f.degree >= 2 else ctx.zero
        vals = (("a0", a0), ("disc", disc))
        if not a0:
            return GateReport(False, vals, "leading_coefficient_zero")
        return GateReport(bool(disc), vals, None if disc else "discriminant_zero")
    return _plane_gate(s, sing_search_bound, cap)


def _plane_gate(s: Specialization, bound: int, cap: int) -> GateReport:
    if bound not in (1, 2):
        raise ValueError("singular-point search bound must be 1 or 2")
    notes = {"search_bound": bound}
    terms = s.plane_form_terms()
    if not terms:
        return GateReport(False, (("form_nonzero", 0),), "form_vanishes", notes)
    H = PlaneForm(s.ctx, terms, s.family.degree)
    try:
        sing = find_singular_points(H, bound, cap)
    except CapExceeded as exc:
        notes["cap"] = str(exc)
        return GateReport(False, (("form_nonzero", 1),), "search_cap_exceeded", notes)
    vals = (("form_nonzero", 1), ("singular_points", len(sing)))
    if sing:
        notes["singular"] = [p.to_json() for p in sing]
        return GateReport(False, vals, "singular_point", notes)
    notes["status"] = "nonsingular up to bound"
    return GateReport(True, vals, None, notes)


def divisor_gate(s: Specialization, hyperplane=None) -> bool:
    """True iff the hyperplane (l0, l1, l2) is nonzero and does not contain
    the curve.  ``None`` selects the built-in divisor at infinity, Z = 0."""
    if hyperplane is None:
        if s.family.kind == "hyperelliptic":
            return True
        hyperplane = (0, 0, 1)
    ctx = s.ctx
    L = [ctx.element(c).v for c in hyperplane]
    terms = _plane_model(s)
    if not any(L) or not terms:
        return False
    return not PlaneForm(ctx, terms, _plane_degree(s)).divisible_by_linear(L)


def _plane_degree(s: Specialization) -> int:
    return 3 if s.family.kind == "elliptic_weierstrass" else s.family.degree


def _plane_model(s: Specialization) -> dict:
    """Terms of the projective closure in P^2."""
    ctx, kind = s.ctx, s.family.kind
    if kind == "plane_projective":
        return s.plane_form_terms()
    d = _plane_degree(s)
    # Y^2 Z^(d-2) - sum a_i X^(d-i) Z^i
    if kind == "elliptic_weierstrass":
        A, B = s.raw()
        coeffs = [1, 0, A, B]
    else:
        coeffs = s.raw()
    terms = {(0, 2, d - 2): 1}
    for i, a in enumerate(coeffs):
        if a:
            m = (d - i, 0, i)
            terms[m] = ctx.sub(terms.get(m, 0), a)
    return {m: c for m, c in terms.items() if c}


def specialize(fam: FamilySpec, ctx: FieldCtx, values, **gate_opts):
    """Gate, then build the curve object; GateFailed carries the report."""
    s = Specialization.of(fam, ctx, values)
    report = discriminant_gate(s, **gate_opts)
    if not report.passed:
        raise GateFailed(report)
    return s.curve()
