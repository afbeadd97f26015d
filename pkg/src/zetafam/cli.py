"""Command-line front end: specialize a family, gate it, count, and emit
JSON-lines records (schema ``zetafam/1``).

Exit status: 0 success, 1 gate failure, 2 internal inconsistency (a
cross-check disagreed), 3 I/O, parse or configuration error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import ecurve, hyperell, planecurve, zeta
from .errors import CapExceeded, InconsistencyError, InvariantViolation, NonIntegralCoefficient, ParseError, WeilBoundViolated, ZetafamError
from .family import (
    DEFAULT_SING_SEARCH_BOUND,
    FamilySpec,
    Specialization,
    discriminant_gate,
    load_family,
)
from .ff import FieldCtx, FieldElement, extension_of, make_field

SCHEMA_TAG = "zetafam/1"
EXIT_OK, EXIT_GATE, EXIT_INCONSISTENT, EXIT_IO = 0, 1, 2, 3
COMMANDS = ("gate", "count", "zeta", "schoof", "plane", "selfcheck", "sweep")


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: FamilySpec | None = None
    params: dict = field(default_factory=dict)
    p: int | None = None
    k: int = 1
    seed: int = 0
    cap_enum: int = 10**6
    cap_interval: int = 10**8
    sing_bound: int = DEFAULT_SING_SEARCH_BOUND
    trials: int = 20
    ranges: dict = field(default_factory=dict)
    action: str = "count"
    workers: int = 1
    g2_curves: int = 4


class _Inconsistent(Exception):
    pass


# -- helpers ---------------------------------------------------------------


def _enc(v: FieldElement):
    return v.v if v.ctx.k == 1 else list(v.coeffs)


def _base(cfg: RunConfig, ctx: FieldCtx, s: Specialization | None) -> dict:
    return {
        "schema": SCHEMA_TAG,
        "command": cfg.command,
        "family": cfg.family.to_dict() if cfg.family else None,
        "params": {a: _enc(v) for a, v in s.values} if s else {},
        "q": ctx.q,
        "gate": None,
        "N1": None,
        "zeta": None,
        "checks": {},
    }


def _emit_zeta(rec: dict, Z: zeta.ZetaNumerator) -> None:
    """Attach Z only after it has passed every Weil check."""
    report = zeta.check_weil(Z)
    rec["checks"].update({f"weil_{k}": v for k, v in report.checks.items()})
    if not report.passed:
        raise _Inconsistent("zeta numerator failed the Weil checks")
    rec["zeta"] = Z.to_json()


def _require(rec: dict, name: str, ok: bool) -> None:
    rec["checks"][name] = bool(ok)


# -- per-kind pipelines ------------------------------------------------------


def _elliptic(cfg: RunConfig, curve: ecurve.EllipticCurve, rec: dict, want_zeta: bool) -> None:
    q = curve.q
    enumerable = q <= cfg.cap_enum
    n_naive = ecurve.count_naive(curve, cfg.cap_enum) if enumerable else None
    if curve.ctx.p > 3:
        st = ecurve.schoof_trace(curve)
        rec["t"] = st.t
        rec["residues"] = [list(r) for r in st.residues]
        N1 = st.N
        if n_naive is not None:
            _require(rec, "schoof_vs_naive", n_naive == N1)
    else:
        if n_naive is None:
            raise CapExceeded(q, cfg.cap_enum)
        N1 = n_naive
    rec["N1"] = N1
    if want_zeta:
        _emit_zeta(rec, zeta.zeta_from_counts([N1], q, 1))


def _hyperelliptic(cfg: RunConfig, C: hyperell.HyperCurve, rec: dict, want_zeta: bool) -> None:
    q = C.q
    rec["N1"] = hyperell.count_curve_points(C, 1, cfg.cap_enum)
    if not want_zeta:
        return
    if C.genus == 1:
        _emit_zeta(rec, zeta.zeta_from_counts([rec["N1"]], q, 1))
        return
    if C.genus != 2:
        raise InvariantViolation(f"zeta is implemented up to genus 2, got {C.genus}")
    Zg = hyperell.zeta_from_counts(C, cfg.cap_enum)
    Z = Zg.numerator
    _emit_zeta(rec, Z)
    predicted = zeta.counts_from_zeta(Z, 4)
    for k in (3, 4):
        if q**k <= cfg.cap_enum:
            _require(rec, f"N{k}_match", predicted[k - 1] == hyperell.count_curve_points(C, k, cfg.cap_enum))
    n = Zg.jacobian_order
    lo, hi = hyperell.weil_interval(q, 2)
    _require(rec, "order_in_weil_interval", lo <= n <= hi)
    _require(rec, "jacobian_order_kills", hyperell.jacobian_order_check(C, n, cfg.trials, cfg.seed))
    rng = random.Random(cfg.seed)
    for _ in range(16):  # small curves often give the trivial class
        D = hyperell.random_divisor(C, rng)
        if not D.is_identity():
            break
    order = hyperell.bsgs_order_in_interval(C, D, cfg.cap_interval)
    rec["divisor_order"] = order
    _require(rec, "bsgs_order_divides", n % order == 0)


def _plane(cfg: RunConfig, H: planecurve.PlaneForm, rec: dict, want_zeta: bool) -> None:
    sc = planecurve.corrected_smooth_count(H, cfg.sing_bound, cfg.cap_enum)
    rec["N1"] = sc.n_smooth
    rec["n_plane"] = sc.n_plane
    rec["singular_points"] = [s.to_json() for s in sc.singular]
    rec["genus"] = sc.genus
    rec["genus_note"] = sc.genus_note
    _require(rec, "chart_recount", planecurve.count_plane_points(H, cfg.cap_enum, "X") == sc.n_plane)
    if H.deg == 3 and not sc.singular and H.ctx.p > 3:
        AB = planecurve.weierstrass_reduction(H)
        if AB is not None:
            E = ecurve.EllipticCurve(H.ctx, *AB)
            rec["weierstrass"] = [_enc(AB[0]), _enc(AB[1])]
            _require(rec, "weierstrass_match", ecurve.count_naive(E, cfg.cap_enum) == sc.n_plane)
    if not want_zeta:
        return
    g = sc.genus
    if g == 0:
        Z = zeta.ZetaNumerator((1,), H.ctx.q, 0)
        _require(rec, "rational_count", sc.n_smooth == H.ctx.q + 1)
    elif g <= 2:
        counts = [sc.n_smooth]
        if g == 2:
            big, emb = extension_of(H.ctx, 2)
            sc2 = planecurve.corrected_smooth_count(H.over(big, emb), 1, cfg.cap_enum)
            counts.append(sc2.n_smooth)
        Z = zeta.zeta_from_counts(counts, H.ctx.q, g)
    else:
        rec["checks"]["zeta_supported"] = False
        rec["zeta_note"] = f"zeta assembly needs genus <= 2, smooth model has genus {g}"
        return
    _emit_zeta(rec, Z)


def process(cfg: RunConfig, values: dict, action: str | None = None) -> tuple:
    """One specialization end to end; returns (exit status, record)."""
    action = action or cfg.command
    t0 = time.perf_counter()
    ctx = make_field(cfg.p, cfg.k)
    s = Specialization.of(cfg.family, ctx, values)
    rec = _base(cfg, ctx, s)
    report = discriminant_gate(s, cfg.sing_bound, cfg.cap_enum)
    rec["gate"] = report.to_json()
    status = EXIT_OK
    # singular plane members are not dead ends: they take the correction path
    corrected = action != "gate" and report.failure_reason == "singular_point"
    if not report.passed and not corrected:
        rec["timing_ms"] = _ms(t0)
        return EXIT_GATE, rec
    if action != "gate":
        want_zeta = action == "zeta"
        try:
            curve = s.curve()
            if cfg.family.kind == "elliptic_weierstrass":
                _elliptic(cfg, curve, rec, want_zeta or action == "schoof")
            elif cfg.family.kind == "hyperelliptic":
                _hyperelliptic(cfg, curve, rec, want_zeta)
            else:
                _plane(cfg, curve, rec, want_zeta)
        except (_Inconsistent, InconsistencyError, NonIntegralCoefficient, WeilBoundViolated) as exc:
            rec["error"] = str(exc)
            status = EXIT_INCONSISTENT
        if not all(rec["checks"].values()):
            status = EXIT_INCONSISTENT
    rec["timing_ms"] = _ms(t0)
    return status, rec


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


# -- sweep -----------------------------------------------------------------


def _sweep_one(args):
    cfg, values = args
    return process(cfg, values, cfg.action)


def sweep(cfg: RunConfig):
    """Yields records for every tuple in the ranges (gate-first), then a summary."""
    names = list(cfg.ranges)
    fixed = {a: v for a, v in cfg.params.items() if a not in cfg.ranges}
    tuples = [dict(fixed, **dict(zip(names, combo))) for combo in itertools.product(*(cfg.ranges[a] for a in names))]
    if not names:
        tuples = []
    tally = {"tuples": len(tuples), "gate_passed": 0, "gate_failed": 0, "inconsistent": 0}
    jobs = [(cfg, v) for v in tuples]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = pool.map(_sweep_one, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers)))
            yield from _tally(results, tally)
    else:
        yield from _tally(map(_sweep_one, jobs), tally)
    status = EXIT_INCONSISTENT if tally["inconsistent"] else EXIT_OK
    yield status, {"schema": SCHEMA_TAG, "command": "sweep", "summary": tally}


def _tally(results, tally):
    for status, rec in results:
        if status == EXIT_GATE:
            tally["gate_failed"] += 1
            rec["skipped"] = True
        else:
            tally["gate_passed"] += 1
            if status == EXIT_INCONSISTENT:
                tally["inconsistent"] += 1
        yield status, rec


# -- selfcheck -------------------------------------------------------------

SELFCHECK_PRIMES = (5, 7, 11, 13)
SELFCHECK_G2_FIELDS = (3, 5, 7)


def selfcheck(cfg: RunConfig):
    """Oracle-equivalence suite: Schoof against enumeration, and genus-2
    zeta consistency on seeded random curves."""
    for p in SELFCHECK_PRIMES:
        t0 = time.perf_counter()
        F = make_field(p)
        bad, n = [], 0
        for A in range(p):
            for B in range(p):
                if (4 * A**3 + 27 * B**2) % p == 0:
                    continue
                n += 1
                E = ecurve.EllipticCurve.from_ints(F, A, B)
                if ecurve.schoof_trace(E).N != ecurve.count_naive(E):
                    bad.append([A, B])
        rec = {
            "schema": SCHEMA_TAG,
            "command": "selfcheck",
            "check": "schoof_vs_naive",
            "q": p,
            "curves": n,
            "mismatches": bad,
            "passed": not bad,
            "timing_ms": _ms(t0),
        }
        yield (EXIT_OK if not bad else EXIT_INCONSISTENT), rec
    rng = random.Random(cfg.seed)
    for q in SELFCHECK_G2_FIELDS:
        F = make_field(q)
        for i in range(cfg.g2_curves):
            d = 5 + i % 2
            fam = FamilySpec("hyperelliptic", tuple(f"a{j}" for j in range(d + 1)), d, 2)
            while True:
                coeffs = [rng.randrange(1, q)] + [rng.randrange(q) for _ in range(d)]
                sub = RunConfig(
                    "zeta",
                    family=fam,
                    p=q,
                    seed=rng.randrange(2**32),
                    cap_enum=cfg.cap_enum,
                    cap_interval=cfg.cap_interval,
                    trials=cfg.trials,
                )
                status, rec = process(sub, dict(zip(fam.params, coeffs)))
                if status != EXIT_GATE:
                    break
            rec["command"] = "selfcheck"
            rec["check"] = "genus2_zeta"
            rec["passed"] = status == EXIT_OK
            yield status, rec


# -- argument handling -----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _value(text: str):
    try:
        v = json.loads(text)
    except json.JSONDecodeError:
        raise ParseError(f"bad parameter value {text!r}", field="--set") from None
    if isinstance(v, bool) or not (isinstance(v, int) or (isinstance(v, list) and all(isinstance(d, int) for d in v))):
        raise ParseError(f"parameter value {text!r} must be an integer or a digit list", field="--set")
    return v


def _assignments(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep or not name:
            raise ParseError(f"expected name=value, got {item!r}", field="--set")
        out[name.strip()] = _value(val.strip())
    return out


def _range(text: str) -> tuple:
    name, sep, spec = text.partition("=")
    if not sep or not name:
        raise ParseError(f"expected name=lo..hi or name=v1,v2, got {text!r}", field="--range")
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            vals = list(range(int(lo), int(hi) + 1))
        elif spec.strip():
            vals = [int(v) for v in spec.split(",")]
        else:
            vals = []
    except ValueError:
        raise ParseError(f"bad range {spec!r}", field="--range") from None
    return name.strip(), vals


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="zetafam", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--family", help="family-spec JSON file")
    ap.add_argument("--set", action="append", metavar="NAME=VALUE", help="parameter value (int or JSON digit list)")
    ap.add_argument("--p", type=int)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--A", type=int, help="shorthand elliptic family y^2 = x^3 + Ax + B")
    ap.add_argument("--B", type=int)
    ap.add_argument("--coeffs", help="shorthand hyperelliptic family, comma-separated a0..ad")
    ap.add_argument("--form", help="shorthand plane family, e.g. 'Y^2*Z - X^3 - Z^3'")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap-enum", type=int, default=10**6)
    ap.add_argument("--cap-interval", type=int, default=10**8)
    ap.add_argument("--sing-bound", type=int, default=DEFAULT_SING_SEARCH_BOUND, choices=(1, 2))
    ap.add_argument("--trials", type=int, default=20, help="random divisors for the Jacobian order check")
    ap.add_argument("--range", action="append", metavar="NAME=LO..HI", help="sweep range (inclusive) or list")
    ap.add_argument("--do", dest="action", default="count", choices=("gate", "count", "zeta"), help="sweep action")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--g2-curves", type=int, default=4, help="genus-2 curves per field in selfcheck")
    ap.add_argument("--output", default="-")
    ap.add_argument("--pretty", action="store_true")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = _assignments(ns.set)
    fam = None
    shorthand = [ns.A is not None or ns.B is not None, ns.coeffs is not None, ns.form is not None, ns.family is not None]
    if sum(shorthand) > 1:
        raise ParseError("give only one of --family, --A/--B, --coeffs, --form")
    if ns.family:
        fam = load_family(ns.family)
    elif shorthand[0]:
        fam = FamilySpec("elliptic_weierstrass", ("A", "B"), 3, 1)
        params = {"A": ns.A or 0, "B": ns.B or 0, **params}
    elif ns.coeffs:
        try:
            coeffs = [int(c) for c in ns.coeffs.split(",")]
        except ValueError:
            raise ParseError(f"bad coefficient list {ns.coeffs!r}", field="--coeffs") from None
        d = len(coeffs) - 1
        fam = FamilySpec("hyperelliptic", tuple(f"a{i}" for i in range(d + 1)), d, (d - 1) // 2)
        params = {**dict(zip(fam.params, coeffs)), **params}
    elif ns.form:
        poly = planecurve.parse_form(ns.form, sorted(params))
        d = poly.total_degree()
        fam = FamilySpec("plane_projective", tuple(sorted(params)), d, (d - 1) * (d - 2) // 2, form=ns.form)
    ranges = dict(_range(r) for r in ns.range or ())
    if ns.command not in ("selfcheck",) and fam is None:
        raise ParseError("no family given (use --family, --A/--B, --coeffs or --form)")
    if ns.command != "selfcheck":
        if ns.p is None:
            raise ParseError("--p is required", field="--p")
        make_field(ns.p, ns.k)
        need = set(fam.params) - set(params) - set(ranges)
        if need:
            raise ParseError(f"no value for parameters {sorted(need)}", field="--set")
    if ns.command == "schoof" and fam.kind != "elliptic_weierstrass":
        raise ParseError("schoof needs an elliptic family")
    if ns.command == "plane" and fam.kind != "plane_projective":
        raise ParseError("plane needs a plane family")
    return RunConfig(
        command=ns.command,
        family=fam,
        params=params,
        p=ns.p,
        k=ns.k,
        seed=ns.seed,
        cap_enum=ns.cap_enum,
        cap_interval=ns.cap_interval,
        sing_bound=ns.sing_bound,
        trials=ns.trials,
        ranges=ranges,
        action=ns.action,
        workers=max(1, ns.workers),
        g2_curves=ns.g2_curves,
    )


def run(cfg: RunConfig):
    """Yields (status, record) pairs for the configured command."""
    if cfg.command == "selfcheck":
        yield from selfcheck(cfg)
    elif cfg.command == "sweep":
        yield from sweep(cfg)
    else:
        yield process(cfg, cfg.params)


def _dump(rec: dict, pretty: bool) -> str:
    if pretty:
        return json.dumps(rec, sort_keys=True, indent=2)
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    out = None
    try:
        cfg = config_from_args(ns)
        out = sys.stdout if ns.output == "-" else open(ns.output, "w", encoding="utf-8")
        worst = EXIT_OK
        for status, rec in run(cfg):
            out.write(_dump(rec, ns.pretty) + "\n")
            out.flush()
            if status == EXIT_INCONSISTENT or worst == EXIT_INCONSISTENT:
                worst = EXIT_INCONSISTENT
            elif status == EXIT_GATE and cfg.command != "sweep":
                worst = EXIT_GATE
        return worst
    except (OSError, ZetafamError) as exc:
        print(f"zetafam: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        if out is not None and out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
