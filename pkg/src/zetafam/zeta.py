"""Zeta numerators P(T) = 1 + c_1 T + ... + c_2g T^2g of curves over F_q.

All arithmetic is exact; square-root comparisons are done by squaring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from .errors import NonIntegralCoefficient, WeilBoundViolated


@dataclass(frozen=True)
class ZetaNumerator:
    coeffs: tuple
    q: int
    g: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != 2 * self.g + 1:
            raise ValueError(f"genus {self.g} needs {2 * self.g + 1} coefficients")

    def __call__(self, T: int) -> int:
        return sum(c * T**i for i, c in enumerate(self.coeffs))

    def charpoly(self) -> tuple:
        """Coefficients (constant first) of T^2g P(1/T), the Frobenius
        characteristic polynomial."""
        return tuple(reversed(self.coeffs))

    def to_json(self) -> dict:
        return {"q": self.q, "genus": self.g, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj) -> "ZetaNumerator":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(obj["coeffs"]), int(obj["q"]), int(obj["genus"]))


def _coefficient_bound_ok(c: int, i: int, g: int, q: int) -> bool:
    # |c_i| <= C(2g, i) q^(i/2)
    return c * c <= comb(2 * g, i) ** 2 * q**i


def zeta_from_counts(counts, q: int, g: int) -> ZetaNumerator:
    """Numerator from N_1..N_g via Newton's identities and the functional equation."""
    counts = [int(n) for n in counts]
    if len(counts) != g:
        raise ValueError(f"need exactly {g} counts, got {len(counts)}")
    S = [0] + [q**k + 1 - n for k, n in enumerate(counts, start=1)]
    c = [1] + [0] * (2 * g)
    for k in range(1, g + 1):
        total = S[k] + sum(c[i] * S[k - i] for i in range(1, k))
        if total % k:
            raise NonIntegralCoefficient(f"c_{k} = {-total}/{k} is not an integer")
        c[k] = -total // k
    for i in range(g):
        c[2 * g - i] = q ** (g - i) * c[i]
    for i in range(1, g + 1):
        if not _coefficient_bound_ok(c[i], i, g, q):
            raise WeilBoundViolated(f"|c_{i}| = {abs(c[i])} exceeds the Weil bound")
    return ZetaNumerator(tuple(c), q, g)


def counts_from_zeta(Z: ZetaNumerator, k_max: int) -> list:
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    two_g = 2 * Z.g
    c = list(Z.coeffs)
    S = [0]
    for k in range(1, k_max + 1):
        ck = c[k] if k <= two_g else 0
        s = -k * ck - sum(c[i] * S[k - i] for i in range(1, min(k, two_g + 1)))
        S.append(s)
    return [Z.q**k + 1 - S[k] for k in range(1, k_max + 1)]


@dataclass(frozen=True)
class WeilReport:
    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return dict(self.checks)


def check_weil(Z: ZetaNumerator) -> WeilReport:
    c, q, g = Z.coeffs, Z.q, Z.g
    checks = {
        "constant_term": c[0] == 1,
        "leading_term": c[2 * g] == q**g,
        "functional_equation": all(c[2 * g - i] == q ** (g - i) * c[i] for i in range(g + 1)),
        "coefficient_bounds": all(_coefficient_bound_ok(c[i], i, g, q) for i in range(2 * g + 1)),
    }
    if g > 0:
        checks["counts_nonnegative"] = all(n >= 0 for n in counts_from_zeta(Z, 2 * g))
    else:
        checks["counts_nonnegative"] = True
    return WeilReport(checks)
