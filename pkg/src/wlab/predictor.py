"""Decision procedures for the positivity and vanishing statements.

All bounds are compared in exact rational arithmetic.  Verdicts are sufficient
conditions only: "no-claim" never means non-vanishing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curvature import Spectrum, m_positivity_level

POSITIVE = "positive"
SEMIPOSITIVE = "semipositive"
NO_CLAIM = "no-claim"
VANISHES = "vanishes"
EQUALS_C = "equals-C"


@dataclass(frozen=True)
class PositivityClass:
    kind: str
    rule: str | None = None
    equality_condition: str | None = None


@dataclass(frozen=True)
class VanishingVerdict:
    verdict: str
    rule: str | None = None
    used_serre_duality: bool = False
    positivity_cell: tuple | None = None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "rule": self.rule,
                "used_serre_duality": self.used_serre_duality,
                "positivity_cell": list(self.positivity_cell) if self.positivity_cell else None}


def _m(m) -> Fraction:
    m = Fraction(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    return m


def _range(n: int, p: int, q: int) -> None:
    if n < 1 or not (0 <= p <= n and 0 <= q <= n):
        raise ValueError(f"(p,q)=({p},{q}) outside 0..{n}")


def bound_general(n: int, p: int, q: int) -> Fraction:
    """(n - p + 1)(p + q) / (2(p + 1))."""
    return Fraction((n - p + 1) * (p + q), 2 * (p + 1))


def b_positivity_class(n: int, p: int, q: int, m) -> PositivityClass:
    _range(n, p, q)
    if q < 1:
        raise ValueError("q must be >= 1")
    m = _m(m)
    half = Fraction(n, 2)
    if q >= p + 2 and m <= bound_general(n, p, q):
        return PositivityClass(POSITIVE, "positive-1")
    if q == p + 1 and p <= half and m <= Fraction(n + 1, 2):
        return PositivityClass(POSITIVE, "positive-2")
    if q == p + 1 and half < p < n and m <= Fraction((n - p + 1) * (2 * p + 1), 2 * (p + 1)):
        return PositivityClass(POSITIVE, "positive-3")
    eq = f"phi = L^{q} psi"
    if 0 < q <= p <= half and m <= Fraction(n - p + q, 2):
        return PositivityClass(SEMIPOSITIVE, "semipositive-1", eq)
    if 0 < q <= p and half < p < n and m <= bound_general(n, p, q):
        return PositivityClass(SEMIPOSITIVE, "semipositive-2", eq)
    return PositivityClass(NO_CLAIM)


def vanishing_hodge(n: int, p: int, q: int, m) -> VanishingVerdict:
    """Scalar Dolbeault cohomology from m-positivity of the symmetrized operator."""
    _range(n, p, q)
    if m is None:
        return VanishingVerdict(NO_CLAIM)
    m = _m(m)
    if p == q:
        if m <= Fraction(n, 2):
            cell = (p, p) if 2 * p <= n else (n - p, n - p)
            return VanishingVerdict(EQUALS_C, "diagonal", 2 * p > n, cell)
        return VanishingVerdict(NO_CLAIM)
    serre = q < p
    if serre:
        p, q = n - p, n - q
    # H^{p,q} = H^{n-q,n-p} keeps q - p fixed, so both cells are valid routes
    for a, b in ((p, q), (n - q, n - p)):
        dual = serre or (a, b) != (p, q)
        if q >= p + 2 and m <= bound_general(n, a, b):
            return VanishingVerdict(VANISHES, "hodge-1", dual, (a, b))
        if q == p + 1 and m <= Fraction(n + 1, 2) and 2 * a <= n:
            return VanishingVerdict(VANISHES, "hodge-2", dual, (a, b))
    return VanishingVerdict(NO_CLAIM)


def vanishing_bundle(n: int, p: int, q: int, m, nakano_positive: bool) -> VanishingVerdict:
    """H^{p,q}(M, E) for Nakano positive E; membership of case (2) is decided by (p,q) alone."""
    _range(n, p, q)
    if q < 1:
        raise ValueError("q must be >= 1")
    if not nakano_positive:
        return VanishingVerdict(NO_CLAIM)
    if p == n:
        return VanishingVerdict(VANISHES, "bundle-1")
    if m is None:
        return VanishingVerdict(NO_CLAIM)
    m = _m(m)
    if q <= p + 1 and 2 * p <= n:
        if m <= Fraction(n - p + q, 2):
            return VanishingVerdict(VANISHES, "bundle-2", False, (p, q))
        return VanishingVerdict(NO_CLAIM)
    if m <= bound_general(n, p, q):
        return VanishingVerdict(VANISHES, "bundle-3", False, (p, q))
    return VanishingVerdict(NO_CLAIM)


def reduced_vanishing(n: int, p: int, q: int, m) -> VanishingVerdict:
    """Scalar cohomology from m-positivity of the reduced curvature operator."""
    _range(n, p, q)
    if m is None:
        return VanishingVerdict(NO_CLAIM)
    m = _m(m)
    if p != q:
        if m <= n + 1 - Fraction(p * p + q * q, p + q):
            return VanishingVerdict(VANISHES, "reduced-1")
        return VanishingVerdict(NO_CLAIM)
    if m <= n + 1 - p:
        return VanishingVerdict(EQUALS_C, "reduced-2")
    return VanishingVerdict(NO_CLAIM)


def _level(spectrum_or_m):
    if isinstance(spectrum_or_m, Spectrum):
        return m_positivity_level(spectrum_or_m)
    return spectrum_or_m


def hodge_diamond_report(n: int, spectrum_or_m, mode: str = "hodge") -> list[list[VanishingVerdict]]:
    """(n+1) x (n+1) table indexed [p][q].  ``mode`` is "hodge" or "reduced"."""
    m = _level(spectrum_or_m)
    rule = {"hodge": vanishing_hodge, "reduced": reduced_vanishing}[mode]
    return [[rule(n, p, q, m) for q in range(n + 1)] for p in range(n + 1)]


def bundle_report(n: int, spectrum_or_m, nakano_positive: bool = True) -> list[list[VanishingVerdict | None]]:
    """Table over p in 0..n, q in 1..n (column q = 0 is None)."""
    m = _level(spectrum_or_m)
    return [[None] + [vanishing_bundle(n, p, q, m, nakano_positive) for q in range(1, n + 1)]
            for p in range(n + 1)]


def is_projective_space_diamond(table) -> bool:
    """equals-C on the diagonal and vanishes everywhere else."""
    return all(cell.verdict == (EQUALS_C if p == q else VANISHES)
               for p, row in enumerate(table) for q, cell in enumerate(row))


def render_table(table) -> str:
    short = {VANISHES: "0", EQUALS_C: "C", NO_CLAIM: "?", None: "."}
    lines = []
    for p, row in enumerate(table):
        lines.append(f"p={p}: " + " ".join(short[c.verdict if c is not None else None] for c in row))
    return "\n".join(lines)
