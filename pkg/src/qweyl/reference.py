"""Published hand-derived expressions and a term-level comparison against the engine.

The reference expressions are transcribed into the canonical text syntax
with three normalizations: ``x, y, z`` become ``x1, x2, x3``; the classical
momentum acting on the plane wave becomes ``hbar*k_j``; and every displayed
term is read as multiplying the wave function, which is then dropped. The
transcription is otherwise literal, so typographic slips stay visible.

Comparison is per term, where a term is a product ``theta^n * params *
coordinates``. Each term gets one of three statuses: ``match``,
``mismatch`` (both sides kept), or ``not-comparable`` (the engine went to a
higher theta order than the reference displays). Known mismatches live in a
curated data file with a reason each; anything else fails the check, and a
curated entry that no longer describes a real mismatch is reported as stale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .freeparticle import curl, gauge_potential, momentum_amplitudes
from .realization import beta_series
from .scalars import GaussianRational, ThetaSeries, format_term
from .weyl import COORDS, DERIVS, CoordPoly, DiffOp

__all__ = [
    "REFERENCE_ORDER",
    "REFERENCE",
    "ReferenceExpression",
    "TermComparison",
    "ExpressionComparison",
    "reference_value",
    "engine_value",
    "compare",
    "compare_all",
    "load_curated",
    "audit",
    "term_map",
    "GROUPS",
]

REFERENCE_ORDER = 2


@dataclass(frozen=True)
class ReferenceExpression:
    name: str
    kind: str  # "operator" or "poly"
    text: str
    latex: str


REFERENCE: dict[str, ReferenceExpression] = {
    e.name: e
    for e in (
        ReferenceExpression(
            "beta_1",
            "operator",
            "1 - (1/3)*theta^2 + (1/2)*i*theta*x1*d1 - (3/8)*theta^2*x1*d1"
            " - (5/24)*theta^2*x1^2*d1^2",
            r"1 - \frac{1}{3}\theta^2 + \frac{1}{2}i\theta x\partial_x - \frac{3}{8}\theta^2 x\partial_x"
            r" - \frac{5}{24}\theta^2 x^2\partial_x^2",
        ),
        ReferenceExpression(
            "P_X",
            "poly",
            "(1 - (1/3)*theta^2)*hbar*k1 - hbar*k1*theta*((1/2)*k1*x1 + k2*x2 + k3*x3)"
            " - hbar*k1*theta^2*(-(1/2)*k1*k2*x1*x2 - (1/2)*k1*k3*x1*x3 - (1/2)*k2*k3*x2*x3)"
            " - hbar*k1*theta^2*(-(5/24)*k1^2*x1^2 - (1/2)*k2^2*x2^2 - (1/2)*k3^2*x3^2)"
            " - i*hbar*k1*theta^2*((3/8)*k1*x1 - (1/2)*k2*x2 - (1/2)*k3*x3)",
            r"(1-\frac{1}{3}\theta^2)\hbar k_1 - \hbar k_1\theta(\frac{1}{2}k_1x + k_2y + k_3z)"
            r" - \hbar k_1\theta^2(-\frac{1}{2}k_1k_2xy - \frac{1}{2}k_1k_3xz - \frac{1}{2}k_2k_3yz)"
            r" - \hbar k_1\theta^2(-\frac{5}{24}k_1^2x^2 - \frac{1}{2}k_2^2y^2 - \frac{1}{2}k_3^2z^2)"
            r" - i\hbar k_1\theta^2(\frac{3}{8}k_1x - \frac{1}{2}k_2y - \frac{1}{2}k_3z)",
        ),
        ReferenceExpression(
            "P_Y",
            "poly",
            "(1 - (1/3)*theta^2)*hbar*k2 - hbar*k2*theta*((1/2)*k2*x2 + k3*x3)"
            " - hbar*k2*theta^2*(-(1/2)*k2*k3*x2*x3 - (5/24)*k2^2*x2^2 - (1/2)*k3*x3^2)"
            " - i*hbar*k2*theta^2*((3/8)*k2*x2 - (1/2)*k3*x3)",
            r"(1-\frac{1}{3}\theta^2)\hbar k_2 - \hbar k_2\theta(\frac{1}{2}k_2y + k_3z)"
            r" - \hbar k_2\theta^2(-\frac{1}{2}k_2k_3yz - \frac{5}{24}k_2^2y^2 - \frac{1}{2}k_3z^2)"
            r" - i\hbar k_2\theta^2(\frac{3}{8}k_2y - \frac{1}{2}k_3z)",
        ),
        ReferenceExpression(
            "P_Z",
            "poly",
            "(1 - (1/3)*theta^2)*hbar*k3 - (1/2)*hbar*theta*k3^2*x3"
            " - hbar*k3*theta^2*(-(5/24)*k3^2*x3^2 + i*(3/8)*k3*x3)",
            r"(1-\frac{1}{3}\theta^2)\hbar k_3 - \frac{1}{2}\hbar\theta k_3^2z"
            r" - \hbar k_3\theta^2(-\frac{5}{24}k_3^2z^2 + i\frac{3}{8}k_3z)",
        ),
        ReferenceExpression(
            "B_x",
            "poly",
            "-hbar*theta*k2*k3 + hbar*theta^2*k2*((1/2)*k2*k3*x2 + k3^2*x3)"
            " + (1/2)*i*hbar*theta^2*k2*k3",
            r"-\hbar\theta k_2k_3 + \hbar\theta^2k_2(\frac{1}{2}k_2k_3y + k_3^2z)"
            r" + \frac{1}{2}i\hbar\theta^2k_2k_3",
        ),
        ReferenceExpression(
            "B_y",
            "poly",
            "hbar*theta*k1*k3 - hbar*theta^2*k1*((1/2)*k1*k3*x1 + (1/2)*k2*k3*x2 + k3^2*x3)"
            " - (1/2)*i*hbar*theta^2*k1*k3",
            r"\hbar\theta k_1k_3 - \hbar\theta^2k_1(\frac{1}{2}k_1k_3x + \frac{1}{2}k_2k_3y + k_3^2z)"
            r" - \frac{1}{2}i\hbar\theta^2k_1k_3",
        ),
        ReferenceExpression(
            "B_z",
            "poly",
            "-hbar*theta*k1*k2 + hbar*theta^2*k1*((1/2)*k1*k2*x1 + (1/2)*k2*k3*x3 + k2^2*x2)"
            " + (1/2)*i*hbar*theta^2*k1*k2",
            r"-\hbar\theta k_1k_2 + \hbar\theta^2k_1(\frac{1}{2}k_1k_2x + \frac{1}{2}k_2k_3z + k_2^2y)"
            r" + \frac{1}{2}i\hbar\theta^2k_1k_2",
        ),
    )
}

def _beta_for(j: int) -> ReferenceExpression:
    base = REFERENCE["beta_1"]
    sub = {1: ("x", "1"), 2: ("y", "2"), 3: ("z", "3")}[j]
    return ReferenceExpression(
        f"beta_{j}",
        "operator",
        base.text.replace("x1", f"x{j}").replace("d1", f"d{j}"),
        base.latex.replace("x", sub[0]),
    )


REFERENCE.update({f"beta_{j}": _beta_for(j) for j in (2, 3)})

GROUPS = {
    "beta": ("beta_1", "beta_2", "beta_3"),
    "momentum": ("P_X", "P_Y", "P_Z"),
    "bfield": ("B_x", "B_y", "B_z"),
}


def reference_value(name: str, order: int):
    expr = REFERENCE[name]
    if expr.kind == "operator":
        return DiffOp.parse(expr.text, order=order)
    return CoordPoly.parse(expr.text, order=order)


@lru_cache(maxsize=None)
def _engine_field(order: int):
    return tuple(curl(gauge_potential(order)))


@lru_cache(maxsize=None)
def _engine_momenta(order: int):
    return tuple(momentum_amplitudes(order))


def engine_value(name: str, order: int):
    if name.startswith("beta_"):
        return beta_series(int(name[5:]), order)
    if name.startswith("P_"):
        return _engine_momenta(order)["XYZ".index(name[2])]
    if name.startswith("B_"):
        return _engine_field(order)["xyz".index(name[2])]
    raise KeyError(name)


# ---------------------------------------------------------------------------
# term-level comparison
# ---------------------------------------------------------------------------


def term_map(value) -> dict[tuple[int, str], GaussianRational]:
    """Flatten ``{monomial: ThetaSeries}`` into ``{(theta power, term text): coefficient}``."""
    names = COORDS + DERIVS
    out: dict[tuple[int, str], GaussianRational] = {}
    for mono, series in value.items():
        coord = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
        assert isinstance(series, ThetaSeries)
        for n, poly in enumerate(series.coeffs):
            if isinstance(poly, GaussianRational):
                pairs = [([], poly)] if poly else []
            else:
                pairs = [(poly.factors(pm), c) for pm, c in poly.items()]
            for params, c in pairs:
                factors = [] if n == 0 else ["theta" if n == 1 else f"theta^{n}"]
                out[(n, "*".join(factors + params + coord) or "1")] = c
    return out


def _coef_text(c: GaussianRational | None) -> str:
    return "0" if c is None else format_term(c, [])


@dataclass
class TermComparison:
    expression: str
    theta_order: int
    term: str
    engine: str
    reference: str
    status: str
    reason: str | None = None

    def key(self) -> tuple:
        return (self.expression, self.term, self.engine, self.reference)

    def to_dict(self) -> dict:
        d = {
            "expression": self.expression,
            "theta_order": self.theta_order,
            "term": self.term,
            "engine": self.engine,
            "reference": self.reference,
            "status": self.status,
        }
        if self.reason is not None:
            d["reason"] = self.reason
        return d


@dataclass
class ExpressionComparison:
    expression: str
    order: int
    compared_order: int
    status: str
    matched: int
    terms: list[TermComparison] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "expression": self.expression,
            "order": self.order,
            "compared_up_to_theta_order": self.compared_order,
            "status": self.status,
            "matched_terms": self.matched,
            "differences": [t.to_dict() for t in self.terms],
        }


def compare(name: str, order: int) -> ExpressionComparison:
    if order < 0:
        raise ValueError("order must be nonnegative")
    engine = term_map(engine_value(name, order))
    ref = term_map(reference_value(name, order))
    limit = min(order, REFERENCE_ORDER)
    matched = 0
    diffs: list[TermComparison] = []
    for key in sorted(set(engine) | set(ref)):
        n, term = key
        e, r = engine.get(key), ref.get(key)
        if n > limit:
            diffs.append(TermComparison(name, n, term, _coef_text(e), _coef_text(r), "not-comparable"))
        elif e == r:
            matched += 1
        else:
            diffs.append(TermComparison(name, n, term, _coef_text(e), _coef_text(r), "mismatch"))
    if any(d.status == "mismatch" for d in diffs):
        status = "mismatch"
    elif matched:
        status = "match"
    else:
        status = "not-comparable"
    return ExpressionComparison(name, order, limit, status, matched, diffs)


def compare_all(order: int, groups=("beta", "momentum", "bfield")) -> list[ExpressionComparison]:
    return [compare(name, order) for g in groups for name in GROUPS[g]]


# ---------------------------------------------------------------------------
# curated known discrepancies
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _curated_raw() -> str:
    return resources.files("qweyl").joinpath("data/curated_discrepancies.json").read_text()


def load_curated() -> list[dict]:
    return json.loads(_curated_raw())["entries"]


def audit(comparisons: list[ExpressionComparison], curated: list[dict] | None = None) -> dict:
    """Attach curated reasons; report uncurated mismatches and stale entries.

    A curated entry applies when its expression was compared at an order
    that reaches its theta power. It is stale when it applies but no
    mismatch with the same engine and reference coefficients exists.
    """
    curated = load_curated() if curated is None else curated
    by_key = {
        (c["expression"], c["term"], c["engine"], c["reference"]): c for c in curated
    }
    compared = {c.expression: c.compared_order for c in comparisons}
    seen = set()
    uncurated = []
    for comp in comparisons:
        for t in comp.terms:
            if t.status != "mismatch":
                continue
            entry = by_key.get(t.key())
            if entry is None:
                uncurated.append(t.to_dict())
            else:
                t.reason = entry["reason"]
                seen.add(t.key())
    stale = [
        c for key, c in sorted(by_key.items())
        if c["expression"] in compared
        and c["theta_order"] <= compared[c["expression"]]
        and key not in seen
    ]
    return {"uncurated": uncurated, "stale": stale, "pass": not uncurated and not stale}
