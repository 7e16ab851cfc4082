"""Report values and their JSON, text and LaTeX renderings.

A report is a plain dictionary with the keys ``command``, ``config``,
``results``, ``discrepancies`` and ``pass``. JSON is the primary form; the
text and LaTeX views are computed from the same dictionary. Displayed
expressions live under ``results["expressions"]`` as canonical text, which
the LaTeX view converts term by term.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

__all__ = ["Report", "to_latex_expression", "split_terms", "split_factors"]


@dataclass
class Report:
    command: str
    config: dict
    results: dict
    discrepancies: list = field(default_factory=list)
    passed: bool = True

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "discrepancies": self.discrepancies,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"pass: {str(self.passed).lower()}"]
        if self.config:
            lines.append("config:")
            lines.extend(_text_lines(self.config, 1))
        lines.append("results:")
        lines.extend(_text_lines(self.results, 1))
        lines.append(f"discrepancies: {len(self.discrepancies)}")
        for d in self.discrepancies:
            lines.extend(_text_lines(d, 1, bullet=True))
        return "\n".join(lines) + "\n"

    def to_latex(self) -> str:
        out = [f"% command: {self.command}", f"% pass: {str(self.passed).lower()}"]
        exprs = self.results.get("expressions", {})
        if exprs:
            out.append(r"\begin{align*}")
            rows = [
                f"{_latex_label(label)} &= {to_latex_expression(text)}"
                for label, text in sorted(exprs.items())
            ]
            out.append(" \\\\\n".join(rows))
            out.append(r"\end{align*}")
        if self.discrepancies:
            out.append(r"\begin{tabular}{llll}")
            out.append(r"expression & term & engine & reference \\ \hline")
            for d in self.discrepancies:
                if "term" not in d:
                    continue
                out.append(
                    f"{_latex_label(d['expression'])} & ${to_latex_expression(d['term'])}$ & "
                    f"${to_latex_expression(d['engine'])}$ & ${to_latex_expression(d['reference'])}$ \\\\"
                )
            out.append(r"\end{tabular}")
        if not exprs and not self.discrepancies:
            out.append(r"\begin{verbatim}")
            out.append(self.to_text().rstrip("\n"))
            out.append(r"\end{verbatim}")
        return "\n".join(out) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "text":
            return self.to_text()
        if fmt == "latex":
            return self.to_latex()
        raise ValueError(f"unknown format {fmt!r}")


def _scalar_text(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _text_lines(value, depth: int, bullet: bool = False) -> list[str]:
    pad = "  " * depth
    lines: list[str] = []
    if isinstance(value, dict):
        first = True
        for k, v in value.items():
            lead = pad[:-2] + "- " if bullet and first else pad
            first = False
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{lead}{k}:")
                lines.extend(_text_lines(v, depth + 1))
            else:
                lines.append(f"{lead}{k}: {_scalar_text(v) if not isinstance(v, (dict, list)) else '[]'}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.extend(_text_lines(item, depth + 1, bullet=True))
            else:
                lines.append(f"{pad}- {_scalar_text(item)}")
    else:
        lines.append(pad + _scalar_text(value))
    return lines


# ---------------------------------------------------------------------------
# canonical text -> LaTeX
# ---------------------------------------------------------------------------

_NAMES = {
    "theta": r"\theta",
    "hbar": r"\hbar",
    "omega": r"\omega",
    "alpha": r"\alpha",
    "x1": "x",
    "x2": "y",
    "x3": "z",
    "d1": r"\partial_x",
    "d2": r"\partial_y",
    "d3": r"\partial_z",
}


def split_terms(text: str) -> list[str]:
    """Split a canonical sum at top-level `` + `` / `` - `` separators."""
    terms, depth, start = [], 0, 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith((" + ", " - "), i):
            terms.append(text[start:i])
            start = i + 1 if text[i + 1] == "-" else i + 3
            i += 3 if text[i + 1] == "+" else 1
            continue
        i += 1
    terms.append(text[start:])
    return [t.replace("- ", "-", 1) if t.startswith("- ") else t for t in terms]


def split_factors(term: str) -> list[str]:
    out, depth, start = [], 0, 0
    for i, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(term[start:i])
            start = i + 1
    out.append(term[start:])
    return out


def _latex_factor(f: str) -> str:
    if f.startswith("(") and f.endswith(")"):
        inner = f[1:-1]
        m = re.fullmatch(r"(-?)(\d+)/(\d+)", inner)
        if m:
            return f"{m.group(1)}\\frac{{{m.group(2)}}}{{{m.group(3)}}}"
        return r"\left(" + to_latex_expression(inner) + r"\right)"
    name, _, power = f.partition("^")
    if name in _NAMES:
        base = _NAMES[name]
    elif re.fullmatch(r"[kXd]\d", name):
        base = f"{name[0]}_{name[1]}"
    else:
        base = name
    return base if not power else f"{base}^{{{power}}}"


def to_latex_expression(text: str) -> str:
    """LaTeX for a canonical sum such as ``(-3/8)*theta^2*k1*hbar + i*x1``."""
    pieces = []
    for n, term in enumerate(split_terms(text.strip())):
        sign = ""
        if term.startswith("-"):
            sign, term = "-", term[1:]
        factors = split_factors(term)
        if factors[0].startswith("(-") and re.fullmatch(r"\(-\d+/\d+\)", factors[0]):
            sign = "" if sign else "-"
            factors[0] = "(" + factors[0][2:]
        body = " ".join(_latex_factor(f) for f in factors)
        if n == 0:
            pieces.append(sign + body)
        else:
            pieces.append(("- " if sign else "+ ") + body)
    return " ".join(pieces)


def _latex_label(label: str) -> str:
    if label.startswith("q^"):
        return label
    if label.startswith("dX_"):
        return rf"\partial_{{X_{{{label[3:]}}}}}"
    m = re.fullmatch(r"([A-Za-z]+)_(\w+)", label)
    if m:
        head = r"\beta" if m.group(1) == "beta" else m.group(1)
        return f"{head}_{{{m.group(2)}}}"
    return label.replace("_", r"\_")
