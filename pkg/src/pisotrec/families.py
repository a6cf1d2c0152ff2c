"""Parametric families E(x, x^2 k + j) with recurrences polynomial in k."""
import json
import re
from dataclasses import dataclass
from importlib import resources

from .decide import DEFAULT_CHECK_LIMIT, end_to_end
from .guess import LinearRecurrence
from .sequence import PisotParams

_TERM = re.compile(r"^(\d*)\*?(k(?:\^(\d+))?)?$")


def parse_poly(expr):
    """Parse an integer polynomial in k such as "64*k^2+16*k+1" into {power: coeff}."""
    text = expr.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    if text[0] not in "+-":
        text = "+" + text
    out = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", text):
        m = _TERM.match(body)
        if not m or not (m.group(1) or m.group(2)):
            raise ValueError(f"cannot parse term {body!r} in {expr!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        power = 0 if not m.group(2) else int(m.group(3) or 1)
        out[power] = out.get(power, 0) + (-coeff if sign == "-" else coeff)
    if "".join(s + b for s, b in re.findall(r"([+-])([^+-]+)", text)) != text:
        raise ValueError(f"cannot parse {expr!r}")
    return out


def eval_poly(poly, k):
    return sum(c * k**p for p, c in poly.items())


@dataclass(frozen=True)
class FamilyTemplate:
    x: int
    residue: int
    initial_terms: tuple
    coefficients: tuple
    k_range: tuple = (1, 5)
    allow_k0: bool = False

    @property
    def modulus(self):
        return self.x * self.x

    @property
    def name(self):
        return f"E({self.x},{self.modulus}k+{self.residue})"

    def instantiate(self, k):
        init = tuple(eval_poly(parse_poly(e), k) for e in self.initial_terms)
        coeffs = tuple(eval_poly(parse_poly(e), k) for e in self.coefficients)
        params = PisotParams(self.x, self.modulus * k + self.residue)
        return params, LinearRecurrence(coeffs, init)

    def to_dict(self):
        return {
            "x": self.x,
            "residue": self.residue,
            "initial_terms": list(self.initial_terms),
            "coefficients": list(self.coefficients),
            "k_range": list(self.k_range),
            "allow_k0": self.allow_k0,
        }

    @classmethod
    def from_dict(cls, d):
        t = cls(
            int(d["x"]),
            int(d["residue"]),
            tuple(d["initial_terms"]),
            tuple(d["coefficients"]),
            tuple(d.get("k_range", (1, 5))),
            bool(d.get("allow_k0", False)),
        )
        if len(t.initial_terms) != len(t.coefficients):
            raise ValueError(f"{t.name}: initial terms and coefficients differ in length")
        if eval_poly(parse_poly(t.initial_terms[0]), 1) != t.x:
            raise ValueError(f"{t.name}: first initial term must be x")
        return t


def load_templates(path=None):
    """Templates from a JSON file, or the bundled ones when ``path`` is None."""
    if path is None:
        text = resources.files("pisotrec").joinpath("data/families.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return [FamilyTemplate.from_dict(d) for d in json.loads(text)["templates"]]


@dataclass(frozen=True)
class FamilyRow:
    k: int
    y: int
    status: str  # pass | MismatchedGuess | NotProved | skipped | invalid
    verdict: str = None
    expected: LinearRecurrence = None
    guessed: LinearRecurrence = None


def verify_family(template, max_order=12, check_limit=DEFAULT_CHECK_LIMIT):
    rows = []
    lo, hi = template.k_range
    for k in range(lo, hi + 1):
        y = template.modulus * k + template.residue
        if k == 0 and not template.allow_k0:
            rows.append(FamilyRow(k, y, "skipped"))
            continue
        try:
            params, expected = template.instantiate(k)
        except ValueError:
            rows.append(FamilyRow(k, y, "invalid"))
            continue
        rep = end_to_end(params, max_order, 0, check_limit)
        if rep.recurrence != expected:
            status = "MismatchedGuess"
        elif rep.verdict != "Proved":
            status = "NotProved"
        else:
            status = "pass"
        rows.append(FamilyRow(k, y, status, rep.verdict, expected, rep.recurrence))
    return rows
