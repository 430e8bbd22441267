"""Run configuration shared by the command-line tools."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class RunConfig:
    precision: int = 64
    width: Fraction = Fraction(1, 10**30)
    budget_degree: int = 2000
    budget_terms: int = 2_000_000
    format: str = "text"
    out: str | None = None
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "width", parse_width(self.width))
        if self.precision < 32:
            raise ValueError("precision must be at least 32 digits")
        if self.budget_degree < 1 or self.budget_terms < 1:
            raise ValueError("budgets must be positive")
        if self.width <= 0:
            raise ValueError("isolation width must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    def merged(self, overrides: dict) -> "RunConfig":
        """Copy with every non-None entry of ``overrides`` applied."""
        names = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in overrides.items() if k in names and v is not None})

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        doc = json.loads(Path(path).read_text())
        unknown = set(doc) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls().merged(doc)


def parse_width(w) -> Fraction:
    """Accept Fractions, ints, '1/10^30', '1e-30' or '1/1000'."""
    if isinstance(w, Fraction):
        return w
    if isinstance(w, int):
        return Fraction(w)
    text = str(w).strip().replace("^", "**")
    if "e" in text.lower() and "/" not in text:
        mant, _, exp = text.lower().partition("e")
        return Fraction(mant) * Fraction(10) ** int(exp)
    if "**" in text:
        num, _, den = text.partition("/")
        base, _, exp = den.partition("**")
        return Fraction(int(num), int(base) ** int(exp))
    return Fraction(text)
