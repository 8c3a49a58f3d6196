"""Number handling shared by every module.

Two arithmetic modes coexist: exact (``fractions.Fraction``) and binary64.
A value set is exact when none of its members is a Python float; operations
mixing modes fall back to floats.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Iterable

Number = Any  # Fraction | int | float


class MotError(Exception):
    """Base class for library errors."""


class DomainError(MotError, ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    order: float = 1e-9  # convex / extended order comparisons
    feas: float = 1e-9  # marginal, martingale and dual feasibility
    prune: float = 1e-14  # float-mode mass pruning (relative to total mass)
    support: float = 1e-10  # mass threshold for support counting / witnesses
    pivot: float = 1e-9  # simplex pivot and reduced-cost threshold

    def updated(self, **kw) -> "Tolerances":
        return replace(self, **{k: float(v) for k, v in kw.items() if v is not None})


DEFAULT_TOL = Tolerances()


def parse_number(v, exact: bool):
    """Convert ``v`` (int, float, Fraction, or "p/q" string) to the mode's type."""
    if isinstance(v, str):
        v = Fraction(v.strip())
    if exact:
        if isinstance(v, float):
            raise DomainError(f"float value {v!r} in exact mode")
        return Fraction(v)
    return float(v)


def all_exact(values: Iterable) -> bool:
    return all(not isinstance(v, float) for v in values)


def to_mode(v, exact: bool):
    return Fraction(v) if exact else float(v)


def fmt_number(v) -> str | float:
    """JSON-friendly rendering: rationals as "p/q" strings, floats unchanged."""
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    if isinstance(v, int):
        return str(v)
    return float(v)


def tol_for(exact: bool, tol: float | None, default: float) -> float:
    if exact:
        return 0.0 if tol is None else tol
    return default if tol is None else tol
