"""Cost families c(x, y), their string syntax, and structural checks.

Grammar::

    pow:<p> | abs | neg-abs | exp | poly:<c0,c1,...> | sep:<file> | ind:<s>,<t>

Numbers may be integers, decimals or ``p/q`` rationals; they are kept exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .numeric import MotError, fmt_number


class ParseError(MotError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnsupportedCost(MotError, TypeError):
    pass


class InvalidCost(MotError, ValueError):
    pass


class CostSpec:
    exact_capable = True

    def __call__(self, x, y):
        raise NotImplementedError

    def format(self) -> str:
        raise NotImplementedError

    def matrix(self, xs, ys, exact: bool = False):
        """Cost on the grid xs x ys: list of lists in exact mode, ndarray otherwise."""
        if exact and self.exact_capable:
            return [[self(x, y) for y in ys] for x in xs]
        return np.array([[float(self(x, y)) for y in ys] for x in xs], dtype=float)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class PowerDiff(CostSpec):
    """(y - x)^p."""

    p: int

    def __call__(self, x, y):
        return (y - x) ** self.p

    def format(self):
        return f"pow:{self.p}"


@dataclass(frozen=True)
class AbsDiff(CostSpec):
    def __call__(self, x, y):
        return abs(y - x)

    def format(self):
        return "abs"


@dataclass(frozen=True)
class NegAbsDiff(CostSpec):
    def __call__(self, x, y):
        return -abs(y - x)

    def format(self):
        return "neg-abs"


@dataclass(frozen=True)
class ExpDiff(CostSpec):
    exact_capable = False

    def __call__(self, x, y):
        return math.exp(float(y) - float(x))

    def format(self):
        return "exp"


@dataclass(frozen=True)
class PolyDiff(CostSpec):
    """h(y - x) with h(t) = sum coeffs[k] t^k."""

    coeffs: tuple

    def __call__(self, x, y):
        t = y - x
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def format(self):
        return "poly:" + ",".join(str(fmt_number(c)) for c in self.coeffs)


@dataclass(frozen=True)
class Separable(CostSpec):
    """phi(x) psi(y) from value tables on the two supports."""

    phi: tuple  # ((x, value), ...) sorted by x
    psi: tuple
    source: str = ""

    def __post_init__(self):
        pv = [v for _, v in self.phi]
        if any(v < 0 for v in pv) or any(b > a for a, b in zip(pv, pv[1:])):
            raise InvalidCost("phi must be non-negative and nonincreasing")
        ys = [y for y, _ in self.psi]
        qv = [v for _, v in self.psi]
        if any(v < 0 for v in qv):
            raise InvalidCost("psi must be non-negative")
        slopes = [(qv[i + 1] - qv[i]) / (ys[i + 1] - ys[i]) for i in range(len(ys) - 1)]
        if any(b < a for a, b in zip(slopes, slopes[1:])):
            raise InvalidCost("psi must be convex on its table")
        object.__setattr__(self, "_phi", dict(self.phi))
        object.__setattr__(self, "_psi", dict(self.psi))

    @property
    def exact_capable(self):
        return all(not isinstance(v, float) for _, v in self.phi + self.psi)

    def __call__(self, x, y):
        try:
            return self._phi[x] * self._psi[y]
        except KeyError as exc:
            raise InvalidCost(f"no table value for {exc.args[0]}") from None

    def format(self):
        return f"sep:{self.source}"


@dataclass(frozen=True)
class Indicator(CostSpec):
    """1{x <= s} |y - t|."""

    s: object
    t: object

    def __call__(self, x, y):
        return abs(y - self.t) if x <= self.s else 0 * (y - self.t)

    def format(self):
        return f"ind:{fmt_number(self.s)},{fmt_number(self.t)}"


def eval_cost(cost: CostSpec, x, y):
    return cost(x, y)


def _number(text: str, pos: int):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad number {text!r}", pos) from None


def parse_cost(spec: str, mu=None, nu=None) -> CostSpec:
    """Parse a cost spec string; ``sep:<file>`` needs the marginals to align tables."""
    spec = spec.strip()
    head, sep, body = spec.partition(":")
    start = len(head) + 1
    if head in ("abs", "neg-abs", "exp"):
        if sep:
            raise ParseError(f"{head} takes no argument", len(head))
        return {"abs": AbsDiff, "neg-abs": NegAbsDiff, "exp": ExpDiff}[head]()
    if not sep:
        raise ParseError(f"unknown cost {head!r}", 0)
    if head == "pow":
        if not body.strip().isdigit() or int(body) < 1:
            raise ParseError("power must be a positive integer", start)
        return PowerDiff(int(body))
    if head == "poly":
        parts = body.split(",")
        coeffs, pos = [], start
        for part in parts:
            coeffs.append(_number(part, pos))
            pos += len(part) + 1
        if not coeffs:
            raise ParseError("empty coefficient list", start)
        return PolyDiff(tuple(coeffs))
    if head == "ind":
        parts = body.split(",")
        if len(parts) != 2:
            raise ParseError("ind expects two numbers s,t", start)
        return Indicator(_number(parts[0], start), _number(parts[1], start + len(parts[0]) + 1))
    if head == "sep":
        if mu is None or nu is None:
            raise ParseError("sep costs need the marginals", start)
        return load_separable(body, mu, nu)
    raise ParseError(f"unknown cost {head!r}", 0)


def load_separable(path: str, mu, nu) -> Separable:
    """Read ``{"phi": [...], "psi": [...]}`` aligned with the atoms of mu and nu."""
    data = json.loads(Path(path).read_text())
    exact = mu.exact and nu.exact
    conv = (lambda v: Fraction(v) if isinstance(v, (int, str)) else v) if exact else float
    phi, psi = [conv(v) for v in data["phi"]], [conv(v) for v in data["psi"]]
    if len(phi) != len(mu) or len(psi) != len(nu):
        raise InvalidCost("phi/psi tables do not match the marginal supports")
    return Separable(tuple(zip(mu.xs, phi)), tuple(zip(nu.xs, psi)), source=path)


# strict convexity of h' for difference costs


def _third_derivative(coeffs) -> list:
    """Coefficients (low to high) of h''' for h = sum c_k t^k."""
    return [c * k * (k - 1) * (k - 2) for k, c in enumerate(coeffs)][3:]


def _poly_eval(coeffs, t):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def strict_convex_derivative(cost: CostSpec, hull: tuple | None = None) -> bool:
    """Is h' strictly convex (on ``hull`` if given, else on the whole line)?

    For polynomial h this holds iff h''' >= 0 on the interval and h''' is not
    identically zero there; the sign is checked between consecutive real roots.
    """
    if isinstance(cost, ExpDiff):
        return True
    if isinstance(cost, PowerDiff):
        coeffs = [0] * cost.p + [1]
    elif isinstance(cost, PolyDiff):
        coeffs = list(cost.coeffs)
    else:
        raise UnsupportedCost(f"{cost.format()} is not of the form h(y - x) with smooth h")
    d3 = _third_derivative(coeffs)
    while d3 and d3[-1] == 0:
        d3.pop()
    if not d3:
        return False  # h' affine
    lo, hi = (None, None) if hull is None else (float(hull[0]), float(hull[1]))
    if len(d3) == 1:
        return d3[0] > 0
    roots = np.roots([float(c) for c in reversed(d3)])
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-12)
    probes = []
    pts = [r for r in real if (lo is None or r > lo) and (hi is None or r < hi)]
    left = (pts[0] - 1.0 if pts else 0.0) if lo is None else lo
    right = (pts[-1] + 1.0 if pts else 0.0) if hi is None else hi
    edges = [left] + pts + [right]
    for a, b in zip(edges, edges[1:]):
        probes.append((a + b) / 2)
    if lo is not None:
        probes += [lo, hi]
    return all(_poly_eval([float(c) for c in d3], t) >= -1e-12 for t in probes)
