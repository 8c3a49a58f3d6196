"""Martingale couplings and the left/right-curtain construction."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .measures import DiscreteMeasure, convex_order, make_measure, zero_measure
from .numeric import DEFAULT_TOL, MotError, tol_for
from .shadow import shadow, _shadow_atom


class NotInConvexOrder(MotError, ValueError):
    pass


class InvalidRival(MotError, ValueError):
    pass


@dataclass(frozen=True)
class Coupling:
    """Sparse plan: one row per source atom, each a sorted tuple of (y, mass)."""

    source: DiscreteMeasure
    target: DiscreteMeasure
    rows: tuple  # ((x, ((y, w), ...)), ...)

    @property
    def exact(self) -> bool:
        return self.source.exact and self.target.exact

    @classmethod
    def from_entries(cls, entries: Iterable[tuple], exact: bool | None = None, threshold=0) -> "Coupling":
        """Build from (x, y, w) triples; marginals are recomputed from the entries."""
        entries = [e for e in entries if e[2] > threshold]
        if exact is None:
            exact = all(not isinstance(v, float) for e in entries for v in e)
        by_row: dict = {}
        for x, y, w in entries:
            row = by_row.setdefault(x, {})
            row[y] = row.get(y, 0) + w
        src = make_measure([(x, sum(r.values())) for x, r in by_row.items()], exact=exact)
        tgt = make_measure([(y, w) for r in by_row.values() for y, w in r.items()], exact=exact)
        conv = (lambda v: v) if exact else float
        rows = tuple(
            (conv(x), tuple(sorted((conv(y), conv(w)) for y, w in by_row[x].items())))
            for x in sorted(by_row)
        )
        return cls(src, tgt, rows)

    @classmethod
    def from_matrix(cls, xs, ys, matrix, threshold=0) -> "Coupling":
        entries = [
            (x, y, matrix[i][j]) for i, x in enumerate(xs) for j, y in enumerate(ys) if matrix[i][j] > threshold
        ]
        exact = all(not isinstance(v, float) for e in entries for v in e)
        return cls.from_entries(entries, exact=exact)

    def entries(self) -> list[tuple]:
        return [(x, y, w) for x, row in self.rows for y, w in row]

    def row(self, x) -> tuple:
        for xi, r in self.rows:
            if xi == x:
                return r
        return ()

    def to_matrix(self, xs=None, ys=None):
        xs = list(self.source.xs if xs is None else xs)
        ys = list(self.target.xs if ys is None else ys)
        zero = 0 if self.exact else 0.0
        mat = [[zero] * len(ys) for _ in xs]
        xi, yj = {x: i for i, x in enumerate(xs)}, {y: j for j, y in enumerate(ys)}
        for x, y, w in self.entries():
            mat[xi[x]][yj[y]] += w
        return mat

    def cost(self, cost) -> object:
        return sum((w * cost(x, y) for x, y, w in self.entries()), 0)

    def pruned(self, threshold) -> "Coupling":
        return Coupling.from_entries(self.entries(), exact=self.exact, threshold=threshold)

    def reflect(self) -> "Coupling":
        return Coupling.from_entries([(-x, -y, w) for x, y, w in self.entries()], exact=self.exact)

    # residuals

    def martingale_residuals(self) -> list:
        return [sum((w * (y - x) for y, w in row), 0) for x, row in self.rows]

    def marginal_residual(self, mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
        """Largest absolute mismatch between the plan's marginals and (mu, nu)."""
        worst = 0
        for side, ref in ((self.source, mu), (self.target, nu)):
            for x in set(side.xs) | set(ref.xs):
                worst = max(worst, abs(side.weight_at(x) - ref.weight_at(x)))
        return worst

    def is_martingale_coupling(self, mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float | None = None) -> bool:
        exact = self.exact and mu.exact and nu.exact
        reach = max((abs(float(v)) for v in mu.xs + nu.xs), default=1.0)
        eps = tol_for(exact, tol, DEFAULT_TOL.feas)
        if any(w < -eps for _, _, w in self.entries()):
            return False
        if self.marginal_residual(mu, nu) > eps * max(1.0, float(mu.mass)):
            return False
        scale = max(1.0, float(mu.mass)) * max(1.0, reach)
        return all(abs(r) <= eps * scale for r in self.martingale_residuals())

    def equals(self, other: "Coupling", tol: float = 0.0) -> bool:
        a, b = {}, {}
        for x, y, w in self.entries():
            a[(x, y)] = w
        for x, y, w in other.entries():
            b[(x, y)] = w
        if tol == 0:
            return a == b
        keys = set(a) | set(b)
        return all(abs(float(a.get(k, 0)) - float(b.get(k, 0))) <= tol for k in keys)


@dataclass(frozen=True)
class MonotonicityWitness:
    x: object
    x2: object  # x' > x
    y_minus: object
    y_plus: object
    y2: object  # y' from row x', strictly between y_minus and y_plus

    def as_tuple(self) -> tuple:
        return (self.x, self.x2, self.y_minus, self.y_plus, self.y2)


def left_curtain(mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float | None = None) -> Coupling:
    """Row i is the shadow of atom i in what the earlier rows left of nu."""
    if not convex_order(mu, nu, tol):
        raise NotInConvexOrder("mu and nu are not in convex order")
    exact = mu.exact and nu.exact
    remainder = nu if exact else nu.to_float()
    rows = []
    for x, w in mu:
        if not exact:
            x, w = float(x), float(w)
        window, _ = _shadow_atom(x, w, remainder, tol)
        remainder = remainder.subtract(window)
        rows.append((x, tuple(window.atoms())))
    target = nu if exact else nu.to_float()
    source = mu if exact else mu.to_float()
    return Coupling(source, target, tuple(rows))


def right_curtain(mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float | None = None) -> Coupling:
    return left_curtain(mu.reflect(), nu.reflect(), tol).reflect()


def is_left_monotone(plan: Coupling, mass_threshold=None) -> Optional[MonotonicityWitness]:
    """Search for x < x' with y- < y' < y+ (y+- from row x, y' from row x')."""
    if mass_threshold is None:
        mass_threshold = 0 if plan.exact else DEFAULT_TOL.support
    supports = [(x, [y for y, w in row if w > mass_threshold]) for x, row in plan.rows]
    supports = [(x, ys) for x, ys in supports if ys]
    for i, (x, ys) in enumerate(supports):
        lo, hi = min(ys), max(ys)
        if lo == hi:
            continue
        for x2, ys2 in supports[i + 1 :]:
            for y2 in ys2:
                if lo < y2 < hi:
                    return MonotonicityWitness(x, x2, lo, hi, y2)
    return None


def prefix_target(plan: Coupling, t) -> DiscreteMeasure:
    """Target-side projection of the rows with source position <= t."""
    pairs = [(y, w) for x, row in plan.rows if x <= t for y, w in row]
    return make_measure(pairs, exact=plan.exact) if pairs else zero_measure(plan.exact)


def check_convex_minimality(
    mu: DiscreteMeasure, nu: DiscreteMeasure, rival: Coupling, tol: float | None = None
) -> bool:
    """True iff every left-curtain prefix target is <=_c the rival's at the same t."""
    if not rival.is_martingale_coupling(mu, nu, tol):
        raise InvalidRival("rival is not a martingale coupling of (mu, nu)")
    lc = left_curtain(mu, nu, tol)
    return all(convex_order(prefix_target(lc, t), prefix_target(rival, t), tol) for t in mu.xs)


def curtain_prefix_shadow(mu: DiscreteMeasure, nu: DiscreteMeasure, t, tol=None) -> DiscreteMeasure:
    """Shadow of mu restricted to ]-inf, t] in nu (the curtain's prefix target)."""
    return shadow(mu.restrict(None, t), nu, tol).shadow


def row_maps(plan: Coupling, threshold=None) -> list[tuple]:
    """(x, T1, T2) per row: lowest and highest support point above threshold."""
    if threshold is None:
        threshold = 0 if plan.exact else DEFAULT_TOL.support
    out = []
    for x, row in plan.rows:
        ys = [y for y, w in row if w > threshold]
        out.append((x, min(ys), max(ys)))
    return out


__all__ = [
    "Coupling",
    "MonotonicityWitness",
    "NotInConvexOrder",
    "InvalidRival",
    "left_curtain",
    "right_curtain",
    "is_left_monotone",
    "prefix_target",
    "check_convex_minimality",
    "curtain_prefix_shadow",
    "row_maps",
]
