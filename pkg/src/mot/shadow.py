"""Shadow projections S^nu(mu) and maximal embeddings T^nu(mu).

For an atom the shadow is a quantile window of nu: the restriction of nu
between quantile levels s and s + alpha, with s chosen so the window's
barycenter is the atom's position.  General measures are shadowed atom by
atom through the shrinking remainder, which is legitimate because the shadow
of a sum is the shadow of the first part plus the shadow of the second part
in what is left.
"""
from __future__ import annotations

from dataclasses import dataclass

from .measures import (
    DiscreteMeasure,
    extended_order,
    make_measure,
    quantile_integral,
    quantile_slice,
)
from .numeric import DEFAULT_TOL, DomainError, MotError, tol_for


class NotInExtendedOrder(MotError, ValueError):
    pass


@dataclass(frozen=True)
class WindowTrace:
    x: object
    mass: object
    start: object  # quantile level in the running remainder
    end: object


@dataclass(frozen=True)
class ShadowResult:
    shadow: DiscreteMeasure
    remainder: DiscreteMeasure
    trace: tuple[WindowTrace, ...]


def barycenter_window(nu: DiscreteMeasure, alpha, s):
    """Barycenter of the quantile restriction of nu to [s, s + alpha]."""
    if alpha <= 0:
        raise DomainError("window mass must be positive")
    if s < 0 or s + alpha > nu.mass:
        raise DomainError(f"window [{s}, {s + alpha}] exceeds mass {nu.mass}")
    return (quantile_integral(nu, s + alpha) - quantile_integral(nu, s)) / alpha


def _window_start(nu: DiscreteMeasure, x, alpha, eps):
    """Leftmost s in [0, mass - alpha] with barycenter_window(nu, alpha, s) == x."""
    top = nu.mass - alpha
    if top < 0:
        if top < -eps:
            raise NotInExtendedOrder(f"atom mass {alpha} exceeds available mass {nu.mass}")
        top = top * 0
    target = alpha * x

    def integral(s):
        return quantile_integral(nu, s + alpha) - quantile_integral(nu, s)

    # the window integral is piecewise linear in s with kinks where either
    # end of the window crosses a cumulative mass level
    cuts = {top * 0, top}
    for c in nu._cw:
        for s in (c, c - alpha):
            if 0 < s < top:
                cuts.add(s)
    grid = sorted(cuts)
    vals = [integral(s) for s in grid]
    # eps bounds the first-moment error, so tiny atoms are not held to a
    # barycenter accuracy that float cumulative sums cannot deliver
    if vals[0] >= target:
        if vals[0] - target > eps:
            raise NotInExtendedOrder(f"atom at {x} lies left of every window barycenter")
        return grid[0]
    for k in range(1, len(grid)):
        if vals[k] >= target:
            s0, s1, v0, v1 = grid[k - 1], grid[k], vals[k - 1], vals[k]
            return s0 + (target - v0) * (s1 - s0) / (v1 - v0)
    if target - vals[-1] > eps:
        raise NotInExtendedOrder(f"atom at {x} lies right of every window barycenter")
    return grid[-1]


def _eps(nu: DiscreteMeasure, exact: bool, tol) -> float:
    reach = max((abs(float(v)) for v in nu.xs), default=0.0)
    return tol_for(exact, tol, DEFAULT_TOL.order) * max(1.0, float(nu.mass), reach)


def shadow_atom(x, alpha, nu: DiscreteMeasure, tol: float | None = None) -> DiscreteMeasure:
    """Shadow of the atom alpha * delta_x in nu."""
    return _shadow_atom(x, alpha, nu, tol)[0]


def _shadow_atom(x, alpha, nu, tol):
    exact = nu.exact and not isinstance(x, float) and not isinstance(alpha, float)
    if nu.is_zero():
        raise NotInExtendedOrder("target measure is empty")
    eps = _eps(nu, exact, tol)
    s = _window_start(nu, x, alpha, eps)
    e = min(s + alpha, nu.mass)
    window = quantile_slice(nu, s, e)
    if not exact:
        window = window.to_float()
    return window, WindowTrace(x, alpha, s, e)


def shadow(mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float | None = None) -> ShadowResult:
    """Shadow of mu in nu, folding atoms left to right through the remainder."""
    return shadow_in_order(mu.atoms(), nu, tol, exact=mu.exact)


def shadow_in_order(atoms, nu: DiscreteMeasure, tol=None, exact=True) -> ShadowResult:
    """Shadow of the sum of ``atoms`` (any order) in nu."""
    exact = exact and nu.exact
    remainder = nu if exact or not nu.exact else nu.to_float()
    pieces, trace = [], []
    for x, w in atoms:
        if w == 0:
            continue
        window, tr = _shadow_atom(x, w, remainder, tol)
        remainder = remainder.subtract(window)
        pieces.extend(window.atoms())
        trace.append(tr)
    return ShadowResult(make_measure(pieces, exact=exact), remainder, tuple(trace))


def maximal_embedding(mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float | None = None) -> DiscreteMeasure:
    """Convex-order maximal theta with mu <=_c theta <= nu: nu minus a central quantile band."""
    if not extended_order(mu, nu, tol):
        raise NotInExtendedOrder("mu is not below nu in the extended convex order")
    exact = mu.exact and nu.exact
    band = nu.mass - mu.mass
    if band <= _eps(nu, exact, tol) * (0 if exact else 1):
        return nu
    target = (nu.first_moment - mu.first_moment) / band
    removed, _ = _shadow_atom(target, band, nu, tol)
    return nu.subtract(removed)
