"""JSON and CSV formats for measures, couplings and dual certificates."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .curtain import Coupling
from .measures import DiscreteMeasure, make_measure
from .numeric import MotError, fmt_number


class InputError(MotError, ValueError):
    pass


def _read_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _number(v, exact: bool, where: str):
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise InputError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, str):
        try:
            q = Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{where}: bad rational {v!r}") from None
        return q if exact else float(q)
    if exact:
        if isinstance(v, float):
            raise InputError(f"{where}: float {v!r} in exact mode (write it as a string rational)")
        return Fraction(v)
    return float(v)


def _records_exact(records: list, keys: tuple) -> bool:
    # malformed records are reported by the caller's shape check
    return all(not isinstance(r.get(k), float) for r in records if isinstance(r, dict) for k in keys)


def measure_from_dict(data: dict, exact: bool | None = None, where: str = "measure") -> DiscreteMeasure:
    atoms = data.get("atoms") if isinstance(data, dict) else None
    if not isinstance(atoms, list):
        raise InputError(f'{where}: expected {{"atoms": [...]}}')
    if exact is None:
        exact = _records_exact(atoms, ("x", "w"))
    pairs = []
    for k, a in enumerate(atoms):
        if not isinstance(a, dict) or "x" not in a or "w" not in a:
            raise InputError(f"{where}: atom {k} needs keys x and w")
        pairs.append((_number(a["x"], exact, f"{where} atom {k}"), _number(a["w"], exact, f"{where} atom {k}")))
    return make_measure(pairs, exact=exact)


def load_measure(path, exact: bool | None = None) -> DiscreteMeasure:
    """Read measure JSON.  ``exact=None`` means exact iff the file holds no floats."""
    return measure_from_dict(_read_json(path), exact, str(path))


def measure_to_dict(mu: DiscreteMeasure) -> dict:
    return {"atoms": [{"x": fmt_number(x), "w": fmt_number(w)} for x, w in mu]}


def coupling_from_dict(data: dict, exact: bool | None = None, where: str = "plan") -> Coupling:
    entries = data.get("entries") if isinstance(data, dict) else None
    if not isinstance(entries, list):
        raise InputError(f'{where}: expected {{"entries": [...]}}')
    if exact is None:
        exact = _records_exact(entries, ("x", "y", "w"))
    out = []
    for k, e in enumerate(entries):
        if not isinstance(e, dict) or not {"x", "y", "w"} <= set(e):
            raise InputError(f"{where}: entry {k} needs keys x, y and w")
        out.append(tuple(_number(e[key], exact, f"{where} entry {k}") for key in ("x", "y", "w")))
    if any(w < 0 for _, _, w in out):
        raise InputError(f"{where}: negative mass")
    return Coupling.from_entries(out, exact=exact)


def load_coupling(path, exact: bool | None = None) -> Coupling:
    return coupling_from_dict(_read_json(path), exact, str(path))


def coupling_to_dict(plan: Coupling) -> dict:
    return {"entries": [{"x": fmt_number(x), "y": fmt_number(y), "w": fmt_number(w)} for x, y, w in plan.entries()]}


def dual_to_dict(dual, problem) -> dict:
    return {
        "phi": [{"x": fmt_number(x), "value": fmt_number(v)} for x, v in zip(problem.mu.xs, dual.phi)],
        "psi": [{"y": fmt_number(y), "value": fmt_number(v)} for y, v in zip(problem.nu.xs, dual.psi)],
        "delta": [{"x": fmt_number(x), "value": fmt_number(v)} for x, v in zip(problem.mu.xs, dual.delta)],
        "gap": fmt_number(dual.gap),
    }


def measure_csv(mu: DiscreteMeasure) -> str:
    return "x,w\n" + "".join(f"{fmt_number(x)},{fmt_number(w)}\n" for x, w in mu)


def write_json(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
