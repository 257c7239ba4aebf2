"""JSON encoding of spaces, events, simple functions and passports.

Every decoder takes a ``path`` naming where the value sits in the document,
so a :class:`SchemaError` points at the offending field. Documents may carry
a top-level ``"schema"`` tag; encoders always write one.
"""

from __future__ import annotations

import math

from .errors import SchemaError
from .logspace import DSLSeries, ExpM1, SimpleFunction
from .measure import ComponentRamp, Event, HomogeneousComponent, MeasureSpace
from .numeric import close, jsonable, number_from_json, to_float
from .passport import Passport
from .sequences import EMPTY, FiniteList, sequence_from_json

SCHEMAS = {
    "space": "logiso.space/1",
    "event": "logiso.event/1",
    "function": "logiso.function/1",
    "passport": "logiso.passport/1",
    "pairing": "logiso.pairing/1",
}


def _object(obj, path: str, kind: str, allowed: set[str]) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(f"{kind} must be a JSON object", path)
    tag = obj.get("schema", SCHEMAS[kind])
    if tag != SCHEMAS[kind]:
        raise SchemaError(f"expected schema {SCHEMAS[kind]!r}, got {tag!r}", f"{path}.schema")
    unknown = sorted(set(obj) - allowed - {"schema"})
    if unknown:
        raise SchemaError(f"unknown field {unknown[0]!r}", path)
    return obj


def _int(obj, path: str, minimum: int) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int) or obj < minimum:
        raise SchemaError(f"expected an integer >= {minimum}, got {obj!r}", path)
    return obj


def _atoms_from_json(obj, path: str, rational: bool):
    if obj is None or obj == []:
        return EMPTY
    return sequence_from_json(obj, path, rational=rational)


# ---------------------------------------------------------------------------
# spaces


def space_from_json(obj, path: str = "$", *, rational: bool = False) -> MeasureSpace:
    obj = _object(obj, path, "space", {"atoms", "components", "total_mass"})
    atoms = _atoms_from_json(obj.get("atoms"), f"{path}.atoms", rational)
    raw = obj.get("components", [])
    cpath = f"{path}.components"
    try:
        if isinstance(raw, dict):
            if set(raw) != {"tau_base", "mass_dsl"}:
                raise SchemaError("component ramp needs exactly 'tau_base' and 'mass_dsl'", cpath)
            masses = sequence_from_json(raw["mass_dsl"], f"{cpath}.mass_dsl", rational=rational)
            comps = ComponentRamp(_int(raw["tau_base"], f"{cpath}.tau_base", -1), masses)
        elif isinstance(raw, list):
            comps = tuple(_component_from_json(c, f"{cpath}[{i}]", rational) for i, c in enumerate(raw))
        else:
            raise SchemaError("components must be a list or a tau ramp", cpath)
        space = MeasureSpace(atoms, comps)
    except SchemaError as exc:
        if exc.path == "$" and path != "$":
            raise SchemaError(exc.reason, path) from None
        raise
    if "total_mass" in obj:
        _check_total(space, obj["total_mass"], f"{path}.total_mass", rational)
    return space


def _component_from_json(obj, path: str, rational: bool) -> HomogeneousComponent:
    if not isinstance(obj, dict) or set(obj) != {"id", "tau", "mass"}:
        raise SchemaError("component needs exactly 'id', 'tau' and 'mass'", path)
    if not isinstance(obj["id"], (str, int)) or isinstance(obj["id"], bool):
        raise SchemaError("component id must be a string", f"{path}.id")
    mass = number_from_json(obj["mass"], f"{path}.mass", rational=rational)
    if not mass > 0:
        raise SchemaError("mass must be positive", f"{path}.mass")
    return HomogeneousComponent(str(obj["id"]), _int(obj["tau"], f"{path}.tau", 0), mass)


def _check_total(space: MeasureSpace, declared, path: str, rational: bool) -> None:
    actual = space.total_mass
    if declared == "infinite":
        if actual != math.inf:
            raise SchemaError(f"declared infinite but the masses sum to {to_float(actual)}", path)
        return
    value = number_from_json(declared, path, rational=rational)
    if actual == math.inf or not close(actual, value):
        raise SchemaError(f"declared {to_float(value)} but the masses sum to {to_float(actual)}", path)


def space_to_json(space: MeasureSpace) -> dict:
    if space.is_ramp:
        comps = {"tau_base": space.components.tau_base, "mass_dsl": space.components.masses.to_json()}
    else:
        comps = [{"id": c.id, "tau": c.tau, "mass": jsonable(c.mass)} for c in space.components]
    return {
        "schema": SCHEMAS["space"],
        "atoms": space.atoms.to_json() if space.atoms.length != 0 else [],
        "components": comps,
        "total_mass": jsonable(space.total_mass),
    }


# ---------------------------------------------------------------------------
# events


def event_from_json(obj, path: str = "$", *, rational: bool = False) -> Event:
    obj = _object(obj, path, "event", {"atoms", "components"})
    atoms = obj.get("atoms", [])
    if not isinstance(atoms, list):
        raise SchemaError("atoms must be a list of indices", f"{path}.atoms")
    indices = [_int(a, f"{path}.atoms[{i}]", 1) for i, a in enumerate(atoms)]
    comps = obj.get("components", {})
    if not isinstance(comps, dict):
        raise SchemaError("components must map ids to interval lists", f"{path}.components")
    pieces = {}
    for cid, ivs in comps.items():
        where = f"{path}.components.{cid}"
        if ivs == "all":
            pieces[cid] = "all"
            continue
        if not isinstance(ivs, list):
            raise SchemaError("expected \"all\" or a list of [lo, hi] pairs", where)
        out = []
        for k, iv in enumerate(ivs):
            if not isinstance(iv, list) or len(iv) != 2:
                raise SchemaError("interval must be [lo, hi]", f"{where}[{k}]")
            lo = number_from_json(iv[0], f"{where}[{k}][0]", rational=rational)
            hi = number_from_json(iv[1], f"{where}[{k}][1]", rational=rational)
            if not 0 <= lo < hi <= 1:
                raise SchemaError("interval must satisfy 0 <= lo < hi <= 1", f"{where}[{k}]")
            out.append((lo, hi))
        pieces[cid] = out
    return Event.make(indices, pieces)


def event_to_json(e: Event) -> dict:
    return {
        "atoms": sorted(e.atoms),
        "components": {cid: [[jsonable(lo), jsonable(hi)] for lo, hi in ivs] for cid, ivs in e.components},
    }


# ---------------------------------------------------------------------------
# simple functions


def _coef_from_json(obj: dict, path: str, rational: bool):
    if "exp_minus_one" in obj:
        if set(obj) - {"cell", "exp_minus_one"}:
            raise SchemaError("'exp_minus_one' excludes 're' and 'im'", path)
        return ExpM1(number_from_json(obj["exp_minus_one"], f"{path}.exp_minus_one", rational=rational))
    if "re" not in obj:
        raise SchemaError("coefficient needs 're' (and optionally 'im')", path)
    re = number_from_json(obj["re"], f"{path}.re", rational=rational)
    im = number_from_json(obj.get("im", 0), f"{path}.im", rational=rational)
    if im == 0:
        return re
    return complex(to_float(re), to_float(im))


def function_from_json(obj, path: str = "$", *, rational: bool = False) -> SimpleFunction:
    """A list of ``{"cell", "re", "im"}`` or ``{"dsl_support": <sequence>}``."""
    if isinstance(obj, dict) and "cells" in obj:
        obj = _object(obj, path, "function", {"cells"})
        return function_from_json(obj["cells"], f"{path}.cells", rational=rational)
    if isinstance(obj, dict):
        obj = _object(obj, path, "function", {"dsl_support"})
        if "dsl_support" not in obj:
            raise SchemaError("function object needs 'cells' or 'dsl_support'", path)
        seq = sequence_from_json(obj["dsl_support"], f"{path}.dsl_support", rational=rational)
        if seq.is_finite:
            cells = [(Event.atom(n), seq.term(n)) for n in range(1, seq.length + 1)]
            return SimpleFunction.from_cells(cells)
        return SimpleFunction.from_series(DSLSeries(seq))
    if not isinstance(obj, list):
        raise SchemaError("function must be a list of cells", path)
    cells = []
    for i, item in enumerate(obj):
        where = f"{path}[{i}]"
        if not isinstance(item, dict) or "cell" not in item:
            raise SchemaError("each entry needs a 'cell'", where)
        unknown = sorted(set(item) - {"cell", "re", "im", "exp_minus_one"})
        if unknown:
            raise SchemaError(f"unknown field {unknown[0]!r}", where)
        cells.append((event_from_json(item["cell"], f"{where}.cell", rational=rational), _coef_from_json(item, where, rational)))
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if not cells[i][0].disjoint(cells[j][0]):
                raise SchemaError(f"cell overlaps cell {i}", f"{path}[{j}].cell")
    return SimpleFunction.from_cells(cells)


def _coef_to_json(c) -> dict:
    if isinstance(c, ExpM1):
        return {"exp_minus_one": jsonable(c.exponent)}
    if isinstance(c, complex):
        return {"re": c.real, "im": c.imag}
    return {"re": jsonable(c)}


def function_to_json(f: SimpleFunction):
    if f.series is not None:
        if isinstance(f.series, DSLSeries):
            return {"schema": SCHEMAS["function"], "dsl_support": f.series.coefficients.to_json()}
        raise TypeError("only DSL-supported series have a JSON form")
    cells = [dict(_coef_to_json(c), cell=event_to_json(e)) for e, c in f.pieces()]
    return {"schema": SCHEMAS["function"], "cells": cells}


# ---------------------------------------------------------------------------
# passports


def passport_from_json(obj, path: str = "$", *, rational: bool = False) -> Passport:
    obj = _object(obj, path, "passport", {"rows", "atoms"})
    if "rows" not in obj:
        raise SchemaError("passport needs 'rows'", path)
    atoms = _atoms_from_json(obj.get("atoms"), f"{path}.atoms", rational)
    rows = obj["rows"]
    rpath = f"{path}.rows"
    if isinstance(rows, dict):
        if set(rows) != {"tau_base", "mass_dsl"}:
            raise SchemaError("tau ramp needs exactly 'tau_base' and 'mass_dsl'", rpath)
        masses = sequence_from_json(rows["mass_dsl"], f"{rpath}.mass_dsl", rational=rational)
        if masses.is_finite:
            raise SchemaError("a tau ramp needs an infinite mass sequence", f"{rpath}.mass_dsl")
        return Passport(masses, atoms, None, _int(rows["tau_base"], f"{rpath}.tau_base", -1))
    if not isinstance(rows, list):
        raise SchemaError("rows must be a list or a tau ramp", rpath)
    taus, masses = [], []
    for i, row in enumerate(rows):
        where = f"{rpath}[{i}]"
        if not isinstance(row, dict) or set(row) != {"tau", "mass"}:
            raise SchemaError("row needs exactly 'tau' and 'mass'", where)
        tau = _int(row["tau"], f"{where}.tau", 0)
        if taus and tau <= taus[-1]:
            raise SchemaError("tau strictly increasing violated", f"{where}.tau")
        mass = number_from_json(row["mass"], f"{where}.mass", rational=rational)
        if not mass > 0:
            raise SchemaError("mass must be positive", f"{where}.mass")
        taus.append(tau)
        masses.append(mass)
    seq = FiniteList(tuple(masses)) if masses else EMPTY
    return Passport(seq, atoms, tuple(taus))


def passport_to_json(p: Passport) -> dict:
    if p.is_ramp:
        rows = {"tau_base": p.tau_base, "mass_dsl": p.masses.to_json()}
    else:
        rows = [{"tau": t, "mass": jsonable(m)} for t, m in p.rows]
    return {
        "schema": SCHEMAS["passport"],
        "rows": rows,
        "atoms": p.atoms.to_json() if p.atoms.length != 0 else [],
    }
