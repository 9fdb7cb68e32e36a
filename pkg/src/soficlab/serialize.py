"""JSON schemas for every value the tool reads or writes.

Rationals travel as "p/q" strings in lowest terms with positive denominator.
Output is written atomically (temp file then rename) with sorted keys, so a
fixed invocation produces byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from .groupoid import Arrow, Component, FiniteGroupoid, RawGroupoid, make_groupoid
from .rationals import format_fraction, parse_fraction
from .semigroup import Bisection
from .symmetric import DistortionReport, PartialInjection
from .verify import AlmostMorphismReport, EmbeddingReport, SuiteResult


def jsonable(value):
    """Recursively coerce library values into plain JSON data."""
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, Bisection):
        return bisection_to_json(value)
    if isinstance(value, PartialInjection):
        return pin_to_json(value)
    if isinstance(value, Arrow):
        return list(value)
    if isinstance(value, frozenset):
        return [jsonable(v) for v in sorted(value)]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if value is None or isinstance(value, (bool, int, str)):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__}")


# ---------------------------------------------------------------------------
# Groupoids


def groupoid_to_json(g: FiniteGroupoid) -> dict:
    return {
        "components": [
            {
                "group_table": [list(row) for row in c.table],
                "base_size": c.base_size,
                "weight": format_fraction(c.weight),
            }
            for c in g.components
        ]
    }


def parse_groupoid(obj: dict) -> FiniteGroupoid:
    comps = obj.get("components")
    if not isinstance(comps, list) or not comps:
        raise ValueError("groupoid file needs a nonempty components list")
    return make_groupoid(
        Component(
            tuple(tuple(row) for row in c["group_table"]),
            int(c["base_size"]),
            parse_fraction(c["weight"]),
        )
        for c in comps
    )


def _parse_id(x):
    return x if isinstance(x, (int, str)) else str(x)


def raw_to_json(raw: RawGroupoid) -> dict:
    out = {
        "units": list(raw.units),
        "arrows": [list(e) for e in raw.arrows],
        "compose": [[a, b, c] for (a, b), c in sorted(raw.compose.items(), key=repr)],
    }
    if raw.masses is not None:
        out["masses"] = {
            str(u): format_fraction(Fraction(w)) for u, w in raw.masses.items()
        }
    return out


def parse_raw(obj: dict) -> RawGroupoid:
    units = tuple(_parse_id(u) for u in obj["units"])
    arrows = tuple(
        (_parse_id(e[0]), _parse_id(e[1]), _parse_id(e[2])) for e in obj["arrows"]
    )
    compose = {
        (_parse_id(e[0]), _parse_id(e[1])): _parse_id(e[2]) for e in obj["compose"]
    }
    masses = None
    if "masses" in obj:
        by_name = {str(u): u for u in units}
        masses = {}
        for key, w in obj["masses"].items():
            if key not in by_name:
                raise ValueError(f"mass given for unknown unit {key!r}")
            masses[by_name[key]] = parse_fraction(w)
    return RawGroupoid(units, arrows, compose, masses)


def parse_masses(obj: dict, units) -> dict:
    by_name = {str(u): u for u in units}
    out = {}
    for key, w in obj.items():
        if key not in by_name:
            raise ValueError(f"mass given for unknown unit {key!r}")
        out[by_name[key]] = parse_fraction(w)
    return out


# ---------------------------------------------------------------------------
# Semigroup elements


def bisection_to_json(b: Bisection) -> dict:
    return {"arrows": [list(a) for a in b.arrows]}


def parse_bisection(g: FiniteGroupoid, obj: dict) -> Bisection:
    return Bisection(g, tuple(Arrow(*map(int, a)) for a in obj["arrows"]))


def parse_arrow_set(obj: dict) -> frozenset:
    return frozenset(Arrow(*map(int, a)) for a in obj["arrows"])


def arrow_set_to_json(arrows) -> dict:
    return {"arrows": [list(a) for a in sorted(arrows)]}


def malg_to_json(units) -> dict:
    return {"units": [list(u) for u in sorted(units)]}


def parse_malg(obj: dict) -> frozenset:
    return frozenset((int(c), int(y)) for c, y in obj["units"])


def pin_to_json(p: PartialInjection) -> dict:
    return {"n": p.n, "map": {str(x): y for x, y in sorted(p.as_dict().items())}}


def parse_pin(obj: dict) -> PartialInjection:
    return PartialInjection.from_dict(int(obj["n"]), obj["map"])


# ---------------------------------------------------------------------------
# Reports


def almost_report_to_json(r: AlmostMorphismReport) -> dict:
    return {
        "K_size": r.k_size,
        "epsilon": format_fraction(r.epsilon),
        "max_product_deviation": format_fraction(r.max_product_deviation),
        "max_trace_deviation": format_fraction(r.max_trace_deviation),
        "max_distance_deviation": format_fraction(r.max_distance_deviation),
        "pass": r.passed,
        "witnesses": jsonable(r.witnesses),
    }


def embedding_report_to_json(r: EmbeddingReport) -> dict:
    return {
        "label": r.label,
        "element_count": r.element_count,
        "pair_count": r.pair_count,
        "exhaustive": r.exhaustive,
        "max_product_deviation": format_fraction(r.max_product_deviation),
        "max_trace_deviation": format_fraction(r.max_trace_deviation),
        "max_distance_deviation": format_fraction(r.max_distance_deviation),
        "multiplicative": r.multiplicative,
        "trace_preserving": r.trace_preserving,
        "isometric": r.isometric,
        "unit_preserved": r.unit_preserved,
        "injective": r.injective,
        "trace_iso_consistent": r.trace_iso_consistent,
        "pass": r.passed,
        "witnesses": jsonable(r.witnesses),
    }


def distortion_report_to_json(r: DistortionReport) -> dict:
    return {
        "n": r.n,
        "p": r.p,
        "bound": None if r.bound is None else format_fraction(r.bound),
        "observed_sup": format_fraction(r.observed_sup),
        "trace_sup": format_fraction(r.trace_sup),
        "pairs_tested": r.pairs_tested,
        "exhaustive": r.exhaustive,
        "seed": r.seed,
    }


def suite_result_to_json(r: SuiteResult) -> dict:
    return {
        "suite": r.name,
        "params": jsonable(r.params),
        "seed": r.budget.seed,
        "budget": {
            "exhaustive_cap": r.budget.exhaustive_cap,
            "sample_count": r.budget.sample_count,
        },
        "pass": r.passed,
        "checks": [
            {"name": c.name, "pass": c.passed, "details": jsonable(c.details)}
            for c in r.checks
        ],
    }


# ---------------------------------------------------------------------------
# Files


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_json_atomic(obj, path: str) -> None:
    text = dumps(obj)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
