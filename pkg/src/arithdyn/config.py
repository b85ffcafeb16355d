"""Experiment configuration files.

One TOML file describes one experiment::

    name = "henon"
    suite = "main"            # main | morphism | picard_one | power | canheight | seqlem
    iterations = 20
    epsilon = 0.1             # required by suite = "main"
    k = 1
    points = [[0, 0, 1], [2, 3, 1]]

    [ambient]
    projective_dim = 2        # or torus_dim = N

    [map]
    variables = ["X", "Y", "Z"]
    polynomials = ["Y*Z", "Y^2 - X*Z - Z^2", "Z^2"]
    # exponent_matrix = [[1, 1], [1, 0]]    (torus only)
    # pullback_matrix = [[2]]               (optional user-supplied f^*)
    # morphism = true                       (asserted, for suite = "morphism")

    [budgets]
    term_cap = 200000
    height_cap_nats = 2.0e6

    [seqlem]
    trials = 1000
    n_max = 1000
    seed = 0
    constant = "stated"       # or "repaired"

Point coordinates may be integers or strings ``"a/b"``.  Unknown keys are
rejected so that a typo cannot silently change an experiment.
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .degrees import MonomialMap
from .errors import ArithDynError, PolySyntaxError, SchemaError
from .orbits import AnyPoint, torus_point
from .poly import DEFAULT_TERM_CAP, parse_poly
from .projmap import DEFAULT_HEIGHT_CAP, DEFAULT_VAR_NAMES, RationalMap, normalize_point

SUITES = ("main", "morphism", "picard_one", "power", "canheight", "seqlem")

_TOP_KEYS = {
    "name", "description", "suite", "iterations", "epsilon", "k", "degree_terms",
    "tolerance", "points", "ambient", "map", "budgets", "seqlem",
}
_MAP_KEYS = {"variables", "polynomials", "exponent_matrix", "pullback_matrix", "morphism", "stable"}


@dataclass(frozen=True)
class SeqlemSettings:
    trials: int = 1000
    n_max: int = 1000
    seed: int = 0
    constant: str = "stated"


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    suite: str
    ambient: str  # "projective" or "torus"
    dim: int
    map: RationalMap | MonomialMap | None
    points: tuple[AnyPoint, ...]
    iterations: int = 20
    epsilon: float | None = None
    k: int = 1
    degree_terms: int = 6
    tolerance: float = 0.1
    pullback_matrix: tuple[tuple[int, ...], ...] | None = None
    assert_morphism: bool = False
    assert_stable: bool = False
    term_cap: int = DEFAULT_TERM_CAP
    height_cap: float = DEFAULT_HEIGHT_CAP
    seqlem: SeqlemSettings = field(default_factory=SeqlemSettings)
    source: Mapping[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


def _int(v, path, minimum=None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(path, f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise SchemaError(path, f"must be at least {minimum}, got {v}")
    return v


def _float(v, path, positive=False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(path, f"expected a number, got {v!r}")
    if positive and not v > 0:
        raise SchemaError(path, f"must be positive, got {v}")
    return float(v)


def _bool(v, path) -> bool:
    if not isinstance(v, bool):
        raise SchemaError(path, f"expected true or false, got {v!r}")
    return v


def _table(v, path) -> Mapping[str, Any]:
    if not isinstance(v, Mapping):
        raise SchemaError(path, "expected a table")
    return v


def _check_keys(d: Mapping, allowed: set, prefix: str) -> None:
    for key in d:
        if key not in allowed:
            raise SchemaError(f"{prefix}{key}", "unknown key")


def _int_matrix(v, path) -> tuple[tuple[int, ...], ...]:
    if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
        raise SchemaError(path, "expected a nonempty array of arrays")
    rows = tuple(
        tuple(_int(x, f"{path}[{i}][{j}]") for j, x in enumerate(r)) for i, r in enumerate(v)
    )
    if any(len(r) != len(rows) for r in rows):
        raise SchemaError(path, "matrix must be square")
    return rows


def _parse_map(m: Mapping, ambient: str, dim: int):
    _check_keys(m, _MAP_KEYS, "map.")
    pullback = _int_matrix(m["pullback_matrix"], "map.pullback_matrix") if "pullback_matrix" in m else None
    f = None
    if "polynomials" in m and "exponent_matrix" in m:
        raise SchemaError("map", "give either polynomials or exponent_matrix, not both")
    if "polynomials" in m:
        if ambient != "projective":
            raise SchemaError("map.polynomials", "polynomial maps need a projective ambient")
        polys = m["polynomials"]
        if not isinstance(polys, list) or not all(isinstance(p, str) for p in polys):
            raise SchemaError("map.polynomials", "expected an array of strings")
        if len(polys) != dim + 1:
            raise SchemaError("map.polynomials", f"P^{dim} needs {dim + 1} polynomials, got {len(polys)}")
        names = m.get("variables", list(DEFAULT_VAR_NAMES.get(dim, [f"x{i}" for i in range(dim + 1)])))
        if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
            raise SchemaError("map.variables", "expected an array of strings")
        if len(names) != dim + 1 or len(set(names)) != len(names):
            raise SchemaError("map.variables", f"need {dim + 1} distinct variable names")
        for i, src in enumerate(polys):
            try:
                parse_poly(src, names)
            except PolySyntaxError as e:
                raise type(e)(f"map.polynomials[{i}]: {e.args[0]}", e.pos, src) from None
        f = RationalMap.from_strings(polys, names)
    elif "exponent_matrix" in m:
        if ambient != "torus":
            raise SchemaError("map.exponent_matrix", "monomial maps need a torus ambient")
        A = _int_matrix(m["exponent_matrix"], "map.exponent_matrix")
        if len(A) != dim:
            raise SchemaError("map.exponent_matrix", f"torus of dimension {dim} needs a {dim}x{dim} matrix")
        f = MonomialMap(A)
    elif pullback is None:
        raise SchemaError("map", "needs polynomials, exponent_matrix or pullback_matrix")
    morphism = _bool(m.get("morphism", False), "map.morphism")
    stable = _bool(m.get("stable", False), "map.stable")
    return f, pullback, morphism, stable


def _parse_points(v, ambient: str, dim: int) -> tuple[AnyPoint, ...]:
    if not isinstance(v, list):
        raise SchemaError("points", "expected an array of coordinate arrays")
    width = dim + 1 if ambient == "projective" else dim
    out = []
    for i, raw in enumerate(v):
        path = f"points[{i}]"
        if not isinstance(raw, list) or len(raw) != width:
            raise SchemaError(path, f"expected {width} coordinates")
        for j, x in enumerate(raw):
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise SchemaError(f"{path}[{j}]", "coordinates are integers or \"a/b\" strings")
        try:
            out.append(normalize_point(raw) if ambient == "projective" else torus_point(raw))
        except (ArithDynError, ValueError, ZeroDivisionError) as e:
            raise SchemaError(path, str(e)) from None
    return tuple(out)


def config_from_dict(d: Mapping[str, Any], default_name: str = "experiment") -> ExperimentConfig:
    """Validate a parsed configuration; errors name the offending field."""
    _table(d, "<root>")
    _check_keys(d, _TOP_KEYS, "")
    suite = d.get("suite", "main")
    if suite not in SUITES:
        raise SchemaError("suite", f"unknown suite {suite!r}, expected one of {', '.join(SUITES)}")
    name = d.get("name", default_name)
    if not isinstance(name, str) or not name:
        raise SchemaError("name", "expected a nonempty string")

    kw: dict[str, Any] = {}
    if "iterations" in d:
        kw["iterations"] = _int(d["iterations"], "iterations", 1)
    if "k" in d:
        kw["k"] = _int(d["k"], "k", 1)
    if "degree_terms" in d:
        kw["degree_terms"] = _int(d["degree_terms"], "degree_terms", 1)
    if "tolerance" in d:
        kw["tolerance"] = _float(d["tolerance"], "tolerance", positive=True)
    if "epsilon" in d:
        kw["epsilon"] = _float(d["epsilon"], "epsilon", positive=True)
    elif suite == "main":
        raise SchemaError("epsilon", "required when suite = \"main\"")

    budgets = _table(d.get("budgets", {}), "budgets")
    _check_keys(budgets, {"term_cap", "height_cap_nats"}, "budgets.")
    if "term_cap" in budgets:
        kw["term_cap"] = _int(budgets["term_cap"], "budgets.term_cap", 1)
    if "height_cap_nats" in budgets:
        kw["height_cap"] = _float(budgets["height_cap_nats"], "budgets.height_cap_nats", positive=True)

    sl = _table(d.get("seqlem", {}), "seqlem")
    _check_keys(sl, {"trials", "n_max", "seed", "constant"}, "seqlem.")
    const = sl.get("constant", "stated")
    if const not in ("stated", "repaired"):
        raise SchemaError("seqlem.constant", "expected \"stated\" or \"repaired\"")
    kw["seqlem"] = SeqlemSettings(
        trials=_int(sl.get("trials", 1000), "seqlem.trials", 1),
        n_max=_int(sl.get("n_max", 1000), "seqlem.n_max", 1),
        seed=_int(sl.get("seed", 0), "seqlem.seed", 0),
        constant=const,
    )

    if suite == "seqlem" and "ambient" not in d:
        return ExperimentConfig(name, suite, "none", 0, None, (), source=d, **kw)

    if "ambient" not in d:
        raise SchemaError("ambient", "required")
    amb = _table(d["ambient"], "ambient")
    _check_keys(amb, {"projective_dim", "torus_dim"}, "ambient.")
    if ("projective_dim" in amb) == ("torus_dim" in amb):
        raise SchemaError("ambient", "give exactly one of projective_dim, torus_dim")
    ambient = "projective" if "projective_dim" in amb else "torus"
    dim = _int(amb.get("projective_dim", amb.get("torus_dim")), f"ambient.{ambient}_dim", 1)

    if "map" not in d:
        raise SchemaError("map", "required")
    f, pullback, morphism, stable = _parse_map(_table(d["map"], "map"), ambient, dim)
    points = _parse_points(d.get("points", []), ambient, dim)
    if f is not None and not points:
        raise SchemaError("points", "at least one point is required")
    return ExperimentConfig(
        name, suite, ambient, dim, f, points,
        pullback_matrix=pullback, assert_morphism=morphism, assert_stable=stable,
        source=d, **kw,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise SchemaError("<file>", f"{path}: {e}") from None
    return config_from_dict(data, default_name=path.stem)
