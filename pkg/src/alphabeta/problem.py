"""Problem files: a versioned JSON document describing one analysis.

Example::

    {
      "spec_version": 1,
      "algebra": "heisenberg3",
      "gram": "identity",
      "x": [0, 0, 0.5],
      "phi": {"kind": "randers"},
      "tasks": ["all"],
      "seed": 0
    }

A custom algebra is ``{"dim": n, "brackets": [[i, j, [c_1, ..., c_n]], ...]}``
with 1-based indices meaning ``[e_i, e_j] = sum_k c_k e_k``. A series
profile is ``{"kind": "series", "coeffs": [a0, a1, ...], "b0": r}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import AlphaBetaError, LieAlgebraError, SpecError
from .lie import CATALOG, InnerProduct, LieAlgebraSpec, catalog_algebra, jacobi_tolerance
from .phi import KINDS, PhiFunction, make_phi

SPEC_VERSION = 1
TASKS = ("validate", "regularity", "norms", "convexity", "symmetry",
         "invariance", "scaling", "lift")

DEFAULT_TOLERANCES = {
    "leibniz": 1e-9,
    "isometry": 1e-8,
    "witness_gap": 1e-6,
    "homomorphism": 1e-9,
    "commutation": 1e-9,
    "field_invariance": 1e-6,
    "homogeneity": 1e-10,
    "convexity_floor": 1e-8,
    "span": 1e-10,
}
# for these a smaller value is the looser setting
_SMALLER_IS_LOOSER = {"witness_gap", "convexity_floor"}

_TOP_KEYS = {"spec_version", "algebra", "gram", "x", "phi", "tasks", "seed",
             "tolerances", "allow_inadmissible"}
_REQUIRED = {"spec_version", "algebra", "x", "phi"}


@dataclass(eq=False)
class ProblemSpec:
    algebra: LieAlgebraSpec
    catalog_name: Optional[str]
    ip: InnerProduct
    x: np.ndarray
    phi: PhiFunction
    tasks: tuple
    seed: int
    tolerances: dict
    allow_inadmissible: bool
    echo: dict = field(default_factory=dict)

    def with_seed(self, seed: int) -> "ProblemSpec":
        echo = dict(self.echo, seed=int(seed))
        return ProblemSpec(self.algebra, self.catalog_name, self.ip, self.x, self.phi,
                           self.tasks, int(seed), self.tolerances,
                           self.allow_inadmissible, echo)

    def loosened(self) -> list:
        """Tolerance keys overridden to a looser value than the default."""
        out = []
        for k, v in sorted(self.tolerances.items()):
            d = DEFAULT_TOLERANCES[k]
            if (v < d) if k in _SMALLER_IS_LOOSER else (v > d):
                out.append(k)
        return out


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


class _Collector:
    def __init__(self):
        self.errors = []

    def add(self, path, reason):
        self.errors.append((path, reason))


def _parse_algebra(raw, err):
    if isinstance(raw, str):
        if raw not in CATALOG:
            err.add("algebra", f"unknown catalog algebra {raw!r} (known: {', '.join(sorted(CATALOG))})")
            return None, None
        return catalog_algebra(raw), raw
    if not isinstance(raw, dict):
        err.add("algebra", "must be a catalog name or an object with 'dim' and 'brackets'")
        return None, None
    extra = set(raw) - {"dim", "brackets", "name"}
    for k in sorted(extra):
        err.add(f"algebra.{k}", "unknown key")
    n = raw.get("dim")
    if not (isinstance(n, int) and not isinstance(n, bool) and n >= 1):
        err.add("algebra.dim", "must be a positive integer")
        return None, None
    brackets = raw.get("brackets", [])
    if not isinstance(brackets, list):
        err.add("algebra.brackets", "must be a list of [i, j, vector] triples")
        return None, None
    C = np.zeros((n, n, n))
    seen = set()
    ok = True
    for idx, item in enumerate(brackets):
        path = f"algebra.brackets[{idx}]"
        if not (isinstance(item, list) and len(item) == 3):
            err.add(path, "must be [i, j, vector]")
            ok = False
            continue
        i, j, vec = item
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (i, j)):
            err.add(path, "indices must be integers")
            ok = False
            continue
        if not (1 <= i <= n and 1 <= j <= n):
            err.add(path, f"index out of range: ({i}, {j}) with dim {n} (indices are 1-based)")
            ok = False
            continue
        if i == j:
            err.add(path, f"[e{i}, e{i}] must vanish; diagonal brackets are not allowed")
            ok = False
            continue
        if not (isinstance(vec, list) and len(vec) == n and all(_is_number(v) for v in vec)):
            err.add(path, f"vector must be a list of {n} finite numbers")
            ok = False
            continue
        key = (min(i, j), max(i, j))
        if key in seen:
            err.add(path, f"bracket [e{key[0]}, e{key[1]}] given twice")
            ok = False
            continue
        seen.add(key)
        a, b = i - 1, j - 1
        if a < b:
            C[:, a, b] = vec
        else:
            C[:, b, a] = -np.asarray(vec, dtype=float)
    if not ok:
        return None, None
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        err.add("algebra.name", "must be a string")
    try:
        return LieAlgebraSpec(C, name=name if isinstance(name, str) else None), None
    except LieAlgebraError as exc:
        err.add("algebra", f"Jacobi identity fails: residual {exc.residual:.3e} "
                           f"exceeds {jacobi_tolerance(C):.3e}")
        err.validation = True
        return None, None


def _parse_gram(raw, n, err):
    if raw == "identity":
        return InnerProduct.identity(n)
    if not (isinstance(raw, list) and len(raw) == n
            and all(isinstance(r, list) and len(r) == n for r in raw)):
        err.add("gram", f"must be \"identity\" or a {n}x{n} list of lists")
        return None
    bad = False
    for i, row in enumerate(raw):
        for j, v in enumerate(row):
            if not _is_number(v):
                err.add(f"gram[{i}][{j}]", "must be a finite number")
                bad = True
    if bad:
        return None
    g = np.array(raw, dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            if g[i, j] != g[j, i]:
                err.add(f"gram[{i}][{j}]", f"not symmetric: {g[i, j]!r} vs gram[{j}][{i}] = {g[j, i]!r}")
                bad = True
    if bad:
        return None
    try:
        return InnerProduct(g)
    except AlphaBetaError as exc:
        err.add("gram", str(exc))
        return None


def _parse_phi(raw, err):
    if not isinstance(raw, dict):
        err.add("phi", "must be an object with a 'kind'")
        return None
    kind = raw.get("kind")
    allowed = {"kind", "coeffs", "b0"} if kind == "series" else {"kind"}
    for k in sorted(set(raw) - allowed):
        err.add(f"phi.{k}", "unknown key" if k not in {"coeffs", "b0"} else "only valid for kind 'series'")
    if kind not in KINDS:
        err.add("phi.kind", f"must be one of {', '.join(KINDS)}")
        return None
    if kind != "series":
        return make_phi(kind)
    coeffs, b0 = raw.get("coeffs"), raw.get("b0")
    good = True
    if not (isinstance(coeffs, list) and coeffs and all(_is_number(c) for c in coeffs)):
        err.add("phi.coeffs", "must be a non-empty list of finite numbers")
        good = False
    if not (_is_number(b0) and b0 > 0):
        err.add("phi.b0", "must be a positive finite number")
        good = False
    return make_phi("series", coeffs, b0) if good else None


def _parse_tasks(raw, err):
    if not (isinstance(raw, list) and raw and all(isinstance(t, str) for t in raw)):
        err.add("tasks", "must be a non-empty list of task names")
        return None
    if "all" in raw:
        return TASKS
    bad = [t for t in raw if t not in TASKS]
    for t in bad:
        err.add("tasks", f"unknown task {t!r}")
    if bad:
        return None
    return tuple(t for t in TASKS if t in raw)


def parse_spec(text: str) -> ProblemSpec:
    """Parse and validate a problem document. Raises ``SpecError`` listing every problem found."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError([("$", f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}")])
    return spec_from_dict(raw)


def spec_from_dict(raw) -> ProblemSpec:
    err = _Collector()
    err.validation = False
    if not isinstance(raw, dict):
        raise SpecError([("$", "top level must be an object")])
    for k in sorted(set(raw) - _TOP_KEYS):
        err.add(k, "unknown key")
    for k in sorted(_REQUIRED - set(raw)):
        err.add(k, "required key missing")
    if "spec_version" in raw and raw["spec_version"] != SPEC_VERSION:
        err.add("spec_version", f"must be {SPEC_VERSION}")
    if err.errors:
        raise SpecError(err.errors)

    alg, cat = _parse_algebra(raw["algebra"], err)
    n = alg.dim if alg is not None else None
    ip = _parse_gram(raw.get("gram", "identity"), n, err) if n else None

    x = raw["x"]
    if not (isinstance(x, list) and all(_is_number(v) for v in x)):
        err.add("x", "must be a list of finite numbers")
        x = None
    elif n is not None and len(x) != n:
        err.add("x", f"must have length {n}, got {len(x)}")
        x = None

    phi = _parse_phi(raw["phi"], err)
    tasks = _parse_tasks(raw.get("tasks", ["all"]), err)

    seed = raw.get("seed", 0)
    if not (isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0):
        err.add("seed", "must be a non-negative integer")

    tols = raw.get("tolerances", {})
    if not isinstance(tols, dict):
        err.add("tolerances", "must be an object")
        tols = {}
    for k, v in tols.items():
        if k not in DEFAULT_TOLERANCES:
            err.add(f"tolerances.{k}", f"unknown tolerance (known: {', '.join(sorted(DEFAULT_TOLERANCES))})")
        elif not (_is_number(v) and v > 0):
            err.add(f"tolerances.{k}", "must be a positive finite number")

    allow = raw.get("allow_inadmissible", False)
    if not isinstance(allow, bool):
        err.add("allow_inadmissible", "must be true or false")

    if err.errors:
        raise SpecError(err.errors, validation=err.validation)

    echo = {
        "spec_version": SPEC_VERSION,
        "algebra": raw["algebra"],
        "gram": raw.get("gram", "identity"),
        "x": [float(v) for v in x],
        "phi": raw["phi"],
        "tasks": list(tasks),
        "seed": seed,
        "tolerances": {k: float(v) for k, v in sorted(tols.items())},
        "allow_inadmissible": allow,
    }
    return ProblemSpec(alg, cat, ip, np.array(x, dtype=float), phi, tasks, seed,
                       {k: float(v) for k, v in tols.items()}, allow, echo)


EXAMPLES = {
    "heisenberg3-randers": {
        "spec_version": 1, "algebra": "heisenberg3", "gram": "identity",
        "x": [0, 0, 0.5], "phi": {"kind": "randers"}, "tasks": ["all"], "seed": 0},
    "heisenberg3-matsumoto": {
        "spec_version": 1, "algebra": "heisenberg3", "gram": "identity",
        "x": [0, 0, 0.4], "phi": {"kind": "matsumoto"}, "tasks": ["all"], "seed": 0},
    "heisenberg3-kropina": {
        "spec_version": 1, "algebra": "heisenberg3", "gram": "identity",
        "x": [0, 0, 1], "phi": {"kind": "kropina"}, "tasks": ["all"], "seed": 0},
    "abelian3-randers": {
        "spec_version": 1, "algebra": "abelian3", "gram": "identity",
        "x": [0, 0, 0.5], "phi": {"kind": "randers"}, "tasks": ["all"], "seed": 0},
    "so3-matsumoto": {
        "spec_version": 1, "algebra": "so3", "gram": "identity",
        "x": [0, 0, 0.4], "phi": {"kind": "matsumoto"}, "tasks": ["all"], "seed": 0},
    "aff1-randers": {
        "spec_version": 1, "algebra": "aff1", "gram": [[1, 0], [0, 2]],
        "x": [0.3, 0], "phi": {"kind": "randers"}, "tasks": ["all"], "seed": 0},
    "custom-series": {
        "spec_version": 1,
        "algebra": {"name": "heisenberg3 (explicit)", "dim": 3, "brackets": [[1, 2, [0, 0, 1]]]},
        "gram": [[2, 0, 0], [0, 2, 0], [0, 0, 1]],
        "x": [0, 0, 0.6],
        "phi": {"kind": "series", "coeffs": [1, 0.5, 0.1], "b0": 0.9},
        "tasks": ["all"], "seed": 0},
    "abelian3-randers-inadmissible": {
        "spec_version": 1, "algebra": "abelian3", "gram": "identity",
        "x": [0, 0, 1.2], "phi": {"kind": "randers"},
        "tasks": ["validate", "convexity"], "seed": 0, "allow_inadmissible": True},
}


def example_text(name: str) -> str:
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; run list-examples")
    return json.dumps(EXAMPLES[name], indent=2) + "\n"
