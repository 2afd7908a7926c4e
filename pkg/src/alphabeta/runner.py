"""Run the analyses requested by a ProblemSpec and collect a Report."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import AlphaBetaError, InadmissibleError
from .finsler import (FinslerStructure, fundamental_tensor, homogeneity_check,
                      minkowski_norms)
from .groups import catalog_model
from .lie import validate_jacobi, jacobi_tolerance
from .linalg import span_residual
from .phi import (INJECTIVITY_SAMPLES, derivative_consistency, injectivity_check,
                  max_admissible_b, positivity_check, regularity_margin)
from .problem import DEFAULT_TOLERANCES, TASKS, ProblemSpec
from .symmetry import (admissibility_scaling, commutation_check, converse_probe,
                       exp_derivation, field_invariance_check, fixes_X, is_automorphism,
                       is_orthogonal, isometry_invariance_check, k_prime, lift_to_group,
                       random_orthogonal)
from .symmetry.invariance import sphere_samples

PASS, FAIL, NA, SKIPPED, ERROR = "pass", "fail", "not_applicable", "skipped", "error"
DEPENDS = {
    "validate": (),
    "regularity": ("validate",),
    "norms": ("validate",),
    "convexity": ("validate",),
    "symmetry": ("validate",),
    "invariance": ("symmetry",),
    "scaling": ("symmetry",),
    "lift": ("symmetry",),
}
FORWARD_TIMES = (0.3, 1.7)
LIFT_TIME = 0.9
CONVERSE_MAPS = 5
CONVERSE_SAMPLES = 1000
NORM_SAMPLES = 100
CONVEXITY_SAMPLES = 100
STENCIL_BAND = 1e-2


@dataclass
class Section:
    task: str
    status: str
    values: dict = field(default_factory=dict)
    message: str = ""
    wall_time: float = None

    def to_dict(self):
        d = {"task": self.task, "status": self.status, "values": self.values,
             "message": self.message}
        if self.wall_time is not None:
            d["wall_time"] = self.wall_time
        return d


@dataclass
class Report:
    spec: dict
    sections: list
    flags: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        ok = all(s.status in (PASS, NA) for s in self.sections)
        return PASS if ok else FAIL

    def to_dict(self):
        return {"spec": self.spec, "flags": self.flags,
                "sections": [s.to_dict() for s in self.sections],
                "verdict": self.verdict}

    @classmethod
    def from_dict(cls, d):
        secs = [Section(s["task"], s["status"], s["values"], s["message"], s.get("wall_time"))
                for s in d["sections"]]
        return cls(d["spec"], secs, d["flags"])

    def to_machine(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _f(v):
    return None if v is None else float(v)


class _Context:
    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.tol = dict(DEFAULT_TOLERANCES, **spec.tolerances)
        self.fs = None
        self.symmetry = None


def _task_validate(ctx):
    spec = ctx.spec
    w = np.linalg.eigvalsh(spec.ip.gram)
    vals = {
        "jacobi_residual": validate_jacobi(spec.algebra),
        "jacobi_tolerance": jacobi_tolerance(spec.algebra.structure),
        "gram_eigenvalues": [float(w[0]), float(w[-1])],
        "phi_regular": spec.phi.regular,
        "override": spec.allow_inadmissible,
    }
    try:
        fs = FinslerStructure.build(spec.algebra, spec.ip, spec.x, spec.phi,
                                    allow_inadmissible=spec.allow_inadmissible)
    except InadmissibleError as exc:
        vals.update(x_norm=exc.norm, bound=exc.bound, admissible=False)
        return FAIL, vals, f"refused: {exc}. Set allow_inadmissible to probe anyway"
    ctx.fs = fs
    vals.update(x_norm=fs.b, bound=_f(fs.bound), admissible=fs.admissible)
    msg = ""
    if not spec.phi.regular:
        msg = f"phi = {spec.phi.kind} is not a regular Finsler profile; results are formal"
    elif not fs.admissible:
        msg = "inadmissible X accepted by override"
    return PASS, vals, msg


def _task_regularity(ctx):
    phi, fs = ctx.spec.phi, ctx.fs
    if not phi.regular:
        return NA, {"regular": False}, f"{phi.kind} metric is not regular; no admissible radius"
    vals = {
        "regular": True,
        "max_admissible_b": max_admissible_b(phi, 1e-6),
        "injective": injectivity_check(phi, INJECTIVITY_SAMPLES),
        "injective_claim": phi.injective,
        "positive": positivity_check(phi),
        "derivative_consistency": derivative_consistency(phi, 100, ctx.spec.seed),
    }
    vals["margin_at_x"] = regularity_margin(phi, fs.b) if fs.b < phi.b0 else None
    ok = (vals["positive"] and vals["derivative_consistency"] <= 1e-6
          and vals["injective"] == phi.injective
          and vals["margin_at_x"] is not None and vals["margin_at_x"] > 0)
    return (PASS if ok else FAIL), vals, "" if ok else "regularity inequality fails at |X|"


def _regular_samples(ctx, samples, seed, band=1e-8):
    """Seeded unit vectors with ``|beta/alpha - p| > band`` for each singular point ``p``."""
    Y = sphere_samples(ctx.spec.algebra.dim, samples, seed)
    if ctx.fs.phi.singular_points:
        gY = Y @ ctx.fs.ip.gram
        s = gY @ ctx.fs.x / np.sqrt(np.einsum("ij,ij->i", gY, Y))
        keep = np.ones(len(Y), dtype=bool)
        for p in ctx.fs.phi.singular_points:
            keep &= np.abs(s - p) > band
        Y = Y[keep]
    return Y


def _task_norms(ctx):
    fs, seed = ctx.fs, ctx.spec.seed
    n = fs.alg.dim
    Y = _regular_samples(ctx, NORM_SAMPLES, seed)
    lam = np.random.default_rng(seed + 1).uniform(0.1, 10.0, len(Y))
    F = minkowski_norms(fs, Y)
    homog = max(homogeneity_check(fs, y, l) for y, l in zip(Y, lam))
    basis = np.eye(n)
    basis_vals = []
    for e in basis:
        try:
            basis_vals.append(float(minkowski_norms(fs, e)[0]))
        except AlphaBetaError:
            basis_vals.append(None)
    vals = {"samples": len(Y), "F_min": float(F.min()), "F_max": float(F.max()),
            "basis_norms": basis_vals, "homogeneity_residual": homog}
    ok = homog <= ctx.tol["homogeneity"]
    if fs.phi.kind == "randers":
        alpha = np.sqrt(np.einsum("ij,jk,ik->i", Y, fs.ip.gram, Y))
        direct = alpha + Y @ fs.ip.gram @ fs.x
        vals["randers_two_path_gap"] = float(np.max(np.abs(direct - F)))
        ok = ok and vals["randers_two_path_gap"] <= 1e-12 * max(1.0, float(np.max(np.abs(F))))
    if fs.admissible:
        ok = ok and bool(F.min() > 0)
    return (PASS if ok else FAIL), vals, ""


def _task_convexity(ctx):
    fs = ctx.fs
    # the difference stencil must stay clear of a singular hyperplane
    Y = _regular_samples(ctx, CONVEXITY_SAMPLES if fs.admissible else 1000, ctx.spec.seed,
                         band=STENCIL_BAND)
    floor = ctx.tol["convexity_floor"]
    worst_ratio, asym, failures, witness = np.inf, 0.0, 0, None
    for y in Y:
        G, a = fundamental_tensor(fs, y, return_asymmetry=True)
        asym = max(asym, a)
        w = np.linalg.eigvalsh(G)
        mean_diag = np.trace(G) / len(G)
        ratio = w[0] / mean_diag if mean_diag > 0 else -np.inf
        worst_ratio = min(worst_ratio, ratio)
        if not ratio > floor:
            failures += 1
            if witness is None:
                witness = [float(v) for v in y]
    vals = {"samples": len(Y), "min_eigen_ratio": _f(worst_ratio) if np.isfinite(worst_ratio) else None,
            "non_pd_count": failures, "non_pd_witness": witness, "max_asymmetry": asym}
    if not fs.phi.regular:
        return NA, vals, "convexity reported only; profile is not regular"
    if fs.admissible:
        ok = failures == 0
        return (PASS if ok else FAIL), vals, "" if ok else "admissible metric failed strong convexity"
    ok = failures > 0
    return (PASS if ok else FAIL), vals, ("non-PD witness found, as expected for an "
                                          "inadmissible field" if ok else
                                          "no convexity failure found for an inadmissible field")


def _task_symmetry(ctx):
    rep = k_prime(ctx.spec.algebra, ctx.spec.ip, ctx.spec.x)
    ctx.symmetry = rep
    d = rep.to_dict()
    checks = dict(rep.checks)
    checks["closure"] = rep.residuals["closure"] <= ctx.tol["leibniz"]
    d["checks"] = checks
    ok = all(checks.values())
    return (PASS if ok else FAIL), d, ""


def _task_invariance(ctx):
    fs, rep, seed = ctx.fs, ctx.symmetry, ctx.spec.seed
    alg, ip, x = fs.alg, fs.ip, fs.x
    forward = []
    ok = True
    for k, D in enumerate(rep.k_prime.mats):
        for t in FORWARD_TIMES:
            A = exp_derivation(alg, D, t)
            hyp = (is_automorphism(alg, A.mat), is_orthogonal(ip, A.mat), fixes_X(A.mat, x))
            dev = isometry_invariance_check(fs, A, 100, seed)
            good = all(hyp) and dev <= ctx.tol["isometry"]
            ok = ok and good
            forward.append({"generator": k, "t": t, "deviation": dev, "pass": good})
    vals = {"forward": forward,
            "forward_max_deviation": max((f["deviation"] for f in forward), default=0.0),
            "onto_claim": "unverified (only elements built from k' are checked)"}
    if fs.phi.injective and np.linalg.norm(x) > 0:
        rng = np.random.default_rng(seed + 2)
        probes = []
        xnorm = float(np.linalg.norm(x))
        for k in range(CONVERSE_MAPS):
            A = random_orthogonal(ip, rng, moving=x, min_shift=0.1 * xnorm)
            res = converse_probe(fs, A, CONVERSE_SAMPLES, seed + 10 + k)
            gap_ok = res.found and res.gap >= ctx.tol["witness_gap"]
            ok = ok and gap_ok
            probes.append({"shift": float(np.linalg.norm(A @ x - x)), "found": res.found,
                           "draws": res.draws, "gap": res.gap})
        vals["converse"] = probes
    else:
        vals["converse"] = None
    return (PASS if ok else FAIL), vals, ""


def _task_scaling(ctx):
    spec, rep = ctx.spec, ctx.symmetry
    if not spec.phi.regular:
        return NA, {}, f"{spec.phi.kind} has no admissibility bound to scale into"
    res = admissibility_scaling(spec.ip, spec.x, spec.phi)
    after = k_prime(spec.algebra, res.ip, spec.x)
    fwd = span_residual(rep.k_prime.mats, after.k_prime.mats)
    back = span_residual(after.k_prime.mats, rep.k_prime.mats)
    scaled_norm = float(np.sqrt(spec.x @ res.ip.gram @ spec.x))
    vals = {"N": res.N, "bound": res.bound, "scaled_x_norm": scaled_norm,
            "dim_k_prime_before": rep.dim_k_prime, "dim_k_prime_after": after.dim_k_prime,
            "span_residual": max(fwd, back)}
    ok = (rep.dim_k_prime == after.dim_k_prime and max(fwd, back) <= ctx.tol["span"]
          and scaled_norm < res.bound)
    return (PASS if ok else FAIL), vals, ""


def _task_lift(ctx):
    spec, rep = ctx.spec, ctx.symmetry
    model = catalog_model(spec.catalog_name) if spec.catalog_name else None
    if model is None or not model.log_available:
        return NA, {}, "no nilpotent matrix model with a logarithm for this algebra"
    lifts = []
    ok = True
    for k, D in enumerate(rep.k_prime.mats):
        A = exp_derivation(spec.algebra, D, LIFT_TIME)
        psi = lift_to_group(model, A, 50, spec.seed)
        comm = commutation_check(model, psi, 50, spec.seed + 1)
        field_res = field_invariance_check(model, psi, spec.x, 50, spec.seed + 2)
        good = (psi.homomorphism_residual <= ctx.tol["homomorphism"]
                and comm <= ctx.tol["commutation"]
                and field_res <= ctx.tol["field_invariance"])
        ok = ok and good
        lifts.append({"generator": k, "t": LIFT_TIME,
                      "homomorphism_residual": psi.homomorphism_residual,
                      "differential_residual": psi.differential_residual,
                      "commutation_residual": comm, "field_invariance_residual": field_res,
                      "pass": good})
    return (PASS if ok else FAIL), {"model": model.name, "lifts": lifts}, ""


_TASKS = {
    "validate": _task_validate, "regularity": _task_regularity, "norms": _task_norms,
    "convexity": _task_convexity, "symmetry": _task_symmetry, "invariance": _task_invariance,
    "scaling": _task_scaling, "lift": _task_lift,
}


def _clean(obj):
    # numpy scalars and arrays to plain JSON types
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else None
    return obj


def run(spec: ProblemSpec, timings: bool = False) -> Report:
    """Execute the requested tasks in dependency order.

    ``validate`` always runs since every other task needs its Finsler
    structure. A failed or errored task marks its dependents skipped.
    """
    ctx = _Context(spec)
    status = {}
    sections = []
    wanted = set(spec.tasks)
    for t in spec.tasks:
        wanted.update(_deps(t))
    for task in TASKS:
        if task not in wanted:
            continue
        blocked = [d for d in _deps(task) if status.get(d) not in (PASS, NA)]
        if blocked or (task != "validate" and ctx.fs is None):
            status[task] = SKIPPED
            sections.append(Section(task, SKIPPED, {}, f"dependency failed: {', '.join(blocked)}"))
            continue
        t0 = time.perf_counter()
        try:
            st, vals, msg = _TASKS[task](ctx)
        except (AlphaBetaError, ArithmeticError, np.linalg.LinAlgError) as exc:
            st, vals, msg = ERROR, {}, f"{type(exc).__name__}: {exc}"
        status[task] = st
        sec = Section(task, st, _clean(vals), msg)
        if timings:
            sec.wall_time = time.perf_counter() - t0
        sections.append(sec)
    flags = {"loosened_tolerances": spec.loosened(),
             "phi_regular": spec.phi.regular,
             "injectivity_certified_at": INJECTIVITY_SAMPLES}
    return Report(_clean(spec.echo), sections, flags)


def _deps(task):
    out = []
    for d in DEPENDS[task]:
        out += [*_deps(d), d]
    return list(dict.fromkeys(out))
