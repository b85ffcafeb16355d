"""Verification suites and their output files.

Every suite turns orbits into a ratio table ``q_n`` whose boundedness is the
finite-scale stand-in for an inequality of the form
``h+(f^n P) <= C * growth(n) * h+(P)``.  A table passes when the largest
ratio over the last quarter of ``n`` does not exceed the largest ratio
before it (up to a relative ``1e-9`` for float rounding).  The fitted
constant is the overall maximum.

Suites:

``main``        growth ``(delta_up + epsilon)^n`` with a Fekete, exponent matrix
                or user matrix upper bound ``delta_up``.
``morphism``    morphisms of P^N: ``n^2`` when ``deg f = 1``, else ``(deg f)^n``.
``picard_one``  ``d_k^(n/k)`` when ``d_k = deg f^k > 1``, else ``n^2``.
``power``       the upper arithmetic degree of ``f`` against that of ``f^k``
                to the power ``1/k``, and ``deg (f^k)^n = deg f^(kn)``.
``canheight``   canonical heights, telescoping residuals and ``hhat(f P) = delta hhat(P)``.
``seqlem``      random sweep of the two sequence lemmas.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .canheight import canonical_height, telescoping_residuals, transform_check
from .config import ExperimentConfig
from .degrees import (
    MonomialMap,
    Stability,
    degree_sequence,
    estimate_dyndeg,
    matrix_dyndeg,
    monomial_dyndeg,
    power_degree_consistency,
)
from .errors import (
    IndeterminatePoint,
    NotCertifiedMorphism,
    NotStable,
    SchemaError,
    TooShort,
)
from .orbits import (
    OrbitRecord,
    Termination,
    check_power_consistency,
    compute_orbit,
    estimate_arith_degree,
)
from .projmap import MorphismStatus, RationalMap, is_morphism, iterate_map
from .seqlem import sweep

TAIL_REL_SLACK = 1e-9
TELESCOPE_TOL = 1e-9
CSV_COLUMNS = ("n", "coord_bits", "h", "h_plus", "h_root_n", "q_n")


@dataclass(frozen=True)
class PointResult:
    point: str
    ratios: tuple[float | None, ...]
    passed: bool
    termination: str
    C_fit: float | None = None
    alpha_bar_est: float | None = None
    extras: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    name: str
    passed: bool
    constants: dict[str, Any]
    points: tuple[PointResult, ...] = ()
    details: dict[str, Any] = field(default_factory=dict)
    reason: str | None = None
    orbits: tuple[OrbitRecord, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("orbits")
        return d


# ---------------------------------------------------------------------------
# ratio tables


def tail_bounded(ratios: Sequence[float | None]) -> bool:
    """Max over the last quarter of the defined ratios is at most the max before it."""
    vals = [q for q in ratios if q is not None]
    if len(vals) < 2:
        return True
    cut = len(vals) - max(1, len(vals) // 4)
    return max(vals[cut:]) <= max(vals[:cut]) * (1 + TAIL_REL_SLACK)


def _ratio(h_plus_n: float, log_growth: float, h_plus_0: float) -> float:
    return math.exp(math.log(h_plus_n) - log_growth - math.log(h_plus_0))


def geometric_ratios(orbit: OrbitRecord, base: float) -> list[float]:
    """``h+_n / (base^n h+_0)``."""
    hp = orbit.h_plus
    lb = math.log(base)
    return [_ratio(v, n * lb, hp[0]) for n, v in enumerate(hp)]


def quadratic_ratios(orbit: OrbitRecord) -> list[float | None]:
    """``h+_n / (n^2 h+_0)`` for ``n >= 1``; undefined at ``n = 0``."""
    hp = orbit.h_plus
    return [None] + [_ratio(v, 2 * math.log(n), hp[0]) for n, v in enumerate(hp) if n >= 1]


def orbit_csv(orbit: OrbitRecord, ratios: Sequence[float | None] | None = None) -> str:
    """CSV text with columns ``n, coord_bits, h, h_plus, h_root_n, q_n``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)

    def fmt(x):
        return "" if x is None else format(x, ".17g")

    for n, (P, hv) in enumerate(zip(orbit.points, orbit.heights)):
        root = None if n == 0 else math.exp(math.log(hv.h_plus) / n)
        q = ratios[n] if ratios is not None and n < len(ratios) else None
        w.writerow((n, P.coord_bits(), fmt(hv.h), fmt(hv.h_plus), fmt(root), fmt(q)))
    return buf.getvalue()


def checked_orbit(cfg: ExperimentConfig, P, m: int | None = None) -> OrbitRecord:
    orbit = compute_orbit(cfg.map, P, cfg.iterations if m is None else m, cfg.height_cap)
    if orbit.terminated is Termination.HIT_INDETERMINACY:
        raise IndeterminatePoint(
            f"orbit of {P} meets the indeterminacy locus: {orbit.termination_label()}"
        )
    return orbit


def alpha_bar_or_none(orbit: OrbitRecord) -> float | None:
    return estimate_arith_degree(orbit).alpha_bar_est if orbit.length >= 8 else None


def _uniform_C0(orbit: OrbitRecord) -> float:
    hp = orbit.h_plus
    return max([1.0] + [hp[i + 1] / hp[i] for i in range(len(hp) - 1)])


def _need_map(cfg: ExperimentConfig, kind=None):
    if cfg.map is None:
        raise SchemaError("map", f"suite {cfg.suite!r} needs an explicit map")
    if kind is not None and not isinstance(cfg.map, kind):
        raise SchemaError("ambient", f"suite {cfg.suite!r} needs a map of projective space")
    return cfg.map


def _finish(cfg, suite, results, orbits, constants, details=None, reason="tail_growth"):
    passed = all(r.passed for r in results)
    return VerificationReport(
        suite, cfg.name, passed, constants, tuple(results), details or {},
        None if passed else reason, tuple(orbits),
    )


# ---------------------------------------------------------------------------
# suites


def delta_upper(cfg: ExperimentConfig) -> tuple[float, dict[str, Any]]:
    """Upper bound for the dynamical degree and where it came from."""
    if cfg.pullback_matrix is not None:
        est = matrix_dyndeg(cfg.pullback_matrix)
        return est.upper, {"source": est.source.value, "rho": est.value}
    f = _need_map(cfg)
    if isinstance(f, MonomialMap):
        est = monomial_dyndeg(f)
        return est.upper, {"source": est.source.value, "rho": est.value}
    seq = degree_sequence(f, cfg.degree_terms, cfg.term_cap)
    est = estimate_dyndeg(seq)
    info = {
        "source": est.source.value,
        "degrees": list(seq.d),
        "truncated": seq.truncated,
        "stable": est.stable.value,
    }
    return est.upper, info


def verify_main(cfg: ExperimentConfig) -> VerificationReport:
    """``q_n = h+(f^n P) / ((delta_up + eps)^n h+(P))`` for each configured point."""
    _need_map(cfg)
    if cfg.epsilon is None:
        raise SchemaError("epsilon", "required when suite = \"main\"")
    d_up, info = delta_upper(cfg)
    base = d_up + cfg.epsilon
    results, orbits = [], []
    C_fit = C0 = 0.0
    for P in cfg.points:
        orbit = checked_orbit(cfg, P)
        q = geometric_ratios(orbit, base)
        c0 = _uniform_C0(orbit)
        results.append(PointResult(
            str(P), tuple(q), tail_bounded(q), orbit.termination_label(), max(q), alpha_bar_or_none(orbit),
            {"C0": c0},
        ))
        orbits.append(orbit)
        C_fit, C0 = max(C_fit, max(q)), max(C0, c0)
    constants = {"C": C_fit, "C0": C0, "delta_up": d_up, "epsilon": cfg.epsilon}
    return _finish(cfg, "main", results, orbits, constants, info)


def verify_morphism_bounds(cfg: ExperimentConfig) -> VerificationReport:
    """Ratio tables for morphisms: ``n^2`` growth when ``deg f = 1``, ``(deg f)^n`` otherwise."""
    f = _need_map(cfg, RationalMap)
    status = is_morphism(f)
    if status is not MorphismStatus.CERTIFIED_YES and not cfg.assert_morphism:
        raise NotCertifiedMorphism(f"morphism test returned {status.value} for {f}")
    delta = f.degree
    branch = "quadratic" if delta == 1 else "geometric"
    results, orbits = [], []
    C_fit = 0.0
    for P in cfg.points:
        orbit = checked_orbit(cfg, P)
        q = quadratic_ratios(orbit) if delta == 1 else geometric_ratios(orbit, delta)
        c = max(x for x in q if x is not None)
        results.append(PointResult(str(P), tuple(q), tail_bounded(q), orbit.termination_label(), c, alpha_bar_or_none(orbit)))
        orbits.append(orbit)
        C_fit = max(C_fit, c)
    constants = {"C": C_fit, "delta": delta}
    details = {"branch": branch, "morphism": status.value, "asserted": cfg.assert_morphism}
    return _finish(cfg, "morphism", results, orbits, constants, details)


def verify_picard_one(cfg: ExperimentConfig) -> VerificationReport:
    """Ratio tables against ``d_k^(n/k)`` (or ``n^2`` when ``d_k = 1``) with ``d_k = deg f^k``."""
    f = _need_map(cfg, RationalMap)
    k = cfg.k
    d_k = iterate_map(f, k, cfg.term_cap).degree
    results, orbits = [], []
    C_fit = 0.0
    for P in cfg.points:
        orbit = checked_orbit(cfg, P)
        if d_k > 1:
            q = geometric_ratios(orbit, d_k ** (1.0 / k))
        else:
            q = quadratic_ratios(orbit)
        c = max(x for x in q if x is not None)
        results.append(PointResult(str(P), tuple(q), tail_bounded(q), orbit.termination_label(), c, alpha_bar_or_none(orbit)))
        orbits.append(orbit)
        C_fit = max(C_fit, c)
    constants = {"C": C_fit, "k": k, "d_k": d_k}
    details = {"branch": "geometric" if d_k > 1 else "quadratic"}
    return _finish(cfg, "picard_one", results, orbits, constants, details)


def verify_power(cfg: ExperimentConfig) -> VerificationReport:
    """Upper arithmetic degree of ``f`` against that of ``f^k`` to the ``1/k``.

    The orbit has ``ceil(iterations / k) * k`` steps of ``f``.  For maps of
    P^N the degrees of ``(f^k)^n`` are also compared with ``d_(kn)``.
    """
    f = _need_map(cfg)
    k = cfg.k
    steps = -(-cfg.iterations // k)
    results, orbits = [], []
    worst = 0.0
    for P in cfg.points:
        pc = check_power_consistency(f, P, k, steps, cfg.height_cap)
        roots = estimate_arith_degree(pc.orbit).alpha_upper_seq
        ok = pc.difference <= cfg.tolerance
        results.append(PointResult(
            str(P), (None,) + tuple(roots), ok, pc.orbit.termination_label(), None, pc.alpha_f,
            {"alpha_fk_root": pc.alpha_fk_root, "difference": pc.difference},
        ))
        orbits.append(pc.orbit)
        worst = max(worst, pc.difference)
    details: dict[str, Any] = {"orbit_steps": steps * k}
    degrees_ok = True
    if isinstance(f, RationalMap):
        m = max(1, cfg.degree_terms // k)
        direct, sub = power_degree_consistency(f, k, m, cfg.term_cap)
        degrees_ok = direct == sub
        details.update(direct_degrees=list(direct), subsampled_degrees=list(sub))
    constants = {"k": k, "max_difference": worst, "tolerance": cfg.tolerance}
    rep = _finish(cfg, "power", results, orbits, constants, details, reason="power_mismatch")
    if not degrees_ok:
        return VerificationReport(rep.suite, rep.name, False, rep.constants, rep.points,
                                  rep.details, "degree_mismatch", rep.orbits)
    return rep


def verify_canheight(cfg: ExperimentConfig) -> VerificationReport:
    """Canonical heights with telescoping residuals and the transformation check."""
    f = _need_map(cfg, RationalMap)
    seq = degree_sequence(f, cfg.degree_terms, cfg.term_cap)
    stable = estimate_dyndeg(seq).stable
    if stable is not Stability.STABLE and cfg.assert_stable:
        stable = Stability.STABLE
    if stable is not Stability.STABLE:
        raise NotStable(f"degree sequence {list(seq.d)} is not that of a stable map")
    delta = f.degree
    N = cfg.iterations
    results, orbits = [], []
    C_B = 0.0
    for P in cfg.points:
        orbit = checked_orbit(cfg, P, N + 1)
        # the height cap may leave fewer steps; f(P) needs one more than P
        n_used = min(N, orbit.length - 2)
        if n_used < 1:
            raise TooShort(f"orbit of {P} stopped at {orbit.termination_label()}")
        head = OrbitRecord(P, orbit.points[: n_used + 1], orbit.heights[: n_used + 1],
                           orbit.terminated, orbit.stop_index)
        est = canonical_height(head, delta, stable)
        resid = max(telescoping_residuals(head, est))
        tc = transform_check(f, P, delta, n_used, stable, cfg.height_cap)
        normalized = [hv.h / float(delta ** n) for n, hv in enumerate(head.heights)]
        ok = resid <= TELESCOPE_TOL and tc.ok
        results.append(PointResult(
            str(P), tuple(normalized), ok, head.termination_label(), None, alpha_bar_or_none(head),
            {
                "hhat": est.hhat,
                "status": est.status.value,
                "err_bound": est.err_bound,
                "C_B": est.C_B,
                "telescoping_residual": resid,
                "transform_residual": tc.residual,
                "transform_bound": tc.bound,
                "N": n_used,
            },
        ))
        orbits.append(head)
        C_B = max(C_B, est.C_B)
    constants = {"C_B": C_B, "delta": delta, "N": N}
    return _finish(cfg, "canheight", results, orbits, constants, {"degrees": list(seq.d)},
                   reason="canonical_height_check")


def verify_seqlem(cfg: ExperimentConfig) -> VerificationReport:
    s = cfg.seqlem
    res = sweep(s.trials, s.n_max, s.seed)
    if s.constant == "repaired":
        sum_bad = res.lemma_sum_repaired_violations
    else:
        sum_bad = res.lemma_sum_violations
    passed = res.lemma0_violations == 0 and sum_bad == 0
    details = asdict(res)
    details["constant"] = s.constant
    constants = {
        "lemma0_max_ratio_over_Ct": res.lemma0_max_ratio_over_Ct,
        "lemma_sum_max_ratio_over_Ct": res.lemma_sum_max_ratio_over_Ct,
    }
    return VerificationReport("seqlem", cfg.name, passed, constants, (), details,
                              None if passed else "bound_violated")


_SUITES = {
    "main": verify_main,
    "morphism": verify_morphism_bounds,
    "picard_one": verify_picard_one,
    "power": verify_power,
    "canheight": verify_canheight,
    "seqlem": verify_seqlem,
}


def write_outputs(rep: VerificationReport, out_dir: str | Path) -> list[Path]:
    """One CSV per orbit and a JSON report; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i, (orbit, pr) in enumerate(zip(rep.orbits, rep.points)):
        path = out / f"{rep.name}_{rep.suite}_p{i}.csv"
        path.write_text(orbit_csv(orbit, pr.ratios))
        written.append(path)
    path = out / f"{rep.name}_{rep.suite}_report.json"
    path.write_text(report_json(rep))
    written.append(path)
    return written


def report_json(rep: VerificationReport) -> str:
    return json.dumps(rep.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def run_suite(cfg: ExperimentConfig, out_dir: str | Path | None = None) -> VerificationReport:
    """Dispatch on ``cfg.suite`` and write the CSV and report files when ``out_dir`` is given."""
    rep = _SUITES[cfg.suite](cfg)
    if out_dir is not None:
        write_outputs(rep, out_dir)
    return rep
