"""Command line front end.

    arithdyn verify --config henon.toml --out-dir out/
    arithdyn orbit --corpus squaring --max-n 10
    arithdyn seqlem-sweep --trials 1000

Results go to stdout as JSON; CSV and report files go to ``--out-dir``.
The exit status is 0 on success (for ``verify``, ``canheight`` and
``seqlem-sweep``: when the criterion passes), 1 when a criterion fails, and
the error's own code for any :class:`ArithDynError`.  Errors are printed to
stderr as a JSON object with ``reason`` and ``message``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .config import ExperimentConfig, SeqlemSettings, config_from_dict, load_config
from .corpus import corpus_config, corpus_names
from .degrees import MonomialMap, degree_sequence, estimate_dyndeg, matrix_dyndeg, monomial_dyndeg
from .errors import ArithDynError, SchemaError
from .harness import (
    alpha_bar_or_none,
    checked_orbit,
    delta_upper,
    geometric_ratios,
    orbit_csv,
    report_json,
    run_suite,
)
from .orbits import estimate_arith_degree

EXIT_CRITERION_FAILED = 1


def _load(args) -> ExperimentConfig:
    if args.config and args.corpus:
        raise SchemaError("<args>", "give --config or --corpus, not both")
    if args.config:
        cfg = load_config(args.config)
    elif args.corpus:
        cfg = corpus_config(args.corpus)
    elif args.command == "seqlem-sweep":
        cfg = config_from_dict({"suite": "seqlem"}, default_name="seqlem")
    else:
        raise SchemaError("<args>", "--config or --corpus is required")
    changes: dict[str, Any] = {}
    if args.max_n is not None:
        changes["iterations"] = args.max_n
        if args.command in ("degseq", "dyndeg"):
            changes["degree_terms"] = args.max_n
    if args.term_cap is not None:
        changes["term_cap"] = args.term_cap
    if args.height_cap is not None:
        changes["height_cap"] = args.height_cap
    return cfg.replace(**changes) if changes else cfg


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _out_dir(args) -> Path | None:
    return Path(args.out_dir) if args.out_dir else None


def cmd_orbit(cfg: ExperimentConfig, args) -> int:
    if cfg.map is None:
        raise SchemaError("map", "orbit needs an explicit map")
    base = None
    if cfg.epsilon is not None:
        base = delta_upper(cfg)[0] + cfg.epsilon
    out = _out_dir(args)
    summary = []
    for i, P in enumerate(cfg.points):
        orbit = checked_orbit(cfg, P)
        q = geometric_ratios(orbit, base) if base is not None else None
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{cfg.name}_orbit_p{i}.csv").write_text(orbit_csv(orbit, q))
        summary.append({
            "point": str(P),
            "steps": orbit.length - 1,
            "termination": orbit.termination_label(),
            "h": orbit.h,
        })
    _emit({"name": cfg.name, "orbits": summary})
    return 0


def cmd_degseq(cfg: ExperimentConfig, args) -> int:
    if cfg.map is None or isinstance(cfg.map, MonomialMap):
        raise SchemaError("map", "degseq needs a polynomial map of P^N")
    seq = degree_sequence(cfg.map, cfg.degree_terms, cfg.term_cap)
    out = _out_dir(args)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        lines = ["n,d_n,d_n_root"] + [
            f"{n},{d},{format(d ** (1.0 / n), '.17g')}" for n, d in enumerate(seq.d, start=1)
        ]
        (out / f"{cfg.name}_degseq.csv").write_text("\n".join(lines) + "\n")
    _emit({"name": cfg.name, "map": str(cfg.map), "degrees": list(seq.d), "truncated": seq.truncated})
    return 0


def cmd_dyndeg(cfg: ExperimentConfig, args) -> int:
    if cfg.pullback_matrix is not None:
        est = matrix_dyndeg(cfg.pullback_matrix)
    elif isinstance(cfg.map, MonomialMap):
        est = monomial_dyndeg(cfg.map)
    elif cfg.map is not None:
        est = estimate_dyndeg(degree_sequence(cfg.map, cfg.degree_terms, cfg.term_cap))
    else:
        raise SchemaError("map", "nothing to estimate")
    obj = {
        "name": cfg.name,
        "lower": est.lower,
        "upper": est.upper,
        "value": est.value,
        "stable": est.stable.value,
        "source": est.source.value,
    }
    if est.spectral is not None:
        obj["certified_interval"] = list(est.spectral.certified_interval)
        obj["char_poly"] = list(est.spectral.char_poly)
    if est.gelfand:
        obj["gelfand"] = list(est.gelfand)
    _emit(obj)
    return 0


def cmd_arithdeg(cfg: ExperimentConfig, args) -> int:
    if cfg.map is None:
        raise SchemaError("map", "arithdeg needs an explicit map")
    rows = []
    for P in cfg.points:
        orbit = checked_orbit(cfg, P)
        row: dict[str, Any] = {"point": str(P), "termination": orbit.termination_label()}
        if alpha_bar_or_none(orbit) is not None:
            est = estimate_arith_degree(orbit)
            row.update(
                alpha_bar_est=est.alpha_bar_est,
                alpha_lower_est=est.alpha_lower_est,
                tail_start=est.tail_start,
                roots=list(est.alpha_upper_seq),
            )
        rows.append(row)
    _emit({"name": cfg.name, "points": rows})
    return 0


def _run(cfg: ExperimentConfig, args) -> int:
    rep = run_suite(cfg, _out_dir(args))
    sys.stdout.write(report_json(rep))
    return 0 if rep.passed else EXIT_CRITERION_FAILED


def cmd_verify(cfg, args) -> int:
    return _run(cfg, args)


def cmd_canheight(cfg, args) -> int:
    return _run(cfg.replace(suite="canheight"), args)


def cmd_seqlem(cfg, args) -> int:
    s = cfg.seqlem
    s = SeqlemSettings(
        trials=args.trials if args.trials is not None else s.trials,
        n_max=args.max_n if args.max_n is not None else s.n_max,
        seed=args.seed if args.seed is not None else s.seed,
        constant=args.constant if args.constant is not None else s.constant,
    )
    return _run(cfg.replace(suite="seqlem", seqlem=s), args)


COMMANDS = {
    "orbit": (cmd_orbit, "compute orbits and their heights"),
    "degseq": (cmd_degseq, "degree sequence deg(f^n) with cancellation"),
    "dyndeg": (cmd_dyndeg, "dynamical degree estimate"),
    "arithdeg": (cmd_arithdeg, "arithmetic degree estimates along orbits"),
    "canheight": (cmd_canheight, "canonical heights of a stable map"),
    "verify": (cmd_verify, "run the configured verification suite"),
    "seqlem-sweep": (cmd_seqlem, "random sweep of the sequence lemmas"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arithdyn", description="Heights, degrees and orbits of rational maps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="experiment TOML file")
        p.add_argument("--corpus", choices=corpus_names(), help="built-in experiment instead of --config")
        p.add_argument("--out-dir", help="directory for CSV and report files")
        p.add_argument("--max-n", type=int, help="override the iteration count")
        p.add_argument("--term-cap", type=int, help="term budget for symbolic composition")
        p.add_argument("--height-cap", type=float, help="height cap in nats")
        if name == "seqlem-sweep":
            p.add_argument("--trials", type=int)
            p.add_argument("--seed", type=int)
            p.add_argument("--constant", choices=("stated", "repaired"))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        return COMMANDS[args.command][0](cfg, args)
    except ArithDynError as e:
        err = {"reason": e.reason, "message": str(e)}
        if isinstance(e, SchemaError):
            err["path"] = e.path
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return e.exit_code
    except (OSError, KeyError) as e:
        print(json.dumps({"reason": "io_error", "message": str(e)}, sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
