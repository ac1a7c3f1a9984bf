"""Command-line entry points: match, tournament, bench-eval, validate-config.

Exit status: 0 ok, 2 usage, 3 configuration, 4 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional

from .. import __version__
from ..game.maps import MapError, load_map
from ..game.units import StatsError, load_unit_stats
from ..tournament import (
    AgentSpec,
    AgentSpecError,
    CorpusError,
    default_pairs,
    expand_traces,
    fmt,
    matches_csv,
    measure_eval_overhead,
    plan_matches,
    read_corpus,
    run_match,
    run_round_robin,
    sample_roots,
    timing_csv,
    write_corpus,
)
from .config import (
    ConfigError,
    RunConfig,
    config_hash,
    load_config,
    parse_config,
)

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _versions() -> dict:
    import numpy
    import sklearn

    return {"rtslab": __version__, "python": platform.python_version(),
            "numpy": numpy.__version__, "scikit-learn": sklearn.__version__}


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _run_config(args) -> RunConfig:
    if getattr(args, "config", None):
        return load_config(args.config)
    return parse_config({"schema": 1})


def cmd_match(args) -> int:
    cfg = _run_config(args)
    try:
        spec = load_map(args.map)
    except MapError as exc:
        raise ConfigError("--map", str(exc)) from exc
    try:
        p0, p1 = AgentSpec.parse(args.p0), AgentSpec.parse(args.p1)
    except AgentSpecError as exc:
        raise ConfigError("--p0/--p1", str(exc)) from exc
    settings = cfg.settings
    budget = settings.budget
    if args.budget_ms is not None:
        budget = replace(budget, wall_ms=args.budget_ms)
    if args.ms_per_node is not None:
        budget = replace(budget, ms_per_node=args.ms_per_node)
    settings = replace(settings, budget=budget)
    stats = load_unit_stats(cfg.stats_path) if cfg.stats_path else None
    max_cycles = args.max_cycles or cfg.max_cycles
    rec = run_match(spec, p0, p1, max_cycles=max_cycles, seed=args.seed,
                    settings=settings, stats=stats)
    doc = rec.to_dict()
    doc["config_hash"] = cfg.hash
    out = Path(args.out or f"match_{spec.name}_seed{args.seed}.json")
    _write(out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    winner = doc["winner"] or "ERROR"
    print(f"{spec.name} {p0} vs {p1} seed={args.seed}: {winner} at cycle {rec.cycles} "
          f"({doc['end_reason']}) digest={rec.digest[:12]} -> {out}")
    return EXIT_OK


def _manifest(cfg: RunConfig, seed: int, n_matches: int, files: dict) -> dict:
    return {"config_hash": cfg.hash, "config": cfg.doc, "seed": seed,
            "matches": n_matches, "versions": _versions(), "outputs": files}


def cmd_tournament(args) -> int:
    if args.replay:
        try:
            manifest = json.loads(Path(args.replay).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("--replay", f"cannot read manifest: {exc}") from exc
        doc = manifest.get("config")
        if doc is None or config_hash(doc) != manifest.get("config_hash"):
            raise ConfigError("--replay", "manifest config does not match its recorded hash")
        cfg = parse_config(doc)
        if args.config and load_config(args.config).hash != cfg.hash:
            raise ConfigError("--config", "config hash differs from the manifest being replayed")
    elif args.config:
        cfg = load_config(args.config)
    else:
        raise UsageError("tournament needs --config or --replay")
    tcfg = cfg.tournament_config()
    jobs = plan_matches(tcfg)
    n_pairs = len(tcfg.agents) * (len(tcfg.agents) - 1) // 2
    if args.dry_run:
        print(f"{n_pairs} pairings x {tcfg.games_per_pairing} games x {len(tcfg.maps)} maps "
              f"= {len(jobs)} matches")
        return EXIT_OK
    out_dir = Path(args.out_dir or cfg.output.get("dir", "results"))
    names = {
        "matches_csv": cfg.output.get("matches_csv", "matches.csv"),
        "scores_csv": cfg.output.get("scores_csv", "scores.csv"),
        "timing_csv": cfg.output.get("timing_csv", "timing.csv"),
        "manifest": cfg.output.get("manifest", "manifest.json"),
    }

    def progress(rec):
        if args.verbose:
            w = "ERROR" if rec.winner is None else rec.winner.name
            print(f"  {rec.map} {rec.agent0} vs {rec.agent1}: {w} ({rec.cycles} cycles)",
                  file=sys.stderr)

    table, records = run_round_robin(tcfg, progress)
    _write(out_dir / names["matches_csv"], matches_csv(records))
    _write(out_dir / names["scores_csv"], table.to_csv())
    _write(out_dir / names["timing_csv"], timing_csv(records))
    manifest = _manifest(cfg, tcfg.seed, len(records), names)
    _write(out_dir / names["manifest"], json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    errors = sum(r.error is not None for r in records)
    print(table.to_csv(), end="")
    for agent, score in table.aggregate().items():
        print(f"{agent}: {fmt(score)}")
    print(f"{len(records)} matches ({errors} errors) -> {out_dir}")
    return EXIT_OK


def cmd_bench_eval(args) -> int:
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    if args.corpus:
        roots = read_corpus(args.corpus)
    else:
        try:
            spec = load_map(args.generate_corpus)
        except MapError as exc:
            raise ConfigError("--generate-corpus", str(exc)) from exc
        roots = sample_roots(spec, args.corpus_size, seed=args.seed)
        if args.save_corpus:
            write_corpus(args.save_corpus, spec, roots)
    traces = expand_traces(roots)
    stats = measure_eval_overhead(default_pairs(), traces, args.reps, rounds=args.rounds)
    out = Path(args.out)
    _write(out, stats.to_json() + "\n")
    for kind, f in stats.functions.items():
        print(f"{kind}: static {fmt(f.mean_ns_static)} ns/call, dynamic {fmt(f.mean_ns_dynamic)} "
              f"ns/call, ratio {fmt(f.overhead_ratio)}")
    print(f"{stats.n_traces} traces, {stats.n_leaves} scored states -> {out}")
    return EXIT_OK


def cmd_validate_config(args) -> int:
    cfg = load_config(args.config)
    if cfg.stats_path:
        load_unit_stats(cfg.stats_path)
    if cfg.tournament.get("agents"):
        tcfg = cfg.tournament_config()
        for m in tcfg.maps:
            try:
                load_map(m)
            except MapError as exc:
                raise ConfigError("tournament.maps", str(exc)) from exc
    print(f"ok {args.config} (hash {cfg.hash[:16]})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rtslab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"rtslab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    m = sub.add_parser("match", help="play one match and write its record")
    m.add_argument("--map", required=True, help="bundled map name or map JSON path")
    m.add_argument("--p0", required=True, help="player 0 agent, planner:variant")
    m.add_argument("--p1", required=True, help="player 1 agent, planner:variant")
    m.add_argument("--budget-ms", type=float, help="per-decision budget in ms")
    m.add_argument("--ms-per-node", type=float,
                   help="count time on a virtual clock at this many ms per node")
    m.add_argument("--max-cycles", type=int)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--config", help="run config JSON")
    m.add_argument("--out", help="record JSON path")
    m.set_defaults(func=cmd_match)

    t = sub.add_parser("tournament", help="round-robin tournament from a config")
    t.add_argument("--config", help="run config JSON")
    t.add_argument("--replay", help="manifest from an earlier run to reproduce")
    t.add_argument("--dry-run", action="store_true", help="print the match count and exit")
    t.add_argument("--out-dir", help="output directory (default from config, else results/)")
    t.add_argument("-v", "--verbose", action="store_true")
    t.set_defaults(func=cmd_tournament)

    b = sub.add_parser("bench-eval", help="static vs adaptive evaluation latency")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="corpus JSON written by --save-corpus")
    src.add_argument("--generate-corpus", metavar="MAP", help="sample a corpus from self-play")
    b.add_argument("--reps", type=int, default=100_000, help="timed calls per function")
    b.add_argument("--rounds", type=int, default=20)
    b.add_argument("--corpus-size", type=int, default=100)
    b.add_argument("--save-corpus", help="write the generated corpus here")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default="timing.json")
    b.set_defaults(func=cmd_bench_eval)

    v = sub.add_parser("validate-config", help="check a run config")
    v.add_argument("config")
    v.set_defaults(func=cmd_validate_config)
    return ap


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rtslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, StatsError, MapError, AgentSpecError, CorpusError) as exc:
        print(f"rtslab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        print(f"rtslab: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
