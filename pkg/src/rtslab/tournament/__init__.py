"""Round-robin tournaments, score tables and evaluation-latency benchmarks."""

from .agents import VARIANTS, Agent, AgentSettings, AgentSpec, AgentSpecError
from .match import FORFEIT_FACTOR, MatchRecord, run_match
from .roundrobin import (
    MATCH_COLUMNS,
    WORKERS_ENV,
    MatchJob,
    TournamentConfig,
    match_seed,
    matches_csv,
    plan_matches,
    play_job,
    run_round_robin,
    timing_csv,
)
from .scoring import ScoreTable, fmt, score_table
from .timing import (
    CorpusError,
    FunctionTiming,
    TimingStats,
    Trace,
    default_pairs,
    expand_traces,
    measure_eval_overhead,
    read_corpus,
    sample_roots,
    write_corpus,
)

__all__ = [
    "Agent", "AgentSettings", "AgentSpec", "AgentSpecError", "CorpusError", "FORFEIT_FACTOR",
    "FunctionTiming", "MATCH_COLUMNS", "MatchJob", "MatchRecord", "ScoreTable", "TimingStats",
    "TournamentConfig", "Trace", "VARIANTS", "WORKERS_ENV", "default_pairs", "expand_traces",
    "fmt", "match_seed", "matches_csv", "measure_eval_overhead", "plan_matches", "play_job",
    "read_corpus", "run_match", "run_round_robin", "sample_roots", "score_table",
    "timing_csv", "write_corpus",
]
