import json
from pathlib import Path

import pytest

from rtslab.cli import main
from rtslab.cli.config import ConfigError, config_hash, desk_scale_document, parse_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_missing_map_is_usage_error(capsys):
    assert main(["match", "--p0", "idabcd:L", "--p1", "idabcd:S"]) == 2
    assert "--map" in capsys.readouterr().err


def test_unknown_command_is_usage_error():
    assert main(["dance"]) == 2


def test_match_writes_record_and_is_deterministic(tmp_path, capsys):
    outs = []
    for i in range(2):
        out = tmp_path / f"rec{i}.json"
        code = main(["match", "--map", "m0", "--p0", "idabcd:DL", "--p1", "idabcd:L",
                     "--seed", "7", "--budget-ms", "5", "--ms-per-node", "0.1",
                     "--max-cycles", "200", "--out", str(out)])
        assert code == 0
        outs.append(json.loads(out.read_text()))
    assert outs[0]["digest"] == outs[1]["digest"]
    assert outs[0]["agent0"] == "idabcd:DL" and outs[0]["winner"] in ("P0", "P1", "DRAW")
    assert "digest=" in capsys.readouterr().out


def test_match_bad_agent_is_config_error(capsys):
    assert main(["match", "--map", "m0", "--p0", "idabcd:Z", "--p1", "idabcd:L"]) == 3
    assert "--p0/--p1" in capsys.readouterr().err


def test_dry_run_counts_matches(capsys):
    assert main(["tournament", "--config", str(CONFIGS / "desk_scale.json"), "--dry-run"]) == 0
    assert "15 pairings x 10 games x 1 maps = 150 matches" in capsys.readouterr().out


def test_validate_config_reports_field_paths(tmp_path, capsys):
    assert main(["validate-config", str(CONFIGS / "desk_scale.json")]) == 0
    doc = desk_scale_document()
    doc["tournament"]["agents"][0] = "alphazero:DL"
    assert main(["validate-config", write(tmp_path, doc)]) == 3
    assert "tournament.agents.0" in capsys.readouterr().err
    doc = desk_scale_document()
    doc["planner"]["bogus"] = 1
    assert main(["validate-config", write(tmp_path, doc)]) == 3
    assert "planner.bogus: unknown key" in capsys.readouterr().err
    bad = tmp_path / "broken.json"
    bad.write_text("{")
    assert main(["validate-config", str(bad)]) == 3


def test_parse_config_semantic_errors():
    with pytest.raises(ConfigError) as err:
        parse_config({"schema": 1, "planner": {"wall_ms": 1, "safety_margin_ms": 2}})
    assert err.value.path == "planner"
    with pytest.raises(ConfigError):
        parse_config({"schema": 1, "tournament": {"games_per_pairing": 3}})
    doc = desk_scale_document(4)
    assert config_hash(doc) == config_hash(json.loads(json.dumps(doc)))
    assert parse_config(doc).tournament_config().seed == 4


def test_tournament_outputs_and_replay(tmp_path, capsys):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cfg = str(CONFIGS / "smoke.json")
    assert main(["tournament", "--config", cfg, "--out-dir", str(out1)]) == 0
    manifest = json.loads((out1 / "manifest.json").read_text())
    assert manifest["matches"] == 6 and manifest["seed"] == 1
    assert manifest["config_hash"] == config_hash(json.loads(Path(cfg).read_text()))
    assert main(["tournament", "--replay", str(out1 / "manifest.json"),
                 "--out-dir", str(out2)]) == 0
    assert (out1 / "matches.csv").read_bytes() == (out2 / "matches.csv").read_bytes()
    assert (out1 / "scores.csv").read_bytes() == (out2 / "scores.csv").read_bytes()
    header = (out1 / "matches.csv").read_text().splitlines()[0]
    assert header == ("map,planner,agent0,agent1,seed,winner,cycles,mean_ms_a0,mean_ms_a1,"
                      "eval_ns_a0,eval_ns_a1")
    manifest["config_hash"] = "0" * 64
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(manifest))
    assert main(["tournament", "--replay", str(tampered), "--out-dir", str(out2)]) == 3
    assert main(["tournament"]) == 2


def test_bench_eval_rejects_bad_reps(tmp_path):
    assert main(["bench-eval", "--generate-corpus", "m0", "--reps", "0"]) == 2
    assert main(["bench-eval", "--corpus", str(tmp_path / "none.json")]) == 3
    assert main(["bench-eval", "--reps", "10"]) == 2


def test_bench_eval_end_to_end(tmp_path, capsys):
    corpus, out = tmp_path / "corpus.json", tmp_path / "timing.json"
    code = main(["bench-eval", "--generate-corpus", "m1", "--reps", "5000", "--rounds", "2",
                 "--save-corpus", str(corpus), "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc["functions"]) == {"L", "S", "SQ"}
    assert "ratio" in capsys.readouterr().out
    assert main(["bench-eval", "--corpus", str(corpus), "--reps", "2000", "--rounds", "2",
                 "--out", str(out)]) == 0
