import json

import pandas as pd
import pytest

from spamhunter import __version__
from spamhunter.cli import run
from spamhunter.labeling.workflow import load_labels
from spamhunter.models.base import load_model

SYNTH = ["synth", "--spammers", "20", "--legit", "20", "--compromised", "4", "--tweets", "20"]


def _run(*argv, jobs=1):
    return run(["--quiet", "--log-level", "WARNING", "--jobs", str(jobs), *map(str, argv)])


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    assert _run(*SYNTH, "--seed", 3, "--out", out) == 0
    return out


def _extract(corpus, out, jobs=1):
    return _run(
        "extract",
        "--snapshots",
        corpus / "snapshots.jsonl",
        "--dict",
        corpus / "spam_terms.txt",
        "--out",
        out,
        jobs=jobs,
    )


def _dataset_args(corpus, features):
    return ["--features", features, "--labels", corpus / "labels.jsonl"]


def test_help_and_usage_errors(capsys):
    assert run(["--help"]) == 0
    assert run(["train", "--algo", "decorate"]) == 1
    assert run([]) == 1


def test_pipeline(corpus, tmp_path):
    features = tmp_path / "features.jsonl"
    assert _extract(corpus, features) == 0

    model = tmp_path / "model.json"
    argv = ["train", *_dataset_args(corpus, features), "--algo", "adaboost"]
    assert _run(*argv, "--out", model) == 0
    assert load_model(model).NAME == "adaboost"

    predictions = tmp_path / "predictions.csv"
    assert _run("classify", "--model", model, "--features", features, "--out", predictions) == 0
    assert len(pd.read_csv(predictions)) == 44

    report = tmp_path / "report.csv"
    assert (
        _run("evaluate", *_dataset_args(corpus, features), "--k", 3, "--out", report) == 0
    )
    frame = pd.read_csv(report, dtype=str)
    totals = frame[frame["fold"] == "all"]
    assert list(totals["algo"]) == ["naive_bayes", "decision_tree", "random_forest", "adaboost"]
    assert set(totals["feature_set"]) == {"paper-selected"}
    assert len(frame) == 4 * 4

    hunted = tmp_path / "hunt.csv"
    argv = ["hunt", "--model", model, "--snapshots", corpus / "snapshots.jsonl"]
    argv += ["--dictionary", corpus / "spam_terms.txt", "--edges", corpus / "edges.csv"]
    assert _run(*argv, "--seeds", corpus / "seeds.txt", "--out", hunted) == 0
    seeds = (corpus / "seeds.txt").read_text(encoding="utf-8").split()
    hunt_frame = pd.read_csv(hunted, dtype=str)
    assert list(hunt_frame["account_id"][: len(seeds)]) == seeds


def test_feature_selection(corpus, tmp_path):
    features = tmp_path / "features.jsonl"
    assert _extract(corpus, features) == 0
    selected, ranking = tmp_path / "selected.txt", tmp_path / "ranking.csv"
    argv = ["select-features", *_dataset_args(corpus, features), "--top", 10]
    assert _run(*argv, "--ranking-out", ranking, "--out", selected) == 0
    names = selected.read_text(encoding="utf-8").split()
    assert 1 <= len(names) <= 10
    assert len(pd.read_csv(ranking)) == 76

    report = tmp_path / "report.csv"
    argv = ["evaluate", *_dataset_args(corpus, features), "--algo", "naive_bayes"]
    assert _run(*argv, "--feature-list", selected, "--k", 3, "--out", report) == 0
    assert set(pd.read_csv(report)["feature_set"]) == {"selected"}


def test_labeling_from_scripted_oracle(corpus, tmp_path):
    labels, summary = tmp_path / "labels.jsonl", tmp_path / "summary.json"
    argv = ["label", "--snapshots", corpus / "snapshots.jsonl", "--catalog", corpus / "sources.csv"]
    argv += ["--evidence", corpus / "evidence.jsonl", "--answers", corpus / "oracle.jsonl"]
    assert _run(*argv, "--out", labels, "--summary", summary) == 0
    produced, expected = load_labels(labels), load_labels(corpus / "labels.jsonl")
    assert [l.account_class for l in produced] == [l.account_class for l in expected]
    assert json.loads(summary.read_text(encoding="utf-8"))["accounts"] == 44


def test_sources_report(corpus, tmp_path):
    out = tmp_path / "sources.csv"
    argv = ["sources", "report", "--snapshots", corpus / "snapshots.jsonl"]
    assert _run(*argv, "--catalog", corpus / "sources.csv", "--out", out) == 0
    frame = pd.read_csv(out)
    from_corpus = tmp_path / "from_corpus.csv"
    argv = ["sources", "report", "--corpus", corpus / "corpus.jsonl"]
    assert _run(*argv, "--catalog", corpus / "sources.csv", "--out", from_corpus) == 0
    assert from_corpus.read_bytes() == out.read_bytes()
    assert frame["share"].sum() == pytest.approx(1.0)
    assert set(frame["category"]) <= {"official", "trusted", "automated"}


def test_ingest_round_trip(corpus, tmp_path):
    snapshots = tmp_path / "snapshots.jsonl"
    assert _run("ingest", "--corpus", corpus / "corpus.jsonl", "--out", snapshots) == 0
    assert snapshots.read_bytes() == (corpus / "snapshots.jsonl").read_bytes()


def test_input_errors_exit_with_one(corpus, tmp_path, capsys):
    features = tmp_path / "features.jsonl"
    assert _extract(corpus, features) == 0
    argv = ["train", "--features", features, "--labels", tmp_path / "missing.jsonl"]
    assert _run(*argv, "--out", tmp_path / "model.json") == 1
    assert "E_INPUT" in capsys.readouterr().err
    argv = ["evaluate", *_dataset_args(corpus, features), "--preset", "benevenuto"]
    assert _run(*argv, "--out", tmp_path / "r.csv") == 1
    assert "E_PRESET" in capsys.readouterr().err
    assert _run("extract", "--snapshots", corpus / "snapshots.jsonl") == 1
    assert not (tmp_path / "model.json").exists()


def test_config_file_supplies_paths(corpus, tmp_path):
    config = tmp_path / "pipeline.yml"
    config.write_text(
        "paths:\n"
        f"  snapshots: {corpus / 'snapshots.jsonl'}\n"
        f"  dictionary: {corpus / 'spam_terms.txt'}\n"
        f"  features: {tmp_path / 'features.jsonl'}\n",
        encoding="utf-8",
    )
    assert run(["--quiet", "--jobs", "1", "--config", str(config), "extract"]) == 0
    assert (tmp_path / "features.jsonl").exists()


@pytest.mark.slow
def test_runs_are_byte_identical_across_jobs(tmp_path):
    outputs = []
    for jobs in (1, 8):
        out = tmp_path / f"jobs{jobs}"
        corpus = out / "corpus"
        features, model, report = out / "features.jsonl", out / "model.json", out / "report.csv"
        assert _run(*SYNTH, "--seed", 5, "--out", corpus, jobs=jobs) == 0
        assert _extract(corpus, features, jobs=jobs) == 0
        args = _dataset_args(corpus, features)
        assert _run("train", *args, "--out", model, jobs=jobs) == 0
        assert _run("evaluate", *args, "--k", 3, "--out", report, jobs=jobs) == 0
        outputs.append([p.read_bytes() for p in (corpus / "corpus.jsonl", features, model, report)])
    assert outputs[0] == outputs[1]


def test_label_needs_exactly_one_answer_source(corpus, tmp_path, capsys):
    argv = ["label", "--snapshots", corpus / "snapshots.jsonl", "--catalog", corpus / "sources.csv"]
    argv += ["--evidence", corpus / "evidence.jsonl", "--out", tmp_path / "labels.jsonl"]
    assert _run(*argv) == 1
    assert _run(*argv, "--interactive", "--answers", corpus / "oracle.jsonl") == 1
    assert "--interactive" in capsys.readouterr().err
    assert not (tmp_path / "labels.jsonl").exists()
    assert _run(*argv, "--oracle", corpus / "oracle.jsonl") == 0


def test_version(capsys):
    assert run(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
