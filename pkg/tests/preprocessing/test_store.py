import os

import pytest

from spamhunter.exceptions import InputError
from spamhunter.preprocessing.store import (
    atomic_writer,
    load_snapshots,
    read_jsonl,
    require_file,
    save_snapshots,
    write_jsonl,
)
from tests.builders import account, timeline


def test_atomic_writer_leaves_nothing_on_failure(tmp_path):
    target = tmp_path / "out.txt"
    with pytest.raises(RuntimeError):
        with atomic_writer(target) as f:
            f.write("partial")
            raise RuntimeError("boom")
    assert os.listdir(tmp_path) == []


def test_atomic_writer_replaces_existing(tmp_path):
    target = tmp_path / "out.txt"
    target.write_text("old", encoding="utf-8")
    with atomic_writer(target) as f:
        f.write("new")
    assert target.read_text(encoding="utf-8") == "new"
    assert os.listdir(tmp_path) == ["out.txt"]


def test_jsonl_keeps_non_ascii(tmp_path):
    path = tmp_path / "records.jsonl"
    write_jsonl([{"text": "زيادة متابعين"}, {"text": "plain"}], path)
    assert "زيادة" in path.read_text(encoding="utf-8")
    assert [r["text"] for r in read_jsonl(path)] == ["زيادة متابعين", "plain"]


def test_read_jsonl_errors(tmp_path):
    with pytest.raises(InputError):
        list(read_jsonl(tmp_path / "missing.jsonl"))
    path = tmp_path / "bad.jsonl"
    path.write_text('{"a": 1}\n{"a": \n', encoding="utf-8")
    with pytest.raises(InputError, match=":2:"):
        list(read_jsonl(path))


def test_snapshot_store(tmp_path):
    snapshots = [account("1", timeline(["a", "b"])), account("2")]
    save_snapshots(snapshots, tmp_path / "snapshots.jsonl")
    assert load_snapshots(tmp_path / "snapshots.jsonl") == snapshots


def test_require_file(tmp_path):
    with pytest.raises(InputError, match="missing model file"):
        require_file(tmp_path / "nope", "model file")
    with pytest.raises(InputError):
        require_file(None)
