from contextlib import contextmanager
from typing import Iterable, Iterator, List
import json
import os
import tempfile

from spamhunter.exceptions import InputError
from spamhunter.preprocessing.structures import AccountSnapshot


@contextmanager
def atomic_writer(path, mode="w"):
    """Write to a temporary sibling of ``path`` and rename it into place on success."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    kwargs = dict(encoding="utf-8", newline="") if "b" not in mode else dict()
    handle = tempfile.NamedTemporaryFile(
        mode, dir=directory, prefix=".tmp-", suffix=os.path.basename(path), delete=False, **kwargs
    )
    try:
        with handle:
            yield handle
        os.replace(handle.name, path)
    except BaseException:
        if os.path.exists(handle.name):
            os.remove(handle.name)
        raise


def dumps(record) -> str:
    return json.dumps(record, ensure_ascii=False)


def read_jsonl(path) -> Iterator[dict]:
    if not os.path.isfile(path):
        raise InputError(f"no such file: {path}")
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            line = line.strip()
            if line:
                try:
                    yield json.loads(line)
                except ValueError as e:
                    raise InputError(f"{path}:{line_number}: {e}") from e


def write_jsonl(records: Iterable[dict], path):
    with atomic_writer(path) as f:
        for record in records:
            f.write(dumps(record) + "\n")


def save_snapshots(snapshots: Iterable[AccountSnapshot], path):
    write_jsonl((s.to_dict() for s in snapshots), path)


def load_snapshots(path) -> List[AccountSnapshot]:
    return [AccountSnapshot.from_dict(d) for d in read_jsonl(path)]


def require_file(path, what="file"):
    if path is None or not os.path.isfile(path):
        raise InputError(f"missing {what}: {path}")
    return path
