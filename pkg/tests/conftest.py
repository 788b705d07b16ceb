import json
from pathlib import Path

import pytest

from puzzle_cipher.keyschedule import HashAlg, KeyMaterial

VECTORS = Path(__file__).parent / "vectors"

_verdicts: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    """Log one acceptance-criterion verdict for the terminal summary."""

    def _record(name: str, ok: bool, detail: str = "") -> bool:
        _verdicts.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'} {name} {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _verdicts:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture(scope="session")
def kat_cases():
    return json.loads((VECTORS / "kat.json").read_text())


@pytest.fixture(scope="session")
def key_vectors():
    return json.loads((VECTORS / "keys.json").read_text())


def words_key(words) -> KeyMaterial:
    return KeyMaterial(b"".join(int(w).to_bytes(4, "little") for w in words))


def zero_key(nbytes: int = 64) -> KeyMaterial:
    return KeyMaterial(bytes(nbytes))


ALGS = [HashAlg.SHA256, HashAlg.SHA512]
