"""Freeze key-schedule and container known-answer vectors.

Run once; output goes to tests/vectors/. Uses only the reference oracle in
tests/oracles.py, never the package under test.

    python scripts/make_vectors.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402

OUT = ROOT / "tests" / "vectors"

KEY_CASES = [
    ("mypassword", 2),
    ("mypassword", 1),
    ("abc", 1),
    ("abcd", 2),
    ("abccba", 1),
    ("x", 1),
    ("correct horse battery staple", 2),
    ("pässwörd-ü", 2),
]

FOX = b"The quick brown fox jumps over the lazy dog. "

KAT_CASES = [
    {
        "name": "kat1",
        "password": "mypassword",
        "iv_hex": "00" * 16,
        "reference_block_size": 100,
        "granularity": "byte",
        "hash": 2,
        "plaintext": (FOX * 7)[:300],
    },
    {
        "name": "kat2",
        "password": "correct horse battery staple",
        "iv_hex": "0123456789abcdef",
        "reference_block_size": 128,
        "granularity": "bit",
        "hash": 1,
        "plaintext": bytes((i * 37 + 11) % 256 for i in range(100)),
    },
    {
        "name": "kat3",
        "password": "Tr0ub4dor&3",
        "iv_hex": "f0e1d2c3b4a5968778695a4b3c2d1e0f",
        "reference_block_size": 100,
        "granularity": "byte",
        "hash": 1,
        # long enough to cross a key-regeneration epoch
        "plaintext": bytes((i * i + 7 * i) % 251 for i in range(25_000)),
    },
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    keys = []
    for password, alg in KEY_CASES:
        pw = password.encode("utf-8")
        xk, mk = oracles.key_pair(pw, alg)
        keys.append({"password_hex": pw.hex(), "hash": alg, "xor_key_hex": xk.hex(), "map_key_hex": mk.hex()})
    (OUT / "keys.json").write_text(json.dumps(keys, indent=1) + "\n")

    manifest = []
    for case in KAT_CASES:
        container = oracles.encrypt_container(
            case["plaintext"],
            case["password"].encode("utf-8"),
            case["reference_block_size"],
            case["granularity"] == "bit",
            case["hash"],
            bytes.fromhex(case["iv_hex"]),
        )
        (OUT / f"{case['name']}.pzl").write_bytes(container)
        (OUT / f"{case['name']}.plain").write_bytes(case["plaintext"])
        entry = {k: v for k, v in case.items() if k != "plaintext"}
        manifest.append(entry)
        print(case["name"], len(container), "bytes")
    (OUT / "kat.json").write_text(json.dumps(manifest, indent=1) + "\n")


if __name__ == "__main__":
    main()
