"""Command-line interface: encrypt, decrypt, keyinfo, stats, bench.

Exit codes: 0 ok, 2 usage, 3 format, 4 I/O, 5 an analysis threshold failed.
"""

from __future__ import annotations

import argparse
import getpass
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import analysis, bench
from .cipher import StreamState
from .container import DEFAULT_IV_LEN, decrypt_stream, encrypt_stream
from .errors import FormatError, InvalidArgument
from .keyschedule import HashAlg
from .params import CipherParams, Granularity, Method, select_method

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_IO = 4
EXIT_THRESHOLD = 5

DEFAULT_PASSWORD_ENV = "PUZZLE_PASSWORD"


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _add_cipher_flags(p: argparse.ArgumentParser, with_hash: bool = True) -> None:
    p.add_argument("--ref-block-size", type=int, default=4096, help="reference block size in elements (default 4096)")
    p.add_argument("--granularity", choices=[g.value for g in Granularity], default="byte")
    p.add_argument("--method", choices=[m.value for m in Method], default="auto", help="map method override")
    if with_hash:
        p.add_argument("--hash", choices=["sha256", "sha512"], default="sha512")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--password-env", metavar="VAR", help=f"environment variable holding the password (default {DEFAULT_PASSWORD_ENV})")
    src.add_argument("--password-file", metavar="PATH", help="read the password from the first line of a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="puzzle", description="Puzzle transposition cipher")
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encrypt", help="encrypt a file into a container")
    enc.add_argument("input")
    enc.add_argument("output")
    _add_cipher_flags(enc)
    enc.add_argument("--iv-hex", help=argparse.SUPPRESS)

    dec = sub.add_parser("decrypt", help="decrypt a container")
    dec.add_argument("input")
    dec.add_argument("output")
    _add_cipher_flags(dec, with_hash=False)

    info = sub.add_parser("keyinfo", help="show derived sizes without revealing key material")
    _add_cipher_flags(info)
    info.add_argument("--iv-hex")

    st = sub.add_parser("stats", help="regenerate the appendix data sets and threshold report")
    st.add_argument("--trials", type=_positive_int, default=100)
    st.add_argument("--block-size", type=_positive_int, default=10_000)
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--outdir", default="stats_out")
    st.add_argument("--no-csv", action="store_true", help="only write the summary report")

    bn = sub.add_parser("bench", help="measure encryption throughput")
    bn.add_argument("--sizes", default=",".join(map(str, bench.DEFAULT_SIZES)))
    bn.add_argument("--bytes", type=_positive_int, default=bench.DEFAULT_BYTES)
    return parser


def _read_password(args) -> bytes:
    if args.password_file:
        try:
            with open(args.password_file, "rb") as fh:
                line = fh.readline().rstrip(b"\r\n")
        except FileNotFoundError as exc:
            raise UsageError(f"password file not found: {args.password_file}") from exc
    elif args.password_env or os.environ.get(DEFAULT_PASSWORD_ENV):
        name = args.password_env or DEFAULT_PASSWORD_ENV
        if name not in os.environ:
            raise UsageError(f"environment variable {name} is not set")
        line = os.environ[name].encode("utf-8")
    else:
        line = getpass.getpass("Password: ").encode("utf-8")
    if not line:
        raise UsageError("empty password")
    return line


def _params(args, hash_alg: HashAlg = HashAlg.SHA512) -> CipherParams:
    alg = HashAlg.parse(args.hash) if getattr(args, "hash", None) else hash_alg
    return CipherParams(args.ref_block_size, Granularity(args.granularity), alg, Method(args.method))


def _iv(args) -> bytes | None:
    if getattr(args, "iv_hex", None) is None:
        return None
    try:
        return bytes.fromhex(args.iv_hex)
    except ValueError as exc:
        raise UsageError(f"bad --iv-hex: {exc}") from exc


def _open_input(path: str):
    if not Path(path).is_file():
        raise UsageError(f"input not found: {path}")
    return open(path, "rb")


def _report(verb: str, state: StreamState, nbytes: int, seconds: float) -> None:
    rate = nbytes / seconds / 1e6 if seconds > 0 else float("inf")
    print(f"{verb} {state.block_number} blocks, {nbytes} bytes in {seconds:.3f} s ({rate:.2f} MB/s)", file=sys.stderr)


def run_encrypt(args) -> int:
    params = _params(args)
    iv = _iv(args) or os.urandom(DEFAULT_IV_LEN)
    src = _open_input(args.input)
    password = _read_password(args)
    with src, open(args.output, "wb") as dst:
        start = time.perf_counter()
        state = encrypt_stream(src, dst, password, params, iv)
        nbytes = src.tell()
    _report("encrypted", state, nbytes, time.perf_counter() - start)
    return EXIT_OK


def run_decrypt(args) -> int:
    src = _open_input(args.input)
    password = _read_password(args)
    with src, open(args.output, "wb") as dst:
        start = time.perf_counter()
        state = decrypt_stream(
            src, dst, password, args.ref_block_size, Granularity(args.granularity), Method(args.method)
        )
        nbytes = dst.tell()
    _report("decrypted", state, nbytes, time.perf_counter() - start)
    return EXIT_OK


def _fingerprint(data: bytes) -> str:
    return hashlib.sha256(b"fingerprint" + data).hexdigest()[:16]


def run_keyinfo(args) -> int:
    params = _params(args)
    state = StreamState.open(_read_password(args), params, _iv(args))
    method = select_method(state.block_size, params.granularity, params.method, params.method_threshold)
    info = {
        "hash": params.hash_alg.name,
        "key_bytes": len(state.keys.xor_key),
        "map_key_words": state.keys.map_key.word_count,
        "block_size": state.block_size,
        "granularity": params.granularity.value,
        "method": method.value,
        "xor_key_fingerprint": _fingerprint(state.keys.xor_key.data),
        "map_key_fingerprint": _fingerprint(state.keys.map_key.data),
    }
    print(json.dumps(info, indent=2))
    return EXIT_OK


def run_stats(args) -> int:
    data = analysis.run_trials(args.trials, args.block_size, args.seed)
    checks = analysis.summarize(data)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if not args.no_csv:
        analysis.write_csvs(data, outdir)
    analysis.write_report(checks, outdir / "summary.jsonl")
    for c in checks:
        verdict = {True: "PASS", False: "FAIL", None: "----"}[c.passed]
        value = "n/a" if c.value is None else f"{c.value:.6g}"
        print(f"{verdict} {c.name:<34} {value}")
    return EXIT_THRESHOLD if any(c.passed is False for c in checks) else EXIT_OK


def run_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError as exc:
        raise UsageError(f"bad --sizes: {exc}") from exc
    if not sizes or min(sizes) < 100:
        raise UsageError("block sizes must be >= 100")
    print(bench.format_table(bench.run_bench(sizes, args.bytes)))
    return EXIT_OK


COMMANDS = {
    "encrypt": run_encrypt,
    "decrypt": run_decrypt,
    "keyinfo": run_keyinfo,
    "stats": run_stats,
    "bench": run_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidArgument) as exc:
        print(f"puzzle: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"puzzle: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"puzzle: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
