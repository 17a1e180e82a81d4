"""Command-line interface: ``qrscript encode|decode|inspect|fragment|assemble``.

Payloads and reports go to standard output (or ``--out``); diagnostics go
to standard error.  Exit statuses: 0 success, 1 I/O failure, 2 bad
manifest or arguments, 3 payload over QR capacity, 4 undecodable stream,
5 fragmentation or reassembly failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from typing import List, Optional

from . import __version__
from .bitstream import BitString, from_bytes, to_bytes
from .dialects import lookup_dialect
from .errors import (
    CapacityExceeded,
    DecodeError,
    FragmentError,
    InvalidUrl,
    InvariantViolation,
    Misaligned,
    NotANumber,
    UnknownProfile,
    ZeroValue,
)
from .fragment import AssemblyState, assemble, feed, split
from .header import (
    Header,
    decode_header,
    decode_logical_body,
    encode_header_body,
    encode_logical_body,
    sign_header,
    verify_header,
)
from .manifest import Manifest, ManifestError, load_manifest, load_profile_config
from .payload import Mode, Payload, frame, from_numeric_payload, to_binary_payload, to_numeric_payload
from .security import SecurityProfileRegistry, default_registry

EXIT_OK = 0
EXIT_IO = 1
EXIT_MANIFEST = 2
EXIT_CAPACITY = 3
EXIT_DECODE = 4
EXIT_FRAGMENT = 5


class CommandError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        super().__init__(message)


def _fail(status: int, exc: BaseException) -> CommandError:
    return CommandError(status, f"{type(exc).__name__}: {exc}")


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _registry(args) -> SecurityProfileRegistry:
    if getattr(args, "profile_config", None):
        try:
            return load_profile_config(args.profile_config).freeze()
        except ManifestError as exc:
            raise _fail(EXIT_MANIFEST, exc) from None
    return default_registry().freeze()


def _read_input(path: str, binary: bool):
    try:
        if path == "-":
            return sys.stdin.buffer.read() if binary else sys.stdin.read()
        with open(path, "rb" if binary else "r") as fh:
            return fh.read()
    except OSError as exc:
        raise _fail(EXIT_IO, exc) from None


def _read_stream(path: str, mode: Mode) -> BitString:
    if mode is Mode.BINARY:
        return from_bytes(_read_input(path, True))
    digits = "".join(_read_input(path, False).split())
    try:
        return from_numeric_payload(digits)
    except (NotANumber, ZeroValue) as exc:
        raise _fail(EXIT_DECODE, exc) from None


def _write_output(data, out: Optional[str]) -> None:
    raw = data if isinstance(data, bytes) else data.encode("utf-8")
    if out is None or out == "-":
        sys.stdout.buffer.write(raw)
        sys.stdout.flush()
        return
    try:
        with open(out, "wb") as fh:
            fh.write(raw)
    except OSError as exc:
        raise _fail(EXIT_IO, exc) from None


def _payload_bytes(payload: Payload) -> bytes:
    if payload.mode is Mode.BINARY:
        return bytes(payload.data)
    return payload.data.encode("ascii") + b"\n"


def _to_payload(stream: BitString, mode: Mode) -> Payload:
    try:
        if mode is Mode.BINARY:
            return to_binary_payload(stream)
        return to_numeric_payload(stream)
    except CapacityExceeded as exc:
        raise _fail(EXIT_CAPACITY, exc) from None


def _load(args) -> Manifest:
    try:
        return load_manifest(args.manifest)
    except OSError as exc:
        raise _fail(EXIT_IO, exc) from None
    except ManifestError as exc:
        raise _fail(EXIT_MANIFEST, exc) from None


def _signed_header(manifest: Manifest, registry: SecurityProfileRegistry) -> Header:
    if not manifest.sign:
        return manifest.header
    try:
        return sign_header(manifest.header, manifest.dialect_code, registry)
    except (UnknownProfile, InvariantViolation) as exc:
        line = manifest.source_lines.get("security_profile")
        raise CommandError(
            EXIT_MANIFEST, f"line {line}, field 'security_profile': cannot sign: {exc}"
        ) from None


def report(
    header: Header,
    code: BitString,
    registry: SecurityProfileRegistry,
    padding: Optional[int] = None,
    stream_bits: Optional[int] = None,
) -> dict:
    """Describe a decoded program as a JSON-ready dict."""
    valid = None
    if header.security_profile:
        descriptor = registry.get(header.security_profile)
        if descriptor.verifier is not None:
            valid = verify_header(header, code, registry)
    entry, status = lookup_dialect(header.dialect_id, header.dialect_version)
    cont = header.continuation
    return {
        "stream_bits": stream_bits,
        "padding_bits": padding,
        "continuation": {
            "form": header.continuation_form,
            "sequence_number": cont.sequence_number if cont else None,
            "total_minus_one": cont.total_minus_one if cont else None,
        },
        "security_profile": header.security_profile,
        "signature_hex": header.signature.hex(),
        "signature_bits": len(header.signature),
        "signature_valid": valid,
        "url": header.url,
        "dialect_id": header.dialect_id,
        "dialect_version": header.dialect_version,
        "dialect_name": entry.name if entry else None,
        "dialect_status": status.value,
        "dialect_code_hex": code.hex(),
        "dialect_code_bits": len(code),
    }


def format_report(rep: dict) -> str:
    cont = rep["continuation"]
    if cont["form"] == "absent":
        cont_text = "absent"
    else:
        cont_text = (
            f"{cont['form']} (fragment {cont['sequence_number']}, "
            f"last index {cont['total_minus_one']})"
        )
    if rep["security_profile"]:
        validity = {None: "not checked", True: "valid", False: "INVALID"}[rep["signature_valid"]]
        security = (
            f"profile {rep['security_profile']}, signature {rep['signature_hex'] or '-'} "
            f"({rep['signature_bits']} bits, {validity})"
        )
    else:
        security = "none (profile 0)"
    name = rep["dialect_name"] or "unregistered"
    lines = []
    if rep["stream_bits"] is not None:
        lines.append(f"stream:        {rep['stream_bits']} bits")
    if rep["padding_bits"] is not None:
        lines.append(f"padding:       {rep['padding_bits']} bits")
    lines += [
        f"continuation:  {cont_text}",
        f"security:      {security}",
        f"url:           {'(absent)' if rep['url'] is None else repr(rep['url'])}",
        f"dialect:       id {rep['dialect_id']} version {rep['dialect_version']} "
        f"({name}, {rep['dialect_status']})",
        f"dialect code:  {rep['dialect_code_bits']} bits {rep['dialect_code_hex'] or '-'}",
    ]
    return "\n".join(lines) + "\n"


def _emit_report(rep: dict, args) -> None:
    if args.machine_readable:
        text = json.dumps(rep, ensure_ascii=False, sort_keys=True) + "\n"
    else:
        text = format_report(rep)
    _write_output(text, getattr(args, "out", None))


def cmd_encode(args) -> int:
    manifest = _load(args)
    registry = _registry(args)
    mode = Mode(args.mode) if args.mode else manifest.mode
    header = _signed_header(manifest, registry)
    try:
        body = encode_header_body(header, manifest.dialect_code)
    except (InvalidUrl, InvariantViolation) as exc:
        raise _fail(EXIT_MANIFEST, exc) from None
    stream = frame(body, mode)
    payload = _to_payload(stream, mode)
    _diag(
        f"mode: {mode.value}, stream: {len(stream)} bits, "
        f"padding: {len(stream) - len(body) - 1} bits, payload: {len(payload.data)} "
        f"{'bytes' if mode is Mode.BINARY else 'digits'}"
    )
    _write_output(_payload_bytes(payload), args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    registry = _registry(args)
    stream = _read_stream(args.input, Mode(args.mode))
    try:
        header, code = decode_header(stream, registry)
    except DecodeError as exc:
        raise _fail(EXIT_DECODE, exc) from None
    padding = stream.first_one()
    _emit_report(report(header, code, registry, padding, len(stream)), args)
    return EXIT_OK


def cmd_inspect(args) -> int:
    registry = _registry(args)
    stream = _read_stream(args.input, Mode(args.mode))
    trace: list = []
    error = None
    try:
        decode_header(stream, registry, trace)
    except DecodeError as exc:
        error = exc
    lines = [f"{'offset':>7} {'bits':>6}  {'field':<30} value"]
    for item in trace:
        width = item.end - item.start
        raw = str(stream[item.start:item.end])
        if len(raw) > 40:
            raw = raw[:37] + "..."
        value = item.value
        if isinstance(value, BitString):
            value = f"{len(value)} bits {value.hex() or '-'}"
            if len(value) > 60:
                value = value[:57] + "..."
        lines.append(f"{item.start:>7} {width:>6}  {item.name:<30} {value!s}  [{raw}]")
    _write_output("\n".join(lines) + "\n", args.out)
    if error is not None:
        _diag(f"error: {type(error).__name__}: {error}")
        return EXIT_DECODE
    return EXIT_OK


def cmd_fragment(args) -> int:
    registry = _registry(args)
    budget = args.budget
    mode = Mode(args.mode) if args.mode else Mode.BINARY
    if args.raw:
        body = from_bytes(_read_input(args.manifest, True))
    else:
        manifest = _load(args)
        if not args.mode:
            mode = manifest.mode
        if budget is None:
            budget = manifest.budget
        # fragments carry their own continuation; sign the program without one
        manifest.header = replace(manifest.header, continuation=None)
        header = _signed_header(manifest, registry)
        try:
            body = encode_logical_body(header, manifest.dialect_code)
        except (InvalidUrl, InvariantViolation) as exc:
            raise _fail(EXIT_MANIFEST, exc) from None
    if budget is None:
        raise CommandError(EXIT_MANIFEST, "no fragment budget: pass --budget or set budget in the manifest")
    try:
        streams = split(body, budget, align=mode is Mode.BINARY)
    except FragmentError as exc:
        raise _fail(EXIT_FRAGMENT, exc) from None
    payloads = [_to_payload(s, mode) for s in streams]

    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    ext = "bin" if mode is Mode.BINARY else "txt"
    index = [f"# {len(streams)} fragments, {len(body)} body bits, mode {mode.value}"]
    for seq, payload in enumerate(payloads):
        name = f"fragment-{seq:03d}.{ext}"
        _write_output(_payload_bytes(payload), os.path.join(out_dir, name))
        index.append(f"{seq} {len(streams) - 1} {name} {len(streams[seq])}")
    _write_output("\n".join(index) + "\n", os.path.join(out_dir, "index.txt"))
    _diag(f"wrote {len(streams)} fragments to {out_dir}")
    return EXIT_OK


def cmd_assemble(args) -> int:
    mode = Mode(args.mode)
    state = AssemblyState()
    for path in args.fragments:
        stream = _read_stream(path, mode)
        try:
            state, progress = feed(state, stream)
        except FragmentError as exc:
            raise CommandError(EXIT_FRAGMENT, f"{path}: {type(exc).__name__}: {exc}") from None
        except DecodeError as exc:
            raise CommandError(EXIT_DECODE, f"{path}: {type(exc).__name__}: {exc}") from None
        missing = ", ".join(map(str, sorted(progress.missing))) or "none"
        _diag(f"{path}: {len(progress.received)}/{progress.total} received, missing: {missing}")
    try:
        body = assemble(state)
    except FragmentError as exc:
        raise _fail(EXIT_FRAGMENT, exc) from None

    if args.format == "bits":
        _write_output(str(body) + "\n", args.out)
    elif args.format == "report":
        registry = _registry(args)
        try:
            header, code = decode_logical_body(body, registry)
        except DecodeError as exc:
            raise _fail(EXIT_DECODE, exc) from None
        _emit_report(report(header, code, registry, None, len(body)), args)
    else:
        try:
            data = to_bytes(body)
        except Misaligned as exc:
            raise CommandError(
                EXIT_FRAGMENT, f"Misaligned: {exc}; use --format bits or --format report"
            ) from None
        _write_output(data, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrscript", description="QRscript eQRbytecode codec")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mode_default: Optional[str] = "binary"):
        p.add_argument("--mode", choices=[m.value for m in Mode], default=mode_default)
        p.add_argument("--profile-config", metavar="PATH", help="security profile definitions")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    p = sub.add_parser("encode", help="encode a manifest into a QR payload")
    p.add_argument("manifest")
    common(p, None)
    p.set_defaults(func=cmd_encode)

    for name, func, text in (
        ("decode", cmd_decode, "decode a payload and report its header"),
        ("inspect", cmd_inspect, "dump the bit layout of a payload field by field"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("input", help="payload file, or - for stdin")
        common(p)
        if name == "decode":
            p.add_argument("--machine-readable", action="store_true", help="JSON report")
        p.set_defaults(func=func)

    p = sub.add_parser("fragment", help="split a program over several payloads")
    p.add_argument("manifest", help="manifest, or a raw body file with --raw")
    common(p, None)
    p.add_argument("--budget", type=int, metavar="BITS", help="maximum bits per fragment")
    p.add_argument("--raw", action="store_true", help="treat the input file's bytes as the logical body")
    p.set_defaults(func=cmd_fragment)

    p = sub.add_parser("assemble", help="rebuild a program from fragment payloads")
    p.add_argument("fragments", nargs="+")
    common(p)
    p.add_argument("--format", choices=["bytes", "bits", "report"], default="bytes")
    p.add_argument("--machine-readable", action="store_true", help="JSON report")
    p.set_defaults(func=cmd_assemble)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        _diag(f"error: {exc}")
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
