"""Text manifests and profile configs read by the command-line tool.

A manifest is one ``key = value`` pair per line; blank lines and lines
starting with ``#`` are skipped.  Keys::

    continuation      none | present                (default none)
    sequence_number   int, with continuation present (default 0)
    total_minus_one   int, with continuation present (default 0)
    security_profile  int                            (default 0)
    signature         auto | hex:<digits> | bits:<0/1>   (default auto)
    url               text to end of line; omit the key for no URL
    dialect_id        int                            (default 0)
    dialect_version   int                            (default 0)
    dialect_code      hex:<digits> | bits:<0/1> | file:<path to hex text>
    dialect_code_bits int, keep only the first N bits of dialect_code
    mode              binary | numeric               (default binary)
    budget            int, fragment size in bits

A profile config has one profile per line: the id, then ``key=value``
options ``length=<bits>`` (required), ``algorithm=xor8``,
``coverage=whole_stream|exclude_continuation`` and the bare flag
``reserved`` to allow ids 1-12.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from .bitstream import BitString, from_bytes
from .errors import InvalidUrl, InvariantViolation, QRScriptError
from .header import ContinuationInfo, Header
from .payload import Mode
from .security import Coverage, SecurityProfileDescriptor, SecurityProfileRegistry, test_profile

__all__ = ["ManifestError", "Manifest", "parse_manifest", "load_manifest", "parse_profile_config", "load_profile_config", "parse_bits"]

_KEYS = {
    "continuation",
    "sequence_number",
    "total_minus_one",
    "security_profile",
    "signature",
    "url",
    "dialect_id",
    "dialect_version",
    "dialect_code",
    "dialect_code_bits",
    "mode",
    "budget",
}


class ManifestError(QRScriptError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class Manifest:
    header: Header
    dialect_code: BitString
    mode: Mode = Mode.BINARY
    budget: Optional[int] = None
    # signature to be computed with the profile's signer
    sign: bool = False
    source_lines: Dict[str, int] = field(default_factory=dict)


def parse_bits(text: str, base_dir: str = ".") -> BitString:
    """Decode a ``hex:``, ``bits:`` or ``file:`` reference."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"expected hex:, bits: or file: prefix, got {text!r}")
    kind = kind.strip().lower()
    rest = rest.strip()
    if kind == "bits":
        return BitString(rest)
    if kind == "file":
        path = rest if os.path.isabs(rest) else os.path.join(base_dir, rest)
        with open(path, encoding="ascii") as fh:
            rest = fh.read()
        kind = "hex"
    if kind == "hex":
        digits = "".join(rest.split())
        if len(digits) % 2:
            raise ValueError("hex input needs an even number of digits")
        return from_bytes(bytes.fromhex(digits))
    raise ValueError(f"unknown bit source {kind!r}")


def _int(value: str, line: int, key: str) -> int:
    try:
        number = int(value, 10)
    except ValueError:
        raise ManifestError(f"expected a non-negative integer, got {value!r}", line, key) from None
    if number < 0:
        raise ManifestError(f"expected a non-negative integer, got {value!r}", line, key)
    return number


def parse_manifest(text: str, base_dir: str = ".") -> Manifest:
    fields: Dict[str, Tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = raw.partition("=")
        key = key.strip()
        if not sep:
            raise ManifestError("expected 'key = value'", lineno)
        if key not in _KEYS:
            raise ManifestError("unknown key", lineno, key)
        if key in fields:
            raise ManifestError(f"duplicate key (first set on line {fields[key][1]})", lineno, key)
        # only one separating space is dropped from the URL so it may keep others
        if key == "url":
            value = value[1:] if value.startswith(" ") else value
            value = value.rstrip("\r\n")
        else:
            value = value.strip()
        fields[key] = (value, lineno)

    def get(key: str) -> Optional[str]:
        return fields[key][0] if key in fields else None

    def line(key: str) -> Optional[int]:
        return fields[key][1] if key in fields else None

    def number(key: str, default: int) -> int:
        return _int(fields[key][0], fields[key][1], key) if key in fields else default

    continuation = None
    form = (get("continuation") or "none").lower()
    if form == "present":
        try:
            continuation = ContinuationInfo(number("sequence_number", 0), number("total_minus_one", 0))
        except InvariantViolation as exc:
            raise ManifestError(str(exc), line("sequence_number"), "sequence_number") from None
    elif form == "none":
        for key in ("sequence_number", "total_minus_one"):
            if key in fields:
                raise ManifestError("set continuation = present to use this key", line(key), key)
    else:
        raise ManifestError(f"expected none or present, got {form!r}", line("continuation"), "continuation")

    profile = number("security_profile", 0)
    signature = BitString()
    sign = False
    sig_text = get("signature")
    if sig_text is None or sig_text.lower() == "auto":
        sign = profile != 0
    else:
        try:
            signature = parse_bits(sig_text, base_dir)
        except (ValueError, OSError) as exc:
            raise ManifestError(str(exc), line("signature"), "signature") from None

    code = BitString()
    if "dialect_code" in fields:
        try:
            code = parse_bits(get("dialect_code"), base_dir)
        except (ValueError, OSError) as exc:
            raise ManifestError(str(exc), line("dialect_code"), "dialect_code") from None
    if "dialect_code_bits" in fields:
        keep = number("dialect_code_bits", 0)
        if keep > len(code):
            raise ManifestError(
                f"asks for {keep} bits but dialect_code has {len(code)}",
                line("dialect_code_bits"),
                "dialect_code_bits",
            )
        code = code[:keep]

    try:
        mode = Mode((get("mode") or "binary").lower())
    except ValueError:
        raise ManifestError(f"expected binary or numeric, got {get('mode')!r}", line("mode"), "mode") from None

    budget = number("budget", 0) if "budget" in fields else None

    header = Header(
        continuation=continuation,
        security_profile=profile,
        signature=signature,
        url=get("url"),
        dialect_id=number("dialect_id", 0),
        dialect_version=number("dialect_version", 0),
    )
    try:
        (replace(header, signature=BitString()) if sign else header).validate()
    except InvalidUrl as exc:
        raise ManifestError(str(exc), line("url"), "url") from None
    except QRScriptError as exc:
        raise ManifestError(str(exc), line("signature"), "signature") from None

    return Manifest(
        header=header,
        dialect_code=code,
        mode=mode,
        budget=budget,
        sign=sign,
        source_lines={key: ln for key, (_, ln) in fields.items()},
    )


def load_manifest(path: str) -> Manifest:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_manifest(text, os.path.dirname(os.path.abspath(path)))


def parse_profile_config(text: str) -> SecurityProfileRegistry:
    registry = SecurityProfileRegistry()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        pid = _int(parts[0], lineno, "profile id")
        options = {}
        allow_reserved = False
        for token in parts[1:]:
            if token == "reserved":
                allow_reserved = True
                continue
            key, sep, value = token.partition("=")
            if not sep or key not in ("length", "algorithm", "coverage"):
                raise ManifestError(f"unexpected option {token!r}", lineno)
            options[key] = value
        if "length" not in options:
            raise ManifestError("missing length=<bits>", lineno)
        length = _int(options["length"], lineno, "length")
        try:
            coverage = Coverage(options.get("coverage", "whole_stream"))
        except ValueError:
            raise ManifestError(f"unknown coverage {options['coverage']!r}", lineno, "coverage") from None
        algorithm = options.get("algorithm")
        try:
            if algorithm == "xor8":
                if length != 8:
                    raise ManifestError("xor8 signatures are 8 bits", lineno, "length")
                descriptor = test_profile(pid, coverage)
            elif algorithm is None:
                descriptor = SecurityProfileDescriptor(pid, length, coverage)
            else:
                raise ManifestError(f"unknown algorithm {algorithm!r}", lineno, "algorithm")
            registry.register(descriptor, allow_reserved=allow_reserved)
        except ManifestError:
            raise
        except QRScriptError as exc:
            raise ManifestError(f"{type(exc).__name__}: {exc}", lineno) from None
    return registry


def load_profile_config(path: str) -> SecurityProfileRegistry:
    with open(path, encoding="utf-8") as fh:
        return parse_profile_config(fh.read())
