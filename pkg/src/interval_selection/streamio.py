"""Text formats for streams, gadget secrets and run statistics.

A stream file starts with the header ``INTERVALS v1``; every other line is
blank, a ``#`` comment, or one interval such as ``[1/2 3/1)``.  Coordinates
are always written as ``numerator/denominator`` in lowest terms.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, TextIO

from .adversary import GadgetSecret
from .core import Interval, make_interval

STREAM_HEADER = "INTERVALS v1"
SECRET_HEADER = "SECRET v1"

_LINE = re.compile(r"([\[(])\s*(-?\d+)/(\d+)\s+(-?\d+)/(\d+)\s*([\])])")


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RangeError(ParseError):
    """An interval whose left end does not precede its right end."""


def _fraction(text: str) -> str:
    f = Fraction(text)
    return f"{f.numerator}/{f.denominator}"


def format_interval(iv: Interval) -> str:
    lb = "[" if iv.lo.closed else "("
    rb = "]" if iv.hi.closed else ")"
    return f"{lb}{_fraction(iv.left)} {_fraction(iv.right)}{rb}"


def emit_stream(stream: Iterable[Interval]) -> str:
    return "".join(f"{line}\n" for line in _emit_lines(stream))


def _emit_lines(stream):
    yield STREAM_HEADER
    for iv in stream:
        yield format_interval(iv)


def write_stream(stream: Iterable[Interval], fh: TextIO) -> None:
    for line in _emit_lines(stream):
        fh.write(line + "\n")


def iter_stream(lines: Iterable[str]) -> Iterator[Interval]:
    """Parse lines lazily, assigning arrival indices in file order."""
    header_seen = False
    arrival = 0
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != STREAM_HEADER:
                raise ParseError(number, f"expected header {STREAM_HEADER!r}")
            header_seen = True
            continue
        yield _parse_interval(line, number, arrival)
        arrival += 1
    if not header_seen:
        raise ParseError(0, "missing header")


def _parse_interval(line: str, number: int, arrival: int) -> Interval:
    m = _LINE.fullmatch(line)
    if m is None:
        raise ParseError(number, f"malformed interval {line!r}")
    lb, ln, ld, rn, rd, rb = m.groups()
    if int(ld) == 0 or int(rd) == 0:
        raise ParseError(number, "zero denominator")
    left, right = Fraction(int(ln), int(ld)), Fraction(int(rn), int(rd))
    if not left < right:
        raise RangeError(number, f"left end {left} does not precede right end {right}")
    return make_interval(left, right, arrival, lb + rb)


def parse_stream(text: str) -> list[Interval]:
    return list(iter_stream(text.splitlines()))


# -- secrets -----------------------------------------------------------------

def emit_secret(secret: GadgetSecret) -> str:
    seed = "-" if secret.seed is None else str(secret.seed)
    lines = [
        SECRET_HEADER,
        f"kind={secret.kind} n={secret.n} size={secret.size} seed={seed} inset={int(secret.inset)}",
    ]
    for t, (pi, i) in enumerate(zip(secret.perms, secret.indices)):
        lines.append(f"phase={t} i={i} pi={','.join(map(str, pi))}")
    return "\n".join(lines) + "\n"


def _fields(line: str, number: int) -> dict[str, str]:
    out = {}
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise ParseError(number, f"expected key=value, got {token!r}")
        out[key] = value
    return out


def parse_secret(text: str) -> GadgetSecret:
    body = [
        (n, line.strip())
        for n, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not body or body[0][1] != SECRET_HEADER:
        raise ParseError(body[0][0] if body else 0, f"expected header {SECRET_HEADER!r}")
    if len(body) < 2:
        raise ParseError(body[0][0], "missing gadget description")
    number, line = body[1]
    head = _fields(line, number)
    try:
        kind, n, size = head["kind"], int(head["n"]), int(head["size"])
        seed = None if head.get("seed", "-") == "-" else int(head["seed"])
        inset = head.get("inset", "1") == "1"
    except (KeyError, ValueError) as exc:
        raise ParseError(number, f"bad gadget description: {exc}") from None
    perms, indices = [], []
    for number, line in body[2:]:
        rec = _fields(line, number)
        try:
            phase = int(rec["phase"])
            index = int(rec["i"])
            pi = tuple(int(v) for v in rec["pi"].split(","))
        except (KeyError, ValueError) as exc:
            raise ParseError(number, f"bad phase record: {exc}") from None
        if phase != len(perms):
            raise ParseError(number, "phases out of order")
        indices.append(index)
        perms.append(pi)
    try:
        return GadgetSecret(kind, n, size, tuple(perms), tuple(indices), seed, inset)
    except ValueError as exc:
        raise ParseError(number, str(exc)) from None
