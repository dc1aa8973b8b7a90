"""Reading and writing the M2 annotation format, character mode.

A block looks like::

    S 他 们 到 course 了
    A 3 4|||R|||达|||REQUIRED|||-NONE-|||0
    A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||1

The ``S`` line carries the source as space-separated single characters, one
``A`` line per edit (token indices and token indices coincide in character
mode), and a ``noop`` line marks an annotator who left the sentence alone.
The ``REQUIRED|||-NONE-`` filler fields are constants of the format. Blocks
are separated by a blank line; files are UTF-8 with ``\\n`` endings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .edits import Edit, EditSet
from .errors import InvalidEditSetError, M2ParseError

NOOP_TYPE = "noop"
_EMPTY_CORRECTION = "-NONE-"
_FILLER = "REQUIRED|||-NONE-"


@dataclass
class M2Entry:
    """One source sentence plus per-annotator edit sets."""

    source: str
    annotations: dict[int, EditSet] = field(default_factory=dict)

    def validate(self) -> None:
        for aid, edit_set in self.annotations.items():
            if aid < 0:
                raise InvalidEditSetError(f"negative annotator id {aid}")
            edit_set.validate_against(len(self.source))


def parse_m2(text: str) -> list[M2Entry]:
    """Parse M2 text into entries. Raises M2ParseError with line numbers."""
    entries: list[M2Entry] = []
    source: str | None = None
    pending: dict[int, list[Edit]] = {}
    noops: set[int] = set()
    s_line_no = 0

    def flush() -> None:
        nonlocal source, pending, noops
        if source is None:
            return
        annotations: dict[int, EditSet] = {}
        for aid in sorted(set(pending) | noops):
            try:
                annotations[aid] = EditSet.from_edits(pending.get(aid, []))
            except InvalidEditSetError as exc:
                raise InvalidEditSetError(
                    f"annotator {aid} of sentence at line {s_line_no}: {exc}"
                ) from exc
        entry = M2Entry(source, annotations)
        entry.validate()
        entries.append(entry)
        source, pending, noops = None, {}, set()

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            flush()
            continue
        if line == "S" or line.startswith("S "):
            if source is not None:
                raise M2ParseError(line_no, "second S line inside a block")
            rest = line[2:]
            tokens = rest.split(" ") if rest else []
            if any(t == "" for t in tokens):
                raise M2ParseError(line_no, "empty token on S line")
            source = "".join(tokens)
            s_line_no = line_no
        elif line.startswith("A "):
            if source is None:
                raise M2ParseError(line_no, "A line before any S line")
            fields = line[2:].split("|||")
            if len(fields) != 6:
                raise M2ParseError(
                    line_no, f"expected 6 |||-separated fields, got {len(fields)}")
            span_part, etype, correction, _req, _none, annotator = fields
            span_tokens = span_part.split()
            if len(span_tokens) != 2:
                raise M2ParseError(line_no, f"bad span field {span_part!r}")
            try:
                start, end = int(span_tokens[0]), int(span_tokens[1])
                aid = int(annotator)
            except ValueError:
                raise M2ParseError(line_no, "non-integer span or annotator id")
            if aid < 0:
                raise M2ParseError(line_no, f"negative annotator id {aid}")
            if etype == NOOP_TYPE or (start, end) == (-1, -1):
                if etype != NOOP_TYPE or (start, end) != (-1, -1):
                    raise M2ParseError(line_no, "malformed noop line")
                if aid in pending or aid in noops:
                    raise M2ParseError(
                        line_no, f"noop clashes with other lines of annotator {aid}")
                noops.add(aid)
                continue
            if aid in noops:
                raise M2ParseError(
                    line_no, f"edit after a noop line for annotator {aid}")
            if start < 0 or end < start:
                raise M2ParseError(line_no, f"bad span [{start}, {end})")
            replacement = "" if correction == _EMPTY_CORRECTION \
                else "".join(correction.split(" "))
            if start == end and not replacement:
                raise M2ParseError(line_no, "insertion with empty correction")
            pending.setdefault(aid, []).append(
                Edit(start, end, replacement, etype=etype))
        else:
            raise M2ParseError(line_no, f"unrecognized line {line!r}")
    flush()
    return entries


def write_m2(entries: list[M2Entry]) -> str:
    """Render entries as M2 text; inverse of parse_m2 for valid entries.

    Annotators are emitted in ascending id order and an empty edit set
    becomes a single noop line. Sentences may not contain whitespace
    characters, which the space-separated format cannot carry.
    """
    blocks = []
    for entry in entries:
        entry.validate()
        _check_writable(entry.source)
        lines = ["S " + " ".join(entry.source) if entry.source else "S"]
        for aid in sorted(entry.annotations):
            edit_set = entry.annotations[aid]
            if not edit_set:
                lines.append(
                    f"A -1 -1|||{NOOP_TYPE}|||{_EMPTY_CORRECTION}|||{_FILLER}|||{aid}")
                continue
            for e in edit_set:
                _check_writable(e.replacement)
                if "|" in e.etype or not e.etype:
                    raise ValueError(f"unwritable edit type {e.etype!r}")
                correction = " ".join(e.replacement) if e.replacement \
                    else _EMPTY_CORRECTION
                lines.append(
                    f"A {e.src_start} {e.src_end}|||{e.etype}|||{correction}"
                    f"|||{_FILLER}|||{aid}")
        blocks.append("\n".join(lines) + "\n\n")
    return "".join(blocks)


def _check_writable(text: str) -> None:
    for ch in text:
        if ch.isspace():
            raise ValueError(
                f"whitespace unit {ch!r} cannot be written in character M2")
