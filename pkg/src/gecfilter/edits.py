"""Character-level edit extraction and application.

A sentence is a plain ``str``: Python code points are exactly the atomic
units we align, so CJK and ASCII text need no special casing and lengths
count characters, never bytes. All functions here are pure and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InvalidEditError, InvalidEditSetError

# Backtrace op codes. Tie order during alignment is substitute, then
# delete, then insert, which keeps extraction deterministic.
_MATCH, _SUB, _DEL, _INS = 0, 1, 2, 3


@dataclass(frozen=True)
class Edit:
    """Replacement of source units ``[src_start, src_end)`` by ``replacement``.

    Insertions have ``src_start == src_end``. The M2 error-type tag rides
    along for round-tripping but takes no part in equality or hashing.
    """

    src_start: int
    src_end: int
    replacement: str
    etype: str = field(default="R", compare=False)

    def __post_init__(self):
        if self.src_start < 0 or self.src_end < self.src_start:
            raise InvalidEditError(
                f"bad span [{self.src_start}, {self.src_end})")
        if self.src_start == self.src_end and not self.replacement:
            raise InvalidEditError(
                f"null edit at position {self.src_start}")

    @property
    def is_insertion(self) -> bool:
        return self.src_start == self.src_end

    def key(self) -> tuple[int, int, str]:
        """Identity used for matching edits across systems and references."""
        return (self.src_start, self.src_end, self.replacement)


@dataclass(frozen=True)
class EditSet:
    """A sorted, pairwise non-overlapping collection of edits.

    Construction validates ordering, overlap and the one-insertion-per-
    position rule; bounds against a concrete sentence are checked by
    :meth:`validate_against` or at application time.
    """

    edits: tuple[Edit, ...] = ()

    def __post_init__(self):
        prev = None
        for e in self.edits:
            if prev is not None:
                if (e.src_start, e.src_end) < (prev.src_start, prev.src_end):
                    raise InvalidEditSetError(
                        f"edits not sorted: [{prev.src_start},{prev.src_end}) "
                        f"before [{e.src_start},{e.src_end})")
                if e.src_start < prev.src_end:
                    raise InvalidEditSetError(
                        f"overlapping edits at [{prev.src_start},{prev.src_end}) "
                        f"and [{e.src_start},{e.src_end})")
                if prev.is_insertion and e.is_insertion \
                        and prev.src_start == e.src_start:
                    raise InvalidEditSetError(
                        f"two insertions at position {e.src_start}")
            prev = e

    @classmethod
    def from_edits(cls, edits: Iterable[Edit]) -> "EditSet":
        """Sort an arbitrary collection and validate it."""
        return cls(tuple(sorted(edits, key=lambda e: (e.src_start, e.src_end))))

    def validate_against(self, source_length: int) -> None:
        # Ends are non-decreasing in a valid set, so the last edit bounds all.
        if self.edits and self.edits[-1].src_end > source_length:
            last = self.edits[-1]
            raise InvalidEditError(
                f"edit [{last.src_start},{last.src_end}) exceeds sentence "
                f"length {source_length}")

    def keys(self) -> set[tuple[int, int, str]]:
        return {e.key() for e in self.edits}

    def __iter__(self) -> Iterator[Edit]:
        return iter(self.edits)

    def __len__(self) -> int:
        return len(self.edits)

    def __bool__(self) -> bool:
        return bool(self.edits)


def extract_edits(src: str, hyp: str) -> EditSet:
    """Extract the minimum-cost character edits that turn `src` into `hyp`.

    Unit costs (match 0, insert/delete/substitute 1), so the total edit
    cost equals the Levenshtein distance. Adjacent non-match operations
    coalesce into one spanned edit, matching M2 conventions. Deterministic:
    the common prefix/suffix is anchored first and ties in the remaining
    window are broken substitute > delete > insert while backtracking.
    """
    if src == hyp:
        return EditSet()
    pre = 0
    limit = min(len(src), len(hyp))
    while pre < limit and src[pre] == hyp[pre]:
        pre += 1
    suf = 0
    limit -= pre
    while suf < limit and src[len(src) - 1 - suf] == hyp[len(hyp) - 1 - suf]:
        suf += 1
    mid_src = src[pre:len(src) - suf]
    mid_hyp = hyp[pre:len(hyp) - suf]
    if not mid_src:
        return EditSet((Edit(pre, pre, mid_hyp),))
    if not mid_hyp:
        return EditSet((Edit(pre, pre + len(mid_src), ""),))
    ops = _align(mid_src, mid_hyp)

    edits = []
    si = hj = 0
    run_s = run_h = -1
    for op in ops:
        if op == _MATCH:
            if run_s >= 0:
                edits.append(Edit(pre + run_s, pre + si, mid_hyp[run_h:hj]))
                run_s = -1
            si += 1
            hj += 1
        else:
            if run_s < 0:
                run_s, run_h = si, hj
            if op == _SUB:
                si += 1
                hj += 1
            elif op == _DEL:
                si += 1
            else:
                hj += 1
    if run_s >= 0:
        edits.append(Edit(pre + run_s, pre + si, mid_hyp[run_h:hj]))
    return EditSet(tuple(edits))


def _align(src: str, hyp: str) -> list[int]:
    """Forward op sequence of the tie-broken minimal alignment."""
    m, n = len(src), len(hyp)
    prev = list(range(n + 1))
    # ops[i][j]: the move that reaches cell (i, j) under the tie order.
    ops = [bytearray([_INS]) * (n + 1)]
    for i in range(1, m + 1):
        ci = src[i - 1]
        cur = [i] + [0] * n
        oprow = bytearray(n + 1)
        oprow[0] = _DEL
        diag = prev[0]
        left = i
        row_prev = prev
        for j in range(1, n + 1):
            up = row_prev[j]
            if hyp[j - 1] == ci:
                best = diag
                bop = _MATCH
            else:
                best = diag + 1
                bop = _SUB
            t = up + 1
            if t < best:
                best = t
                bop = _DEL
            t = left + 1
            if t < best:
                best = t
                bop = _INS
            cur[j] = best
            oprow[j] = bop
            diag = up
            left = best
        prev = cur
        ops.append(oprow)

    path = []
    i, j = m, n
    while i or j:
        op = ops[i][j]
        path.append(op)
        if op == _MATCH or op == _SUB:
            i -= 1
            j -= 1
        elif op == _DEL:
            i -= 1
        else:
            j -= 1
    path.reverse()
    return path


def apply_edits(src: str, edits: EditSet) -> str:
    """Apply an edit set to `src`. Spans address original source indices."""
    edits.validate_against(len(src))
    parts = []
    pos = 0
    for e in edits:
        parts.append(src[pos:e.src_start])
        parts.append(e.replacement)
        pos = e.src_end
    parts.append(src[pos:])
    return "".join(parts)
