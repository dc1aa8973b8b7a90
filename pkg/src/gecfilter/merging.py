"""Gold labels merging.

Combines the edits a correction system proposed with the reference edits
for the same source sentence. Reference edits always win an index conflict,
so the merged candidate realizes every reference correction and a
downstream rewriter is left with a pure keep-or-drop decision.
"""

from __future__ import annotations

from .edits import Edit, EditSet, apply_edits, extract_edits


def conflicts(a: Edit, b: Edit) -> bool:
    """True when two edits claim the same indices.

    Half-open span overlap, two insertions at one position, or an insertion
    strictly inside the other edit's span. Touching edits are compatible.
    """
    if a.src_start < b.src_end and b.src_start < a.src_end:
        return True
    return a.is_insertion and b.is_insertion and a.src_start == b.src_start


def merge_edit_sets(candidate: EditSet, gold: EditSet,
                    source_length: int | None = None) -> EditSet:
    """Union of gold edits with the non-conflicting candidate edits.

    Every gold edit survives verbatim; a candidate edit survives iff it
    conflicts with no gold edit. A candidate edit identical to a gold edit
    conflicts by definition and is therefore kept once, on the gold side.
    Pass `source_length` to check both sets against one sentence first.
    """
    if source_length is not None:
        candidate.validate_against(source_length)
        gold.validate_against(source_length)
    kept = [c for c in candidate if not any(conflicts(c, g) for g in gold)]
    return EditSet.from_edits([*gold, *kept])


def build_candidate(src: str, system_hyp: str, gold: str) -> str:
    """Materialize the training candidate for one (source, system, gold) row.

    Extracts both edit scripts against `src`, merges them with gold
    priority, and applies the merged set, so the result contains every gold
    correction plus whatever extra rewriting the system committed to.
    """
    system_edits = extract_edits(src, system_hyp)
    gold_edits = extract_edits(src, gold)
    return apply_edits(src, merge_edit_sets(system_edits, gold_edits))
