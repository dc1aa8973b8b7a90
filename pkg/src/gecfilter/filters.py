"""Perplexity-based over-correction filters at three granularities.

Each filter compares a system hypothesis against its source under one
language model and keeps only the rewriting the model likes. All three are
conservative: the output is always the source with some subset of the
extracted edits applied, ties favour the source, and no filter ever invents
an edit of its own.
"""

from __future__ import annotations

from .edits import EditSet, apply_edits, extract_edits
from .lm import LMScorer, sentence_perplexity


def filter_sentence_level(src: str, hyp: str, scorer: LMScorer) -> str:
    """Keep the whole hypothesis iff it strictly lowers perplexity."""
    if hyp == src:
        return src
    if sentence_perplexity(scorer, hyp) < sentence_perplexity(scorer, src):
        return hyp
    return src


def filter_edit_level(src: str, hyp: str, scorer: LMScorer) -> str:
    """Keep each edit iff applying it alone strictly lowers perplexity."""
    edits = extract_edits(src, hyp)
    if not edits:
        return src
    base = sentence_perplexity(scorer, src)
    kept = tuple(
        e for e in edits
        if sentence_perplexity(scorer, apply_edits(src, EditSet((e,)))) < base)
    return apply_edits(src, EditSet(kept))


def filter_edit_combination(src: str, hyp: str, scorer: LMScorer,
                            max_exhaustive: int = 12,
                            beam_width: int = 8) -> str:
    """Search edit subsets for the lowest-perplexity combination.

    Up to `max_exhaustive` edits every subset is scored; the minimum wins,
    with ties broken by fewer edits and then by the lexicographically
    smaller tuple of edit indices (so the empty subset, the source, wins an
    exact tie). Longer edit lists fall back to a beam search over edits in
    position order, and the beam winner is still compared against both the
    untouched source and the full hypothesis.
    """
    if max_exhaustive < 0:
        raise ValueError(f"max_exhaustive must be >= 0, got {max_exhaustive}")
    if beam_width < 1:
        raise ValueError(f"beam_width must be >= 1, got {beam_width}")
    edits = tuple(extract_edits(src, hyp))
    m = len(edits)
    if m == 0:
        return src

    def evaluate(indices: tuple[int, ...]) -> tuple[float, int, tuple[int, ...]]:
        text = apply_edits(src, EditSet(tuple(edits[i] for i in indices)))
        return (sentence_perplexity(scorer, text), len(indices), indices)

    if m <= max_exhaustive:
        best = min(evaluate(_mask_indices(mask, m)) for mask in range(1 << m))
    else:
        beam = [evaluate(())]
        for t in range(m):
            grown = [evaluate(key[2] + (t,)) for key in beam]
            beam = sorted(beam + grown)[:beam_width]
        full = tuple(range(m))
        best = min(beam[0], evaluate(()), evaluate(full))
    return apply_edits(src, EditSet(tuple(edits[i] for i in best[2])))


def _mask_indices(mask: int, m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m) if mask >> i & 1)
