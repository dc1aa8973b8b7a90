"""Seeded random data builders shared by the unit and acceptance tests."""

from __future__ import annotations

import random
import string

from gecfilter.edits import Edit, EditSet
from gecfilter.kfold import ParallelExample
from gecfilter.m2 import M2Entry

# Disjoint character pools. Keeping clean text, planted errors, spurious
# system edits and gold insertions in separate alphabets makes synthetic
# corpora easy to audit by eye.
HANZI_A = "".join(chr(c) for c in range(0x4E00, 0x4E00 + 300))
HANZI_B = "".join(chr(c) for c in range(0x5100, 0x5100 + 300))
HANZI_C = "".join(chr(c) for c in range(0x5300, 0x5300 + 300))
HANZI_D = "".join(chr(c) for c in range(0x5500, 0x5500 + 300))
ASCII_SAFE = string.ascii_letters + string.digits + "?!,.;:'-"
MIXED = HANZI_A + ASCII_SAFE
EDIT_TYPES = ("R", "S", "M", "W")


def rand_chars(rng: random.Random, pool: str, lo: int, hi: int) -> str:
    return "".join(rng.choice(pool) for _ in range(rng.randint(lo, hi)))


def rand_sentence(rng: random.Random, lo: int = 0, hi: int = 24,
                  pool: str = MIXED) -> str:
    return rand_chars(rng, pool, lo, hi)


def distinct_run(rng: random.Random, pool: str, lo: int, hi: int) -> str:
    """Random characters with no immediate repeats."""
    out = []
    for _ in range(rng.randint(lo, hi)):
        ch = rng.choice(pool)
        while out and ch == out[-1]:
            ch = rng.choice(pool)
        out.append(ch)
    return "".join(out)


def rand_edit_set(rng: random.Random, src_len: int, max_edits: int = 4,
                  pool: str = MIXED) -> EditSet:
    """A random valid edit set against a sentence of length src_len."""
    edits = []
    pos = 0
    for _ in range(rng.randint(0, max_edits)):
        start = pos + rng.randint(0, 4)
        if start > src_len:
            break
        etype = rng.choice(EDIT_TYPES)
        kind = rng.choice(("sub", "del", "ins"))
        if kind == "ins":
            edits.append(Edit(start, start, rand_chars(rng, pool, 1, 2),
                              etype=etype))
            pos = start + 1
        else:
            end = min(src_len, start + rng.randint(1, 2))
            if end == start:
                break
            repl = "" if kind == "del" else rand_chars(rng, pool, 1, 2)
            edits.append(Edit(start, end, repl, etype=etype))
            pos = end
    return EditSet(tuple(edits))


def rand_m2_entry(rng: random.Random) -> M2Entry:
    source = rand_sentence(rng, 3, 14)
    annotators = rng.sample(range(4), rng.randint(1, 3))
    annotations = {
        aid: rand_edit_set(rng, len(source)) for aid in annotators}
    return M2Entry(source, annotations)


def corruption_triple(rng: random.Random) -> tuple[str, str, str]:
    """One (src, system_hyp, gold) row shaped like real corrector output.

    Error sites (wrong text the gold fixes) and spurious sites (correct
    text the system rewrites anyway) are separated by fresh filler, and
    each site's characters come from a pool disjoint from the clean text,
    so the planted edits cannot bleed into each other under re-alignment.
    """
    b_chars = iter(rng.sample(HANZI_B, 24))
    c_chars = iter(rng.sample(HANZI_C, 24))
    d_chars = iter(rng.sample(HANZI_D, 24))
    take = lambda it, k: "".join(next(it) for _ in range(k))

    kinds = ["err"] * rng.randint(0, 3) + ["spur"] * rng.randint(0, 3)
    rng.shuffle(kinds)
    src_parts: list[str] = []
    hyp_parts: list[str] = []
    gold_parts: list[str] = []

    def filler() -> None:
        # Sampling without replacement keeps repeats out of each chunk;
        # repeated characters at small distances are what let an insertion
        # and a deletion re-align as substitutions.
        chunk = "".join(rng.sample(HANZI_A + string.ascii_lowercase,
                                   rng.randint(3, 8)))
        src_parts.append(chunk)
        hyp_parts.append(chunk)
        gold_parts.append(chunk)

    filler()
    for kind in kinds:
        if kind == "err":
            op = rng.choice(("sub", "del", "ins"))
            width = rng.randint(1, 2)
            if op == "sub":
                src_piece, gold_piece = take(b_chars, width), take(d_chars, width)
            elif op == "del":
                src_piece, gold_piece = take(b_chars, width), ""
            else:
                src_piece, gold_piece = "", take(d_chars, width)
            hyp_piece = gold_piece if rng.random() < 0.6 else src_piece
        else:
            op = rng.choice(("sub", "sub", "del", "ins"))
            width = rng.randint(1, 2)
            if op == "sub":
                base = distinct_run(rng, HANZI_A, width, width)
                src_piece = gold_piece = base
                hyp_piece = take(c_chars, width)
            elif op == "del":
                base = rng.choice(HANZI_A)
                src_piece = gold_piece = base
                hyp_piece = ""
            else:
                src_piece = gold_piece = ""
                hyp_piece = take(c_chars, width)
        src_parts.append(src_piece)
        hyp_parts.append(hyp_piece)
        gold_parts.append(gold_piece)
        filler()
    return "".join(src_parts), "".join(hyp_parts), "".join(gold_parts)


def unique_parallel_corpus(rng: random.Random, n: int,
                           n_refs: int = 1) -> list[ParallelExample]:
    """n distinct sentences, each with simple substitution references."""
    seen: set[str] = set()
    examples = []
    while len(examples) < n:
        source = rand_sentence(rng, 6, 18, pool=HANZI_A + string.ascii_lowercase)
        if not source or source in seen:
            continue
        seen.add(source)
        refs = []
        for _ in range(n_refs):
            pos = rng.randrange(len(source))
            refs.append(source[:pos] + rng.choice(HANZI_D) + source[pos + 1:])
        examples.append(ParallelExample(source, tuple(refs)))
    return examples
