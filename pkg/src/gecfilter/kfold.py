"""K-fold cross inference: over-correction training data from a parallel corpus.

The corpus is split into k folds; an external corrector is trained on the
other k - 1 folds and run on the held-out fold, so every sentence is
corrected by a model that never saw it. Raw system output is then merged
with the reference edits (gold wins conflicts) and emitted as
(source, candidate, gold) triples in corpus order, ready to serialize into
causal-LM training text.
"""

from __future__ import annotations

import json
import random
import shlex
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import ConfigError, CorrectorError, ProtocolError, SerializationError
from .merging import build_candidate

SOS = "<sos>"
CAT = "<cat>"
SEP = "<sep>"
_SPECIAL_TOKENS = (SOS, CAT, SEP)


@dataclass(frozen=True)
class ParallelExample:
    """A source sentence with one or more reference corrections."""

    source: str
    references: tuple[str, ...]

    def __post_init__(self):
        if not self.references:
            raise ValueError("a parallel example needs at least one reference")


@dataclass(frozen=True)
class CandidateTriple:
    """One row of rewriter training data."""

    source: str
    candidate: str
    gold: str


@dataclass(frozen=True)
class CorrectorHandle:
    """Command templates for an external train/infer corrector.

    `train_cmd` must mention {train_file} and {model_dir}; `infer_cmd` must
    mention {model_dir}, {input_file} and {output_file}. Each placeholder
    has to sit inside a single shell token. `model_root`, when set, hosts
    the per-fold model directories; otherwise they live in the work area.
    """

    train_cmd: str
    infer_cmd: str
    model_root: str | None = None

    def __post_init__(self):
        for placeholder in ("{train_file}", "{model_dir}"):
            if placeholder not in self.train_cmd:
                raise ConfigError(f"train_cmd is missing {placeholder}")
        for placeholder in ("{model_dir}", "{input_file}", "{output_file}"):
            if placeholder not in self.infer_cmd:
                raise ConfigError(f"infer_cmd is missing {placeholder}")


def partition(corpus: Sequence, k: int, seed: int) -> list[list[int]]:
    """Shuffle indices with `seed` and deal them into k balanced folds.

    Folds are disjoint, cover the corpus, and their sizes differ by at most
    one. Returns sorted index lists, deterministically for a given seed.
    """
    n = len(corpus)
    if k < 2:
        raise ConfigError(f"k must be >= 2, got {k}")
    if k > n:
        raise ConfigError(f"k={k} exceeds corpus size {n}")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    return [sorted(order[i::k]) for i in range(k)]


def cross_infer(corpus: Sequence[ParallelExample], corrector: CorrectorHandle,
                k: int = 4, seed: int = 0, gold_index: int = 0,
                work_dir: str | Path | None = None,
                jobs: int = 1) -> list[CandidateTriple]:
    """Run the full k-fold loop and return one triple per corpus sentence.

    Each fold trains in its own scratch directory and folds may run in
    parallel (`jobs` > 1); results are reassembled into corpus order either
    way. Corrector failures raise CorrectorError with captured diagnostics,
    and an output with the wrong line count raises ProtocolError.
    """
    if gold_index < 0:
        raise ConfigError(f"gold_index must be >= 0, got {gold_index}")
    for i, example in enumerate(corpus):
        if gold_index >= len(example.references):
            raise ConfigError(
                f"example {i} has {len(example.references)} references, "
                f"gold_index {gold_index} is out of range")
        for text in (example.source, *example.references):
            if any(ch in text for ch in "\t\n\r"):
                raise ValueError(
                    f"example {i} contains tab or newline characters, which "
                    "the corrector file protocol cannot carry")
    folds = partition(corpus, k, seed)

    if work_dir is None:
        with tempfile.TemporaryDirectory(prefix="gecfilter-kfold-") as tmp:
            return _run_folds(corpus, corrector, folds, gold_index,
                              Path(tmp), jobs)
    work_dir = Path(work_dir)
    work_dir.mkdir(parents=True, exist_ok=True)
    return _run_folds(corpus, corrector, folds, gold_index, work_dir, jobs)


def _run_folds(corpus, corrector, folds, gold_index, base: Path,
               jobs: int) -> list[CandidateTriple]:
    def run_one(fold_no: int) -> list[tuple[int, str]]:
        held_out = folds[fold_no]
        held_set = set(held_out)
        fold_dir = base / f"fold_{fold_no:02d}"
        fold_dir.mkdir(parents=True, exist_ok=True)
        if corrector.model_root is not None:
            model_dir = Path(corrector.model_root) / f"fold_{fold_no:02d}"
        else:
            model_dir = fold_dir / "model"
        model_dir.mkdir(parents=True, exist_ok=True)

        train_file = fold_dir / "train.tsv"
        train_lines = [
            f"{ex.source}\t{ex.references[gold_index]}"
            for i, ex in enumerate(corpus) if i not in held_set]
        train_file.write_text("".join(line + "\n" for line in train_lines),
                              encoding="utf-8")
        input_file = fold_dir / "input.txt"
        input_file.write_text(
            "".join(corpus[i].source + "\n" for i in held_out),
            encoding="utf-8")
        output_file = fold_dir / "output.txt"

        mapping = {"train_file": str(train_file), "model_dir": str(model_dir),
                   "input_file": str(input_file),
                   "output_file": str(output_file)}
        _run_command(corrector.train_cmd, mapping, fold_no, "train")
        _run_command(corrector.infer_cmd, mapping, fold_no, "infer")

        if not output_file.exists():
            raise ProtocolError("corrector wrote no output file", fold=fold_no)
        out_lines = output_file.read_text(encoding="utf-8").splitlines()
        if len(out_lines) != len(held_out):
            raise ProtocolError(
                f"expected {len(held_out)} output lines, got {len(out_lines)}",
                fold=fold_no)
        return list(zip(held_out, out_lines))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=min(jobs, len(folds))) as pool:
            fold_outputs = list(pool.map(run_one, range(len(folds))))
    else:
        fold_outputs = [run_one(f) for f in range(len(folds))]

    triples: list[CandidateTriple | None] = [None] * len(corpus)
    for pairs in fold_outputs:
        for idx, system_output in pairs:
            example = corpus[idx]
            gold = example.references[gold_index]
            candidate = build_candidate(example.source, system_output, gold)
            triples[idx] = CandidateTriple(example.source, candidate, gold)
    assert all(t is not None for t in triples)
    return triples  # type: ignore[return-value]


def _run_command(template: str, mapping: dict[str, str], fold_no: int,
                 phase: str) -> None:
    try:
        argv = [token.format_map(mapping) for token in shlex.split(template)]
    except (KeyError, IndexError) as exc:
        raise ConfigError(
            f"unknown placeholder {exc} in {phase} command template") from exc
    if not argv:
        raise ConfigError(f"empty {phase} command template")
    try:
        result = subprocess.run(argv, capture_output=True, text=True,
                                encoding="utf-8")
    except OSError as exc:
        raise CorrectorError(f"{phase} command failed to start: {exc}",
                             fold=fold_no)
    if result.returncode != 0:
        raise CorrectorError(
            f"{phase} command exited with code {result.returncode}",
            fold=fold_no, stdout=result.stdout, stderr=result.stderr)


def serialize_training_example(src: str, candidate: str | None,
                               tgt: str) -> str:
    """Concatenate one training line with the literal special tokens.

    With a candidate: ``<sos>`` + src + ``<cat>`` + candidate + ``<sep>`` +
    tgt; without: ``<sos>`` + src + ``<sep>`` + tgt. Sentences containing a
    special token literal are rejected so decoding stays unambiguous.
    """
    for name, text in (("src", src), ("candidate", candidate), ("tgt", tgt)):
        if text is None:
            continue
        for token in _SPECIAL_TOKENS:
            if token in text:
                raise SerializationError(
                    f"{name} sentence contains the reserved token {token}")
    if candidate is None:
        return f"{SOS}{src}{SEP}{tgt}"
    return f"{SOS}{src}{CAT}{candidate}{SEP}{tgt}"


def target_span(serialized: str) -> tuple[int, int]:
    """Half-open character span of the target part of a serialized line.

    The span starts right after the single ``<sep>`` marker and runs to the
    end of the string; training losses are restricted to exactly this part.
    """
    count = serialized.count(SEP)
    if count != 1:
        raise SerializationError(
            f"expected exactly one {SEP}, found {count}")
    start = serialized.index(SEP) + len(SEP)
    return start, len(serialized)


def read_parallel_tsv(path: str | Path) -> list[ParallelExample]:
    """Load a source TAB ref1 [TAB ref2 ...] file."""
    examples = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            cells = line.split("\t")
            if len(cells) < 2:
                raise ValueError(
                    f"{path}:{line_no}: expected source TAB reference")
            examples.append(ParallelExample(cells[0], tuple(cells[1:])))
    return examples


def write_triples(path: str | Path, triples: Sequence[CandidateTriple]) -> None:
    """Write triples as JSON Lines with fields src, candidate, gold."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in triples:
            fh.write(json.dumps(
                {"src": t.source, "candidate": t.candidate, "gold": t.gold},
                ensure_ascii=False) + "\n")


def read_triples(path: str | Path) -> list[CandidateTriple]:
    triples = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                triples.append(CandidateTriple(
                    obj["src"], obj["candidate"], obj["gold"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{line_no}: bad triple: {exc}")
    return triples


def write_training_text(path: str | Path, triples: Sequence[CandidateTriple],
                        with_candidate: bool = True) -> None:
    """Serialize triples one per line, with or without the candidate part."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in triples:
            candidate = t.candidate if with_candidate else None
            fh.write(serialize_training_example(t.source, candidate, t.gold)
                     + "\n")
