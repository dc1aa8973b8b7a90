"""Command-line interface.

Subcommands cover the whole correction-rewriting workflow: align parallel
text into M2, apply M2 back onto sources, merge system and gold edits,
build k-fold candidate triples with an external corrector, serialize
training text, train the character n-gram model, filter system output by
perplexity, score hypotheses, and run the config-driven pipeline.

Exit codes: 0 success, 1 input or configuration error, 2 external-process
failure.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

from . import __version__
from .edits import EditSet, apply_edits, extract_edits
from .errors import ConfigError, CorrectorError, GecFilterError, ScorerError
from .filters import (filter_edit_combination, filter_edit_level,
                      filter_sentence_level)
from .kfold import (CorrectorHandle, cross_infer, read_parallel_tsv,
                    read_triples, write_training_text, write_triples)
from .lm import CharNgramLM, ExternalScorer, train_ngram
from .m2 import M2Entry, parse_m2, write_m2
from .merging import merge_edit_sets
from .metrics import aggregate, score_sentence


class _Parser(argparse.ArgumentParser):
    # Input errors exit 1 across the CLI; argparse's default is 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_lines(path: str) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _write_lines(path: str, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def _read_m2_file(path: str) -> list[M2Entry]:
    return parse_m2(Path(path).read_text(encoding="utf-8"))


def _load_config(path: str) -> configparser.ConfigParser:
    config = configparser.ConfigParser()
    loaded = config.read(path, encoding="utf-8")
    if not loaded:
        raise ConfigError(f"cannot read config file {path}")
    return config


def _config_get(config, section: str, key: str, fallback=None):
    if not config.has_section(section):
        if fallback is not None:
            return fallback
        raise ConfigError(f"config is missing section [{section}]")
    value = config.get(section, key, fallback=fallback)
    if value is None:
        raise ConfigError(f"config is missing [{section}] {key}")
    return value


def _make_scorer(args):
    if getattr(args, "model", None):
        return CharNgramLM.load(args.model)
    if getattr(args, "scorer_cmd", None):
        return ExternalScorer(args.scorer_cmd)
    raise ConfigError("either --model or --scorer-cmd is required")


def _cmd_align(args) -> int:
    examples = read_parallel_tsv(args.corpus)
    entries = []
    for ex in examples:
        annotations = {
            i: extract_edits(ex.source, ref)
            for i, ref in enumerate(ex.references)}
        entries.append(M2Entry(ex.source, annotations))
    Path(args.output).write_text(write_m2(entries), encoding="utf-8")
    return 0


def _cmd_apply(args) -> int:
    entries = _read_m2_file(args.m2)
    if args.source:
        sources = _read_lines(args.source)
        if len(sources) != len(entries):
            raise ValueError(
                f"{args.source}: {len(sources)} lines vs {len(entries)} "
                "M2 entries")
        for i, (line, entry) in enumerate(zip(sources, entries), start=1):
            if line != entry.source:
                raise ValueError(
                    f"{args.source}:{i}: source does not match the M2 entry")
    corrected = []
    for i, entry in enumerate(entries, start=1):
        edit_set = entry.annotations.get(args.annotator)
        if edit_set is None:
            if entry.annotations and args.annotator != 0:
                raise ValueError(
                    f"entry {i} has no annotator {args.annotator}")
            edit_set = EditSet()
        corrected.append(apply_edits(entry.source, edit_set))
    _write_lines(args.output, corrected)
    return 0


def _cmd_merge_gold(args) -> int:
    system_entries = _read_m2_file(args.system)
    gold_entries = _read_m2_file(args.gold)
    if len(system_entries) != len(gold_entries):
        raise ValueError(
            f"entry count mismatch: {len(system_entries)} system vs "
            f"{len(gold_entries)} gold")
    merged_entries = []
    candidates = []
    for i, (sys_e, gold_e) in enumerate(zip(system_entries, gold_entries),
                                        start=1):
        if sys_e.source != gold_e.source:
            raise ValueError(f"entry {i}: system and gold sources differ")
        sys_set = sys_e.annotations.get(args.system_annotator, EditSet())
        gold_set = gold_e.annotations.get(args.gold_annotator, EditSet())
        merged = merge_edit_sets(sys_set, gold_set,
                                 source_length=len(sys_e.source))
        merged_entries.append(M2Entry(sys_e.source, {0: merged}))
        candidates.append(apply_edits(sys_e.source, merged))
    Path(args.output).write_text(write_m2(merged_entries), encoding="utf-8")
    if args.candidates:
        _write_lines(args.candidates, candidates)
    return 0


def _corrector_from_config(config) -> CorrectorHandle:
    return CorrectorHandle(
        train_cmd=_config_get(config, "corrector", "train_cmd"),
        infer_cmd=_config_get(config, "corrector", "infer_cmd"),
        model_root=config.get("corrector", "model_root", fallback=None))


def _cmd_kfold_build(args) -> int:
    config = _load_config(args.config)
    corpus_path = args.corpus or _config_get(config, "corpus", "train")
    corpus = read_parallel_tsv(corpus_path)
    corrector = _corrector_from_config(config)
    k = args.k if args.k is not None else config.getint("kfold", "k", fallback=4)
    seed = args.seed if args.seed is not None \
        else config.getint("kfold", "seed", fallback=0)
    gold_index = args.gold_index if args.gold_index is not None \
        else config.getint("kfold", "gold_index", fallback=0)
    jobs = config.getint("kfold", "jobs", fallback=1)
    triples = cross_infer(corpus, corrector, k=k, seed=seed,
                          gold_index=gold_index, work_dir=args.work_dir,
                          jobs=jobs)
    write_triples(args.output, triples)
    print(f"wrote {len(triples)} triples to {args.output}")
    return 0


def _cmd_serialize(args) -> int:
    triples = read_triples(args.triples)
    write_training_text(args.output, triples,
                        with_candidate=args.format == "combiner")
    return 0


def _cmd_train_lm(args) -> int:
    corpus = [line for line in _read_lines(args.corpus)]
    model = train_ngram(corpus, order=args.order, smooth_k=args.smooth_k)
    model.save(args.output)
    return 0


def _run_filter(granularity: str, sources, hyps, scorer, max_exhaustive: int,
                beam_width: int) -> list[str]:
    out = []
    for src, hyp in zip(sources, hyps):
        if granularity == "sentence":
            out.append(filter_sentence_level(src, hyp, scorer))
        elif granularity == "edit":
            out.append(filter_edit_level(src, hyp, scorer))
        else:
            out.append(filter_edit_combination(
                src, hyp, scorer, max_exhaustive=max_exhaustive,
                beam_width=beam_width))
    return out


def _cmd_filter(args) -> int:
    sources = _read_lines(args.src)
    hyps = _read_lines(args.hyp)
    if len(sources) != len(hyps):
        raise ValueError(
            f"line count mismatch: {len(sources)} sources vs {len(hyps)} "
            "hypotheses")
    scorer = _make_scorer(args)
    try:
        filtered = _run_filter(args.granularity, sources, hyps, scorer,
                               args.max_exhaustive, args.beam_width)
    finally:
        if isinstance(scorer, ExternalScorer):
            scorer.close()
    _write_lines(args.output, filtered)
    return 0


def _score_entries(hyp_entries, ref_entries, beta: float):
    if len(hyp_entries) != len(ref_entries):
        raise ValueError(
            f"entry count mismatch: {len(hyp_entries)} hypothesis vs "
            f"{len(ref_entries)} reference")
    per_sentence = []
    for i, (hyp_e, ref_e) in enumerate(zip(hyp_entries, ref_entries), start=1):
        if hyp_e.source != ref_e.source:
            raise ValueError(f"entry {i}: hypothesis and reference sources differ")
        hyp_set = hyp_e.annotations.get(0, EditSet())
        refs = [ref_e.annotations[aid] for aid in sorted(ref_e.annotations)]
        if not refs:
            refs = [EditSet()]
        per_sentence.append(score_sentence(hyp_set, refs, beta=beta))
    return aggregate(per_sentence, beta=beta)


def _cmd_score(args) -> int:
    report = _score_entries(_read_m2_file(args.hyp), _read_m2_file(args.ref),
                            args.beta)
    print(report.as_table())
    if args.json:
        Path(args.json).write_text(report.as_json() + "\n", encoding="utf-8")
    else:
        print(report.as_json())
    return 0


def _cmd_pipeline(args) -> int:
    config = _load_config(args.config)
    out_dir = Path(_config_get(config, "output", "dir"))
    out_dir.mkdir(parents=True, exist_ok=True)

    corpus = read_parallel_tsv(_config_get(config, "corpus", "train"))
    corrector = _corrector_from_config(config)
    k = config.getint("kfold", "k", fallback=4)
    seed = config.getint("kfold", "seed", fallback=0)
    gold_index = config.getint("kfold", "gold_index", fallback=0)
    jobs = config.getint("kfold", "jobs", fallback=1)

    triples = cross_infer(corpus, corrector, k=k, seed=seed,
                          gold_index=gold_index, jobs=jobs)
    triples_path = out_dir / "triples.jsonl"
    write_triples(triples_path, triples)
    print(f"wrote {len(triples)} triples to {triples_path}")

    train_path = out_dir / "train_combiner.txt"
    write_training_text(train_path, triples, with_candidate=True)
    print(f"wrote training text to {train_path}")

    order = config.getint("lm", "order", fallback=3)
    smooth_k = config.getfloat("lm", "smooth_k", fallback=0.1)
    model = train_ngram([ex.references[gold_index] for ex in corpus],
                        order=order, smooth_k=smooth_k)
    model_path = out_dir / "lm.tsv"
    model.save(model_path)
    print(f"wrote language model to {model_path}")

    if config.has_section("eval"):
        sources = _read_lines(_config_get(config, "eval", "src"))
        hyps = _read_lines(_config_get(config, "eval", "hyp"))
        if len(sources) != len(hyps):
            raise ValueError("eval src and hyp line counts differ")
        granularity = config.get("filter", "granularity", fallback="edit")
        if granularity not in ("sentence", "edit", "combination"):
            raise ConfigError(f"unknown filter granularity {granularity!r}")
        filtered = _run_filter(
            granularity, sources, hyps, model,
            config.getint("filter", "max_exhaustive", fallback=12),
            config.getint("filter", "beam_width", fallback=8))
        filtered_path = out_dir / "filtered.txt"
        _write_lines(filtered_path, filtered)
        print(f"wrote filtered output to {filtered_path}")
        ref_m2 = config.get("eval", "ref_m2", fallback=None)
        if ref_m2:
            hyp_entries = [
                M2Entry(src, {0: extract_edits(src, out)})
                for src, out in zip(sources, filtered)]
            report = _score_entries(hyp_entries, _read_m2_file(ref_m2), 0.5)
            report_path = out_dir / "report.json"
            report_path.write_text(report.as_json() + "\n", encoding="utf-8")
            print(report.as_table())
            print(f"wrote report to {report_path}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="gecfilter", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("align", help="parallel TSV to M2")
    p.add_argument("corpus", help="source TAB ref1 [TAB ref2 ...] file")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_align)

    p = sub.add_parser("apply", help="apply M2 edits back onto sources")
    p.add_argument("m2")
    p.add_argument("--source", help="optional plain-text sources to cross-check")
    p.add_argument("--annotator", type=int, default=0)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("merge-gold",
                       help="merge system and gold M2, gold wins conflicts")
    p.add_argument("system")
    p.add_argument("gold")
    p.add_argument("--system-annotator", type=int, default=0)
    p.add_argument("--gold-annotator", type=int, default=0)
    p.add_argument("--candidates", help="also write merged candidate sentences")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_merge_gold)

    p = sub.add_parser("kfold-build",
                       help="build candidate triples by k-fold cross inference")
    p.add_argument("--config", required=True)
    p.add_argument("--corpus", help="override [corpus] train from the config")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--gold-index", type=int)
    p.add_argument("--work-dir", help="keep fold scratch files here")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_kfold_build)

    p = sub.add_parser("serialize", help="triples JSONL to training text")
    p.add_argument("triples")
    p.add_argument("--format", choices=("combiner", "baseline"),
                   default="combiner")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_serialize)

    p = sub.add_parser("train-lm", help="train the character n-gram model")
    p.add_argument("corpus", help="one sentence per line")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--smooth-k", type=float, default=0.1)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_train_lm)

    p = sub.add_parser("filter", help="filter hypotheses by perplexity")
    p.add_argument("--granularity", choices=("sentence", "edit", "combination"),
                   required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--model", help="n-gram model file")
    p.add_argument("--scorer-cmd", help="external scorer command")
    p.add_argument("--max-exhaustive", type=int, default=12)
    p.add_argument("--beam-width", type=int, default=8)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("score", help="span P/R/F against reference M2")
    p.add_argument("--hyp", required=True, help="hypothesis M2 file")
    p.add_argument("--ref", required=True, help="reference M2 file")
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--json", help="write the JSON report here")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("pipeline", help="config-driven end-to-end run")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorrectorError, ScorerError) as exc:
        print(f"gecfilter: external process error: {exc}", file=sys.stderr)
        return 2
    except (GecFilterError, ValueError, OSError) as exc:
        print(f"gecfilter: error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
