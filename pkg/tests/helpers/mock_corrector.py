#!/usr/bin/env python3
"""Stand-in corrector for exercising the train/infer file protocol.

Modes (picked at train time, remembered in the model directory):
  identity      echo every input line unchanged
  instrumented  echo, but prefix "[LEAK]" when the line was in training data
  fixer         apply the training-set source->target mapping when known,
                and uppercase one vowel otherwise (a crude over-corrector)
  fail-train    exit 3 during training
  fail-infer    train fine, exit 3 during inference
  short         drop the last output line (protocol violation)
"""

import argparse
import sys
from pathlib import Path


def cmd_train(args):
    if args.mode == "fail-train":
        print("synthetic training failure", file=sys.stderr)
        return 3
    model_dir = Path(args.model_dir)
    model_dir.mkdir(parents=True, exist_ok=True)
    (model_dir / "mode.txt").write_text(args.mode, encoding="utf-8")
    pairs = []
    for line in Path(args.train_file).read_text(encoding="utf-8").splitlines():
        src, _, tgt = line.partition("\t")
        pairs.append((src, tgt))
    (model_dir / "train.tsv").write_text(
        "".join(f"{s}\t{t}\n" for s, t in pairs), encoding="utf-8")
    return 0


def cmd_infer(args):
    model_dir = Path(args.model_dir)
    mode = (model_dir / "mode.txt").read_text(encoding="utf-8").strip()
    if mode == "fail-infer":
        print("synthetic inference failure", file=sys.stderr)
        return 3
    mapping = {}
    sources = set()
    for line in (model_dir / "train.tsv").read_text(encoding="utf-8").splitlines():
        src, _, tgt = line.partition("\t")
        mapping[src] = tgt
        sources.add(src)
    out = []
    for line in Path(args.input).read_text(encoding="utf-8").splitlines():
        if mode == "instrumented" and line in sources:
            out.append("[LEAK]" + line)
        elif mode == "fixer":
            if line in mapping:
                out.append(mapping[line])
            else:
                fixed = line
                for vowel in "aeiou":
                    if vowel in fixed:
                        fixed = fixed.replace(vowel, vowel.upper(), 1)
                        break
                out.append(fixed)
        else:
            out.append(line)
    if mode == "short" and out:
        out = out[:-1]
    Path(args.output).write_text("".join(s + "\n" for s in out),
                                 encoding="utf-8")
    return 0


def main():
    parser = argparse.ArgumentParser()
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("train")
    p.add_argument("--mode", default="identity")
    p.add_argument("--train-file", required=True)
    p.add_argument("--model-dir", required=True)
    p.set_defaults(func=cmd_train)
    p = sub.add_parser("infer")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_infer)
    args = parser.parse_args()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
