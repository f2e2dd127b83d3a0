"""Command line wrapper: train on a corpus file, write a dump file."""

import argparse
import sys

from tcextract import load_corpus, load_source, qwk

from .config import NeuralConfig
from .train import train_and_export, write_dump


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="essayattn",
        description="Train the co-attention scorer and export its "
        "attention dump.",
    )
    parser.add_argument("--corpus", required=True, help="corpus JSONL file")
    parser.add_argument("--source", required=True, help="source text file")
    parser.add_argument("--out", required=True, help="dump JSONL to write")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--batch", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.epochs is not None:
        overrides["epochs"] = args.epochs
    if args.batch is not None:
        overrides["batch"] = args.batch
    try:
        config = NeuralConfig(**overrides)
        corpus = load_corpus(args.corpus)
        source = load_source(args.source)
        result = train_and_export(corpus, source, config, seed=args.seed)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    write_dump(result.dump, args.out)
    gold = [e.score for e in corpus.essays]
    pred = [result.train_predictions[e.essay_id] for e in corpus.essays]
    print(f"wrote {args.out}: {len(result.dump.records)} records from "
          f"{len(corpus.essays)} essays")
    print(f"training qwk {qwk(gold, pred):+.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
