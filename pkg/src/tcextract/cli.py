"""Command-line front end chaining the pipeline over the file formats.

Subcommands: synth, split, extract-tc, features, train, evaluate, and
pipeline (which chains split through evaluate and writes a report).
Settings come from built-in defaults, then an optional key=value config
file, then an optional named preset, then --set overrides. One master
seed is fanned out to each stage through a stage-name hash, so a config
file plus a seed pins every artifact byte for byte.

Exit codes: 0 success, 2 missing input file, 3 validation failure; all
failures print a single "error: ..." line to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .attention import load_dump, restrict_to_essays, save_dump
from .corpus import Corpus, load_corpus, load_source, save_corpus, stratified_split
from .embeddings import load_embeddings, save_embeddings, train_embeddings
from .features import MatchParams, extract_features, read_features_csv, write_features_csv
from .metrics import EvalReport, paired_bootstrap_pvalue, pearson_r, qwk
from .positionrank import PrParams, build_tc_pr
from .scoring import ForestConfig, load_model, predict, save_model, train_model
from .synth import SynthSpec, generate
from .tc import TCParams, extract_tc, load_tc, save_tc


@dataclass
class RunConfig:
    """Every tunable in one flat namespace; all defaults documented here."""

    seed: int = 0                 # master seed fanned out per stage
    method: str = "attn"          # TC extraction method: attn or pr
    m_topic_words: int = 16       # clusters in the topic-word pass
    m_example: int = 18           # clusters in the example pass
    n_example: int = 15           # sub-clusters per example cluster
    k_topic: int = 25             # max words kept per topic
    k_example: int = 5            # max words per example phrase
    attn_threshold: float = 0.05  # sentence-attention cutoff
    pr_window: int = 2            # co-occurrence window
    pr_damping: float = 0.85      # PageRank damping
    pr_tol: float = 1e-6          # power-iteration L1 tolerance
    pr_max_iter: int = 100        # power-iteration cap
    pr_topic: int = 19            # keyword clusters
    pr_max_phrase_len: int = 3    # keyphrase length cap
    sim_threshold: float = 0.8    # cosine word-match threshold
    phrase_coverage: float = 0.5  # fraction of phrase words that must match
    emb_dim: int = 50             # embedding dimension (capped at vocab size)
    emb_window: int = 5           # embedding co-occurrence window
    n_trees: int = 500            # forest size
    max_depth: int = 0            # tree depth cap; 0 means unlimited
    min_leaf: int = 1             # min rows per leaf
    synth_topics: int = 4         # generator: planted topics
    synth_words_per_topic: int = 6
    synth_essays: int = 200
    synth_noise_vocab: int = 30

    def tc_params(self) -> TCParams:
        return TCParams(
            m_topic_words=self.m_topic_words,
            m_example=self.m_example,
            n_example=self.n_example,
            k_topic=self.k_topic,
            k_example=self.k_example,
            attn_threshold=self.attn_threshold,
        )

    def pr_params(self) -> PrParams:
        return PrParams(
            window=self.pr_window,
            damping=self.pr_damping,
            tol=self.pr_tol,
            max_iter=self.pr_max_iter,
            pr_topic=self.pr_topic,
            max_phrase_len=self.pr_max_phrase_len,
        )

    def match_params(self) -> MatchParams:
        return MatchParams(
            sim_threshold=self.sim_threshold, phrase_coverage=self.phrase_coverage
        )

    def forest_config(self) -> ForestConfig:
        return ForestConfig(
            n_trees=self.n_trees,
            max_depth=self.max_depth or None,
            min_leaf=self.min_leaf,
        )


PRESETS = {
    # settings that reproduce the published extraction scale
    "mvp-paper": {
        "m_topic_words": 16,
        "k_topic": 25,
        "m_example": 18,
        "n_example": 15,
        "pr_topic": 19,
    }
}

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


def load_config(
    path: str | None, preset: str | None, overrides: list[str]
) -> RunConfig:
    """Defaults, then config file, then preset, then --set, later wins."""
    values: dict = {}
    if path is not None:
        cfg_path = Path(path)
        if not cfg_path.exists():
            raise FileNotFoundError(f"config file {path} not found")
        for lineno, line in enumerate(cfg_path.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{cfg_path.name} line {lineno}: expected key=value")
            key, _, raw = line.partition("=")
            key = key.strip()
            if key not in _FIELD_TYPES:
                raise ValueError(f"{cfg_path.name} line {lineno}: unknown key {key!r}")
            try:
                values[key] = _coerce(key, raw.strip())
            except ValueError:
                raise ValueError(
                    f"{cfg_path.name} line {lineno}: bad value for {key!r}"
                )
    if preset is not None:
        if preset not in PRESETS:
            raise ValueError(
                f"unknown preset {preset!r}; available: {sorted(PRESETS)}"
            )
        values.update(PRESETS[preset])
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"--set {item!r}: expected key=value")
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ValueError(f"--set: unknown key {key!r}")
        try:
            values[key] = _coerce(key, raw.strip())
        except ValueError:
            raise ValueError(f"--set: bad value for {key!r}")
    return RunConfig(**values)


def stage_seed(master: int, stage: str) -> int:
    """Stable 63-bit seed for a named stage of a run."""
    digest = hashlib.sha256(f"{master}:{stage}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _cmd_synth(cfg: RunConfig, args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = SynthSpec(
        n_topics=cfg.synth_topics,
        words_per_topic=cfg.synth_words_per_topic,
        n_essays=cfg.synth_essays,
        noise_vocab=cfg.synth_noise_vocab,
        seed=stage_seed(cfg.seed, "synth"),
    )
    result = generate(spec)
    (out / "source.txt").write_text(result.source.raw + "\n", encoding="utf-8")
    save_corpus(result.corpus, out / "corpus.jsonl")
    save_dump(result.dump, out / "dump.jsonl")
    save_tc(result.true_tc, out / "true_tc.json")
    print(f"wrote source.txt, corpus.jsonl, dump.jsonl, true_tc.json to {out}")
    return 0


def _cmd_split(cfg: RunConfig, args) -> int:
    corpus = load_corpus(_require(args.corpus))
    split = stratified_split(corpus, seed=stage_seed(cfg.seed, "split"))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, part in (("train", split.train), ("dev", split.dev), ("test", split.test)):
        save_corpus(part, out / f"{name}.jsonl")
    print(
        f"split {len(corpus)} essays into "
        f"{len(split.train)}/{len(split.dev)}/{len(split.test)} at {out}"
    )
    return 0


def _cmd_extract_tc(cfg: RunConfig, args) -> int:
    method = args.method or cfg.method
    if method == "attn":
        if not args.dump:
            raise ValueError("--dump is required with method=attn")
        dump = load_dump(_require(args.dump))
        source = load_source(_require(args.source))
        tc = extract_tc(
            dump,
            source.vocabulary,
            cfg.tc_params(),
            seed=stage_seed(cfg.seed, "tc"),
        )
    elif method == "pr":
        if not args.embeddings:
            raise ValueError("--embeddings is required with method=pr")
        source = load_source(_require(args.source))
        emb = load_embeddings(_require(args.embeddings))
        tc = build_tc_pr(source, emb, cfg.pr_params(), seed=stage_seed(cfg.seed, "tc"))
    else:
        raise ValueError(f"unknown extract-tc method {method!r}")
    save_tc(tc, args.out)
    print(
        f"extracted {len(tc.topics)} topics and "
        f"{len(tc.example_categories)} example categories to {args.out}"
    )
    return 0


def _cmd_features(cfg: RunConfig, args) -> int:
    corpus = load_corpus(_require(args.corpus))
    tc = load_tc(_require(args.tc))
    emb = load_embeddings(_require(args.embeddings))
    params = cfg.match_params()
    rows = [
        (e.essay_id, extract_features(e, tc, emb, params), e.score)
        for e in corpus.essays
    ]
    write_features_csv(rows, args.out)
    print(f"wrote {len(rows)} feature rows to {args.out}")
    return 0


def _cmd_train(cfg: RunConfig, args) -> int:
    rows = read_features_csv(_require(args.features))
    model = train_model(
        [f for _, f, _ in rows],
        [s for _, _, s in rows],
        cfg.forest_config(),
        seed=stage_seed(cfg.seed, "forest"),
        essay_ids=[i for i, _, _ in rows],
    )
    save_model(model, args.out)
    print(f"trained {model.config.n_trees}-tree model on {len(rows)} rows to {args.out}")
    return 0


def _evaluate(model, rows) -> EvalReport:
    gold = [s for _, _, s in rows]
    preds = [predict(model, f) for _, f, _ in rows]
    by_feature = {}
    columns = {
        "npe": [f.npe for _, f, _ in rows],
        "con": [f.con for _, f, _ in rows],
        "spc_sum": [sum(f.spc) for _, f, _ in rows],
        "woc": [f.woc for _, f, _ in rows],
    }
    for name, xs in columns.items():
        try:
            by_feature[name] = pearson_r(xs, gold)
        except ValueError:
            pass  # constant column, correlation undefined
    return EvalReport(qwk=qwk(gold, preds), pearson_by_feature=by_feature, n=len(rows))


def _cmd_evaluate(cfg: RunConfig, args) -> int:
    model = load_model(_require(args.model))
    rows = read_features_csv(_require(args.features))
    report = _evaluate(model, rows)
    json_path = Path(args.out)
    text_path = json_path.with_suffix(".txt")
    if args.compare_features:
        other_rows = read_features_csv(_require(args.compare_features))
        ids = [i for i, _, _ in rows]
        other_ids = [i for i, _, _ in other_rows]
        if sorted(ids) != sorted(other_ids):
            raise ValueError(
                "comparison feature file covers a different essay set"
            )
        other_model = (
            load_model(_require(args.compare_model)) if args.compare_model else model
        )
        by_id = {i: f for i, f, _ in other_rows}
        gold = [s for _, _, s in rows]
        pred_a = [predict(model, f) for _, f, _ in rows]
        pred_b = [predict(other_model, by_id[i]) for i, _, _ in rows]
        p = paired_bootstrap_pvalue(
            gold, pred_a, pred_b, seed=stage_seed(cfg.seed, "bootstrap")
        )
        obj = json.loads(report.to_json())
        obj["p_value_vs_compare"] = p
        json_path.write_text(
            json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        text_path.write_text(
            report.to_text() + f"  p(a<=b)  {p:.4f}\n", encoding="utf-8"
        )
    else:
        report.save(json_path, text_path)
    print(f"qwk {report.qwk:+.4f} over {report.n} essays; report at {json_path}")
    return 0


def _cmd_pipeline(cfg: RunConfig, args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus = load_corpus(_require(args.corpus))
    dump = load_dump(_require(args.dump))
    source = load_source(_require(args.source))

    split = stratified_split(corpus, seed=stage_seed(cfg.seed, "split"))
    for name, part in (("train", split.train), ("dev", split.dev), ("test", split.test)):
        save_corpus(part, out / f"{name}.jsonl")

    train_ids = set(split.train.essay_ids())
    train_dump = restrict_to_essays(dump, train_ids)
    save_dump(train_dump, out / "train_dump.jsonl")

    vocab_size = len(split.train.vocabulary())
    emb = train_embeddings(
        split.train,
        dim=min(cfg.emb_dim, vocab_size),
        window=cfg.emb_window,
        seed=stage_seed(cfg.seed, "embeddings"),
    )
    save_embeddings(emb, out / "embeddings.txt")

    method = args.method or cfg.method
    if method == "attn":
        tc = extract_tc(
            train_dump,
            source.vocabulary,
            cfg.tc_params(),
            seed=stage_seed(cfg.seed, "tc"),
        )
    elif method == "pr":
        tc = build_tc_pr(source, emb, cfg.pr_params(), seed=stage_seed(cfg.seed, "tc"))
    else:
        raise ValueError(f"unknown pipeline method {method!r}")
    save_tc(tc, out / "tc.json")

    match = cfg.match_params()

    def featurize(part: Corpus, name: str):
        rows = [
            (e.essay_id, extract_features(e, tc, emb, match), e.score)
            for e in part.essays
        ]
        write_features_csv(rows, out / f"features_{name}.csv")
        return rows

    train_rows = featurize(split.train, "train")
    test_rows = featurize(split.test, "test")

    model = train_model(
        [f for _, f, _ in train_rows],
        [s for _, _, s in train_rows],
        cfg.forest_config(),
        seed=stage_seed(cfg.seed, "forest"),
        essay_ids=[i for i, _, _ in train_rows],
    )
    save_model(model, out / "model.json")

    report = _evaluate(model, test_rows)
    report.save(out / "report.json", out / "report.txt")
    print(
        f"pipeline ({method}) done: qwk {report.qwk:+.4f} on {report.n} test "
        f"essays; artifacts at {out}"
    )
    return 0


def _require(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"input file {path} not found")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcextract",
        description="Extract topical components from attention dumps and "
        "score essays with rubric features.",
    )
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--preset", help=f"named preset: {sorted(PRESETS)}")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a single config key (repeatable)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("split", help="stratified 40/20/40 train/dev/test split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("extract-tc", help="extract topical components")
    p.add_argument("--method", choices=["attn", "pr"])
    p.add_argument("--dump", help="attention dump (method=attn)")
    p.add_argument("--source", required=True, help="source text file")
    p.add_argument("--embeddings", help="embedding table (method=pr)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("features", help="compute rubric features for a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tc", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train the score model from a feature CSV")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="evaluate a model on a feature CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--compare-features", help="second feature CSV for paired bootstrap")
    p.add_argument("--compare-model", help="model for the comparison features")
    p.add_argument("--out", required=True, help="report JSON path (.txt written beside)")

    p = sub.add_parser("pipeline", help="split, extract, featurize, train, evaluate")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dump", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--method", choices=["attn", "pr"])
    p.add_argument("--out-dir", required=True)

    return parser


_COMMANDS = {
    "synth": _cmd_synth,
    "split": _cmd_split,
    "extract-tc": _cmd_extract_tc,
    "features": _cmd_features,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "pipeline": _cmd_pipeline,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.preset, args.overrides)
        return _COMMANDS[args.command](cfg, args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
