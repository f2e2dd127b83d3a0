"""Training loop and attention-dump export.

train_and_export fits the co-attention scorer on a corpus with plain SGD
plus momentum and then walks the trained network once more in eval mode to
collect, for every essay sentence, its source co-attention mass, the
self-attention peak inside the sentence, the CNN feature vector at that
peak, and the kernel-width token window around it.  Those become the
records of an attention dump that downstream extraction tools read.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from tcextract import AttentionDump, PhraseRecord

from .config import NeuralConfig
from .model import CoAttentionScorer, Trace, build_vocabulary, encode_sentences


@dataclass
class TrainResult:
    """Trained scorer plus the attention dump exported from it."""

    dump: AttentionDump
    model: CoAttentionScorer
    vocabulary: dict[str, int]
    train_predictions: dict[str, int]


def _essay_tensors(corpus, vocab):
    return {
        e.essay_id: encode_sentences(e.sentences, vocab)
        for e in corpus.essays
    }


def train_and_export(corpus, source, config: NeuralConfig = NeuralConfig(),
                     seed: int = 0) -> TrainResult:
    """Fit the scorer on `corpus` against `source` and export a dump.

    Raises ValueError when the corpus cannot fill a single batch; training
    is deterministic for a fixed seed.
    """
    n = len(corpus.essays)
    if n < config.batch:
        raise ValueError(
            f"corpus of {n} essays cannot fill a batch of {config.batch}; "
            "lower the batch size"
        )
    torch.manual_seed(seed)
    vocab = build_vocabulary(corpus, source)
    model = CoAttentionScorer(len(vocab), config)
    src_ids, src_lengths = encode_sentences(source.sentences, vocab)
    tensors = _essay_tensors(corpus, vocab)
    targets = {e.essay_id: e.score - 1 for e in corpus.essays}
    order = [e.essay_id for e in corpus.essays]

    opt = torch.optim.SGD(model.parameters(), lr=config.lr,
                          momentum=config.momentum)
    loss_fn = nn.CrossEntropyLoss()
    model.train()
    for _ in range(config.epochs):
        perm = torch.randperm(n)
        for start in range(0, n, config.batch):
            chunk = perm[start:start + config.batch]
            opt.zero_grad()
            loss = torch.zeros(())
            for idx in chunk:
                essay_id = order[int(idx)]
                ids, lengths = tensors[essay_id]
                logits, _ = model(ids, lengths, src_ids, src_lengths)
                target = torch.tensor(targets[essay_id])
                loss = loss + loss_fn(logits, target)
            (loss / len(chunk)).backward()
            opt.step()

    dump, predictions = _export(model, corpus, vocab, src_ids, src_lengths,
                                config)
    return TrainResult(dump=dump, model=model, vocabulary=vocab,
                       train_predictions=predictions)


def _sentence_records(essay_id, sentences, trace: Trace, kernel: int):
    """Turn one essay's trace into dump records.

    The source co-attention mass is scaled by the essay's largest mass so
    the strongest sentence sits at 1.0; the phrase is the kernel-width
    token window centered on the self-attention peak, paired with the CNN
    vector at that position.
    """
    half = kernel // 2
    scale = float(trace.sent_mass.max())
    records = []
    for i, sent in enumerate(sentences):
        attn_sent = float(trace.sent_mass[i]) / scale
        peak = int(trace.phrase_alpha[i, :len(sent)].argmax())
        window = sent[max(0, peak - half):peak + half + 1]
        records.append(PhraseRecord(
            essay_id=essay_id,
            sentence_index=i,
            attn_sent=min(attn_sent, 1.0),
            attn_phrase=float(trace.phrase_alpha[i, peak]),
            phrase_tokens=window,
            phrase_vec=trace.conv[i, peak].double().numpy(),
        ))
    return records


def _export(model, corpus, vocab, src_ids, src_lengths, config):
    model.eval()
    records = []
    predictions = {}
    with torch.no_grad():
        for essay in corpus.essays:
            ids, lengths = encode_sentences(essay.sentences, vocab)
            logits, trace = model(ids, lengths, src_ids, src_lengths)
            predictions[essay.essay_id] = int(logits.argmax()) + 1
            records.extend(_sentence_records(
                essay.essay_id, essay.sentences, trace, config.cnn_kernel
            ))
    dump = AttentionDump(prompt_id=corpus.prompt_id, dim=config.cnn_filters,
                         records=records)
    return dump, predictions


def write_dump(dump: AttentionDump, path: str | Path) -> None:
    """Write a dump whose header notes the attn_sent normalization.

    The record lines match the ingest format exactly; the extra header key
    records that attn_sent is each sentence's source co-attention mass
    divided by the essay's maximum.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(
            {"attn_sent_norm": "max_per_essay", "dim": dump.dim,
             "prompt_id": dump.prompt_id},
            sort_keys=True,
        ) + "\n")
        for rec in dump.records:
            fh.write(json.dumps(
                {
                    "essay_id": rec.essay_id,
                    "sent_idx": rec.sentence_index,
                    "attn_sent": rec.attn_sent,
                    "attn_phrase": rec.attn_phrase,
                    "phrase": rec.phrase_tokens,
                    "vec": rec.phrase_vec.tolist(),
                },
                sort_keys=True,
            ) + "\n")


def score_essays(model: CoAttentionScorer, vocabulary: dict[str, int],
                 source, corpus) -> dict[str, int]:
    """Predict a 1-4 score for every essay in the corpus."""
    model.eval()
    src_ids, src_lengths = encode_sentences(source.sentences, vocabulary)
    out = {}
    with torch.no_grad():
        for essay in corpus.essays:
            ids, lengths = encode_sentences(essay.sentences, vocabulary)
            logits, _ = model(ids, lengths, src_ids, src_lengths)
            out[essay.essay_id] = int(logits.argmax()) + 1
    return out
