"""Attention dump records: what a trained scoring model paid attention to.

A dump holds one record per (essay, sentence) pair: the sentence-level
attention weight, the strongest phrase inside the sentence with its
phrase-level weight, and the model's vector for that phrase. The file
format is one JSON header line {"prompt_id", "dim"} followed by one JSON
object per record. Records are the sole bridge between a neural scorer
and the extraction pipeline, so validation is strict.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class PhraseRecord:
    """Attention evidence for one sentence of one essay."""

    essay_id: str
    sentence_index: int
    attn_sent: float
    attn_phrase: float
    phrase_tokens: list[str]
    phrase_vec: np.ndarray

    def __post_init__(self) -> None:
        if self.sentence_index < 0:
            raise ValueError(self._where("sentence index must be >= 0"))
        if not 0.0 <= self.attn_sent <= 1.0:
            raise ValueError(self._where(f"attn_sent {self.attn_sent} outside [0,1]"))
        if not 0.0 <= self.attn_phrase <= 1.0:
            raise ValueError(self._where(f"attn_phrase {self.attn_phrase} outside [0,1]"))
        if not self.phrase_tokens:
            raise ValueError(self._where("empty phrase"))
        self.phrase_vec = np.asarray(self.phrase_vec, dtype=float)
        if self.phrase_vec.ndim != 1:
            raise ValueError(self._where("phrase vector must be one-dimensional"))

    def _where(self, msg: str) -> str:
        return f"record (essay {self.essay_id!r}, sentence {self.sentence_index}): {msg}"


@dataclass
class AttentionDump:
    prompt_id: str
    dim: int
    records: list[PhraseRecord]

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise ValueError("vector dimension must be positive")
        seen: set[tuple[str, int]] = set()
        for rec in self.records:
            key = (rec.essay_id, rec.sentence_index)
            if key in seen:
                raise ValueError(rec._where("duplicate (essay, sentence) pair"))
            seen.add(key)
            if rec.phrase_vec.shape[0] != self.dim:
                raise ValueError(
                    rec._where(
                        f"vector has length {rec.phrase_vec.shape[0]}, expected {self.dim}"
                    )
                )

    def __len__(self) -> int:
        return len(self.records)

    def essay_ids(self) -> list[str]:
        ids: list[str] = []
        seen: set[str] = set()
        for rec in self.records:
            if rec.essay_id not in seen:
                seen.add(rec.essay_id)
                ids.append(rec.essay_id)
        return ids


def load_dump(path: str | Path) -> AttentionDump:
    """Read an attention dump file, validating every record.

    Errors name the offending line: bad JSON, missing fields, weights
    outside [0,1], wrong vector length, duplicate (essay, sentence) keys.
    """
    path = Path(path)
    prompt_id = None
    dim = None
    records: list[PhraseRecord] = []
    fields = {"essay_id", "sent_idx", "attn_sent", "attn_phrase", "phrase", "vec"}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path.name} line {lineno}: invalid JSON ({exc})")
            if prompt_id is None:
                if (
                    not isinstance(obj, dict)
                    or "prompt_id" not in obj
                    or "dim" not in obj
                ):
                    raise ValueError(
                        f"{path.name} line {lineno}: first line must be a header "
                        "with prompt_id and dim"
                    )
                prompt_id = str(obj["prompt_id"])
                dim = int(obj["dim"])
                if dim <= 0:
                    raise ValueError(f"{path.name} line {lineno}: dim must be positive")
                continue
            if not isinstance(obj, dict) or not fields <= obj.keys():
                missing = sorted(fields - set(obj)) if isinstance(obj, dict) else []
                raise ValueError(
                    f"{path.name} line {lineno}: record missing fields {missing}"
                )
            try:
                rec = PhraseRecord(
                    essay_id=str(obj["essay_id"]),
                    sentence_index=int(obj["sent_idx"]),
                    attn_sent=float(obj["attn_sent"]),
                    attn_phrase=float(obj["attn_phrase"]),
                    phrase_tokens=[str(t) for t in obj["phrase"]],
                    phrase_vec=np.asarray(obj["vec"], dtype=float),
                )
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path.name} line {lineno}: {exc}")
            if rec.phrase_vec.shape[0] != dim:
                raise ValueError(
                    f"{path.name} line {lineno}: vector has length "
                    f"{rec.phrase_vec.shape[0]}, expected {dim}"
                )
            records.append(rec)
    if prompt_id is None:
        raise ValueError(f"{path.name}: empty dump file, header line required")
    try:
        return AttentionDump(prompt_id=prompt_id, dim=dim, records=records)
    except ValueError as exc:
        raise ValueError(f"{path.name}: {exc}")


def save_dump(dump: AttentionDump, path: str | Path) -> None:
    """Write a dump so that load_dump reads back an identical structure."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(
            json.dumps({"dim": dump.dim, "prompt_id": dump.prompt_id}, sort_keys=True)
            + "\n"
        )
        for rec in dump.records:
            fh.write(
                json.dumps(
                    {
                        "essay_id": rec.essay_id,
                        "sent_idx": rec.sentence_index,
                        "attn_sent": rec.attn_sent,
                        "attn_phrase": rec.attn_phrase,
                        "phrase": rec.phrase_tokens,
                        "vec": rec.phrase_vec.tolist(),
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def filter_by_threshold(dump: AttentionDump, threshold: float) -> AttentionDump:
    """Keep records whose sentence attention strictly exceeds the threshold."""
    kept = [r for r in dump.records if r.attn_sent > threshold]
    return AttentionDump(prompt_id=dump.prompt_id, dim=dump.dim, records=kept)


def restrict_to_essays(dump: AttentionDump, essay_ids) -> AttentionDump:
    """Keep records belonging to the given essays, preserving order."""
    wanted = set(essay_ids)
    kept = [r for r in dump.records if r.essay_id in wanted]
    return AttentionDump(prompt_id=dump.prompt_id, dim=dump.dim, records=kept)
