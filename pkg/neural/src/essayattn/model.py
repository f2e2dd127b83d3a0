"""Hierarchical co-attention network for source-based essays.

Each sentence is read by a word-level CNN whose outputs are pooled with a
phrase self-attention layer; an LSTM over the pooled sentence vectors gives
sentence states for the essay and, through the same encoder, for the source
text.  A bilinear co-attention between the two sets of states produces the
source context each essay sentence attends to, and a small modeling layer
plus a gated sum over sentences turns the combined states into a 4-way
score.  The pool is a sum rather than a mean so that the essay vector
keeps track of how many sentences carry evidence, which is what the score
rewards.

The forward pass also returns the intermediate attention tensors so that
training and dump export share one code path.
"""

from dataclasses import dataclass

import torch
from torch import nn

from .config import NeuralConfig

PAD = 0
UNK = 1


def build_vocabulary(corpus, source) -> dict[str, int]:
    """Map every word in the corpus and source to an index; 0 and 1 are
    reserved for padding and unknown words."""
    words = set(source.vocabulary) | corpus.vocabulary()
    vocab = {"<pad>": PAD, "<unk>": UNK}
    for word in sorted(words):
        vocab[word] = len(vocab)
    return vocab


def encode_sentences(sentences: list[list[str]], vocab: dict[str, int]):
    """Pad a list of token sentences into an id matrix plus lengths."""
    if not sentences:
        raise ValueError("cannot encode an empty sentence list")
    longest = max(len(s) for s in sentences)
    ids = torch.full((len(sentences), longest), PAD, dtype=torch.long)
    lengths = torch.zeros(len(sentences), dtype=torch.long)
    for i, sent in enumerate(sentences):
        lengths[i] = len(sent)
        for j, word in enumerate(sent):
            ids[i, j] = vocab.get(word, UNK)
    return ids, lengths


@dataclass
class Trace:
    """Attention internals from one essay forward pass."""

    phrase_alpha: torch.Tensor  # (sentences, words) self-attention weights
    conv: torch.Tensor          # (sentences, words, filters) CNN outputs
    sent_mass: torch.Tensor     # (sentences,) text-to-essay attention mass


class CoAttentionScorer(nn.Module):
    """CNN + self-attention sentence encoder with source co-attention."""

    def __init__(self, vocab_size: int, config: NeuralConfig):
        super().__init__()
        self.config = config
        self.embedding = nn.Embedding(
            vocab_size, config.embedding_dim, padding_idx=PAD
        )
        with torch.no_grad():
            self.embedding.weight[PAD].zero_()
        self.conv = nn.Conv1d(
            config.embedding_dim,
            config.cnn_filters,
            config.cnn_kernel,
            padding=config.cnn_kernel // 2,
        )
        self.phrase_query = nn.Linear(config.cnn_filters, config.cnn_filters)
        self.phrase_score = nn.Linear(config.cnn_filters, 1, bias=False)
        self.sent_lstm = nn.LSTM(
            config.cnn_filters, config.lstm_hidden, batch_first=True
        )
        # orthogonal gate blocks keep the sentence states from shrinking,
        # which matters at this learning rate
        for name, param in self.sent_lstm.named_parameters():
            if "weight" in name:
                blocks = param.view(4, config.lstm_hidden, -1)
                for k in range(4):
                    nn.init.orthogonal_(blocks[k])
        self.affinity = nn.Linear(
            config.lstm_hidden, config.lstm_hidden, bias=False
        )
        self.modeling = nn.Linear(
            config.lstm_hidden * 2, config.modeling_hidden
        )
        self.pool_gate = nn.Linear(config.modeling_hidden, 1)
        self.dropout = nn.Dropout(config.dropout)
        self.head = nn.Linear(config.modeling_hidden, 4)

    def encode(self, ids: torch.Tensor, lengths: torch.Tensor):
        """Run the word CNN and phrase self-attention over padded sentences.

        Returns pooled sentence vectors, the per-position CNN outputs, and
        the self-attention weights (each row sums to one over real tokens).
        """
        mask = (
            torch.arange(ids.shape[1]).unsqueeze(0) < lengths.unsqueeze(1)
        )
        x = self.embedding(ids)                       # (S, L, E)
        z = torch.tanh(self.conv(x.transpose(1, 2)).transpose(1, 2))
        scores = self.phrase_score(torch.tanh(self.phrase_query(z)))
        scores = scores.squeeze(-1).masked_fill(~mask, float("-inf"))
        alpha = torch.softmax(scores, dim=1)
        pooled = (alpha.unsqueeze(-1) * z).sum(dim=1)  # (S, F)
        return pooled, z, alpha

    def forward(self, essay, essay_lengths, source, source_lengths):
        """Score one essay against the source; returns (logits, Trace)."""
        e_pooled, e_conv, e_alpha = self.encode(essay, essay_lengths)
        s_pooled, _, _ = self.encode(source, source_lengths)
        h, _ = self.sent_lstm(e_pooled.unsqueeze(0))
        h = h.squeeze(0)                              # (Se, H)
        g, _ = self.sent_lstm(s_pooled.unsqueeze(0))
        g = g.squeeze(0)                              # (Ss, H)
        a = h @ self.affinity(g).T                    # (Se, Ss)
        # essay-to-source rows pick the context each sentence reads from
        gamma = torch.softmax(a, dim=1)
        context = gamma @ g
        # source-to-essay columns distribute each source sentence's mass
        beta = torch.softmax(a, dim=0)
        sent_mass = beta.sum(dim=1)
        m = torch.tanh(self.modeling(torch.cat([h, context], dim=1)))
        gate = torch.sigmoid(self.pool_gate(m).squeeze(-1))
        essay_vec = (gate.unsqueeze(-1) * m).sum(dim=0)
        logits = self.head(self.dropout(essay_vec))
        return logits, Trace(phrase_alpha=e_alpha, conv=e_conv,
                             sent_mass=sent_mass)
