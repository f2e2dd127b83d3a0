"""Shared fixtures: one synthetic corpus and one fully trained scorer."""

import pytest
from tcextract import SynthSpec, generate

from essayattn import NeuralConfig, train_and_export


@pytest.fixture(scope="session")
def corpus_and_source():
    synth = generate(SynthSpec(n_topics=4, n_essays=50, seed=1))
    return synth.corpus, synth.source


@pytest.fixture(scope="session")
def trained(corpus_and_source):
    """Full 100-epoch training run on the 50-essay corpus, shared by the
    tests that inspect the exported dump and the overfit behaviour."""
    corpus, source = corpus_and_source
    config = NeuralConfig(batch=5)
    return train_and_export(corpus, source, config, seed=0)
