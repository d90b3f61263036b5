"""Skeleton reduction, nomenclature, and embedding toolkit.

Graphs cross the binding layer as JSON text; this wrapper keeps the public
surface in plain dicts.
"""

import json as _json

from ._core import Error, IoError, NameParseError, ValidationError
from . import _core

__all__ = [
    "Error",
    "IoError",
    "NameParseError",
    "ValidationError",
    "reduce",
    "name",
    "parse_name",
    "synth",
    "spectrum_cosine",
    "train",
    "embed",
    "retrieve",
    "build_dictionary",
    "decompose",
]


def reduce(skeleton, tau=4.0, preserve_loops=True, smooth=True, tau_relative=False):
    """Reduce a skeleton graph dict to its reduced-graph dict."""
    return _json.loads(
        _core.reduce(_json.dumps(skeleton), tau, preserve_loops, smooth, tau_relative)
    )


def name(reduced, type="other"):
    """Canonical nomenclature string of a reduced graph dict."""
    return _core.name(_json.dumps(reduced), type)


def parse_name(text):
    """Rebuild the reduced-graph dict a name describes."""
    return _json.loads(_core.parse_name(text))


def synth(kind, n, seed=0):
    """Generate a synthetic skeleton dict."""
    return _json.loads(_core.synth(kind, n, seed))


def spectrum_cosine(a, b, weighted=False):
    """Cosine similarity of two reduced graphs' Laplacian spectra."""
    return _core.spectrum_cosine(_json.dumps(a), _json.dumps(b), weighted)


def train(corpus, epochs=200, lr=0.01, seed=1, kl_weight=1.0):
    """Train the embedding model on reduced-graph dicts; returns a model dict."""
    return _json.loads(
        _core.train([_json.dumps(g) for g in corpus], epochs, lr, seed, kl_weight)
    )


def embed(model, reduced):
    """Posterior-mean node embeddings: (node_ids, rows)."""
    return _core.embed(_json.dumps(model), _json.dumps(reduced))


def retrieve(query, corpus, model, topk=2):
    """Nearest corpus graphs by matched-embedding distance: [(object_id, score)]."""
    return _core.retrieve(
        _json.dumps(query), [_json.dumps(g) for g in corpus], _json.dumps(model), topk
    )


def build_dictionary(corpus, model, k=0, seed=1):
    """Cluster junction embeddings into a dictionary dict (k=0 = type default)."""
    return _json.loads(
        _core.build_dictionary([_json.dumps(g) for g in corpus], _json.dumps(model), k, seed)
    )


def decompose(reduced, dictionary, model):
    """Greedy decomposition: [(word_index, junction_id, removed_node_ids)]."""
    return _core.decompose(
        _json.dumps(reduced), _json.dumps(dictionary), _json.dumps(model)
    )
