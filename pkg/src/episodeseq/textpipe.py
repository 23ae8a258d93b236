"""Text classification with an episode-mined dictionary.

Documents are token sequences; viewing tokens as events (time = token
position) lets the episode miner run over a whole training corpus at once,
with one sequence per document so no episode spans two documents.  The
full vocabulary forms Dictionary-I; the words appearing in the selected
non-singleton episodes form the much smaller Dictionary-II.  Documents are
represented as tf-idf vectors over either dictionary and classified with a
multinomial Naive Bayes.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .events import Event, EventDataset, Alphabet
from .mdl import SelectionState, select
from .occurrences import FrequencyMode


@dataclass(frozen=True)
class PreprocessOptions:
    lowercase: bool = True
    min_len: int = 3
    stopwords: frozenset[str] = frozenset()


_TOKEN = re.compile(r"[A-Za-z0-9]+")


def preprocess(raw_text: str, options: PreprocessOptions = PreprocessOptions()) -> list[str]:
    """Tokenize on non-alphanumeric boundaries and filter.

    Applies lowercasing, then drops tokens shorter than ``min_len`` and
    stopword members.
    """
    text = raw_text.lower() if options.lowercase else raw_text
    return [
        tok
        for tok in _TOKEN.findall(text)
        if len(tok) >= options.min_len and tok not in options.stopwords
    ]


@dataclass(frozen=True)
class Corpus:
    """Labeled token-sequence documents, with a split tag."""

    documents: tuple[tuple[str, ...], ...]
    labels: tuple[int, ...]
    label_names: tuple[str, ...]
    split: str = ""

    def __post_init__(self) -> None:
        if len(self.documents) != len(self.labels):
            raise ValueError("documents and labels must align")
        for label in self.labels:
            if not 0 <= label < len(self.label_names):
                raise ValueError(f"label id {label} outside label names")

    @property
    def n_documents(self) -> int:
        return len(self.documents)


def load_corpus(handle: IO[str], split: str = "") -> Corpus:
    """Read a pre-tokenized corpus: one ``<label>\\t<tok tok ...>`` per line."""
    raw: list[tuple[str, tuple[str, ...]]] = []
    for line in handle:
        line = line.rstrip("\n")
        if not line:
            continue
        label, _, text = line.partition("\t")
        raw.append((label, tuple(text.split())))
    label_names = tuple(sorted({label for label, _ in raw}))
    label_ids = {name: i for i, name in enumerate(label_names)}
    return Corpus(
        tuple(doc for _, doc in raw),
        tuple(label_ids[label] for label, _ in raw),
        label_names,
        split,
    )


def save_corpus(corpus: Corpus, handle: IO[str]) -> None:
    for doc, label in zip(corpus.documents, corpus.labels):
        handle.write(f"{corpus.label_names[label]}\t{' '.join(doc)}\n")


def load_corpus_dir(
    root: str | Path,
    split: str,
    options: PreprocessOptions = PreprocessOptions(),
) -> Corpus:
    """Read raw text laid out as ``<root>/<split>/<class>/<docid>.txt``."""
    base = Path(root) / split
    label_names = tuple(sorted(p.name for p in base.iterdir() if p.is_dir()))
    documents: list[tuple[str, ...]] = []
    labels: list[int] = []
    for label_id, name in enumerate(label_names):
        for doc_path in sorted((base / name).glob("*.txt")):
            documents.append(tuple(preprocess(doc_path.read_text("utf-8"), options)))
            labels.append(label_id)
    return Corpus(tuple(documents), tuple(labels), label_names, split)


def corpus_to_events(train: Corpus) -> EventDataset:
    """One event sequence per document; event time is the token position.

    The alphabet is the training vocabulary in sorted order, so episode
    occurrences are structurally confined to single documents.
    """
    if train.n_documents == 0:
        raise ValueError("corpus is empty")
    alphabet = Alphabet.from_names(tok for doc in train.documents for tok in doc)
    sequences = tuple(
        tuple(Event(alphabet.index(tok), pos) for pos, tok in enumerate(doc, start=1))
        for doc in train.documents
    )
    return EventDataset(sequences, alphabet)


@dataclass(frozen=True)
class Dictionary:
    """Word <-> id bijection; ids are positions in the sorted word list."""

    words: tuple[str, ...]
    provenance: str  # "I" or "II"
    _ids: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ids = {w: i for i, w in enumerate(self.words)}
        if len(ids) != len(self.words):
            raise ValueError("dictionary words must be unique")
        object.__setattr__(self, "_ids", ids)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._ids

    def id_of(self, word: str) -> int:
        return self._ids[word]


def build_dictionary_I(corpus: Corpus) -> Dictionary:
    """All unique training words, sorted."""
    return Dictionary(tuple(sorted({tok for doc in corpus.documents for tok in doc})), "I")


def build_dictionary_II(selection: SelectionState) -> Dictionary:
    """Unique words of the selected episodes of size two or more."""
    words = {
        sym
        for sel in selection.selected
        if sel.episode.length >= 2
        for sym in sel.episode.event_types
    }
    if not words:
        warnings.warn("no non-singleton episodes selected; dictionary is empty")
    return Dictionary(tuple(sorted(words)), "II")


def mine_dictionary(
    train: Corpus,
    max_gap: int = 5,
    max_episodes: int | None = None,
    mode: FrequencyMode = FrequencyMode.NON_OVERLAPPED,
) -> tuple[Dictionary, SelectionState]:
    """Run the episode miner over the corpus and build Dictionary-II."""
    data = corpus_to_events(train)
    selection = select(data, max_gap, max_episodes, mode)
    return build_dictionary_II(selection), selection


def save_dictionary(dictionary: Dictionary, handle: IO[str]) -> None:
    """One word per line; the line number (from 0) is the word id."""
    for word in dictionary.words:
        handle.write(word + "\n")


def load_dictionary(handle: IO[str], provenance: str = "II") -> Dictionary:
    return Dictionary(tuple(line.strip() for line in handle if line.strip()), provenance)


@dataclass(frozen=True)
class FeatureMatrix:
    """Sparse document-term weights over a dictionary."""

    matrix: sp.csr_matrix
    weighting: str  # "tfidf-cosine" or "binary"
    dictionary: Dictionary

    @property
    def n_documents(self) -> int:
        return self.matrix.shape[0]


def compute_idf(corpus: Corpus, dictionary: Dictionary) -> np.ndarray:
    """Inverse document frequency: log((1 + n_d) / (1 + df)) + 1."""
    df = np.zeros(len(dictionary))
    for doc in corpus.documents:
        for word in set(doc):
            if word in dictionary:
                df[dictionary.id_of(word)] += 1
    return np.log((1.0 + corpus.n_documents) / (1.0 + df)) + 1.0


def tfidf(
    corpus: Corpus,
    dictionary: Dictionary,
    idf: np.ndarray | None = None,
    weighting: str = "tfidf-cosine",
) -> FeatureMatrix:
    """Document vectors over the dictionary; out-of-dictionary words are ignored.

    Default weighting multiplies word counts by idf and cosine-normalizes
    each row (document frequencies default to this corpus; pass the
    training idf when transforming a test split).  ``binary`` weighting
    records presence/absence instead.
    """
    if len(dictionary) == 0:
        raise ValueError("dictionary is empty")
    if weighting not in ("tfidf-cosine", "binary"):
        raise ValueError(f"unknown weighting {weighting!r}")
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for row, doc in enumerate(corpus.documents):
        counts: dict[int, int] = {}
        for word in doc:
            if word in dictionary:
                wid = dictionary.id_of(word)
                counts[wid] = counts.get(wid, 0) + 1
        for wid, count in counts.items():
            rows.append(row)
            cols.append(wid)
            vals.append(1.0 if weighting == "binary" else float(count))
    matrix = sp.csr_matrix(
        (vals, (rows, cols)), shape=(corpus.n_documents, len(dictionary))
    )
    if weighting == "tfidf-cosine":
        if idf is None:
            idf = compute_idf(corpus, dictionary)
        matrix = matrix.multiply(idf[None, :]).tocsr()
        norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1))).ravel()
        norms[norms == 0.0] = 1.0
        matrix = sp.diags(1.0 / norms) @ matrix
    return FeatureMatrix(matrix.tocsr(), weighting, dictionary)


@dataclass(frozen=True)
class NBModel:
    """Multinomial Naive Bayes over (possibly fractional) feature weights."""

    class_log_prior: np.ndarray
    feature_log_prob: np.ndarray  # (n_classes, n_features)
    smoothing: float

    @property
    def n_classes(self) -> int:
        return len(self.class_log_prior)


def train_nb(
    features: FeatureMatrix, labels: Sequence[int], smoothing: float = 1.0
) -> NBModel:
    """Fit class priors and smoothed per-class word weight totals."""
    y = np.asarray(labels)
    if features.n_documents != len(y):
        raise ValueError("feature rows and labels must align")
    n_classes = int(y.max()) + 1 if len(y) else 0
    if n_classes < 1:
        raise ValueError("need at least one class")
    n_features = features.matrix.shape[1]
    totals = np.zeros((n_classes, n_features))
    counts = np.zeros(n_classes)
    for c in range(n_classes):
        mask = y == c
        counts[c] = mask.sum()
        if counts[c]:
            totals[c] = features.matrix[mask].sum(axis=0)
    if (counts == 0).any():
        raise ValueError("every class id up to the maximum needs examples")
    class_log_prior = np.log(counts / counts.sum())
    smoothed = totals + smoothing
    feature_log_prob = np.log(smoothed / smoothed.sum(axis=1, keepdims=True))
    return NBModel(class_log_prior, feature_log_prob, smoothing)


def predict(model: NBModel, features: FeatureMatrix) -> np.ndarray:
    """Argmax class posterior per document; ties go to the lowest class id."""
    if features.matrix.shape[1] != model.feature_log_prob.shape[1]:
        raise ValueError(
            f"feature dimension {features.matrix.shape[1]} does not match "
            f"model dimension {model.feature_log_prob.shape[1]}"
        )
    scores = features.matrix @ model.feature_log_prob.T + model.class_log_prior
    return np.asarray(np.argmax(scores, axis=1)).ravel()


def evaluate(predicted: Sequence[int], truth: Sequence[int]) -> dict[str, float]:
    """Accuracy and macro F-measure (unweighted mean of per-class F1)."""
    pred = np.asarray(predicted)
    y = np.asarray(truth)
    if len(y) == 0:
        raise ValueError("empty evaluation set")
    if len(pred) != len(y):
        raise ValueError("prediction and truth lengths differ")
    accuracy = float((pred == y).mean())
    f_scores = []
    for c in sorted(set(y.tolist()) | set(pred.tolist())):
        tp = int(((pred == c) & (y == c)).sum())
        fp = int(((pred == c) & (y != c)).sum())
        fn = int(((pred != c) & (y == c)).sum())
        denom = 2 * tp + fp + fn
        f_scores.append(2 * tp / denom if denom else 0.0)
    return {"accuracy": accuracy, "macro_f": float(np.mean(f_scores))}


def metrics_csv(rows: Iterable[tuple[str, str, float, float]]) -> str:
    """Render ``dictionary,classifier,accuracy,macro_f`` report lines."""
    lines = ["dictionary,classifier,accuracy,macro_f"]
    for dictionary, classifier, accuracy, macro_f in rows:
        lines.append(f"{dictionary},{classifier},{accuracy:.6f},{macro_f:.6f}")
    return "\n".join(lines) + "\n"
