"""Corpus-level TF-IDF over job descriptions.

Two scoring modes:

* ``naive``  - (tf / doc_len) * log10(N / df), the classic textbook form.
* ``smooth`` - tf * (ln((1+N)/(1+df)) + 1) with the document vector
  L2-normalized afterwards, matching what TfidfVectorizer(use_idf=True)
  produces with its default smoothing. This is the default.

Terms are whitespace tokens of already-normalized text; single-character
tokens are not indexed.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import NotFoundError

MODES = ("naive", "smooth")


@dataclass(frozen=True)
class TermScore:
    term: str
    score: float


def term_frequency(tf_count: int, doc_len: int) -> float:
    """Fraction of the document occupied by one term."""
    if doc_len < 1:
        raise ValueError(f"doc_len must be >= 1, got {doc_len}")
    if not 0 <= tf_count <= doc_len:
        raise ValueError(f"tf_count {tf_count} out of range for doc_len {doc_len}")
    return tf_count / doc_len


def smooth_idf(df: int, n_docs: int) -> float:
    """ln((1+N)/(1+df)) + 1; equals 1.0 for a term present in every doc."""
    if not 1 <= df <= n_docs:
        raise ValueError(f"df {df} out of range for corpus of {n_docs}")
    return math.log((1 + n_docs) / (1 + df)) + 1.0


def tfidf_score(tf_count: int, doc_len: int, df: int, n_docs: int, mode: str = "smooth") -> float:
    """Score one term of one document.

    Naive mode returns the final value. Smooth mode returns the raw
    (un-normalized) weight; the per-document L2 normalization happens at
    the vector level in :class:`TfidfScorer`.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not 1 <= df <= n_docs:
        raise ValueError(f"df {df} out of range for corpus of {n_docs}")
    if mode == "naive":
        return term_frequency(tf_count, doc_len) * math.log10(n_docs / df)
    if doc_len < 1:
        raise ValueError(f"doc_len must be >= 1, got {doc_len}")
    if not 0 <= tf_count <= doc_len:
        raise ValueError(f"tf_count {tf_count} out of range for doc_len {doc_len}")
    return tf_count * smooth_idf(df, n_docs)


def _index_tokens(text: str) -> list[str]:
    # Input is normalize_text output; only the single-char filter is left.
    return [t for t in text.split() if len(t) > 1]


class TfidfScorer(BaseEstimator):
    """Fit once over a corpus of (doc_id, normalized text) pairs, then read
    ranked per-document term scores back out.

    Fitted attributes
    -----------------
    n_docs_ : int
    df_ : dict mapping term -> document frequency
    vocabulary_ : lexicographically sorted term list
    doc_tf_ : dict mapping doc_id -> term frequency Counter
    doc_len_ : dict mapping doc_id -> indexed token count
    """

    def __init__(self, mode="smooth"):
        self.mode = mode

    def fit(self, corpus, y=None):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        corpus = list(corpus)
        if not corpus:
            raise ValueError("empty corpus")
        doc_tf: dict[str, Counter] = {}
        df: Counter = Counter()
        for doc_id, text in corpus:
            if doc_id in doc_tf:
                raise ValueError(f"duplicate doc id {doc_id!r}")
            tf = Counter(_index_tokens(text))
            doc_tf[doc_id] = tf
            df.update(tf.keys())
        self.n_docs_ = len(doc_tf)
        self.df_ = dict(df)
        self.vocabulary_ = sorted(df)
        self.doc_tf_ = doc_tf
        self.doc_len_ = {doc_id: sum(tf.values()) for doc_id, tf in doc_tf.items()}
        return self

    def _check_doc(self, doc_id):
        check_is_fitted(self, "doc_tf_")
        if doc_id not in self.doc_tf_:
            raise NotFoundError("document", doc_id)

    def doc_weights(self, doc_id) -> dict[str, float]:
        """Term -> weight for one fitted document.

        Smooth mode weights are L2-normalized so a non-empty document's
        vector always has unit norm.
        """
        self._check_doc(doc_id)
        tf = self.doc_tf_[doc_id]
        if self.mode == "naive":
            doc_len = self.doc_len_[doc_id]
            return {
                term: tfidf_score(count, doc_len, self.df_[term], self.n_docs_, "naive")
                for term, count in tf.items()
            }
        raw = {
            term: count * smooth_idf(self.df_[term], self.n_docs_)
            for term, count in tf.items()
        }
        norm = math.sqrt(sum(w * w for w in raw.values()))
        if norm == 0.0:
            return raw
        return {term: w / norm for term, w in raw.items()}

    def term_scores(self, doc_id) -> list[TermScore]:
        """Every term of the document, highest score first, ties broken by
        term ascending."""
        weights = self.doc_weights(doc_id)
        ranked = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
        return [TermScore(term=t, score=s) for t, s in ranked]

    def idf(self, term: str) -> float:
        check_is_fitted(self, "df_")
        if term not in self.df_:
            raise NotFoundError("term", term)
        if self.mode == "naive":
            return math.log10(self.n_docs_ / self.df_[term])
        return smooth_idf(self.df_[term], self.n_docs_)


def split_sentences(raw: str) -> list[str]:
    """Crude sentence split on ., !, ? and newlines, for the compatibility
    corpus mode that treats one document's sentences as the corpus."""
    parts = []
    buf = []
    for ch in raw:
        if ch in ".!?\n":
            part = "".join(buf).strip()
            if part:
                parts.append(part)
            buf = []
        else:
            buf.append(ch)
    tail = "".join(buf).strip()
    if tail:
        parts.append(tail)
    return parts
