"""Text normalization and subword encoding.

Three stages, each usable on its own:

* :func:`normalize_text` lowercases, strips ASCII punctuation and collapses
  whitespace.
* :func:`wordpiece_tokenize` splits normalized text into subword tokens by
  greedy longest-prefix matching against a fixed vocabulary.
* :func:`encode` turns a token list into fixed-length id/segment/mask vectors
  suitable as model input.

:class:`WordPieceEncoder` wraps the full pipeline as a scikit-learn style
transformer so it can sit inside an ordinary sklearn Pipeline.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import VocabularyError

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"
CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"
SPECIAL_TOKENS = (PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN)

# ASCII punctuation only; Unicode punctuation passes through untouched.
_PUNCT_TABLE = str.maketrans({c: " " for c in string.punctuation})


def normalize_text(raw: str) -> str:
    """Lowercase, replace ASCII punctuation with spaces, collapse whitespace."""
    return " ".join(raw.lower().translate(_PUNCT_TABLE).split())


class Vocabulary:
    """Token-to-id map loaded from a one-token-per-line file.

    Line number is the id. [PAD] must sit at id 0 and [UNK], [CLS], [SEP]
    must all be present. Continuation pieces carry a leading "##".
    """

    def __init__(self, tokens):
        self._token_to_id = {}
        for i, token in enumerate(tokens):
            if not token or token != token.strip():
                raise VocabularyError(f"bad token at id {i}: {token!r}")
            if token in self._token_to_id:
                raise VocabularyError(f"duplicate token {token!r} at id {i}")
            self._token_to_id[token] = i
        self._id_to_token = list(self._token_to_id)
        for special in SPECIAL_TOKENS:
            if special not in self._token_to_id:
                raise VocabularyError(f"missing special token {special}")
        if self._token_to_id[PAD_TOKEN] != 0:
            raise VocabularyError("[PAD] must have id 0")

    @classmethod
    def from_file(cls, path) -> "Vocabulary":
        with open(path, encoding="utf-8") as f:
            tokens = [line.rstrip("\n") for line in f]
        if tokens and tokens[-1] == "":
            tokens.pop()
        return cls(tokens)

    def __len__(self):
        return len(self._id_to_token)

    def __contains__(self, token):
        return token in self._token_to_id

    def id(self, token: str) -> int:
        return self._token_to_id[token]

    def token(self, token_id: int) -> str:
        return self._id_to_token[token_id]

    @property
    def pad_id(self):
        return self._token_to_id[PAD_TOKEN]


@dataclass
class EncodedSequence:
    """Fixed-length model input: token ids, segment ids and attention mask.

    All three vectors have the same length. The mask holds token_count
    leading ones, ids are [PAD] wherever the mask is zero, and segment ids
    are all zero (single-sentence input).
    """

    input_ids: list[int]
    segment_ids: list[int]
    attention_mask: list[int]
    token_count: int


def wordpiece_tokenize(text: str, vocab: Vocabulary) -> list[str]:
    """Split normalized text into subword tokens.

    Per whitespace word, repeatedly take the longest prefix found in the
    vocabulary; pieces after the first are looked up with a "##" prefix.
    A word with any unmatchable remainder collapses to a single [UNK].
    """
    if len(vocab) == 0:
        raise VocabularyError("empty vocabulary")
    tokens = []
    for word in text.split():
        pieces = []
        start = 0
        while start < len(word):
            end = len(word)
            piece = None
            while start < end:
                candidate = word[start:end]
                if start > 0:
                    candidate = "##" + candidate
                if candidate in vocab:
                    piece = candidate
                    break
                end -= 1
            if piece is None:
                pieces = [UNK_TOKEN]
                break
            pieces.append(piece)
            start = end
        tokens.extend(pieces)
    return tokens


def encode(tokens: list[str], vocab: Vocabulary, max_len: int) -> EncodedSequence:
    """Build [CLS] + tokens + [SEP], truncate to max_len, pad with [PAD].

    Truncation keeps the head of the token stream, so the last real id is
    always [SEP].
    """
    if max_len < 2:
        raise ValueError(f"max_len must be >= 2, got {max_len}")
    body = tokens[: max_len - 2]
    ids = [vocab.id(CLS_TOKEN)] + [vocab.id(t) for t in body] + [vocab.id(SEP_TOKEN)]
    token_count = len(ids)
    pad = max_len - token_count
    return EncodedSequence(
        input_ids=ids + [vocab.pad_id] * pad,
        segment_ids=[0] * max_len,
        attention_mask=[1] * token_count + [0] * pad,
        token_count=token_count,
    )


def decode(seq: EncodedSequence, vocab: Vocabulary) -> str:
    """Inverse of encode for fully in-vocabulary text.

    Drops special tokens and padding, then glues "##" continuations back
    onto their word.
    """
    words: list[str] = []
    for token_id in seq.input_ids[: seq.token_count]:
        token = vocab.token(token_id)
        if token in SPECIAL_TOKENS:
            continue
        if token.startswith("##") and words:
            words[-1] += token[2:]
        else:
            words.append(token)
    return " ".join(words)


class WordPieceEncoder(BaseEstimator, TransformerMixin):
    """Normalize, tokenize and encode texts to fixed-length sequences.

    Parameters
    ----------
    vocab_path : str
        One-token-per-line vocabulary file, line number = id.
    max_len : int
        Output vector length, including [CLS] and [SEP].
    """

    def __init__(self, vocab_path=None, max_len=256):
        self.vocab_path = vocab_path
        self.max_len = max_len

    def fit(self, X=None, y=None):
        if self.vocab_path is None:
            raise VocabularyError("vocab_path is required")
        if self.max_len < 2:
            raise ValueError(f"max_len must be >= 2, got {self.max_len}")
        self.vocabulary_ = Vocabulary.from_file(self.vocab_path)
        return self

    def transform(self, X) -> list[EncodedSequence]:
        check_is_fitted(self, "vocabulary_")
        out = []
        for text in X:
            tokens = wordpiece_tokenize(normalize_text(text), self.vocabulary_)
            out.append(encode(tokens, self.vocabulary_, self.max_len))
        return out
