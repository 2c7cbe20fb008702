"""Job and candidate matching engine.

Skill extraction, TF-IDF scoring, both ranking directions (applicants for
a job, jobs for an applicant), retrieval metrics and a small JSONL-backed
document store, exposed over a CLI and an HTTP service.
"""

from .errors import (
    DuplicateApplicationError,
    InvalidFieldError,
    JobhamError,
    LexiconError,
    NotFoundError,
    StorageError,
    VocabularyError,
)
from .extract import (
    Extractor,
    LexiconSkillExtractor,
    ResumeProfile,
    SkillLexicon,
    extract_job_skills,
    extract_resume_profile,
)
from .ranker import (
    MatchEngine,
    RankedEntry,
    RankedResult,
    ScoredSkill,
    match_ratio,
    match_score,
    score_job_skills,
)
from .store import (
    ApplicantProfile,
    ApplicationRecord,
    DocumentStore,
    JobPosting,
    StoreState,
)
from .textprep import (
    EncodedSequence,
    Vocabulary,
    WordPieceEncoder,
    encode,
    normalize_text,
    wordpiece_tokenize,
)
from .tfidf import TermScore, TfidfScorer, smooth_idf, term_frequency, tfidf_score

__version__ = "0.1.0"

__all__ = [
    "ApplicantProfile",
    "ApplicationRecord",
    "DocumentStore",
    "DuplicateApplicationError",
    "EncodedSequence",
    "Extractor",
    "InvalidFieldError",
    "JobPosting",
    "JobhamError",
    "LexiconError",
    "LexiconSkillExtractor",
    "MatchEngine",
    "NotFoundError",
    "RankedEntry",
    "RankedResult",
    "ResumeProfile",
    "ScoredSkill",
    "SkillLexicon",
    "StorageError",
    "StoreState",
    "TermScore",
    "TfidfScorer",
    "Vocabulary",
    "VocabularyError",
    "WordPieceEncoder",
    "encode",
    "extract_job_skills",
    "extract_resume_profile",
    "match_ratio",
    "match_score",
    "normalize_text",
    "score_job_skills",
    "smooth_idf",
    "term_frequency",
    "tfidf_score",
    "wordpiece_tokenize",
]
