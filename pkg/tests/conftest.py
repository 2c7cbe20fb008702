"""Shared fixtures: a toy skill lexicon, a toy subword vocabulary and a
populated store, all rebuilt per test in tmp_path."""

import pytest

from jobham.extract import LexiconSkillExtractor, SkillLexicon
from jobham.store import ApplicantProfile, DocumentStore, JobPosting
from jobham.textprep import Vocabulary

LEXICON_LINES = [
    "python\tpython3",
    "sql\t",
    "java\tjava8",
    "javascript\tjs",
    "docker\t",
    "linux\t",
    "postgresql\tpostgres",
    "go\tgolang",
    "machine learning\tml",
]

VOCAB_TOKENS = [
    "[PAD]",
    "[UNK]",
    "[CLS]",
    "[SEP]",
    "un",
    "##aff",
    "##able",
    "aff",
    "go",
    "hello",
    "world",
    "job",
    "##ham",
    "ham",
]


@pytest.fixture
def lexicon_file(tmp_path):
    path = tmp_path / "lexicon.tsv"
    path.write_text("\n".join(LEXICON_LINES) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def lexicon(lexicon_file):
    return SkillLexicon.from_file(lexicon_file)


@pytest.fixture
def extractor(lexicon):
    return LexiconSkillExtractor(lexicon=lexicon)


@pytest.fixture
def vocab_file(tmp_path):
    path = tmp_path / "vocab.txt"
    path.write_text("\n".join(VOCAB_TOKENS) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def vocab(vocab_file):
    return Vocabulary.from_file(vocab_file)


@pytest.fixture
def store(tmp_path):
    return DocumentStore(tmp_path / "data")


def make_job(job_id, description, **overrides):
    fields = {
        "job_id": job_id,
        "title": f"role {job_id}",
        "company": "acme",
        "location": "remote",
        "job_type": "full_time",
        "description": description,
        "salary": "50k",
        "deadline": "2030-01-01",
        "skills": (),
    }
    fields.update(overrides)
    return JobPosting(**fields)


def make_applicant(applicant_id, resume_text="", **overrides):
    fields = {
        "applicant_id": applicant_id,
        "name": f"person {applicant_id}",
        "email": f"{applicant_id}@example.com",
        "resume_text": resume_text,
    }
    fields.update(overrides)
    return ApplicantProfile(**fields)
