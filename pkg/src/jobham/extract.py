"""Skill and resume entity extraction.

A deterministic lexicon/rule extractor: skills are found by scanning the
normalized token stream against a closed alias index, resume fields come
from fixed regex and line rules. The :class:`Extractor` contract is the
seam for swapping in a model-backed service later; ranking code only ever
talks to the contract.
"""

from __future__ import annotations

import abc
import re
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator

from .errors import LexiconError
from .textprep import normalize_text

_EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")
_YEARS_RE = re.compile(r"(\d+(?:\.\d+)?)\s*\+?\s*years?\b", re.IGNORECASE)


class SkillLexicon:
    """Closed vocabulary of canonical skills with aliases.

    The index maps every normalized alias (the canonical string counts as
    an alias of itself) to exactly one canonical entry. A normalized alias
    appearing under two canonicals is rejected at load time.
    """

    def __init__(self, entries):
        # entries: list of (canonical, [alias, ...])
        self.canonicals: list[str] = []
        self.index: dict[str, str] = {}
        self.max_alias_tokens = 0
        seen_canonical = set()
        for canonical, aliases in entries:
            if canonical in seen_canonical:
                raise LexiconError(f"duplicate canonical {canonical!r}")
            seen_canonical.add(canonical)
            self.canonicals.append(canonical)
            for alias in [canonical, *aliases]:
                key = normalize_text(alias)
                if not key:
                    raise LexiconError(
                        f"alias {alias!r} of {canonical!r} normalizes to nothing"
                    )
                owner = self.index.get(key)
                if owner is not None and owner != canonical:
                    raise LexiconError(
                        f"alias {key!r} maps to both {owner!r} and {canonical!r}"
                    )
                self.index[key] = canonical
                self.max_alias_tokens = max(self.max_alias_tokens, len(key.split()))
        self._canonical_set = seen_canonical

    @classmethod
    def from_file(cls, path) -> "SkillLexicon":
        """Load `canonical<TAB>alias1,alias2,...` lines; blank lines and
        #-comments are skipped."""
        entries = []
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                canonical, _, alias_part = line.partition("\t")
                canonical = canonical.strip()
                if not canonical:
                    raise LexiconError(f"line {lineno}: empty canonical")
                aliases = [a.strip() for a in alias_part.split(",") if a.strip()]
                entries.append((canonical, aliases))
        try:
            return cls(entries)
        except LexiconError as exc:
            raise LexiconError(f"{path}: {exc}") from exc

    def __len__(self):
        return len(self.canonicals)

    def __contains__(self, canonical):
        return canonical in self._canonical_set


def load_term_list(path) -> list[str]:
    """One term per line, used for the designation and institution lists."""
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


@dataclass
class ResumeProfile:
    """Entities pulled from one resume. Missing fields stay None."""

    name: str | None = None
    email: str | None = None
    designation: str | None = None
    college_name: str | None = None
    years_experience: float | None = None
    skills: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {}
        for key in ("name", "email", "designation", "college_name", "years_experience"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        out["skills"] = list(self.skills)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ResumeProfile":
        return cls(
            name=data.get("name"),
            email=data.get("email"),
            designation=data.get("designation"),
            college_name=data.get("college_name"),
            years_experience=data.get("years_experience"),
            skills=list(data.get("skills", [])),
        )


def _scan_tokens(tokens: list[str], index: dict[str, str], max_tokens: int) -> list[str]:
    """Longest-match-first scan over whole-token windows.

    Returns canonicals in first-occurrence order, deduplicated.
    """
    hits: list[str] = []
    i = 0
    n = len(tokens)
    while i < n:
        matched = 0
        for width in range(min(max_tokens, n - i), 0, -1):
            key = " ".join(tokens[i : i + width])
            canonical = index.get(key)
            if canonical is not None:
                hits.append(canonical)
                matched = width
                break
        i += matched or 1
    return list(dict.fromkeys(hits))


def extract_job_skills(description: str, lexicon: SkillLexicon) -> list[str]:
    """Canonical skills mentioned in a job description.

    Matching happens on whole tokens of the normalized text, longest alias
    first, so "javascript" never triggers a bare "java" entry.
    """
    if len(lexicon) == 0:
        raise LexiconError("empty lexicon")
    tokens = normalize_text(description).split()
    return _scan_tokens(tokens, lexicon.index, lexicon.max_alias_tokens)


def _first_name_line(raw: str) -> str | None:
    # First line of 2-4 capitalized alphabetic words, no digits anywhere.
    for line in raw.splitlines():
        if any(ch.isdigit() for ch in line):
            continue
        words = line.split()
        if 2 <= len(words) <= 4 and all(w.isalpha() and w[0].isupper() for w in words):
            return line.strip()
    return None


def _first_term(raw: str, terms: list[str] | None) -> str | None:
    if not terms:
        return None
    index = {}
    max_tokens = 1
    for term in terms:
        key = normalize_text(term)
        if key and key not in index:
            index[key] = term
            max_tokens = max(max_tokens, len(key.split()))
    hits = _scan_tokens(normalize_text(raw).split(), index, max_tokens)
    return hits[0] if hits else None


def extract_resume_profile(
    resume_text: str,
    lexicon: SkillLexicon,
    titles: list[str] | None = None,
    institutions: list[str] | None = None,
) -> ResumeProfile:
    """Pull the entity fields out of raw resume text.

    Email matches on the raw text before normalization; the name is the
    first all-capitalized short line; years of experience is the largest
    "<number> years" mention; skills go through extract_job_skills.
    Nothing is ever guessed for a field with no rule hit.
    """
    profile = ResumeProfile()
    if not resume_text:
        return profile
    email = _EMAIL_RE.search(resume_text)
    if email:
        profile.email = email.group(0)
    profile.name = _first_name_line(resume_text)
    years = [float(m.group(1)) for m in _YEARS_RE.finditer(resume_text)]
    if years:
        profile.years_experience = max(years)
    profile.designation = _first_term(resume_text, titles)
    profile.college_name = _first_term(resume_text, institutions)
    profile.skills = extract_job_skills(resume_text, lexicon)
    return profile


class Extractor(abc.ABC):
    """Contract both ranking directions depend on.

    Implementations must be deterministic and only return skills from the
    lexicon's canonical set.
    """

    @abc.abstractmethod
    def job_skills(self, text: str) -> list[str]:
        """Canonical skills found in a job description."""

    @abc.abstractmethod
    def resume_profile(self, text: str) -> ResumeProfile:
        """Entity fields and skills found in resume text."""


class LexiconSkillExtractor(BaseEstimator, Extractor):
    """Rule extractor over a skill lexicon plus optional term lists."""

    def __init__(self, lexicon=None, titles=None, institutions=None):
        self.lexicon = lexicon
        self.titles = titles
        self.institutions = institutions

    def job_skills(self, text: str) -> list[str]:
        return extract_job_skills(text, self.lexicon)

    def resume_profile(self, text: str) -> ResumeProfile:
        return extract_resume_profile(
            text, self.lexicon, titles=self.titles, institutions=self.institutions
        )

    def transform(self, X) -> list[list[str]]:
        """Skill lists for a batch of texts, for pipeline composition."""
        return [self.job_skills(text) for text in X]
