"""Matching core: turn TF-IDF terms into scored job skills, compute the
match ratio against a candidate's skills, and rank in both directions.

The pipeline for one (job, candidate) pair:

1. ``score_job_skills`` pairs every TF-IDF term with every job skill it
   occurs in (case-insensitive substring), keeps the term's score and the
   term-to-skill length ratio, sorts by ratio and drops duplicate skills.
2. ``match_score`` intersects that list with the candidate's skills, sums
   the matched TF-IDF scores and multiplies by the matched fraction of the
   job's skills.

Rankings sort by score descending with ties broken by entity id, so output
order never depends on input order.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .errors import NotFoundError
from .extract import Extractor
from .textprep import normalize_text
from .tfidf import TfidfScorer, TermScore


@dataclass(frozen=True)
class ScoredSkill:
    """A job skill annotated with the TF-IDF term that matched it."""

    skill: str
    score: float
    ratio: float
    match: str

    def to_dict(self) -> dict:
        return {
            "skill": self.skill,
            "score": self.score,
            "ratio": self.ratio,
            "match": self.match,
        }


@dataclass
class RankedEntry:
    entity_id: str
    score: float
    match_list: list[str]
    note: str | None = None


@dataclass
class RankedResult:
    """Entries ordered by score descending, ties by entity id ascending."""

    entries: list[RankedEntry] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    def to_payload(self, with_match_list: bool = True) -> dict:
        payload = {}
        for entry in self.entries:
            item = {"score": entry.score}
            if with_match_list:
                item["match_list"] = list(entry.match_list)
            payload[entry.entity_id] = item
        return payload


def score_job_skills(terms: list[TermScore], job_skills: list[str]) -> list[ScoredSkill]:
    """Filter TF-IDF terms down to the job's skills.

    Every (term, skill) pair where the term occurs case-insensitively
    inside the skill string produces a candidate; candidates sort by ratio
    descending (ties: score descending, then skill ascending) and only the
    first entry per skill survives.
    """
    candidates = []
    for term in terms:
        needle = term.term.lower()
        if not needle:
            continue
        for skill in job_skills:
            if needle in skill.lower():
                candidates.append(
                    ScoredSkill(
                        skill=skill,
                        score=term.score,
                        ratio=len(term.term) / len(skill),
                        match=term.term,
                    )
                )
    candidates.sort(key=lambda s: (-s.ratio, -s.score, s.skill))
    seen = set()
    result = []
    for cand in candidates:
        if cand.skill in seen:
            continue
        seen.add(cand.skill)
        result.append(cand)
    return result


def match_ratio(matched: list[str], job_skills: list[str]) -> float:
    """Percentage of the job's skills present in the matched list."""
    if not job_skills:
        raise ValueError("job has no skills to match against")
    return 100.0 * len(matched) / len(job_skills)


@dataclass
class MatchOutcome:
    score: float
    match_list: list[str]
    ratio: float
    note: str | None = None


def match_score(scored: list[ScoredSkill], cv_skills: list[str]) -> MatchOutcome:
    """Combine skill importance and coverage into one score.

    score = (sum of matched TF-IDF scores) * (matched fraction of the
    job's scored skills). A job with no scored skills yields 0 with a
    diagnostic instead of failing.
    """
    if not scored:
        return MatchOutcome(0.0, [], 0.0, note="job has no scored skills")
    cv = {s.lower() for s in cv_skills}
    matched = [entry for entry in scored if entry.skill.lower() in cv]
    ratio = match_ratio([e.skill for e in matched], [e.skill for e in scored])
    total = sum(entry.score for entry in matched)
    return MatchOutcome(total * ratio / 100.0, [e.skill for e in matched], ratio)


class MatchEngine:
    """Rank candidates for a job and jobs for a candidate over a store.

    Every public call captures one store snapshot up front and works only
    on it, so a concurrent write can never bleed into a half-finished
    ranking. The TF-IDF model covers every job description in the
    snapshot and is cached until the job collection changes. Skill
    extraction goes through the injected
    :class:`~jobham.extract.Extractor` contract and nothing else.
    """

    def __init__(self, store, extractor: Extractor, mode: str = "smooth"):
        self.store = store
        self.extractor = extractor
        self.mode = mode
        self._fit_lock = threading.Lock()
        self._model: TfidfScorer | None = None
        self._model_version = None

    def tfidf_model(self, state=None) -> TfidfScorer:
        """Model over all job descriptions, cached per job collection
        version."""
        if state is None:
            state = self.store.state
        with self._fit_lock:
            if self._model is None or self._model_version != state.jobs_version:
                corpus = [
                    (job_id, normalize_text(job.description))
                    for job_id, job in state.jobs.items()
                ]
                if not corpus:
                    raise NotFoundError("job corpus", "<empty store>")
                self._model = TfidfScorer(mode=self.mode).fit(corpus)
                self._model_version = state.jobs_version
            return self._model

    def _get_job(self, state, job_id):
        job = state.jobs.get(job_id)
        if job is None:
            raise NotFoundError("job", job_id)
        return job

    def _get_applicant(self, state, applicant_id):
        applicant = state.users.get(applicant_id)
        if applicant is None:
            raise NotFoundError("applicant", applicant_id)
        return applicant

    def job_scored_skills(self, job_id: str, state=None) -> list[ScoredSkill]:
        """The job's skills scored by the TF-IDF terms that match them."""
        if state is None:
            state = self.store.state
        job = self._get_job(state, job_id)
        terms = self.tfidf_model(state).term_scores(job_id)
        skills = self.extractor.job_skills(job.description)
        return score_job_skills(terms, skills)

    def _cv_skills(self, applicant) -> tuple[list[str], str | None]:
        if not applicant.resume_text:
            return [], "no resume text"
        return self.extractor.resume_profile(applicant.resume_text).skills, None

    def rank_applicants(self, job_id: str, applicant_ids: list[str]) -> RankedResult:
        """Score every applicant against one job's scored skill list."""
        state = self.store.state
        scored = self.job_scored_skills(job_id, state)
        result = RankedResult()
        seen = set()
        for applicant_id in applicant_ids:
            if applicant_id in seen:
                continue
            seen.add(applicant_id)
            applicant = state.users.get(applicant_id)
            if applicant is None:
                result.diagnostics.append(f"unknown applicant id: {applicant_id}")
                continue
            cv_skills, note = self._cv_skills(applicant)
            outcome = match_score(scored, cv_skills)
            note = note or outcome.note
            if note:
                result.diagnostics.append(f"{applicant_id}: {note}")
            result.entries.append(
                RankedEntry(applicant_id, outcome.score, outcome.match_list, note)
            )
        result.entries.sort(key=lambda e: (-e.score, e.entity_id))
        return result

    def rank_jobs(self, applicant_id: str, job_ids: list[str]) -> RankedResult:
        """Score one applicant's skills against every listed job."""
        state = self.store.state
        applicant = self._get_applicant(state, applicant_id)
        cv_skills, cv_note = self._cv_skills(applicant)
        result = RankedResult()
        if cv_note:
            result.diagnostics.append(f"{applicant_id}: {cv_note}")
        seen = set()
        for job_id in job_ids:
            if job_id in seen:
                continue
            seen.add(job_id)
            if job_id not in state.jobs:
                result.diagnostics.append(f"unknown job id: {job_id}")
                continue
            scored = self.job_scored_skills(job_id, state)
            outcome = match_score(scored, cv_skills)
            note = cv_note or outcome.note
            if outcome.note:
                result.diagnostics.append(f"{job_id}: {outcome.note}")
            result.entries.append(
                RankedEntry(job_id, outcome.score, outcome.match_list, note)
            )
        result.entries.sort(key=lambda e: (-e.score, e.entity_id))
        return result
