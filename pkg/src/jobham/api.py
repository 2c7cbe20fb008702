"""HTTP service exposing the four ranking/visualization endpoints.

Read endpoints (GET, id lists travel as comma-separated path segments):

* ``/JobMatchCV/{job_id}/{applicant_ids}``  - ranked applicants for a job
* ``/CVMATCHJOB/{applicant_id}/{job_ids}``  - ranked jobs for an applicant
* ``/WordCloud/{job_id}``                   - top word frequencies
* ``/Job2Skill/{job_id}``                   - top scored skills

Every body is JSON with ``status``/``payload``/``diagnostics``; errors
carry a machine-readable ``code`` plus a message. Ingestion is primarily
the CLI's job; two minimal PUT routes exist so a deployment can load data
over the wire.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .errors import InvalidFieldError, JobhamError, NotFoundError
from .extract import Extractor
from .ranker import MatchEngine
from .stats import default_stopwords, top_n, word_frequencies
from .store import ApplicantProfile, DocumentStore, JobPosting

WORDCLOUD_TOP = 100
JOB2SKILL_TOP = 20


def _ok(payload, diagnostics=None):
    return {"status": "ok", "payload": payload, "diagnostics": diagnostics or []}


def _error(status_code, code, message):
    return JSONResponse(
        status_code=status_code,
        content={"status": "error", "code": code, "message": message},
    )


def _split_ids(segment: str, what: str) -> list[str]:
    ids = segment.split(",")
    if not ids or any(not part for part in ids):
        raise InvalidFieldError(what, "malformed comma-separated id list")
    return ids


def create_app(
    store: DocumentStore,
    extractor: Extractor,
    stopwords=None,
    mode: str = "smooth",
) -> FastAPI:
    """Wire a service around one store and one extractor."""
    app = FastAPI(title="jobham", docs_url=None, redoc_url=None)
    engine = MatchEngine(store, extractor, mode=mode)
    words_to_drop = default_stopwords() if stopwords is None else stopwords
    app.state.store = store
    app.state.engine = engine

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError):
        return _error(404, exc.code, str(exc))

    @app.exception_handler(InvalidFieldError)
    async def _bad_request(request: Request, exc: InvalidFieldError):
        return _error(400, exc.code, str(exc))

    @app.exception_handler(JobhamError)
    async def _internal(request: Request, exc: JobhamError):
        return _error(500, exc.code, str(exc))

    @app.get("/JobMatchCV/{job_id}/{applicant_ids}")
    def job_match_cv(job_id: str, applicant_ids: str):
        ids = _split_ids(applicant_ids, "applicant_ids")
        result = engine.rank_applicants(job_id, ids)
        return _ok(result.to_payload(with_match_list=True), result.diagnostics)

    @app.get("/CVMATCHJOB/{applicant_id}/{job_ids}")
    def cv_match_job(applicant_id: str, job_ids: str):
        ids = _split_ids(job_ids, "job_ids")
        result = engine.rank_jobs(applicant_id, ids)
        return _ok(result.to_payload(with_match_list=False), result.diagnostics)

    @app.get("/WordCloud/{job_id}")
    def word_cloud(job_id: str):
        job = store.get_job(job_id)
        table = top_n(word_frequencies(job.description, words_to_drop), WORDCLOUD_TOP)
        return _ok(table.to_payload())

    @app.get("/Job2Skill/{job_id}")
    def job_to_skill(job_id: str):
        scored = engine.job_scored_skills(job_id)[:JOB2SKILL_TOP]
        return _ok([entry.to_dict() for entry in scored])

    @app.put("/jobs/{job_id}")
    def put_job(job_id: str, record: dict):
        job = JobPosting.from_dict({**record, "job_id": job_id})
        if not job.skills:
            job = JobPosting.from_dict(
                {**job.to_dict(), "skills": extractor.job_skills(job.description)}
            )
        store.upsert_job(job)
        return _ok({"job_id": job_id})

    @app.put("/applicants/{applicant_id}")
    def put_applicant(applicant_id: str, record: dict):
        applicant = ApplicantProfile.from_dict(
            {**record, "applicant_id": applicant_id}
        )
        if applicant.resume_text and applicant.resume_profile is None:
            applicant = ApplicantProfile.from_dict(
                {
                    **applicant.to_dict(),
                    "resume_profile": extractor.resume_profile(
                        applicant.resume_text
                    ).to_dict(),
                }
            )
        store.upsert_applicant(applicant)
        return _ok({"applicant_id": applicant_id})

    return app
