"""File-backed document store for jobs, applicants and applications.

One JSONL file per collection (``job.jsonl``, ``user.jsonl``,
``application.jsonl``) under a data directory. Every mutation rewrites the
affected collection to a temp file and renames it into place, so readers
never observe a partially written file and a crash mid-write leaves the
previous version intact.

Concurrency: single writer, many readers. Mutations serialize behind one
lock and publish a brand-new immutable :class:`StoreState`; readers hold a
state snapshot and are never affected by later writes.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path

from .errors import (
    DuplicateApplicationError,
    InvalidFieldError,
    NotFoundError,
    StorageError,
)
from .extract import ResumeProfile

JOB_TYPES = ("full_time", "part_time")
APPLICATION_STATUSES = ("applied", "interview", "offer", "rejected")

JOB_FILE = "job.jsonl"
USER_FILE = "user.jsonl"
APPLICATION_FILE = "application.jsonl"


def _require_id(value, field_name):
    if not isinstance(value, str) or not value:
        raise InvalidFieldError(field_name, "must be a non-empty string")
    if "," in value or "/" in value:
        raise InvalidFieldError(field_name, "may not contain ',' or '/'")
    return value


@dataclass(frozen=True)
class JobPosting:
    job_id: str
    title: str = ""
    company: str = ""
    location: str = ""
    job_type: str = "full_time"
    description: str = ""
    salary: str = ""
    deadline: str = "1970-01-01"
    skills: tuple[str, ...] = ()

    def validate(self):
        _require_id(self.job_id, "job_id")
        if not self.description:
            raise InvalidFieldError("description", "must be non-empty")
        if self.job_type not in JOB_TYPES:
            raise InvalidFieldError("job_type", f"must be one of {JOB_TYPES}")
        try:
            date.fromisoformat(self.deadline)
        except (TypeError, ValueError):
            raise InvalidFieldError("deadline", "must be an ISO-8601 calendar date")
        if not all(isinstance(s, str) and s for s in self.skills):
            raise InvalidFieldError("skills", "must be non-empty strings")
        return self

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "title": self.title,
            "company": self.company,
            "location": self.location,
            "job_type": self.job_type,
            "description": self.description,
            "salary": self.salary,
            "deadline": self.deadline,
            "skills": list(self.skills),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JobPosting":
        return cls(
            job_id=data.get("job_id", ""),
            title=data.get("title", ""),
            company=data.get("company", ""),
            location=data.get("location", ""),
            job_type=data.get("job_type", "full_time"),
            description=data.get("description", ""),
            salary=data.get("salary", ""),
            deadline=data.get("deadline", "1970-01-01"),
            skills=tuple(data.get("skills", [])),
        )


@dataclass(frozen=True)
class ApplicantProfile:
    applicant_id: str
    name: str = ""
    email: str = ""
    resume_text: str = ""
    resume_profile: ResumeProfile | None = None
    apply_list: tuple[str, ...] = ()
    saved_list: tuple[str, ...] = ()

    def validate(self):
        _require_id(self.applicant_id, "applicant_id")
        for list_name in ("apply_list", "saved_list"):
            ids = getattr(self, list_name)
            if len(ids) != len(set(ids)):
                raise InvalidFieldError(list_name, "contains duplicate job ids")
        return self

    def to_dict(self) -> dict:
        return {
            "applicant_id": self.applicant_id,
            "name": self.name,
            "email": self.email,
            "resume_text": self.resume_text,
            "resume_profile": (
                self.resume_profile.to_dict() if self.resume_profile else None
            ),
            "apply_list": list(self.apply_list),
            "saved_list": list(self.saved_list),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ApplicantProfile":
        raw_profile = data.get("resume_profile")
        return cls(
            applicant_id=data.get("applicant_id", ""),
            name=data.get("name", ""),
            email=data.get("email", ""),
            resume_text=data.get("resume_text", ""),
            resume_profile=ResumeProfile.from_dict(raw_profile) if raw_profile else None,
            apply_list=tuple(data.get("apply_list", [])),
            saved_list=tuple(data.get("saved_list", [])),
        )


@dataclass(frozen=True)
class ApplicationRecord:
    job_id: str
    applicant_ids: tuple[str, ...] = ()
    statuses: dict = field(default_factory=dict)

    def validate(self):
        _require_id(self.job_id, "job_id")
        if len(self.applicant_ids) != len(set(self.applicant_ids)):
            raise InvalidFieldError("applicant_ids", "contains duplicates")
        for applicant_id, status in self.statuses.items():
            if status not in APPLICATION_STATUSES:
                raise InvalidFieldError(
                    "statuses",
                    f"{applicant_id!r} has status {status!r}, "
                    f"expected one of {APPLICATION_STATUSES}",
                )
        return self

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "applicant_ids": list(self.applicant_ids),
            "statuses": dict(self.statuses),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ApplicationRecord":
        return cls(
            job_id=data.get("job_id", ""),
            applicant_ids=tuple(data.get("applicant_ids", [])),
            statuses=dict(data.get("statuses", {})),
        )


@dataclass(frozen=True)
class StoreState:
    """Immutable snapshot of all three collections.

    ``version`` bumps on every mutation; ``jobs_version`` only when the
    job collection changes, which is what model caches key on.
    """

    jobs: dict
    users: dict
    applications: dict
    version: int = 0
    jobs_version: int = 0


class DocumentStore:
    """Loads the collections at construction and keeps them in memory,
    persisting each mutation through an atomic file replace."""

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self.load_diagnostics: list[str] = []
        jobs = self._load_collection(JOB_FILE, JobPosting)
        users = self._load_collection(USER_FILE, ApplicantProfile)
        applications = self._load_collection(APPLICATION_FILE, ApplicationRecord)
        self._state = StoreState(jobs=jobs, users=users, applications=applications)
        self._flag_dangling()

    # -- loading ---------------------------------------------------------

    def _load_collection(self, filename, record_cls):
        path = self.data_dir / filename
        records = {}
        if not path.exists():
            return records
        key_field = {
            JobPosting: "job_id",
            ApplicantProfile: "applicant_id",
            ApplicationRecord: "job_id",
        }[record_cls]
        try:
            with open(path, encoding="utf-8") as f:
                for lineno, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        record = record_cls.from_dict(json.loads(line)).validate()
                    except (json.JSONDecodeError, InvalidFieldError) as exc:
                        raise StorageError(f"{path}:{lineno}: {exc}") from exc
                    key = getattr(record, key_field)
                    if key in records:
                        raise StorageError(f"{path}:{lineno}: duplicate id {key!r}")
                    records[key] = record
        except OSError as exc:
            raise StorageError(f"cannot read {path}: {exc}") from exc
        return records

    def _flag_dangling(self):
        state = self._state
        for user in state.users.values():
            for job_id in (*user.apply_list, *user.saved_list):
                if job_id not in state.jobs:
                    self.load_diagnostics.append(
                        f"applicant {user.applicant_id}: dangling job id {job_id}"
                    )
            for job_id in user.apply_list:
                if job_id not in state.jobs:
                    continue
                record = state.applications.get(job_id)
                if record is None or user.applicant_id not in record.applicant_ids:
                    self.load_diagnostics.append(
                        f"applicant {user.applicant_id}: apply_list names {job_id} "
                        "but the application record does not"
                    )
        for record in state.applications.values():
            if record.job_id not in state.jobs:
                self.load_diagnostics.append(
                    f"application record for unknown job {record.job_id}"
                )
            for applicant_id in record.applicant_ids:
                if applicant_id not in state.users:
                    self.load_diagnostics.append(
                        f"job {record.job_id}: dangling applicant id {applicant_id}"
                    )

    # -- persistence -----------------------------------------------------

    def _stage(self, filename, records):
        tmp = self.data_dir / (filename + ".tmp")
        lines = [json.dumps(r.to_dict(), ensure_ascii=False) for r in records.values()]
        body = "\n".join(lines) + ("\n" if lines else "")
        with open(tmp, "w", encoding="utf-8") as f:
            f.write(body)
            f.flush()
            os.fsync(f.fileno())
        return tmp, self.data_dir / filename

    def _commit(self, new_state: StoreState, changed: set[str]):
        # Caller holds the lock. Stage every changed file fully, then
        # rename them all, then swap the in-memory state. A failure while
        # writing touches no real file; a crash between two renames is
        # caught by the load-time consistency scan.
        collections = {
            "jobs": (JOB_FILE, new_state.jobs),
            "users": (USER_FILE, new_state.users),
            "applications": (APPLICATION_FILE, new_state.applications),
        }
        targets = [collections[name] for name in ("jobs", "users", "applications") if name in changed]
        staged = []
        try:
            for filename, records in targets:
                staged.append(self._stage(filename, records))
            for tmp, final in staged:
                os.replace(tmp, final)
        except OSError as exc:
            for tmp, _ in staged:
                try:
                    os.unlink(tmp)
                except OSError:
                    pass
            raise StorageError(f"cannot persist {self.data_dir}: {exc}") from exc
        self._state = new_state

    @property
    def state(self) -> StoreState:
        """Current snapshot; safe to hold across a whole request."""
        return self._state

    # -- jobs ------------------------------------------------------------

    def upsert_job(self, job: JobPosting) -> str:
        job.validate()
        with self._lock:
            state = self._state
            jobs = dict(state.jobs)
            jobs[job.job_id] = job
            new_state = replace(
                state,
                jobs=jobs,
                version=state.version + 1,
                jobs_version=state.jobs_version + 1,
            )
            self._commit(new_state, {"jobs"})
        return job.job_id

    def upsert_jobs(self, jobs) -> list[str]:
        """Bulk upsert with a single file write."""
        jobs = [job.validate() for job in jobs]
        with self._lock:
            state = self._state
            merged = dict(state.jobs)
            for job in jobs:
                merged[job.job_id] = job
            new_state = replace(
                state,
                jobs=merged,
                version=state.version + 1,
                jobs_version=state.jobs_version + 1,
            )
            self._commit(new_state, {"jobs"})
        return [job.job_id for job in jobs]

    def get_job(self, job_id: str) -> JobPosting:
        job = self._state.jobs.get(job_id)
        if job is None:
            raise NotFoundError("job", job_id)
        return job

    def list_jobs(self) -> list[JobPosting]:
        return list(self._state.jobs.values())

    def delete_job(self, job_id: str):
        with self._lock:
            state = self._state
            if job_id not in state.jobs:
                raise NotFoundError("job", job_id)
            jobs = dict(state.jobs)
            del jobs[job_id]
            new_state = replace(
                state,
                jobs=jobs,
                version=state.version + 1,
                jobs_version=state.jobs_version + 1,
            )
            self._commit(new_state, {"jobs"})

    # -- applicants ------------------------------------------------------

    def upsert_applicant(self, applicant: ApplicantProfile) -> str:
        applicant.validate()
        with self._lock:
            state = self._state
            users = dict(state.users)
            users[applicant.applicant_id] = applicant
            new_state = replace(state, users=users, version=state.version + 1)
            self._commit(new_state, {"users"})
        return applicant.applicant_id

    def upsert_applicants(self, applicants) -> list[str]:
        applicants = [a.validate() for a in applicants]
        with self._lock:
            state = self._state
            users = dict(state.users)
            for applicant in applicants:
                users[applicant.applicant_id] = applicant
            new_state = replace(state, users=users, version=state.version + 1)
            self._commit(new_state, {"users"})
        return [a.applicant_id for a in applicants]

    def get_applicant(self, applicant_id: str) -> ApplicantProfile:
        applicant = self._state.users.get(applicant_id)
        if applicant is None:
            raise NotFoundError("applicant", applicant_id)
        return applicant

    def list_applicants(self) -> list[ApplicantProfile]:
        return list(self._state.users.values())

    def delete_applicant(self, applicant_id: str):
        with self._lock:
            state = self._state
            if applicant_id not in state.users:
                raise NotFoundError("applicant", applicant_id)
            users = dict(state.users)
            del users[applicant_id]
            new_state = replace(state, users=users, version=state.version + 1)
            self._commit(new_state, {"users"})

    def set_resume(self, applicant_id: str, resume_text: str,
                   resume_profile: ResumeProfile | None = None) -> ApplicantProfile:
        """Attach resume text (and its extracted profile) to an applicant,
        creating the applicant if needed."""
        with self._lock:
            state = self._state
            current = state.users.get(applicant_id)
            if current is None:
                current = ApplicantProfile(applicant_id=applicant_id).validate()
            updated = replace(
                current, resume_text=resume_text, resume_profile=resume_profile
            )
            users = dict(state.users)
            users[applicant_id] = updated
            new_state = replace(state, users=users, version=state.version + 1)
            self._commit(new_state, {"users"})
        return updated

    # -- applications ----------------------------------------------------

    def record_application(self, job_id: str, applicant_id: str) -> ApplicationRecord:
        """Register one application; the applicant lands in the job's
        record exactly once with status "applied".

        Raises DuplicateApplicationError (carrying the unchanged record)
        when the applicant already applied.
        """
        with self._lock:
            state = self._state
            if job_id not in state.jobs:
                raise NotFoundError("job", job_id)
            applicant = state.users.get(applicant_id)
            if applicant is None:
                raise NotFoundError("applicant", applicant_id)
            record = state.applications.get(job_id) or ApplicationRecord(job_id=job_id)
            if applicant_id in record.applicant_ids:
                exc = DuplicateApplicationError(
                    f"{applicant_id!r} already applied to {job_id!r}"
                )
                exc.record = record
                raise exc
            updated = ApplicationRecord(
                job_id=job_id,
                applicant_ids=record.applicant_ids + (applicant_id,),
                statuses={**record.statuses, applicant_id: "applied"},
            )
            applications = dict(state.applications)
            applications[job_id] = updated
            users = dict(state.users)
            if job_id not in applicant.apply_list:
                users[applicant_id] = replace(
                    applicant, apply_list=applicant.apply_list + (job_id,)
                )
            new_state = replace(
                state,
                users=users,
                applications=applications,
                version=state.version + 1,
            )
            self._commit(new_state, {"users", "applications"})
        return updated

    def set_application_status(self, job_id: str, applicant_id: str, status: str):
        if status not in APPLICATION_STATUSES:
            raise InvalidFieldError(
                "status", f"must be one of {APPLICATION_STATUSES}"
            )
        with self._lock:
            state = self._state
            record = state.applications.get(job_id)
            if record is None or applicant_id not in record.applicant_ids:
                raise NotFoundError("application", f"{job_id}/{applicant_id}")
            updated = replace(
                record, statuses={**record.statuses, applicant_id: status}
            )
            applications = dict(state.applications)
            applications[job_id] = updated
            new_state = replace(
                state, applications=applications, version=state.version + 1
            )
            self._commit(new_state, {"applications"})
        return updated

    def get_application(self, job_id: str) -> ApplicationRecord:
        record = self._state.applications.get(job_id)
        if record is None:
            raise NotFoundError("application", job_id)
        return record

    def list_applicants_for_job(self, job_id: str) -> list[str]:
        """Applicant ids for a job in application order, dangling ids
        excluded (see dangling_applicants_for_job)."""
        state = self._state
        if job_id not in state.jobs:
            raise NotFoundError("job", job_id)
        record = state.applications.get(job_id)
        if record is None:
            return []
        return [a for a in record.applicant_ids if a in state.users]

    def dangling_applicants_for_job(self, job_id: str) -> list[str]:
        """Applicant ids recorded for a job that no longer resolve."""
        state = self._state
        if job_id not in state.jobs:
            raise NotFoundError("job", job_id)
        record = state.applications.get(job_id)
        if record is None:
            return []
        return [a for a in record.applicant_ids if a not in state.users]
