"""Operator command line.

Ingestion, both ranking directions, per-job skill and word-frequency
dumps, TF-IDF inspection, run-file evaluation and the HTTP server. Every
command exits 0 on success and nonzero with a diagnostic on failure;
usage errors exit 2.
"""

from __future__ import annotations

import functools
import json
import re
import sys

import click

from . import api, metrics, stats
from .errors import DuplicateApplicationError, JobhamError
from .extract import LexiconSkillExtractor, SkillLexicon, load_term_list
from .ranker import MatchEngine
from .store import ApplicantProfile, DocumentStore, JobPosting
from .textprep import Vocabulary, normalize_text
from .tfidf import TermScore, TfidfScorer, split_sentences

_SYNTH_ID_RE = re.compile(r"^job-(\d+)$")


def wrap_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except JobhamError as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def data_dir_option(func):
    return click.option(
        "--data-dir",
        envvar="JOBHAM_DATA_DIR",
        default="data",
        show_default=True,
        help="Directory holding the collection files.",
    )(func)


def lexicon_option(required=False):
    def deco(func):
        return click.option(
            "--lexicon",
            envvar="JOBHAM_LEXICON",
            required=required,
            default=None,
            help="Skill lexicon file (canonical<TAB>alias1,alias2,...).",
        )(func)

    return deco


def entity_list_options(func):
    func = click.option(
        "--titles", default=None, help="Optional designation list, one per line."
    )(func)
    func = click.option(
        "--institutions", default=None, help="Optional institution list, one per line."
    )(func)
    return func


def _build_extractor(lexicon, titles=None, institutions=None):
    return LexiconSkillExtractor(
        lexicon=SkillLexicon.from_file(lexicon),
        titles=load_term_list(titles) if titles else None,
        institutions=load_term_list(institutions) if institutions else None,
    )


def _print_ranking(result):
    for rank, entry in enumerate(result.entries, start=1):
        click.echo(
            "\t".join(
                [str(rank), entry.entity_id, f"{entry.score:.6f}", ",".join(entry.match_list)]
            )
        )
    for note in result.diagnostics:
        click.echo(f"warning: {note}", err=True)


@click.group()
@click.version_option(package_name="jobham")
def main():
    """Job and candidate matching engine."""


@main.command("ingest-jobs")
@click.argument("jobs_file", type=click.Path(exists=True, dir_okay=False))
@data_dir_option
@lexicon_option()
@wrap_errors
def ingest_jobs(jobs_file, data_dir, lexicon):
    """Load job records (one JSON object per line) into the store.

    Records without a job_id get a synthesized job-NNNN id. With a lexicon,
    records without a skills list get one extracted from the description.
    """
    store = DocumentStore(data_dir)
    extractor = _build_extractor(lexicon) if lexicon else None
    counter = 0
    for job in store.list_jobs():
        m = _SYNTH_ID_RE.match(job.job_id)
        if m:
            counter = max(counter, int(m.group(1)))
    jobs = []
    with open(jobs_file, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise click.ClickException(f"{jobs_file}:{lineno}: {exc}")
            if not record.get("job_id"):
                counter += 1
                record["job_id"] = f"job-{counter:04d}"
            job = JobPosting.from_dict(record)
            if extractor and not job.skills:
                job = JobPosting.from_dict(
                    {**job.to_dict(), "skills": extractor.job_skills(job.description)}
                )
            jobs.append(job)
    store.upsert_jobs(jobs)
    click.echo(f"ingested {len(jobs)} jobs into {data_dir}")


@main.command("ingest-resume")
@click.argument("applicant_id")
@click.argument("resume_file", type=click.Path(exists=True, dir_okay=False))
@data_dir_option
@lexicon_option()
@entity_list_options
@wrap_errors
def ingest_resume(applicant_id, resume_file, data_dir, lexicon, titles, institutions):
    """Attach a plain-text resume to an applicant, creating it if needed."""
    store = DocumentStore(data_dir)
    with open(resume_file, encoding="utf-8") as f:
        resume_text = f.read()
    profile = None
    if lexicon:
        extractor = _build_extractor(lexicon, titles, institutions)
        profile = extractor.resume_profile(resume_text)
    store.set_resume(applicant_id, resume_text, profile)
    click.echo(f"stored resume for {applicant_id}")


@main.command("apply")
@click.argument("applicant_id")
@click.argument("job_id")
@data_dir_option
@wrap_errors
def apply_cmd(applicant_id, job_id, data_dir):
    """Record one application (idempotent; repeats only warn)."""
    store = DocumentStore(data_dir)
    try:
        record = store.record_application(job_id, applicant_id)
    except DuplicateApplicationError as exc:
        click.echo(f"warning: {exc}", err=True)
        return
    click.echo(f"{applicant_id} applied to {job_id} ({len(record.applicant_ids)} total)")


@main.command("rank-applicants")
@click.argument("job_id")
@data_dir_option
@lexicon_option(required=True)
@entity_list_options
@wrap_errors
def rank_applicants(job_id, data_dir, lexicon, titles, institutions):
    """Rank everyone who applied to a job. Prints rank, id, score, skills."""
    store = DocumentStore(data_dir)
    engine = MatchEngine(store, _build_extractor(lexicon, titles, institutions))
    applicant_ids = store.list_applicants_for_job(job_id)
    result = engine.rank_applicants(job_id, applicant_ids)
    for dangling in store.dangling_applicants_for_job(job_id):
        result.diagnostics.append(f"dangling applicant id: {dangling}")
    _print_ranking(result)


@main.command("recommend")
@click.argument("applicant_id")
@data_dir_option
@lexicon_option(required=True)
@entity_list_options
@wrap_errors
def recommend(applicant_id, data_dir, lexicon, titles, institutions):
    """Rank every stored job for one applicant."""
    store = DocumentStore(data_dir)
    engine = MatchEngine(store, _build_extractor(lexicon, titles, institutions))
    job_ids = [job.job_id for job in store.list_jobs()]
    result = engine.rank_jobs(applicant_id, job_ids)
    _print_ranking(result)


@main.command("job2skill")
@click.argument("job_id")
@data_dir_option
@lexicon_option(required=True)
@wrap_errors
def job2skill(job_id, data_dir, lexicon):
    """Top scored skills for a job. Prints skill, score, ratio, match."""
    store = DocumentStore(data_dir)
    engine = MatchEngine(store, _build_extractor(lexicon))
    for entry in engine.job_scored_skills(job_id)[: api.JOB2SKILL_TOP]:
        click.echo(
            "\t".join(
                [entry.skill, f"{entry.score:.6f}", f"{entry.ratio:.6f}", entry.match]
            )
        )


@main.command("wordcloud")
@click.argument("job_id")
@data_dir_option
@click.option("--stopwords", default=None, help="Stopword file, one token per line.")
@wrap_errors
def wordcloud(job_id, data_dir, stopwords):
    """Top non-stopword token frequencies for a job description."""
    store = DocumentStore(data_dir)
    words_to_drop = (
        stats.load_stopwords(stopwords) if stopwords else stats.default_stopwords()
    )
    job = store.get_job(job_id)
    table = stats.top_n(
        stats.word_frequencies(job.description, words_to_drop), api.WORDCLOUD_TOP
    )
    for entry in table.entries:
        click.echo(f"{entry.token}\t{entry.count}")


@main.command("tfidf")
@click.option("--doc", required=True, help="Job id to score.")
@click.option(
    "--mode",
    type=click.Choice(["naive", "smooth"]),
    default="smooth",
    show_default=True,
)
@click.option(
    "--corpus",
    type=click.Choice(["jobs", "single-doc-sentences"]),
    default="jobs",
    show_default=True,
    help="jobs: fit over every stored job description. single-doc-sentences: "
    "fit over this document's sentences only and sum per-sentence weights, "
    "for comparison against per-document vectorizer output.",
)
@data_dir_option
@wrap_errors
def tfidf_cmd(doc, mode, corpus, data_dir):
    """Per-term TF-IDF scores for one job description, highest first."""
    store = DocumentStore(data_dir)
    if corpus == "jobs":
        pairs = [
            (job.job_id, normalize_text(job.description)) for job in store.list_jobs()
        ]
        model = TfidfScorer(mode=mode).fit(pairs)
        rows = model.term_scores(doc)
    else:
        job = store.get_job(doc)
        sentences = split_sentences(job.description)
        pairs = [
            (f"{doc}#{i:04d}", normalize_text(s)) for i, s in enumerate(sentences)
        ]
        model = TfidfScorer(mode=mode).fit(pairs)
        combined: dict[str, float] = {}
        for sent_id, _ in pairs:
            for term, weight in model.doc_weights(sent_id).items():
                combined[term] = combined.get(term, 0.0) + weight
        rows = [
            TermScore(term=t, score=s)
            for t, s in sorted(combined.items(), key=lambda kv: (-kv[1], kv[0]))
        ]
    for row in rows:
        click.echo(f"{row.term}\t{row.score:.6f}")


@main.command("eval")
@click.argument("run_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("qrels_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", default=10, show_default=True, help="Cutoff for NDCG and recall.")
@wrap_errors
def eval_cmd(run_file, qrels_file, k):
    """Score a ranked run against graded relevance judgments.

    The run file holds query_id<TAB>doc_id lines in rank order; the
    judgments file holds query_id<TAB>doc_id<TAB>grade lines. Prints one
    row per query plus a mean row.
    """
    if k < 1:
        raise click.UsageError("--k must be >= 1")
    run: dict[str, list[str]] = {}
    with open(run_file, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2 or not all(parts):
                raise click.ClickException(
                    f"{run_file}:{lineno}: expected query_id<TAB>doc_id[<TAB>doc_id...]"
                )
            run.setdefault(parts[0], []).extend(parts[1:])
    grades: dict[str, dict[str, float]] = {}
    with open(qrels_file, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise click.ClickException(
                    f"{qrels_file}:{lineno}: expected query_id<TAB>doc_id<TAB>grade"
                )
            try:
                grade = float(parts[2])
            except ValueError:
                raise click.ClickException(f"{qrels_file}:{lineno}: bad grade {parts[2]!r}")
            grades.setdefault(parts[0], {})[parts[1]] = grade
    click.echo("\t".join(["query", "rr", f"ndcg@{k}", f"recall@{k}"]))
    rr_values, ndcg_values, recall_values = [], [], []
    for query_id, ranked in run.items():
        query_grades = grades.get(query_id, {})
        relevances = [query_grades.get(doc_id, 0.0) for doc_id in ranked]
        first_hit = next(
            (i for i, rel in enumerate(relevances, start=1) if rel > 0), None
        )
        rr = 0.0 if first_hit is None else 1.0 / first_hit
        ndcg_value = metrics.ndcg(relevances, k)
        relevant = {doc_id for doc_id, grade in query_grades.items() if grade > 0}
        if relevant:
            recall_value = metrics.recall_at_k(ranked, relevant, k)
        else:
            recall_value = 0.0
            click.echo(f"warning: no relevant docs judged for {query_id}", err=True)
        rr_values.append(rr)
        ndcg_values.append(ndcg_value)
        recall_values.append(recall_value)
        click.echo(
            "\t".join(
                [query_id, f"{rr:.6f}", f"{ndcg_value:.6f}", f"{recall_value:.6f}"]
            )
        )
    if rr_values:
        n = len(rr_values)
        click.echo(
            "\t".join(
                [
                    "MEAN",
                    f"{sum(rr_values) / n:.6f}",
                    f"{sum(ndcg_values) / n:.6f}",
                    f"{sum(recall_values) / n:.6f}",
                ]
            )
        )


@main.command("serve")
@click.option("--port", envvar="JOBHAM_PORT", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@data_dir_option
@lexicon_option(required=True)
@click.option(
    "--vocab",
    envvar="JOBHAM_VOCAB",
    default=None,
    help="Token vocabulary file, one token per line (validated at startup).",
)
@entity_list_options
@click.option("--stopwords", default=None, help="Stopword file, one token per line.")
@wrap_errors
def serve(port, host, data_dir, lexicon, vocab, titles, institutions, stopwords):
    """Start the HTTP service."""
    import uvicorn

    store = DocumentStore(data_dir)
    extractor = _build_extractor(lexicon, titles, institutions)
    if vocab:
        Vocabulary.from_file(vocab)
    words_to_drop = (
        stats.load_stopwords(stopwords) if stopwords else stats.default_stopwords()
    )
    app = api.create_app(store, extractor, stopwords=words_to_drop)
    for note in store.load_diagnostics:
        click.echo(f"warning: {note}", err=True)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
