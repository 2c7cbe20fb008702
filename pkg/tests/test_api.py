"""HTTP service: the four read endpoints, error mapping, concurrency."""

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from types import SimpleNamespace

import jsonschema
import pytest
from fastapi.testclient import TestClient

from jobham.api import JOB2SKILL_TOP, create_app
from jobham.extract import LexiconSkillExtractor, SkillLexicon
from jobham.store import DocumentStore

from conftest import LEXICON_LINES, make_applicant, make_job

CAP_SKILLS = [f"tool{i:02d}" for i in range(25)]

OK_ENVELOPE = {
    "type": "object",
    "required": ["status", "payload", "diagnostics"],
    "properties": {
        "status": {"const": "ok"},
        "diagnostics": {"type": "array", "items": {"type": "string"}},
    },
}

ERROR_ENVELOPE = {
    "type": "object",
    "required": ["status", "code", "message"],
    "properties": {
        "status": {"const": "error"},
        "code": {"type": "string"},
        "message": {"type": "string"},
    },
}

MATCH_PAYLOAD = {
    "type": "object",
    "additionalProperties": {
        "type": "object",
        "required": ["score", "match_list"],
        "properties": {
            "score": {"type": "number", "minimum": 0},
            "match_list": {"type": "array", "items": {"type": "string"}},
        },
        "additionalProperties": False,
    },
}

SCORE_ONLY_PAYLOAD = {
    "type": "object",
    "additionalProperties": {
        "type": "object",
        "required": ["score"],
        "properties": {"score": {"type": "number", "minimum": 0}},
        "additionalProperties": False,
    },
}

WORDCLOUD_PAYLOAD = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["token", "count"],
        "properties": {
            "token": {"type": "string", "minLength": 1},
            "count": {"type": "integer", "minimum": 1},
        },
        "additionalProperties": False,
    },
}

JOB2SKILL_PAYLOAD = {
    "type": "array",
    "maxItems": JOB2SKILL_TOP,
    "items": {
        "type": "object",
        "required": ["skill", "score", "ratio", "match"],
        "properties": {
            "skill": {"type": "string"},
            "score": {"type": "number"},
            "ratio": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
            "match": {"type": "string"},
        },
        "additionalProperties": False,
    },
}


def check_ok(response, payload_schema):
    assert response.status_code == 200
    body = response.json()
    jsonschema.validate(body, OK_ENVELOPE)
    jsonschema.validate(body["payload"], payload_schema)
    return body


def check_error(response, status_code):
    assert response.status_code == status_code
    body = response.json()
    jsonschema.validate(body, ERROR_ENVELOPE)
    return body


@pytest.fixture
def service(tmp_path):
    lex_path = tmp_path / "lexicon.tsv"
    lines = LEXICON_LINES + [f"{skill}\t" for skill in CAP_SKILLS]
    lex_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    extractor = LexiconSkillExtractor(lexicon=SkillLexicon.from_file(lex_path))
    store = DocumentStore(tmp_path / "data")
    store.upsert_jobs(
        [
            make_job("j-nested", "python sql docker linux"),
            make_job("j-cap", " ".join(CAP_SKILLS)),
            make_job(
                "j-cloud",
                "kubernetes kubernetes kubernetes deployment pipeline the and of",
            ),
            make_job("j-stop", "the and of to at"),
        ]
    )
    store.upsert_applicants(
        [
            make_applicant("a1", "python"),
            make_applicant("a2", "python sql"),
            make_applicant("a3", "python sql docker"),
            make_applicant("a4", "python sql docker linux"),
            make_applicant("a-empty", ""),
        ]
    )
    app = create_app(store, extractor)
    client = TestClient(app)
    return SimpleNamespace(
        app=app, client=client, store=store, extractor=extractor
    )


class TestJobMatchCV:
    def test_planted_order_and_schema(self, service):
        response = service.client.get("/JobMatchCV/j-nested/a1,a2,a3,a4")
        body = check_ok(response, MATCH_PAYLOAD)
        assert list(body["payload"]) == ["a4", "a3", "a2", "a1"]
        scores = [body["payload"][a]["score"] for a in body["payload"]]
        assert scores == sorted(scores, reverse=True)
        # equal ratios and weights, so the scored list is alphabetical
        assert body["payload"]["a4"]["match_list"] == [
            "docker",
            "linux",
            "python",
            "sql",
        ]

    def test_unknown_job_404(self, service):
        check_error(service.client.get("/JobMatchCV/ghost/a1"), 404)

    def test_malformed_id_list_400(self, service):
        check_error(service.client.get("/JobMatchCV/j-nested/a1,,a2"), 400)
        check_error(service.client.get("/JobMatchCV/j-nested/,"), 400)

    def test_unknown_applicant_reported_not_fatal(self, service):
        body = check_ok(
            service.client.get("/JobMatchCV/j-nested/a1,ghost"), MATCH_PAYLOAD
        )
        assert "ghost" not in body["payload"]
        assert any("ghost" in d for d in body["diagnostics"])

    def test_applicant_without_resume_scores_zero(self, service):
        body = check_ok(
            service.client.get("/JobMatchCV/j-nested/a-empty"), MATCH_PAYLOAD
        )
        assert body["payload"]["a-empty"]["score"] == 0.0
        assert body["diagnostics"]


class TestCvMatchJob:
    def test_scores_without_match_list(self, service):
        response = service.client.get("/CVMATCHJOB/a4/j-nested,j-cap")
        body = check_ok(response, SCORE_ONLY_PAYLOAD)
        assert set(body["payload"]) == {"j-nested", "j-cap"}
        assert body["payload"]["j-nested"]["score"] > 0

    def test_best_job_first(self, service):
        body = check_ok(
            service.client.get("/CVMATCHJOB/a4/j-cap,j-nested"), SCORE_ONLY_PAYLOAD
        )
        assert list(body["payload"])[0] == "j-nested"

    def test_unknown_applicant_404(self, service):
        check_error(service.client.get("/CVMATCHJOB/ghost/j-nested"), 404)

    def test_malformed_id_list_400(self, service):
        check_error(service.client.get("/CVMATCHJOB/a1/j-nested,"), 400)

    def test_unknown_job_reported_not_fatal(self, service):
        body = check_ok(
            service.client.get("/CVMATCHJOB/a1/j-nested,gone"), SCORE_ONLY_PAYLOAD
        )
        assert "gone" not in body["payload"]
        assert any("gone" in d for d in body["diagnostics"])


class TestWordCloud:
    def test_top_entry_is_most_frequent_non_stopword(self, service):
        body = check_ok(service.client.get("/WordCloud/j-cloud"), WORDCLOUD_PAYLOAD)
        assert body["payload"][0] == {"token": "kubernetes", "count": 3}

    def test_stopwords_absent(self, service):
        body = check_ok(service.client.get("/WordCloud/j-cloud"), WORDCLOUD_PAYLOAD)
        tokens = {e["token"] for e in body["payload"]}
        assert "the" not in tokens and "and" not in tokens

    def test_all_stopword_description_is_ok_and_empty(self, service):
        body = check_ok(service.client.get("/WordCloud/j-stop"), WORDCLOUD_PAYLOAD)
        assert body["payload"] == []

    def test_unknown_job_404(self, service):
        check_error(service.client.get("/WordCloud/ghost"), 404)


class TestJob2Skill:
    def test_fields_and_ratios(self, service):
        body = check_ok(service.client.get("/Job2Skill/j-nested"), JOB2SKILL_PAYLOAD)
        skills = {e["skill"] for e in body["payload"]}
        assert skills == {"python", "sql", "docker", "linux"}

    def test_capped_at_twenty(self, service):
        body = check_ok(service.client.get("/Job2Skill/j-cap"), JOB2SKILL_PAYLOAD)
        assert len(body["payload"]) == JOB2SKILL_TOP

    def test_no_lexicon_hits_is_empty(self, service):
        body = check_ok(service.client.get("/Job2Skill/j-stop"), JOB2SKILL_PAYLOAD)
        assert body["payload"] == []

    def test_unknown_job_404(self, service):
        check_error(service.client.get("/Job2Skill/ghost"), 404)


class TestReproducibility:
    def test_same_request_same_bytes(self, service):
        first = service.client.get("/JobMatchCV/j-nested/a1,a2,a3,a4")
        second = service.client.get("/JobMatchCV/j-nested/a1,a2,a3,a4")
        assert first.content == second.content

    def test_fresh_service_over_same_store_same_bytes(self, service):
        path = "/CVMATCHJOB/a3/j-nested,j-cap,j-cloud"
        first = service.client.get(path)
        rebuilt = TestClient(create_app(service.store, service.extractor))
        assert rebuilt.get(path).content == first.content


class TestConcurrency:
    def test_32_parallel_reads_match_serial_results(self, service):
        paths = [
            "/JobMatchCV/j-nested/a1,a2,a3,a4",
            "/CVMATCHJOB/a4/j-nested,j-cap",
            "/WordCloud/j-cloud",
            "/Job2Skill/j-cap",
        ] * 8
        expected = {p: service.client.get(p).content for p in set(paths)}
        with ThreadPoolExecutor(max_workers=32) as pool:
            results = list(pool.map(lambda p: (p, service.client.get(p)), paths))
        for path, response in results:
            assert response.status_code == 200
            assert response.content == expected[path]


class TestIngestRoutes:
    def test_put_job_extracts_skills(self, service):
        response = service.client.put(
            "/jobs/j-new", json={"description": "needs python and docker daily"}
        )
        assert response.status_code == 200
        stored = service.store.get_job("j-new")
        assert stored.skills == ("python", "docker")

    def test_put_job_keeps_explicit_skills(self, service):
        service.client.put(
            "/jobs/j-manual",
            json={"description": "free text", "skills": ["python"]},
        )
        assert service.store.get_job("j-manual").skills == ("python",)

    def test_put_job_invalid_400(self, service):
        check_error(
            service.client.put("/jobs/j-bad", json={"description": ""}), 400
        )

    def test_put_applicant_extracts_profile(self, service):
        response = service.client.put(
            "/applicants/a-new",
            json={"resume_text": "Jane Doe\njane@x.io\n3 years python"},
        )
        assert response.status_code == 200
        stored = service.store.get_applicant("a-new")
        assert stored.resume_profile.skills == ["python"]
        assert stored.resume_profile.email == "jane@x.io"


def test_served_over_a_real_socket(service):
    """Boot the ASGI server on an ephemeral port and query it."""
    import httpx
    import uvicorn

    config = uvicorn.Config(
        service.app, host="127.0.0.1", port=0, log_level="warning"
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        deadline = time.monotonic() + 15
        while not server.started:
            assert time.monotonic() < deadline, "server never came up"
            time.sleep(0.01)
        port = server.servers[0].sockets[0].getsockname()[1]
        base = f"http://127.0.0.1:{port}"
        body = httpx.get(f"{base}/WordCloud/j-cloud", timeout=10).json()
        assert body["status"] == "ok"
        assert body["payload"][0]["token"] == "kubernetes"
        ranked = httpx.get(f"{base}/JobMatchCV/j-nested/a4,a1", timeout=10).json()
        assert list(ranked["payload"]) == ["a4", "a1"]
    finally:
        server.should_exit = True
        thread.join(timeout=15)
