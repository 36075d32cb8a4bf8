"""Engine orchestration, CLI verbs, and the HTTP API."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from mathfind.api import create_app
from mathfind.cli import main as cli_main
from mathfind.engine import EngineSpec, SearchEngine, build_stores, run_item_id, save_stores
from mathfind.errors import MathfindError
from mathfind.evaluation.files import parse_qrels, parse_run
from mathfind.evaluation.protocol import prime_filter
from mathfind.evaluation.rank_metrics import ndcg_at_k, precision_at_k
from mathfind.index.build import DocRecord, make_formula_record


FIXTURE_DOCS = [
    ("doc1", "sum of two symbols", ["a+b", "x^2"]),
    ("doc2", "inverse document frequency formula", ["idf(t_i)=\\log\\frac{N}{n_i}"]),
    ("doc3", "a product of a sum", ["(3+5)\\times 9"]),
    ("doc4", "quadratic relation", ["x^2+y^2=z^2"]),
    ("doc5", "plain words only", []),
]


def write_collection(path: Path) -> Path:
    lines = []
    for doc_id, text, formulas in FIXTURE_DOCS:
        lines.append(json.dumps({"id": doc_id, "text": text, "formulas": formulas}))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def engine(tmp_path):
    docs = [
        DocRecord(doc_id, text, [make_formula_record(f"f{i}", fx) for i, fx in enumerate(formulas)])
        for doc_id, text, formulas in FIXTURE_DOCS
    ]
    index, store = build_stores(docs)
    return SearchEngine(index, store)


class TestEngine:
    def test_slt_self_retrieval(self, engine):
        hits = engine.search("a+b", EngineSpec(engine="slt"))
        assert hits[0].doc_id == "doc1" and hits[0].formula_id == "f0"
        assert hits[0].score == 1.0

    def test_opt_engine(self, engine):
        hits = engine.search("(3+5)\\times 9", EngineSpec(engine="opt"))
        assert hits[0].doc_id == "doc3"

    def test_text_engine(self, engine):
        hits = engine.search("inverse document frequency", EngineSpec(engine="bm25-text"))
        assert hits[0].doc_id == "doc2"
        assert hits[0].formula_id is None

    def test_mixed_query_segments(self, engine):
        hits = engine.search("frequency $a+b$", EngineSpec(engine="slt"))
        assert hits[0].doc_id == "doc1"

    def test_fused_requires_components(self):
        with pytest.raises(MathfindError):
            EngineSpec(engine="fused", components=("slt",))

    def test_fused_rrf(self, engine):
        spec = EngineSpec(engine="fused", components=("slt", "bm25-text"), k=5)
        hits = engine.search("sum of two symbols $a+b$", spec)
        assert hits[0].doc_id == "doc1"

    def test_doc_level_item_ids(self, engine):
        # document rankings must evaluate against doc-level qrels, so the
        # run item is the doc id even when a display formula is attached
        spec = EngineSpec(engine="fused", components=("slt", "bm25-text"), k=5)
        hits = engine.search("sum of two symbols $a+b$", spec)
        assert run_item_id(hits[0], spec.doc_level) == "doc1"
        formula_spec = EngineSpec(engine="slt", k=5)
        formula_hits = engine.search("a+b", formula_spec)
        assert run_item_id(formula_hits[0], formula_spec.doc_level) == "doc1#f0"

    def test_rerank_keeps_candidates(self, engine):
        base = engine.search("x^2", EngineSpec(engine="slt", k=10))
        for method in ("ted-slt", "ted-opt", "ted-combined", "mss", "approach0"):
            reranked = engine.search("x^2", EngineSpec(engine="slt", rerank=method, k=10))
            assert {run_item_id(h) for h in reranked} == {run_item_id(h) for h in base}

    def test_rerank_identical_tops(self, engine):
        hits = engine.search("x^2", EngineSpec(engine="slt", rerank="ted-slt", k=10))
        assert hits[0].doc_id == "doc1" and hits[0].formula_id == "f1"
        assert hits[0].score == 1.0

    def test_require_text_filter(self, engine):
        spec = EngineSpec(engine="slt", require_text=True, k=10)
        hits = engine.search("nonexistentword $a+b$", spec)
        assert hits == []

    def test_phoc_engine(self, engine):
        hits = engine.search("x^2", EngineSpec(engine="phoc", k=3))
        assert hits[0].score == pytest.approx(1.0)


class TestCli:
    def invoke(self, *args):
        runner = CliRunner()
        return runner.invoke(cli_main, list(args), catch_exceptions=False)

    def build(self, tmp_path) -> Path:
        collection = write_collection(tmp_path / "collection.jsonl")
        out = tmp_path / "idx"
        result = self.invoke("index", "--collection", str(collection), "--out", str(out))
        assert result.exit_code == 0, result.output
        return out

    def test_index_files(self, tmp_path):
        out = self.build(tmp_path)
        assert (out / "postings.bin").read_bytes()[:6] == b"MFIDX1"
        assert (out / "phoc.bin").read_bytes()[:5] == b"MFPH1"
        assert (out / "vocab.tsv").exists() and (out / "stats.tsv").exists()

    def test_index_refuses_overwrite(self, tmp_path):
        out = self.build(tmp_path)
        collection = tmp_path / "collection.jsonl"
        runner = CliRunner()
        result = runner.invoke(cli_main, ["index", "--collection", str(collection), "--out", str(out)])
        assert result.exit_code != 0
        result = runner.invoke(
            cli_main, ["index", "--collection", str(collection), "--out", str(out), "--force"]
        )
        assert result.exit_code == 0

    def test_empty_collection_warns(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        result = self.invoke("index", "--collection", str(empty), "--out", str(tmp_path / "idx2"))
        assert result.exit_code == 0
        assert "empty collection" in result.output or "0 documents" in result.output

    def test_duplicate_ids_exit_2(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id": "d1", "text": "x", "formulas": []}\n{"id": "d1", "text": "y", "formulas": []}\n')
        runner = CliRunner()
        result = runner.invoke(cli_main, ["index", "--collection", str(bad), "--out", str(tmp_path / "idx3")])
        assert result.exit_code == 2

    def test_search_single_query(self, tmp_path):
        out = self.build(tmp_path)
        result = self.invoke("search", "--index", str(out), "--query", "a+b", "--engine", "slt")
        first = result.output.splitlines()[0].split()
        assert first[2] == "doc1#f0"
        assert first[3] == "1"

    def test_search_k_larger_than_corpus(self, tmp_path):
        out = self.build(tmp_path)
        result = self.invoke("search", "--index", str(out), "--query", "x^2", "--engine", "phoc", "--k", "500")
        lines = [l for l in result.output.splitlines() if l.startswith("Q1")]
        assert 0 < len(lines) <= 5  # no more hits than stored formulas with overlap

    def test_run_file_deterministic(self, tmp_path):
        out = self.build(tmp_path)
        topics = tmp_path / "topics.tsv"
        topics.write_text("T1\tsum of two symbols $a+b$\nT2\t$x^2$\n")
        args = [
            "search", "--index", str(out), "--topics", str(topics),
            "--engine", "fused", "--components", "slt,bm25-text", "--fusion", "rrf",
        ]
        run_a = tmp_path / "run_a.txt"
        run_b = tmp_path / "run_b.txt"
        self.invoke(*args, "--run", str(run_a))
        self.invoke(*args, "--run", str(run_b))
        assert run_a.read_bytes() == run_b.read_bytes()

    def test_eval_matches_library(self, tmp_path):
        out = self.build(tmp_path)
        topics = tmp_path / "topics.tsv"
        topics.write_text("T1\t$a+b$\n")
        run_path = tmp_path / "run.txt"
        self.invoke("search", "--index", str(out), "--topics", str(topics),
                    "--engine", "slt", "--run", str(run_path), "--k", "10")
        qrels_path = tmp_path / "qrels.txt"
        qrels_path.write_text("T1 0 doc1#f0 3\nT1 0 doc4#f0 1\n")
        report_path = tmp_path / "report.tsv"
        result = self.invoke(
            "eval", "--qrels", str(qrels_path), "--run", str(run_path),
            "--metrics", "p_prime@10,ndcg_prime", "--out", str(report_path),
        )
        assert result.exit_code == 0
        rows = dict()
        for line in report_path.read_text().splitlines()[1:]:
            metric, topic, value = line.split("\t")
            rows[(metric, topic)] = float(value)

        run = parse_run(run_path)
        qrels = parse_qrels(qrels_path)
        primed = prime_filter(run, qrels)
        items = primed.items_for("T1")
        graded = qrels.for_topic("T1")
        relevant = {i for i, g in graded.items() if g >= 2}
        assert rows[("p_prime@10", "T1")] == pytest.approx(precision_at_k(items, relevant, 10))
        assert rows[("ndcg_prime", "T1")] == pytest.approx(ndcg_at_k(items, graded, max(len(items), 1)))

    def test_autocomplete_verb(self, tmp_path):
        out = self.build(tmp_path)
        result = self.invoke("autocomplete", "--index", str(out), "--symbols", "a,+")
        assert "a+b" in result.output

    def test_solve_wp_equation(self, tmp_path):
        problems = tmp_path / "problems.jsonl"
        problems.write_text(
            json.dumps({"id": "p1", "question": "two consecutive integers sum to 7",
                        "equation": "x+(x+1)=7", "answer": "3, 4"}) + "\n"
            + json.dumps({"id": "p2", "question": "total pens", "equation": "x=5+3", "answer": "8"}) + "\n"
        )
        result = self.invoke("solve-wp", "--problems", str(problems), "--mode", "equation")
        lines = result.output.splitlines()
        assert lines[0] == "p1\t3, 4\tyes"
        assert lines[1] == "p2\t8\tyes"
        assert lines[2].startswith("accuracy\t1.0000")

    def test_solve_wp_aris(self, tmp_path):
        problems = tmp_path / "problems.jsonl"
        question = (
            "Sarah had 5 black pens and 3 blue pens. She gave some of her black pens to Jack. "
            "Jack has 8 black pens. Sarah has 3 black pens left. How many black pens did Jack have?"
        )
        problems.write_text(json.dumps({"id": "p1", "question": question, "answer": "6"}) + "\n")
        result = self.invoke("solve-wp", "--problems", str(problems), "--mode", "aris")
        assert result.output.splitlines()[0] == "p1\t6\tyes"

    def test_config_file_flags_win(self, tmp_path):
        out = self.build(tmp_path)
        config = tmp_path / "conf.ini"
        config.write_text("engine=bm25-text\nk=3\n")
        # config engine applies when no flag given
        result = self.invoke("search", "--index", str(out), "--query", "plain words only",
                             "--config", str(config))
        assert "doc5" in result.output
        # explicit flag beats the config
        result = self.invoke("search", "--index", str(out), "--query", "a+b",
                             "--engine", "slt", "--config", str(config))
        assert "doc1#f0" in result.output


class TestApi:
    @pytest.fixture()
    def client(self, engine):
        return TestClient(create_app(engine), raise_server_exceptions=False)

    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["docs"] == 5
        assert body["formulas"] == 5

    def test_search_matches_engine(self, client, engine):
        response = client.post("/search", json={"query": "a+b", "engine": "slt", "k": 5})
        assert response.status_code == 200
        hits = response.json()["hits"]
        direct = engine.search("a+b", EngineSpec(engine="slt", k=5))
        assert [h["itemId"] for h in hits] == [run_item_id(h) for h in direct]
        assert [h["score"] for h in hits] == [pytest.approx(h.score) for h in direct]
        assert hits[0]["latex"] == "a+b"
        assert hits[0]["matchedTerms"]

    def test_unknown_engine_400(self, client):
        response = client.post("/search", json={"query": "a+b", "engine": "wat"})
        assert response.status_code == 400
        assert "error" in response.json()

    def test_empty_query_400(self, client):
        response = client.post("/search", json={"query": "  ", "engine": "slt"})
        assert response.status_code == 400

    def test_formula_lookup(self, client):
        response = client.get("/formula/doc1/f0")
        assert response.status_code == 200
        body = response.json()
        assert body["latex"] == "a+b"
        assert body["text"] == "sum of two symbols"

    def test_formula_404(self, client):
        assert client.get("/formula/doc1/f9").status_code == 404
        assert client.get("/formula/nodoc/f0").status_code == 404

    def test_autocomplete_conjunctive(self, client):
        response = client.post("/autocomplete", json={"symbols": ["a", "+"]})
        assert response.status_code == 200
        candidates = response.json()["candidates"]
        assert any(c["latex"] == "a+b" for c in candidates)

    def test_autocomplete_empty_400(self, client):
        assert client.post("/autocomplete", json={"symbols": []}).status_code == 400

    def test_loading_503(self):
        client = TestClient(create_app(None), raise_server_exceptions=False)
        assert client.get("/health").status_code == 503
