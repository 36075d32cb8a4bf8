"""Term generation, inverted index construction, and sparse scoring."""

import math
import random
from collections import Counter

import pytest

from mathfind.errors import DuplicateDocId, EmptyQuery, UnknownTerm
from mathfind.formula import parse_latex, slt_to_opt
from mathfind.index import (
    Bm25Params,
    DocRecord,
    ExtractorConfig,
    bm25plus_search,
    boolean_filter,
    build_index,
    dice_search,
    idf,
    load_index,
    make_formula_record,
    opt_leafroot_paths,
    opt_tuples,
    save_index,
    slt_term_strings,
    slt_tuples,
    tfidf_search,
    tokenize_text,
    wikimirs_terms,
)

from gen import random_latex, random_slt


def doc(doc_id, text="", formulas=()):
    return DocRecord(doc_id, text, [make_formula_record(f"f{i}", fx) for i, fx in enumerate(formulas)])


class TestSltTuples:
    def test_a_plus_b_window_1(self):
        tuples = slt_tuples(parse_latex("a+b"), 1)
        assert {(t.parent, t.child, t.path, t.count) for t in tuples} == {
            ("a", "+", "n", 1),
            ("+", "b", "n", 1),
        }

    def test_single_symbol_empty(self):
        assert slt_tuples(parse_latex("x"), 1) == []

    def test_window_2_adds_long_pair(self):
        tuples = {(t.parent, t.child, t.path) for t in slt_tuples(parse_latex("a+b"), 2)}
        assert ("a", "b", "nn") in tuples
        assert len(tuples) == 3

    def test_counts_match_bounded_path_enumeration(self):
        # Oracle: brute-force enumeration of ancestor/descendant pairs.
        rng = random.Random(23)
        for _ in range(60):
            tree = random_slt(rng, max_nodes=12)
            for window in (1, 2, 3):
                expected = 0
                for node in tree.nodes():
                    frontier = [node]
                    for _ in range(window):
                        nxt = []
                        for cur in frontier:
                            for _, child in cur.ordered_children():
                                expected += 1
                                nxt.append(child)
                        frontier = nxt
                total = sum(t.count for t in slt_tuples(tree, window))
                assert total == expected


class TestOptTerms:
    def test_appendix_pairs(self):
        opt = slt_to_opt(parse_latex("a+b"))
        assert {(t.parent, t.child) for t in opt_tuples(opt, 1)} == {("+", "a"), ("+", "b")}

    def test_leafroot_simple(self):
        opt = slt_to_opt(parse_latex("a+b"))
        assert sorted(opt_leafroot_paths(opt)) == [("a", "+"), ("b", "+")]

    def test_leafroot_single_leaf(self):
        assert opt_leafroot_paths(slt_to_opt(parse_latex("x"))) == [("x",)]

    def test_leafroot_idf_lhs(self):
        opt = slt_to_opt(parse_latex("idf(t_i)"))
        assert sorted(opt_leafroot_paths(opt)) == [
            ("i", "sub", "apply"),
            ("idf", "apply"),
            ("t", "sub", "apply"),
        ]

    def test_leafroot_enumerated(self):
        a = opt_leafroot_paths(slt_to_opt(parse_latex("x+y")), enumerate_vars=True)
        b = opt_leafroot_paths(slt_to_opt(parse_latex("a+b")), enumerate_vars=True)
        assert sorted(a) == sorted(b)


class TestWikimirs:
    def test_book_term_sets(self):
        opt = slt_to_opt(parse_latex("(x+3)\\times\\frac{a}{b}"))
        terms = wikimirs_terms(opt)
        assert terms.concrete == {"(x+3)×a/b", "(x+3)", "a/b", "x+3"}
        assert terms.generalized == {"(*)×*", "(*)", "*/*", "*+*"}

    def test_single_leaf(self):
        terms = wikimirs_terms(slt_to_opt(parse_latex("x")))
        assert terms.concrete == {"x"}
        assert terms.generalized == set()

    def test_one_level(self):
        terms = wikimirs_terms(slt_to_opt(parse_latex("a+b")))
        assert terms.concrete == {"a+b"}
        assert terms.generalized == {"*+*"}

    def test_every_generalized_has_a_concrete_source(self):
        rng = random.Random(5)
        for _ in range(40):
            opt = slt_to_opt(parse_latex(random_latex(rng)))
            terms = wikimirs_terms(opt)
            # each generalized term came from some internal node that also
            # produced a concrete term with the same operator skeleton
            assert len(terms.generalized) <= len(terms.concrete) + 1


class TestTokenize:
    def test_lowercase_split(self):
        assert tokenize_text("The IDF, of BM25!") == ["the", "idf", "of", "bm25"]

    def test_no_stopword_removal(self):
        assert "the" in tokenize_text("the term")


class TestBuildIndex:
    def test_empty_stream(self):
        index = build_index([])
        assert index.n_docs == 0

    def test_document_frequency(self):
        docs = [doc(f"d{i}", text="shared term") for i in range(3)]
        index = build_index(docs)
        assert index.document_frequency("txt:shared") == 3

    def test_duplicate_doc_id(self):
        with pytest.raises(DuplicateDocId):
            build_index([doc("d1"), doc("d1")])

    def test_build_deterministic_under_permutation(self, tmp_path):
        docs = [
            doc("b", text="beta doc", formulas=["a+b", "x^2"]),
            doc("a", text="alpha doc", formulas=["\\frac{a}{b}"]),
            doc("c", text="gamma doc", formulas=["x+y=z"]),
        ]
        rng = random.Random(1)
        blobs = []
        for _ in range(3):
            shuffled = docs[:]
            rng.shuffle(shuffled)
            index = build_index(shuffled)
            out = tmp_path / f"idx{len(blobs)}"
            save_index(index, out)
            blobs.append(b"".join((out / name).read_bytes() for name in ("vocab.tsv", "postings.bin", "docs.tsv", "stats.tsv")))
        assert blobs[0] == blobs[1] == blobs[2]

    def test_save_load_roundtrip(self, tmp_path):
        index = build_index([doc("d1", text="some words", formulas=["a+b"]), doc("d2", text="more words here")])
        save_index(index, tmp_path / "idx")
        loaded = load_index(tmp_path / "idx")
        assert loaded.terms == index.terms
        assert loaded.postings == index.postings
        assert loaded.doc_ids == index.doc_ids
        assert loaded.doc_freq == index.doc_freq

    def test_golden_postings(self, tmp_path):
        # Frozen 5-document fixture; the serialized postings must not drift.
        docs = [
            doc("doc1", "inverse document frequency", ["idf(t_i)=\\log\\frac{N}{n_i}"]),
            doc("doc2", "pythagorean theorem", ["x^2+y^2=z^2"]),
            doc("doc3", "sum of two values", ["a+b"]),
            doc("doc4", "a product", ["(3+5)\\times 9"]),
            doc("doc5", "another sum", ["b+a"]),
        ]
        index = build_index(docs)
        save_index(index, tmp_path / "idx")
        blob = (tmp_path / "idx" / "postings.bin").read_bytes()
        assert blob[:6] == b"MFIDX1"
        import hashlib

        digest = hashlib.sha256(blob).hexdigest()
        assert digest == "bcda9295f8490f7515400553f789fb7825a878fb3f2d351c83dc0a3b3ebad1ff"


class TestIdf:
    def test_fixture_values(self):
        # N=100 documents; terms with document frequency 100, 20, and 2.
        docs = []
        for i in range(100):
            words = ["document"]
            if i < 20:
                words.append("frequency")
            if i < 2:
                words.append("inverse")
            docs.append(doc(f"d{i:03d}", text=" ".join(words)))
        index = build_index(docs)
        assert idf("txt:document", index) == pytest.approx(0.0, abs=1e-12)
        assert idf("txt:frequency", index) == pytest.approx(1.6094379124341003, abs=1e-12)
        assert idf("txt:inverse", index) == pytest.approx(3.912023005428146, abs=1e-12)

    def test_unknown_term(self):
        index = build_index([doc("d1", text="hello")])
        with pytest.raises(UnknownTerm):
            idf("txt:missing", index)

    def test_monotone_in_df(self):
        docs = [doc(f"d{i}", text="common " + ("rare" if i == 0 else "")) for i in range(10)]
        index = build_index(docs)
        assert idf("txt:rare", index) > idf("txt:common", index)
        assert idf("txt:common", index) == 0.0


class TestDice:
    def setup_method(self):
        self.index = build_index(
            [
                doc("d1", formulas=["a+b"]),
                doc("d2", formulas=["a+c"]),
                doc("d3", formulas=["x\\times y"]),
            ]
        )

    def query(self, latex):
        return slt_term_strings(parse_latex(latex), 1)

    def test_self_retrieval(self):
        hits = dice_search(self.query("a+b"), self.index, 10)
        assert hits[0].doc_id == "d1"
        assert hits[0].score == 1.0

    def test_disjoint_absent(self):
        hits = dice_search(self.query("p-q"), self.index, 10)
        assert hits == []

    def test_partial_overlap_value(self):
        # Query {(a,+,n),(+,b,n)} vs d2's {(a,+,n),(+,c,n)}: overlap 1 of 2+2.
        hits = dice_search(self.query("a+b"), self.index, 10)
        d2 = [h for h in hits if h.doc_id == "d2"][0]
        assert d2.score == pytest.approx(2 * 1 / (2 + 2))

    def test_brute_force_multiset_dice(self):
        rng = random.Random(17)
        for _ in range(30):
            formulas = [random_latex(rng) for _ in range(5)]
            index = build_index([doc(f"d{i}", formulas=[fx]) for i, fx in enumerate(formulas)])
            q_latex = rng.choice(formulas)
            query = slt_term_strings(parse_latex(q_latex), 1)
            if not query:
                continue
            hits = dice_search(query, index, 10)
            got = {(h.doc_id, round(h.score, 12)) for h in hits}
            expect = set()
            for i, fx in enumerate(formulas):
                cand = slt_term_strings(parse_latex(fx), 1)
                inter = sum((query & cand).values())
                if inter:
                    score = 2 * inter / (sum(query.values()) + sum(cand.values()))
                    expect.add((f"d{i}", round(score, 12)))
            assert got == expect

    def test_empty_query(self):
        with pytest.raises(EmptyQuery):
            dice_search(Counter(), self.index, 5)


class TestBm25Plus:
    def test_closed_form_single_term(self):
        # One matching doc among N, tf=1, length = average => idf·(1+delta).
        docs = [doc("d0", text="special word pair")] + [
            doc(f"d{i}", text="plain words here") for i in range(1, 8)
        ]
        index = build_index(docs)
        params = Bm25Params()
        hits = bm25plus_search(["special"], index, 5, params)
        expected = math.log(8 / 1) * (1 + params.delta)
        assert hits[0].doc_id == "d0"
        assert hits[0].score == pytest.approx(expected, abs=1e-12)

    def test_absent_term(self):
        index = build_index([doc("d1", text="words")])
        assert bm25plus_search(["missing"], index, 5) == []

    def test_tf_monotonicity(self):
        docs = [
            doc("d1", text="term filler filler filler"),
            doc("d2", text="term term filler filler"),
            doc("d3", text="filler filler filler filler"),
        ]
        index = build_index(docs)
        hits = bm25plus_search(["term"], index, 5)
        assert [h.doc_id for h in hits] == ["d2", "d1"]

    def test_empty_query(self):
        index = build_index([doc("d1", text="words")])
        with pytest.raises(EmptyQuery):
            bm25plus_search([], index, 5)


class TestBooleanFilter:
    def make_hits(self, ids):
        from mathfind.index.score import Hit

        return [Hit(d, f, s) for d, f, s in ids]

    def test_empty_text_hits(self):
        formula = self.make_hits([("d1", "f0", 1.0)])
        assert boolean_filter(formula, []) == []

    def test_full_overlap_unchanged(self):
        formula = self.make_hits([("d1", "f0", 1.0), ("d2", "f0", 0.5)])
        text = self.make_hits([("d2", None, 1.0), ("d1", None, 0.9)])
        assert boolean_filter(formula, text) == formula

    def test_mixed_subset_in_order(self):
        formula = self.make_hits([("d3", "f0", 0.9), ("d1", "f0", 0.8), ("d2", "f0", 0.7)])
        text = self.make_hits([("d1", None, 1.0), ("d3", None, 0.2)])
        kept = boolean_filter(formula, text)
        assert [h.doc_id for h in kept] == ["d3", "d1"]
        # oracle: plain set intersection preserving order
        docs = {h.doc_id for h in text}
        assert kept == [h for h in formula if h.doc_id in docs]


class TestTfidf:
    def test_wikimirs_generalized_half_weight(self):
        index = build_index(
            [
                doc("d1", formulas=["a+b"]),
                doc("d2", formulas=["x\\times(p+q)"]),
                doc("d3", formulas=["u\\times v"]),
            ],
            ExtractorConfig(),
        )

        def weight(term):
            return 0.5 if term.startswith("wm:g:") else 1.0

        query = Counter({"wm:g:*+*": 1})
        hits = tfidf_search(query, index, 5, term_weight=weight)
        assert len(hits) == 2  # both contain an additive subterm
        full = tfidf_search(query, index, 5)
        assert hits[0].score == pytest.approx(full[0].score / 2)
