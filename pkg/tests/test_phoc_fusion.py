"""Region encoding, spatial search, autocompletion, and rank fusion."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mathfind.formula import parse_latex
from mathfind.fusion import Ranking, borda, interleave, linear_combine, minmax_normalize, rrf
from mathfind.phoc import (
    DEFAULT_SCHEME,
    EntryOrder,
    Orientation,
    PhocStore,
    RegionScheme,
    RegionVariant,
    SymbolBox,
    autocomplete,
    cosine,
    entry_order,
    layout_symbols,
    load_phoc,
    phoc_encode,
    phoc_search,
    save_phoc,
)

from gen import random_latex


class TestLayout:
    def test_single_symbol_centered(self):
        boxes = layout_symbols(parse_latex("x"))
        assert len(boxes) == 1
        assert boxes[0].center == (0.5, 0.5)

    def test_next_advance(self):
        a, b = layout_symbols(parse_latex("ab"))
        assert a.center[0] < b.center[0]
        assert a.center[1] == b.center[1]
        assert (a.y1 - a.y0) == pytest.approx(b.y1 - b.y0)

    def test_fraction_stacks(self):
        boxes = {b.label: b for b in layout_symbols(parse_latex("\\frac{a}{b}"))}
        assert boxes["a"].y0 > boxes["b"].y1

    def test_script_shift_and_scale(self):
        boxes = {b.label: b for b in layout_symbols(parse_latex("x^2"))}
        assert boxes["2"].center[1] > boxes["x"].center[1]
        assert (boxes["2"].y1 - boxes["2"].y0) < (boxes["x"].y1 - boxes["x"].y0)

    def test_deterministic(self):
        src = "\\int_0^\\infty \\frac{\\sin(x)}{x} dx"
        assert layout_symbols(parse_latex(src)) == layout_symbols(parse_latex(src))


class TestEncode:
    def test_default_region_count_is_29(self):
        assert DEFAULT_SCHEME.region_count() == 29
        assert 29 == 1 + 2 * (2 + 3 + 4 + 5)

    def test_single_symbol_one_bit_per_partition(self):
        vector = phoc_encode(layout_symbols(parse_latex("x")))
        bits = vector.as_dict()["x"]
        for group in DEFAULT_SCHEME.partition_groups():
            assert sum((bits >> r) & 1 for r in group) == 1

    def test_level2_strips(self):
        a, b = layout_symbols(parse_latex("ab"))
        vec = phoc_encode([a, b])
        groups = DEFAULT_SCHEME.partition_groups()
        # group 1 is the level-2 horizontal split (regions 1 and 2)
        level2 = groups[1]
        assert (vec.as_dict()["a"] >> level2[0]) & 1 == 1
        assert (vec.as_dict()["b"] >> level2[1]) & 1 == 1

    def test_empty_formula_zero_vector(self):
        vector = phoc_encode([])
        assert vector.bits == ()
        assert cosine(vector, vector) == 0.0

    def test_scale_translation_invariance(self):
        base = layout_symbols(parse_latex("a+b"))
        # binary-exact affine transform so region membership is bit-stable
        shifted = [
            SymbolBox(b.label, b.x0 * 0.5 + 0.25, b.y0 * 0.5 + 0.125, b.x1 * 0.5 + 0.25, b.y1 * 0.5 + 0.125)
            for b in base
        ]
        # normalization happens inside layout; encoding raw shifted boxes is
        # equivalent because only centers relative to the partitions matter
        # after renormalizing:
        lo_x = min(b.x0 for b in shifted)
        hi_x = max(b.x1 for b in shifted)
        lo_y = min(b.y0 for b in shifted)
        hi_y = max(b.y1 for b in shifted)
        renorm = [
            SymbolBox(
                b.label,
                (b.x0 - lo_x) / (hi_x - lo_x),
                (b.y0 - lo_y) / (hi_y - lo_y),
                (b.x1 - lo_x) / (hi_x - lo_x),
                (b.y1 - lo_y) / (hi_y - lo_y),
            )
            for b in shifted
        ]
        assert phoc_encode(base) == phoc_encode(renorm)

    def test_concentric_variant(self):
        scheme = RegionScheme(levels=(1, 3, 5), variant=RegionVariant.CONCENTRIC_RECTANGLES)
        assert scheme.region_count() == 9
        center = SymbolBox("c", 0.45, 0.45, 0.55, 0.55)
        edge = SymbolBox("e", 0.9, 0.9, 1.0, 1.0)
        vec = phoc_encode([center, edge], scheme)
        groups = scheme.partition_groups()
        ring3 = groups[1]
        assert (vec.as_dict()["c"] >> ring3[0]) & 1 == 1  # innermost ring
        assert (vec.as_dict()["e"] >> ring3[-1]) & 1 == 1  # outermost ring

    def test_boundary_ties_go_low(self):
        box = SymbolBox("m", 0.4, 0.4, 0.6, 0.6)  # center exactly 0.5
        vec = phoc_encode([box])
        level2 = DEFAULT_SCHEME.partition_groups()[1]
        assert (vec.as_dict()["m"] >> level2[0]) & 1 == 1


def build_store(formulas, scheme=DEFAULT_SCHEME):
    store = PhocStore(scheme)
    for i, latex in enumerate(formulas):
        store.add(f"d{i}", "f0", parse_latex(latex))
    store.finalize()
    return store


class TestPhocSearch:
    def test_self_match(self):
        store = build_store(["a+b", "x^2", "\\frac{p}{q}"])
        query = phoc_encode(layout_symbols(parse_latex("x^2")))
        hits = phoc_search(query, store, 5)
        assert hits[0].doc_id == "d1"
        assert hits[0].score == pytest.approx(1.0)

    def test_disjoint_zero(self):
        store = build_store(["a+b"])
        query = phoc_encode(layout_symbols(parse_latex("xy")))
        assert phoc_search(query, store, 5) == []

    def test_ordering_matches_naive_cosine(self):
        formulas = ["a+b", "a+c", "b+c", "a\\times b", "x^2+y"]
        store = build_store(formulas)
        query = phoc_encode(layout_symbols(parse_latex("a+b")))
        hits = phoc_search(query, store, 10)
        naive = []
        for i, latex in enumerate(formulas):
            cand = phoc_encode(layout_symbols(parse_latex(latex)))
            a_bits, b_bits = query.as_dict(), cand.as_dict()
            dot = sum(bin(v & b_bits.get(k, 0)).count("1") for k, v in a_bits.items())
            na = sum(bin(v).count("1") for v in a_bits.values()) ** 0.5
            nb = sum(bin(v).count("1") for v in b_bits.values()) ** 0.5
            score = dot / (na * nb) if na and nb else 0.0
            if score > 0:
                naive.append((f"d{i}", score))
        naive.sort(key=lambda t: (-t[1], t[0]))
        assert [(h.doc_id, pytest.approx(h.score)) for h in hits] == [
            (d, pytest.approx(s)) for d, s in naive
        ]

    def test_persistence_roundtrip(self, tmp_path):
        store = build_store(["a+b", "x^2"])
        save_phoc(store, tmp_path / "phoc.bin")
        loaded = load_phoc(tmp_path / "phoc.bin")
        assert loaded.entries == store.entries
        assert (tmp_path / "phoc.bin").read_bytes()[:5] == b"MFPH1"


class TestAutocomplete:
    def test_subset_filter(self):
        store = build_store(["a+b", "x+y"])
        symbols = [b for b in layout_symbols(parse_latex("a+b")) if b.label in ("a", "+")]
        hits = autocomplete(symbols, store, 5)
        assert [h.doc_id for h in hits] == ["d0"]

    def test_full_query_rank_one(self):
        store = build_store(["a+b", "a+b+c"])
        hits = autocomplete(layout_symbols(parse_latex("a+b")), store, 5)
        assert hits[0].doc_id == "d0"
        assert hits[0].score == pytest.approx(1.0)

    def test_size_constraint(self):
        store = build_store(["a"])
        symbols = layout_symbols(parse_latex("aa"))
        assert autocomplete(symbols, store, 5) == []

    def test_outside_in_keeps_target(self):
        target = "\\int_0^\\infty \\frac{\\sin(x)}{x} dx"
        store = build_store([target, "a+b", "x^2"])
        symbols = layout_symbols(parse_latex(target))
        ordered = entry_order(symbols, EntryOrder.OUTSIDE_IN)
        hits = autocomplete(ordered[:3], store, 10)
        assert "d0" in {h.doc_id for h in hits}

    def test_monotone_narrowing(self):
        rng = random.Random(3)
        formulas = [random_latex(rng) for _ in range(20)]
        store = build_store(formulas)
        target = layout_symbols(parse_latex(formulas[0]))
        ordered = entry_order(target, EntryOrder.LEFT_RIGHT)
        prev = None
        for n in range(1, len(ordered) + 1):
            hits = {(h.doc_id, h.formula_id) for h in autocomplete(ordered[:n], store, 1000)}
            if prev is not None:
                assert hits <= prev
            prev = hits


class TestEntryOrder:
    def boxes(self, labels):
        return [SymbolBox(l, i, 0.0, i + 1, 1.0) for i, l in enumerate(labels)]

    def test_left_right(self):
        assert [b.label for b in entry_order(self.boxes("abc"), EntryOrder.LEFT_RIGHT)] == ["a", "b", "c"]

    def test_right_left(self):
        assert [b.label for b in entry_order(self.boxes("abc"), EntryOrder.RIGHT_LEFT)] == ["c", "b", "a"]

    def test_outside_in(self):
        assert [b.label for b in entry_order(self.boxes("abc"), EntryOrder.OUTSIDE_IN)] == ["a", "c", "b"]

    def test_middle_out_left_first(self):
        assert [b.label for b in entry_order(self.boxes("abc"), EntryOrder.MIDDLE_OUT)] == ["b", "a", "c"]


class TestFusion:
    def test_minmax(self):
        r = Ranking.from_pairs([("a", 2.0), ("b", 4.0), ("c", 6.0)])
        out = minmax_normalize(r)
        assert dict(out.items) == {"c": 1.0, "b": 0.5, "a": 0.0}

    def test_minmax_single(self):
        out = minmax_normalize(Ranking.from_pairs([("a", 3.7)]))
        assert out.items == (("a", 1.0),)

    def test_minmax_constant(self):
        out = minmax_normalize(Ranking.from_pairs([("a", 2.0), ("b", 2.0)]))
        assert all(score == 1.0 for _, score in out.items)

    def test_linear_identity(self):
        r = Ranking.from_pairs([("a", 1.0), ("b", 0.5)])
        assert linear_combine([(1.0, r)]).ids() == r.ids()

    def test_linear_missing_contributes_zero(self):
        a = Ranking.from_pairs([("x", 1.0)])
        b = Ranking.from_pairs([("y", 1.0)])
        fused = linear_combine([(0.5, a), (0.5, b)])
        assert dict(fused.items) == {"x": 0.5, "y": 0.5}

    def test_rrf_rank_one(self):
        r = Ranking.from_pairs([("d", 1.0)])
        assert dict(rrf([r]).items)["d"] == pytest.approx(1 / 61, abs=1e-12)

    def test_rrf_two_rankings(self):
        a = Ranking.from_pairs([("d", 1.0)])
        b = Ranking.from_pairs([("e", 1.0), ("d", 0.5)])
        assert dict(rrf([a, b]).items)["d"] == pytest.approx(1 / 61 + 1 / 62, abs=1e-12)

    def test_rrf_absent_excluded(self):
        fused = rrf([Ranking.from_pairs([("a", 1.0)])])
        assert "z" not in dict(fused.items)

    def test_rrf_bound(self):
        rankings = [Ranking.from_pairs([(f"i{j}", 1.0 / (j + 1)) for j in range(5)]) for _ in range(3)]
        fused = rrf(rankings)
        for _, score in fused.items:
            assert 0 < score <= len(rankings) / 61

    def test_borda_points(self):
        r = Ranking.from_pairs([("a", 3.0), ("b", 2.0), ("c", 1.0)])
        scores = dict(borda([r]).items)
        assert scores == {"a": 2.0, "b": 1.0, "c": 0.0}

    def test_borda_opposing_tie(self):
        a = Ranking.from_pairs([("x", 1.0), ("y", 0.5)])
        b = Ranking.from_pairs([("y", 1.0), ("x", 0.5)])
        fused = borda([a, b])
        assert dict(fused.items) == {"x": 1.0, "y": 1.0}
        assert fused.ids() == ["x", "y"]  # tie broken by item id

    def test_interleave(self):
        a = Ranking.from_pairs([("a", 1.0), ("b", 0.5)])
        b = Ranking.from_pairs([("c", 1.0), ("d", 0.5)])
        assert interleave([a, b]).ids() == ["a", "c", "b", "d"]

    def test_interleave_dedup(self):
        a = Ranking.from_pairs([("a", 1.0), ("b", 0.5)])
        b = Ranking.from_pairs([("a", 1.0), ("c", 0.5)])
        assert interleave([a, b]).ids() == ["a", "c", "b"]

    def test_interleave_single(self):
        a = Ranking.from_pairs([("a", 1.0), ("b", 0.5)])
        assert interleave([a]).ids() == ["a", "b"]

    @given(st.lists(st.lists(st.sampled_from("abcdefgh"), unique=True, min_size=1), min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_union_property(self, id_lists):
        rankings = [
            Ranking.from_pairs([(i, 1.0 / (n + 1)) for n, i in enumerate(ids)])
            for ids in id_lists
        ]
        union = set().union(*(set(r.ids()) for r in rankings))
        for fused in (rrf(rankings), borda(rankings), interleave(rankings)):
            assert set(fused.ids()) == union

    def test_engine_tag_irrelevant(self):
        a = Ranking.from_pairs([("x", 1.0), ("y", 0.5)], engine="one")
        b = Ranking.from_pairs([("y", 1.0)], engine="two")
        assert dict(rrf([a, b]).items) == dict(rrf([b, a]).items)
        assert dict(borda([a, b]).items) == dict(borda([b, a]).items)

    def test_linear_first_weight_reproduces_first(self):
        a = Ranking.from_pairs([("x", 0.9), ("y", 0.5), ("z", 0.1)])
        b = Ranking.from_pairs([("z", 1.0)])
        fused = linear_combine([(1.0, a), (0.0, b)])
        assert fused.ids() == a.ids()
