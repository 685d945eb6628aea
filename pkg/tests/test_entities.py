"""Entity detection, tag enrichment round-trips, and hallucination audits."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leitsatz.entities import (
    DEFAULT_KINDS,
    EntitySpan,
    audit_hallucinations,
    detect_entities,
    enrich,
    import_spans,
    normalize_ws,
    special_tokens,
    strip_tags,
    validate_spans,
)
from leitsatz.errors import DataError

ALPHA = "abcdefghijklmnop ÄÖÜäöüß §.,()0123456789/\n-"


@st.composite
def text_with_spans(draw):
    """Text assembled from gap/entity segments; spans are correct by construction."""
    n_spans = draw(st.integers(0, 6))
    pieces = []
    spans = []
    pos = 0
    for _ in range(n_spans):
        gap = draw(st.text(alphabet=ALPHA, max_size=8))
        surface = draw(st.text(alphabet=ALPHA, min_size=1, max_size=12))
        kind = draw(st.sampled_from(DEFAULT_KINDS))
        pieces.append(gap)
        pos += len(gap)
        spans.append(EntitySpan(pos, pos + len(surface), kind, surface))
        pieces.append(surface)
        pos += len(surface)
    pieces.append(draw(st.text(alphabet=ALPHA, max_size=8)))
    return "".join(pieces), spans


class TestDetect:
    def test_simple_statute(self):
        spans = detect_entities("Nach § 125 BGB ist der Vertrag nichtig.")
        assert [(s.kind, s.surface) for s in spans] == [("GS", "§ 125 BGB")]

    def test_full_chain_is_one_span(self):
        spans = detect_entities("Die Klausel verstößt gegen § 307 Abs. 1 Satz 2 BGB und ist unwirksam.")
        assert [(s.kind, s.surface) for s in spans] == [("GS", "§ 307 Abs. 1 Satz 2 BGB")]

    def test_no_entities(self):
        assert detect_entities("Guten Morgen") == []

    def test_lone_capitalized_word_is_not_a_statute(self):
        assert detect_entities("Nach § 5 Der Kläger obsiegt.") == []

    def test_double_section_sign(self):
        spans = detect_entities("Die §§ 305, 307 BGB gelten.")
        assert spans and spans[0].surface.startswith("§§ 305")

    def test_decision_citation(self):
        text = "Das folgt aus BGH, Urteil vom 24. September 2013 - I ZR 89/12 und gilt fort."
        spans = detect_entities(text)
        assert [s.kind for s in spans] == ["RS"]
        assert "I ZR 89/12" in spans[0].surface

    def test_court_mention_without_citation_data_ignored(self):
        assert detect_entities("Der BGH, Urteil hin oder her, entschied nicht.") == []

    def test_offsets_match_surfaces(self):
        text = "Vergleiche § 125 BGB sowie § 826 BGB am Ende."
        for s in detect_entities(text):
            assert text[s.start : s.end] == s.surface

    def test_spans_sorted_and_disjoint(self):
        text = "Nach § 125 BGB und § 307 Abs. 1 Satz 2 BGB sowie § 826 BGB."
        spans = detect_entities(text)
        assert len(spans) == 3
        for a, b in zip(spans, spans[1:]):
            assert a.end <= b.start


class TestValidate:
    def test_out_of_range(self):
        with pytest.raises(DataError, match="out of range"):
            validate_spans("abcd", [EntitySpan(0, 5, "GS", "")])

    def test_overlap_names_both_spans(self):
        with pytest.raises(DataError, match=r"\(0, 3.*\(2, 6"):
            validate_spans("abcdefgh", [EntitySpan(0, 3, "GS", ""), EntitySpan(2, 6, "RS", "")])

    def test_malformed_kind(self):
        with pytest.raises(DataError, match="kind"):
            validate_spans("abcd", [EntitySpan(0, 2, "gs", "")])

    def test_surface_mismatch(self):
        with pytest.raises(DataError, match="does not match"):
            validate_spans("abcd", [EntitySpan(0, 2, "GS", "zz")])

    def test_fills_surfaces(self):
        got = validate_spans("abcd", [EntitySpan(1, 3, "GS", "")])
        assert got[0].surface == "bc"


class TestEnrichStrip:
    def test_hand_example_byte_exact(self):
        assert enrich("§ 125 BGB", [EntitySpan(0, 9, "GS", "")]) == "<GS> § 125 BGB </GS>"

    def test_no_spans_identity(self):
        assert enrich("unverändert", []) == "unverändert"

    def test_adjacent_spans_do_not_nest(self):
        out = enrich("abcd", [EntitySpan(0, 2, "GS", ""), EntitySpan(2, 4, "RS", "")])
        assert out == "<GS> ab </GS><RS> cd </RS>"

    def test_strip_hand_example(self):
        text, spans = strip_tags("<GS> § 125 BGB </GS>")
        assert text == "§ 125 BGB"
        assert spans == [EntitySpan(0, 9, "GS", "§ 125 BGB")]

    def test_strip_untagged_identity(self):
        assert strip_tags("kein Tag hier") == ("kein Tag hier", [])

    def test_mismatched_tags(self):
        with pytest.raises(DataError, match="mismatched"):
            strip_tags("<GS> x </RS>")

    def test_closing_without_opener(self):
        with pytest.raises(DataError, match="without opener"):
            strip_tags("x </GS>")

    def test_nested_rejected(self):
        with pytest.raises(DataError, match="nested"):
            strip_tags("<GS> a <RS> b </RS> </GS>")

    def test_unclosed_rejected(self):
        with pytest.raises(DataError, match="unclosed"):
            strip_tags("<GS> offen")

    def test_missing_padding_after_opener(self):
        with pytest.raises(DataError, match="padding"):
            strip_tags("<GS>x </GS>")

    def test_missing_padding_before_closer(self):
        with pytest.raises(DataError, match="padding"):
            strip_tags("<GS> x</GS>")

    def test_deleting_tags_recovers_original(self):
        text = "Nach § 125 BGB und § 826 BGB."
        out = enrich(text, detect_entities(text))
        rebuilt = out.replace("<GS> ", "").replace(" </GS>", "")
        assert rebuilt == text

    @settings(max_examples=200)
    @given(text_with_spans())
    def test_round_trip(self, case):
        text, spans = case
        tagged = enrich(text, spans)
        got_text, got_spans = strip_tags(tagged)
        assert got_text == text
        expect = validate_spans(text, spans)
        assert got_spans == expect


class TestImportSpans:
    def test_import_validates_against_text(self, tmp_path):
        path = tmp_path / "spans.jsonl"
        rec = {"id": "a", "spans": [{"start": 0, "end": 9, "kind": "GS"}]}
        path.write_text(json.dumps(rec) + "\n", encoding="utf-8")
        got = import_spans(path, {"a": "§ 125 BGB gilt."})
        assert got["a"] == [EntitySpan(0, 9, "GS", "§ 125 BGB")]

    def test_import_rejects_bad_offsets(self, tmp_path):
        path = tmp_path / "spans.jsonl"
        rec = {"id": "a", "spans": [{"start": 0, "end": 99, "kind": "GS"}]}
        path.write_text(json.dumps(rec) + "\n", encoding="utf-8")
        with pytest.raises(DataError):
            import_spans(path, {"a": "kurz"})

    def test_import_rejects_unknown_document(self, tmp_path):
        path = tmp_path / "spans.jsonl"
        path.write_text(json.dumps({"id": "ghost", "spans": []}) + "\n", encoding="utf-8")
        with pytest.raises(DataError, match="ghost"):
            import_spans(path, {"a": "text"})

    def test_empty_span_list_ok(self, tmp_path):
        path = tmp_path / "spans.jsonl"
        path.write_text(json.dumps({"id": "a", "spans": []}) + "\n", encoding="utf-8")
        assert import_spans(path, {"a": "text"}) == {"a": []}


class TestAudit:
    def test_supported_entity(self):
        audit = audit_hallucinations("Der Vertrag ist nach § 125 BGB nichtig.", "Es gilt § 125 BGB hier.")
        assert audit.support_rate == 1.0
        assert audit.unsupported == []

    def test_unsupported_entity(self):
        audit = audit_hallucinations("Es gilt § 999 BGB.", "Hier steht etwas ganz anderes.")
        assert audit.support_rate == 0.0
        assert audit.unsupported == ["§ 999 BGB"]

    def test_no_entities_vacuous(self):
        audit = audit_hallucinations("Nur Prosa.", "Quelle.")
        assert audit.support_rate == 1.0
        assert audit.generated_entities == []
        assert audit.unsupported == []

    def test_whitespace_normalization(self):
        audit = audit_hallucinations("Nach § 125 BGB.", "Im Text steht §\n125   BGB irgendwo.")
        assert audit.support_rate == 1.0

    def test_kind_filter(self):
        summary = "Nach § 125 BGB, vgl. BGH, Urteil vom 24. September 2013 - I ZR 89/12."
        audit = audit_hallucinations(summary, "quelle ohne beides", kinds=("RS",))
        assert all(s.kind == "RS" for s in audit.generated_entities)

    def test_monotone_in_source(self):
        summary = "Nach § 125 BGB und § 826 BGB."
        small = audit_hallucinations(summary, "nur § 125 BGB")
        grown = audit_hallucinations(summary, "nur § 125 BGB und auch § 826 BGB")
        assert grown.support_rate >= small.support_rate

    def test_mixed_support_rate(self):
        summary = "Nach § 125 BGB und § 826 BGB."
        audit = audit_hallucinations(summary, "nur § 125 BGB steht hier")
        assert audit.support_rate == 0.5
        assert audit.unsupported == ["§ 826 BGB"]


class TestSpecialTokens:
    def test_default_vocabulary(self):
        tokens = special_tokens()
        assert tokens[:2] == ["<GS>", "</GS>"]
        assert len(tokens) == 2 * len(DEFAULT_KINDS)

    def test_subset(self):
        assert special_tokens(("RS",)) == ["<RS>", "</RS>"]

    def test_matches_enrich_tag_shapes(self):
        out = enrich("ab", [EntitySpan(0, 2, "GS", "")])
        for token in special_tokens(("GS",)):
            assert token in out


def test_normalize_ws():
    assert normalize_ws("  a\n\tb   c ") == "a b c"
