from __future__ import annotations

import json
import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bibprofile.corpus import (
    CorpusError,
    DocType,
    corpus_to_dict,
    dump_corpus,
    load_alias_table,
    load_corpus,
    match_publication_list,
    normalize_doc_type,
    parse_corpus,
    validate_corpus,
)
from helpers import author, corpus, pub

FIXTURES = Path(__file__).parent / "fixtures"


def _doc(**overrides):
    doc = json.loads((FIXTURES / "corpus_12.json").read_text())
    doc.update(overrides)
    return doc


class TestLoadCorpus:
    def test_fixture_counts_match_file_scan(self):
        text = (FIXTURES / "corpus_12.json").read_text()
        c = load_corpus(FIXTURES / "corpus_12.json")
        assert len(c.focal_pubs) == 12
        assert len(c.edges) == 30
        # independent scan of the raw file
        assert len(re.findall(r'"citing_id"', text)) == 30
        assert len(re.findall(r'"id": "P\d+"', text)) == 12

    def test_doc_types_are_normalized(self):
        c = load_corpus(FIXTURES / "corpus_12.json")
        assert c.pub("P1").doc_type is DocType.PROCEEDINGS_PAPER
        assert c.pub("P3").doc_type is DocType.CONFERENCE

    def test_empty_focal_pubs(self):
        with pytest.raises(CorpusError, match="corpus has no focal publications"):
            parse_corpus(_doc(focal_pubs=[], citing_pubs=[], edges=[]))

    def test_dangling_cited_id(self):
        doc = _doc()
        doc["edges"].append({"citing_id": "C1", "cited_id": "P99"})
        with pytest.raises(CorpusError, match="P99") as info:
            parse_corpus(doc)
        assert info.value.record_ids == ("P99",)

    def test_duplicate_edge_rejected(self):
        doc = _doc()
        doc["edges"].append(dict(doc["edges"][0]))
        with pytest.raises(CorpusError, match="duplicate edge"):
            parse_corpus(doc)

    def test_unknown_key_rejected(self):
        doc = _doc()
        doc["focal_pubs"][0]["impact"] = 3
        with pytest.raises(CorpusError, match=r"focal_pubs\[0\].*unknown key\(s\) impact"):
            parse_corpus(doc)

    def test_bad_country(self):
        doc = _doc()
        doc["focal_pubs"][0]["affiliations"][0]["country"] = "XX"
        with pytest.raises(CorpusError, match="country"):
            parse_corpus(doc)

    def test_corresponding_index_bound(self):
        doc = _doc()
        doc["focal_pubs"][2]["corresponding_author_index"] = 2
        with pytest.raises(CorpusError, match="corresponding_author_index") as info:
            parse_corpus(doc)
        assert info.value.record_ids == ("P3",)

    def test_json_error_has_line_locator(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "focal_pubs": [\n  oops\n]}')
        with pytest.raises(CorpusError, match=r"broken.json:3:"):
            load_corpus(path)

    def test_sector_defaults_to_academic(self):
        c = load_corpus(FIXTURES / "corpus_12.json")
        assert c.pub("P1").affiliations[0].sector.value == "Academic"

    def test_round_trip(self, tmp_path):
        c1 = load_corpus(FIXTURES / "corpus_12.json")
        dump_corpus(c1, tmp_path / "out.json")
        c2 = load_corpus(tmp_path / "out.json")
        assert c1 == c2
        assert corpus_to_dict(c1) == corpus_to_dict(c2)


class TestNormalizeDocType:
    @pytest.mark.parametrize(
        "raw, expected",
        [
            ("article; proceedings paper", DocType.PROCEEDINGS_PAPER),
            ("Meeting Abstract", DocType.CONFERENCE),
            ("", DocType.OTHER),
            ("Article", DocType.JOURNAL_ARTICLE),
            ("Book; Book Chapter", DocType.MONOGRAPH),
            ("Review; Article", DocType.REVIEW),
            ("Patent; Article", DocType.PATENT),
        ],
    )
    def test_examples(self, raw, expected):
        assert normalize_doc_type(raw) is expected

    def test_unmapped_warns(self):
        warnings: list[str] = []
        assert normalize_doc_type("Poem", warnings=warnings) is DocType.OTHER
        assert warnings and "Poem" in warnings[0]

    @pytest.mark.parametrize("member", list(DocType))
    def test_idempotent_on_canonical_names(self, member):
        assert normalize_doc_type(member.value) is member
        assert normalize_doc_type(normalize_doc_type(member.value).value) is member

    def test_alias_table(self, tmp_path):
        path = tmp_path / "aliases.csv"
        path.write_text("raw,canonical\nZeitschriftenartikel,JournalArticle\nPoem,Other\n")
        aliases = load_alias_table(path)
        assert normalize_doc_type("zeitschriftenartikel", aliases) is DocType.JOURNAL_ARTICLE
        assert normalize_doc_type("Article", aliases) is DocType.JOURNAL_ARTICLE

    def test_alias_table_bad_canonical(self, tmp_path):
        path = tmp_path / "aliases.csv"
        path.write_text("raw,canonical\nfoo,Poetry\n")
        with pytest.raises(CorpusError, match=":2:"):
            load_alias_table(path)


def _records(n, prefix="M", doi=True):
    return [
        pub(f"{prefix}{i:02d}", source_ids={"doi": f"10.1/x{i}"} if doi else {}, title=f"Paper {i}")
        for i in range(n)
    ]


class TestCoverage:
    def test_identity(self):
        master = _records(10)
        res = match_publication_list(master, master, "WoS")
        assert (res.matched, res.percent) == (10, 1.0)

    def test_seven_shared_dois(self):
        master = _records(10)
        export = [
            pub(f"E{i}", source_ids={"doi": f"10.1/x{i}" if i < 7 else f"10.9/other{i}"}, title=f"Other {i}")
            for i in range(10)
        ]
        res = match_publication_list(master, export, "Scopus")
        oracle = {m.doi for m in master} & {e.doi for e in export}
        assert res.matched == len(oracle) == 7
        assert res.percent == pytest.approx(0.7)
        assert res.unmatched_ids == ("M07", "M08", "M09")

    def test_empty_master(self):
        res = match_publication_list([], _records(3), "WoS")
        assert (res.matched, res.percent, res.total_master) == (0, 0.0, 0)

    def test_title_fallback_with_year_tolerance(self):
        master = [pub("M1", year=2010, title="Über die Quantenpunkte!")]
        export = [pub("E1", year=2011, title="uber die   quantenpunkte")]
        assert match_publication_list(master, export, "GS").matched == 1
        export = [pub("E1", year=2012, title="uber die quantenpunkte")]
        assert match_publication_list(master, export, "GS").matched == 0

    def test_ambiguous_takes_smallest_export_id(self):
        master = [pub("M1", title="Same title")]
        export = [pub("E9", title="Same title"), pub("E2", title="Same title")]
        res = match_publication_list(master, export, "GS")
        assert res.pairs == (("M1", "E2"),)
        assert res.warnings

    def test_doi_case_and_prefix_insensitive(self):
        master = [pub("M1", source_ids={"DOI": "https://doi.org/10.1/ABC"})]
        export = [pub("E1", source_ids={"doi": "10.1/abc"}, title="different")]
        assert match_publication_list(master, export, "WoS").matched == 1

    @settings(max_examples=60, deadline=None)
    @given(
        st.sets(st.integers(0, 40), max_size=15),
        st.sets(st.integers(0, 40), max_size=15),
    )
    def test_symmetric_count_with_unique_dois(self, a, b):
        A = [pub(f"A{i}", source_ids={"doi": f"10.1/{i}"}, title=f"a{i}") for i in sorted(a)]
        B = [pub(f"B{i}", source_ids={"doi": f"10.1/{i}"}, title=f"b{i}") for i in sorted(b)]
        ab = match_publication_list(A, B, "x").matched
        assert ab == match_publication_list(B, A, "x").matched == len(a & b)

    @settings(max_examples=60, deadline=None)
    @given(st.sets(st.integers(0, 30), max_size=12), st.sets(st.integers(0, 30), max_size=12), st.integers(0, 30))
    def test_adding_export_record_is_monotone(self, a, b, extra):
        A = [pub(f"A{i}", source_ids={"doi": f"10.1/{i}"}) for i in sorted(a)]
        B = [pub(f"B{i}", source_ids={"doi": f"10.1/{i}"}) for i in sorted(b)]
        before = match_publication_list(A, B, "x").matched
        B2 = B + [pub(f"Bx{extra}", source_ids={"doi": f"10.1/{extra}"})]
        assert match_publication_list(A, B2, "x").matched >= before


class TestValidate:
    def test_clean_fixture(self):
        c = load_corpus(FIXTURES / "corpus_12.json")
        assert validate_corpus(c, current_year=2024) == []

    def test_cited_count_mismatch(self):
        focal = [pub("X", cites=5), pub("Y", cites=0)]
        citing = [pub(f"C{i}", authors=("Other, A",)) for i in range(4)]
        c = corpus(focal, citing, [(f"C{i}", "X") for i in range(4)])
        issues = validate_corpus(c, "WoS", current_year=2024)
        # oracle: direct edge count
        assert sum(1 for e in c.edges if e.cited_id == "X") == 4
        assert [i.message for i in issues] == ["cited-count mismatch id=X (5 vs 4)"]

    def test_year_out_of_range(self):
        c = corpus([pub("Old", year=1850)])
        issues = validate_corpus(c, current_year=2024)
        assert [i.code for i in issues] == ["year-range"]
        assert "year out of range" in issues[0].message

    def test_focal_author_missing(self):
        c = corpus([pub("A", authors=("Someone, E",))])
        assert [i.code for i in validate_corpus(c, current_year=2024)] == ["focal-author"]


class TestAuthorIdentity:
    def test_orcid_wins_over_names(self):
        a = author("Doe, J", orcid="1")
        b = author("Smith, Q", orcid="1")
        c = author("Doe, Jane", orcid="2")
        assert a.same_person(b)
        assert not a.same_person(c)

    def test_name_key_without_orcid(self):
        assert author("Jane Doe").same_person(author("Doe, J."))
        assert author("Doe, Jane").normalized_key == "doe, j"
        assert author("Müller, Hans-Peter").normalized_key == "muller, hp"
