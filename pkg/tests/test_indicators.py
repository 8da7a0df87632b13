from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bibprofile.baselines import (
    BaselineRow,
    BaselineTable,
    JournalMetricsTable,
    Metric,
    MetricRow,
    best_quartile,
)
from bibprofile.config import Config, Window
from bibprofile.corpus import DocType
from bibprofile.indicators import (
    QuartileResolver,
    Scope,
    activity_profile,
    cnci,
    coauthor_profile,
    funding_profile,
    g_index,
    h_index,
    i_index,
    impact_profile,
    m_quotient,
    normalized_impact,
    ols_slope,
    quartile_distribution,
    self_citation_rate,
    visibility_profile,
)
from helpers import FOCAL, author, corpus, pub

ART = DocType.JOURNAL_ARTICLE
citations = st.lists(st.integers(0, 200), max_size=50)


def brute_h(xs):
    return max(h for h in range(len(xs) + 1) if sum(1 for x in xs if x >= h) >= h)


def brute_g(xs):
    s = sorted(xs, reverse=True)
    return max(g for g in range(len(s) + 1) if sum(s[:g]) >= g * g)


def closed_form_slope(xs, ys):
    n = len(xs)
    num = n * sum(x * y for x, y in zip(xs, ys)) - sum(xs) * sum(ys)
    den = n * sum(x * x for x in xs) - sum(xs) ** 2
    return Fraction(num, den)


class TestIndexFamily:
    @pytest.mark.parametrize("xs, h", [([], 0), ([10, 8, 5, 4, 3], 4), ([1, 1, 1, 1], 1)])
    def test_h_examples(self, xs, h):
        assert h_index(xs) == brute_h(xs) == h

    @pytest.mark.parametrize("xs, g", [([], 0), ([10, 8, 5, 4, 3], 5), ([100], 1)])
    def test_g_examples(self, xs, g):
        assert g_index(xs) == brute_g(xs) == g

    def test_i_examples(self):
        assert i_index([9, 10, 11], 10) == 2
        assert i_index([], 10) == 0
        assert i_index([0, 3, 0, 1], 1) == 2

    def test_m_quotient(self):
        assert m_quotient(10, 2006, 2015) == 1.0
        assert m_quotient(4, 2011, 2015) == pytest.approx(0.8)
        assert m_quotient(0, 2011, 2015) == 0.0
        with pytest.raises(ValueError):
            m_quotient(1, 2016, 2015)

    @settings(max_examples=300)
    @given(citations)
    def test_h_matches_brute_force(self, xs):
        assert h_index(xs) == brute_h(xs)

    @settings(max_examples=300)
    @given(citations, st.integers(0, 200))
    def test_g_properties(self, xs, extra):
        assert g_index(xs) == brute_g(xs)
        assert g_index(xs) >= h_index(xs)
        assert g_index(list(reversed(xs))) == g_index(xs)
        assert g_index(xs + [extra]) >= g_index(xs)
        assert h_index(xs + [extra]) >= h_index(xs)

    @given(citations, st.integers(1, 199))
    def test_i_monotone(self, xs, n):
        assert i_index(xs, n + 1) <= i_index(xs, n)
        assert i_index(xs, 1) == sum(1 for x in xs if x > 0)


class TestActivity:
    def test_constant_series(self):
        pubs = [pub(f"P{y}{k}", year=y) for y in range(2005, 2015) for k in range(3)]
        prof = activity_profile(corpus(pubs), Window(2005, 2014), 2015)
        assert prof.window_total == 30
        assert prof.trend_slope == 0.0

    def test_increasing_series(self):
        pubs = [pub(f"P{y}{k}", year=y) for y in range(2010, 2015) for k in range(y - 2009)]
        prof = activity_profile(corpus(pubs), Window(2010, 2014), 2015)
        ys = [prof.per_year_counts[y]["total"] for y in range(2010, 2015)]
        assert ys == [1, 2, 3, 4, 5]
        assert prof.trend_slope == pytest.approx(float(closed_form_slope(range(2010, 2015), ys)))
        assert prof.trend_slope == pytest.approx(1.0)

    def test_empty_window(self):
        prof = activity_profile(corpus([pub("P", year=1990)]), Window(2005, 2014), 2015)
        assert (prof.window_total, prof.trend_slope, prof.earlier_count) == (0, 0.0, 1)

    def test_later_years_counted_separately(self):
        prof = activity_profile(corpus([pub("P", year=2015), pub("Q", year=2010)]), Window(2005, 2014))
        assert (prof.window_total, prof.current_incomplete_year_count) == (1, 1)

    def test_window_may_not_include_reference_year(self):
        with pytest.raises(ValueError):
            activity_profile(corpus([pub("P")]), Window(2010, 2015), 2015)

    @given(st.lists(st.integers(-50, 50), min_size=2, max_size=12))
    def test_ols_matches_closed_form(self, ys):
        xs = list(range(len(ys)))
        assert ols_slope(xs, ys) == pytest.approx(float(closed_form_slope(xs, ys)), abs=1e-9)


class TestCoauthorship:
    def test_all_single_authored(self):
        c = corpus([pub(f"P{i}") for i in range(4)])
        s = coauthor_profile(c, [None]).headline
        assert s.single_authored.percent == 1.0
        assert s.dependence_share == 0
        assert s.first.percent == s.last.percent == s.corresponding.percent == 1.0

    def test_dependence_flag(self):
        pubs = [pub(f"P{i}", authors=(FOCAL, "Smith, Q") if i < 8 else (FOCAL, f"Other{i}, Z")) for i in range(10)]
        s = coauthor_profile(corpus(pubs), [None]).headline
        assert s.dependence_share == pytest.approx(0.8)
        assert s.dependence_flag
        assert s.dependence_label == "Smith, Q"

    def test_dependence_at_threshold_not_flagged(self):
        pubs = [pub(f"P{i}", authors=(FOCAL, "Smith, Q") if i < 3 else (FOCAL,)) for i in range(4)]
        s = coauthor_profile(corpus(pubs), [None]).headline
        assert s.dependence_share == 0.75 and not s.dependence_flag

    def test_alphabetical_share(self):
        a, b, c = "Alpha, A", "Beta, B", "Gamma, C"
        pubs = [pub("P1", authors=(a, b, c)), pub("P2", authors=(a, c, b))]
        s = coauthor_profile(corpus(pubs, focal_author=a), [None]).headline
        keys = [[x.normalized_key for x in p.authors] for p in pubs]
        assert s.alphabetical_share == sum(k == sorted(k) for k in keys) / 2 == 0.5
        assert not s.alphabetical_suppressed

    def test_roles(self):
        pubs = [
            pub("P1", authors=(FOCAL, "B, B"), corresponding_author_index=1),
            pub("P2", authors=("B, B", FOCAL)),
            pub("P3", authors=("B, B", FOCAL, "C, C"), corresponding_author_index=1),
        ]
        s = coauthor_profile(corpus(pubs), [None]).headline
        assert (s.first.count, s.last.count, s.corresponding.count) == (1, 1, 1)
        assert (s.coauthors_total, s.distinct_coauthors, s.coauthors_max) == (4, 2, 2)

    def test_orcid_identifies_focal_author(self):
        p = pub("P1", authors=(author("Smith, Q", orcid="X"), author("J. Doe", orcid="Y")))
        s = coauthor_profile(corpus([p], focal_author=author("Doe, Jane", orcid="X")), [None]).headline
        assert s.first.count == 1

    def test_periods(self):
        pubs = [pub(f"P{y}", year=y) for y in range(2005, 2015)]
        w = Window(2005, 2014)
        prof = coauthor_profile(corpus(pubs), [w, *w.halves()])
        assert [p.publications for p in prof.periods] == [10, 5, 5]

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(1, 5), min_size=1, max_size=15))
    def test_role_shares_bounded(self, sizes):
        pubs = [pub(f"P{i}", authors=(FOCAL, *[f"X{j}, Y" for j in range(n - 1)])) for i, n in enumerate(sizes)]
        s = coauthor_profile(corpus(pubs), [None]).headline
        for share in (s.first, s.last, s.corresponding, s.single_authored):
            assert 0 <= share.percent <= 1
        assert s.first.count >= s.single_authored.count


class TestFunding:
    def test_none(self):
        f = funding_profile(corpus([pub("P")]))
        assert (f.funded.count, f.funded.percent) == (0, 0.0)

    def test_share_and_ties(self):
        pubs = [pub(f"P{i}", funders=("Zeta", "Alpha") if i < 3 else ("FWF",) if i < 6 else ()) for i in range(10)]
        f = funding_profile(corpus(pubs))
        assert f.funded.percent == pytest.approx(0.6)
        assert f.funder_ranking == (("Alpha", 3), ("FWF", 3), ("Zeta", 3))


def _ten_pub_table():
    # venue Vq is in category C with known rank -> quartile; 8 journals
    values = {"V1": 8.0, "V2": 7.0, "V3": 6.0, "V4": 5.0, "V5": 4.0, "V6": 3.0, "V7": 2.0, "V8": 1.0}
    return JournalMetricsTable(MetricRow(j, 2014, Metric.IF, v, ("C",)) for j, v in values.items())


class TestVisibility:
    def test_all_unranked(self):
        pubs = [pub(f"P{i}", venue_id="X") for i in range(3)]
        dist = quartile_distribution(pubs, QuartileResolver(_ten_pub_table(), Metric.IF))
        assert dist["Unranked"] == 3 and sum(dist.values()) == 3

    def test_known_distribution(self):
        table = _ten_pub_table()
        venues = ["V1", "V2", "V1", "V2", "V3", "V4", "V3", "V5", "V6", "V7"]
        pubs = [pub(f"P{i}", venue_id=v) for i, v in enumerate(venues)]
        oracle: dict[str, int] = {}
        for v in venues:
            q = best_quartile(v, Metric.IF, 2014, table).quartile.value
            oracle[q] = oracle.get(q, 0) + 1
        assert oracle == {"Q1": 4, "Q2": 3, "Q3": 2, "Q4": 1}
        dist = quartile_distribution(pubs, QuartileResolver(table, Metric.IF))
        assert {k: v for k, v in dist.items() if v} == oracle

    def test_profile_halves_partition(self):
        table = _ten_pub_table()
        pubs = [pub(f"P{i}", year=2005 + i, venue_id=f"V{1 + i % 9}", language="en" if i % 2 else "de") for i in range(10)]
        cfg = Config(reference_year=2015)
        prof = visibility_profile(corpus(pubs), table, cfg)
        full = prof.quartile_distribution["2005-2014"]
        h1, h2 = prof.quartile_distribution["2005-2009"], prof.quartile_distribution["2010-2014"]
        assert {k: h1[k] + h2[k] for k in full} == full
        assert prof.english.count == 5
        assert prof.journal_table[0].items >= prof.journal_table[-1].items

    def test_top_lists(self):
        from bibprofile.baselines import TopJournalList

        pubs = [pub("P1", venue_id="V1"), pub("P2", venue_id="V2")]
        prof = visibility_profile(corpus(pubs), _ten_pub_table(), Config(reference_year=2013), [TopJournalList("a", frozenset({"V1"}))])
        assert prof.top_list_counts == {"a": 1}

    def test_publication_year_edition(self):
        rows = [MetricRow("V", 2010, Metric.IF, 1.0, ("C",)), MetricRow("W", 2010, Metric.IF, 2.0, ("C",))]
        rows += [MetricRow("V", 2012, Metric.IF, 3.0, ("C",)), MetricRow("W", 2012, Metric.IF, 2.0, ("C",))]
        table = JournalMetricsTable(rows)
        assert QuartileResolver(table, Metric.IF).quartile("V", 2010) == "Q2"  # rank 1 of 2 in 2012
        assert QuartileResolver(table, Metric.IF, mode="publication_year").quartile("V", 2010) == "Q4"


def _edges_fixture(self_edges: int, total: int = 10, strip: bool = False):
    focal = [pub("F1", authors=(FOCAL, "Co, A"))]
    citing = []
    for i in range(total):
        names = ("Else, E",) if strip or i >= self_edges else ("Co, A", "Else, E")
        citing.append(pub(f"C{i}", authors=names))
    return corpus(focal, citing, [(f"C{i}", "F1") for i in range(total)])


class TestSelfCitation:
    def test_no_overlap(self):
        r = self_citation_rate(_edges_fixture(0))
        assert (r.rate, r.flag) == (0.0, "usual")

    def test_three_of_ten(self):
        r = self_citation_rate(_edges_fixture(3))
        assert (r.rate, r.flag, r.self_citations) == (pytest.approx(0.3), "elevated", 3)
        stripped = self_citation_rate(_edges_fixture(3, strip=True))
        assert (stripped.rate, stripped.flag) == (0.0, "usual")

    def test_boundary_is_usual(self):
        assert self_citation_rate(_edges_fixture(2)).flag == "usual"

    def test_orcid_only_match(self):
        focal = [pub("F1", authors=(author("Doe, Jane", orcid="O1"),))]
        citing = [pub("C1", authors=(author("Jones, Q", orcid="O1"),))]
        r = self_citation_rate(corpus(focal, citing, [("C1", "F1")]))
        assert r.rate == 1.0

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10), st.integers(1, 10))
    def test_rate_bounded(self, k, n):
        r = self_citation_rate(_edges_fixture(min(k, n), n))
        assert 0 <= r.rate <= 1


def _baselines(expected=5.0, p90=10, p99=30, year=2012):
    return BaselineTable([BaselineRow("C", year, ART, expected, p90, p99)])


class TestCnci:
    def test_identity_ratio_zero(self):
        b = _baselines(5.0)
        p = pub("P")
        assert cnci(p, 5, b, ["C"]) == 1.0
        assert cnci(p, 10, b, ["C"]) == 2.0
        assert cnci(p, 0, b, ["C"]) == 0.0

    @settings(max_examples=100)
    @given(st.lists(st.floats(0.1, 1e4, allow_nan=False), min_size=1, max_size=20))
    def test_mean_of_expected_is_one(self, expected_values):
        rows = [BaselineRow(f"C{i}", 2012, ART, e, e, e) for i, e in enumerate(expected_values)]
        mrows = [MetricRow(f"V{i}", 2014, Metric.IF, 1.0, (f"C{i}",)) for i in range(len(expected_values))]
        pubs = [pub(f"P{i}", venue_id=f"V{i}") for i in range(len(expected_values))]
        # each pub has citations exactly equal to its expectation (scaled to integers)
        scale = {f"P{i}": e for i, e in enumerate(expected_values)}
        table = BaselineTable(BaselineRow(r.category, r.pub_year, r.doc_type, scale[f"P{r.category[1:]}"], 0, 0) for r in rows)
        norm = normalized_impact(pubs, {p.id: scale[p.id] for p in pubs}, table, QuartileResolver(JournalMetricsTable(mrows), Metric.IF))
        assert norm.cnci_mean == pytest.approx(1.0, abs=1e-12)

    def test_missing_baseline_excluded(self):
        mrows = [MetricRow("V", 2014, Metric.IF, 1.0, ("C",)), MetricRow("W", 2014, Metric.IF, 1.0, ("D",))]
        pubs = [pub("P1", venue_id="V"), pub("P2", venue_id="W")]
        norm = normalized_impact(pubs, {"P1": 5, "P2": 9}, _baselines(5.0), QuartileResolver(JournalMetricsTable(mrows), Metric.IF))
        assert norm.excluded == ("P2",)
        assert norm.cnci_mean == 1.0
        assert norm.warnings


class TestImpactProfile:
    def _fixture(self, counts, doc_types=None):
        doc_types = doc_types or [ART] * len(counts)
        pubs = [pub(f"P{i}", year=2010, cites=c, doc_type=d) for i, (c, d) in enumerate(zip(counts, doc_types))]
        return corpus(pubs)

    def test_zero_citations(self):
        prof = impact_profile(self._fixture([0, 0, 0]), None, Config(reference_year=2015))
        assert (prof.h_index, prof.g_index, prof.cited.percent, prof.total_citations) == (0, 0, 0.0, 0)

    def test_five_pub_fixture(self):
        counts = [10, 8, 5, 4, 3]
        prof = impact_profile(self._fixture(counts), None, Config(reference_year=2015))
        assert prof.total_citations == sum(counts) == 30
        assert prof.max_citations == 10
        assert prof.cited.percent == 1.0
        assert prof.citations_per_cited_doc == 6.0
        assert (prof.h_index, prof.g_index) == (brute_h(counts), brute_g(counts)) == (4, 5)
        assert prof.m_quotient == pytest.approx(4 / 6)
        assert prof.i_indices == {10: 1, 50: 0, 100: 0}
        assert prof.std_citations is None

    def test_citable_scope_excludes_conference(self):
        c = self._fixture([10, 8, 5], [ART, DocType.CONFERENCE, ART])
        cfg = Config(reference_year=2015)
        all_items = impact_profile(c, None, cfg, Scope.ALL)
        citable = impact_profile(c, None, cfg, Scope.CITABLE)
        assert all_items.total_citations - citable.total_citations == 8
        assert citable.publications == 2

    def test_std_behind_flag(self):
        prof = impact_profile(self._fixture([2, 4]), None, Config(reference_year=2015, impact_show_std=True))
        assert prof.std_citations == pytest.approx(1.0)

    def test_edge_fallback_when_source_missing(self):
        focal = [pub("F1"), pub("F2")]
        citing = [pub("C1", authors=("X, Y",)), pub("C2", authors=("X, Y",))]
        c = corpus(focal, citing, [("C1", "F1"), ("C2", "F1")])
        prof = impact_profile(c, None, Config(reference_year=2015))
        assert (prof.total_citations, prof.h_index) == (2, 1)
        assert math.isclose(prof.self_citation.rate, 0.0)
