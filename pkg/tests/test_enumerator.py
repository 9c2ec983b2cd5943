import pytest

from flatkern.diagram import component_type
from flatkern.enumerator import (
    SearchSpec,
    classify_kind,
    enumerate_matchings,
    enumerate_stable_prediagrams,
)
from flatkern.presets import load_preset
from flatkern.prym import matching_involutions
from flatkern.reports import named_base
from flatkern.surface import stratum_signature

FIRST_KIND = {"fabced", "cafbed"}
SECOND_KIND = {"cdefab", "cefbda", "faecdb"}


@pytest.fixture(scope="module")
def classification():
    return enumerate_matchings(SearchSpec(named_base("prym1111-base")))


class TestGoldenEnumeration:
    def test_survivor_set(self, classification):
        got = {s.matching_tuple for s in classification.survivors}
        assert got == FIRST_KIND | SECOND_KIND

    def test_kinds(self, classification):
        kinds = {s.matching_tuple: s.kind for s in classification.survivors}
        assert {t for t, k in kinds.items() if k == "first"} == FIRST_KIND
        assert {t for t, k in kinds.items() if k == "second"} == SECOND_KIND

    def test_named_rejections(self, classification):
        rej = {r.matching_tuple: r for r in classification.rejected}
        assert rej["eafbdc"].reason == "metric-infeasible"
        assert rej["cbafed"].reason == "disconnected"
        assert rej["cfeadb"].reason == "isomorphic-duplicate"
        assert rej["cfeadb"].duplicate_of == "cefbda"

    def test_exhaustive(self, classification):
        total = len(classification.survivors) + len(classification.rejected)
        assert total == 720
        seen = {s.matching_tuple for s in classification.survivors}
        seen.update(r.matching_tuple for r in classification.rejected)
        assert len(seen) == 720

    def test_witnesses_validate(self, classification):
        from flatkern.diagram import SeparatrixDiagram
        from flatkern.prym import find_prym_involutions

        nb = named_base("prym1111-base")
        for s in classification.survivors:
            D = SeparatrixDiagram(nb.prediagram, s.matching, tuple(sorted(s.metric.items())))
            assert D.is_valid()
            found = find_prym_involutions(D)
            assert any(inv.rho == s.involution.rho for inv in found)
            sig = stratum_signature(nb.prediagram)
            assert sig.kappa == (1, 1, 1, 1) and sig.genus == 3
            counts = s.involution.fixed_counts
            assert counts[0] + counts[1] + 2 * counts[2] == 4
            assert counts[2] == 2

    def test_filter_order_invariance(self):
        nb = named_base("prym1111-base")
        a = enumerate_matchings(SearchSpec(nb))
        b = enumerate_matchings(
            SearchSpec(nb, filter_order=("metric", "connectivity", "involution"))
        )
        assert {s.matching_tuple for s in a.survivors} == {
            s.matching_tuple for s in b.survivors
        }

    def test_kind_filters(self):
        nb = named_base("prym1111-base")
        first = enumerate_matchings(SearchSpec(nb, kind_filter="first"))
        second = enumerate_matchings(SearchSpec(nb, kind_filter="second"))
        assert {s.matching_tuple for s in first.survivors} == FIRST_KIND
        assert {s.matching_tuple for s in second.survivors} == SECOND_KIND

    def test_duplicates_point_to_surviving_reps(self, classification):
        reps = {s.matching_tuple for s in classification.survivors}
        for r in classification.rejected:
            if r.reason == "isomorphic-duplicate":
                assert r.duplicate_of in reps


class TestClassifyKind:
    def _kind_of(self, word):
        nb = named_base("prym1111-base")
        m = nb.matching_from_tuple(word)
        invs = [
            inv for inv in matching_involutions(nb.prediagram, m)
            if inv.fixed_cylinders == 2 and inv.rho == nb.base_involution
        ]
        return classify_kind(nb, m, invs[0])

    def test_fabced_first(self):
        assert self._kind_of("fabced") == "first"

    def test_cdefab_second(self):
        assert self._kind_of("cdefab") == "second"

    def test_faecdb_second(self):
        assert self._kind_of("faecdb") == "second"


class TestStablePrediagramEnumeration:
    def test_genus2_unique_class(self):
        out = enumerate_stable_prediagrams((1, 1))
        assert len(out) == 1
        sig = stratum_signature(out[0])
        assert sig.kappa == (1, 1)

    def test_marked_torus(self):
        out = enumerate_stable_prediagrams((0,))
        assert len(out) == 1

    def test_prym_base_type_is_the_unique_class(self):
        out = enumerate_stable_prediagrams((1, 1, 1, 1))
        assert len(out) == 1
        base = load_preset("prym1111-base").prediagram
        assert component_type(out[0]) == component_type(base)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            enumerate_stable_prediagrams((3, 3, 3))


class TestBareClassification:
    def test_without_pinned_involution_classes_merge(self):
        # a base without its involution classifies bare matched diagrams;
        # the first-kind and one second-kind family are then isomorphic
        # (a digit-star swap conjugates the involution away), so fewer
        # classes survive than in the decorated classification
        from flatkern.enumerator import NamedBase

        nb = named_base("prym1111-base")
        bare = NamedBase(nb.prediagram, nb.names, base_involution=None)
        result = enumerate_matchings(SearchSpec(bare))
        decorated = enumerate_matchings(SearchSpec(nb))
        assert len(result.survivors) < len(decorated.survivors)
        bare_members = set()
        for s in result.survivors:
            bare_members.update(s.class_members)
        for s in decorated.survivors:
            assert set(s.class_members) <= bare_members


class TestInvolutionFilterCountOracle:
    """Candidates passing the involution filter are counted independently.

    A matching transported by the pinned involution corresponds to an
    involution g of the six letters via m = (letter image of digits) ∘ g,
    and its fixed cylinders are the fixed letters of g.  The filter counts
    must therefore match the fixed-point statistics of involutions in S6.
    """

    @staticmethod
    def _involution_fixed_counts():
        import itertools as it

        counts = {}
        letters = range(6)
        for p in it.permutations(letters):
            if all(p[p[i]] == i for i in letters):
                f = sum(1 for i in letters if p[i] == i)
                counts[f] = counts.get(f, 0) + 1
        return counts

    def test_filter_statistics(self, classification):
        oracle = self._involution_fixed_counts()
        assert oracle == {0: 15, 2: 45, 4: 15, 6: 1}
        reasons = {}
        for r in classification.rejected:
            reasons[r.reason] = reasons.get(r.reason, 0) + 1
        passers = len(classification.survivors) + reasons.get("isomorphic-duplicate", 0)
        passers += reasons.get("metric-infeasible", 0) + reasons.get("disconnected", 0)
        assert passers == oracle[2]
        assert reasons["extra-fixed-cylinder"] == oracle[4] + oracle[6]
        assert reasons["no-involution"] == 720 - sum(oracle.values()) + oracle[0]
