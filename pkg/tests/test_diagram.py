import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from knotgate.diagram import (
    CATALOG_NAMES,
    catalog,
    parse_pd,
    pd_from_tuples,
    serialize,
    wirtinger_presentation,
)
from knotgate.errors import ArcCountMismatch, EmptyInput, MalformedToken, UnknownName
from knotgate.fpgroup import (
    Presentation,
    commutator,
    equivalent_relator,
    match_presentations,
    parse_word,
    simplify,
)

TREFOIL = "X(1,4,2,5); X(3,6,4,1); X(5,2,6,3)"


def exponent_rank(p):
    """Rank of the relator exponent-sum matrix."""
    if not p.relators:
        return 0
    m = np.array([[sum(e for h, e in r.letters if h == g) for g in range(p.rank)] for r in p.relators])
    return int(np.linalg.matrix_rank(m))


class TestParse:
    def test_trefoil(self):
        pd = parse_pd(TREFOIL)
        assert len(pd.crossings) == 3
        assert pd.arc_count == 6
        assert pd.num_components == 1

    @pytest.mark.parametrize("text", ["", "   ", "# only a comment\n"])
    def test_empty(self, text):
        with pytest.raises(EmptyInput):
            parse_pd(text)

    def test_kink_is_accepted(self):
        pd = parse_pd("X(1,1,2,2)")
        assert len(pd.crossings) == 1 and pd.arc_count == 2

    @pytest.mark.parametrize(
        "text", ["X(1,2,3)", "X(1,2,3,4,5)", "X(1,2,a,4)", "Y(1,2,3,4)", "X(1,2,3,4;*)", "X(0,1,1,0)"]
    )
    def test_malformed(self, text):
        with pytest.raises(MalformedToken):
            parse_pd(text)

    @pytest.mark.parametrize("text", ["X(1,2,3,4)", "X(1,4,2,5); X(3,6,4,1); X(5,2,6,7)"])
    def test_arc_count(self, text):
        with pytest.raises(ArcCountMismatch):
            parse_pd(text)

    def test_separators_and_comments(self):
        text = "# trefoil\nX(1,4,2,5)\nX(3,6,4,1)  # second\nX(5,2,6,3)"
        assert serialize(parse_pd(text)) == serialize(parse_pd(TREFOIL))

    def test_renumbering_by_first_appearance(self):
        pd = parse_pd("X(10,40,20,50); X(30,60,40,10); X(50,20,60,30)")
        assert serialize(pd) == serialize(parse_pd(TREFOIL))

    def test_explicit_signs_win(self):
        pd = parse_pd("X(1,4,2,5;+); X(3,6,4,1;+); X(5,2,6,3;+)")
        assert [c.sign for c in pd.crossings] == [1, 1, 1]

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_serialize_round_trip(self, name):
        pd = catalog(name).pd
        assert parse_pd(serialize(pd)) == pd

    def test_loops(self):
        pd = parse_pd("O(1); O(2)")
        assert pd.num_components == 2 and pd.crossings == ()

    def test_pd_from_tuples(self):
        pd = pd_from_tuples([(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)])
        assert pd.arc_count == 6
        assert [c.labels for c in pd.crossings] == [(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)]
        assert [c.sign for c in pd.crossings] == [c.sign for c in parse_pd(TREFOIL).crossings]


class TestSigns:
    def test_trefoil_signs_agree(self):
        signs = [c.sign for c in parse_pd(TREFOIL).crossings]
        assert len(set(signs)) == 1

    def test_figure8_writhe_zero(self):
        assert sum(c.sign for c in catalog("figure8").pd.crossings) == 0

    def test_mirror_flips_signs(self):
        # reversing the cyclic order of every crossing mirrors the diagram
        pd = parse_pd(TREFOIL)
        mirrored = pd_from_tuples([(c.labels[0], c.labels[3], c.labels[2], c.labels[1]) for c in pd.crossings])
        assert [c.sign for c in mirrored.crossings] == [-c.sign for c in pd.crossings]


class TestWirtinger:
    def test_trefoil_three_generators(self):
        pd = parse_pd(TREFOIL)
        p = wirtinger_presentation(pd)
        assert p.rank == 3 == len(pd.wirtinger_arcs())
        assert len(p.relators) == 3
        expected = Presentation.from_strings("abc", ["CAba", "BCac", "ABcb"])
        assert match_presentations(p, expected, allow_generator_inversion=True) is not None

    def test_unknot(self):
        p = wirtinger_presentation(catalog("unknot").pd)
        assert p.rank == 1 and p.relators == ()

    def test_hopf_reduces_to_commutator(self):
        p = simplify(wirtinger_presentation(catalog("hopf").pd))
        assert p.rank == 2 and len(p.relators) == 1
        assert equivalent_relator(p.relators[0], commutator(parse_word("a"), parse_word("b")))

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_one_relator_per_crossing(self, name):
        pd = catalog(name).pd
        p = wirtinger_presentation(pd)
        assert len(p.relators) == len(pd.crossings)
        assert p.rank == len(pd.wirtinger_arcs())

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_catalog_matches_expected(self, name):
        e = catalog(name)
        p = simplify(wirtinger_presentation(e.pd))
        assert match_presentations(p, e.expected_presentation, allow_generator_inversion=True) is not None

    @given(st.integers(1, 6), st.booleans())
    def test_torus_family_abelianization(self, m, mirror):
        """Torus knots T(2, n), n odd: the abelianised group is Z."""
        n = 2 * m + 1
        tuples = [(2 * k + 1, (2 * k + 3) % (2 * n) + 1, 2 * k + 2, (2 * k + 4) % (2 * n) + 1) for k in range(n)]
        if mirror:
            tuples = [(a, d, c, b) for a, b, c, d in tuples]
        pd = pd_from_tuples(tuples)
        assert pd.num_components == 1
        assert len({c.sign for c in pd.crossings}) == 1
        p = wirtinger_presentation(pd)
        assert len(p.relators) == n
        for q in (p, simplify(p)):
            assert q.rank - exponent_rank(q) == pd.num_components

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_catalog_abelianization(self, name):
        pd = catalog(name).pd
        p = wirtinger_presentation(pd)
        assert p.rank - exponent_rank(p) == pd.num_components


class TestCatalog:
    def test_trefoil(self):
        e = catalog("trefoil")
        assert equivalent_relator(e.expected_presentation.relators[0], parse_word("babABA"))

    def test_whitehead_relator(self):
        x, y = parse_word("x", ("x", "y")), parse_word("y", ("x", "y"))
        rel = commutator(x, y) * commutator(x, y.inverse()) * commutator(x.inverse(), y.inverse())
        rel = rel * commutator(x.inverse(), y)
        e = catalog("whitehead")
        assert equivalent_relator(e.expected_presentation.relators[0], rel)
        assert e.crossing_counts == (2, 2)

    def test_unknot(self):
        e = catalog("unknot")
        assert e.crossing_counts is None
        assert e.expected_presentation.rank == 1 and e.expected_presentation.relators == ()

    def test_unknown(self):
        with pytest.raises(UnknownName):
            catalog("granny")
