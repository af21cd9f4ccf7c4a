import itertools

import numpy as np
import pytest

from knotgate.algebra import ID2, distance, is_su2
from knotgate.compiler import Compiler, compile_word, coverage, haar_targets, word_key
from knotgate.errors import TargetNotSU2, ValidationError
from knotgate.fpgroup import Presentation, Word, format_word, free_reduce, parse_word
from knotgate.reps import B3, Representation, evaluate_word, fibonacci_rep

FIB = fibonacci_rep()
LETTERS = [(0, 1), (0, -1), (1, 1), (1, -1)]


def reduced_words(max_len):
    """Plain enumeration of freely reduced words, shortest first."""
    for n in range(max_len + 1):
        for letters in itertools.product(LETTERS, repeat=n):
            if all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(letters, letters[1:])):
                yield Word(letters)


def shortlex(w):
    rank = {letter: i for i, letter in enumerate(LETTERS)}
    return (len(w), [rank[x] for x in w.letters])


def oracle(rep, target, max_len):
    best = None
    for w in reduced_words(max_len):
        d = distance(evaluate_word(rep.image_list, w), target)
        key = (d, shortlex(w))
        if best is None or key < best[0]:
            best = (key, w)
    return best[1], best[0][0]


@pytest.fixture(scope="module")
def fib6():
    return Compiler(FIB, 6)


@pytest.fixture(scope="module")
def abelian_rep():
    g = np.diag([np.exp(1j), np.exp(-1j)])
    return Representation(B3, {"a": g, "b": g}, name="abelian")


class TestCompileWord:
    def test_identity(self, fib6):
        r = fib6.compile(ID2)
        assert r.word == Word() and r.dist == 0

    def test_generator(self, fib6):
        r = fib6.compile(FIB("a"))
        assert format_word(r.word) == "a"
        assert r.dist <= 1e-12

    def test_conjugate(self):
        r = compile_word(FIB, FIB("abA"), max_len=3)
        assert r.dist <= 1e-10 and len(r.word) <= 3

    @pytest.mark.parametrize("max_len", [0, 1, 2, 3, 4, 5])
    def test_oracle_small(self, max_len):
        comp = Compiler(FIB, max_len)
        for target in haar_targets(8, seed=max_len):
            r = comp.compile(target)
            w, d = oracle(FIB, target, max_len)
            assert r.dist == d
            assert r.word == w

    def test_result_invariants(self, fib6):
        for target in haar_targets(20, seed=3):
            r = fib6.compile(target)
            assert len(r.word) <= 6
            assert free_reduce(r.word) == r.word
            assert abs(distance(evaluate_word(FIB.image_list, r.word), target) - r.dist) <= 1e-12
            assert abs(distance(r.achieved, target) - r.dist) <= 1e-12

    def test_tie_break_prefers_a(self, abelian_rep):
        comp = Compiler(abelian_rep, 4)
        assert format_word(comp.compile(abelian_rep("a")).word) == "a"
        assert format_word(comp.compile(abelian_rep("A")).word) == "A"

    def test_early_exit_is_shortest(self, fib6):
        eps = 0.3
        for target in haar_targets(10, seed=11):
            r = fib6.compile(target, epsilon=eps)
            assert r.dist <= eps
            shorter = [w for w in reduced_words(len(r.word) - 1)]
            assert all(distance(evaluate_word(FIB.image_list, w), target) > eps for w in shorter)

    def test_phase_is_ignored(self, fib6):
        r1 = fib6.compile(FIB("ab"))
        r2 = fib6.compile(-FIB("ab"))
        assert r1.dist <= 1e-12 and r2.dist <= 1e-12

    @pytest.mark.parametrize(
        "target",
        [np.eye(2) * 2, np.diag([1, -1]), np.ones((2, 2)), np.eye(3)],
    )
    def test_rejects_non_su2(self, fib6, target):
        with pytest.raises(TargetNotSU2):
            fib6.compile(target)

    def test_length_bound(self):
        with pytest.raises(ValidationError):
            Compiler(FIB, 25)

    def test_needs_two_generators(self):
        p = Presentation.from_strings("abc", [])
        rep = Representation(p, {g: ID2 for g in "abc"})
        with pytest.raises(ValidationError):
            Compiler(rep, 4)

    def test_haar_median(self):
        comp = Compiler(FIB, 12)
        dists = [comp.compile(t).dist for t in haar_targets(30, seed=5)]
        assert np.median(dists) < 0.35

    def test_deterministic(self):
        t = haar_targets(1, seed=9)[0]
        r1 = compile_word(FIB, t, 8)
        r2 = compile_word(FIB, t, 8)
        assert r1.word == r2.word and r1.dist == r2.dist and r1.to_json() == r2.to_json()


class TestCoverage:
    def test_haar_targets(self):
        ts = haar_targets(50, seed=1)
        assert ts.shape == (50, 2, 2)
        assert all(is_su2(t) for t in ts)
        assert (haar_targets(50, seed=1) == ts).all()

    def test_diameter(self, fib6):
        assert coverage(FIB, 2.0, 6, 20, seed=0, compiler=fib6).covered_fraction == 1.0

    def test_monotone(self):
        fracs = [coverage(FIB, 0.1, n, 40, seed=2).covered_fraction for n in (4, 6, 8)]
        assert fracs == sorted(fracs)

    @pytest.mark.parametrize("max_len", [4, 6])
    def test_abelian_bounded(self, abelian_rep, max_len):
        assert coverage(abelian_rep, 0.2, max_len, 50, seed=4).covered_fraction < 0.5

    def test_report_json(self):
        rpt = coverage(FIB, 0.5, 4, 10, seed=3)
        assert set(rpt.to_json()) == {"epsilon", "max_len", "sample_count", "covered_fraction", "seed"}
        assert 0.0 <= rpt.covered_fraction <= 1.0


def test_word_key_order():
    words = [parse_word(t) for t in ["b", "A", "a", "B", "aa", ""]]
    assert [format_word(w) for w in sorted(words, key=word_key)] == ["", "a", "A", "b", "B", "aa"]
