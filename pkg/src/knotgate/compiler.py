"""Approximate SU(2) targets by words in the images of a two-generator representation.

The search is meet-in-the-middle over freely reduced words in the letters
``a < A < b < B``: a word of length at most ``L`` splits as ``u v`` with
``|u| <= ceil(L/2)`` and ``|v| <= floor(L/2)``, so for every prefix ``u`` the
best suffix is a nearest-neighbour query for ``phi(u)^-1 T`` among the
suffix images.  Unit quaternions ``q`` and ``-q`` are both stored in the
k-d tree so that Euclidean nearest neighbours realise the projective
distance exactly.  All candidates within a small slack of the best are then
re-evaluated with :func:`knotgate.reps.evaluate_word` and the winner is the
smallest ``(distance, word)`` pair, words compared in shortlex order.
"""

from dataclasses import dataclass, field
from math import ceil

import numpy as np
from scipy.spatial import cKDTree

from .algebra import TOL_NORM, distance, is_su2, qconj, qmul, random_su2_array, su2_from_array, su2_to_array
from .errors import TargetNotSU2, ValidationError
from .fpgroup import Word, format_word, free_reduce
from .reps import TOL_REP, evaluate_word

MAX_LEN = 24
SLACK = 1e-9

# letter index -> (generator, exponent); index order is the tie-break order a < A < b < B
LETTERS = ((0, 1), (0, -1), (1, 1), (1, -1))


def _letter_index(g, e):
    return 2 * g + (0 if e == 1 else 1)


def word_key(w):
    """Shortlex key: shorter words first, then letter by letter in a < A < b < B."""
    return (len(w), tuple(_letter_index(g, e) for g, e in w.letters))


@dataclass
class CompileResult:
    word: Word
    achieved: np.ndarray
    dist: float
    explored: int
    target: np.ndarray = field(repr=False, default=None)

    def to_json(self, generators=("a", "b")):
        from .algebra import matrix_to_json

        return {
            "word": format_word(self.word, generators),
            "length": len(self.word),
            "dist": self.dist,
            "explored": self.explored,
            "achieved": matrix_to_json(self.achieved),
        }


class _WordTable:
    """All freely reduced words up to a length, grouped by length, with images."""

    def __init__(self, letter_quats, max_len):
        self.parent = [np.array([-1])]
        self.last = [np.array([-1])]
        self.quats = [np.array([[1.0, 0.0, 0.0, 0.0]])]
        for n in range(1, max_len + 1):
            prev_last = self.last[-1]
            parents, lasts = [], []
            for letter in range(4):
                ok = prev_last != (letter ^ 1)
                idx = np.nonzero(ok)[0]
                parents.append(idx)
                lasts.append(np.full(len(idx), letter))
            parent = np.concatenate(parents)
            last = np.concatenate(lasts)
            # order words of equal length lexicographically
            prev_rank = np.arange(len(prev_last))
            order = np.lexsort((last, prev_rank[parent]))
            parent, last = parent[order], last[order]
            self.parent.append(parent)
            self.last.append(last)
            self.quats.append(qmul(self.quats[-1][parent], letter_quats[last]))

    def word(self, length, index):
        letters = []
        while length > 0:
            letters.append(LETTERS[self.last[length][index]])
            index = self.parent[length][index]
            length -= 1
        return Word(tuple(reversed(letters)))

    def upto(self, n):
        """Concatenated quaternions and (length, index) labels of all words of length <= n."""
        quats = np.concatenate(self.quats[: n + 1])
        labels = np.concatenate(
            [np.column_stack([np.full(len(q), k), np.arange(len(q))]) for k, q in enumerate(self.quats[: n + 1])]
        )
        return quats, labels


class Compiler:
    """Reusable search state for one representation and length bound."""

    def __init__(self, rep, max_len=12):
        if rep.presentation.rank != 2:
            raise ValidationError("compiler needs a representation with two generators")
        if not rep.is_valid(TOL_REP):
            raise ValidationError(f"representation residual {rep.residual:.3e} is above {TOL_REP:.0e}")
        if not 0 <= max_len <= MAX_LEN:
            raise ValidationError(f"max_len must be in [0, {MAX_LEN}]")
        self.rep = rep
        self.max_len = max_len
        self.images = rep.image_list
        gq = su2_to_array(np.stack(self.images))
        letter_quats = np.stack([gq[0], qconj(gq[0]), gq[1], qconj(gq[1])])
        self.table = _WordTable(letter_quats, ceil(max_len / 2))
        self._trees = {}

    def _suffix_tree(self, n):
        if n not in self._trees:
            quats, labels = self.table.upto(n)
            tree = cKDTree(np.vstack([quats, -quats]))
            self._trees[n] = (tree, labels, len(quats))
        return self._trees[n]

    def _search(self, target_q, target, length):
        hu, hv = ceil(length / 2), length // 2
        uq, ulabels = self.table.upto(hu)
        tree, vlabels, nv = self._suffix_tree(hv)
        queries = qmul(qconj(uq), target_q)
        d, _ = tree.query(queries, k=1)
        best = d.min()
        radius = best + SLACK
        explored = len(uq)
        candidates = {}
        for i in np.nonzero(d <= radius)[0]:
            for j in tree.query_ball_point(queries[i], radius):
                u = self.table.word(*ulabels[i])
                v = self.table.word(*vlabels[j % nv])
                w = free_reduce(u * v)
                candidates[word_key(w)] = w
        explored += len(candidates)
        best_w, best_d, best_m = None, np.inf, None
        for key in sorted(candidates):
            w = candidates[key]
            m = evaluate_word(self.images, w)
            dist = distance(m, target)
            if dist < best_d:
                best_w, best_d, best_m = w, dist, m
        return best_w, best_d, best_m, explored

    def compile(self, target, epsilon=0.0):
        """Best word of length at most ``max_len``; stops at the first length
        whose best distance is within `epsilon`."""
        target = np.asarray(target, dtype=complex)
        if target.shape != (2, 2) or not is_su2(target, TOL_NORM):
            raise TargetNotSU2("target is not a 2x2 special unitary matrix")
        target_q = su2_to_array(target)
        explored = 0
        lengths = range(self.max_len + 1) if epsilon > 0 else [self.max_len]
        for length in lengths:
            w, dist, m, n = self._search(target_q, target, length)
            explored += n
            if dist <= epsilon:
                break
        return CompileResult(w, m, float(dist), explored, target)


def compile_word(rep, target, max_len=12, epsilon=0.0):
    return Compiler(rep, max_len).compile(target, epsilon)


def haar_targets(samples, seed):
    """Seeded Haar-random SU(2) matrices (normalised Gaussian 4-vectors)."""
    rng = np.random.default_rng(seed)
    return su2_from_array(random_su2_array(rng, samples))


@dataclass(frozen=True)
class CoverageReport:
    epsilon: float
    max_len: int
    sample_count: int
    covered_fraction: float
    seed: int
    distances: tuple = field(default=(), repr=False)

    def to_json(self):
        return {
            "epsilon": self.epsilon,
            "max_len": self.max_len,
            "sample_count": self.sample_count,
            "covered_fraction": self.covered_fraction,
            "seed": self.seed,
        }


def coverage(rep, epsilon, max_len, samples, seed, compiler=None):
    """Fraction of seeded Haar-random targets compiled to within `epsilon`."""
    comp = compiler if compiler is not None and compiler.max_len == max_len else Compiler(rep, max_len)
    dists = []
    for target in haar_targets(samples, seed):
        dists.append(comp.compile(target, epsilon).dist)
    covered = sum(d <= epsilon for d in dists) / samples if samples else 1.0
    return CoverageReport(float(epsilon), int(max_len), int(samples), float(covered), int(seed), tuple(dists))
