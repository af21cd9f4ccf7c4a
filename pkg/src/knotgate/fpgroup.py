"""Words, finitely presented groups and Tietze elimination.

A word is a tuple of ``(generator_index, exponent)`` letters with exponent
in {+1, -1}.  The text form writes generator ``k`` as the ``k``-th lowercase
letter and its inverse in uppercase, so the trefoil relator ``bab a^-1 b^-1 a^-1``
is ``"babABA"``.  Generators past ``z`` use ``g26``/``G26`` tokens.
"""

import itertools
import re
import string
from dataclasses import dataclass, field

from .errors import NotSolvable, ValidationError

LOWER = string.ascii_lowercase

_TOKEN = re.compile(r"([gG])(\d+)|([a-zA-Z])|(\s+)|(.)")


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        letters = tuple((int(g), int(e)) for g, e in self.letters)
        for g, e in letters:
            if g < 0 or e not in (1, -1):
                raise ValidationError(f"bad letter {(g, e)}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def gen(cls, index, exponent=1):
        return cls(((index, exponent),))

    @classmethod
    def parse(cls, text, generators=None):
        return parse_word(text, generators)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __mul__(self, other):
        return Word(self.letters + other.letters)

    def __pow__(self, n):
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def inverse(self):
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def generators_used(self):
        return {g for g, _ in self.letters}

    def count(self, g):
        return sum(1 for h, _ in self.letters if h == g)

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r})"


IDENTITY = Word()


def _letter_text(g, e, generators=None):
    if generators is not None and len(generators[g]) == 1 and generators[g].islower():
        name = generators[g]
    elif g < 26:
        name = LOWER[g]
    else:
        name = f"g{g}"
    return name if e == 1 else name.upper()


def format_word(w, generators=None):
    """Text form of a word; the identity is the empty string."""
    if not w.letters:
        return ""
    return "".join(_letter_text(g, e, generators) for g, e in w.letters)


def parse_word(text, generators=None):
    """Parse ``"babABA"`` style text.

    With `generators` (a list of names) single lowercase-letter names map to
    their own index; otherwise ``a`` is generator 0, ``b`` generator 1, ...
    ``"e"``, ``"1"`` and the empty string all denote the identity only when
    ``e`` is not itself a generator name.
    """
    text = text.strip()
    if text in ("", "1") or (text == "e" and not (generators and "e" in generators)):
        return IDENTITY
    by_name = {}
    if generators is not None:
        by_name = {name: i for i, name in enumerate(generators) if len(name) == 1 and name.islower()}
    letters = []
    for m in _TOKEN.finditer(text):
        gtok, num, ch, space, bad = m.groups()
        if space:
            continue
        if bad is not None:
            raise ValidationError(f"unexpected character {bad!r} in word {text!r}")
        if gtok is not None:
            letters.append((int(num), 1 if gtok == "g" else -1))
            continue
        low = ch.lower()
        if by_name:
            if low not in by_name:
                raise ValidationError(f"unknown generator {ch!r} for {generators}")
            idx = by_name[low]
        else:
            idx = LOWER.index(low)
        letters.append((idx, 1 if ch.islower() else -1))
    if generators is not None:
        for g, _ in letters:
            if g >= len(generators):
                raise ValidationError(f"generator index {g} out of range in {text!r}")
    return Word(tuple(letters))


def free_reduce(w):
    out = []
    for g, e in w.letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return Word(tuple(out))


def cyclic_reduce(w):
    letters = free_reduce(w).letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    return Word(letters[i : j + 1])


def commutator(x, y):
    """``[x, y] = x y x^-1 y^-1``, freely reduced."""
    return free_reduce(x * y * x.inverse() * y.inverse())


def rotations(w):
    n = len(w.letters)
    for k in range(max(n, 1)):
        yield Word(w.letters[k:] + w.letters[:k])


def equivalent_relator(u, v):
    """True if `u` and `v` agree after cyclic reduction up to rotation and inversion."""
    cu, cv = cyclic_reduce(u), cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    for target in (cv.letters, cv.inverse().letters):
        doubled = cu.letters + cu.letters
        n = len(cu)
        for k in range(n):
            if doubled[k : k + n] == target:
                return True
    return False


def substitute(w, images):
    """Replace generator ``g`` by ``images[g]`` (a Word) where given."""
    out = []
    for g, e in w.letters:
        if g in images:
            out.extend((images[g] if e == 1 else images[g].inverse()).letters)
        else:
            out.append((g, e))
    return Word(tuple(out))


def relabel(w, mapping):
    """Apply an index map ``old -> (new, sign)`` letter by letter."""
    out = []
    for g, e in w.letters:
        new, sign = mapping[g]
        out.append((new, e * sign))
    return Word(tuple(out))


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = field(default=())

    def __post_init__(self):
        gens = tuple(str(g) for g in self.generators)
        if len(set(gens)) != len(gens):
            raise ValidationError(f"duplicate generator names in {gens}")
        rels = tuple(cyclic_reduce(r) for r in self.relators)
        for r in rels:
            for g, _ in r.letters:
                if g >= len(gens):
                    raise ValidationError(f"relator {r} uses generator index {g} >= {len(gens)}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)

    @property
    def rank(self):
        return len(self.generators)

    def index(self, g):
        if isinstance(g, int):
            if not 0 <= g < self.rank:
                raise ValidationError(f"generator index {g} out of range")
            return g
        try:
            return self.generators.index(g)
        except ValueError:
            raise ValidationError(f"unknown generator {g!r}") from None

    def word(self, text):
        return parse_word(text, self.generators)

    def relator_strings(self):
        return [format_word(r, self.generators) or "e" for r in self.relators]

    def __str__(self):
        return "<" + ",".join(self.generators) + " | " + ", ".join(self.relator_strings()) + ">"

    def to_json(self):
        return {"generators": list(self.generators), "relators": self.relator_strings()}

    @classmethod
    def from_json(cls, data):
        gens = list(data["generators"])
        rels = [parse_word(r, gens) for r in data.get("relators", [])]
        return cls(tuple(gens), tuple(rels))

    @classmethod
    def from_strings(cls, generators, relators):
        gens = tuple(generators)
        return cls(gens, tuple(parse_word(r, gens) for r in relators))


def _solve_for(relator, g):
    """Return the word ``w`` with ``g = w`` read off `relator`, or None."""
    r = cyclic_reduce(relator)
    positions = [k for k, (h, _) in enumerate(r.letters) if h == g]
    if len(positions) != 1:
        return None
    k = positions[0]
    rotated = r.letters[k:] + r.letters[:k]
    e = rotated[0][1]
    rest = Word(rotated[1:])
    # g^e * rest = 1
    return free_reduce(rest.inverse() if e == 1 else rest)


def solvable_relator(p, g):
    """Index of the first relator that can be solved for `g`, or None."""
    g = p.index(g)
    for i, r in enumerate(p.relators):
        if _solve_for(r, g) is not None:
            return i
    return None


def dedupe_relators(relators):
    """Drop trivial relators and those equivalent to an earlier one."""
    kept = []
    for r in relators:
        r = cyclic_reduce(r)
        if not r:
            continue
        if any(equivalent_relator(r, k) for k in kept):
            continue
        kept.append(r)
    return tuple(kept)


def eliminate_generator(p, g, defining):
    """Tietze move: solve relator `defining` for `g` and substitute everywhere.

    Relators that become trivial or duplicate an earlier relator (up to
    rotation and inversion) are dropped.
    """
    try:
        g = p.index(g)
    except ValidationError:
        raise NotSolvable(f"presentation has no generator {g!r}") from None
    if not 0 <= defining < len(p.relators):
        raise NotSolvable(f"no relator with index {defining}")
    solution = _solve_for(p.relators[defining], g)
    if solution is None:
        raise NotSolvable(
            f"relator {format_word(p.relators[defining], p.generators)} does not "
            f"isolate {p.generators[g]} exactly once"
        )
    mapping = {h: (h if h < g else h - 1, 1) for h in range(p.rank) if h != g}
    rels = []
    for i, r in enumerate(p.relators):
        if i == defining:
            continue
        rels.append(relabel(free_reduce(substitute(r, {g: solution})), mapping))
    gens = p.generators[:g] + p.generators[g + 1 :]
    return Presentation(gens, dedupe_relators(rels))


def simplify(p):
    """Repeatedly eliminate the highest-indexed solvable generator."""
    p = Presentation(p.generators, dedupe_relators(p.relators))
    while True:
        for g in reversed(range(p.rank)):
            idx = solvable_relator(p, g)
            if idx is not None:
                p = eliminate_generator(p, g, idx)
                break
        else:
            return p


def _relator_key(w):
    positive = 0
    for _, e in w.letters:
        if e != 1:
            break
        positive += 1
    return (positive, tuple((g, -e) for g, e in w.letters))


def canonical_relator(w):
    """Deterministic representative among rotations and inversions.

    Prefers the longest leading run of positive letters, so that a relation
    ``u = v`` with positive words shows up as ``u v^-1`` (``"babABA"``).
    """
    w = cyclic_reduce(w)
    if not w:
        return w
    candidates = list(rotations(w)) + list(rotations(w.inverse()))
    return max(candidates, key=_relator_key)


def canonicalize(p):
    return Presentation(p.generators, tuple(canonical_relator(r) for r in p.relators))


def match_presentations(p, q, allow_generator_inversion=False):
    """Find a generator renaming carrying the relators of `p` onto those of `q`.

    Relators are compared with :func:`equivalent_relator` and matched as
    multisets.  Returns the map ``index in p -> (index in q, sign)`` or None.
    """
    if p.rank != q.rank:
        return None
    prel = dedupe_relators(p.relators)
    qrel = dedupe_relators(q.relators)
    if len(prel) != len(qrel):
        return None
    signs = itertools.product((1, -1), repeat=p.rank) if allow_generator_inversion else [(1,) * p.rank]
    for sign in signs:
        for perm in itertools.permutations(range(q.rank)):
            mapping = {g: (perm[g], sign[g]) for g in range(p.rank)}
            moved = [relabel(r, mapping) for r in prel]
            unused = list(qrel)
            for r in moved:
                hit = next((k for k, s in enumerate(unused) if equivalent_relator(r, s)), None)
                if hit is None:
                    break
                unused.pop(hit)
            else:
                return mapping
    return None


def braid_presentation(n):
    """Artin presentation of the braid group on `n` strands."""
    if n < 2:
        raise ValidationError("braid group needs at least 2 strands")
    gens = tuple(f"s{i}" for i in range(1, n))
    rels = []
    for i in range(n - 2):
        x, y = Word.gen(i), Word.gen(i + 1)
        rels.append(x * y * x * (y * x * y).inverse())
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            rels.append(commutator(Word.gen(i), Word.gen(j)))
    return Presentation(gens, tuple(rels))
