"""Planar-diagram (PD) codes, Wirtinger presentations and the built-in catalog.

A crossing ``X(a,b,c,d)`` lists its four edge labels counterclockwise,
starting from the incoming under-strand: the under-strand runs ``a -> c``
and the over-strand joins ``b`` and ``d``.  The crossing is positive when
the over-strand runs ``d -> b`` and negative when it runs ``b -> d``.

Text format::

    # trefoil
    X(1,4,2,5); X(3,6,4,1)
    X(5,2,6,3;-)

Tokens are separated by ``;`` or newlines, ``#`` starts a comment and an
optional ``;+``/``;-`` inside the parentheses fixes the crossing sign.  A
crossingless unknotted component is written ``O(k)``.
"""

import re
import string
from dataclasses import dataclass, field
from typing import Optional

from .errors import ArcCountMismatch, EmptyInput, MalformedToken, UnknownName
from .fpgroup import Presentation, Word

_TOKEN = re.compile(r"([XxOo])\s*\(([^()]*)\)|([;,\s]+)|(.)")
_SIGNS = {"+": 1, "-": -1, "−": -1, "+1": 1, "-1": -1}

# exit slot for each entry slot
_OPPOSITE = (2, 3, 0, 1)


@dataclass(frozen=True)
class Crossing:
    labels: tuple
    sign: int

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if self.sign not in (1, -1):
            raise MalformedToken(f"crossing sign must be +1 or -1, got {self.sign}")

    @property
    def under_in(self):
        return self.labels[0]

    @property
    def under_out(self):
        return self.labels[2]

    @property
    def over(self):
        return (self.labels[1], self.labels[3])


@dataclass(frozen=True)
class PDCode:
    """Validated PD code with labels ``1..arc_count``.

    ``component_of[label - 1]`` is the link component containing the edge;
    ``loops`` holds the labels of crossingless components.
    """

    crossings: tuple
    arc_count: int
    component_of: tuple
    loops: tuple = ()

    @property
    def num_components(self):
        return max(self.component_of) + 1 if self.component_of else 0

    def __str__(self):
        return serialize(self)

    def wirtinger_arcs(self):
        """Classes of edge labels joined by over-strands (the Wirtinger arcs).

        Each class is a sorted tuple of labels; classes are ordered by their
        smallest label.
        """
        parent = list(range(self.arc_count + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in self.crossings:
            b, d = c.over
            rb, rd = find(b), find(d)
            if rb != rd:
                parent[max(rb, rd)] = min(rb, rd)
        classes = {}
        for label in range(1, self.arc_count + 1):
            classes.setdefault(find(label), []).append(label)
        return sorted((tuple(v) for v in classes.values()), key=lambda t: t[0])


def _parse_crossing(body, raw):
    parts = body.split(";")
    if len(parts) > 2:
        raise MalformedToken(f"too many fields in {raw!r}")
    nums = [s.strip() for s in parts[0].split(",")]
    if len(nums) != 4 or not all(n.isdigit() for n in nums):
        raise MalformedToken(f"expected four positive integers in {raw!r}")
    labels = tuple(int(n) for n in nums)
    if min(labels) < 1:
        raise MalformedToken(f"labels must be >= 1 in {raw!r}")
    sign = None
    if len(parts) == 2:
        s = parts[1].strip()
        if s not in _SIGNS:
            raise MalformedToken(f"bad sign {s!r} in {raw!r}")
        sign = _SIGNS[s]
    return labels, sign


def parse_pd(text):
    """Parse PD text into a :class:`PDCode`.

    Labels are renumbered ``1..n`` in order of first appearance.  Unsigned
    crossings get their sign from the orientation obtained by walking each
    component along its under-passages (``a -> c``).
    """
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    raw_crossings, raw_loops = [], []
    for m in _TOKEN.finditer(text):
        kind, body, sep, bad = m.groups()
        if sep is not None:
            continue
        if bad is not None:
            raise MalformedToken(f"unexpected text {text[m.start():m.start() + 20]!r}")
        if kind in "Xx":
            raw_crossings.append(_parse_crossing(body, m.group(0)))
        else:
            b = body.strip()
            if not b.isdigit() or int(b) < 1:
                raise MalformedToken(f"expected O(k) with k >= 1, got {m.group(0)!r}")
            raw_loops.append(int(b))
    if not raw_crossings and not raw_loops:
        raise EmptyInput("no crossings or loops in PD text")

    order = {}
    for labels, _ in raw_crossings:
        for x in labels:
            order.setdefault(x, len(order) + 1)
    counts = {}
    for labels, _ in raw_crossings:
        for x in labels:
            counts[x] = counts.get(x, 0) + 1
    bad = {x: n for x, n in counts.items() if n != 2}
    if bad:
        raise ArcCountMismatch(f"labels not appearing exactly twice: {bad}")
    for x in raw_loops:
        if x in order:
            raise ArcCountMismatch(f"loop label {x} also used by a crossing")
        if raw_loops.count(x) != 1:
            raise ArcCountMismatch(f"loop label {x} repeated")
        order[x] = len(order) + 1

    crossings = [(tuple(order[x] for x in labels), sign) for labels, sign in raw_crossings]
    loops = tuple(order[x] for x in raw_loops)
    return _build(crossings, len(order), loops)


def _components(crossings, arc_count, loops):
    parent = list(range(arc_count + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for labels, _ in crossings:
        for s, t in ((0, 2), (1, 3)):
            rs, rt = find(labels[s]), find(labels[t])
            if rs != rt:
                parent[max(rs, rt)] = min(rs, rt)
    roots = {}
    comp = []
    for label in range(1, arc_count + 1):
        r = find(label)
        roots.setdefault(r, len(roots))
        comp.append(roots[r])
    return tuple(comp)


def _derive_signs(crossings, component_of):
    """Fill in missing signs by walking each component in its orientation."""
    occurrences = {}
    for i, (labels, _) in enumerate(crossings):
        for s, x in enumerate(labels):
            occurrences.setdefault(x, []).append((i, s))

    signs = [sign for _, sign in crossings]
    if all(s is not None for s in signs):
        return signs

    def other(i, s):
        x = crossings[i][0][s]
        a, b = occurrences[x]
        return b if a == (i, s) else a

    ncomp = max(component_of) + 1 if component_of else 0
    starts = {}
    for i, (labels, _) in enumerate(crossings):
        starts.setdefault(component_of[labels[0] - 1], (i, 0))
    for i, (labels, _) in enumerate(crossings):
        # components that never pass under: enter the first over-passage at b
        starts.setdefault(component_of[labels[1] - 1], (i, 1))

    for comp in range(ncomp):
        if comp not in starts:
            continue
        start = starts[comp]
        entry = start
        while True:
            i, s = entry
            exit_slot = _OPPOSITE[s]
            if s == 2:
                raise MalformedToken(
                    f"crossing {i + 1}: under-strand enters at the third slot; "
                    "orientation inconsistent with the a->c convention"
                )
            if s in (1, 3) and signs[i] is None:
                signs[i] = 1 if s == 3 else -1
            entry = other(i, exit_slot)
            if entry == start:
                break
    return signs


def _build(crossings, arc_count, loops=()):
    component_of = _components(crossings, arc_count, loops)
    signs = _derive_signs(crossings, component_of)
    xs = tuple(Crossing(labels, sign) for (labels, _), sign in zip(crossings, signs))
    return PDCode(xs, arc_count, component_of, tuple(loops))


def pd_from_tuples(tuples, signs=None, loops=()):
    """Build a :class:`PDCode` from 4-tuples without text parsing or renumbering."""
    signs = signs or [None] * len(tuples)
    crossings = [(tuple(t), s) for t, s in zip(tuples, signs)]
    labels = [x for t in tuples for x in t] + list(loops)
    n = len(set(labels))
    if sorted(set(labels)) != list(range(1, n + 1)):
        raise ArcCountMismatch("labels must be exactly 1..n")
    for x in set(x for t in tuples for x in t):
        if labels.count(x) != 2:
            raise ArcCountMismatch(f"label {x} does not appear exactly twice")
    return _build(crossings, n, tuple(loops))


def serialize(pd):
    parts = [
        "X({},{},{},{};{})".format(*c.labels, "+" if c.sign == 1 else "-") for c in pd.crossings
    ]
    parts.extend(f"O({x})" for x in pd.loops)
    return "; ".join(parts)


def _generator_names(n):
    return tuple(string.ascii_lowercase[k] if k < 26 else f"g{k}" for k in range(n))


def wirtinger_presentation(pd):
    """One generator per Wirtinger arc, one conjugation relator per crossing.

    At a crossing with over-arc ``x``, incoming under-arc ``y`` and outgoing
    under-arc ``z`` the relation is ``z = x^-1 y x`` for a positive crossing and
    ``z = x y x^-1`` for a negative one.
    """
    arcs = pd.wirtinger_arcs()
    arc_of = {}
    for k, cls in enumerate(arcs):
        for label in cls:
            arc_of[label] = k
    rels = []
    for c in pd.crossings:
        x = Word.gen(arc_of[c.labels[1]])
        y_in = Word.gen(arc_of[c.under_in])
        y_out = Word.gen(arc_of[c.under_out])
        conj = x.inverse() * y_in * x if c.sign == 1 else x * y_in * x.inverse()
        rels.append(y_out.inverse() * conj)
    return Presentation(_generator_names(len(arcs)), tuple(rels))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    pd: PDCode
    expected_presentation: Presentation
    crossing_counts: Optional[tuple] = None
    description: str = field(default="", compare=False)


_CATALOG_DATA = {
    "trefoil": (
        "X(1,4,2,5); X(3,6,4,1); X(5,2,6,3)",
        (("a", "b"), ["babABA"]),
        None,
        "trefoil knot 3_1",
    ),
    "figure8": (
        "X(4,2,5,1); X(8,6,1,5); X(6,3,7,4); X(2,7,3,8)",
        (("a", "b"), ["baBabABaBA"]),
        None,
        "figure-eight knot 4_1",
    ),
    "hopf": (
        "X(4,1,3,2); X(2,3,1,4)",
        (("a", "b"), ["abAB"]),
        (1, 1),
        "Hopf link L2a1",
    ),
    "whitehead": (
        "X(6,1,7,2); X(10,7,5,8); X(4,5,1,6); X(2,10,3,9); X(8,4,9,3)",
        # [x,y][x,y^-1][x^-1,y^-1][x^-1,y]
        (("x", "y"), ["xyXY" "xYXy" "XYxy" "XyxY"]),
        (2, 2),
        "Whitehead link L5a1",
    ),
    "unknot": ("O(1)", (("a",), []), None, "unknot, no crossings"),
    "unlink2": ("O(1); O(2)", (("a", "b"), []), (0, 0), "two-component unlink"),
}

CATALOG_NAMES = tuple(_CATALOG_DATA)


def catalog(name):
    try:
        text, (gens, rels), counts, desc = _CATALOG_DATA[name]
    except KeyError:
        raise UnknownName(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}") from None
    return CatalogEntry(
        name=name,
        pd=parse_pd(text),
        expected_presentation=Presentation.from_strings(gens, rels),
        crossing_counts=counts,
        description=desc,
    )
