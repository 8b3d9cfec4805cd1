"""Lower-bound stream generators and random fuzzing streams.

Gadget streams hide a permutation per stack in the micro-offsets of its
intervals; only the "good" interval of each stack is worth keeping, and
recovering it requires remembering its exact endpoints.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import Interval, make_interval, raw_contains, raw_intersects
from .general import Violation

HALF_OPEN = "[)"
OPENNESS = {"closed": "[]", "open": "()", "half-open": "[)", "right-closed": "(]"}
FAMILIES = ("uniform-general", "nested", "proper-shifted", "unit")
PROPER_FAMILIES = ("proper-shifted", "unit")

UNIT_BLOCK_SPACING = 4


@dataclass(frozen=True)
class StackSpec:
    n: int
    pi: tuple[int, ...]
    x: Fraction
    y: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a stack needs n >= 1")
        if sorted(self.pi) != list(range(1, self.n + 1)):
            raise ValueError(f"pi must be a permutation of 1..{self.n}")
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if not self.x < self.y:
            raise ValueError("need x < y")

    @property
    def lam(self) -> Fraction:
        return (self.y - self.x) / (2 * self.n - Fraction(1, 2))

    @property
    def eps(self) -> Fraction:
        return self.lam / (2 * self.n)

    def left(self, i: int) -> Fraction:
        return self.x + self.lam * (i - 1) + self.eps * self.pi[i - 1]

    def span(self, i: int) -> tuple[Fraction, Fraction]:
        lo = self.left(i)
        return lo, lo + self.lam * self.n


def make_stack(spec: StackSpec, start: int = 0) -> list[Interval]:
    """The n half-open stack intervals, arrival indices from ``start``."""
    return [
        make_interval(*spec.span(i), start + i - 1, HALF_OPEN)
        for i in range(1, spec.n + 1)
    ]


@dataclass(frozen=True)
class GadgetSecret:
    """The adversary's hidden choices, enough to rebuild the whole stream."""

    kind: str  # "unit-gadget" or "tree-gadget"
    n: int
    size: int  # blocks for the unit gadget, depth for the tree gadget
    perms: tuple[tuple[int, ...], ...]
    indices: tuple[int, ...]
    seed: int | None = None
    inset: bool = True

    def __post_init__(self):
        if len(self.perms) != len(self.indices):
            raise ValueError("one permutation per index")
        for pi, i in zip(self.perms, self.indices):
            if sorted(pi) != list(range(1, self.n + 1)):
                raise ValueError(f"{pi} is not a permutation of 1..{self.n}")
            if not 1 <= i <= self.n:
                raise ValueError(f"index {i} outside 1..{self.n}")

    @property
    def phases(self) -> int:
        return len(self.indices)


def _draw(rng: random.Random, n: int, phases: int):
    perms, indices = [], []
    for _ in range(phases):
        perms.append(tuple(rng.sample(range(1, n + 1), n)))
        indices.append(rng.randint(1, n))
    return tuple(perms), tuple(indices)


# -- unit gadget -------------------------------------------------------------

@dataclass
class _Layout:
    """Positions of each gadget part inside the stream."""

    stacks: list = field(default_factory=list)  # (StackSpec, good index, first position)
    aux: list = field(default_factory=list)  # (position, (lo, hi))
    children: dict = field(default_factory=dict)  # phase -> (left phase|aux pos, right ...)
    sigmas: dict = field(default_factory=dict)  # phase -> ((lo, hi), (lo, hi))


def _unit_layout(secret: GadgetSecret):
    n = secret.n
    layout = _Layout()
    spans = []
    for t, (pi, i) in enumerate(zip(secret.perms, secret.indices)):
        x = Fraction(UNIT_BLOCK_SPACING * t)
        spec = StackSpec(n, pi, x, x + 2 - Fraction(1, 2 * n))
        layout.stacks.append((spec, i, len(spans)))
        spans.extend((spec.span(j), HALF_OPEN) for j in range(1, n + 1))
        a = x + Fraction(i - 1, n)
        b = x + (i - Fraction(1, 2)) / n
        layout.aux.append((len(spans), (a - 1, a)))
        spans.append(((a - 1, a), HALF_OPEN))
        layout.aux.append((len(spans), (b + 1, b + 2)))
        spans.append(((b + 1, b + 2), HALF_OPEN))
    return layout, spans


def gen_unit_gadget(blocks: int, n: int, seed=None):
    """Unit-interval gadget: per block a unit stack then its L and R intervals."""
    if blocks < 1:
        raise ValueError("need at least one block")
    if n < 2:
        raise ValueError("need n >= 2")
    perms, indices = _draw(random.Random(seed), n, blocks)
    secret = GadgetSecret("unit-gadget", n, blocks, perms, indices, seed)
    return build_stream(secret), secret


def decode_unit_good(good: Interval, block: int, n: int, index: int) -> int:
    """Recover pi(index) from the good interval's left endpoint."""
    x = Fraction(UNIT_BLOCK_SPACING * block)
    lam = Fraction(1, n)
    eps = lam / (2 * n)
    value = (good.left - x - lam * (index - 1)) / eps
    if value.denominator != 1:
        raise ValueError(f"{good} does not encode an integer offset")
    return int(value)


# -- tree gadget -------------------------------------------------------------

def _tree_layout(secret: GadgetSecret):
    n, depth = secret.n, secret.size
    layout = _Layout()
    spans: list = []
    aux_segments: list = []
    counter = iter(range(secret.phases))

    def deploy(level: int, x: Fraction, y: Fraction) -> int:
        t = next(counter)
        pi, i = secret.perms[t], secret.indices[t]
        spec = StackSpec(n, pi, x, y)
        layout.stacks.append((spec, i, len(spans)))
        spans.extend((spec.span(j), HALF_OPEN) for j in range(1, n + 1))
        lam = spec.lam
        sl = (x + lam * (i - Fraction(3, 2)), x + lam * (i - 1))
        sr = (x + lam * (i + n - Fraction(1, 2)), x + lam * (i + n))
        layout.sigmas[t] = (sl, sr)
        kids = []
        for seg in (sl, sr):
            if level + 1 == depth:
                kids.append(("aux", len(aux_segments)))
                aux_segments.append(seg)
            else:
                a, b = _inset(seg, n) if secret.inset else seg
                kids.append(("stack", deploy(level + 1, a, b)))
        layout.children[t] = tuple(kids)
        return t

    deploy(0, Fraction(0), Fraction(1))
    base = len(spans)
    for k, seg in enumerate(aux_segments):
        layout.aux.append((base + k, seg))
        spans.append((seg, HALF_OPEN))
    return layout, spans


def _inset(seg, n: int):
    # Shrink by half a child-lambda on each side: the child's own children
    # may sit up to that far outside the child's deployment segment.
    a, b = seg
    delta = (b - a) / (4 * n + 1)
    return a + delta, b - delta


def gen_tree_gadget(depth: int, n: int, seed=None, inset: bool = True):
    """Binary-tree gadget: 2^depth - 1 stacks in pre-order, then leaf auxiliaries.

    With ``inset`` (the default) each child stack is deployed in its segment
    shrunk by half its own lambda per side, which keeps every subtree inside
    the segment its parent reserved for it.  ``inset=False`` places children
    exactly on the reserved segments.
    """
    if depth < 1:
        raise ValueError("need depth >= 1")
    if n < 2:
        raise ValueError("need n >= 2")
    perms, indices = _draw(random.Random(seed), n, 2**depth - 1)
    secret = GadgetSecret("tree-gadget", n, depth, perms, indices, seed, inset)
    return build_stream(secret), secret


def _layout(secret: GadgetSecret):
    if secret.kind == "unit-gadget":
        return _unit_layout(secret)
    if secret.kind == "tree-gadget":
        if secret.phases != 2**secret.size - 1:
            raise ValueError("tree secret needs 2^depth - 1 phases")
        return _tree_layout(secret)
    raise ValueError(f"unknown gadget kind {secret.kind!r}")


def build_stream(secret: GadgetSecret) -> list[Interval]:
    _, spans = _layout(secret)
    return [make_interval(lo, hi, t, br) for t, ((lo, hi), br) in enumerate(spans)]


def good_intervals(stream: Sequence[Interval], secret: GadgetSecret) -> list[Interval]:
    layout, _ = _layout(secret)
    return [stream[first + i - 1] for _, i, first in layout.stacks]


def auxiliary_intervals(stream: Sequence[Interval], secret: GadgetSecret) -> list[Interval]:
    layout, _ = _layout(secret)
    return [stream[pos] for pos, _ in layout.aux]


def gadget_optimum_bound(secret: GadgetSecret) -> int:
    """Size of the planted solution: good intervals plus auxiliaries."""
    if secret.kind == "unit-gadget":
        return 3 * secret.size
    return 2 ** (secret.size + 1) - 1


# -- verification ------------------------------------------------------------

def verify_gadget(stream: Sequence[Interval], secret: GadgetSecret) -> list[Violation]:
    """Check a gadget stream against the secret it claims to realise."""
    layout, spans = _layout(secret)
    stream = list(stream)
    if len(stream) != len(spans):
        return [Violation("length", f"expected {len(spans)} intervals, got {len(stream)}")]

    report = []
    expected = [((lo, hi), br) for (lo, hi), br in spans]
    actual = [((iv.left, iv.right), _brackets(iv)) for iv in stream]
    if actual != expected:
        if sorted(actual) == sorted(expected):
            report.append(Violation("order", "stream holds the right intervals in the wrong order"))
        else:
            for pos, (got, want) in enumerate(zip(actual, expected)):
                if got != want:
                    report.append(Violation("geometry", f"position {pos}: {got} != {want}"))

    if secret.kind == "unit-gadget":
        report.extend(_unit_relations(stream, layout, secret.n))
    else:
        report.extend(_tree_relations(stream, layout, secret.n))
    return report


def _brackets(iv: Interval) -> str:
    return ("[" if iv.lo.closed else "(") + ("]" if iv.hi.closed else ")")


def _unit_relations(stream, layout, n):
    out = []
    for t, (spec, i, first) in enumerate(layout.stacks):
        left_aux = stream[layout.aux[2 * t][0]]
        right_aux = stream[layout.aux[2 * t + 1][0]]
        for j in range(1, n + 1):
            iv = stream[first + j - 1]
            hits = raw_intersects(iv, left_aux) + raw_intersects(iv, right_aux)
            if j == i and hits:
                out.append(Violation("good", f"block {t}: good interval {iv} meets an auxiliary"))
            if j != i and hits != 1:
                out.append(Violation("stack", f"block {t}: {iv} meets {hits} auxiliaries"))
    return out


def _tree_relations(stream, layout, n):
    out = []
    stacks = {t: entry for t, entry in enumerate(layout.stacks)}
    aux_pos = [pos for pos, _ in layout.aux]

    def subtree(kid):
        kind, ref = kid
        if kind == "aux":
            return [stream[aux_pos[ref]]]
        spec, i, first = stacks[ref]
        found = list(stream[first:first + n])
        for k in layout.children[ref]:
            found.extend(subtree(k))
        return found

    prev_first = -1
    for t, (spec, i, first) in stacks.items():
        if first <= prev_first:
            out.append(Violation("order", f"stack {t} precedes its pre-order predecessor"))
        prev_first = first
        members = stream[first:first + n]
        good = members[i - 1]
        (sl_lo, sl_hi), (sr_lo, sr_hi) = layout.sigmas[t]
        chain = [sl_lo < sl_hi <= good.left, good.right <= sr_lo < sr_hi]
        if i > 1:
            chain.append(members[i - 2].left <= sl_lo)
        if i < n:
            chain.append(sr_hi <= members[i].right)
        if not all(chain):
            out.append(Violation("chain", f"stack {t}: child segments are misplaced"))
        left_kid, right_kid = layout.children[t]
        below_left, below_right = subtree(left_kid), subtree(right_kid)
        for iv in below_left + below_right:
            if raw_intersects(good, iv):
                out.append(Violation("good", f"stack {t}: good {good} meets descendant {iv}"))
        for j, iv in enumerate(members, start=1):
            if j == i:
                continue
            side = below_left if j < i else below_right
            if any(raw_contains(iv, d) == "none" for d in side):
                out.append(Violation("stack", f"stack {t}: {iv} misses part of a child subtree"))

    aux = [stream[p] for p in aux_pos]
    for a, b in zip(aux, aux[1:]):
        if raw_intersects(a, b) or not a.right <= b.left:
            out.append(Violation("aux", f"auxiliaries {a} and {b} are not disjoint and ordered"))
    return out


# -- random streams ----------------------------------------------------------

def gen_random(count: int, family: str = "uniform-general", seed=None, openness: str | None = None) -> list[Interval]:
    """Seeded random stream with deliberately colliding endpoints.

    ``openness`` is one of ``closed``, ``open``, ``half-open``,
    ``right-closed`` or ``mixed``; proper families need a single openness,
    since ``[0, 1)`` sits properly inside ``[0, 1]``.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    rng = random.Random(seed)
    if openness is None:
        openness = "half-open" if family in PROPER_FAMILIES else "mixed"
    if openness == "mixed":
        if family in PROPER_FAMILIES:
            raise ValueError("proper families need a single openness")
        brackets = None
    elif openness in OPENNESS:
        brackets = OPENNESS[openness]
    else:
        raise ValueError(f"unknown openness {openness!r}")

    spans = _FAMILY_SPANS[family](rng, count)
    out = []
    for t, (lo, hi) in enumerate(spans):
        br = brackets or rng.choice(tuple(OPENNESS.values()))
        out.append(make_interval(lo, hi, t, br))
    return out


def _grid(rng, count):
    # a coarse integer grid keeps endpoint collisions frequent
    return max(4, count // 3)


def _uniform_spans(rng, count):
    g = _grid(rng, count)
    spans = []
    for _ in range(count):
        a, b = rng.sample(range(2 * g + 1), 2)
        lo, hi = sorted((a, b))
        spans.append((lo, hi))
    return spans


def _nested_spans(rng, count):
    g = _grid(rng, count)
    centres = [rng.randint(0, 2 * g) for _ in range(max(1, count // 6))]
    spans = []
    for _ in range(count):
        c = rng.choice(centres)
        r = rng.randint(1, g)
        spans.append((c - r, c + r))
    return spans


def _proper_spans(rng, count):
    g = _grid(rng, count)
    lefts = sorted(set(rng.randint(0, 2 * g) for _ in range(max(1, count))))
    rights = []
    for lo in lefts:
        floor = lo + rng.randint(1, 4)
        if rights:
            floor = max(floor, rights[-1] + rng.randint(1, 2))
        rights.append(floor)
    pairs = list(zip(lefts, rights))
    return [rng.choice(pairs) for _ in range(count)]


def _unit_spans(rng, count):
    # equal lengths of 4 on the integer grid: quarter steps without Fractions
    g = _grid(rng, count)
    spans = []
    for _ in range(count):
        lo = rng.randint(0, 4 * g)
        spans.append((lo, lo + 4))
    return spans


_FAMILY_SPANS = {
    "uniform-general": _uniform_spans,
    "nested": _nested_spans,
    "proper-shifted": _proper_spans,
    "unit": _unit_spans,
}
