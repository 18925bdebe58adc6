"""Permutation combinatorics: rank functions, diagrams, essential sets,
vexillarity, shapes and flagging sets.

Permutations use one-line notation over {1..n}: ``Permutation((2, 4, 1, 3))``
is the map 1->2, 2->4, 3->1, 4->3.  All functions are pure and cached where
it pays off; everything is safe for concurrent use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence


class NotVexillaryError(ValueError):
    pass


class FlaggingError(ValueError):
    pass


class Box(NamedTuple):
    """A grid position; ``p`` is the row, ``q`` the column, both 1-based."""
    p: int
    q: int


@dataclass(frozen=True)
class Permutation:
    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(self.word)
        object.__setattr__(self, "word", word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"{word} is not a permutation of 1..{len(word)}")

    @property
    def n(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        return self.word[i - 1]

    def inverse_word(self) -> tuple[int, ...]:
        inv = [0] * self.n
        for i, v in enumerate(self.word):
            inv[v - 1] = i + 1
        return tuple(inv)

    def __str__(self):
        return ",".join(str(v) for v in self.word)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing nonnegative parts; trailing zeros are allowed and
    meaningful (they extend a flagging set with empty rows)."""
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be nonnegative")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"{parts} is not weakly decreasing")

    def size(self) -> int:
        return sum(self.parts)

    def nonzero_length(self) -> int:
        return sum(1 for p in self.parts if p)

    def part(self, i: int) -> int:
        """The i-th part, 1-based, zero beyond the stored length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def cells(self) -> list[tuple[int, int]]:
        return [(r, c) for r, p in enumerate(self.parts, 1)
                for c in range(1, p + 1)]

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class FlaggingSet:
    """An ordered list of boxes (p_i, q_i) with cached ranks r_i."""
    boxes: tuple[Box, ...]
    ranks: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.boxes)

    def row_flags(self) -> tuple[int, ...]:
        return tuple(box.p for box in self.boxes)

    def __str__(self):
        return ",".join(f"{p}:{q}" for p, q in self.boxes)


# -- parsing ----------------------------------------------------------------

def parse_permutation(text: str) -> Permutation:
    """Parse one-line notation, comma or whitespace separated ("2,4,1,3")."""
    pieces = text.replace(",", " ").split()
    if not pieces:
        raise ValueError("empty permutation")
    try:
        word = tuple(int(p) for p in pieces)
    except ValueError:
        raise ValueError(f"cannot parse permutation from {text!r}") from None
    return Permutation(word)


def parse_flagging(text: str) -> list[Box]:
    """Parse a candidate flagging "p1:q1,p2:q2,...". Empty string -> []."""
    text = text.strip()
    if not text:
        return []
    boxes = []
    for chunk in text.split(","):
        p, _, q = chunk.partition(":")
        try:
            boxes.append(Box(int(p), int(q)))
        except ValueError:
            raise ValueError(f"cannot parse flagging entry {chunk!r}") from None
    return boxes


# -- basic statistics --------------------------------------------------------

def rank(w: Permutation, p: int, q: int) -> int:
    """#{i <= p : w(i) <= q}, the rank function of the permutation matrix."""
    if not (1 <= p <= w.n and 1 <= q <= w.n):
        raise ValueError(f"rank position ({p},{q}) outside 1..{w.n}")
    word = w.word
    return sum(1 for i in range(p) if word[i] <= q)


def length(w: Permutation) -> int:
    """Number of inversions.

    >>> length(Permutation((2, 4, 1, 3)))
    3
    """
    word = w.word
    n = len(word)
    return sum(1 for i in range(n) for j in range(i + 1, n)
               if word[i] > word[j])


@lru_cache(maxsize=None)
def diagram(w: Permutation) -> frozenset[Box]:
    """Boxes (p, q) with w(p) > q and w^{-1}(q) > p; there are length(w)
    of them.

    >>> sorted(diagram(Permutation((2, 4, 1, 3))))
    [Box(p=1, q=1), Box(p=2, q=1), Box(p=2, q=3)]
    """
    word = w.word
    inv = w.inverse_word()
    return frozenset(Box(p, q)
                     for p in range(1, w.n + 1)
                     for q in range(1, w.n + 1)
                     if word[p - 1] > q and inv[q - 1] > p)


@lru_cache(maxsize=None)
def essential_set(w: Permutation) -> frozenset[Box]:
    """The south-east corners of the diagram: boxes whose rank conditions
    generate all the others.

    >>> sorted(essential_set(Permutation((2, 4, 1, 3))))
    [Box(p=2, q=1), Box(p=2, q=3)]
    """
    word = w.word
    inv = w.inverse_word()
    out = []
    for p in range(1, w.n):
        for q in range(1, w.n):
            if (word[p - 1] > q and word[p] <= q
                    and inv[q - 1] > p and inv[q] <= p):
                out.append(Box(p, q))
    return frozenset(out)


def _is_vexillary_pattern(w: Permutation) -> bool:
    word = w.word
    n = len(word)
    for a in range(n):
        for bb in range(a + 1, n):
            if word[bb] >= word[a]:
                continue
            for c in range(bb + 1, n):
                if word[c] <= word[a]:
                    continue
                for d in range(c + 1, n):
                    if word[a] < word[d] < word[c]:
                        return False
    return True


def _is_vexillary_essential(w: Permutation) -> bool:
    # South-east corners must run weakly from north-east to south-west: no
    # essential box strictly south *and* strictly east of another.
    boxes = sorted(essential_set(w))
    for i, (p, q) in enumerate(boxes):
        for p2, q2 in boxes[i + 1:]:
            if p2 > p and q2 > q:
                return False
    return True


@lru_cache(maxsize=None)
def is_vexillary(w: Permutation) -> bool:
    """True iff the one-line word has no 2143 pattern: no a<b<c<d with
    w(b) < w(a) < w(d) < w(c).

    >>> is_vexillary(Permutation((2, 1, 4, 3)))
    False
    >>> is_vexillary(Permutation((2, 4, 1, 3)))
    True
    """
    result = _is_vexillary_pattern(w)
    if __debug__:
        alt = _is_vexillary_essential(w)
        assert alt == result, (
            f"vexillarity tests disagree on {w}: pattern={result}, "
            f"essential-set={alt}")
    return result


@lru_cache(maxsize=None)
def shape(w: Permutation) -> Partition:
    """The partition whose k-th diagonal matches the k-th diagonal of the
    diagram (only defined for vexillary permutations).

    >>> shape(Permutation((2, 4, 1, 3)))
    Partition(parts=(2, 1))
    """
    if not is_vexillary(w):
        raise NotVexillaryError(f"{w} contains a 2143 pattern")
    counts: dict[int, int] = {}
    for p, q in diagram(w):
        counts[q - p] = counts.get(q - p, 0) + 1
    parts = []
    row = 1
    while True:
        lam = 0
        for k, c in counts.items():
            start = max(1, 1 - k)
            if start <= row < start + c:
                lam += 1
        if lam == 0:
            break
        parts.append(lam)
        row += 1
    part = Partition(tuple(parts))
    # Diagonal counts of a genuine partition must reproduce the input.
    if __debug__:
        back: dict[int, int] = {}
        for r, c in part.cells():
            back[c - r] = back.get(c - r, 0) + 1
        assert back == counts, f"diagonal counts do not form a partition for {w}"
        assert part.size() == length(w)
    return part


def shape_position(w: Permutation, box: Box) -> Box:
    """Where a diagram box lands inside the shape: both coordinates drop by
    the rank at the box.  Bijective from the diagram onto the shape's cells;
    essential boxes land on south-east corners.
    """
    if box not in diagram(w):
        raise ValueError(f"{box} is not in the diagram of {w}")
    r = rank(w, box.p, box.q)
    return Box(box.p - r, box.q - r)


# -- flagging sets -----------------------------------------------------------

def _essential_positions(w: Permutation) -> dict[int, Box]:
    """Map i -> essential box forced at position i (i = p - rank)."""
    forced: dict[int, Box] = {}
    for box in essential_set(w):
        i = box.p - rank(w, box.p, box.q)
        if i in forced:
            raise FlaggingError(
                f"two essential boxes of {w} share position {i}")
        forced[i] = box
    return forced


def is_flagging_set(w: Permutation, candidate: Sequence[Box | tuple[int, int]]) -> bool:
    """Check the three flagging conditions: weakly increasing rows with
    weakly decreasing columns, containment of the essential set, and
    p_i - r_i = i for every entry.

    >>> w = Permutation((2, 4, 1, 3))
    >>> is_flagging_set(w, [(2, 3), (2, 1)])
    True
    >>> is_flagging_set(w, [(2, 1), (2, 3)])
    False
    """
    if not is_vexillary(w):
        raise NotVexillaryError(f"{w} contains a 2143 pattern")
    boxes = [Box(p, q) for p, q in candidate]
    n = w.n
    if any(not (1 <= p <= n and 1 <= q <= n) for p, q in boxes):
        return False
    for (p1, q1), (p2, q2) in zip(boxes, boxes[1:]):
        if p1 > p2 or q1 < q2:
            return False
    if not essential_set(w) <= set(boxes):
        return False
    for i, (p, q) in enumerate(boxes, 1):
        if p - rank(w, p, q) != i:
            return False
    if __debug__:
        lam = shape(w)
        for i, (p, q) in enumerate(boxes, 1):
            assert lam.part(i) == q - p + i, (
                f"flagging of {w} violates shape identity at row {i}")
    return True


def _position_candidates(w: Permutation) -> dict[int, list[Box]]:
    """All grid boxes grouped by their position index p - r_w(p, q)."""
    out: dict[int, list[Box]] = {}
    for p in range(1, w.n + 1):
        for q in range(1, w.n + 1):
            i = p - rank(w, p, q)
            if i >= 1:
                out.setdefault(i, []).append(Box(p, q))
    for lst in out.values():
        lst.sort()
    return out


def enumerate_flaggings(w: Permutation, d: int) -> list[FlaggingSet]:
    """All flagging sets of size ``d`` inside the n-by-n grid, in
    lexicographic order of the flattened (p1, q1, p2, q2, ...) tuple.
    """
    if not is_vexillary(w):
        raise NotVexillaryError(f"{w} contains a 2143 pattern")
    forced = _essential_positions(w)
    if forced and max(forced) > d:
        raise FlaggingError(
            f"flagging length {d} is below essential position {max(forced)}")
    if d == 0:
        return [FlaggingSet((), ())]
    candidates = _position_candidates(w)
    results: list[FlaggingSet] = []
    chosen: list[Box] = []

    def extend(i: int):
        if i > d:
            results.append(FlaggingSet(
                tuple(chosen),
                tuple(rank(w, p, q) for p, q in chosen)))
            return
        pool = [forced[i]] if i in forced else candidates.get(i, [])
        for box in pool:
            if chosen:
                prev = chosen[-1]
                if box.p < prev.p or box.q > prev.q:
                    continue
            chosen.append(box)
            extend(i + 1)
            chosen.pop()

    extend(1)
    if __debug__:
        for f in results:
            assert is_flagging_set(w, f.boxes)
    return results


@lru_cache(maxsize=None)
def canonical_flagging(w: Permutation) -> FlaggingSet:
    """The lexicographically least flagging set whose length is the number
    of nonzero parts of the shape.  Existence is checked by exhaustive
    search; a miss raises loudly rather than being papered over.
    """
    d = shape(w).nonzero_length()
    found = enumerate_flaggings(w, d)
    if not found:
        raise FlaggingError(f"no flagging set of length {d} exists for {w}")
    return found[0]


# -- iteration helpers --------------------------------------------------------

def all_permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic one-line order."""
    for word in itertools.permutations(range(1, n + 1)):
        yield Permutation(word)


def vexillary_permutations(n: int) -> Iterator[Permutation]:
    return (w for w in all_permutations(n) if is_vexillary(w))
