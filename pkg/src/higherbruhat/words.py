"""
Reduced words, commutation classes, and the directed braid graph.

Words are tuples of residues in {0, ..., n-1}.  A commutation swaps adjacent
letters i, j with j ≢ i, i±1 (mod n); a braid rewrites i (i+1) i in
consecutive positions to (i+1) i (i+1) (indices mod n) or back.  The directed
braid graph has one node per commutation class and an arc for each braid in
the i (i+1) i -> (i+1) i (i+1) direction.

S̃_2 is the infinite dihedral group: it has no commutation or braid
relations, so for n = 2 no moves are ever generated.
"""
from __future__ import annotations

from dataclasses import dataclass

from .affine import AffinePermutation, identity, simple
from .digraph import Digraph


class WordError(ValueError):
    """Raised for malformed or non-reduced words where reducedness is required."""


def parse_word(n: int, text: str) -> tuple[int, ...]:
    """Parse a word from text, normalizing letters modulo n.

    Compact digit strings are accepted for n <= 10 (the display convention
    writing the letter n for s_0 is normalized on read, so for n = 4 both
    "0121032" and "4121432" parse to the same word).  Comma-separated letters
    are accepted for any n and required for n > 10.

    >>> parse_word(4, "4121432") == parse_word(4, "0121032")
    True
    """
    text = text.strip()
    if "," in text:
        letters = tuple(int(part) % n for part in text.split(","))
    else:
        if n > 10:
            raise WordError(f"for n > 10 use comma-separated letters: {text!r}")
        if not text.isdigit():
            raise WordError(f"cannot parse word text: {text!r}")
        letters = tuple(int(ch) % n for ch in text)
    return letters


def format_word(n: int, letters) -> str:
    if n <= 10:
        return "".join(str(ch) for ch in letters)
    return ",".join(str(ch) for ch in letters)


def apply_word(n: int, letters) -> AffinePermutation:
    """The product s_{i_1} ... s_{i_l} for the letter sequence i_1 ... i_l."""
    w = identity(n)
    for i in letters:
        w = w.times_simple(i)
    return w


def is_reduced(n: int, letters) -> bool:
    return apply_word(n, letters).length == len(letters)


def reduced_words(w: AffinePermutation) -> set[tuple[int, ...]]:
    """All reduced words for w, by recursive descent over right descents."""
    out: set[tuple[int, ...]] = set()
    suffix: list[int] = []

    def descend(v: AffinePermutation):
        if v.length == 0:
            out.add(tuple(reversed(suffix)))
            return
        for i in v.right_descents():
            suffix.append(i)
            descend(v.times_simple(i))
            suffix.pop()

    descend(w)
    return out


def count_reduced_words(w: AffinePermutation) -> int:
    """|R(w)| without materializing the words (memoized descent)."""
    memo: dict[AffinePermutation, int] = {}

    def count(v: AffinePermutation) -> int:
        if v.length == 0:
            return 1
        if v in memo:
            return memo[v]
        total = sum(count(v.times_simple(i)) for i in v.right_descents())
        memo[v] = total
        return total

    return count(w)


def commutation_moves(n: int, word: tuple[int, ...]):
    """Yield words reachable by one adjacent commutation swap."""
    for p in range(len(word) - 1):
        a, b = word[p], word[p + 1]
        if (a - b) % n not in (0, 1, n - 1):
            yield word[:p] + (b, a) + word[p + 2 :]


def braid_moves(n: int, word: tuple[int, ...]):
    """Yield (direction, new_word) for each braid rewrite in word.

    direction is +1 for i (i+1) i -> (i+1) i (i+1) and -1 for the reverse.
    For n = 2 the rewrite is not a relation of the group, so nothing is
    yielded.
    """
    if n < 3:
        return
    for p in range(len(word) - 2):
        a, b, c = word[p], word[p + 1], word[p + 2]
        if a != c:
            continue
        if b == (a + 1) % n:
            yield +1, word[:p] + (b, a, b) + word[p + 3 :]
        elif b == (a - 1) % n:
            yield -1, word[:p] + (b, a, b) + word[p + 3 :]


def commutation_classes(w: AffinePermutation) -> list[frozenset[tuple[int, ...]]]:
    """Partition of reduced_words(w) into commutation classes.

    Classes are returned sorted by their least word so output is stable.
    """
    words = reduced_words(w)
    classes = []
    unseen = set(words)
    while unseen:
        start = min(unseen)
        block = {start}
        stack = [start]
        while stack:
            word = stack.pop()
            for other in commutation_moves(w.n, word):
                if other not in block:
                    assert other in words, (
                        f"commutation move left the reduced-word set: {other}"
                    )
                    block.add(other)
                    stack.append(other)
        unseen -= block
        classes.append(frozenset(block))
    classes.sort(key=min)
    return classes


def braid_graph(w: AffinePermutation) -> Digraph:
    """The directed braid graph on commutation classes of reduced words of w."""
    classes = commutation_classes(w)
    class_of = {word: cls for cls in classes for word in cls}
    arcs = set()
    for cls in classes:
        for word in cls:
            for direction, other in braid_moves(w.n, word):
                if direction != +1:
                    continue
                assert other in class_of, (
                    f"braid move left the reduced-word set: {other}"
                )
                arcs.add((cls, class_of[other]))
    return Digraph(tuple(classes), frozenset(arcs))


def class_label(n: int, cls: frozenset[tuple[int, ...]]) -> str:
    """Label a commutation class by its lexicographically least word."""
    return format_word(n, min(cls))


def words_to_json(n: int, classes, arcs) -> dict:
    """JSON form of a class partition plus arcs between class indices."""
    ordered = sorted(classes, key=min)
    index = {cls: i for i, cls in enumerate(ordered)}
    return {
        "classes": [[format_word(n, word) for word in sorted(cls)] for cls in ordered],
        "arcs": sorted([index[a], index[b]] for a, b in arcs),
    }
