"""
Affine permutations in window notation.

An affine permutation of rank n is an n-periodic bijection w of the integers
(w(x+n) = w(x)+n) whose window values w(1),...,w(n) sum to n(n+1)/2.  The
finite symmetric group S_n sits inside as the permutations with window values
in [1, n].  Everything here is immutable and pure, so callers may share
objects across worker processes freely.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property


class WindowError(ValueError):
    """Raised when a window fails one of the affine-permutation conditions."""


@dataclass(frozen=True)
class AffinePermutation:
    """An affine permutation, stored by its window (w(1), ..., w(n))."""

    n: int
    window: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "window", tuple(self.window))

    @cached_property
    def _inverse_window(self) -> tuple[int, ...]:
        # position i (1-based) holds w^{-1}(i)
        inv = [0] * self.n
        for i, v in enumerate(self.window, start=1):
            r = (v - 1) % self.n
            inv[r] = i + (r + 1 - v)
        return tuple(inv)

    def __call__(self, x: int) -> int:
        q, r = divmod(x - 1, self.n)
        return self.window[r] + q * self.n

    def inverse_value(self, y: int) -> int:
        """w^{-1}(y), via the cached inverse window."""
        q, r = divmod(y - 1, self.n)
        return self._inverse_window[r] + q * self.n

    def is_finite(self) -> bool:
        """True when the window is a permutation of [1, n], i.e. w lies in S_n."""
        return all(1 <= v <= self.n for v in self.window)

    @cached_property
    def length(self) -> int:
        return len(self.inversions)

    @cached_property
    def inversions(self) -> frozenset[tuple[int, int]]:
        """The inversion set: pairs (x, y), x in [1,n], x < y, w^{-1}(x) > w^{-1}(y).

        For each x and each residue class of y, candidates are scanned upward
        from the least y > x; the scan stops at the first non-inversion, which
        is sound because (x, y) being an inversion forces (x, y - n) to be one
        whenever y - n > x.
        """
        n = self.n
        pairs = []
        for x in range(1, n + 1):
            wx = self.inverse_value(x)
            for r in range(n):
                if r == x % n:
                    continue
                y = x + ((r - x) % n)  # least y > x with y ≡ r (mod n)
                while self.inverse_value(y) < wx:
                    pairs.append((x, y))
                    y += n
        return frozenset(pairs)

    def right_descents(self) -> list[int]:
        """Residues i with ℓ(w s_i) = ℓ(w) - 1, i.e. w(i) > w(i+1)."""
        return [i for i in range(self.n) if self(i) > self(i + 1)]

    def right_ascents(self) -> list[int]:
        return [i for i in range(self.n) if self(i) < self(i + 1)]

    def times_simple(self, i: int) -> AffinePermutation:
        """Right multiplication w s_i (swaps the entries at positions i, i+1)."""
        i %= self.n
        win = list(self.window)
        if i == 0:
            win[0], win[-1] = win[-1] - self.n, win[0] + self.n
        else:
            win[i - 1], win[i] = win[i], win[i - 1]
        return AffinePermutation(self.n, tuple(win))

    def __repr__(self):
        return f"AffinePermutation({self.n}, {self.window})"


def from_window(n: int, values) -> AffinePermutation:
    """Validate a window and build the corresponding affine permutation.

    >>> from_window(4, (1, 7, 2, 0)).length
    7
    >>> from_window(3, (1, 2, 3)) == identity(3)
    True
    """
    values = tuple(values)
    if n < 1:
        raise WindowError(f"rank must be a positive integer, got {n}")
    if len(values) != n:
        raise WindowError(f"window must have length {n}, got {len(values)}")
    residues = {v % n for v in values}
    if len(residues) != n:
        raise WindowError(
            f"window values must be pairwise distinct modulo {n}: {values}"
        )
    expected = n * (n + 1) // 2
    if sum(values) != expected:
        raise WindowError(
            f"window values must sum to {expected} (n(n+1)/2), got {sum(values)}"
        )
    return AffinePermutation(n, values)


def identity(n: int) -> AffinePermutation:
    return AffinePermutation(n, tuple(range(1, n + 1)))


def apply(w: AffinePermutation, x: int) -> int:
    """Evaluate the n-periodic extension of w at any integer x."""
    return w(x)


def inverse(w: AffinePermutation) -> AffinePermutation:
    return AffinePermutation(w.n, w._inverse_window)


def compose(w: AffinePermutation, v: AffinePermutation) -> AffinePermutation:
    """The product w v, i.e. the function x -> w(v(x))."""
    if w.n != v.n:
        raise WindowError(f"rank mismatch: {w.n} != {v.n}")
    return AffinePermutation(w.n, tuple(w(v(i)) for i in range(1, w.n + 1)))


def simple(n: int, i: int) -> AffinePermutation:
    """The simple transposition s_i (index modulo n): swaps i <-> i+1 periodically.

    >>> simple(4, 0).window
    (0, 2, 3, 5)
    """
    return identity(n).times_simple(i)


def inv2(w: AffinePermutation) -> frozenset[tuple[int, int]]:
    """The (finite) inversion set of w; |inv2(w)| = ℓ(w)."""
    return w.inversions


def length(w: AffinePermutation) -> int:
    return w.length


def enumerate_up_to_length(n: int, max_len: int):
    """All affine permutations of rank n with length at most max_len.

    BFS from the identity along length-increasing right multiplications;
    yields elements grouped by increasing length.
    """
    if max_len < 0:
        raise ValueError(f"max_len must be nonnegative, got {max_len}")
    seen = {identity(n)}
    frontier = [identity(n)]
    yield identity(n)
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for i in w.right_ascents():
                u = w.times_simple(i)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
                    yield u
        frontier = nxt


def finite_permutations(n: int):
    """All of S_n as affine permutations (windows permuting [1, n])."""
    for win in itertools.permutations(range(1, n + 1)):
        yield AffinePermutation(n, win)


def weak_interval(w: AffinePermutation):
    """The weak-order interval [id, w]: elements and cover pairs (v, v s_i).

    Returns (elements, covers) where elements is a list sorted by length and
    covers are pairs (u, v) with u ⋖ v.  Membership is by downward closure
    from w under right descents; covers are the single-step inclusions of
    inversion sets inside the interval.
    """
    members = {w}
    frontier = [w]
    while frontier:
        nxt = []
        for v in frontier:
            for i in v.right_descents():
                u = v.times_simple(i)
                if u not in members:
                    members.add(u)
                    nxt.append(u)
        frontier = nxt
    covers = []
    for v in members:
        for i in v.right_ascents():
            u = v.times_simple(i)
            if u in members:
                covers.append((v, u))
    elements = sorted(members, key=lambda v: (v.length, v.window))
    return elements, covers


def parse_window(text: str) -> tuple[int, ...]:
    """Parse the text form "(a,b,...)" (parentheses optional) into a tuple.

    >>> parse_window("(-3,-2,8,7)")
    (-3, -2, 8, 7)
    """
    body = text.strip().strip("()[]")
    if not body:
        raise WindowError(f"empty window text: {text!r}")
    try:
        return tuple(int(part) for part in body.replace(" ", "").split(","))
    except ValueError:
        raise WindowError(f"cannot parse window text: {text!r}") from None


def window_to_json(w: AffinePermutation) -> dict:
    return {"n": w.n, "window": list(w.window)}


def window_from_json(obj: dict) -> AffinePermutation:
    return from_window(int(obj["n"]), tuple(obj["window"]))
