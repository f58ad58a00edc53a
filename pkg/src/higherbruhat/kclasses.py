"""
k-element classes, packets, and k-inversions.

A KClass is a strictly increasing integer tuple with pairwise distinct
residues mod n, taken up to a uniform shift by n when k >= 2 (no shift
identification for k = 1).  The canonical representative places the minimum
in [1, n].  For w in S_n every class of interest has entries in [n] and the
shift never fires.

X = [x_1 < ... < x_k] is a k-inversion for w when w^{-1}(x_1) > ... >
w^{-1}(x_k), and a k-quasi-inversion when exactly one of its C(k,2) pairs
fails to be a 2-inversion.  The packet of X is the list of its k facets
X_i = X minus x_i; (X_1, ..., X_k) is the antilex order and its reverse the
lex order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .affine import AffinePermutation


class KClassError(ValueError):
    """Raised for malformed class data (repeated residues, bad ordering)."""


class UnsupportedCaseError(ValueError):
    """Raised for the affine k = 1 case, whose inversion set is infinite."""


class ShapeViolationError(AssertionError):
    """A packet intersection matched none of the four legal shapes.

    This cannot happen for any permutation; an instance would be a
    falsifying witness, so the offending data rides along.
    """

    def __init__(self, w, x, hits):
        super().__init__(
            f"packet intersection of {x} for window {w.window} has illegal "
            f"shape: members at positions {hits}"
        )
        self.w = w
        self.x = x
        self.hits = hits


@dataclass(frozen=True, order=True)
class KClass:
    """Canonical representative of a k-subset class (increasing entries)."""

    n: int
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def k(self) -> int:
        return len(self.elements)

    def shift(self, m: int) -> tuple[int, ...]:
        return tuple(x + m * self.n for x in self.elements)

    def __repr__(self):
        return f"[{','.join(str(x) for x in self.elements)}]"


def canonicalize(raw, n: int) -> KClass:
    """Canonical KClass for a raw increasing sequence.

    Shifts by the unique multiple of n that puts the minimum in [1, n];
    sequences of length <= 1 are left as given (k = 1 classes are not
    identified under shifts).

    >>> canonicalize([0, 1], 4)
    [4,5]
    >>> canonicalize([0, 7], 4)
    [4,11]
    """
    raw = tuple(raw)
    for a, b in itertools.pairwise(raw):
        if a >= b:
            raise KClassError(f"entries must be strictly increasing: {raw}")
    if len({x % n for x in raw}) != len(raw):
        raise KClassError(f"entries must be pairwise distinct modulo {n}: {raw}")
    if len(raw) >= 2:
        shift = -((raw[0] - 1) // n)
        raw = tuple(x + shift * n for x in raw)
    return KClass(n, raw)


@dataclass(frozen=True)
class Packet:
    """The facets X_1, ..., X_k of a class X, in antilex order."""

    parent: KClass
    members: tuple[KClass, ...]

    def antilex(self) -> tuple[KClass, ...]:
        return self.members

    def lex(self) -> tuple[KClass, ...]:
        return tuple(reversed(self.members))


def packet(x: KClass) -> Packet:
    """Packet of x; members are re-canonicalized (dropping x_1 can shift).

    >>> [m for m in packet(canonicalize([1, 2, 5, 6], 6)).members]
    [[2,5,6], [1,5,6], [1,2,6], [1,2,5]]
    """
    if x.k < 2:
        raise KClassError(f"packet requires a class of size >= 2, got {x}")
    members = []
    for i in range(x.k):
        members.append(canonicalize(x.elements[:i] + x.elements[i + 1 :], x.n))
    assert len(set(members)) == x.k, f"packet members of {x} are not distinct"
    return Packet(x, tuple(members))


def is_prefix(subset, pkt: Packet) -> bool:
    """True when subset is {X_k, ..., X_i} for some i (the empty set and the
    full packet both count)."""
    sub = set(subset)
    t = len(sub)
    return sub == set(pkt.lex()[:t])


def is_suffix(subset, pkt: Packet) -> bool:
    """True when subset is {X_i, ..., X_1} for some i (empty and full count)."""
    sub = set(subset)
    t = len(sub)
    return sub == set(pkt.antilex()[:t])


def is_k_inversion(w: AffinePermutation, x: KClass) -> bool:
    """Whether w^{-1} decreases along the entries of x."""
    vals = [w.inverse_value(e) for e in x.elements]
    return all(a > b for a, b in itertools.pairwise(vals))


def is_quasi_inversion(w: AffinePermutation, x: KClass) -> bool:
    """Whether all but exactly one pair of x is a 2-inversion of w."""
    if x.k < 2:
        raise KClassError(f"quasi-inversion requires size >= 2, got {x}")
    vals = [w.inverse_value(e) for e in x.elements]
    failures = sum(
        1 for i, j in itertools.combinations(range(x.k), 2) if vals[i] < vals[j]
    )
    return failures == 1


def _successor_table(w: AffinePermutation) -> dict[int, list[int]]:
    # canonical 2-inversions grouped by first coordinate
    table: dict[int, list[int]] = {x: [] for x in range(1, w.n + 1)}
    for x, y in w.inversions:
        table[x].append(y)
    for x in table:
        table[x].sort()
    return table


def inv_k(w: AffinePermutation, k: int) -> list[KClass]:
    """All k-inversions of w, sorted, as canonical classes.

    Chains are grown from a first entry in [1, n]; each extension of x by y
    ranges over the shifts of the canonical 2-inversions starting at x's
    residue, so the search space is finite.  Affine k = 1 is refused (the
    1-inversion set of a non-finite affine permutation is infinite).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k == 1:
        if not w.is_finite():
            raise UnsupportedCaseError(
                "1-inversions of a non-finite affine permutation form an "
                "infinite set; only w in S_n is supported at k = 1"
            )
        return [KClass(w.n, (i,)) for i in range(1, w.n + 1)]
    succ = _successor_table(w)
    out: list[KClass] = []
    chain: list[int] = []

    def extend():
        if len(chain) == k:
            out.append(KClass(w.n, tuple(chain)))
            return
        q, r = divmod(chain[-1] - 1, w.n)
        for b in succ[r + 1]:
            chain.append(b + q * w.n)
            extend()
            chain.pop()

    for first in range(1, w.n + 1):
        chain = [first]
        extend()
    out.sort()
    return out


EMPTY = "empty"
SINGLETON = "singleton"
ADJACENT_PAIR = "adjacent_pair"
FULL = "full"


@dataclass(frozen=True)
class PacketIntersection:
    """Shape of P(X) ∩ Inv_k(w): which facets of X are inversions."""

    kind: str
    index: int | None  # 1-based facet position for singleton/adjacent_pair
    members: tuple[KClass, ...]  # the intersection, in antilex position order


def classify_packet_intersection(
    w: AffinePermutation, x: KClass
) -> PacketIntersection:
    """Classify P(X) ∩ Inv_{k}(w) for a class X of size k+1.

    The intersection is always empty, a single facet, two adjacent facets,
    or the whole packet; anything else raises ShapeViolationError with the
    witness attached.
    """
    pkt = packet(x)
    hits = [i for i, m in enumerate(pkt.members, start=1) if is_k_inversion(w, m)]
    size = len(pkt.members)
    if not hits:
        return PacketIntersection(EMPTY, None, ())
    members = tuple(pkt.members[i - 1] for i in hits)
    if len(hits) == 1:
        return PacketIntersection(SINGLETON, hits[0], members)
    if len(hits) == 2 and hits[1] == hits[0] + 1:
        return PacketIntersection(ADJACENT_PAIR, hits[0], members)
    if len(hits) == size:
        return PacketIntersection(FULL, None, members)
    raise ShapeViolationError(w, x, hits)


def finite_kclasses(n: int, k: int):
    """All classes with entries in [1, n] (the finite ground set)."""
    for combo in itertools.combinations(range(1, n + 1), k):
        yield KClass(n, combo)


def quasi_inversions(w: AffinePermutation, size: int) -> list[KClass]:
    """All quasi-inversions of the given size, sorted, as canonical classes.

    Every quasi-inversion is some k-inversion A plus one extra entry z, so
    the enumeration inserts candidate entries into each A in Inv_{size-1}(w).
    For each free residue the candidate shifts of z outside a bounded window
    fail at least two pairs at once, so the scan below is exhaustive.
    """
    if size < 2:
        raise ValueError(f"quasi-inversion size must be >= 2, got {size}")
    n = w.n
    if size == 2:
        if not w.is_finite():
            raise UnsupportedCaseError(
                "size-2 quasi-inversions of a non-finite affine permutation "
                "form an infinite set"
            )
        return sorted(
            x
            for x in finite_kclasses(n, 2)
            if w.inverse_value(x.elements[0]) < w.inverse_value(x.elements[1])
        )
    found: set[KClass] = set()
    for base in inv_k(w, size - 1):
        taken = {e % n for e in base.elements}
        inv_base = [w.inverse_value(e) for e in base.elements]
        for r in range(n):
            if r in taken:
                continue
            z0 = r if r >= 1 else n
            wz0 = w.inverse_value(z0)
            # per element y: interval of shifts m where {z0 + m n, y} inverts
            intervals = []
            for y, wy in zip(base.elements, inv_base):
                m_pos = (y - z0 - 1) // n  # largest m with z < y
                m_inv = (wy - wz0) // n + 1  # least m with w^{-1}(z) > w^{-1}(y)
                lo, hi = (
                    (m_inv, m_pos) if m_inv <= m_pos else (m_pos + 1, m_inv - 1)
                )
                if lo <= hi:
                    intervals.append((lo, hi))
            # at least size-2 >= 1 pairs must invert, so z lies in some interval
            if not intervals:
                continue
            for m in range(
                min(lo for lo, _ in intervals), max(hi for _, hi in intervals) + 1
            ):
                z = z0 + m * n
                wz = wz0 + m * n
                fails = sum(
                    1
                    for y, wy in zip(base.elements, inv_base)
                    if (wz < wy) == (z < y)
                )
                if fails == 1:
                    candidate = canonicalize(
                        tuple(sorted(base.elements + (z,))), n
                    )
                    found.add(candidate)
    return sorted(found)


def packet_candidates(w: AffinePermutation, size: int):
    """Classes of the given size whose packet could interact nontrivially
    with Inv_{size-1}(w), as a sorted list.

    For finite w this is every subset of [n].  For affine w the family is
    A ∪ {z} over A in Inv_{size-1}(w): shapes with two or more facets in the
    inversion set force all but at most one pair of the class to invert,
    which confines z to the same bounded window the quasi-inversion scan
    uses; singleton shapes with the surviving facet in interior position
    additionally need z strictly between min(A) and max(A).  Everything
    outside the union is covered by an endpoint singleton or the empty
    shape, which cannot violate any prefix/suffix condition.
    """
    n = w.n
    if w.is_finite():
        return sorted(finite_kclasses(n, size))
    found: set[KClass] = set()
    for base in inv_k(w, size - 1):
        taken = {e % n for e in base.elements}
        inv_base = [w.inverse_value(e) for e in base.elements]
        lo_mid, hi_mid = base.elements[0], base.elements[-1]
        for r in range(n):
            if r in taken:
                continue
            z0 = r if r >= 1 else n
            wz0 = w.inverse_value(z0)
            zs = set()
            intervals = []
            for y, wy in zip(base.elements, inv_base):
                m_pos = (y - z0 - 1) // n
                m_inv = (wy - wz0) // n + 1
                lo, hi = (
                    (m_inv, m_pos) if m_inv <= m_pos else (m_pos + 1, m_inv - 1)
                )
                if lo <= hi:
                    intervals.append((lo, hi))
            if intervals:
                for m in range(
                    min(lo for lo, _ in intervals),
                    max(hi for _, hi in intervals) + 1,
                ):
                    zs.add(z0 + m * n)
            first_m = (lo_mid - z0) // n + 1  # least m with z0 + mn > lo_mid
            z = z0 + first_m * n
            while z < hi_mid:
                zs.add(z)
                z += n
            for z in zs:
                found.add(canonicalize(tuple(sorted(base.elements + (z,))), n))
    return sorted(found)


def common_packet(x: KClass, y: KClass) -> bool:
    """Whether some class Z of size k+1 has both x and y in its packet.

    Z itself is not required to be an inversion.  For k >= 2 this means a
    shift of y overlaps x in k-1 entries and the union is a valid class; for
    singletons any pair of distinct residues shares the packet of the pair.
    """
    if x.n != y.n or x.k != y.k:
        raise KClassError(f"mismatched classes: {x} vs {y}")
    n, k = x.n, x.k
    if x == y:
        return False
    if k == 1:
        return x.elements[0] % n != y.elements[0] % n
    xs = set(x.elements)
    shifts = {
        (a - b) // n for a in x.elements for b in y.elements if (a - b) % n == 0
    }
    for s in shifts:
        union = xs | set(y.shift(s))
        if len(union) != k + 1:
            continue
        if len({e % n for e in union}) == k + 1:
            return True
    return False
