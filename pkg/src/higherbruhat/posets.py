"""
Finite posets from generating relations, plus the permanent poset built from
quasi-inversion and congruence relations.

A FinitePoset stores an explicit element tuple and the cover pairs of the
transitive reduction.  Construction from arbitrary generating relations
closes transitively, rejects cycles (with a witness), and strips implied
pairs.  Element order is preserved as given, which keeps every enumeration
here deterministic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .affine import AffinePermutation, identity, weak_interval
from .kclasses import (
    ADJACENT_PAIR,
    KClass,
    UnsupportedCaseError,
    canonicalize,
    classify_packet_intersection,
    inv_k,
    packet,
    quasi_inversions,
)


class CycleError(ValueError):
    """Generating relations close to a cycle; carries a witness cycle."""

    def __init__(self, cycle):
        super().__init__(
            "relations are not antisymmetric; witness cycle: "
            + " < ".join(repr(c) for c in cycle)
        )
        self.cycle = tuple(cycle)


class IsomorphismRefusal(ValueError):
    """Hint-free isomorphism testing refused for oversized instances."""


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple
    covers: frozenset  # (a, b) pairs with a covered by b

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "covers", frozenset(self.covers))

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def _up_masks(self) -> list[int]:
        """Bitmask per element of all strictly greater elements."""
        m = len(self.elements)
        idx = self._index
        above = [0] * m
        children: list[list[int]] = [[] for _ in range(m)]
        for a, b in self.covers:
            children[idx[a]].append(idx[b])
        # reverse topological accumulation
        order = self._topo_indices
        for i in reversed(order):
            mask = 0
            for j in children[i]:
                mask |= (1 << j) | above[j]
            above[i] = mask
        return above

    @cached_property
    def _topo_indices(self) -> list[int]:
        m = len(self.elements)
        idx = self._index
        indeg = [0] * m
        out: list[list[int]] = [[] for _ in range(m)]
        for a, b in self.covers:
            out[idx[a]].append(idx[b])
            indeg[idx[b]] += 1
        ready = [i for i in range(m) if indeg[i] == 0]
        order = []
        while ready:
            i = ready.pop()
            order.append(i)
            for j in out[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        assert len(order) == m, "cover relation contains a cycle"
        return order

    def lt(self, a, b) -> bool:
        return bool(self._up_masks[self._index[a]] >> self._index[b] & 1)

    def leq(self, a, b) -> bool:
        return a == b or self.lt(a, b)

    def minimal_elements(self) -> list:
        lower = {b for _, b in self.covers}
        return [e for e in self.elements if e not in lower]

    def maximal_elements(self) -> list:
        upper = {a for a, _ in self.covers}
        return [e for e in self.elements if e not in upper]

    def covers_of(self, a) -> list:
        return [b for x, b in self.covers if x == a]

    def cocovers_of(self, b) -> list:
        return [a for a, x in self.covers if x == b]


def close_to_poset(relations, elements=None) -> FinitePoset:
    """Build a FinitePoset from generating strict relations (a, b): a < b.

    Transitively closes, rejects cycles with a witness, and reduces to cover
    pairs.  elements, when given, fixes the universe and its order; otherwise
    labels are taken in first-appearance order from the relations.
    """
    relations = list(relations)
    if elements is None:
        seen: dict = {}
        for a, b in relations:
            seen.setdefault(a, None)
            seen.setdefault(b, None)
        elements = list(seen)
    else:
        elements = list(elements)
    idx = {e: i for i, e in enumerate(elements)}
    m = len(elements)
    succ: list[set[int]] = [set() for _ in range(m)]
    for a, b in relations:
        if a == b:
            raise CycleError([a])
        succ[idx[a]].add(idx[b])

    # Kahn topological order; leftover nodes witness a cycle.
    indeg = [0] * m
    for i in range(m):
        for j in succ[i]:
            indeg[j] += 1
    ready = [i for i in range(m) if indeg[i] == 0]
    topo = []
    while ready:
        i = ready.pop()
        topo.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    if len(topo) != m:
        raise CycleError(_witness_cycle(succ, indeg, elements))

    # closure masks in reverse topological order
    closed = [0] * m
    for i in reversed(topo):
        mask = 0
        for j in succ[i]:
            mask |= (1 << j) | closed[j]
        closed[i] = mask

    covers = set()
    for i in range(m):
        above = closed[i]
        implied = 0
        t = above
        while t:
            low = t & -t
            implied |= closed[low.bit_length() - 1]
            t ^= low
        keep = above & ~implied
        while keep:
            low = keep & -keep
            covers.add((elements[i], elements[low.bit_length() - 1]))
            keep ^= low
    return FinitePoset(tuple(elements), frozenset(covers))


def _witness_cycle(succ, indeg, elements):
    # every node still carrying in-degree has a predecessor that does too,
    # so walking backwards inside that set must revisit a node
    alive = {i for i, d in enumerate(indeg) if d > 0}
    start = next(iter(alive))
    path, pos = [], {}
    cur = start
    while cur not in pos:
        pos[cur] = len(path)
        path.append(cur)
        cur = next(i for i in alive if cur in succ[i])
    cycle = path[pos[cur]:]
    cycle.reverse()
    return [elements[i] for i in cycle] + [elements[cycle[0]]]


def linear_extensions(p: FinitePoset):
    """Yield all linear extensions as tuples, minimal candidates in element
    order at every step."""
    m = len(p.elements)
    idx = p._index
    preds: list[int] = [0] * m
    for a, b in p.covers:
        preds[idx[b]] |= 1 << idx[a]
    order: list = []
    placed = 0

    def backtrack():
        if len(order) == m:
            yield tuple(order)
            return
        nonlocal placed
        for i in range(m):
            bit = 1 << i
            if placed & bit or (preds[i] & ~placed):
                continue
            placed |= bit
            order.append(p.elements[i])
            yield from backtrack()
            order.pop()
            placed &= ~bit

    yield from backtrack()


class _BudgetExceeded(Exception):
    pass


def count_linear_extensions(p: FinitePoset, cap: int | None = None) -> int:
    """Count linear extensions by dynamic programming over the ideal lattice.

    With cap set, returns cap + 1 as soon as the count or the size of the
    ideal lattice makes the exact value irrelevant for budgeting.
    """
    m = len(p.elements)
    idx = p._index
    preds: list[int] = [0] * m
    for a, b in p.covers:
        preds[idx[b]] |= 1 << idx[a]
    full = (1 << m) - 1
    memo: dict[int, int] = {full: 1}
    ideal_cap = 2_000_000 if cap is not None else None

    def count(placed: int) -> int:
        if placed in memo:
            return memo[placed]
        total = 0
        for i in range(m):
            bit = 1 << i
            if placed & bit or (preds[i] & ~placed):
                continue
            total += count(placed | bit)
        memo[placed] = total
        if ideal_cap is not None and len(memo) > ideal_cap:
            raise _BudgetExceeded
        return total

    try:
        result = count(0)
    except (_BudgetExceeded, RecursionError):
        return (cap or 0) + 1
    if cap is not None and result > cap:
        return cap + 1
    return result


def order_ideals(p: FinitePoset):
    """Yield every down-closed subset as a frozenset of elements."""
    m = len(p.elements)
    idx = p._index
    up = p._up_masks
    topo = p._topo_indices
    preds: list[int] = [0] * m
    for a, b in p.covers:
        preds[idx[b]] |= 1 << idx[a]

    chosen_elems: list = []

    def recurse(pos: int, chosen: int, forbidden: int):
        if pos == len(topo):
            yield frozenset(chosen_elems)
            return
        i = topo[pos]
        bit = 1 << i
        # exclude i: everything above becomes forbidden
        yield from recurse(pos + 1, chosen, forbidden | up[i])
        # include i: allowed when i is not forbidden and its lower covers are in
        if not (forbidden & bit) and not (preds[i] & ~chosen):
            chosen_elems.append(p.elements[i])
            yield from recurse(pos + 1, chosen | bit, forbidden)
            chosen_elems.pop()

    yield from recurse(0, 0, 0)


def maximal_chains(p: FinitePoset):
    """Yield the maximal chains (minimal element to maximal element) as tuples."""
    if not p.elements:
        yield ()
        return
    chain: list = []

    def climb(e):
        chain.append(e)
        ups = p.covers_of(e)
        if not ups:
            yield tuple(chain)
        else:
            for f in sorted(ups, key=p._index.__getitem__):
                yield from climb(f)
        chain.pop()

    for e in sorted(p.minimal_elements(), key=p._index.__getitem__):
        yield from climb(e)


@dataclass(frozen=True)
class RankReport:
    ranked: bool
    unique_min: bool
    unique_max: bool
    rank_fn: dict | None


def ranked_check(p: FinitePoset) -> RankReport:
    """Whether the poset is graded (every cover raises rank by one)."""
    ranks: dict = {}
    for i in p._topo_indices:
        e = p.elements[i]
        below = p.cocovers_of(e)
        ranks[e] = 0 if not below else max(ranks[b] for b in below) + 1
    ranked = all(ranks[b] == ranks[a] + 1 for a, b in p.covers)
    return RankReport(
        ranked=ranked,
        unique_min=len(p.minimal_elements()) == 1,
        unique_max=len(p.maximal_elements()) == 1,
        rank_fn=ranks if ranked else None,
    )


def poset_isomorphic(p: FinitePoset, q: FinitePoset, hint: dict | None = None) -> bool:
    """Isomorphism of posets via their Hasse diagrams.

    With a hint (a bijection p-element -> q-element) the map is verified to
    carry covers onto covers exactly.  Without a hint, instances over 12
    nodes are refused; small ones are decided by backtracking with degree
    refinement.
    """
    return _graph_isomorphic(
        p.elements, p.covers, q.elements, q.covers, hint
    )


def digraph_isomorphic(g, h, hint: dict | None = None) -> bool:
    return _graph_isomorphic(g.nodes, g.arcs, h.nodes, h.arcs, hint)


def _graph_isomorphic(p_nodes, p_arcs, q_nodes, q_arcs, hint) -> bool:
    if len(p_nodes) != len(q_nodes) or len(p_arcs) != len(q_arcs):
        return False
    if hint is not None:
        if set(hint.keys()) != set(p_nodes):
            raise ValueError("hint does not cover the source elements")
        if set(hint.values()) != set(q_nodes):
            raise ValueError("hint is not onto the target elements")
        return {(hint[a], hint[b]) for a, b in p_arcs} == set(q_arcs)
    if len(p_nodes) > 12:
        raise IsomorphismRefusal(
            f"hint-free isomorphism limited to 12 nodes, got {len(p_nodes)}"
        )

    def profile(nodes, arcs):
        outs = {v: set() for v in nodes}
        ins = {v: set() for v in nodes}
        for a, b in arcs:
            outs[a].add(b)
            ins[b].add(a)
        return outs, ins

    p_out, p_in = profile(p_nodes, p_arcs)
    q_out, q_in = profile(q_nodes, q_arcs)
    q_free = list(q_nodes)
    assignment: dict = {}

    def extend(i: int) -> bool:
        if i == len(p_nodes):
            return True
        a = p_nodes[i]
        for b in list(q_free):
            if (len(p_out[a]), len(p_in[a])) != (len(q_out[b]), len(q_in[b])):
                continue
            ok = True
            for other, img in assignment.items():
                if (other in p_out[a]) != (img in q_out[b]):
                    ok = False
                    break
                if (other in p_in[a]) != (img in q_in[b]):
                    ok = False
                    break
            if not ok:
                continue
            assignment[a] = b
            q_free.remove(b)
            if extend(i + 1):
                return True
            q_free.append(b)
            del assignment[a]
        return False

    return extend(0)


# ---------------------------------------------------------------------------
# relation builders over Inv_k(w)


def quasi_inversion_relations(w: AffinePermutation, k: int):
    """Oriented generating relations on Inv_k(w) from quasi-inversions.

    Each quasi-inversion X of size k+1 meets Inv_k(w) in two adjacent facets
    X_i, X_{i+1}; the pair is oriented X_i < X_{i+1} when k - i is odd and
    the other way when k - i is even.
    """
    relations = []
    for x in quasi_inversions(w, k + 1):
        shape = classify_packet_intersection(w, x)
        assert shape.kind == ADJACENT_PAIR, (
            f"quasi-inversion {x} of {w.window} has intersection {shape.kind}"
        )
        i = shape.index
        lo, hi = shape.members  # (X_i, X_{i+1})
        if (k - i) % 2 == 1:
            relations.append((lo, hi))
        else:
            relations.append((hi, lo))
    return relations


def congruence_vector(n: int, k: int, i: int) -> tuple[int, ...]:
    """(0, ..., 0, n, ..., n) with i zeros then k - i copies of n.

    >>> congruence_vector(4, 3, 1)
    (0, 4, 4)
    """
    if not 0 <= i < k:
        raise ValueError(f"congruence index must satisfy 0 <= i < k, got {i}")
    return (0,) * i + (n,) * (k - i)


def congruence_relations(w: AffinePermutation, k: int):
    """Oriented congruence relations with both endpoints in Inv_k(w).

    For X in Inv_k(w) and 0 < i < k, the shifted class X + v_i is related to
    X with the same parity rule as the quasi relations; i = 0 shifts the
    whole class and relates it to itself, so it is skipped.  Finite
    permutations have no shifted inversions, so the result is then empty.
    """
    if k < 2:
        raise ValueError(f"congruence relations require k >= 2, got {k}")
    inversions = set(inv_k(w, k))
    relations = []
    for x in sorted(inversions):
        for i in range(1, k):
            vec = congruence_vector(w.n, k, i)
            shifted = tuple(a + d for a, d in zip(x.elements, vec))
            y = canonicalize(shifted, w.n)
            if y in inversions:
                if (k - i) % 2 == 1:
                    relations.append((x, y))
                else:
                    relations.append((y, x))
    return relations


def permanent_poset(w: AffinePermutation, k: int) -> FinitePoset:
    """The poset on Inv_k(w) closed from quasi-inversion and congruence
    relations.  A cycle here would be a falsifying witness and raises
    CycleError."""
    elements = inv_k(w, k)
    relations = list(quasi_inversion_relations(w, k))
    if k >= 2:
        relations += congruence_relations(w, k)
    return close_to_poset(relations, elements=elements)


def weak_order_poset(w: AffinePermutation) -> FinitePoset:
    """The weak-order interval [id, w] as a FinitePoset over permutations."""
    elements, covers = weak_interval(w)
    return FinitePoset(tuple(elements), frozenset(covers))


def poset_to_json(p: FinitePoset, label=repr) -> dict:
    return {
        "elements": [label(e) for e in p.elements],
        "covers": sorted([label(a), label(b)] for a, b in p.covers),
    }


def hasse_to_dot(p: FinitePoset, name: str = "H", label=str) -> str:
    ids = {e: f"n{i}" for i, e in enumerate(p.elements)}
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for e in p.elements:
        lines.append(f'  {ids[e]} [label="{label(e)}"];')
    for a, b in sorted(p.covers, key=lambda c: (str(c[0]), str(c[1]))):
        lines.append(f"  {ids[a]} -> {ids[b]};")
    lines.append("}")
    return "\n".join(lines)
