"""
Consistent sets, the single-step-inclusion poset C_w(n,k), the mixed packet
graph G_R, and the reversal-map checks tying B_w(n,k) to C_w(n,k+1).

A subset R of Inv_k(w) is consistent when it is an order ideal of the
permanent poset and meets every packet P(X), X in Inv_{k+1}(w), in a prefix
or suffix (the empty set and the whole packet count as both).  G_R puts the
generating quasi-inversion and congruence relations on Inv_k(w) as arcs and
orients every packet of Inv_{k+1}(w) antilex-ward if its class is in R and
lex-ward otherwise; its acyclicity is what makes reversal sets invertible.
"""
from __future__ import annotations

from dataclasses import dataclass

from .admissible import (
    AdmissibleOrder,
    BruhatOrder,
    FalsifierError,
    _context,
    build_bruhat,
    enumerate_admissible,
)
from .affine import AffinePermutation
from .digraph import Digraph
from .kclasses import KClass
from .posets import (
    FinitePoset,
    close_to_poset,
    congruence_relations,
    linear_extensions,
    maximal_chains,
    quasi_inversion_relations,
    ranked_check,
)

QUASI = "quasi"
REVERSAL = "reversal"
COMPLEMENT = "complement"
CONGRUENCE = "congruence"


@dataclass(frozen=True)
class ConsistencyCheck:
    ok: bool
    problem: str | None = None

    def __bool__(self):
        return self.ok


def _msz_masks(ctx) -> list[set[int]]:
    """Per packet: the member-index masks that are a prefix or a suffix."""
    out = []
    for members in ctx.packets:
        good = {0}
        acc = 0
        for e in members:  # suffixes: antilex-initial segments
            acc |= 1 << e
            good.add(acc)
        acc = 0
        for e in reversed(members):  # prefixes: lex-initial segments
            acc |= 1 << e
            good.add(acc)
        out.append(good)
    return out


def _encode_subset(ctx, subset) -> int:
    mask = 0
    for x in subset:
        if x not in ctx.index:
            raise ValueError(f"{x} is not a {ctx.k}-inversion of {ctx.w.window}")
        mask |= 1 << ctx.index[x]
    return mask


def _decode_subset(ctx, mask: int) -> frozenset[KClass]:
    out = []
    while mask:
        low = mask & -mask
        out.append(ctx.inv[low.bit_length() - 1])
        mask ^= low
    return frozenset(out)


def is_consistent(w: AffinePermutation, k: int, subset) -> ConsistencyCheck:
    """Order-ideal plus prefix-or-suffix (MSZ) test with a diagnostic.

    Raises ValueError when subset contains anything outside Inv_k(w).
    """
    ctx = _context(w, k)
    mask = _encode_subset(ctx, subset)
    t = mask
    while t:
        low = t & -t
        i = low.bit_length() - 1
        if ctx.pred_mask[i] & ~mask:
            missing = ctx.pred_mask[i] & ~mask
            j = (missing & -missing).bit_length() - 1
            return ConsistencyCheck(
                False,
                f"not an order ideal: contains {ctx.inv[i]} but not "
                f"{ctx.inv[j]} below it",
            )
        t ^= low
    for pid, good in enumerate(_msz_masks(ctx)):
        pmask = 0
        for e in ctx.packets[pid]:
            pmask |= 1 << e
        if mask & pmask not in good:
            return ConsistencyCheck(
                False,
                f"packet of {ctx.upper[pid]} meets the set in neither a "
                "prefix nor a suffix",
            )
    return ConsistencyCheck(True)


def _consistent_masks(ctx) -> list[int]:
    """All consistent subsets of Inv_k(w) as index masks, ideals first."""
    m = ctx.m
    up = [0] * m
    for j in range(m):
        t = ctx.pred_mask[j]
        while t:
            low = t & -t
            up[low.bit_length() - 1] |= 1 << j
            t ^= low
    packet_masks = []
    for members in ctx.packets:
        pmask = 0
        for e in members:
            pmask |= 1 << e
        packet_masks.append(pmask)
    good_masks = _msz_masks(ctx)
    # ideals by include/exclude over a linear extension of the poset
    order = []
    placed = 0
    remaining = list(range(m))
    while remaining:
        for i in remaining:
            if not (ctx.pred_mask[i] & ~placed):
                order.append(i)
                placed |= 1 << i
                remaining.remove(i)
                break
    out = []

    def recurse(pos: int, chosen: int, forbidden: int):
        if pos == len(order):
            if all(
                chosen & pm in good
                for pm, good in zip(packet_masks, good_masks)
            ):
                out.append(chosen)
            return
        i = order[pos]
        bit = 1 << i
        recurse(pos + 1, chosen, forbidden | up[i])
        if not (forbidden & bit) and not (ctx.pred_mask[i] & ~chosen):
            recurse(pos + 1, chosen | bit, forbidden)

    recurse(0, 0, 0)
    return sorted(out, key=lambda mask: (bin(mask).count("1"), mask))


def enumerate_consistent(w: AffinePermutation, k: int) -> list[frozenset[KClass]]:
    """All consistent subsets of Inv_k(w), smallest first, deterministically."""
    ctx = _context(w, k)
    return [_decode_subset(ctx, mask) for mask in _consistent_masks(ctx)]


def consistent_poset(w: AffinePermutation, k: int) -> FinitePoset:
    """C_w(n,k): consistent subsets ordered by single-step inclusion."""
    ctx = _context(w, k)
    masks = _consistent_masks(ctx)
    mask_set = set(masks)
    relations = []
    for mask in masks:
        free = ~mask
        for i in range(ctx.m):
            bit = 1 << i
            if free & bit and not (ctx.pred_mask[i] & ~mask):
                bigger = mask | bit
                if bigger in mask_set:
                    relations.append((mask, bigger))
    elements = masks
    poset = close_to_poset(relations, elements=elements)
    label = {mask: _decode_subset(ctx, mask) for mask in masks}
    return FinitePoset(
        tuple(label[mask] for mask in masks),
        frozenset((label[a], label[b]) for a, b in poset.covers),
    )


@dataclass(frozen=True)
class GRGraph:
    """Mixed packet graph on Inv_k(w) with per-arc origin tags."""

    w: AffinePermutation
    k: int
    reversal: frozenset[KClass]  # subset of Inv_{k+1}(w)
    nodes: tuple[KClass, ...]
    tagged_arcs: frozenset  # (src, dst, tag)

    def digraph(self) -> Digraph:
        return Digraph(self.nodes, frozenset((a, b) for a, b, _ in self.tagged_arcs))


def build_GR(w: AffinePermutation, k: int, subset) -> GRGraph:
    """G_R for a consistent R in C_w(n,k+1): generating quasi and congruence
    relations as arcs, packets of R antilex-oriented, the rest lex-oriented."""
    ctx = _context(w, k)
    upper_index = {x: i for i, x in enumerate(ctx.upper)}
    reversal = frozenset(subset)
    for x in reversal:
        if x not in upper_index:
            raise ValueError(f"{x} is not a {k + 1}-inversion of {w.window}")
    verdict = is_consistent(w, k + 1, reversal)
    if not verdict:
        raise ValueError(f"reversal set is not consistent: {verdict.problem}")
    arcs = set()
    for a, b in quasi_inversion_relations(w, k):
        arcs.add((a, b, QUASI))
    if k >= 2:
        for a, b in congruence_relations(w, k):
            arcs.add((a, b, CONGRUENCE))
    for pid, x in enumerate(ctx.upper):
        members = [ctx.inv[i] for i in ctx.packets[pid]]
        if x in reversal:
            for lo, hi in zip(members, members[1:]):
                arcs.add((lo, hi, REVERSAL))
        else:
            for lo, hi in zip(members, members[1:]):
                arcs.add((hi, lo, COMPLEMENT))
    return GRGraph(w, k, reversal, ctx.inv, frozenset(arcs))


def gr_acyclic(g: GRGraph):
    """(True, None) when G_R is acyclic, else (False, witness cycle).

    A cyclic instance contradicts the acyclicity statement this machinery
    rests on, so callers should record the witness rather than crash.
    """
    digraph = g.digraph()
    cycle = digraph.find_cycle()
    if cycle is None:
        return True, None
    return False, cycle


def rev_inverse(w: AffinePermutation, k: int, subset) -> list[AdmissibleOrder]:
    """All admissible orders with reversal set R: the linear extensions of
    the partial order generated by G_R.  Raises FalsifierError when G_R is
    cyclic or an extension fails to invert to R."""
    from .admissible import is_admissible, reversal_set

    g = build_GR(w, k, subset)
    acyclic, cycle = gr_acyclic(g)
    if not acyclic:
        raise FalsifierError(
            "G_R is cyclic; reversal inversion is undefined",
            {"w": w.window, "k": k, "R": sorted(map(repr, subset)),
             "cycle": [repr(c) for c in cycle]},
        )
    ctx = _context(w, k)
    poset = close_to_poset(
        [(a, b) for a, b, _ in g.tagged_arcs], elements=ctx.inv
    )
    out = []
    target = frozenset(subset)
    for seq in linear_extensions(poset):
        order = AdmissibleOrder(w, k, seq)
        verdict = is_admissible(w, k, order)
        if not verdict or reversal_set(order) != target:
            raise FalsifierError(
                "linear extension of G_R is not an admissible order with "
                "reversal set R",
                {"w": w.window, "k": k, "R": sorted(map(repr, subset)),
                 "order": [repr(x) for x in seq],
                 "problem": verdict.problem},
            )
        out.append(order)
    return out


@dataclass(frozen=True)
class IsomorphismReport:
    ok: bool
    class_count: int
    consistent_count: int
    failures: tuple[str, ...]


def rev_isomorphism_check(w: AffinePermutation, k: int) -> IsomorphismReport:
    """Verify Rev: B_w(n,k) -> C_w(n,k+1) is a poset isomorphism."""
    bruhat = build_bruhat(w, k)
    cposet = consistent_poset(w, k + 1)
    failures: list[str] = []
    revs = [bc.reversal for bc in bruhat.classes]
    if len(set(revs)) != len(revs):
        failures.append("two commutation classes share a reversal set")
    consistent = set(cposet.elements)
    if set(revs) != consistent:
        failures.append(
            f"{len(set(revs))} reversal sets vs {len(consistent)} consistent sets"
        )
    if not failures:
        for a in bruhat.classes:
            for b in bruhat.classes:
                left = bruhat.poset.leq(a.cid, b.cid)
                right = cposet.leq(a.reversal, b.reversal)
                if left != right:
                    failures.append(
                        f"order mismatch between classes {a.cid} and {b.cid}"
                    )
    return IsomorphismReport(
        ok=not failures,
        class_count=len(bruhat.classes),
        consistent_count=len(consistent),
        failures=tuple(failures),
    )


def suffix_set(w: AffinePermutation, k: int, subset) -> frozenset[KClass]:
    """S(R) = {Y in Inv_{k+1}(w) : Y_1 in R}, checked consistent one level up."""
    ctx = _context(w, k)
    verdict = is_consistent(w, k, subset)
    if not verdict:
        raise ValueError(f"input set is not consistent: {verdict.problem}")
    chosen = frozenset(subset)
    out = set()
    for pid, y in enumerate(ctx.upper):
        first = ctx.inv[ctx.packets[pid][0]]
        if first in chosen:
            out.add(y)
    result = frozenset(out)
    upper_verdict = is_consistent(w, k + 1, result)
    if not upper_verdict:
        raise FalsifierError(
            "suffix set is not consistent",
            {"w": w.window, "k": k, "R": sorted(map(repr, subset)),
             "suffix": sorted(map(repr, result)),
             "problem": upper_verdict.problem},
        )
    return result


@dataclass(frozen=True)
class ChainBijectionReport:
    ok: bool
    chain_count: int
    admissible_count: int
    failures: tuple[str, ...]


def chain_order_bijection_check(w: AffinePermutation, k: int) -> ChainBijectionReport:
    """Maximal chains of C_w(n,k+1), read as difference sequences, must be
    exactly the admissible orders A_w(n,k+1)."""
    from .admissible import is_admissible

    cposet = consistent_poset(w, k + 1)
    failures: list[str] = []
    chain_orders = set()
    count = 0
    for chain in maximal_chains(cposet):
        count += 1
        if chain[0] != frozenset():
            failures.append(f"maximal chain starts at {set(chain[0])}, not {{}}")
            continue
        seq = []
        ok = True
        for small, big in zip(chain, chain[1:]):
            diff = big - small
            if len(diff) != 1:
                failures.append("chain step adds more than one class")
                ok = False
                break
            seq.extend(diff)
        if not ok:
            continue
        order = AdmissibleOrder(w, k + 1, tuple(seq))
        verdict = is_admissible(w, k + 1, order)
        if not verdict:
            failures.append(
                f"chain order {[repr(x) for x in seq]} is not admissible: "
                f"{verdict.problem}"
            )
            continue
        chain_orders.add(order.sequence)
    admissible = {o.sequence for o in enumerate_admissible(w, k + 1)}
    if len(chain_orders) != count:
        failures.append("two maximal chains map to one order")
    if chain_orders != admissible:
        failures.append(
            f"{len(chain_orders)} chain orders vs {len(admissible)} admissible"
        )
    return ChainBijectionReport(
        ok=not failures,
        chain_count=count,
        admissible_count=len(admissible),
        failures=tuple(failures),
    )


def gr_to_dot(g: GRGraph) -> str:
    """DOT with the packet-graph color code: quasi black, reversal red,
    complement blue, congruence dashed."""
    style = {
        QUASI: "color=black",
        REVERSAL: "color=red",
        COMPLEMENT: "color=blue",
        CONGRUENCE: "color=black, style=dashed",
    }
    ids = {v: f"n{i}" for i, v in enumerate(g.nodes)}
    lines = [f"digraph GR {{"]
    for v in g.nodes:
        lines.append(f'  {ids[v]} [label="{v!r}"];')
    for a, b, tag in sorted(g.tagged_arcs, key=lambda t: (repr(t[0]), repr(t[1]), t[2])):
        lines.append(f"  {ids[a]} -> {ids[b]} [{style[tag]}];")
    lines.append("}")
    return "\n".join(lines)
