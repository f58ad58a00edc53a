"""
Admissible orders, their commutation classes and packet flips, the higher
Bruhat order B_w(n,k), and reflection orders from reduced words.

A k-admissible order is a linear extension of the permanent poset on
Inv_k(w) whose restriction to every packet P(X), X in Inv_{k+1}(w), is the
lex or the antilex order.  Flipping a packet that sits in consecutive
positions reverses it; lex-to-antilex flips generate the partial order on
commutation classes.  Everything internal runs on small-integer encodings of
Inv_k(w); the public surface speaks KClass tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .affine import AffinePermutation, identity
from .digraph import Digraph
from .kclasses import KClass, common_packet, inv_k, packet
from .posets import FinitePoset, close_to_poset, permanent_poset
from .words import WordError, apply_word, braid_moves, reduced_words


class FlipError(ValueError):
    """Flip requested at a packet that is not a saturated chain."""


class FalsifierError(AssertionError):
    """A structural fact that should hold for every instance failed; the
    witness data rides along for reproduction."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class AdmissibleOrder:
    """A total order of Inv_k(w), stored as the sequence itself."""

    w: AffinePermutation
    k: int
    sequence: tuple[KClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(self.sequence))

    def __len__(self):
        return len(self.sequence)


@dataclass(frozen=True)
class AdmissibleCheck:
    ok: bool
    problem: str | None = None

    def __bool__(self):
        return self.ok


class _Context:
    """Per-(w, k) tables: element indexing, packet data, commutation masks."""

    def __init__(self, w: AffinePermutation, k: int):
        self.w = w
        self.k = k
        self.inv: tuple[KClass, ...] = tuple(inv_k(w, k))
        self.index = {x: i for i, x in enumerate(self.inv)}
        self.m = len(self.inv)
        self.poset = permanent_poset(w, k)
        # pred_mask[j]: indices strictly below j in the permanent poset
        up = self.poset._up_masks
        order_index = {x: i for i, x in enumerate(self.poset.elements)}
        self.pred_mask = [0] * self.m
        self.above_mask = [0] * self.m
        for a in self.inv:
            ia = self.index[a]
            mask = up[order_index[a]]
            # poset element order == self.inv order (both from inv_k)
            self.above_mask[ia] = mask
            t = mask
            while t:
                low = t & -t
                self.pred_mask[low.bit_length() - 1] |= 1 << ia
                t ^= low
        # packets of the (k+1)-inversions, as antilex index tuples
        self.upper: tuple[KClass, ...] = tuple(inv_k(w, k + 1))
        self.packets: list[tuple[int, ...]] = []
        for x in self.upper:
            members = packet(x).antilex()
            self.packets.append(tuple(self.index[mem] for mem in members))
        self.packet_sets = {
            frozenset(mem): pid for pid, mem in enumerate(self.packets)
        }
        self.elem_packets: list[list[tuple[int, int]]] = [[] for _ in range(self.m)]
        for pid, members in enumerate(self.packets):
            for pos, e in enumerate(members):
                self.elem_packets[e].append((pid, pos))
        # commutation masks: incomparable and sharing no packet of any class
        self.commute_mask = [0] * self.m
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if (self.above_mask[i] >> j & 1) or (self.above_mask[j] >> i & 1):
                    continue
                if common_packet(self.inv[i], self.inv[j]):
                    continue
                self.commute_mask[i] |= 1 << j
                self.commute_mask[j] |= 1 << i

    # -- encoding ----------------------------------------------------------

    def encode(self, order: AdmissibleOrder) -> tuple[int, ...]:
        return tuple(self.index[x] for x in order.sequence)

    def decode(self, encoded) -> AdmissibleOrder:
        return AdmissibleOrder(
            self.w, self.k, tuple(self.inv[i] for i in encoded)
        )

    # -- enumeration -------------------------------------------------------

    def enumerate_encoded(self) -> list[tuple[int, ...]]:
        """All admissible orders, as index tuples, in lexicographic order.

        Backtracking over linear extensions of the permanent poset; a packet
        whose placed members deviate from both the lex and the antilex
        prefix can never recover, so that branch is cut immediately.
        """
        m = self.m
        pred = self.pred_mask
        packets = self.packets
        elem_packets = self.elem_packets
        sizes = [len(p) for p in packets]
        cnt = [0] * len(packets)
        oklex = [True] * len(packets)
        okanti = [True] * len(packets)
        order: list[int] = []
        out: list[tuple[int, ...]] = []

        def place(e: int) -> list[tuple[int, int, bool, bool]] | None:
            updates = []
            for pid, pos in elem_packets[e]:
                t = cnt[pid]
                newlex = oklex[pid] and pos == sizes[pid] - 1 - t
                newanti = okanti[pid] and pos == t
                if not (newlex or newanti):
                    for qid, _, ol, oa in reversed(updates):
                        cnt[qid] -= 1
                        oklex[qid] = ol
                        okanti[qid] = oa
                    return None
                updates.append((pid, pos, oklex[pid], okanti[pid]))
                cnt[pid] = t + 1
                oklex[pid] = newlex
                okanti[pid] = newanti
            return updates

        def unplace(updates):
            for pid, _, ol, oa in reversed(updates):
                cnt[pid] -= 1
                oklex[pid] = ol
                okanti[pid] = oa

        placed = 0

        def backtrack():
            nonlocal placed
            if len(order) == m:
                out.append(tuple(order))
                return
            for e in range(m):
                bit = 1 << e
                if placed & bit or (pred[e] & ~placed):
                    continue
                updates = place(e)
                if updates is None:
                    continue
                placed |= bit
                order.append(e)
                backtrack()
                order.pop()
                placed &= ~bit
                unplace(updates)

        backtrack()
        return out

    # -- order predicates ---------------------------------------------------

    def reversal_encoded(self, encoded) -> frozenset[int]:
        """Packet ids traversed in antilex order (assumes admissibility)."""
        pos = {e: p for p, e in enumerate(encoded)}
        rev = set()
        for pid, members in enumerate(self.packets):
            if pos[members[0]] < pos[members[1]]:
                rev.add(pid)
        return frozenset(rev)

    def check(self, encoded) -> AdmissibleCheck:
        pos = {e: p for p, e in enumerate(encoded)}
        for j in range(self.m):
            bad = self.pred_mask[j]
            while bad:
                low = bad & -bad
                i = low.bit_length() - 1
                if pos[i] > pos[j]:
                    return AdmissibleCheck(
                        False,
                        f"violates relation {self.inv[i]} < {self.inv[j]}",
                    )
                bad ^= low
        for pid, members in enumerate(self.packets):
            seq = sorted(members, key=pos.__getitem__)
            if tuple(seq) not in (members, tuple(reversed(members))):
                return AdmissibleCheck(
                    False,
                    f"packet of {self.upper[pid]} is neither lex nor antilex",
                )
        return AdmissibleCheck(True)

    # -- moves ---------------------------------------------------------------

    def commuting_neighbors(self, encoded):
        for p in range(self.m - 1):
            a, b = encoded[p], encoded[p + 1]
            if self.commute_mask[a] >> b & 1:
                yield encoded[:p] + (b, a) + encoded[p + 2 :]

    def flip_blocks(self, encoded):
        """Yield (pid, start) for every packet in consecutive positions."""
        span = self.k + 1
        for start in range(self.m - span + 1):
            block = frozenset(encoded[start : start + span])
            pid = self.packet_sets.get(block)
            if pid is not None:
                yield pid, start

    def flipped(self, encoded, start):
        span = self.k + 1
        return (
            encoded[:start]
            + tuple(reversed(encoded[start : start + span]))
            + encoded[start + span :]
        )


@lru_cache(maxsize=32)
def _context(w: AffinePermutation, k: int) -> _Context:
    return _Context(w, k)


def is_admissible(w: AffinePermutation, k: int, order) -> AdmissibleCheck:
    """Whether the sequence is a k-admissible order for w, with a diagnostic
    naming the violated relation or packet on failure.

    Raises ValueError when the sequence is not a permutation of Inv_k(w).
    """
    ctx = _context(w, k)
    sequence = tuple(order.sequence if isinstance(order, AdmissibleOrder) else order)
    if sorted(sequence) != sorted(ctx.inv):
        raise ValueError(
            f"order is not a permutation of Inv_{k}(w) for window {w.window}"
        )
    return ctx.check(tuple(ctx.index[x] for x in sequence))


def enumerate_admissible(w: AffinePermutation, k: int) -> list[AdmissibleOrder]:
    """All k-admissible orders for w, lexicographic in the Inv_k indexing."""
    ctx = _context(w, k)
    return [ctx.decode(encoded) for encoded in ctx.enumerate_encoded()]


def reversal_set(order: AdmissibleOrder) -> frozenset[KClass]:
    """The (k+1)-inversions whose packets the order traverses in antilex order."""
    ctx = _context(order.w, order.k)
    encoded = ctx.encode(order)
    check = ctx.check(encoded)
    if not check:
        raise ValueError(f"order is not admissible: {check.problem}")
    return frozenset(ctx.upper[pid] for pid in ctx.reversal_encoded(encoded))


def commute_wrt_w(w: AffinePermutation, k: int, x: KClass, y: KClass) -> bool:
    """Incomparable in the permanent poset and in no common packet."""
    if x == y:
        raise ValueError("commutation is only defined for distinct classes")
    ctx = _context(w, k)
    i, j = ctx.index[x], ctx.index[y]
    if (ctx.above_mask[i] >> j & 1) or (ctx.above_mask[j] >> i & 1):
        return False
    return not common_packet(x, y)


def commutation_classes_of_orders(
    orders: list[AdmissibleOrder],
) -> list[list[AdmissibleOrder]]:
    """Partition admissible orders of one (w, k) into commutation classes."""
    if not orders:
        return []
    ctx = _context(orders[0].w, orders[0].k)
    encoded = [ctx.encode(o) for o in orders]
    blocks = _partition_encoded(ctx, encoded)
    return [[ctx.decode(e) for e in block] for block in blocks]


def _partition_encoded(ctx: _Context, encoded_orders) -> list[list[tuple[int, ...]]]:
    universe = set(encoded_orders)
    assigned: dict[tuple[int, ...], int] = {}
    blocks: list[list[tuple[int, ...]]] = []
    for start in encoded_orders:
        if start in assigned:
            continue
        cid = len(blocks)
        block = [start]
        assigned[start] = cid
        queue = [start]
        rev0 = ctx.reversal_encoded(start)
        while queue:
            cur = queue.pop()
            for nxt in ctx.commuting_neighbors(cur):
                if nxt in assigned:
                    continue
                if nxt not in universe:
                    raise FalsifierError(
                        "commutation produced an order outside the admissible set",
                        {"w": ctx.w.window, "k": ctx.k, "order": nxt},
                    )
                if ctx.reversal_encoded(nxt) != rev0:
                    raise FalsifierError(
                        "commutation changed a reversal set",
                        {"w": ctx.w.window, "k": ctx.k, "order": nxt},
                    )
                assigned[nxt] = cid
                block.append(nxt)
                queue.append(nxt)
        blocks.append(block)
    return blocks


def class_of(order: AdmissibleOrder) -> frozenset[tuple[KClass, ...]]:
    """The commutation class of one order, as a set of sequences."""
    ctx = _context(order.w, order.k)
    start = ctx.encode(order)
    check = ctx.check(start)
    if not check:
        raise ValueError(f"order is not admissible: {check.problem}")
    block = {start}
    queue = [start]
    while queue:
        cur = queue.pop()
        for nxt in ctx.commuting_neighbors(cur):
            if nxt not in block:
                block.add(nxt)
                queue.append(nxt)
    return frozenset(tuple(ctx.inv[i] for i in e) for e in block)


def apply_flip(order: AdmissibleOrder, x: KClass) -> AdmissibleOrder:
    """Reverse the packet of x, which must occupy consecutive positions."""
    ctx = _context(order.w, order.k)
    encoded = ctx.encode(order)
    members = frozenset(
        ctx.index[mem] for mem in packet(x).members
    )
    for pid, start in ctx.flip_blocks(encoded):
        if frozenset(ctx.packets[pid]) == members:
            return ctx.decode(ctx.flipped(encoded, start))
    raise FlipError(
        f"packet of {x} does not form a saturated chain in the given order"
    )


def flippable_packets(
    orders: list[AdmissibleOrder],
) -> list[tuple[KClass, str]]:
    """Packets flippable somewhere in the commutation class spanned by orders.

    Directions are 'lex_to_antilex' or 'antilex_to_lex' according to the
    class reversal set.  The given orders should form one commutation class
    (as produced by commutation_classes_of_orders).
    """
    ctx = _context(orders[0].w, orders[0].k)
    rev = ctx.reversal_encoded(ctx.encode(orders[0]))
    found: dict[int, str] = {}
    for order in orders:
        encoded = ctx.encode(order)
        for pid, _ in ctx.flip_blocks(encoded):
            found[pid] = (
                "antilex_to_lex" if pid in rev else "lex_to_antilex"
            )
    return [
        (ctx.upper[pid], direction) for pid, direction in sorted(found.items())
    ]


@dataclass(frozen=True)
class BruhatClass:
    cid: int
    representative: AdmissibleOrder
    reversal: frozenset[KClass]
    size: int


@dataclass(frozen=True)
class BruhatOrder:
    """B_w(n,k): poset over class ids, plus per-class data."""

    w: AffinePermutation
    k: int
    poset: FinitePoset  # elements are class ids 0..c-1
    classes: tuple[BruhatClass, ...]
    flip_arcs: frozenset  # (cid, cid) lex-to-antilex flip edges


def build_bruhat(w: AffinePermutation, k: int) -> BruhatOrder:
    """Construct B_w(n,k) from commutations and lex-to-antilex packet flips.

    The partial order is flip-edge reachability on commutation classes; the
    reversal map is not consulted, so the isomorphism onto consistent sets
    stays an independently checkable fact.  Every flip is verified to toggle
    exactly its own packet in the reversal set.
    """
    ctx = _context(w, k)
    orders = ctx.enumerate_encoded()
    blocks = _partition_encoded(ctx, orders)
    class_of_enc: dict[tuple[int, ...], int] = {}
    for cid, block in enumerate(blocks):
        for e in block:
            class_of_enc[e] = cid
    revs = [ctx.reversal_encoded(block[0]) for block in blocks]
    arcs = set()
    for cid, block in enumerate(blocks):
        for encoded in block:
            for pid, start in ctx.flip_blocks(encoded):
                if pid in revs[cid]:
                    continue  # antilex already; the reverse arc comes from its class
                other = ctx.flipped(encoded, start)
                ocid = class_of_enc.get(other)
                if ocid is None:
                    raise FalsifierError(
                        "flip produced an order outside the admissible set",
                        {"w": w.window, "k": k, "order": other},
                    )
                if revs[ocid] != revs[cid] | {pid}:
                    raise FalsifierError(
                        "flip did not toggle exactly its packet",
                        {"w": w.window, "k": k, "packet": repr(ctx.upper[pid])},
                    )
                arcs.add((cid, ocid))
    # every arc raises |reversal| by one, so arcs are cover relations and
    # reachability is automatically antisymmetric
    poset = close_to_poset(arcs, elements=range(len(blocks)))
    assert poset.covers == frozenset(arcs), "flip arcs should be cover relations"
    classes = tuple(
        BruhatClass(
            cid=cid,
            representative=ctx.decode(min(block)),
            reversal=frozenset(ctx.upper[pid] for pid in revs[cid]),
            size=len(block),
        )
        for cid, block in enumerate(blocks)
    )
    return BruhatOrder(w, k, poset, classes, frozenset(arcs))


def reflection_order(w: AffinePermutation, word) -> AdmissibleOrder:
    """The reflection order of a reduced word, as an admissible order at k = 2.

    The j-th entry is the inversion created by the j-th letter: with
    u = s_{i_1} ... s_{i_{j-1}}, it is the pair (u(i_j), u(i_j + 1)),
    canonicalized.  Rejects non-reduced words.
    """
    from .kclasses import canonicalize

    word = tuple(int(i) % w.n for i in word)
    if apply_word(w.n, word) != w or len(word) != w.length:
        raise WordError(
            f"{word} is not a reduced word for window {w.window}"
        )
    u = identity(w.n)
    entries = []
    for letter in word:
        a, b = u(letter), u(letter + 1)
        assert a < b, "letter is not an ascent; word cannot be reduced"
        entries.append(canonicalize((a, b), w.n))
        u = u.times_simple(letter)
    order = AdmissibleOrder(w, 2, tuple(entries))
    verdict = is_admissible(w, 2, order)
    if not verdict:
        raise FalsifierError(
            f"reflection order of {word} is not admissible: {verdict.problem}",
            {"w": w.window, "word": word},
        )
    return order


@dataclass(frozen=True, eq=False)
class BijectionReport:
    ok: bool
    word_count: int
    order_count: int
    word_class_count: int
    order_class_count: int
    braid_arc_count: int
    flip_arc_count: int
    failures: tuple[str, ...]
    class_map: dict | None = None  # word class -> Bruhat class id


def word_order_bijection_check(w: AffinePermutation) -> BijectionReport:
    """Verify that reflection orders biject reduced words with A_w(n,2),
    carrying word commutation classes onto order commutation classes and
    braid moves onto lex-to-antilex packet flips.

    On success the Hasse diagram of B_w(n,2) coincides with the directed
    braid graph under the induced class bijection.
    """
    from .words import commutation_classes

    failures: list[str] = []
    words = sorted(reduced_words(w))
    images = {word: reflection_order(w, word) for word in words}
    image_seqs = {images[word].sequence for word in words}
    if len(image_seqs) != len(words):
        failures.append("reflection orders are not pairwise distinct")
    admissible = enumerate_admissible(w, 2)
    if image_seqs != {o.sequence for o in admissible}:
        failures.append(
            f"image has {len(image_seqs)} orders but A_w(n,2) has "
            f"{len(admissible)}"
        )

    word_classes = commutation_classes(w)
    bruhat = build_bruhat(w, 2)
    ctx = _context(w, 2)
    enc_class: dict[tuple[int, ...], int] = {}
    orders_by_class = _partition_encoded(ctx, [ctx.encode(o) for o in admissible])
    for cid, block in enumerate(orders_by_class):
        for e in block:
            enc_class[e] = cid
    class_map: dict[frozenset, int] = {}
    for wcls in word_classes:
        cids = {enc_class[ctx.encode(images[word])] for word in wcls}
        if len(cids) != 1:
            failures.append(
                f"word class {min(wcls)} maps onto {len(cids)} order classes"
            )
            continue
        class_map[wcls] = cids.pop()
    if len(set(class_map.values())) != len(word_classes) or len(
        word_classes
    ) != len(orders_by_class):
        failures.append(
            f"{len(word_classes)} word classes vs {len(orders_by_class)} "
            "order classes"
        )

    # braid moves against flips, arc set against arc set
    braid_arcs = set()
    for word in words:
        rho = images[word]
        rev = reversal_set(rho)
        for direction, other in braid_moves(w.n, word):
            if direction != +1:
                continue
            sigma = images[tuple(other)]
            rev2 = reversal_set(sigma)
            delta = rev ^ rev2
            if len(delta) != 1 or not delta <= rev2:
                failures.append(
                    f"braid {word} -> {other} is not a lex-to-antilex flip"
                )
                continue
            wcls = next(c for c in word_classes if word in c)
            ocls = next(c for c in word_classes if tuple(other) in c)
            braid_arcs.add((class_map.get(wcls), class_map.get(ocls)))
    if braid_arcs != set(bruhat.flip_arcs):
        failures.append("braid arcs and flip arcs differ as class digraphs")

    return BijectionReport(
        ok=not failures,
        word_count=len(words),
        order_count=len(admissible),
        word_class_count=len(word_classes),
        order_class_count=len(orders_by_class),
        braid_arc_count=len(braid_arcs),
        flip_arc_count=len(bruhat.flip_arcs),
        failures=tuple(failures),
        class_map=class_map,
    )


def braid_graph_isomorphic_to_bruhat(w: AffinePermutation) -> bool:
    """Hasse(B_w(n,2)) vs the braid graph G(w), via the word-class bijection."""
    from .posets import digraph_isomorphic
    from .words import braid_graph

    report = word_order_bijection_check(w)
    if not report.ok or report.class_map is None:
        return False
    graph = braid_graph(w)
    bruhat = build_bruhat(w, 2)
    hasse = Digraph(
        tuple(range(len(bruhat.classes))), frozenset(bruhat.poset.covers)
    )
    return digraph_isomorphic(graph, hasse, dict(report.class_map))
