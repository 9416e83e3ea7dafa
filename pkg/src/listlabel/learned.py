"""Prediction-routed list labeling over pluggable sorted-array black boxes.

Capacity n (rounded up to a power of two) defines an implicit complete binary
tree: the node at height h with index i owns the 2^h ranks
{2^h * i + 1, ..., 2^h * (i+1)} and six times as many slots.  At any moment a
set of tree nodes whose rank intervals tile {1..n} are *actual*: each actual
owns a black-box array sized at six slots per rank, and the global label of an
element is its label inside the box plus the box's slot offset.  Every
root-to-leaf path crosses exactly one actual.

An insert is routed by its predicted rank, corrected by the actuals that hold
the key's predecessor and successor so stored order is never violated: the
element goes to the predecessor's actual if that lies right of the predicted
one, to the successor's actual if that lies left of it, and to the predicted
actual otherwise.  When an actual exceeds half density its parent's whole
range is rebuilt into one fresh box — possibly cascading upward — which is
where prediction error turns into movement cost: a merge only happens when
some element's prediction missed by at least half the merged rank width.
"""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np
from sortedcontainers import SortedKeyList

from .core import CapacityError, MovementLedger, clamp
from .pma import Pma

BoxFactory = Callable[[int, MovementLedger | None], Pma]


def _default_factory(slot_count: int, ledger: MovementLedger | None) -> Pma:
    return Pma(slot_count, ledger=ledger)


class ActualRecord:
    """One actual: a tree node that currently owns a black-box array."""

    __slots__ = ("height", "node", "rank_start", "rank_end", "slot_start",
                 "box", "count", "min_raw", "max_raw")

    def __init__(self, height: int, node: int):
        self.height = height
        self.node = node  # 0-based index among nodes at this height
        self.rank_start = (node << height) + 1
        self.rank_end = (node + 1) << height
        self.slot_start = 6 * (node << height) + 1
        self.box: Pma | None = None
        self.count = 0
        self.min_raw = 0
        self.max_raw = 0

    def rank_width(self) -> int:
        return 1 << self.height

    def __repr__(self):  # pragma: no cover - debugging aid
        return (f"Actual(h={self.height}, node={self.node}, "
                f"ranks=[{self.rank_start},{self.rank_end}], count={self.count})")


class LearnedLLA:
    """List labeling with predicted ranks and black-box sorted arrays.

    `capacity` is the number of elements the structure must accept; the rank
    tree is sized to the next power of two but predictions clamp to the true
    capacity.  `factory(slot_count, ledger)` builds the black boxes (classic
    PMA by default).  All movement accounting lands in `ledger`.
    """

    def __init__(
        self,
        capacity: int,
        factory: BoxFactory = _default_factory,
        ledger: MovementLedger | None = None,
        merge_listener: Callable[["LearnedLLA", ActualRecord], None] | None = None,
    ):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.n = 1 << (capacity - 1).bit_length()  # leaves in the rank tree
        self.tree_height = self.n.bit_length() - 1
        self.slot_count = 6 * self.n
        self.factory = factory
        self.ledger = ledger if ledger is not None else MovementLedger()
        self.merge_listener = merge_listener
        self.count = 0
        self.merges = 0
        # Height of the owning actual, per leaf. Initially every leaf is its
        # own actual; merges coarsen whole aligned ranges at once.
        self._heights = np.zeros(self.n, dtype=np.int8)
        self._records: dict[tuple[int, int], ActualRecord] = {}
        # Non-empty actuals ordered by rank interval. Their min and max keys
        # are monotone along this order (stored keys never straddle actual
        # boundaries out of order), which is what the neighbor searches use.
        self._order: SortedKeyList = SortedKeyList(key=lambda r: r.rank_start)
        self.predicted_rank: dict[int, int] = {}  # seq -> clamped prediction

    # ------------------------------------------------------------------
    # neighbor and routing queries

    def _pred_record(self, raw: int) -> ActualRecord | None:
        """Rightmost non-empty actual whose minimum key is <= raw: the one
        holding the predecessor (last stored key <= raw)."""
        order = self._order
        lo, hi = 0, len(order)
        while lo < hi:
            mid = (lo + hi) // 2
            if order[mid].min_raw <= raw:
                lo = mid + 1
            else:
                hi = mid
        return order[lo - 1] if lo else None

    def _succ_record(self, raw: int) -> ActualRecord | None:
        """Leftmost non-empty actual whose maximum key is > raw: the one
        holding the successor (first stored key strictly greater)."""
        order = self._order
        lo, hi = 0, len(order)
        while lo < hi:
            mid = (lo + hi) // 2
            if order[mid].max_raw > raw:
                hi = mid
            else:
                lo = mid + 1
        return order[lo] if lo < len(order) else None

    def neighbor_actuals(self, raw: int) -> tuple[ActualRecord | None, ActualRecord | None]:
        """Actuals holding the predecessor and successor of `raw` (None when
        the neighbor does not exist; callers fall back to the first/last
        actual per the routing rule)."""
        return self._pred_record(raw), self._succ_record(raw)

    def _node_at_rank(self, rank: int) -> tuple[int, int]:
        leaf = rank - 1
        h = int(self._heights[leaf])
        return h, leaf >> h

    def _last_rank_start(self) -> int:
        h = int(self._heights[self.n - 1])
        return (((self.n - 1) >> h) << h) + 1

    def route(self, raw: int, predicted_rank: int) -> tuple[int, int]:
        """Pick the destination actual for a key, as (height, node index).

        The predicted actual wins unless the predecessor lies right of it
        (insert there) or the successor lies left of it (insert there) —
        otherwise sorted order inside the boxes would break.
        """
        r = clamp(predicted_rank, 1, self.capacity)
        hx, nx = self._node_at_rank(r)
        x_start = (nx << hx) + 1
        p_rec, s_rec = self.neighbor_actuals(raw)
        p_start = p_rec.rank_start if p_rec is not None else 1
        s_start = s_rec.rank_start if s_rec is not None else self._last_rank_start()
        if p_start > x_start:
            return p_rec.height, p_rec.node
        if s_start < x_start:
            return s_rec.height, s_rec.node
        return hx, nx

    # ------------------------------------------------------------------
    # mutation

    def insert(self, raw: int, seq: int, predicted_rank: int) -> int:
        """Insert a key with its predicted rank; returns movements charged."""
        if self.count >= self.capacity:
            raise CapacityError(f"structure already holds {self.capacity} elements")
        before = self.ledger.total_movements
        h, node = self.route(raw, predicted_rank)
        key = (h, node)
        rec = self._records.get(key)
        if rec is None:
            rec = ActualRecord(h, node)
            rec.box = self.factory(6 << h, self.ledger)
            self._records[key] = rec
            self._order.add(rec)
        rec.box.insert(raw, seq)
        if rec.count == 0:
            rec.min_raw = rec.max_raw = raw
        else:
            if raw < rec.min_raw:
                rec.min_raw = raw
            if raw > rec.max_raw:
                rec.max_raw = raw
        rec.count += 1
        self.count += 1
        self.predicted_rank[seq] = clamp(predicted_rank, 1, self.capacity)
        # Half-density rule: a box sized 6r rebuilds into its parent once it
        # holds 3r+1 elements. The rebuild can push the parent over in turn.
        while rec.count * 2 > 6 * rec.rank_width():
            rec = self.merge_parent(rec)
        return self.ledger.total_movements - before

    def merge_parent(self, rec: ActualRecord) -> ActualRecord:
        """Rebuild the parent of `rec`'s node into a single fresh actual.

        Gathers every element stored under the parent (their concatenation in
        actual order is already sorted), bulk-loads a new box, and charges one
        movement per element whose global label actually changed.
        """
        if rec.rank_width() == self.n:
            raise AssertionError("root actual exceeded half density")
        ph = rec.height + 1
        pnode = rec.node >> 1
        parent = ActualRecord(ph, pnode)
        children = list(self._order.irange_key(parent.rank_start, parent.rank_end))
        raws: list[int] = []
        seqs: list[int] = []
        old_globals: list[int] = []
        for child in children:
            off = child.slot_start - 1
            for craw, cseq, clabel in child.box.labels():
                raws.append(craw)
                seqs.append(cseq)
                old_globals.append(off + clabel)
        box = self.factory(6 << ph, None)  # accounting done here, not in init
        box.init(raws, seqs)
        box.ledger = self.ledger
        poff = parent.slot_start - 1
        moved = 0
        for old, (_r, _s, label) in zip(old_globals, box.labels()):
            if old != poff + label:
                moved += 1
        self.ledger.record_moves(moved)

        for child in children:
            del self._records[(child.height, child.node)]
            self._order.remove(child)
        first_leaf = pnode << ph
        self._heights[first_leaf:first_leaf + (1 << ph)] = ph
        parent.box = box
        parent.count = len(raws)
        parent.min_raw = raws[0]
        parent.max_raw = raws[-1]
        self._records[(ph, pnode)] = parent
        self._order.add(parent)
        self.merges += 1
        if self.merge_listener is not None:
            self.merge_listener(self, parent)
        return parent

    # ------------------------------------------------------------------
    # inspection

    def global_labels(self) -> list[tuple[int, int, int]]:
        """Every element as (raw, seq, global label), in label order."""
        out = []
        for rec in self._order:
            off = rec.slot_start - 1
            for raw, seq, label in rec.box.labels():
                out.append((raw, seq, off + label))
        return out

    def actuals(self) -> list[ActualRecord]:
        """Non-empty actuals in rank order (empty ones are implicit)."""
        return list(self._order)

    def partition(self) -> list[tuple[int, int]]:
        """The full actual partition as (height, node) pairs, left to right,
        including empty actuals."""
        out = []
        leaf = 0
        while leaf < self.n:
            h = int(self._heights[leaf])
            out.append((h, leaf >> h))
            leaf += 1 << h
        return out

    def amortized_cost(self) -> float:
        return self.ledger.amortized_cost()


def witness_error_check(
    lla: LearnedLLA,
    merged: ActualRecord,
    true_ranks: dict[int, int],
) -> bool:
    """Verify the merge witness: some element of a merged actual P carries a
    prediction error of at least |P|/2 ranks.

    `true_ranks` maps seq -> final rank in the fully-loaded structure. Merges
    are only ever triggered by misrouted elements, so on distinct keys this
    must hold for every merge; it is the per-merge certificate that total
    cost stays bounded by total prediction error.
    """
    if merged.box is None:
        return False
    half_width = merged.rank_width() / 2
    for _raw, seq, _label in merged.box.labels():
        predicted = lla.predicted_rank.get(seq)
        actual = true_ranks.get(seq)
        if predicted is None or actual is None:
            continue
        if abs(predicted - actual) >= half_width:
            return True
    return False
