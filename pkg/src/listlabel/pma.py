"""Packed-memory array (PMA): a sorted sparse array with density thresholds.

Keys live in an array of m slots organized as an implicit binary tree over
fixed-size leaf ranges.  A node at depth k tolerates densities up to
tau(k) = tau_root + (tau_leaf - tau_root) * k / d, looser toward the leaves.
An insert lands in the leaf range that keeps order; if that leaf is above its
threshold, the lowest ancestor still within threshold is rebalanced by even
redistribution before the element is placed.  Within the leaf the new element
takes the free slot next to its predecessor, shifting at most a few neighbors
by one slot, so cheap inserts stay cheap and the labels of untouched elements
never change.

Movements are counted per element whose slot (label) actually changes; an
element that a rebalance happens to leave in place costs nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CapacityError, Key, LabeledArray, MovementLedger

INF_RAW = 2**63 - 1
NEG_INF_RAW = -(2**63)


@dataclass(frozen=True)
class PmaThresholds:
    """Density bounds: upper (tau) interpolates root->leaf, lower (rho) too.

    The lower bounds only matter for structures that shrink; they are kept so
    configurations round-trip, and validated for sanity.
    """

    rho_leaf: float = 0.1
    rho_root: float = 0.2
    tau_root: float = 0.5
    tau_leaf: float = 0.9

    def __post_init__(self):
        if not (self.rho_leaf <= self.rho_root < self.tau_root < self.tau_leaf):
            raise ValueError(f"thresholds out of order: {self}")


DEFAULT_THRESHOLDS = PmaThresholds()


def tau_at_depth(k: int, depth: int, t: PmaThresholds = DEFAULT_THRESHOLDS) -> float:
    """Upper density threshold for a node at depth k (root is depth 0)."""
    if not 0 <= k <= max(depth, 0):
        raise ValueError(f"depth {k} outside [0, {depth}]")
    ratio = k / depth if depth else 0.0
    return t.tau_root + (t.tau_leaf - t.tau_root) * ratio


def rho_at_depth(k: int, depth: int, t: PmaThresholds = DEFAULT_THRESHOLDS) -> float:
    """Lower density threshold for a node at depth k."""
    if not 0 <= k <= max(depth, 0):
        raise ValueError(f"depth {k} outside [0, {depth}]")
    ratio = k / depth if depth else 0.0
    return t.rho_root - (t.rho_root - t.rho_leaf) * ratio


def plan_layout(slot_count: int) -> tuple[int, int, int]:
    """Choose (leaf_size, depth, total_slots) for a requested slot count.

    Leaves hold Theta(log m) slots.  The tree must tile the array exactly
    with 2^depth equal leaves, so leaf sizes are drawn from {2^j} and
    {3 * 2^j}; the second family lets sizes of the form 6 * 2^h (the sizes
    the learned wrapper allocates) tile without padding.  Counts that fit
    neither family are rounded up to the next power-of-two-leaf layout.
    """
    if slot_count < 2:
        raise ValueError("need at least 2 slots")
    min_leaf = max(2, (slot_count - 1).bit_length())  # ceil(log2(slot_count))
    odd, twos = slot_count, 0
    while odd % 2 == 0:
        odd //= 2
        twos += 1
    if odd in (1, 3):
        for j in range(twos + 1):
            leaf = odd << j
            if leaf >= min_leaf:
                return leaf, twos - j, slot_count
    leaf = 1 << (min_leaf - 1).bit_length()  # next power of two >= min_leaf
    depth = 0
    while leaf << depth < slot_count:
        depth += 1
    return leaf, depth, leaf << depth


class Pma:
    """The array itself.  Entries are (raw, seq) int pairs; labels are 1-based.

    If `ledger` is given, inserts and init charge it; otherwise movement
    counts are only returned to the caller (a wrapper that does its own
    accounting passes ledger=None).
    """

    def __init__(
        self,
        slot_count: int,
        thresholds: PmaThresholds = DEFAULT_THRESHOLDS,
        ledger: MovementLedger | None = None,
    ):
        leaf, depth, total = plan_layout(slot_count)
        self.leaf_size = leaf
        self.depth = depth
        self.slot_count = total
        self.thresholds = thresholds
        self.ledger = ledger
        self.num_leaves = 1 << depth
        self.slots: list[tuple[int, int] | None] = [None] * total
        self.count = 0
        # Implicit binary tree in heap order: node 1 is the root, leaves sit
        # at indices [num_leaves, 2 * num_leaves).  Per node we track element
        # count and min/max raw key of the subtree, so predecessor/successor
        # searches and threshold walks never scan more than one leaf.
        n = self.num_leaves
        self._cnt = [0] * (2 * n)
        self._min = [INF_RAW] * (2 * n)
        self._max = [NEG_INF_RAW] * (2 * n)
        self._tau = [
            tau_at_depth(k, depth, thresholds) for k in range(depth + 1)
        ]

    # ------------------------------------------------------------------
    # public surface

    def density(self) -> float:
        return self.count / self.slot_count

    def node_density(self, node: int) -> float:
        """Density of a heap-order node (1 = root)."""
        return self._cnt[node] / self._node_size(node)

    def labels(self) -> list[tuple[int, int, int]]:
        return [
            (entry[0], entry[1], pos + 1)
            for pos, entry in enumerate(self.slots)
            if entry is not None
        ]

    @property
    def array(self) -> LabeledArray:
        return LabeledArray(
            [Key(e[0], e[1]) if e is not None else None for e in self.slots]
        )

    def init(self, raws, seqs) -> int:
        """Bulk-load sorted keys, evenly spread across the whole array."""
        c = len(raws)
        if c > self.slot_count:
            raise CapacityError(f"{c} keys into {self.slot_count} slots")
        if self.count:
            raise ValueError("init on a non-empty array")
        if any(raws[i] > raws[i + 1] for i in range(c - 1)):
            raise ValueError("init expects sorted keys")
        m = self.slot_count
        for i in range(c):
            self.slots[i * m // c] = (raws[i], seqs[i])
        self.count = c
        self._rebuild_tree(1)
        if self.ledger is not None:
            self.ledger.record_init(c)
        return 0 if (self.ledger is None or self.ledger.first_placement_excluded) else c

    def insert(self, raw: int, seq: int = 0) -> int:
        """Insert a key, returning the movements of already-present elements.

        Raises CapacityError when even the root is above threshold (callers
        that want growth must rebuild into a bigger array themselves).
        """
        pos, moved = self._insert_impl(raw, seq)
        self._after_insert(pos)
        if self.ledger is not None:
            self.ledger.record_insert(moved)
        return moved

    # ------------------------------------------------------------------
    # geometry helpers

    def _node_depth(self, node: int) -> int:
        return node.bit_length() - 1

    def _node_size(self, node: int) -> int:
        return (self.num_leaves >> self._node_depth(node)) * self.leaf_size

    def _node_slot_range(self, node: int) -> tuple[int, int]:
        k = self._node_depth(node)
        width = self.num_leaves >> k  # leaves under this node
        first_leaf = (node << (self.depth - k)) - self.num_leaves
        return first_leaf * self.leaf_size, (first_leaf + width) * self.leaf_size

    # ------------------------------------------------------------------
    # searches (heap descents; never scan more than one leaf range)

    def _pred_slot(self, raw: int) -> int | None:
        """Rightmost occupied slot with key <= raw, or None."""
        if self.count == 0 or self._min[1] > raw:
            return None
        v = 1
        n = self.num_leaves
        while v < n:
            r = 2 * v + 1
            if self._cnt[r] > 0 and self._min[r] <= raw:
                v = r
            else:
                v = 2 * v
        lo = (v - n) * self.leaf_size
        for pos in range(lo + self.leaf_size - 1, lo - 1, -1):
            e = self.slots[pos]
            if e is not None and e[0] <= raw:
                return pos
        raise AssertionError("tree min/max counters out of sync")

    def _leftmost_occupied(self, v: int) -> int:
        n = self.num_leaves
        while v < n:
            v = 2 * v if self._cnt[2 * v] > 0 else 2 * v + 1
        lo = (v - n) * self.leaf_size
        for pos in range(lo, lo + self.leaf_size):
            if self.slots[pos] is not None:
                return pos
        raise AssertionError("tree counters out of sync")

    def _next_occupied(self, slot: int) -> int | None:
        """First occupied slot strictly after `slot`, or None."""
        leaf_end = (slot // self.leaf_size + 1) * self.leaf_size
        for pos in range(slot + 1, leaf_end):
            if self.slots[pos] is not None:
                return pos
        v = self.num_leaves + slot // self.leaf_size
        while v > 1:
            if v % 2 == 0 and self._cnt[v + 1] > 0:
                return self._leftmost_occupied(v + 1)
            v >>= 1
        return None

    # ------------------------------------------------------------------
    # insert machinery

    def _insert_impl(self, raw: int, seq: int) -> tuple[int, int]:
        if self.count >= self.slot_count:
            raise CapacityError("array full")
        sp = self._pred_slot(raw)
        ss = self._leftmost_occupied(1) if (sp is None and self.count) else (
            self._next_occupied(sp) if sp is not None else None
        )
        leaf = self._target_leaf(sp, ss)

        # Walk up until a node tolerates one more element (checked against
        # the pre-insert count, so a box sized 6r admits its (3r+1)-th
        # element before the owner decides to rebuild).
        n = self.num_leaves
        node = n + leaf
        k = self.depth
        while self._cnt[node] > self._tau[k] * self._node_size(node):
            node >>= 1
            k -= 1
            if node == 0:
                raise CapacityError("root above density threshold")
        moved = 0
        if node != n + leaf:
            moved = self._rebalance(node, raw)
            sp = self._pred_slot(raw)
            ss = self._leftmost_occupied(1) if (sp is None and self.count) else (
                self._next_occupied(sp) if sp is not None else None
            )
            leaf = self._target_leaf(sp, ss)

        pos, shifted = self._place_in_leaf(leaf, raw, seq, sp, ss)
        moved += shifted
        v = n + leaf
        while v >= 1:
            self._cnt[v] += 1
            if raw < self._min[v]:
                self._min[v] = raw
            if raw > self._max[v]:
                self._max[v] = raw
            v >>= 1
        self.count += 1
        return pos, moved

    def _target_leaf(self, sp: int | None, ss: int | None) -> int:
        if sp is not None:
            return min(sp + 1, self.slot_count - 1) // self.leaf_size
        if ss is not None:
            return max(ss - 1, 0) // self.leaf_size
        return 0

    def _place_in_leaf(
        self, leaf: int, raw: int, seq: int, sp: int | None, ss: int | None
    ) -> tuple[int, int]:
        """Put the key into `leaf` between its neighbors; returns (pos, moved)."""
        L = self.leaf_size
        lo, hi = leaf * L, (leaf + 1) * L
        slots = self.slots
        a = lo if sp is None else max(sp + 1, lo)
        b = hi if ss is None else min(ss, hi)
        if a < b:
            # The window strictly between the neighbors is free by
            # construction; hug the predecessor (duplicates land after their
            # equals), or the successor when there is no predecessor.
            pos = a if sp is not None or ss is None else b - 1
            slots[pos] = (raw, seq)
            return pos, 0
        # No free slot between the neighbors inside this leaf: shift the
        # shorter run by one toward the nearest gap (ties go right).
        f_r = next((p for p in range(b, hi) if slots[p] is None), None)
        f_l = next((p for p in range(min(a, hi) - 1, lo - 1, -1) if slots[p] is None), None)
        cost_r = f_r - b if f_r is not None else None
        cost_l = a - 1 - f_l if f_l is not None else None
        if cost_r is not None and (cost_l is None or cost_r <= cost_l):
            for p in range(f_r, b, -1):
                slots[p] = slots[p - 1]
            slots[b] = (raw, seq)
            return b, cost_r
        if cost_l is None:
            raise AssertionError("leaf admitted an insert but has no free slot")
        for p in range(f_l, a - 1):
            slots[p] = slots[p + 1]
        slots[a - 1] = (raw, seq)
        return a - 1, cost_l

    def _after_insert(self, pos: int) -> None:
        """Hook for adaptive variants (insert-distribution bookkeeping)."""

    # ------------------------------------------------------------------
    # rebalancing

    def _layout(
        self,
        entries: list[tuple[int, int]],
        lo: int,
        size: int,
        first_leaf: int,
        old_pos: list[int],
        pending_raw: int | None = None,
    ) -> list[int]:
        """Slot positions for `entries` within [lo, lo+size): even spread,
        left-anchored, remainder gaps pushed right.

        `pending_raw` is the key whose insert triggered the redistribution
        (None when rebalancing for other reasons); the even layout ignores
        it, adaptive variants may aim free space at its gap."""
        c = len(entries)
        return [lo + i * size // c for i in range(c)]

    def _rebalance(self, node: int, pending_raw: int | None = None) -> int:
        """Redistribute the node's range; returns how many elements moved."""
        lo, hi = self._node_slot_range(node)
        slots = self.slots
        entries = []
        old_pos = []
        for p in range(lo, hi):
            if slots[p] is not None:
                entries.append(slots[p])
                old_pos.append(p)
                slots[p] = None
        if not entries:
            return 0
        first_leaf = lo // self.leaf_size
        new_pos = self._layout(entries, lo, hi - lo, first_leaf, old_pos, pending_raw)
        moved = 0
        for entry, np_, op in zip(entries, new_pos, old_pos):
            slots[np_] = entry
            if np_ != op:
                moved += 1
        self._rebuild_tree(node)
        return moved

    def _rebuild_tree(self, node: int) -> None:
        """Recompute cnt/min/max for the subtree under `node` (inclusive),
        then fix the ancestors."""
        n = self.num_leaves
        k = self._node_depth(node)
        first_leaf = (node << (self.depth - k)) - n
        width = n >> k
        L = self.leaf_size
        for leaf in range(first_leaf, first_leaf + width):
            lo = leaf * L
            cnt = 0
            mn, mx = INF_RAW, NEG_INF_RAW
            for p in range(lo, lo + L):
                e = self.slots[p]
                if e is not None:
                    cnt += 1
                    if e[0] < mn:
                        mn = e[0]
                    if e[0] > mx:
                        mx = e[0]
            v = n + leaf
            self._cnt[v], self._min[v], self._max[v] = cnt, mn, mx
        level_lo, level_hi = (n + first_leaf) >> 1, (n + first_leaf + width) >> 1
        while level_lo >= 1:
            for v in range(level_lo, max(level_hi, level_lo + 1)):
                l, r = 2 * v, 2 * v + 1
                self._cnt[v] = self._cnt[l] + self._cnt[r]
                self._min[v] = min(self._min[l], self._min[r])
                self._max[v] = max(self._max[l], self._max[r])
            level_lo, level_hi = level_lo >> 1, level_hi >> 1
