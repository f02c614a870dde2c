"""Relational Color Refinement, the naive reference implementation.

Colors live on tuple occurrences.  The initial color of a is (atp(a), stp(a));
each round appends the multiset, over all occurrences b overlapping a, of
(stp(a, b), previous color of b).  Colors are interned integers; the nested
value is recoverable from the interner log.  Ids are only comparable within
one run, so cross-structure questions refine the disjoint union.
"""

from __future__ import annotations

import io
from typing import Optional

from .core import Structure, disjoint_union, stp, strictly_equal_size


class ColorInterner:
    """Injective map from canonical color keys to dense ids.

    Keys are ("base", atp, stp) at round 0 and ("step", prev_id, multiset)
    afterwards, where multiset is the sorted tuple of (stp-encoding,
    neighbor id) pairs, duplicates retained."""

    def __init__(self):
        self.table: dict = {}
        self.log: list = []

    def intern(self, key) -> int:
        c = self.table.get(key)
        if c is None:
            c = len(self.log)
            self.table[key] = c
            self.log.append(key)
        return c

    def decode(self, color: int):
        return self.log[color]


class RefinementTrace:
    def __init__(self, structure, rounds, interner, class_counts):
        self.structure = structure
        self.rounds = rounds                  # per round: color per Tup position
        self.interner = interner
        self.class_counts = class_counts
        self.stable_round = len(rounds) - 1

    def colors_at(self, i):
        """Round-i colors; past stability the partition repeats."""
        return self.rounds[min(i, self.stable_round)]

    def histogram_at(self, i, positions=None):
        cols = self.colors_at(i)
        if positions is not None:
            cols = [cols[k] for k in positions]
        hist: dict = {}
        for c in cols:
            hist[c] = hist.get(c, 0) + 1
        return hist

    def partition_at(self, i, positions=None):
        cols = self.colors_at(i)
        blocks: dict = {}
        for k in (range(len(cols)) if positions is None else positions):
            blocks.setdefault(cols[k], []).append(k)
        return frozenset(frozenset(b) for b in blocks.values())

    def round_of_color(self, color: int) -> int:
        """Refinement round a color id belongs to (nesting depth of its key)."""
        key = self.interner.decode(color)
        if key[0] == "base":
            return 0
        return self.round_of_color(key[1]) + 1

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("round,relation,tuple_index,color_id\n")
        for i, cols in enumerate(self.rounds):
            for k, ref in enumerate(self.structure.tuple_refs):
                out.write("%d,%s,%d,%d\n" % (i, ref.relation, ref.index, cols[k]))
        return out.getvalue()


def _stp_key(tau) -> tuple:
    return tuple(sorted(tau))


def rcr_run(A: Structure, max_rounds: Optional[int] = None,
            interner: Optional[ColorInterner] = None) -> RefinementTrace:
    if max_rounds is None:
        max_rounds = A.size()  # the stable round index never exceeds |Tup|
    interner = interner or ColorInterner()
    refs = A.tuple_refs
    vecs = [A.vector(r) for r in refs]
    nbrs = A.overlap_neighbours()
    # stp never changes across rounds, compute the encodings once; the
    # occurrence itself always overlaps itself and belongs in the multiset
    stp_enc = [
        [(b, _stp_key(stp(vecs[a], vecs[b]))) for b in nbrs[a]] +
        [(a, _stp_key(stp(vecs[a], vecs[a])))]
        for a in range(len(refs))]

    colors = [
        interner.intern(("base",
                         tuple(sorted(A.atp(vecs[a]))),
                         _stp_key(stp(vecs[a], vecs[a]))))
        for a in range(len(refs))]
    rounds = [colors]
    class_counts = [len(set(colors))]
    for _ in range(max_rounds):
        prev = rounds[-1]
        nxt = [
            interner.intern((
                "step", prev[a],
                tuple(sorted((tau, prev[b]) for b, tau in stp_enc[a]))))
            for a in range(len(refs))]
        ncls = len(set(nxt))
        if ncls == class_counts[-1]:
            break  # refinement: equal class count means equal partition
        rounds.append(nxt)
        class_counts.append(ncls)
    return RefinementTrace(A, rounds, interner, class_counts)


class CompareResult:
    """Joint refinement of two structures with per-side bookkeeping."""

    def __init__(self, A, B):
        self.union, self.info = disjoint_union(A, B)
        self.trace = rcr_run(self.union)
        self.pos = {"A": [], "B": []}
        for k, ref in enumerate(self.union.tuple_refs):
            self.pos[self.info.side(ref)].append(k)
        self.round = None
        self.color = None
        for i in range(self.trace.stable_round + 1):
            ha = self.trace.histogram_at(i, self.pos["A"])
            hb = self.trace.histogram_at(i, self.pos["B"])
            if ha != hb:
                self.round = i
                diff = [c for c in sorted(set(ha) | set(hb))
                        if ha.get(c, 0) != hb.get(c, 0)]
                self.color = diff[0]
                break

    def side_histogram(self, i, side):
        return self.trace.histogram_at(i, self.pos[side])

    def side_colors(self, i, side):
        cols = self.trace.colors_at(i)
        return [cols[k] for k in self.pos[side]]


def rcr_compare(A: Structure, B: Structure) -> CompareResult:
    return CompareResult(A, B)


def rcr_distinguishes(A: Structure, B: Structure):
    """Smallest round with a color count differing between A and B, plus a
    witness color, or None.  Unequal relation sizes always show in round 0
    because atomic types are part of the initial color."""
    res = rcr_compare(A, B)
    if res.round is None:
        return None
    if not strictly_equal_size(A, B):
        assert res.round == 0
    return res.round, res.color
