"""Layered representation of planar monoidal diagrams.

A diagram here is a tuple of slices ``(offset, box)`` read bottom to top.  A box
consumes ``box.n_in`` adjacent wires starting at ``offset`` and emits
``box.n_out`` wires in their place; everything else passes through.  Boxes must
expose ``inputs``, ``outputs``, ``n_in``, ``n_out`` and ``sort_key()``.

Nothing in this module knows what the wires mean, so the same machinery serves
both plain string diagrams and envelope diagrams.
"""

from __future__ import annotations

from typing import Optional, Sequence

Slice = tuple  # (offset, box)


def apply_slice(boundary: tuple, sl: Slice) -> tuple:
    off, box = sl
    n = box.n_in
    if off < 0 or off + n > len(boundary) or tuple(boundary[off:off + n]) != tuple(box.inputs):
        raise TypeError(f"slice {box!r} at offset {off} does not fit boundary {boundary!r}")
    return tuple(boundary[:off]) + tuple(box.outputs) + tuple(boundary[off + n:])


def boundaries(dom: tuple, slices: Sequence[Slice]) -> list:
    """All intermediate boundaries; ``result[i]`` is the boundary below slice ``i``."""
    out = [tuple(dom)]
    for sl in slices:
        out.append(apply_slice(out[-1], sl))
    return out


def exchange(lower: Slice, upper: Slice) -> Optional[tuple]:
    """Swap two adjacent slices acting on disjoint wires.

    Returns ``(new_lower, new_upper)`` or ``None`` when the slices interact.
    When both placements are legal (a cup sitting where a cap closed a wire)
    the left one is chosen.
    """
    o1, a = lower
    o2, b = upper
    if o2 + b.n_in <= o1:
        return (o2, b), (o1 + b.n_out - b.n_in, a)
    if o2 >= o1 + a.n_out:
        return (o2 - a.n_out + a.n_in, b), (o1, a)
    return None


def independent(lower: Slice, upper: Slice) -> bool:
    return exchange(lower, upper) is not None


def offset_after_descent(seq: Sequence[Slice], k: int, p: int) -> Optional[int]:
    """Offset slice ``k`` would have after sliding down to position ``p``."""
    cur = seq[k]
    for idx in range(k - 1, p - 1, -1):
        r = exchange(seq[idx], cur)
        if r is None:
            return None
        cur = r[0]
    return cur[0]


def bubble_down(seq: Sequence[Slice], k: int, p: int) -> Optional[list]:
    cur = seq[k]
    passed = []
    for idx in range(k - 1, p - 1, -1):
        r = exchange(seq[idx], cur)
        if r is None:
            return None
        cur, above = r
        passed.append(above)
    return list(seq[:p]) + [cur] + passed[::-1] + list(seq[k + 1:])


def bubble_up(seq: Sequence[Slice], k: int, p: int) -> Optional[list]:
    cur = seq[k]
    passed = []
    for idx in range(k + 1, p + 1):
        r = exchange(cur, seq[idx])
        if r is None:
            return None
        below, cur = r
        passed.append(below)
    return list(seq[:k]) + passed + [cur] + list(seq[p + 1:])


def canonical(slices: Sequence[Slice]) -> tuple:
    """Interchange normal form: a deterministic representative of the class.

    Greedy construction: at each height place, among the slices that can be
    slid down to that height, the one with the smallest (offset, sort_key).
    A box without outputs followed by a box without inputs at the same gap
    can be redrawn with the second box on either side, so one greedy pass may
    not see every placement; passes are repeated until nothing changes.
    """
    seen = []
    cur = tuple(slices)
    while cur not in seen:
        seen.append(cur)
        cur = _greedy(cur)
        if len(seen) > len(slices) + 2:
            break
    if cur in seen[:-1] and cur != seen[-1]:
        # a cycle: pick its smallest member so the answer does not depend on entry point
        cyc = seen[seen.index(cur):]
        return min(cyc, key=_seq_key)
    return cur


def _seq_key(seq):
    return tuple((o, b.sort_key()) for o, b in seq)


def _greedy(slices):
    seq = list(slices)
    n = len(seq)
    for p in range(n):
        best_key = None
        ties = []
        for k in range(p, n):
            off = offset_after_descent(seq, k, p)
            if off is None:
                continue
            key = (off, seq[k][1].sort_key())
            if best_key is None or key < best_key:
                best_key, ties = key, [k]
            elif key == best_key:
                ties.append(k)
        k = ties[0] if len(ties) == 1 else _leftmost(seq, p, ties, best_key[0])
        seq = bubble_down(seq, k, p)
    return tuple(seq)


def _leftmost(seq, p, ties, off):
    # identical zero-input boxes at the same gap: take the planar-leftmost one
    for k in ties:
        trial = bubble_down(seq, k, p)
        ok = True
        for k2 in ties:
            if k2 == k:
                continue
            k2s = k2 + 1 if k2 < k else k2
            o2 = offset_after_descent(trial, k2s, p + 1)
            if o2 is not None and o2 <= off:
                ok = False
                break
        if ok:
            return k
    return ties[0]


def producer(seq: Sequence[Slice], j: int, pos: int) -> Optional[tuple]:
    """Which slice emitted the wire at ``pos`` of the boundary below slice ``j``.

    Returns ``(index, output_port)`` or ``None`` if the wire comes from the domain.
    """
    for idx in range(j - 1, -1, -1):
        off, box = seq[idx]
        if pos < off:
            continue
        if pos >= off + box.n_out:
            pos = pos - box.n_out + box.n_in
            continue
        return idx, pos - off
    return None


def consumer(seq: Sequence[Slice], j: int, pos: int) -> Optional[tuple]:
    """Which slice absorbs the wire at ``pos`` of the boundary above slice ``j``."""
    for idx in range(j + 1, len(seq)):
        off, box = seq[idx]
        if pos < off:
            continue
        if pos >= off + box.n_in:
            pos = pos - box.n_in + box.n_out
            continue
        return idx, pos - off
    return None


def gather(seq: Sequence[Slice], start: int, end: int, k: int) -> Optional[tuple]:
    """Make slice ``k`` directly follow the contiguous block ``seq[start:end+1]``.

    Slices in between are slid past ``k`` when independent of it, otherwise
    pushed below the block.  Returns ``(new_seq, new_start)`` with the former
    ``seq[k]`` at ``new_start + (end - start) + 1``, or ``None``.
    """
    seq = list(seq)
    size = end - start + 1
    while k > start + size:
        m = k - 1
        r = exchange(seq[m], seq[k])
        if r is not None:
            seq[m], seq[k] = r
            k -= 1
            continue
        moved = bubble_down(seq, m, start)
        if moved is None:
            return None
        seq = moved
        start += 1
    return seq, start


def gather_all(seq: Sequence[Slice], idxs: Sequence[int]) -> Optional[tuple]:
    """Make the slices at ``idxs`` (increasing) contiguous, keeping their order.

    Returns ``(new_seq, start)``; the gathered slices occupy
    ``new_seq[start:start+len(idxs)]``.
    """
    idxs = sorted(idxs)
    seq = list(seq)
    start = idxs[0]
    pending = list(idxs[1:])
    size = 1
    while pending:
        k = pending.pop(0)
        r = gather(seq, start, start + size - 1, k)
        if r is None:
            return None
        new_seq, new_start = r
        # later members never move: gathering only touches positions <= k,
        # but the block shift may push slices below, which keeps later indices fixed
        seq, start = new_seq, new_start
        size += 1
    return seq, start
