"""Brute-force overpartition counters.

These are the combinatorial oracles: direct enumerations with no
generating-function machinery.  One side counts overpartitions whose
parts lie in fixed residue classes; the other counts overpartitions
subject to gap conditions driven by the weight maps of the modulus
system.  The two sides agreeing entrywise is the identity everything
else in the package verifies.

An overpartition is a weakly decreasing sequence of parts in which the
first occurrence of each part size may be overlined; ``k`` always
denotes the number of non-overlined parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alpha_system import beta


class MalformedOverpartition(ValueError):
    """Part list is not a structurally valid overpartition."""


@dataclass(frozen=True)
class Overpartition:
    """Parts as ``(size, overlined)`` pairs, sizes weakly decreasing.

    Within a run of equal sizes the overlined copy, if any, comes first;
    this is the canonical placement, and each size carries at most one
    overline.
    """

    parts: tuple

    def __init__(self, parts):
        object.__setattr__(
            self, "parts",
            tuple((int(s), bool(o)) for s, o in parts))

    @property
    def n(self):
        return sum(s for s, _ in self.parts)

    @property
    def k(self):
        """Number of non-overlined parts."""
        return sum(1 for _, o in self.parts if not o)

    def validate(self):
        """Raise ``MalformedOverpartition`` unless structurally valid."""
        seen_overlined = set()
        prev = None
        for size, overlined in self.parts:
            if size <= 0:
                raise MalformedOverpartition(f"non-positive part {size}")
            if prev is not None:
                if size > prev[0]:
                    raise MalformedOverpartition("parts must be decreasing")
                if size == prev[0] and overlined:
                    raise MalformedOverpartition(
                        "overlined copy must come first in a run of "
                        f"equal parts ({size})")
            if overlined:
                if size in seen_overlined:
                    raise MalformedOverpartition(
                        f"size {size} overlined twice")
                seen_overlined.add(size)
            prev = (size, overlined)
        return self

    def __str__(self):
        if not self.parts:
            return "(empty)"
        return " + ".join(f"{s}~" if o else str(s) for s, o in self.parts)


@dataclass
class CountTable:
    """Exact counts indexed by ``(k, n)`` with ``0 <= n <= n_max``.

    Entry ``(0, 0)`` is always 1 (the empty overpartition).  Absent
    entries are zero.
    """

    n_max: int
    entries: dict = field(default_factory=dict)

    def get(self, k, n):
        return self.entries.get((k, n), 0)

    def max_k(self):
        return max((k for k, _ in self.entries), default=0)

    def row(self, n, width=None):
        """Counts for fixed ``n`` as a list over ``k = 0..width``."""
        if width is None:
            width = self.max_k()
        return [self.get(k, n) for k in range(width + 1)]

    def sum_over_k(self, n):
        return sum(c for (k, nn), c in self.entries.items() if nn == n)

    def __eq__(self, other):
        if not isinstance(other, CountTable):
            return NotImplemented
        return (self.n_max == other.n_max
                and _nonzero(self.entries) == _nonzero(other.entries))

    def first_mismatch(self, other):
        """First ``(k, n, self_count, other_count)`` difference, or None."""
        keys = sorted(set(_nonzero(self.entries)) | set(_nonzero(other.entries)),
                      key=lambda kn: (kn[1], kn[0]))
        for k, n in keys:
            if self.get(k, n) != other.get(k, n):
                return (k, n, self.get(k, n), other.get(k, n))
        return None

    def to_json_obj(self, system=None, side=None):
        obj = {}
        if system is not None:
            obj["system"] = {"N": system.N, "a": list(system.a)}
        obj["n_max"] = self.n_max
        if side is not None:
            obj["side"] = side
        width = self.max_k()
        obj["rows"] = [
            {"n": n, "by_k": [str(c) for c in self.row(n, width)]}
            for n in range(self.n_max + 1)
        ]
        return obj


def _nonzero(entries):
    return {kn: c for kn, c in entries.items() if c}


def _table_from_size_set(sizes, n_max):
    """Count overpartitions of each ``n <= n_max`` with parts in ``sizes``.

    Per size a multiplicity is chosen freely; if positive, the first
    copy is either overlined or not.  Counts are refined by the number
    of non-overlined parts.
    """
    sizes = sorted(sizes)
    memo = {}

    def rec(n_rem, idx):
        if n_rem == 0:
            return {0: 1}
        if idx >= len(sizes) or sizes[idx] > n_rem:
            return {}
        key = (n_rem, idx)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out = dict(rec(n_rem, idx + 1))
        s = sizes[idx]
        mu = 1
        while mu * s <= n_rem:
            for k, c in rec(n_rem - mu * s, idx + 1).items():
                out[k + mu] = out.get(k + mu, 0) + c          # none overlined
                out[k + mu - 1] = out.get(k + mu - 1, 0) + c  # first overlined
            mu += 1
        memo[key] = out
        return out

    entries = {}
    for n in range(n_max + 1):
        for k, c in rec(n, 0).items():
            if c:
                entries[(k, n)] = c
    table = CountTable(n_max, entries)
    table.entries[(0, 0)] = 1
    return table


def count_all_overpartitions(n_max):
    """Unrestricted overpartition counts by ``(k, n)``; sanity oracle."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    return _table_from_size_set(range(1, n_max + 1), n_max)


def count_F(sys, n_max):
    """Count overpartitions with every part ``= -a(i) mod N``.

    Direct enumeration over admissible part sizes; entry ``(k, n)`` is
    the number of such overpartitions of ``n`` with ``k`` non-overlined
    parts.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    allowed = set(sys.a)
    sizes = [s for s in range(1, n_max + 1) if beta(sys, -s) in allowed]
    return _table_from_size_set(sizes, n_max)


def _smallest_part_ok(sys, size):
    res = beta(sys, -size)
    return size >= sys.N * (sys.w_table[res] - 1)


def _gap_ok(sys, larger, smaller, smaller_overlined):
    res = beta(sys, -larger)
    w = sys.w_table[res]
    v = sys.v_table[res]
    need = sys.N * (w - 1 + (1 if smaller_overlined else 0)) + v - res
    return larger - smaller >= need


def check_G_conditions(sys, op):
    """Decide membership in the gap-condition class of overpartitions.

    True iff (i) every part size is congruent to ``-alpha mod N`` for
    some subset sum ``alpha``, (ii) the smallest part ``p`` satisfies
    ``p >= N * (w(beta(-p)) - 1)``, and (iii) each adjacent pair
    ``larger >= smaller`` keeps a gap of at least
    ``N * (w(res) - 1 + [smaller overlined]) + v(res) - res`` where
    ``res = beta(-larger)`` is the larger part's residue.
    """
    op.validate()
    alpha_set = set(sys.alpha)
    parts = op.parts
    if not parts:
        return True
    for size, _ in parts:
        if beta(sys, -size) not in alpha_set:
            return False
    if not _smallest_part_ok(sys, parts[-1][0]):
        return False
    for (larger, _), (smaller, overlined) in zip(parts, parts[1:]):
        if not _gap_ok(sys, larger, smaller, overlined):
            return False
    return True


def count_G(sys, n_max, largest_bound=None, largest_flag=None):
    """Count gap-condition overpartitions, optionally capping the largest part.

    ``largest_bound`` restricts the largest part; ``largest_flag``
    (``"overlined"`` or ``"non-overlined"``) further restricts its
    overline status.  With no options this is the full gap-condition
    count; with both it is one of the bounded-largest-part counters that
    feed the recurrence machinery.  The ``(0, 0)`` entry stays 1 in
    every variant.

    Enumeration walks parts in decreasing order, pruning with the gap
    bound; completions are memoized by (remaining, previous part).
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if largest_flag not in (None, "overlined", "non-overlined"):
        raise ValueError(f"unknown largest_flag {largest_flag!r}")
    alpha_set = set(sys.alpha)
    admissible = [s for s in range(1, n_max + 1)
                  if beta(sys, -s) in alpha_set]
    memo = {}

    def completions(n_rem, prev):
        # ways to extend below an already placed part `prev`
        if n_rem == 0:
            return {0: 1} if _smallest_part_ok(sys, prev) else {}
        key = (n_rem, prev)
        hit = memo.get(key)
        if hit is not None:
            return hit
        res = beta(sys, -prev)
        base = sys.N * (sys.w_table[res] - 1) + sys.v_table[res] - res
        u_plain = prev - base           # largest allowed non-overlined part
        u_over = u_plain - sys.N        # largest allowed overlined part
        out = {}
        for s in admissible:
            if s > n_rem or s > u_plain:
                break
            sub = completions(n_rem - s, s)
            for k, c in sub.items():
                out[k + 1] = out.get(k + 1, 0) + c
            if s <= u_over:
                for k, c in sub.items():
                    out[k] = out.get(k, 0) + c
        memo[key] = out
        return out

    entries = {(0, 0): 1}
    want_over = largest_flag in (None, "overlined")
    want_plain = largest_flag in (None, "non-overlined")
    for first in admissible:
        if largest_bound is not None and first > largest_bound:
            break
        for n in range(first, n_max + 1):
            sub = completions(n - first, first)
            for k, c in sub.items():
                if want_over:
                    entries[(k, n)] = entries.get((k, n), 0) + c
                if want_plain:
                    entries[(k + 1, n)] = entries.get((k + 1, n), 0) + c
    return CountTable(n_max, entries)


def count_G_andrews_k0(sys, n_max):
    """Ordinary-partition oracle for the zero-marker column.

    Counts partitions (no overlines) whose parts are congruent to some
    ``-alpha mod N``, where each adjacent pair keeps a gap of at least
    ``N * w(res) + v(res) - res`` with ``res = beta(-larger)`` the
    *larger* part's residue, and the smallest part obeys the usual lower
    bound.  Indexing the gap by the smaller part instead provably breaks
    the count identity (it admits 11 + 3 of 14 in the (7, {1,2,4})
    system, whose congruence side has only 6 + 5 + 3), so the larger
    part it is.  Used to cross-check the ``k = 0`` column of
    :func:`count_G`, which it reproduces through a flag-free code path.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    alpha_set = set(sys.alpha)
    admissible = [s for s in range(1, n_max + 1)
                  if beta(sys, -s) in alpha_set]
    memo = {}

    def completions(n_rem, prev):
        if n_rem == 0:
            return 1 if _smallest_part_ok(sys, prev) else 0
        key = (n_rem, prev)
        hit = memo.get(key)
        if hit is not None:
            return hit
        res = beta(sys, -prev)
        need = sys.N * sys.w_table[res] + sys.v_table[res] - res
        total = 0
        for s in admissible:
            if s > n_rem or s > prev - need:
                break
            total += completions(n_rem - s, s)
        memo[key] = total
        return total

    entries = {(0, 0): 1}
    for first in admissible:
        for n in range(first, n_max + 1):
            c = completions(n - first, first)
            if c:
                entries[(0, n)] = entries.get((0, n), 0) + c
    return CountTable(n_max, entries)
