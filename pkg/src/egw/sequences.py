"""Weighted leaf-distance profiles and their combinator algebra.

A profile of length n for degree budget s stores entries x_0..x_{n-1}
where x_i * s / 2**(i+1) is the number of leaf descendants at distance
exactly n-1-i from the profiled node.  All arithmetic is exact: entries
are dyadic rationals and intermediate states may be fractional.

Two representations live here.  ``DistanceSequence`` is the dense tuple
used by tree-level code and tests.  ``RunSeq`` is a run-length-encoded
twin used by the symbolic plan checker, where n runs into the thousands
but profiles have a handful of constant blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError

Frac = Fraction


def _as_frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise ValidationError(f"sequence entries must be exact rationals, got {type(x)}")


def two_adic_valuation(x: Fraction) -> int | None:
    """Exponent of 2 in x (negative for halves); None for x == 0."""
    if x == 0:
        return None
    num, den = x.numerator, x.denominator
    v = 0
    while num % 2 == 0:
        num //= 2
        v += 1
    while den % 2 == 0:
        den //= 2
        v -= 1
    return v


@dataclass(frozen=True)
class DistanceSequence:
    """Dense distance profile (x_0, ..., x_{n-1}) for budget s."""

    n: int
    s: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 1 or self.s < 1:
            raise ValidationError("n and s must be positive")
        if len(self.entries) != self.n:
            raise ValidationError(f"expected {self.n} entries, got {len(self.entries)}")
        object.__setattr__(self, "entries", tuple(_as_frac(x) for x in self.entries))
        if any(x < 0 for x in self.entries):
            raise ValidationError("entries must be nonnegative")

    @classmethod
    def make(cls, n: int, s: int, entries: Iterable) -> "DistanceSequence":
        return cls(n, s, tuple(_as_frac(x) for x in entries))

    @classmethod
    def zeros(cls, n: int, s: int) -> "DistanceSequence":
        return cls(n, s, tuple(Fraction(0) for _ in range(n)))

    def leaf_count(self, i: int) -> Fraction:
        """Number of leaves at distance n-1-i encoded by entry i."""
        return self.entries[i] * Fraction(self.s, 2 ** (i + 1))

    def is_plausible(self) -> bool:
        """Every entry must encode an integral leaf count."""
        return all(self.leaf_count(i).denominator == 1 for i in range(self.n))

    def degbar(self) -> Fraction:
        """sum x_i / 2**(i+1); the node's degree divided by s."""
        return sum((x / (2 ** (i + 1)) for i, x in enumerate(self.entries)), Fraction(0))

    def degree(self) -> Fraction:
        return self.degbar() * self.s

    def join(self, other: "DistanceSequence") -> "DistanceSequence":
        """Profile of a new root with self as left subtree, other as right."""
        if (self.n, self.s) != (other.n, other.s):
            raise ValidationError("join requires matching (n, s)")
        merged = tuple(
            (self.entries[i] + other.entries[i]) / 2 for i in range(1, self.n)
        ) + (Fraction(0),)
        return DistanceSequence(self.n, self.s, merged)

    def attach(self, h: int) -> "DistanceSequence":
        """Profile after hanging a copy of this tree below every leaf of a
        full tree of height h: the first h entries shift out."""
        if not 0 <= h <= self.n - 1:
            raise ValidationError(f"attach height {h} out of range [0, {self.n - 1}]")
        shifted = self.entries[h:] + (Fraction(0),) * h
        return DistanceSequence(self.n, self.s, shifted)

    def to_runseq(self) -> "RunSeq":
        return RunSeq.from_entries(self.entries, self.n)


def degbar(seq: DistanceSequence) -> Fraction:
    return seq.degbar()


def join_under_root(left: DistanceSequence, right: DistanceSequence) -> DistanceSequence:
    return left.join(right)


def attach_to_full_tree(seq: DistanceSequence, h: int) -> DistanceSequence:
    return seq.attach(h)


class RunSeq:
    """Run-length-encoded distance profile of fixed length n.

    ``runs`` is a normalized tuple of (value, length) with positive
    lengths, adjacent runs carrying distinct values, and lengths summing
    to n.  Values are Fractions (integers coerce).
    """

    __slots__ = ("n", "runs")

    def __init__(self, n: int, runs: Sequence[tuple[Fraction, int]]):
        if n < 1:
            raise ValidationError("n must be positive")
        norm: list[tuple[Fraction, int]] = []
        total = 0
        for value, length in runs:
            if length < 0:
                raise ValidationError("negative run length")
            if length == 0:
                continue
            value = _as_frac(value)
            if value < 0:
                raise ValidationError("entries must be nonnegative")
            total += length
            if norm and norm[-1][0] == value:
                norm[-1] = (value, norm[-1][1] + length)
            else:
                norm.append((value, length))
        if total != n:
            raise ValidationError(f"run lengths sum to {total}, expected {n}")
        self.n = n
        self.runs = tuple(norm)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zeros(cls, n: int) -> "RunSeq":
        return cls(n, [(Fraction(0), n)])

    @classmethod
    def from_blocks(cls, n: int, *blocks: tuple) -> "RunSeq":
        """Blocks of (value, length); zero-padded on the right to length n."""
        used = sum(length for _, length in blocks)
        if used > n:
            raise ValidationError(f"blocks of total length {used} exceed n={n}")
        return cls(n, list(blocks) + [(Fraction(0), n - used)])

    @classmethod
    def from_entries(cls, entries: Sequence, n: int | None = None) -> "RunSeq":
        entries = [_as_frac(x) for x in entries]
        if n is None:
            n = len(entries)
        if len(entries) != n:
            raise ValidationError("entry count mismatch")
        return cls(n, [(x, 1) for x in entries])

    @classmethod
    def delta(cls, n: int, index: int, value) -> "RunSeq":
        if not 0 <= index < n:
            raise ValidationError("delta index out of range")
        return cls(n, [(Fraction(0), index), (_as_frac(value), 1), (Fraction(0), n - index - 1)])

    # -- views -----------------------------------------------------------

    def entries(self) -> tuple[Fraction, ...]:
        out: list[Fraction] = []
        for value, length in self.runs:
            out.extend([value] * length)
        return tuple(out)

    def entry(self, i: int) -> Fraction:
        if not 0 <= i < self.n:
            raise IndexError(i)
        pos = 0
        for value, length in self.runs:
            if i < pos + length:
                return value
            pos += length
        raise AssertionError("unreachable")

    def support(self) -> tuple[int, int] | None:
        """(first, last) nonzero index, or None if identically zero."""
        first = last = None
        pos = 0
        for value, length in self.runs:
            if value != 0:
                if first is None:
                    first = pos
                last = pos + length - 1
            pos += length
        return None if first is None else (first, last)

    def total(self) -> Fraction:
        return sum((value * length for value, length in self.runs), Fraction(0))

    def is_integral(self) -> bool:
        return all(value.denominator == 1 for value, _ in self.runs)

    def __eq__(self, other):
        return isinstance(other, RunSeq) and self.n == other.n and self.runs == other.runs

    def __hash__(self):
        return hash((self.n, self.runs))

    def __repr__(self):
        inner = ", ".join(f"{v}x{c}" for v, c in self.runs)
        return f"RunSeq({self.n}: {inner})"

    def runs_json(self) -> list[list]:
        out = []
        for value, length in self.runs:
            v = int(value) if value.denominator == 1 else str(value)
            out.append([v, length])
        return out

    def to_distance_sequence(self, s: int) -> DistanceSequence:
        return DistanceSequence(self.n, s, self.entries())

    # -- algebra -----------------------------------------------------------

    def _boundaries(self):
        pos = 0
        for value, length in self.runs:
            yield pos, pos + length, value
            pos += length

    def add(self, other: "RunSeq") -> "RunSeq":
        if self.n != other.n:
            raise ValidationError("length mismatch")
        out: list[tuple[Fraction, int]] = []
        ai = bi = 0
        a_end = b_end = 0
        pos = 0
        runs_a, runs_b = self.runs, other.runs
        a_val = b_val = Fraction(0)
        while pos < self.n:
            if pos >= a_end:
                a_val, alen = runs_a[ai]
                a_end = pos + alen
                ai += 1
            if pos >= b_end:
                b_val, blen = runs_b[bi]
                b_end = pos + blen
                bi += 1
            nxt = min(a_end, b_end)
            out.append((a_val + b_val, nxt - pos))
            pos = nxt
        return RunSeq(self.n, out)

    def scale(self, factor: Fraction) -> "RunSeq":
        factor = _as_frac(factor)
        return RunSeq(self.n, [(value * factor, length) for value, length in self.runs])

    def drop_prefix(self, k: int) -> "RunSeq":
        """Remove the first k entries (shrinks length by k)."""
        if not 0 <= k < self.n:
            raise ValidationError("prefix drop out of range")
        out = []
        skip = k
        for value, length in self.runs:
            if skip >= length:
                skip -= length
                continue
            out.append((value, length - skip))
            skip = 0
        return RunSeq(self.n - k, out)

    def pad_suffix(self, k: int) -> "RunSeq":
        if k == 0:
            return self
        return RunSeq(self.n + k, list(self.runs) + [(Fraction(0), k)])

    def join(self, other: "RunSeq") -> "RunSeq":
        """((x_1+x'_1)/2, ..., (x_{n-1}+x'_{n-1})/2, 0)."""
        if self.n != other.n:
            raise ValidationError("length mismatch")
        if self.n == 1:
            return RunSeq.zeros(1)
        summed = self.drop_prefix(1).add(other.drop_prefix(1))
        return summed.scale(Fraction(1, 2)).pad_suffix(1)

    def attach(self, h: int) -> "RunSeq":
        if not 0 <= h <= self.n - 1:
            raise ValidationError("attach height out of range")
        if h == 0:
            return self
        return self.drop_prefix(h).pad_suffix(h)

    def degbar(self) -> Fraction:
        """sum x_i / 2**(i+1)."""
        acc = Fraction(0)
        for start, end, value in self._boundaries():
            if value != 0:
                acc += value * (Fraction(1, 2 ** start) - Fraction(1, 2 ** end))
        return acc

    def suffix_degbar_max(self, h: int) -> Fraction:
        """max over j in [0, h] of degbar((x_j, ..., x_{n-1}, 0, ..., 0)).

        This is the largest degree/s ratio over the spine levels of an
        attach of height h.  Within a constant run the level value
        2**j * S_j is monotone, so only run starts (and j = h) can attain
        the maximum.
        """
        if not 0 <= h <= self.n - 1:
            raise ValidationError("height out of range")
        # suffix sums S_j = sum_{t >= j} x_t / 2**(t+1), evaluated lazily
        suffix: dict[int, Fraction] = {self.n: Fraction(0)}
        acc = Fraction(0)
        starts = []
        for start, end, value in reversed(list(self._boundaries())):
            acc += value * (Fraction(1, 2 ** start) - Fraction(1, 2 ** end))
            suffix[start] = acc
            starts.append(start)
        candidates = {j for j in starts if j <= h}
        candidates.add(h)
        best = Fraction(0)
        for j in candidates:
            sj = self._suffix_from(j, suffix)
            best = max(best, (2 ** j) * sj)
        return best

    def _suffix_from(self, j: int, suffix: dict[int, Fraction]) -> Fraction:
        if j in suffix:
            return suffix[j]
        # j falls inside a run; peel the partial run
        pos = 0
        for start, end, value in self._boundaries():
            if start <= j < end:
                tail = suffix.get(end, Fraction(0))
                return tail + value * (Fraction(1, 2 ** j) - Fraction(1, 2 ** end))
            pos = end
        return Fraction(0)

    def plausible(self, s: int) -> bool:
        """Every x_i * s / 2**(i+1) must be a nonnegative integer."""
        for start, end, value in self._boundaries():
            if value == 0:
                continue
            # hardest index in the run is its last one
            worst = value * Fraction(s, 2 ** end)
            if worst.denominator != 1:
                return False
        return True
