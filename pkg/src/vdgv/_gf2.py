"""Linear algebra over F_2 with vectors packed into Python ints."""

from __future__ import annotations

from typing import Iterable, Iterator, List, Optional, Sequence, Tuple


class F2Span:
    """Incrementally built subspace of F_2^n, kept in echelon form.

    Each stored row remembers which inserted vectors it is a combination of,
    so membership tests can also return coordinates.
    """

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: List[Tuple[int, int, int]] = []  # (pivot bit, row, tag)
        self.basis: List[int] = []
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.basis)

    def _reduce(self, v: int) -> Tuple[int, int]:
        tag = 0
        for pivot, row, rtag in self._rows:
            if v & pivot:
                v ^= row
                tag ^= rtag
        return v, tag

    def add(self, v: int, label: Optional[int] = None) -> bool:
        """Insert v; returns False if it was already in the span.

        label is what coords() reports for v (default: bit of its basis index).
        """
        r, tag = self._reduce(v)
        if r == 0:
            return False
        tag ^= (1 << len(self.basis)) if label is None else label
        self.basis.append(v)
        pivot = 1 << (r.bit_length() - 1)
        # keep rows sorted by decreasing pivot so one pass reduces fully
        rows = self._rows
        for i, (p, row, rtag) in enumerate(rows):
            if row & pivot:
                rows[i] = (p, row ^ r, rtag ^ tag)
        rows.append((pivot, r, tag))
        rows.sort(key=lambda t: -t[0])
        return True

    def __contains__(self, v: int) -> bool:
        return self._reduce(v)[0] == 0

    def coords(self, v: int) -> Optional[int]:
        """XOR of the labels of basis vectors summing to v, or None."""
        r, tag = self._reduce(v)
        return tag if r == 0 else None

    def elements(self) -> List[int]:
        return span_elements(self.basis)

    def min_coset(self, v: int) -> int:
        """Smallest element of v + span (the rows are fully reduced)."""
        return self._reduce(v)[0]


def span_elements(basis: Sequence[int]) -> List[int]:
    """All 2^len(basis) elements of the span, sorted."""
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    out.sort()
    return out


def nullspace(images: Sequence[int]) -> List[int]:
    """Kernel of the map sending unit vector e_i to images[i].

    Returns kernel vectors as bitmasks over the input coordinates.
    """
    rows: List[Tuple[int, int]] = []  # (reduced image, tag)
    kernel = []
    for i, img in enumerate(images):
        tag = 1 << i
        for r, t in rows:
            if img ^ r < img:  # leading bit of r is set in img
                img ^= r
                tag ^= t
        if img == 0:
            kernel.append(tag)
        else:
            rows.append((img, tag))
            rows.sort(key=lambda rt: -rt[0])
    return kernel


def preimage_span(columns: Sequence[int]) -> F2Span:
    """Span of the columns whose coords() returns a preimage bitmask."""
    span = F2Span()
    for i, c in enumerate(columns):
        span.add(c, 1 << i)
    return span


def solve(columns: Sequence[int], target: int) -> Optional[int]:
    """Find a bitmask x with XOR of columns[i] over set bits i equal to target."""
    return preimage_span(columns).coords(target)


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def iter_bits(v: int) -> Iterator[int]:
    i = 0
    while v:
        if v & 1:
            yield i
        v >>= 1
        i += 1
