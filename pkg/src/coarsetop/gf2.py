"""Sparse bit-packed GF(2) linear algebra.

Matrices store columns as Python ints (bit i of column j = entry (i, j)).
Elimination picks pivots at the lowest nonzero row of each column, so the
same reduction serves rank, solve, kernel/image bases and the two-scale
homology image ranks used throughout the package.

All objects are immutable after construction; elimination produces new
objects, so independent eliminations may run in parallel.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence


def lowbit(x: int) -> int:
    """Index of the lowest set bit of a nonzero int."""
    return (x & -x).bit_length() - 1


def bits(x: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while x:
        b = lowbit(x)
        yield b
        x &= x - 1


def popcount(x: int) -> int:
    return x.bit_count()


def vector_from_indices(idxs: Iterable[int]) -> int:
    v = 0
    for i in idxs:
        v |= 1 << i
    return v


class GF2Matrix:
    """A rows x cols matrix over GF(2) with bit-packed columns."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Optional[Sequence[int]] = None):
        if columns is None:
            columns = [0] * cols
        if len(columns) != cols:
            raise ValueError("column count mismatch")
        self.rows = rows
        self.cols = cols
        self.columns = list(columns)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "GF2Matrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        cols = [0] * nc
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                if e & 1:
                    cols[j] |= 1 << i
        return cls(nr, nc, cols)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    def entry(self, i: int, j: int) -> int:
        return (self.columns[j] >> i) & 1

    def to_rows(self) -> list[list[int]]:
        return [[(self.columns[j] >> i) & 1 for j in range(self.cols)] for i in range(self.rows)]

    def transpose(self) -> "GF2Matrix":
        cols = [0] * self.rows
        for j, c in enumerate(self.columns):
            for i in bits(c):
                cols[i] |= 1 << j
        return GF2Matrix(self.cols, self.rows, cols)

    def matvec(self, x: int) -> int:
        """Matrix times column vector (x over cols), as XOR of selected columns."""
        out = 0
        for j in bits(x):
            out ^= self.columns[j]
        return out

    def matmul(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return GF2Matrix(self.rows, other.cols, [self.matvec(c) for c in other.columns])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.columns)

    def vstack_row(self, row_vector: int) -> "GF2Matrix":
        """Append one extra row (given as a bitmask over columns) at the bottom."""
        cols = list(self.columns)
        for j in bits(row_vector):
            cols[j] |= 1 << self.rows
        return GF2Matrix(self.rows + 1, self.cols, cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GF2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.columns == other.columns
        )

    def __repr__(self) -> str:
        return f"GF2Matrix({self.rows}x{self.cols})"


class GF2Subspace:
    """A subspace given by a reduced column-echelon basis (distinct pivots)."""

    __slots__ = ("ambient", "pivots")

    def __init__(self, ambient: int, pivots: dict[int, int]):
        self.ambient = ambient
        self.pivots = dict(pivots)  # pivot row -> reduced basis vector

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[int]:
        return [self.pivots[p] for p in sorted(self.pivots)]

    def reduce(self, v: int) -> int:
        """Residue of v modulo the subspace (deterministic).

        Pivot vectors have no bits below their pivot row, so a bit with no
        pivot can never be cleared and lands in the residue.
        """
        out = 0
        while v:
            p = lowbit(v)
            col = self.pivots.get(p)
            if col is None:
                out |= 1 << p
                v &= v - 1
            else:
                v ^= col
        return out

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def extend(self, v: int) -> bool:
        """Mutating helper used during construction; True if v enlarged the space."""
        v = self.reduce(v)
        if v == 0:
            return False
        self.pivots[lowbit(v)] = v
        return True


def _eliminate(columns: Iterable[int], track: bool = False):
    """Column echelon form.

    Returns (pivots, combos, kernel) where pivots maps pivot row -> reduced
    column, combos maps pivot row -> combination bitmask over input column
    indices (only when track=True) and kernel lists combination bitmasks of
    columns that reduced to zero (only when track=True).
    """
    pivots: dict[int, int] = {}
    combos: dict[int, int] = {}
    kernel: list[int] = []
    for j, c in enumerate(columns):
        m = 1 << j if track else 0
        while c:
            p = lowbit(c)
            other = pivots.get(p)
            if other is None:
                pivots[p] = c
                if track:
                    combos[p] = m
                break
            c ^= other
            if track:
                m ^= combos[p]
        else:
            if track:
                kernel.append(m)
    return pivots, combos, kernel


def rank(A: GF2Matrix) -> int:
    pivots, _, _ = _eliminate(A.columns)
    return len(pivots)


def rank_of_columns(columns: Iterable[int]) -> int:
    pivots, _, _ = _eliminate(columns)
    return len(pivots)


def solve(A: GF2Matrix, b: int) -> Optional[int]:
    """One solution x (bitmask over columns) of A x = b, or None if inconsistent."""
    return solve_columns(A.columns, b, want_witness=True)


def solve_columns(columns: Iterable[int], b: int, want_witness: bool = True) -> Optional[int]:
    """Streaming solve over a column iterable.

    With want_witness=False only feasibility is decided (0 is returned for a
    feasible system), which avoids storing combination masks for very large
    systems.
    """
    pivots: dict[int, int] = {}
    combos: dict[int, int] = {}
    for j, c in enumerate(columns):
        m = (1 << j) if want_witness else 0
        while c:
            p = lowbit(c)
            other = pivots.get(p)
            if other is None:
                pivots[p] = c
                if want_witness:
                    combos[p] = m
                break
            c ^= other
            if want_witness:
                m ^= combos[p]
    x = 0
    while b:
        p = lowbit(b)
        col = pivots.get(p)
        if col is None:
            return None
        b ^= col
        if want_witness:
            x ^= combos[p]
    return x


def kernel_basis(A: GF2Matrix) -> list[int]:
    """Basis (bitmasks over columns) of the null space of A."""
    _, _, kernel = _eliminate(A.columns, track=True)
    return kernel


def image_basis(A: GF2Matrix) -> GF2Subspace:
    pivots, _, _ = _eliminate(A.columns)
    return GF2Subspace(A.rows, pivots)


def span_of(vectors: Iterable[int], ambient: int) -> GF2Subspace:
    pivots, _, _ = _eliminate(vectors)
    return GF2Subspace(ambient, pivots)


def quotient_image_rank(
    inner_cycles: Sequence[int],
    f_images: Sequence[int],
    outer_boundaries: Iterable[int],
    outer_dim: int,
) -> tuple[int, list[int]]:
    """Rank of (span(f(cycles)) + B) / B and indices of representative cycles.

    ``inner_cycles[t]`` and ``f_images[t]`` are aligned: the t-th inner cycle
    and its image in the outer chain group. Returns (rank, reps) where reps
    lists the positions t whose images form a basis of the image modulo the
    outer boundary space.
    """
    space = span_of(outer_boundaries, outer_dim)
    reps: list[int] = []
    for t, img in enumerate(f_images):
        if space.extend(img):
            reps.append(t)
    return len(reps), reps


__all__ = [
    "GF2Matrix",
    "GF2Subspace",
    "bits",
    "lowbit",
    "popcount",
    "vector_from_indices",
    "rank",
    "rank_of_columns",
    "solve",
    "solve_columns",
    "kernel_basis",
    "image_basis",
    "span_of",
    "quotient_image_rank",
]
