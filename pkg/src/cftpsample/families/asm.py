"""Alternating-sign matrices via their corner-sum lattice.

The corner-sum matrix of an n x n ASM M is the (n+1) x (n+1) matrix
c[i][j] = sum of M over the leading i x j block.  Corner-sum matrices
are characterized by fixed boundaries (c[0][*] = c[*][0] = 0,
c[n][j] = j, c[i][n] = i) and unit increments along rows and columns.
Under the componentwise order they form a distributive lattice: the min
or max of two corner-sum matrices is again one.

A toggle site is an interior cell (i, j), 1 <= i, j <= n-1.  Raising
c[i][j] by one keeps all four adjacent increments legal exactly when the
two lesser neighbors equal v and the two greater ones equal v+1;
lowering is the mirror condition.  The rank of a state is the total
excess over the bottom matrix max(0, i+j-n), and sites are graded by
(i+j) parity: an update at (i, j) reads only the four neighbors, all of
opposite parity, so same-parity updates commute.
"""

from __future__ import annotations

from ..systems import MonotoneToggleSystem


def _flat(i: int, j: int, n: int) -> int:
    return i * (n + 1) + j


def bottom_corner_sums(n: int) -> tuple[int, ...]:
    return tuple(max(0, i + j - n) for i in range(n + 1) for j in range(n + 1))


def top_corner_sums(n: int) -> tuple[int, ...]:
    return tuple(min(i, j) for i in range(n + 1) for j in range(n + 1))


class CornerSumSystem(MonotoneToggleSystem):
    """Single-site toggle dynamics on corner-sum matrices."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.name = f"asm({n})"
        self.site_count = (n - 1) * (n - 1)
        self.bottom = bottom_corner_sums(n)
        self.top = top_corner_sums(n)
        self.graded = True

    def _site_cell(self, site: int) -> tuple[int, int]:
        return site // (self.n - 1) + 1, site % (self.n - 1) + 1

    def update(self, state: tuple, site: int, up: bool) -> tuple:
        n = self.n
        i, j = self._site_cell(site)
        idx = _flat(i, j, n)
        v = state[idx]
        north = state[idx - (n + 1)]
        west = state[idx - 1]
        south = state[idx + (n + 1)]
        east = state[idx + 1]
        if up:
            if north == v and west == v and south == v + 1 and east == v + 1:
                return state[:idx] + (v + 1,) + state[idx + 1 :]
            return state
        if north == v - 1 and west == v - 1 and south == v and east == v:
            return state[:idx] + (v - 1,) + state[idx + 1 :]
        return state

    def leq(self, s: tuple, t: tuple) -> bool:
        return all(x <= y for x, y in zip(s, t))

    def rank_of(self, state: tuple) -> int:
        return sum(state) - sum(self.bottom)

    def parity_of(self, site: int) -> int:
        i, j = self._site_cell(site)
        return (i + j) & 1


def asm_system(n: int) -> CornerSumSystem:
    return CornerSumSystem(n)


def corner_matrix(state: tuple, n: int) -> tuple[tuple[int, ...], ...]:
    """Reshape a flat corner-sum state to an (n+1) x (n+1) matrix."""
    return tuple(state[r * (n + 1) : (r + 1) * (n + 1)] for r in range(n + 1))


def corner_flat(matrix, n: int) -> tuple[int, ...]:
    rows = [tuple(r) for r in matrix]
    if len(rows) != n + 1 or any(len(r) != n + 1 for r in rows):
        raise ValueError(f"expected an {n + 1}x{n + 1} matrix")
    return tuple(v for r in rows for v in r)


def is_valid_corner_sum(matrix) -> bool:
    """Boundary values and unit row/column increments, checked directly."""
    rows = [list(r) for r in matrix]
    n = len(rows) - 1
    if n < 1 or any(len(r) != n + 1 for r in rows):
        return False
    for i in range(n + 1):
        if rows[i][0] != 0 or rows[0][i] != 0:
            return False
        if rows[i][n] != i or rows[n][i] != i:
            return False
    for i in range(n + 1):
        for j in range(n + 1):
            if i > 0 and rows[i][j] - rows[i - 1][j] not in (0, 1):
                return False
            if j > 0 and rows[i][j] - rows[i][j - 1] not in (0, 1):
                return False
    return True


def corner_sum_to_asm(matrix) -> tuple[tuple[int, ...], ...]:
    """Recover ASM entries by inclusion-exclusion over unit blocks."""
    rows = [list(r) for r in matrix]
    n = len(rows) - 1
    return tuple(
        tuple(
            rows[i][j] - rows[i - 1][j] - rows[i][j - 1] + rows[i - 1][j - 1]
            for j in range(1, n + 1)
        )
        for i in range(1, n + 1)
    )


def asm_to_corner_sum(m) -> tuple[tuple[int, ...], ...]:
    """Leading-block sums of an n x n matrix, with zero row and column."""
    rows = [list(r) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    c = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            c[i][j] = rows[i - 1][j - 1] + c[i - 1][j] + c[i][j - 1] - c[i - 1][j - 1]
    return tuple(tuple(r) for r in c)


def is_asm(m) -> bool:
    """The alternating-sign axioms: entries in {-1,0,1}, rows and columns
    sum to 1 with nonzero entries alternating starting and ending at +1."""
    rows = [list(r) for r in m]
    n = len(rows)
    if n < 1 or any(len(r) != n for r in rows):
        return False
    for line in rows + [list(col) for col in zip(*rows)]:
        if any(v not in (-1, 0, 1) for v in line):
            return False
        nonzero = [v for v in line if v]
        if sum(line) != 1:
            return False
        if any(a == b for a, b in zip(nonzero, nonzero[1:])):
            return False
        if nonzero and (nonzero[0] != 1 or nonzero[-1] != 1):
            return False
    return True
