"""Integral symmetric bilinear forms (Gram matrices) and the standard lattices.

The K3 lattice is modelled as ``U + U + U + E8(-1) + E8(-1)``.  All arithmetic
is exact; Python ints are arbitrary precision so determinants of large
direct sums never overflow.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from . import _rational as rq


class LatticeError(ValueError):
    pass


class LatticeSignature(NamedTuple):
    n_pos: int
    n_neg: int
    n_zero: int


@dataclass(frozen=True)
class GramMatrix:
    """Square symmetric integer matrix; rows stored as tuples."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise LatticeError(f"row {i} has length {len(row)}, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise LatticeError(f"not symmetric at ({i}, {j}): {rows[i][j]} != {rows[j][i]}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "GramMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def r(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __neg__(self) -> "GramMatrix":
        return GramMatrix(tuple(tuple(-x for x in row) for row in self.entries))

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def block(self, rows: range, cols: range | None = None) -> "GramMatrix":
        cols = rows if cols is None else cols
        return GramMatrix(tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def det(self) -> int:
        d = rq.det(self.entries)
        assert d.denominator == 1
        return int(d)

    def transform(self, s: Sequence[Sequence[int]]) -> "GramMatrix":
        """Gram matrix of the basis given by the columns of ``s``: S^T g S."""
        g = rq.to_q(self.entries)
        sq = rq.to_q(s)
        out = rq.matmul(rq.matmul(rq.transpose(sq), g), sq)
        return GramMatrix(tuple(tuple(int(x) for x in row) for row in out))

    def to_json(self) -> str:
        return json.dumps(self.tolist())

    @classmethod
    def from_json(cls, text: str) -> "GramMatrix":
        data = json.loads(text)
        return cls.from_obj(data)

    @classmethod
    def from_obj(cls, data) -> "GramMatrix":
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise LatticeError("Gram matrix must be a JSON array of arrays")
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, int):
                    raise LatticeError(f"entry [{i}][{j}] is not an integer: {x!r}")
        return cls.from_rows(data)


def signature(g: GramMatrix) -> LatticeSignature:
    return LatticeSignature(*rq.symmetric_inertia(g.entries))


def is_even(g: GramMatrix) -> bool:
    return all(g.entries[i][i] % 2 == 0 for i in range(g.r))


def is_unimodular(g: GramMatrix) -> bool:
    return abs(g.det()) == 1


def direct_sum(a: GramMatrix, b: GramMatrix) -> GramMatrix:
    n = a.r + b.r
    rows = [[0] * n for _ in range(n)]
    for i in range(a.r):
        rows[i][: a.r] = a.entries[i]
    for i in range(b.r):
        rows[a.r + i][a.r:] = b.entries[i]
    return GramMatrix.from_rows(rows)


def _e8() -> GramMatrix:
    # Bourbaki labelling: chain 1-3-4-5-6-7-8 with node 2 attached to node 4.
    edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
    rows = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for a, b in edges:
        rows[a - 1][b - 1] = rows[b - 1][a - 1] = -1
    return GramMatrix.from_rows(rows)


U = GramMatrix(((0, 1), (1, 0)))
E8 = _e8()


def standard_lattice(name: str) -> GramMatrix:
    """``U``, ``E8``, ``E8_neg`` or ``K3`` (= 3U + 2 E8(-1), rank 22)."""
    if name == "U":
        return U
    if name == "E8":
        return E8
    if name == "E8_neg":
        return -E8
    if name == "K3":
        out = U
        for part in (U, U, -E8, -E8):
            out = direct_sum(out, part)
        return out
    raise LatticeError(f"unknown standard lattice {name!r}")
