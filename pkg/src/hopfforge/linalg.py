"""Sparse exact linear algebra over cyclotomic fields.

Vectors are dictionaries from hashable column keys to nonzero scalars.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

from .exact import CyclotomicNumber, Scalar

SparseVector = dict


def add_into(acc: dict, vec: dict, scale: Scalar = 1) -> dict:
    """acc += scale * vec, dropping cancelled entries; returns acc."""
    one = scale == 1
    for k, c in vec.items():
        v = c if one else c * scale
        if k in acc:
            s = acc[k] + v
            if s:
                acc[k] = s
            else:
                del acc[k]
        elif v:
            acc[k] = v
    return acc


def scaled(vec: dict, scale: Scalar) -> dict:
    if scale == 1:
        return dict(vec)
    return {k: c * scale for k, c in vec.items() if c * scale}


def difference(a: dict, b: dict) -> dict:
    return add_into(dict(a), b, -1)


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis of a subspace.

    ``order`` fixes the pivot preference: the pivot of a new row is its
    entry whose key comes first in ``order`` (keys absent from ``order`` are
    compared by insertion into an internal rank table).
    """

    def __init__(self, order: Sequence[Hashable] | None = None):
        self.rows: dict[Hashable, dict] = {}
        self._rank = {k: i for i, k in enumerate(order)} if order is not None else {}

    def _key_rank(self, key):
        r = self._rank.get(key)
        if r is None:
            r = len(self._rank)
            self._rank[key] = r
        return r

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list:
        return sorted(self.rows, key=self._key_rank)

    def reduce(self, vec: dict) -> dict:
        out = dict(vec)
        for p in [k for k in vec if k in self.rows]:
            c = out.get(p)
            if c:
                add_into(out, self.rows[p], -c)
        return out

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict) -> bool:
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r, key=self._key_rank)
        inv = r[p].inverse() if isinstance(r[p], CyclotomicNumber) else CyclotomicNumber.rational(1) / r[p]
        row = {k: c * inv for k, c in r.items()}
        row[p] = CyclotomicNumber.rational(1)
        for q, other in self.rows.items():
            c = other.get(p)
            if c:
                add_into(other, row, -c)
        self.rows[p] = row
        return True

    def extend(self, vecs: Iterable[dict]) -> int:
        return sum(1 for v in vecs if self.add(v))

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in self.pivots]

    def coordinates(self, vec: dict) -> dict | None:
        """Express vec in terms of the rows (keyed by pivot), or None if outside."""
        coords = {p: vec[p] for p in vec if p in self.rows}
        rebuilt: dict = {}
        for p, c in coords.items():
            add_into(rebuilt, self.rows[p], c)
        return coords if not difference(vec, rebuilt) else None


def rank(vectors: Iterable[dict]) -> int:
    eb = EchelonBasis()
    eb.extend(vectors)
    return len(eb)


def nullspace(rows: Iterable[dict], columns: Sequence[Hashable]) -> list[dict]:
    """Basis of {x : row . x = 0 for every row}, x indexed by ``columns``."""
    eb = EchelonBasis(columns)
    eb.extend(rows)
    free = [c for c in columns if c not in eb.rows]
    result = []
    for f in free:
        vec = {f: CyclotomicNumber.rational(1)}
        for p, row in eb.rows.items():
            c = row.get(f)
            if c:
                vec[p] = -c
        result.append(vec)
    return result


def solve(columns: dict[Hashable, dict], target: dict) -> dict | None:
    """Find coefficients a with sum a[j] * columns[j] == target, or None."""
    # augmented elimination over the transposed system
    keys = list(columns)
    tag = object()
    order: dict = {}
    for j in keys:
        order.update(dict.fromkeys(columns[j]))
    order.update(dict.fromkeys(target))
    eb = EchelonBasis(list(order) + [(tag, j) for j in keys])
    combos: dict = {}
    for j in keys:
        vec = dict(columns[j])
        vec[(tag, j)] = CyclotomicNumber.rational(1)
        eb.add(vec)
    # rows now mix original coordinates and tags; reduce target similarly
    probe = eb.reduce(target)
    if any(not (isinstance(k, tuple) and len(k) == 2 and k[0] is tag) for k in probe):
        return None
    for k, c in probe.items():
        combos[k[1]] = -c
    return combos


def matrix_rank(mat: Sequence[Sequence[Scalar]]) -> int:
    return rank({j: c for j, c in enumerate(row) if c} for row in mat)
