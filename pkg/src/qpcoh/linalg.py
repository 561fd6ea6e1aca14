"""Exact sparse linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` or plain ``int`` (integral rationals are
kept as ``int`` so that integer structure constants never pay for Fraction
arithmetic).  Nothing in this module touches floating point.
"""

from __future__ import annotations

import os
from collections import defaultdict
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ResourceError

Scalar = Union[int, Fraction]
SparseVector = Dict[int, Scalar]

DEFAULT_ENTRY_CAP = 50_000_000
ENTRY_CAP_ENV = "QPCOH_ENTRY_CAP"


def entry_cap(cap: Optional[int] = None) -> int:
    """Resolve the potential-entry cap: explicit argument, then environment, then default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get(ENTRY_CAP_ENV)
    if env:
        return int(env)
    return DEFAULT_ENTRY_CAP


def check_size(nrows: int, ncols: int, cap: Optional[int] = None, what: str = "matrix") -> None:
    limit = entry_cap(cap)
    if nrows * ncols > limit:
        raise ResourceError(
            f"{what} of shape {nrows}x{ncols} exceeds the entry cap {limit}",
            shape=(nrows, ncols),
            cap=limit,
        )


def as_scalar(value) -> Scalar:
    """Coerce ``value`` (int, Fraction or a ``"p/q"`` string) to an exact scalar.

    Floats are refused.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            q = Fraction(int(num), int(den))
        else:
            q = Fraction(int(text))
        return q.numerator if q.denominator == 1 else q
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def scalar_str(value: Scalar) -> str:
    q = Fraction(value)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _norm(value: Scalar) -> Scalar:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


class SparseRationalMatrix:
    """Immutable sparse matrix with exact rational entries, stored row-major."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, entries: Optional[Mapping[Tuple[int, int], Scalar]] = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.nrows = nrows
        self.ncols = ncols
        rows: Dict[int, SparseVector] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r}, {c}) out of range for {nrows}x{ncols} matrix")
            if v:
                rows.setdefault(r, {})[c] = _norm(v)
        self._rows = rows

    @classmethod
    def from_rows(cls, nrows: int, ncols: int, rows: Mapping[int, Mapping[int, Scalar]]) -> "SparseRationalMatrix":
        m = cls(nrows, ncols)
        clean: Dict[int, SparseVector] = {}
        for r, row in rows.items():
            if not 0 <= r < nrows:
                raise IndexError(f"row {r} out of range")
            kept = {}
            for c, v in row.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} out of range")
                if v:
                    kept[c] = _norm(v)
            if kept:
                clean[r] = kept
        m._rows = clean
        return m

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, Scalar]]) -> "SparseRationalMatrix":
        rows: Dict[int, SparseVector] = defaultdict(dict)
        for c, col in enumerate(columns):
            for r, v in col.items():
                if v:
                    rows[r][c] = v
        return cls.from_rows(nrows, len(columns), rows)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], ncols: Optional[int] = None) -> "SparseRationalMatrix":
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        rows = {}
        for r, row in enumerate(data):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            rows[r] = {c: as_scalar(v) for c, v in enumerate(row) if v}
        return cls.from_rows(nrows, ncols, rows)

    @classmethod
    def identity(cls, n: int) -> "SparseRationalMatrix":
        return cls.from_rows(n, n, {i: {i: 1} for i in range(n)})

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> Dict[Tuple[int, int], Scalar]:
        return {(r, c): v for r, row in self._rows.items() for c, v in row.items()}

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def row(self, r: int) -> SparseVector:
        return dict(self._rows.get(r, {}))

    def rows(self) -> Dict[int, SparseVector]:
        return {r: dict(row) for r, row in self._rows.items()}

    def columns(self) -> List[SparseVector]:
        cols: List[SparseVector] = [dict() for _ in range(self.ncols)]
        for r, row in self._rows.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def __getitem__(self, key: Tuple[int, int]) -> Scalar:
        r, c = key
        return self._rows.get(r, {}).get(c, 0)

    def transpose(self) -> "SparseRationalMatrix":
        rows: Dict[int, SparseVector] = defaultdict(dict)
        for r, row in self._rows.items():
            for c, v in row.items():
                rows[c][r] = v
        return SparseRationalMatrix.from_rows(self.ncols, self.nrows, rows)

    T = property(transpose)

    def __matmul__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: Dict[int, SparseVector] = {}
        orows = other._rows
        for r, row in self._rows.items():
            acc: SparseVector = defaultdict(int)
            for k, a in row.items():
                orow = orows.get(k)
                if orow:
                    for c, b in orow.items():
                        acc[c] += a * b
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                out[r] = acc
        return SparseRationalMatrix.from_rows(self.nrows, other.ncols, out)

    def apply(self, vector: Mapping[int, Scalar]) -> SparseVector:
        """Matrix-vector product on a sparse column vector."""
        out: SparseVector = defaultdict(int)
        for r, row in self._rows.items():
            s = 0
            for c, v in row.items():
                x = vector.get(c)
                if x:
                    s += v * x
            if s:
                out[r] = _norm(s)
        return dict(out)

    def select_columns(self, cols: Sequence[int]) -> "SparseRationalMatrix":
        pos = {c: k for k, c in enumerate(cols)}
        rows = {}
        for r, row in self._rows.items():
            kept = {pos[c]: v for c, v in row.items() if c in pos}
            if kept:
                rows[r] = kept
        return SparseRationalMatrix.from_rows(self.nrows, len(cols), rows)

    def select_rows(self, keep: Sequence[int]) -> "SparseRationalMatrix":
        rows = {k: self._rows[r] for k, r in enumerate(keep) if r in self._rows}
        return SparseRationalMatrix.from_rows(len(keep), self.ncols, rows)

    def hstack(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        rows: Dict[int, SparseVector] = defaultdict(dict)
        for r, row in self._rows.items():
            rows[r].update(row)
        for r, row in other._rows.items():
            for c, v in row.items():
                rows[r][c + self.ncols] = v
        return SparseRationalMatrix.from_rows(self.nrows, self.ncols + other.ncols, rows)

    def scale_row(self, r: int, factor: Scalar) -> "SparseRationalMatrix":
        rows = self.rows()
        if r in rows:
            rows[r] = {c: v * factor for c, v in rows[r].items()}
        return SparseRationalMatrix.from_rows(self.nrows, self.ncols, rows)

    def swap_rows(self, a: int, b: int) -> "SparseRationalMatrix":
        rows = self.rows()
        ra, rb = rows.pop(a, None), rows.pop(b, None)
        if ra is not None:
            rows[b] = ra
        if rb is not None:
            rows[a] = rb
        return SparseRationalMatrix.from_rows(self.nrows, self.ncols, rows)

    def is_zero(self) -> bool:
        return not self._rows

    def to_dense(self) -> List[List[Scalar]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"SparseRationalMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


# --------------------------------------------------------------------------
# rank


def _primitive(vector: Mapping[int, Scalar]) -> Dict[int, int]:
    """Scale a rational vector to a primitive integer vector (same span)."""
    dens = [v.denominator for v in vector.values() if isinstance(v, Fraction)]
    m = lcm(*dens) if dens else 1
    out = {k: int(v * m) for k, v in vector.items() if v}
    g = gcd(*out.values()) if out else 1
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def _eliminate(vectors: Iterable[Mapping[int, Scalar]]) -> int:
    """Rank of a family of sparse vectors by fraction-free sparse elimination.

    Coordinates are processed in increasing order.  In each coordinate the pivot
    is the candidate whose entry has the smallest bit length, ties going to the
    lowest vector index.  Rows are kept primitive after every update.
    """
    rows: Dict[int, Dict[int, int]] = {}
    col_index: Dict[int, set] = defaultdict(set)
    for rid, vec in enumerate(vectors):
        row = _primitive(vec)
        if row:
            rows[rid] = row
            for c in row:
                col_index[c].add(rid)

    rank = 0
    for c in sorted(col_index):
        cands = col_index[c]
        if not cands:
            continue
        p = min(cands, key=lambda r: (abs(rows[r][c]).bit_length(), r))
        prow = rows[p]
        a = prow[c]
        for r in [r for r in cands if r != p]:
            row = rows[r]
            b = row[c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            if fa != 1:
                for k in row:
                    row[k] *= fa
            for k, v in prow.items():
                nv = row.get(k, 0) - fb * v
                if nv:
                    if k not in row:
                        col_index[k].add(r)
                    row[k] = nv
                elif k in row:
                    del row[k]
                    col_index[k].discard(r)
            if not row:
                del rows[r]
                continue
            g = gcd(*row.values())
            if g > 1:
                for k in row:
                    row[k] //= g
        for k in prow:
            col_index[k].discard(p)
        del rows[p]
        rank += 1
    return rank


def rank(M: SparseRationalMatrix, cap: Optional[int] = None) -> int:
    """Exact rank over Q."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    check_size(M.nrows, M.ncols, cap, "rank input")
    # the shorter side supplies the vectors; measured much faster on coboundary matrices
    if M.nrows <= M.ncols:
        return _eliminate(M._rows[r] for r in sorted(M._rows))
    return _eliminate(M.columns())


def kernel_dim(M: SparseRationalMatrix, cap: Optional[int] = None) -> int:
    return M.ncols - rank(M, cap)


def image_meet_coordinate_subspace(M: SparseRationalMatrix, selected: Iterable[int], cap: Optional[int] = None) -> int:
    """dim(colspace(M) ∩ span{e_s : s in selected}).

    Uses rank([M | E_S]) = |S| + rank(M with the rows in S deleted), so the
    augmented matrix never has to be formed.
    """
    sel = set(selected)
    for s in sel:
        if not 0 <= s < M.nrows:
            raise IndexError(f"coordinate {s} out of range for {M.nrows} rows")
    if not sel:
        return 0
    r_full = rank(M, cap)
    keep = [r for r in range(M.nrows) if r not in sel]
    return r_full - rank(M.select_rows(keep), cap)


# --------------------------------------------------------------------------
# small dense-ish exact solves (bases of kernels, coordinates in a span)


def rref(M: SparseRationalMatrix) -> Tuple[List[Dict[int, Fraction]], List[int]]:
    """Reduced row echelon form with Fraction arithmetic; returns (rows, pivot columns)."""
    work = [{c: Fraction(v) for c, v in M._rows[r].items()} for r in sorted(M._rows)]
    pivots: List[int] = []
    out: List[Dict[int, Fraction]] = []
    for c in range(M.ncols):
        idx = next((k for k, row in enumerate(work) if c in row), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        inv = 1 / prow[c]
        prow = {k: v * inv for k, v in prow.items()}
        for row in work + out:
            f = row.get(c)
            if f:
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        work = [row for row in work if row]
        out.append(prow)
        pivots.append(c)
    return out, pivots


def kernel_basis(M: SparseRationalMatrix) -> List[SparseVector]:
    """Basis of the right kernel {x : Mx = 0}, one vector per free column."""
    rows, pivots = rref(M)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.ncols):
        if free in pivot_set:
            continue
        vec: SparseVector = {free: 1}
        for row, p in zip(rows, pivots):
            v = row.get(free)
            if v:
                vec[p] = _norm(-v)
        basis.append(vec)
    return basis


def column_space_basis(M: SparseRationalMatrix) -> List[SparseVector]:
    """Pivot columns of M (in column order) spanning its column space."""
    _, pivots = rref(M)
    cols = M.columns()
    return [cols[p] for p in pivots]


def solve(M: SparseRationalMatrix, b: Mapping[int, Scalar]) -> Optional[SparseVector]:
    """One solution x of Mx = b, or None when b is outside the column space."""
    aug = M.hstack(SparseRationalMatrix.from_columns(M.nrows, [dict(b)]))
    rows, pivots = rref(aug)
    if M.ncols in pivots:
        return None
    x: SparseVector = {}
    for row, p in zip(rows, pivots):
        v = row.get(M.ncols)
        if v:
            x[p] = _norm(v)
    return x
