"""The quasi-Poisson bicomplex Hom(A^i ⊗ ∧^j, M) and its differentials.

A cochain is a column vector.  In degree n the blocks (i, j), i + j = n, are
laid out by decreasing i; inside a block the coordinate of the elementary
cochain sending v_t ⊗ (v_s1 ∧ ... ∧ v_sj) to m is

    offset + (index(t) * C(d, j) + index(s)) * dim M + m

where index(t) reads the tuple t as a base-d number and index(s) is the
lexicographic rank of the strictly increasing subset s.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import (
    FiniteDimAlgebra,
    LieModuleStructure,
    PoissonAlgebra,
    QuasiPoissonModule,
    Table,
    change_basis,
    self_module,
    trivial_poisson,
    validate_lie_module,
)
from .errors import ConsistencyError, ResourceError
from .linalg import (
    SparseRationalMatrix,
    SparseVector,
    check_size,
    column_space_basis,
    entry_cap,
    kernel_basis,
    rank,
    solve,
)

Module = Union[QuasiPoissonModule, LieModuleStructure]


@dataclass(frozen=True)
class Block:
    i: int
    j: int
    offset: int
    n_args: int
    size: int


class CochainSpace:
    """Flat indexing of Hom(⊕_{i+j=n} A^i ⊗ ∧^j, M), optionally truncated to i <= max_i."""

    def __init__(self, dim_a: int, n: int, dim_m: int, max_i: Optional[int] = None, alphabet: Optional[Sequence[int]] = None):
        self.dim_a = dim_a
        self.n = n
        self.dim_m = dim_m
        self.max_i = max_i
        # the tensor factors range over ``alphabet``; a proper subset gives normalized cochains
        self.alphabet = tuple(alphabet) if alphabet is not None else tuple(range(dim_a))
        base = len(self.alphabet)
        self.blocks: List[Block] = []
        offset = 0
        for i in range(n, -1, -1):
            j = n - i
            if j > dim_a or (max_i is not None and i > max_i):
                continue
            if alphabet is not None and j > 0:
                continue
            n_args = base ** i * comb(dim_a, j)
            self.blocks.append(Block(i, j, offset, n_args, n_args * dim_m))
            offset += n_args * dim_m
        self.dim = offset
        self._by_i = {b.i: b for b in self.blocks}

    def block(self, i: int) -> Optional[Block]:
        return self._by_i.get(i)

    def block_range(self, i: int) -> range:
        b = self._by_i.get(i)
        return range(b.offset, b.offset + b.size) if b else range(0)

    def index(self, i: int, t: Sequence[int], s: Sequence[int], m: int) -> int:
        b = self._by_i[i]
        base = len(self.alphabet)
        digit = {x: k for k, x in enumerate(self.alphabet)}
        ti = 0
        for x in t:
            ti = ti * base + digit[x]
        si = subset_index(self.dim_a, len(s))[tuple(s)]
        return b.offset + (ti * comb(self.dim_a, b.j) + si) * self.dim_m + m

    def unflatten(self, flat: int) -> Tuple[int, Tuple[int, ...], Tuple[int, ...], int]:
        for b in self.blocks:
            if b.offset <= flat < b.offset + b.size:
                rel = flat - b.offset
                m = rel % self.dim_m
                rel //= self.dim_m
                nsub = comb(self.dim_a, b.j)
                si, ti = rel % nsub, rel // nsub
                base = len(self.alphabet)
                t = []
                for _ in range(b.i):
                    t.append(self.alphabet[ti % base])
                    ti //= base
                return b.i, tuple(reversed(t)), subsets(self.dim_a, b.j)[si], m
        raise IndexError(flat)

    def __repr__(self) -> str:
        return f"CochainSpace(n={self.n}, dim={self.dim}, blocks={[(b.i, b.j) for b in self.blocks]})"


_SUBSETS: Dict[Tuple[int, int], List[Tuple[int, ...]]] = {}
_SUBSET_INDEX: Dict[Tuple[int, int], Dict[Tuple[int, ...], int]] = {}


def subsets(d: int, j: int) -> List[Tuple[int, ...]]:
    key = (d, j)
    if key not in _SUBSETS:
        _SUBSETS[key] = list(itertools.combinations(range(d), j))
        _SUBSET_INDEX[key] = {s: k for k, s in enumerate(_SUBSETS[key])}
    return _SUBSETS[key]


def subset_index(d: int, j: int) -> Dict[Tuple[int, ...], int]:
    subsets(d, j)
    return _SUBSET_INDEX[(d, j)]


def cochain_dim(P: PoissonAlgebra, M: Module, n: int, cap: Optional[int] = None) -> int:
    """Σ_{i+j=n, j<=dim A} (dim A)^i C(dim A, j) dim M."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    d = P.dim
    total = sum(d ** (n - j) * comb(d, j) for j in range(0, min(n, d) + 1)) * M.dim
    limit = entry_cap(cap)
    if total > limit:
        raise ResourceError(f"cochain space in degree {n} has dimension {total} > cap {limit}", shape=(total,), cap=limit)
    return total


# --------------------------------------------------------------------------
# assembly


def _lie_table(M: Module) -> Table:
    return M.action if isinstance(M, LieModuleStructure) else M.lie


class _Assembler:
    """Accumulates matrix entries row-major while walking codomain arguments."""

    def __init__(self, mult: Optional[Table], bracket: Optional[Table], M: Module, dom: CochainSpace, cod: CochainSpace):
        self.mult = mult
        self.bracket = bracket
        self.M = M
        self.dom = dom
        self.cod = cod
        self.rows: Dict[int, Dict[int, object]] = {}

    def _emit(self, row_base: int, col_base: int, coef, action) -> None:
        rows = self.rows
        dm = self.M.dim
        if action is None:
            for m in range(dm):
                row = rows.setdefault(row_base + m, {})
                c = col_base + m
                row[c] = row.get(c, 0) + coef
        else:
            for m in range(dm):
                c = col_base + m
                for m2, v in action[m]:
                    row = rows.setdefault(row_base + m2, {})
                    row[c] = row.get(c, 0) + coef * v

    def vertical(self, i: int, j: int, sign: int) -> None:
        """sign * σ_V from block (i, j) of dom into block (i+1, j) of cod."""
        src, dst = self.dom.block(i), self.cod.block(i + 1)
        if src is None or dst is None or src.j != j:
            return
        M, mult = self.M, self.mult
        alphabet = self.cod.alphabet
        base = len(alphabet)
        digit = {x: k for k, x in enumerate(alphabet)}
        nsub = comb(self.dom.dim_a, j)
        dm = M.dim
        n = i + 1
        for ti, a in enumerate(itertools.product(alphabet, repeat=n)):
            for si in range(nsub):
                row_base = dst.offset + (ti * nsub + si) * dm
                col0 = src.offset + si * dm
                stride = nsub * dm
                # a1 f(a2 ... a_{i+1})
                self._emit(row_base, col0 + (ti % base ** i) * stride, sign, M.left[a[0]])
                # (-1)^k f(... a_k a_{k+1} ...)
                for k in range(1, n):
                    hi = ti // base ** (n - k + 1)
                    lo = ti % base ** (n - k - 1)
                    for b, c in mult[a[k - 1]][a[k]]:
                        db = digit.get(b)
                        if db is None:
                            continue
                        dom_ti = (hi * base + db) * base ** (n - k - 1) + lo
                        self._emit(row_base, col0 + dom_ti * stride, sign * (-1) ** k * c, None)
                # (-1)^{i+1} f(a1 ... a_i) a_{i+1}
                self._emit(row_base, col0 + (ti // base) * stride, sign * (-1) ** n, M.right[a[n - 1]])

    def horizontal(self, i: int, j: int, sign: int) -> None:
        """sign * σ_H from block (i, j) of dom into block (i, j+1) of cod."""
        src, dst = self.dom.block(i), self.cod.block(i)
        if src is None or dst is None or src.j != j or dst.j != j + 1:
            return
        d = self.dom.dim_a
        M, br = self.M, self.bracket
        lie = _lie_table(M)
        dm = M.dim
        nsub_src, nsub_dst = comb(d, j), comb(d, j + 1)
        sidx = subset_index(d, j)
        targets = subsets(d, j + 1)
        for ti, a in enumerate(itertools.product(range(d), repeat=i)):
            for si, S in enumerate(targets):
                row_base = dst.offset + (ti * nsub_dst + si) * dm
                for li, x in enumerate(S):
                    s_l = sign if li % 2 == 0 else -sign
                    rest = S[:li] + S[li + 1:]
                    rest_i = sidx[rest]
                    col_base = src.offset + (ti * nsub_src + rest_i) * dm
                    # {x_l, f(a; rest)}_*
                    self._emit(row_base, col_base, s_l, lie[x])
                    # - Σ_t f(... {x_l, a_t} ...; rest)
                    for t in range(i):
                        w = d ** (i - 1 - t)
                        for b, c in br[x][a[t]]:
                            dom_ti = ti + (b - a[t]) * w
                            self._emit(row_base, src.offset + (dom_ti * nsub_src + rest_i) * dm, -s_l * c, None)
                # Σ_{p<q} (-1)^{p+q} f(a; {x_p, x_q} ∧ rest)
                for pi, qi in itertools.combinations(range(j + 1), 2):
                    pair = br[S[pi]][S[qi]]
                    if not pair:
                        continue
                    s_pq = sign if (pi + qi) % 2 == 0 else -sign
                    rest = S[:pi] + S[pi + 1:qi] + S[qi + 1:]
                    for b, c in pair:
                        if b in rest:
                            continue
                        pos = sum(1 for y in rest if y < b)
                        new = rest[:pos] + (b,) + rest[pos:]
                        coef = s_pq * c * (-1 if pos % 2 else 1)
                        col_base = src.offset + (ti * nsub_src + sidx[new]) * dm
                        self._emit(row_base, col_base, coef, None)

    def matrix(self) -> SparseRationalMatrix:
        return SparseRationalMatrix.from_rows(self.cod.dim, self.dom.dim, self.rows)


def sigma_V(P: PoissonAlgebra, M: Module, i: int, j: int) -> SparseRationalMatrix:
    """Hochschild coboundary in the tensor direction: block (i, j) -> (i+1, j)."""
    d = P.dim
    dom = _single_block(d, i, j, M.dim)
    cod = _single_block(d, i + 1, j, M.dim)
    asm = _Assembler(P.algebra.mult, P.bracket.bracket, M, dom, cod)
    asm.vertical(i, j, 1)
    return asm.matrix()


def sigma_H(P: PoissonAlgebra, M: Module, i: int, j: int) -> SparseRationalMatrix:
    """Chevalley-Eilenberg coboundary in the wedge direction: block (i, j) -> (i, j+1).

    When j + 1 > dim A the target block is zero and the matrix has no rows.
    """
    d = P.dim
    dom = _single_block(d, i, j, M.dim)
    cod = _single_block(d, i, j + 1, M.dim)
    asm = _Assembler(P.algebra.mult, P.bracket.bracket, M, dom, cod)
    asm.horizontal(i, j, 1)
    return asm.matrix()


def _single_block(d: int, i: int, j: int, dim_m: int) -> CochainSpace:
    space = CochainSpace(d, i + j, dim_m, max_i=i)
    space.blocks = [b for b in space.blocks if b.i == i]
    if space.blocks:
        b = space.blocks[0]
        space.blocks = [Block(b.i, b.j, 0, b.n_args, b.size)]
    space.dim = sum(b.size for b in space.blocks)
    space._by_i = {b.i: b for b in space.blocks}
    return space


def total_differential(
    P: PoissonAlgebra,
    M: Module,
    n: int,
    cap: Optional[int] = None,
    max_i: Optional[int] = None,
) -> SparseRationalMatrix:
    """σ^n = ⊕_{i+j=n} (σ_V^{i,j} + (-1)^i σ_H^{i,j}).

    ``max_i`` restricts the domain to the blocks with i <= max_i (the columns of
    the truncated subspace); the codomain is always the full degree n+1 space.
    """
    d = P.dim
    dom = CochainSpace(d, n, M.dim, max_i=max_i)
    cod = CochainSpace(d, n + 1, M.dim)
    check_size(cod.dim, dom.dim, cap, f"differential in degree {n}")
    asm = _Assembler(P.algebra.mult, P.bracket.bracket, M, dom, cod)
    for b in dom.blocks:
        asm.vertical(b.i, b.j, 1)
        asm.horizontal(b.i, b.j, -1 if b.i % 2 else 1)
    return asm.matrix()


def hochschild_differential(
    A: FiniteDimAlgebra,
    M: QuasiPoissonModule,
    n: int,
    cap: Optional[int] = None,
    alphabet: Optional[Sequence[int]] = None,
) -> SparseRationalMatrix:
    """δ^n: Hom(A^n, M) -> Hom(A^{n+1}, M); ``alphabet`` selects normalized cochains."""
    d = A.dim
    dom = CochainSpace(d, n, M.dim, max_i=n, alphabet=alphabet)
    cod = CochainSpace(d, n + 1, M.dim, max_i=n + 1, alphabet=alphabet)
    dom.blocks = [b for b in dom.blocks if b.j == 0]
    cod.blocks = [b for b in cod.blocks if b.j == 0]
    for sp in (dom, cod):
        sp.blocks = [Block(b.i, b.j, 0, b.n_args, b.size) for b in sp.blocks]
        sp.dim = sum(b.size for b in sp.blocks)
        sp._by_i = {b.i: b for b in sp.blocks}
    check_size(cod.dim, dom.dim, cap, f"Hochschild differential in degree {n}")
    asm = _Assembler(A.mult, None, M, dom, cod)
    asm.vertical(n, 0, 1)
    return asm.matrix()


def ce_differential(P: PoissonAlgebra, L: Module, n: int, cap: Optional[int] = None) -> SparseRationalMatrix:
    """d^n: Hom(∧^n A, L) -> Hom(∧^{n+1} A, L) for a Lie module L."""
    d = P.dim
    dom = _single_block(d, 0, n, L.dim)
    cod = _single_block(d, 0, n + 1, L.dim)
    check_size(cod.dim, dom.dim, cap, f"Lie differential in degree {n}")
    asm = _Assembler(P.algebra.mult, P.bracket.bracket, L, dom, cod)
    asm.horizontal(0, n, 1)
    return asm.matrix()


def hochschild_complex(A: FiniteDimAlgebra, M: QuasiPoissonModule, max_n: int, cap: Optional[int] = None) -> List[SparseRationalMatrix]:
    return [hochschild_differential(A, M, n, cap) for n in range(max_n + 1)]


def ce_complex(P: PoissonAlgebra, L: Module, max_n: int, cap: Optional[int] = None) -> List[SparseRationalMatrix]:
    return [ce_differential(P, L, n, cap) for n in range(max_n + 1)]


def unit_adapted(A: FiniteDimAlgebra) -> Tuple[FiniteDimAlgebra, int]:
    """Same algebra in a basis containing 1_A; returns (algebra, index of the unit).

    The first basis vector with a nonzero unit coordinate is replaced by 1_A.
    """
    u = next(k for k, c in enumerate(A.unit) if c)
    if A.unit_vector == {u: 1}:
        return A, u
    T = [[1 if r == c else 0 for c in range(A.dim)] for r in range(A.dim)]
    for k in range(A.dim):
        T[k][u] = A.unit[k]
    return change_basis(trivial_poisson(A), T).algebra, u


def normalized_hochschild_differential(A: FiniteDimAlgebra, n: int, cap: Optional[int] = None) -> SparseRationalMatrix:
    """δ^n on normalized cochains Hom((A/K1)^n, A); same cohomology, smaller matrices."""
    B, u = unit_adapted(A)
    M = self_module(trivial_poisson(B))
    alphabet = [k for k in range(B.dim) if k != u]
    return hochschild_differential(B, M, n, cap, alphabet=alphabet)


# --------------------------------------------------------------------------
# the Lie action of A on Hochschild cohomology


@dataclass
class InducedModule:
    module: LieModuleStructure
    representatives: List[SparseVector]
    cocycle_dim: int
    coboundary_dim: int


def _restrict_wedge(vec: SparseVector, d: int, dim_m: int, x: int) -> SparseVector:
    """From a cochain on A^p ⊗ ∧^1 keep the slice at wedge argument v_x."""
    out = {}
    for flat, c in vec.items():
        m = flat % dim_m
        rest = flat // dim_m
        s, t = rest % d, rest // d
        if s == x:
            out[t * dim_m + m] = c
    return out


def induced_lie_module_on_hh(P: PoissonAlgebra, p: int, M: Optional[QuasiPoissonModule] = None) -> InducedModule:
    """HH^p(A, M) as a module over the Lie algebra (A, {-,-}).

    v acts on a cochain by (v·f)(a_1..a_p) = {v, f(a)}_* - Σ_t f(.., {v, a_t}, ..),
    which is σ_H^{p,0} read at the wedge argument v.  Representatives span a
    complement of the coboundaries inside the cocycles, chosen greedily in
    flat-index order.
    """
    M = M if M is not None else self_module(P)
    d = P.dim
    delta_p = hochschild_differential(P.algebra, M, p)
    cocycles = kernel_basis(delta_p)
    if p > 0:
        coboundaries = column_space_basis(hochschild_differential(P.algebra, M, p - 1))
    else:
        coboundaries = []
    dim_c = (d ** p) * M.dim
    reps: List[SparseVector] = []
    current = list(coboundaries)
    r0 = len(current)
    for z in cocycles:
        trial = current + [z]
        if rank(SparseRationalMatrix.from_columns(dim_c, trial)) > r0:
            current = trial
            reps.append(z)
            r0 += 1
    basis = SparseRationalMatrix.from_columns(dim_c, reps + list(coboundaries))
    H = sigma_H(P, M, p, 0)
    action: Dict[Tuple[int, int], Dict[int, object]] = {}
    for r, f in enumerate(reps):
        image = H.apply(f)
        for x in range(d):
            g = _restrict_wedge(image, d, M.dim, x)
            if not g:
                continue
            coeffs = solve(basis, g)
            if coeffs is None:
                raise ConsistencyError(f"action of basis vector {x} does not preserve HH^{p} cocycles")
            vec = {k: c for k, c in coeffs.items() if k < len(reps) and c}
            if vec:
                action[(x, r)] = vec
    module = LieModuleStructure.from_entries(d, len(reps), action, name=f"HH^{p}")
    if not validate_lie_module(P, module).ok:
        raise ConsistencyError(f"induced action on HH^{p} is not a Lie module")
    return InducedModule(module, reps, len(cocycles), len(coboundaries))
