"""Finite-dimensional associative, Lie and Poisson structures over Q.

Elements are sparse vectors ``{basis index: scalar}``.  Structure constants are
kept as nested tuples ``table[i][j] = ((k, c), ...)`` so that algebra values are
immutable and hashable-by-fingerprint.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import AxiomError, StructureError
from .linalg import (
    Scalar,
    SparseRationalMatrix,
    SparseVector,
    as_scalar,
    column_space_basis,
    kernel_basis,
    rank,
    scalar_str,
    solve,
)

Table = Tuple[Tuple[Tuple[Tuple[int, Scalar], ...], ...], ...]


# --------------------------------------------------------------------------
# sparse vector helpers


def add_into(acc: Dict[int, Scalar], vec: Mapping[int, Scalar], coef: Scalar = 1) -> None:
    for k, v in vec.items():
        nv = acc.get(k, 0) + coef * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def add_pairs(acc: Dict[int, Scalar], pairs, coef: Scalar = 1) -> None:
    for k, v in pairs:
        nv = acc.get(k, 0) + coef * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def clean(vec: Mapping[int, Scalar]) -> SparseVector:
    out = {}
    for k, v in vec.items():
        if v:
            out[k] = v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v
    return out


def bilinear(table: Table, x: Mapping[int, Scalar], y: Mapping[int, Scalar]) -> SparseVector:
    """Evaluate the bilinear map with structure constants ``table`` on x, y."""
    acc: Dict[int, Scalar] = {}
    for i, a in x.items():
        row = table[i]
        for j, b in y.items():
            if row[j]:
                add_pairs(acc, row[j], a * b)
    return acc


def _freeze(dim: int, entries: Mapping[Tuple[int, int], Mapping[int, Scalar]], what: str) -> Table:
    rows = [[{} for _ in range(dim)] for _ in range(dim)]
    for (i, j), vec in entries.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise StructureError(f"{what} entry ({i}, {j}) out of range for dim {dim}")
        for k, c in vec.items():
            if not 0 <= k < dim:
                raise StructureError(f"{what} entry ({i}, {j}) has output index {k} out of range")
            c = as_scalar(c)
            if c:
                rows[i][j][k] = rows[i][j].get(k, 0) + c
    return tuple(
        tuple(tuple(sorted((k, c) for k, c in cell.items() if c)) for cell in row) for row in rows
    )


def _freeze_action(n_alg: int, n_mod: int, entries, what: str) -> Table:
    rows = [[{} for _ in range(n_mod)] for _ in range(n_alg)]
    for (a, m), vec in entries.items():
        if not (0 <= a < n_alg and 0 <= m < n_mod):
            raise StructureError(f"{what} entry ({a}, {m}) out of range")
        for k, c in vec.items():
            if not 0 <= k < n_mod:
                raise StructureError(f"{what} entry ({a}, {m}) has output index {k} out of range")
            c = as_scalar(c)
            if c:
                rows[a][m][k] = rows[a][m].get(k, 0) + c
    return tuple(
        tuple(tuple(sorted((k, c) for k, c in cell.items() if c)) for cell in row) for row in rows
    )


def table_entries(table: Table) -> Dict[Tuple[int, int], Dict[int, Scalar]]:
    return {
        (i, j): dict(cell) for i, row in enumerate(table) for j, cell in enumerate(row) if cell
    }


# --------------------------------------------------------------------------
# domain types


@dataclass(frozen=True, eq=False)
class FiniteDimAlgebra:
    """Unital associative algebra given by structure constants in a fixed basis."""

    dim: int
    mult: Table
    unit: Tuple[Scalar, ...]
    labels: Tuple[str, ...]

    @classmethod
    def from_entries(
        cls,
        dim: int,
        mult: Mapping[Tuple[int, int], Mapping[int, Scalar]],
        unit: Sequence,
        labels: Optional[Sequence[str]] = None,
    ) -> "FiniteDimAlgebra":
        if dim < 1:
            raise StructureError("algebras must have dimension at least 1 (they are unital)")
        if len(unit) != dim:
            raise StructureError(f"unit vector has length {len(unit)}, expected {dim}")
        labels = tuple(labels) if labels is not None else tuple(f"v{i}" for i in range(dim))
        if len(labels) != dim:
            raise StructureError(f"{len(labels)} basis labels for dim {dim}")
        return cls(dim, _freeze(dim, mult, "mult"), tuple(as_scalar(u) for u in unit), labels)

    def product(self, x: Mapping[int, Scalar], y: Mapping[int, Scalar]) -> SparseVector:
        return bilinear(self.mult, x, y)

    def basis_product(self, i: int, j: int) -> SparseVector:
        return dict(self.mult[i][j])

    def commutator(self, x, y) -> SparseVector:
        out = self.product(x, y)
        add_into(out, self.product(y, x), -1)
        return out

    @property
    def unit_vector(self) -> SparseVector:
        return {k: c for k, c in enumerate(self.unit) if c}

    def basis_vector(self, i: int) -> SparseVector:
        return {i: 1}

    def is_commutative(self) -> bool:
        return all(self.mult[i][j] == self.mult[j][i] for i in range(self.dim) for j in range(i))


@dataclass(frozen=True, eq=False)
class LieBracketTable:
    dim: int
    bracket: Table

    @classmethod
    def from_entries(cls, dim: int, entries: Mapping[Tuple[int, int], Mapping[int, Scalar]]) -> "LieBracketTable":
        return cls(dim, _freeze(dim, entries, "bracket"))

    @classmethod
    def zero(cls, dim: int) -> "LieBracketTable":
        return cls(dim, _freeze(dim, {}, "bracket"))

    def __call__(self, x, y) -> SparseVector:
        return bilinear(self.bracket, x, y)

    def is_trivial(self) -> bool:
        return not any(cell for row in self.bracket for cell in row)


@dataclass(frozen=True, eq=False)
class PoissonAlgebra:
    """Associative algebra plus a Lie bracket; ``order`` is the PBW total order."""

    algebra: FiniteDimAlgebra
    bracket: LieBracketTable
    order: Tuple[int, ...] = ()
    name: str = ""
    _fingerprint: List[str] = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        if self.bracket.dim != self.algebra.dim:
            raise StructureError(
                f"bracket table has dim {self.bracket.dim}, algebra has dim {self.algebra.dim}"
            )
        if not self.order:
            object.__setattr__(self, "order", tuple(range(self.algebra.dim)))
        if sorted(self.order) != list(range(self.algebra.dim)):
            raise StructureError("basis order must be a permutation of the basis indices")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.algebra.labels

    @property
    def position(self) -> Dict[int, int]:
        """Basis index -> rank in the PBW order."""
        return {b: k for k, b in enumerate(self.order)}

    def product(self, x, y) -> SparseVector:
        return self.algebra.product(x, y)

    def lie(self, x, y) -> SparseVector:
        return self.bracket(x, y)

    @property
    def fingerprint(self) -> str:
        """Stable hash of the structure constants (used as a cache key)."""
        if not self._fingerprint:
            h = hashlib.sha256()
            h.update(repr((self.dim, self.order, self.algebra.unit)).encode())
            for tab in (self.algebra.mult, self.bracket.bracket):
                h.update(repr(tuple(tuple(tuple((k, scalar_str(c)) for k, c in cell) for cell in row) for row in tab)).encode())
            self._fingerprint.append(h.hexdigest())
        return self._fingerprint[0]


@dataclass(frozen=True, eq=False)
class QuasiPoissonModule:
    """Bimodule with a compatible Lie action ``{a, m}_*``.

    Tables are indexed ``[algebra basis][module basis]``; ``right[a][m]`` is m·a.
    """

    dim: int
    left: Table
    right: Table
    lie: Table
    name: str = ""
    _fingerprint: List[str] = field(default_factory=list, repr=False, compare=False)

    @classmethod
    def from_entries(cls, n_alg: int, dim: int, left, right, lie, name: str = "") -> "QuasiPoissonModule":
        return cls(
            dim,
            _freeze_action(n_alg, dim, left, "left action"),
            _freeze_action(n_alg, dim, right, "right action"),
            _freeze_action(n_alg, dim, lie, "lie action"),
            name,
        )

    @property
    def fingerprint(self) -> str:
        if not self._fingerprint:
            h = hashlib.sha256()
            h.update(repr((self.dim, self.left, self.right, self.lie)).encode())
            self._fingerprint.append(h.hexdigest())
        return self._fingerprint[0]

    def act_left(self, a: Mapping[int, Scalar], m: Mapping[int, Scalar]) -> SparseVector:
        return bilinear(self.left, a, m)

    def act_right(self, m: Mapping[int, Scalar], a: Mapping[int, Scalar]) -> SparseVector:
        return bilinear(self.right, a, m)

    def act_lie(self, a: Mapping[int, Scalar], m: Mapping[int, Scalar]) -> SparseVector:
        return bilinear(self.lie, a, m)


@dataclass(frozen=True, eq=False)
class LieModuleStructure:
    """A module over the Lie algebra (A, {-,-}); ``action[a][m]`` = {v_a, m}."""

    dim: int
    action: Table
    name: str = ""
    _fingerprint: List[str] = field(default_factory=list, repr=False, compare=False)

    @classmethod
    def from_entries(cls, n_alg: int, dim: int, action, name: str = "") -> "LieModuleStructure":
        return cls(dim, _freeze_action(n_alg, dim, action, "lie action"), name)

    @classmethod
    def trivial(cls, n_alg: int, dim: int = 1, name: str = "trivial") -> "LieModuleStructure":
        return cls(dim, _freeze_action(n_alg, dim, {}, "lie action"), name)

    @property
    def lie(self) -> Table:
        return self.action

    @property
    def fingerprint(self) -> str:
        if not self._fingerprint:
            self._fingerprint.append(hashlib.sha256(repr((self.dim, self.action)).encode()).hexdigest())
        return self._fingerprint[0]

    def is_trivial(self) -> bool:
        return not any(cell for row in self.action for cell in row)

    def act(self, a, m) -> SparseVector:
        return bilinear(self.action, a, m)


@dataclass(frozen=True)
class Quiver:
    vertices: int
    arrows: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        if self.vertices < 1:
            raise StructureError("a quiver needs at least one vertex")
        for s, t in self.arrows:
            if not (0 <= s < self.vertices and 0 <= t < self.vertices):
                raise StructureError(f"arrow ({s}, {t}) has an endpoint out of range")

    def is_acyclic(self) -> bool:
        indeg = [0] * self.vertices
        for _, t in self.arrows:
            indeg[t] += 1
        stack = [v for v in range(self.vertices) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        stack.append(t)
        return seen == self.vertices

    def is_tree(self) -> bool:
        if len(self.arrows) != self.vertices - 1:
            return False
        parent = list(range(self.vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t in self.arrows:
            rs, rt = find(s), find(t)
            if rs == rt:
                return False
            parent[rs] = rt
        return True


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: Tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.axiom} at {self.witness}"


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, *witness: int) -> None:
        self.violations.append(Violation(axiom, tuple(witness)))

    def axioms(self) -> List[str]:
        return sorted({v.axiom for v in self.violations})

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [{"axiom": v.axiom, "witness": list(v.witness)} for v in self.violations]}


def validate_algebra(A: FiniteDimAlgebra, report: Optional[ValidationReport] = None) -> ValidationReport:
    report = report if report is not None else ValidationReport()
    d = A.dim
    if len(A.mult) != d or any(len(row) != d for row in A.mult) or len(A.unit) != d:
        raise StructureError("multiplication table or unit has the wrong shape")
    e = [{i: 1} for i in range(d)]
    for i, j, k in itertools.product(range(d), repeat=3):
        lhs = A.product(A.basis_product(i, j), e[k])
        rhs = A.product(e[i], A.basis_product(j, k))
        if lhs != rhs:
            report.add("associativity", i, j, k)
    u = A.unit_vector
    for i in range(d):
        if A.product(u, e[i]) != e[i] or A.product(e[i], u) != e[i]:
            report.add("unit", i)
    return report


def validate_bracket(L: LieBracketTable, report: Optional[ValidationReport] = None) -> ValidationReport:
    report = report if report is not None else ValidationReport()
    d = L.dim
    if len(L.bracket) != d or any(len(row) != d for row in L.bracket):
        raise StructureError("bracket table has the wrong shape")
    e = [{i: 1} for i in range(d)]
    for i in range(d):
        for j in range(i, d):
            s = L(e[i], e[j])
            add_into(s, L(e[j], e[i]))
            if s:
                report.add("antisymmetry", i, j)
    for i, j, k in itertools.combinations(range(d), 3):
        acc = L(e[i], L(e[j], e[k]))
        add_into(acc, L(e[j], L(e[k], e[i])))
        add_into(acc, L(e[k], L(e[i], e[j])))
        if acc:
            report.add("jacobi", i, j, k)
    return report


def validate_poisson(P: PoissonAlgebra) -> ValidationReport:
    """Check every axiom; an empty report means P is a Poisson algebra."""
    if P.algebra.dim != P.bracket.dim:
        raise StructureError("algebra and bracket dimensions differ")
    report = validate_algebra(P.algebra)
    validate_bracket(P.bracket, report)
    d = P.dim
    e = [{i: 1} for i in range(d)]
    for i, j, k in itertools.product(range(d), repeat=3):
        lhs = P.lie(e[i], P.algebra.basis_product(j, k))
        rhs = P.product(P.lie(e[i], e[j]), e[k])
        add_into(rhs, P.product(e[j], P.lie(e[i], e[k])))
        if lhs != rhs:
            report.add("leibniz", i, j, k)
    return report


def validate_module(P: PoissonAlgebra, M: QuasiPoissonModule) -> ValidationReport:
    """Bimodule axioms and the bracket compatibilities on basis triples."""
    d, n = P.dim, M.dim
    for name, tab in (("left", M.left), ("right", M.right), ("lie", M.lie)):
        if len(tab) != d or any(len(row) != n for row in tab):
            raise StructureError(f"{name} action table has the wrong shape")
    report = ValidationReport()
    ea = [{i: 1} for i in range(d)]
    em = [{i: 1} for i in range(n)]
    u = P.algebra.unit_vector
    for m in range(n):
        if M.act_left(u, em[m]) != em[m]:
            report.add("left unit", m)
        if M.act_right(em[m], u) != em[m]:
            report.add("right unit", m)
    for a, b, m in itertools.product(range(d), range(d), range(n)):
        ab = P.algebra.basis_product(a, b)
        if M.act_left(ab, em[m]) != M.act_left(ea[a], M.act_left(ea[b], em[m])):
            report.add("left associativity", a, b, m)
        if M.act_right(em[m], ab) != M.act_right(M.act_right(em[m], ea[a]), ea[b]):
            report.add("right associativity", a, b, m)
        if M.act_right(M.act_left(ea[a], em[m]), ea[b]) != M.act_left(ea[a], M.act_right(em[m], ea[b])):
            report.add("bimodule", a, b, m)
        # {a, bm} = {a,b}m + b{a,m}
        lhs = M.act_lie(ea[a], M.act_left(ea[b], em[m]))
        rhs = M.act_left(P.lie(ea[a], ea[b]), em[m])
        add_into(rhs, M.act_left(ea[b], M.act_lie(ea[a], em[m])))
        if lhs != rhs:
            report.add("lie on left action", a, b, m)
        # {a, mb} = m{a,b} + {a,m}b
        lhs = M.act_lie(ea[a], M.act_right(em[m], ea[b]))
        rhs = M.act_right(em[m], P.lie(ea[a], ea[b]))
        add_into(rhs, M.act_right(M.act_lie(ea[a], em[m]), ea[b]))
        if lhs != rhs:
            report.add("lie on right action", a, b, m)
        # {{a,b},m} = {a,{b,m}} - {b,{a,m}}
        lhs = M.act_lie(P.lie(ea[a], ea[b]), em[m])
        rhs = M.act_lie(ea[a], M.act_lie(ea[b], em[m]))
        add_into(rhs, M.act_lie(ea[b], M.act_lie(ea[a], em[m])), -1)
        if lhs != rhs:
            report.add("lie action", a, b, m)
    return report


def validate_lie_module(P: PoissonAlgebra, L: LieModuleStructure) -> ValidationReport:
    d, n = P.dim, L.dim
    if len(L.action) != d or any(len(row) != n for row in L.action):
        raise StructureError("lie action table has the wrong shape")
    report = ValidationReport()
    ea = [{i: 1} for i in range(d)]
    for a, b, m in itertools.product(range(d), range(d), range(n)):
        lhs = L.act(P.lie(ea[a], ea[b]), {m: 1})
        rhs = L.act(ea[a], L.act(ea[b], {m: 1}))
        add_into(rhs, L.act(ea[b], L.act(ea[a], {m: 1})), -1)
        if lhs != rhs:
            report.add("lie action", a, b, m)
    return report


def require_valid(P: PoissonAlgebra) -> PoissonAlgebra:
    report = validate_poisson(P)
    if not report.ok:
        raise AxiomError(report)
    return P


# --------------------------------------------------------------------------
# builders


def standard_poisson(A: FiniteDimAlgebra, lam=1, name: str = "") -> PoissonAlgebra:
    """(A, ·, λ[-,-]): the scaled commutator bracket."""
    lam = as_scalar(lam)
    d = A.dim
    entries = {}
    for i in range(d):
        for j in range(d):
            c = A.commutator({i: 1}, {j: 1})
            if c and lam:
                entries[(i, j)] = {k: lam * v for k, v in c.items()}
    return PoissonAlgebra(A, LieBracketTable.from_entries(d, entries), name=name)


def trivial_poisson(A: FiniteDimAlgebra, name: str = "") -> PoissonAlgebra:
    return PoissonAlgebra(A, LieBracketTable.zero(A.dim), name=name)


def path_algebra(Q: Quiver) -> FiniteDimAlgebra:
    """Path algebra of an acyclic quiver.

    A path runs left to right: for an arrow a: s -> t, e_s a = a = a e_t, and the
    product pq is the concatenation when p ends where q starts, else 0.
    Basis: vertex idempotents, then paths ordered by length and arrow sequence.
    """
    if not Q.is_acyclic():
        raise StructureError("path algebra of a quiver with an oriented cycle is infinite-dimensional")
    # path = (source, target, arrow tuple)
    paths: List[Tuple[int, int, Tuple[int, ...]]] = [(v, v, ()) for v in range(Q.vertices)]
    frontier = [(s, t, (k,)) for k, (s, t) in enumerate(Q.arrows)]
    while frontier:
        paths.extend(frontier)
        nxt = []
        for s, t, word in frontier:
            for k, (s2, t2) in enumerate(Q.arrows):
                if s2 == t:
                    nxt.append((s, t2, word + (k,)))
        frontier = sorted(nxt, key=lambda p: p[2])
    by_word = {p[2]: i for i, p in enumerate(paths) if p[2]}
    mult = {}
    for i, (s1, t1, w1) in enumerate(paths):
        for j, (s2, t2, w2) in enumerate(paths):
            if t1 != s2:
                continue
            if not w1 and not w2:
                k = i
            elif not w1:
                k = j
            elif not w2:
                k = i
            else:
                k = by_word[w1 + w2]
            mult[(i, j)] = {k: 1}
    arrow_names = _arrow_names(len(Q.arrows))
    labels = []
    for s, t, w in paths:
        labels.append(f"e{s + 1}" if not w else "*".join(arrow_names[k] for k in w))
    unit = [1 if not w else 0 for _, _, w in paths]
    return FiniteDimAlgebra.from_entries(len(paths), mult, unit, labels)


def _arrow_names(n: int) -> List[str]:
    if n <= 26:
        return [chr(ord("a") + k) for k in range(n)]
    return [f"x{k + 1}" for k in range(n)]


def matrix_algebra(n: int) -> FiniteDimAlgebra:
    """Full matrix algebra M_n with basis E_pq (row-major), E_pq E_rs = δ_qr E_ps."""
    if n < 1:
        raise StructureError("matrix algebra needs n >= 1")
    idx = lambda p, q: p * n + q
    mult = {}
    for p, q, s in itertools.product(range(n), repeat=3):
        mult[(idx(p, q), idx(q, s))] = {idx(p, s): 1}
    unit = [1 if p == q else 0 for p in range(n) for q in range(n)]
    labels = [f"E{p + 1}{q + 1}" for p in range(n) for q in range(n)]
    return FiniteDimAlgebra.from_entries(n * n, mult, unit, labels)


def truncated_polynomial(k: int) -> FiniteDimAlgebra:
    """K[x]/(x^k) with basis 1, x, ..., x^{k-1}."""
    mult = {(i, j): {i + j: 1} for i in range(k) for j in range(k) if i + j < k}
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, k)]
    return FiniteDimAlgebra.from_entries(k, mult, [1] + [0] * (k - 1), labels)


def product_algebra(*factors: FiniteDimAlgebra) -> FiniteDimAlgebra:
    """Direct product of algebras (block-diagonal structure constants)."""
    mult, unit, labels, off = {}, [], [], 0
    for n, F in enumerate(factors):
        for (i, j), vec in table_entries(F.mult).items():
            mult[(i + off, j + off)] = {k + off: c for k, c in vec.items()}
        unit.extend(F.unit)
        labels.extend(f"{lab}_{n + 1}" for lab in F.labels)
        off += F.dim
    return FiniteDimAlgebra.from_entries(off, mult, unit, labels)


def square_zero(n: int) -> FiniteDimAlgebra:
    """K ⊕ V with V·V = 0, dim V = n (the local algebra K[x_1..x_n]/(x)^2)."""
    mult = {(0, 0): {0: 1}}
    for i in range(1, n + 1):
        mult[(0, i)] = {i: 1}
        mult[(i, 0)] = {i: 1}
    labels = ["1"] + [f"x{i}" for i in range(1, n + 1)]
    return FiniteDimAlgebra.from_entries(n + 1, mult, [1] + [0] * n, labels)


def field() -> FiniteDimAlgebra:
    return FiniteDimAlgebra.from_entries(1, {(0, 0): {0: 1}}, [1], ["1"])


# Named examples ------------------------------------------------------------

A2_QUIVER = Quiver(2, ((0, 1),))
A3_LINEAR_QUIVER = Quiver(3, ((0, 1), (1, 2)))
A3_ZIGZAG_QUIVER = Quiver(3, ((0, 1), (2, 1)))
KRONECKER_QUIVER = Quiver(2, ((0, 1), (0, 1)))


def builtin_examples() -> Dict[str, PoissonAlgebra]:
    """The standard Poisson structures used throughout the test-suite and docs."""
    return {
        "k": standard_poisson(field(), 1, "k"),
        "a2": standard_poisson(path_algebra(A2_QUIVER), 1, "a2"),
        "a3": standard_poisson(path_algebra(A3_LINEAR_QUIVER), 1, "a3"),
        "a3-zigzag": standard_poisson(path_algebra(A3_ZIGZAG_QUIVER), 1, "a3-zigzag"),
        "kronecker": standard_poisson(path_algebra(KRONECKER_QUIVER), 1, "kronecker"),
        "m2": standard_poisson(matrix_algebra(2), 1, "m2"),
        "dual-numbers": trivial_poisson(truncated_polynomial(2), "dual-numbers"),
    }


# --------------------------------------------------------------------------
# derived subspaces


def _stack(blocks: Sequence[Tuple[int, Dict[int, SparseVector]]], ncols: int) -> SparseRationalMatrix:
    rows, off = {}, 0
    for nrows, block in blocks:
        for r, row in block.items():
            rows[r + off] = row
        off += nrows
    return SparseRationalMatrix.from_rows(off, ncols, rows)


def _operator_rows(d: int, op) -> Dict[int, SparseVector]:
    """Rows of the matrix of the linear map z -> op(z) (op acts on basis vectors)."""
    rows: Dict[int, SparseVector] = {}
    for z in range(d):
        for k, c in op(z).items():
            rows.setdefault(k, {})[z] = c
    return rows


def center(A: FiniteDimAlgebra) -> List[SparseVector]:
    """Basis of Z(A) = {z : z v_i = v_i z for all i}."""
    d = A.dim
    blocks = [(d, _operator_rows(d, lambda z, i=i: A.commutator({z: 1}, {i: 1}))) for i in range(d)]
    return kernel_basis(_stack(blocks, d))


def lie_center(P: PoissonAlgebra) -> List[SparseVector]:
    """Basis of Z{A} = {z : {z, v_i} = 0 for all i}."""
    d = P.dim
    blocks = [(d, _operator_rows(d, lambda z, i=i: P.lie({z: 1}, {i: 1}))) for i in range(d)]
    return kernel_basis(_stack(blocks, d))


def poisson_center(P: PoissonAlgebra) -> List[SparseVector]:
    """Basis of Z(A) ∩ Z{A} via the joint kernel."""
    d = P.dim
    blocks = [(d, _operator_rows(d, lambda z, i=i: P.algebra.commutator({z: 1}, {i: 1}))) for i in range(d)]
    blocks += [(d, _operator_rows(d, lambda z, i=i: P.lie({z: 1}, {i: 1}))) for i in range(d)]
    return kernel_basis(_stack(blocks, d))


def commutator_subspace(A: FiniteDimAlgebra) -> List[SparseVector]:
    """Basis of [A, A] = span{v_i v_j - v_j v_i}."""
    d = A.dim
    cols = [A.commutator({i: 1}, {j: 1}) for i in range(d) for j in range(i + 1, d)]
    if not cols:
        return []
    return column_space_basis(SparseRationalMatrix.from_columns(d, cols))


def hochschild_low_matrices(A: FiniteDimAlgebra) -> Tuple[SparseRationalMatrix, SparseRationalMatrix]:
    """Matrices of δ⁰: A -> Hom(A,A) and δ¹: Hom(A,A) -> Hom(A⊗A,A), coefficients in A.

    Cochain f in Hom(A,A) has flat coordinate t*d + m for f(v_t) = v_m; a
    2-cochain has coordinate (a1*d + a2)*d + m.
    """
    d = A.dim
    e = [{i: 1} for i in range(d)]
    d0: Dict[int, SparseVector] = {}
    for m in range(d):
        for a in range(d):
            val = A.product(e[a], e[m])
            add_into(val, A.product(e[m], e[a]), -1)
            for k, c in val.items():
                d0.setdefault(a * d + k, {})[m] = c
    d1: Dict[int, SparseVector] = {}
    for t in range(d):
        for m in range(d):
            col = t * d + m
            for a1 in range(d):
                for a2 in range(d):
                    val: Dict[int, Scalar] = {}
                    # a1 f(a2) - f(a1 a2) + f(a1) a2
                    if a2 == t:
                        add_into(val, A.product(e[a1], e[m]))
                    c = dict(A.mult[a1][a2]).get(t)
                    if c:
                        add_into(val, e[m], -c)
                    if a1 == t:
                        add_into(val, A.product(e[m], e[a2]))
                    for k, v in val.items():
                        d1.setdefault((a1 * d + a2) * d + k, {})[col] = v
    return (
        SparseRationalMatrix.from_rows(d * d, d, d0),
        SparseRationalMatrix.from_rows(d ** 3, d * d, d1),
    )


def derivations(A: FiniteDimAlgebra) -> List[SparseVector]:
    """Basis of Der(A) as vectors in Hom(A, A) (coordinate t*d + m)."""
    _, d1 = hochschild_low_matrices(A)
    return kernel_basis(d1)


def inner_derivations(A: FiniteDimAlgebra) -> List[SparseVector]:
    """Basis of the inner derivations: image of δ⁰."""
    d0, _ = hochschild_low_matrices(A)
    return column_space_basis(d0)


def self_module(P: PoissonAlgebra) -> QuasiPoissonModule:
    """The regular bimodule A with {-,-}_* = {-,-}."""
    d = P.dim
    mult = P.algebra.mult
    right = tuple(tuple(mult[m][a] for m in range(d)) for a in range(d))
    return QuasiPoissonModule(d, mult, right, P.bracket.bracket, name="self")


def adjoint_lie_module(P: PoissonAlgebra) -> LieModuleStructure:
    return LieModuleStructure(P.dim, P.bracket.bracket, name="self")


# --------------------------------------------------------------------------
# change of basis and random examples


def change_basis(P: PoissonAlgebra, T: Sequence[Sequence]) -> PoissonAlgebra:
    """Transport P to the basis w_i = sum_k T[k][i] v_k (T invertible)."""
    d = P.dim
    T = [[as_scalar(x) for x in row] for row in T]
    Tm = SparseRationalMatrix.from_dense(T)
    inv_cols = []
    for i in range(d):
        x = solve(Tm, {i: 1})
        if x is None:
            raise StructureError("change-of-basis matrix is singular")
        inv_cols.append(x)
    Tinv = SparseRationalMatrix.from_columns(d, inv_cols)
    w = [{k: T[k][i] for k in range(d) if T[k][i]} for i in range(d)]

    def to_new(vec):
        return clean(Tinv.apply(vec))

    mult, br = {}, {}
    for i in range(d):
        for j in range(d):
            p = to_new(P.product(w[i], w[j]))
            if p:
                mult[(i, j)] = p
            b = to_new(P.lie(w[i], w[j]))
            if b:
                br[(i, j)] = b
    unit_new = to_new(P.algebra.unit_vector)
    A = FiniteDimAlgebra.from_entries(
        d, mult, [unit_new.get(i, 0) for i in range(d)], [f"w{i}" for i in range(d)]
    )
    return PoissonAlgebra(A, LieBracketTable.from_entries(d, br), name=P.name)


def _random_invertible(rng: random.Random, d: int) -> List[List[int]]:
    while True:
        T = [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)]
        if rank(SparseRationalMatrix.from_dense(T)) == d:
            return T


def random_poisson_algebra(rng: random.Random, max_dim: int = 3) -> PoissonAlgebra:
    """A random valid Poisson algebra of dimension <= max_dim.

    Drawn from a family of small algebras with their admissible brackets,
    scaled by a random rational and transported by a random change of basis.
    """
    lam = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))
    lam = as_scalar(lam)
    pool = []
    pool.append(("k", lambda: trivial_poisson(field())))
    if max_dim >= 2:
        pool.append(("k x k", lambda: trivial_poisson(product_algebra(field(), field()))))
        pool.append(("dual numbers", lambda: trivial_poisson(truncated_polynomial(2))))
    if max_dim >= 3:
        pool.append(("a2 standard", lambda: standard_poisson(path_algebra(A2_QUIVER), lam)))
        pool.append(("k^3", lambda: trivial_poisson(product_algebra(field(), field(), field()))))
        pool.append(("k[x]/x^3", lambda: trivial_poisson(truncated_polynomial(3))))
        pool.append(("k x dual", lambda: trivial_poisson(product_algebra(field(), truncated_polynomial(2)))))

        def square_zero_bracket():
            A = square_zero(2)
            alpha, beta = rng.randint(-2, 2), rng.randint(-2, 2)
            vec = {k: c for k, c in ((1, alpha), (2, beta)) if c}
            entries = {}
            if vec:
                entries[(1, 2)] = vec
                entries[(2, 1)] = {k: -c for k, c in vec.items()}
            return PoissonAlgebra(A, LieBracketTable.from_entries(3, entries))

        pool.append(("square-zero", square_zero_bracket))
    label, make = rng.choice(pool)
    P = make()
    T = _random_invertible(rng, P.dim)
    Q = change_basis(P, T)
    return PoissonAlgebra(Q.algebra, Q.bracket, name=f"random {label}")
