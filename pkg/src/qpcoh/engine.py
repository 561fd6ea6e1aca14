"""Cohomology dimensions for HQ, HH and HL, closed forms in low degree, and the
structural identities used as numeric cross-checks."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Union

from .algebra import (
    FiniteDimAlgebra,
    LieModuleStructure,
    PoissonAlgebra,
    QuasiPoissonModule,
    center,
    commutator_subspace,
    poisson_center,
    self_module,
    standard_poisson,
    trivial_poisson,
    validate_module,
)
from .cochains import (
    CochainSpace,
    ce_differential,
    hochschild_differential,
    induced_lie_module_on_hh,
    normalized_hochschild_differential,
    total_differential,
)
from .errors import AxiomError, HypothesisError, ResourceError
from .linalg import SparseRationalMatrix, image_meet_coordinate_subspace, rank

Module = Union[QuasiPoissonModule, LieModuleStructure]


# --------------------------------------------------------------------------
# result types


@dataclass
class DegreeRow:
    """One degree of a cohomology computation.

    ``rank`` is the rank of the outgoing differential (restricted to the
    truncated columns when truncating) and ``image`` is the dimension of the
    incoming image inside the cochain space, so dim = cochain_dim - rank - image.
    """

    n: int
    cochain_dim: int
    rank: int
    image: int
    dim: int

    def to_dict(self) -> dict:
        return {"n": self.n, "cochain_dim": self.cochain_dim, "rank": self.rank, "image": self.image, "dim": self.dim}


@dataclass
class BettiTable:
    kind: str
    algebra: str
    fingerprint: str
    method: str
    rows: List[DegreeRow] = field(default_factory=list)
    complete: bool = True
    notice: str = ""
    timings: Dict[int, float] = field(default_factory=dict)

    @property
    def dims(self) -> tuple:
        return tuple(r.dim for r in self.rows)

    def __getitem__(self, n: int) -> int:
        for r in self.rows:
            if r.n == n:
                return r.dim
        raise KeyError(n)

    def to_dict(self) -> dict:
        # timings are deliberately left out so payloads are reproducible
        return {
            "kind": self.kind,
            "algebra": self.algebra,
            "fingerprint": self.fingerprint,
            "method": self.method,
            "complete": self.complete,
            "notice": self.notice,
            "degrees": [r.to_dict() for r in self.rows],
        }


@dataclass
class CrossCheckReport:
    identity: str
    algebra: str
    rows: List[dict] = field(default_factory=list)
    hypotheses: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(r["left"] == r["right"] for r in self.rows) and all(h["verified"] for h in self.hypotheses)

    def compare(self, n, left: int, right: int, **detail) -> None:
        self.rows.append({"n": n, "left": left, "right": right, "ok": left == right, **detail})

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "algebra": self.algebra,
            "verdict": "pass" if self.verdict else "fail",
            "degrees": list(self.rows),
            "hypotheses": list(self.hypotheses),
            "notes": list(self.notes),
        }


def _label(P) -> str:
    return getattr(P, "name", "") or P.fingerprint[:12]


# --------------------------------------------------------------------------
# rank cache, keyed by structure fingerprints and degree

_RANKS: Dict[tuple, int] = {}
_RANKS_LOCK = threading.Lock()


def clear_cache() -> None:
    with _RANKS_LOCK:
        _RANKS.clear()


def _cached_rank(key: tuple, build: Callable[[], SparseRationalMatrix], cap: Optional[int]) -> int:
    with _RANKS_LOCK:
        hit = _RANKS.get(key)
    if hit is not None:
        return hit
    r = rank(build(), cap)
    with _RANKS_LOCK:
        _RANKS[key] = r
    return r


def _betti(
    kind: str,
    name: str,
    fingerprint: str,
    key: tuple,
    dims: Callable[[int], int],
    build: Callable[[int], SparseRationalMatrix],
    max_degree: int,
    cap: Optional[int],
) -> BettiTable:
    """dim H^n = dim C^n - rank d^n - rank d^{n-1} for n = 0..max_degree."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    table = BettiTable(kind, name, fingerprint, "full")
    prev = 0
    for n in range(max_degree + 1):
        t0 = time.perf_counter()
        try:
            r = _cached_rank(key + (n,), lambda n=n: build(n), cap)
        except ResourceError as err:
            table.complete = False
            table.notice = f"stopped before degree {n}: {err}"
            break
        c = dims(n)
        table.rows.append(DegreeRow(n, c, r, prev, c - r - prev))
        table.timings[n] = time.perf_counter() - t0
        prev = r
    return table


# --------------------------------------------------------------------------
# full computations


def betti_hq(
    P: PoissonAlgebra,
    M: Optional[QuasiPoissonModule] = None,
    max_degree: int = 4,
    truncate_k: Optional[int] = None,
    cap: Optional[int] = None,
    probe_bound: Optional[int] = None,
    verify: bool = True,
) -> BettiTable:
    """dim HQ^n(A, M) for n <= max_degree from the total complex.

    With ``truncate_k`` the truncated computation is used instead (self
    coefficients only); see :func:`truncated_betti`.
    """
    if truncate_k is not None:
        if M is not None:
            raise ValueError("truncation is only available for M = A")
        return truncated_betti(P, truncate_k, max_degree, cap=cap, probe_bound=probe_bound, verify=verify)
    if M is None:
        M = self_module(P)
    else:
        report = validate_module(P, M)
        if not report.ok:
            raise AxiomError(report)
    d = P.dim
    return _betti(
        "HQ",
        _label(P),
        P.fingerprint,
        ("HQ", P.fingerprint, M.fingerprint, None),
        lambda n: CochainSpace(d, n, M.dim).dim,
        lambda n: total_differential(P, M, n, cap),
        max_degree,
        cap,
    )


def _as_algebra(A) -> FiniteDimAlgebra:
    return A.algebra if isinstance(A, PoissonAlgebra) else A


def betti_hh(
    A,
    M: Optional[QuasiPoissonModule] = None,
    max_degree: int = 4,
    normalized: bool = False,
    cap: Optional[int] = None,
) -> BettiTable:
    """dim HH^n(A, M); ``normalized`` uses cochains vanishing on 1_A (M = A only)."""
    B = _as_algebra(A)
    T = trivial_poisson(B, getattr(A, "name", ""))
    d = B.dim
    if normalized:
        if M is not None:
            raise ValueError("the normalized complex is only available for M = A")
        table = _betti(
            "HH",
            _label(T),
            T.fingerprint,
            ("HH-normalized", T.fingerprint),
            lambda n: (d - 1) ** n * d,
            lambda n: normalized_hochschild_differential(B, n, cap),
            max_degree,
            cap,
        )
        table.method = "full-normalized"
        return table
    if M is None:
        M = self_module(T)
    return _betti(
        "HH",
        _label(T),
        T.fingerprint,
        ("HH", T.fingerprint, M.fingerprint),
        lambda n: d ** n * M.dim,
        lambda n: hochschild_differential(B, M, n, cap),
        max_degree,
        cap,
    )


def betti_hl(P: PoissonAlgebra, L: Optional[Module] = None, max_degree: int = 4, cap: Optional[int] = None) -> BettiTable:
    """dim HL^n(A, L) of the Lie algebra (A, {-,-}); L defaults to the trivial module K."""
    if L is None:
        L = LieModuleStructure.trivial(P.dim)
    d = P.dim
    return _betti(
        "HL",
        _label(P),
        P.fingerprint,
        ("HL", P.fingerprint, L.fingerprint),
        lambda n: comb(d, n) * L.dim,
        lambda n: ce_differential(P, L, n, cap),
        max_degree,
        cap,
    )


# --------------------------------------------------------------------------
# closed forms in degrees 0 and 1


def hq0_direct(P: PoissonAlgebra) -> int:
    """dim of Z(A) ∩ Z{A}."""
    return len(poisson_center(P))


def derivation_pairs_dim(P: PoissonAlgebra) -> int:
    """dim D(A): pairs (f1, f0) of linear maps A -> A with

    f1(ab) = f1(a) b + a f1(b),
    f0({x, y}) = {x, f0(y)} - {y, f0(x)},
    f1({x, a}) - {x, f1(a)} = f0(x) a - a f0(x).

    Unknowns: f1 has coordinate t*d + m (coefficient of v_m in f1(v_t)), f0 is
    shifted by d*d.  Built directly from the tables, independent of the
    cochain assembler.
    """
    d = P.dim
    mult, br = P.algebra.mult, P.bracket.bracket
    off = d * d
    rows: Dict[int, Dict[int, object]] = {}
    nrow = 0

    def f1(t, m):
        return t * d + m

    def f0(t, m):
        return off + t * d + m

    def put(base, k, col, c):
        row = rows.setdefault(base + k, {})
        nv = row.get(col, 0) + c
        if nv:
            row[col] = nv
        else:
            row.pop(col, None)

    for a in range(d):
        for b in range(d):
            # f1(ab) - f1(a) b - a f1(b), component k
            base = nrow
            for t, c in mult[a][b]:
                for m in range(d):
                    put(base, m, f1(t, m), c)
            for m in range(d):
                for k, c in mult[m][b]:
                    put(base, k, f1(a, m), -c)
                for k, c in mult[a][m]:
                    put(base, k, f1(b, m), -c)
            nrow += d
            # f0({a,b}) - {a, f0(b)} + {b, f0(a)}
            base = nrow
            for t, c in br[a][b]:
                for m in range(d):
                    put(base, m, f0(t, m), c)
            for m in range(d):
                for k, c in br[a][m]:
                    put(base, k, f0(b, m), -c)
                for k, c in br[b][m]:
                    put(base, k, f0(a, m), c)
            nrow += d
            # f1({a,b}) - {a, f1(b)} - f0(a) b + b f0(a)   (x = a, element = b)
            base = nrow
            for t, c in br[a][b]:
                for m in range(d):
                    put(base, m, f1(t, m), c)
            for m in range(d):
                for k, c in br[a][m]:
                    put(base, k, f1(b, m), -c)
                for k, c in mult[m][b]:
                    put(base, k, f0(a, m), -c)
                for k, c in mult[b][m]:
                    put(base, k, f0(a, m), c)
            nrow += d
    M = SparseRationalMatrix.from_rows(nrow, 2 * d * d, {r: v for r, v in rows.items() if v})
    return 2 * d * d - rank(M)


def hq1_direct(P: PoissonAlgebra) -> int:
    """dim HQ^1 = dim D(A) - dim A + dim HQ^0."""
    return derivation_pairs_dim(P) - P.dim + hq0_direct(P)


# --------------------------------------------------------------------------
# truncation


def _hh_vanishing(A, low: int, high: int, cap: Optional[int]) -> dict:
    """Record whether HH^p(A) = 0 for low <= p <= high (normalized complex)."""
    record = {"statement": f"HH^p(A) = 0 for {low} <= p <= {high}", "values": {}, "verified": True}
    if high < low:
        return record
    hh = betti_hh(A, max_degree=high, normalized=True, cap=cap)
    if not hh.complete:
        record["verified"] = False
        record["notice"] = hh.notice
    for row in hh.rows:
        if row.n >= low:
            record["values"][row.n] = row.dim
            if row.dim:
                record["verified"] = False
    return record


def truncated_betti(
    P: PoissonAlgebra,
    k: int,
    max_degree: int = 4,
    cap: Optional[int] = None,
    probe_bound: Optional[int] = None,
    verify: bool = True,
) -> BettiTable:
    """dim(Ker σ^n ∩ Ω_n^k) - dim(Im σ^{n-1} ∩ Ω_n^k), Ω_n^k = blocks with i <= k.

    This equals HQ^n(A) when HH^p(A) = 0 for all p > k.  With ``verify`` the
    vanishing is checked up to ``probe_bound`` (default max_degree + 1) and a
    failure raises HypothesisError.
    """
    if k < 0:
        raise ValueError("truncation level must be >= 0")
    probe = max_degree + 1 if probe_bound is None else probe_bound
    hyp = None
    if verify:
        hyp = _hh_vanishing(P, k + 1, probe, cap)
        if not hyp["verified"]:
            rep = CrossCheckReport(f"truncation k={k}", _label(P), hypotheses=[hyp])
            raise HypothesisError(f"truncation hypothesis failed: {hyp['values']}", rep)
    M = self_module(P)
    d = P.dim
    table = BettiTable("HQ", _label(P), P.fingerprint, f"truncated-{k}")
    if hyp is not None:
        table.notice = hyp["statement"] + " verified"
    else:
        table.notice = "truncation hypothesis assumed, not verified"
    for n in range(max_degree + 1):
        t0 = time.perf_counter()
        try:
            full = CochainSpace(d, n, d)
            omega = CochainSpace(d, n, d, max_i=k)
            # Ω blocks have the smallest i and sit at the end of the layout
            start = full.dim - omega.dim
            r = _cached_rank(("HQ", P.fingerprint, "self", k, n), lambda n=n: total_differential(P, M, n, cap, max_i=k), cap)
            if n == 0 or omega.dim == 0:
                meet = 0
            else:
                key = ("HQ-meet", P.fingerprint, k, n)
                with _RANKS_LOCK:
                    meet = _RANKS.get(key)
                if meet is None:
                    prev = total_differential(P, M, n - 1, cap)
                    meet = image_meet_coordinate_subspace(prev, range(start, full.dim), cap)
                    with _RANKS_LOCK:
                        _RANKS[key] = meet
        except ResourceError as err:
            table.complete = False
            table.notice += f"; stopped before degree {n}: {err}"
            break
        table.rows.append(DegreeRow(n, omega.dim, r, meet, omega.dim - r - meet))
        table.timings[n] = time.perf_counter() - t0
    return table


# --------------------------------------------------------------------------
# structural cross-checks


def _is_standard(P: PoissonAlgebra) -> bool:
    return P.bracket.bracket == standard_poisson(P.algebra, 1).bracket.bracket


def standard_hq1_check(P: PoissonAlgebra, cap: Optional[int] = None) -> CrossCheckReport:
    """dim HQ^1 = dim HH^1 + (dim A - dim [A,A]) * dim Z(A) for the standard bracket."""
    rep = CrossCheckReport("HQ^1 = HH^1 + Hom(A/[A,A], Z(A))", _label(P))
    if not _is_standard(P):
        rep.hypotheses.append({"statement": "bracket is the commutator", "verified": False})
        raise HypothesisError("standard_hq1_check needs the commutator bracket", rep)
    rep.hypotheses.append({"statement": "bracket is the commutator", "verified": True})
    hq1 = betti_hq(P, max_degree=1, cap=cap)[1]
    hh1 = betti_hh(P, max_degree=1, cap=cap)[1]
    quot = P.dim - len(commutator_subspace(P.algebra))
    z = len(center(P.algebra))
    rep.compare(1, hq1, hh1 + quot * z, hh1=hh1, abelianization=quot, center=z)
    return rep


def kunneth_check(P: PoissonAlgebra, max_degree: int = 4, cap: Optional[int] = None) -> CrossCheckReport:
    """Trivial bracket: dim HQ^n = Σ_{i+j=n} dim HH^i · C(dim A, j)."""
    rep = CrossCheckReport("HQ = HH ⊗ ∧A", _label(P))
    trivial = P.bracket.is_trivial()
    rep.hypotheses.append({"statement": "bracket is zero", "verified": trivial})
    if not trivial:
        raise HypothesisError("kunneth_check needs a trivial bracket", rep)
    hq = betti_hq(P, max_degree=max_degree, cap=cap)
    hh = betti_hh(P, max_degree=max_degree, cap=cap)
    d = P.dim
    for row in hq.rows:
        n = row.n
        right = sum(hh[i] * comb(d, n - i) for i in range(n + 1) if i <= max_degree)
        rep.compare(n, row.dim, right)
    if not (hq.complete and hh.complete):
        rep.notes.append("incomplete: " + "; ".join(t.notice for t in (hq, hh) if t.notice))
        rep.hypotheses.append({"statement": "all degrees computed", "verified": False})
    return rep


def _left_hq(P, max_degree, cap, truncate_k):
    if truncate_k is None:
        return betti_hq(P, max_degree=max_degree, cap=cap)
    return truncated_betti(P, truncate_k, max_degree, cap=cap, verify=False)


def ses_check(
    P: PoissonAlgebra,
    max_degree: int = 4,
    probe_bound: Optional[int] = None,
    cap: Optional[int] = None,
    truncate_k: Optional[int] = None,
) -> CrossCheckReport:
    """dim HQ^n = dim HL^{n-1}(A, Der°(A)) + dim HL^n(A, Z(A)) when HH^p(A) = 0 for p >= 2.

    Der°(A) = HH^1(A) and Z(A) = HH^0(A) carry the Lie action induced by
    the bracket.
    """
    probe = max_degree + 1 if probe_bound is None else probe_bound
    rep = CrossCheckReport("0 -> HL^{n-1}(Der°) -> HQ^n -> HL^n(Z) -> 0", _label(P))
    hyp = _hh_vanishing(P, 2, probe, cap)
    rep.hypotheses.append(hyp)
    if not hyp["verified"]:
        raise HypothesisError(f"HH^p(A) does not vanish: {hyp['values']}", rep)
    der = induced_lie_module_on_hh(P, 1).module
    zed = induced_lie_module_on_hh(P, 0).module
    rep.notes.append(f"dim Der° = {der.dim} (trivial action: {der.is_trivial()}); dim Z = {zed.dim}")
    if truncate_k is not None:
        rep.notes.append(f"HQ computed with truncation k={truncate_k}")
    hq = _left_hq(P, max_degree, cap, truncate_k)
    hl_der = betti_hl(P, der, max_degree, cap) if der.dim else None
    hl_z = betti_hl(P, zed, max_degree, cap)
    for row in hq.rows:
        n = row.n
        a = hl_der[n - 1] if (hl_der is not None and n >= 1) else 0
        b = hl_z[n]
        rep.compare(n, row.dim, a + b, hl_der=a, hl_center=b)
    return rep


def tensor_check(
    P: PoissonAlgebra,
    max_degree: int = 4,
    probe_bound: Optional[int] = None,
    cap: Optional[int] = None,
    truncate_k: Optional[int] = None,
) -> CrossCheckReport:
    """dim HQ^n = dim Z(A) · dim HL^n(A, K) when HH^i(A) = 0 for i >= 1."""
    probe = max_degree + 1 if probe_bound is None else probe_bound
    rep = CrossCheckReport("HQ = Z(A) ⊗ HL(A, K)", _label(P))
    hyp = _hh_vanishing(P, 1, probe, cap)
    rep.hypotheses.append(hyp)
    if not hyp["verified"]:
        raise HypothesisError(f"HH^i(A) does not vanish: {hyp['values']}", rep)
    if truncate_k is not None:
        rep.notes.append(f"HQ computed with truncation k={truncate_k}")
    hq = _left_hq(P, max_degree, cap, truncate_k)
    hl = betti_hl(P, None, max_degree, cap)
    z = len(center(P.algebra))
    for row in hq.rows:
        rep.compare(row.n, row.dim, z * hl[row.n], center=z, hl=hl[row.n])
    return rep


def finiteness_probe(
    P: PoissonAlgebra,
    degrees: Sequence[int],
    k: int,
    cap: Optional[int] = None,
    probe_bound: Optional[int] = None,
) -> CrossCheckReport:
    """HQ^n = 0 at the probed degrees, computed by truncation at level k.

    For path algebras of acyclic quivers HH vanishes above k, so the
    truncated complex computes HQ exactly.
    """
    rep = CrossCheckReport("HQ^n = 0 beyond the top degree", _label(P))
    top = max(degrees)
    table = truncated_betti(P, k, top, cap=cap, probe_bound=probe_bound)
    if not table.complete:
        raise ResourceError(table.notice, None, cap)
    rep.hypotheses.append({"statement": table.notice, "verified": True})
    for n in degrees:
        rep.compare(n, table[n], 0)
    return rep
