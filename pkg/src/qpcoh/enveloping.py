"""U(A) in PBW normal form, the smash product Q(A) = A ⊗ A^op # U(A), and the
free resolution of A over Q(A).

Elements are plain dicts:

* U(A): ``{word: coef}`` with ``word`` a tuple of basis indices that is
  non-decreasing in the PBW order of the Poisson algebra; ``()`` is 1̲.
* Q(A): ``{(a, b, word): coef}`` for the basis element v_a ⊗ v_b' # word.
* Q_n: :class:`ResolutionElement`, keyed by ``(a_tuple, word, wedge)`` where
  ``a_tuple`` has i + 2 entries and ``wedge`` is a strictly increasing j-subset.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .algebra import PoissonAlgebra, QuasiPoissonModule, add_into, bilinear, self_module
from .errors import ResourceError, StructureError
from .linalg import Scalar, SparseVector

Word = Tuple[int, ...]
UElement = Dict[Word, Scalar]
SmashKey = Tuple[int, int, Word]
SmashElement = Dict[SmashKey, Scalar]
ResKey = Tuple[Tuple[int, ...], Word, Tuple[int, ...]]

DEFAULT_MAX_U_DEGREE = 6


def _acc(target: dict, key, value) -> None:
    nv = target.get(key, 0) + value
    if nv:
        target[key] = nv
    else:
        target.pop(key, None)


def ordered_partitions(word: Word, parts: int) -> Iterator[Tuple[Word, ...]]:
    """All ordered ``parts``-partitions of the positions of ``word``.

    Each position gets a label in range(parts); every part keeps the original
    left-to-right order.  Yields parts**len(word) tuples (duplicates included).
    """
    r = len(word)
    for labels in itertools.product(range(parts), repeat=r):
        out = [[] for _ in range(parts)]
        for letter, lab in zip(word, labels):
            out[lab].append(letter)
        yield tuple(tuple(p) for p in out)


class Envelope:
    """Arithmetic in U(A) for a fixed Poisson algebra, with a normal-form memo."""

    def __init__(self, P: PoissonAlgebra, max_degree: int = DEFAULT_MAX_U_DEGREE):
        self.P = P
        self.max_degree = max_degree
        self._pos = P.position
        self._memo: Dict[Word, UElement] = {}

    # -- U(A) ---------------------------------------------------------------

    def _check(self, word: Word) -> None:
        if len(word) > self.max_degree:
            raise ResourceError(f"U-degree {len(word)} exceeds the cap {self.max_degree}")

    def is_normal(self, word: Word) -> bool:
        pos = self._pos
        return all(pos[word[k]] <= pos[word[k + 1]] for k in range(len(word) - 1))

    def sort_word(self, word: Sequence[int]) -> Word:
        return tuple(sorted(word, key=self._pos.__getitem__))

    def normal_form(self, word: Word) -> UElement:
        """PBW normal form of an arbitrary word.

        The leftmost adjacent pair (v_b, v_a) with b > a in the PBW order is
        rewritten as v_a v_b + {v_b, v_a}; recursion terminates because the
        bracket term is shorter and the swap removes an inversion.
        """
        self._check(word)
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        pos = self._pos
        k = next((k for k in range(len(word) - 1) if pos[word[k]] > pos[word[k + 1]]), None)
        if k is None:
            out = {word: 1}
        else:
            b, a = word[k], word[k + 1]
            out = dict(self.normal_form(word[:k] + (a, b) + word[k + 2:]))
            for c, coef in self.P.bracket.bracket[b][a]:
                for w, v in self.normal_form(word[:k] + (c,) + word[k + 2:]).items():
                    _acc(out, w, coef * v)
        self._memo[word] = out
        return out

    def multiply(self, x: Mapping[Word, Scalar], y: Mapping[Word, Scalar]) -> UElement:
        out: UElement = {}
        for wx, cx in x.items():
            for wy, cy in y.items():
                for w, v in self.normal_form(wx + wy).items():
                    _acc(out, w, cx * cy * v)
        return out

    def coproduct(self, x: Mapping[Word, Scalar]) -> Dict[Tuple[Word, Word], Scalar]:
        """Shuffle coproduct over ordered bipartitions of word positions."""
        out: Dict[Tuple[Word, Word], Scalar] = {}
        for w, c in x.items():
            self._check(w)
            for left, right in ordered_partitions(w, 2):
                _acc(out, (left, right), c)
        return out

    @staticmethod
    def counit(x: Mapping[Word, Scalar]) -> Scalar:
        return x.get((), 0)

    def act_on_A(self, x: Mapping[Word, Scalar], a: Mapping[int, Scalar]) -> SparseVector:
        """α(a) = {v_i1, {v_i2, ... {v_ir, a}}}, extended linearly in both arguments."""
        out: SparseVector = {}
        br = self.P.bracket.bracket
        for w, c in x.items():
            val = dict(a)
            for letter in reversed(w):
                val = bilinear(br, {letter: 1}, val)
                if not val:
                    break
            add_into(out, val, c)
        return out

    def act_on_module(self, x: Mapping[Word, Scalar], M: QuasiPoissonModule, m: Mapping[int, Scalar]) -> SparseVector:
        out: SparseVector = {}
        for w, c in x.items():
            val = dict(m)
            for letter in reversed(w):
                val = bilinear(M.lie, {letter: 1}, val)
                if not val:
                    break
            add_into(out, val, c)
        return out

    # -- Q(A) ---------------------------------------------------------------

    def smash_unit(self) -> SmashElement:
        u = self.P.algebra.unit_vector
        return {(p, q, ()): cp * cq for p, cp in u.items() for q, cq in u.items()}

    def smash_multiply(self, x: Mapping[SmashKey, Scalar], y: Mapping[SmashKey, Scalar]) -> SmashElement:
        """(a⊗b'#α)(c⊗d'#β) = Σ a·α1(c) ⊗ (α2(d)·b)' # α3β over ordered tripartitions of α."""
        A = self.P.algebra
        out: SmashElement = {}
        for (p1, q1, alpha), c1 in x.items():
            for (p2, q2, beta), c2 in y.items():
                for a1, a2, a3 in ordered_partitions(alpha, 3):
                    left = A.product({p1: 1}, self.act_on_A({a1: 1}, {p2: 1}))
                    if not left:
                        continue
                    right = A.product(self.act_on_A({a2: 1}, {q2: 1}), {q1: 1})
                    if not right:
                        continue
                    u = self.normal_form(a3 + beta)
                    coef = c1 * c2
                    for p, cp in left.items():
                        for q, cq in right.items():
                            for w, cw in u.items():
                                _acc(out, (p, q, w), coef * cp * cq * cw)
        return out

    def smash_act(self, g: Mapping[SmashKey, Scalar], M: QuasiPoissonModule, m: Mapping[int, Scalar]) -> SparseVector:
        """(a⊗b'#α)·m = a α(m) b on a quasi-Poisson module."""
        out: SparseVector = {}
        for (p, q, w), c in g.items():
            val = self.act_on_module({w: 1}, M, m)
            val = M.act_left({p: 1}, val)
            val = M.act_right(val, {q: 1})
            add_into(out, val, c)
        return out

    def smash_left(self, a: Mapping[int, Scalar]) -> SmashElement:
        """a ⊗ 1' # 1̲."""
        u = self.P.algebra.unit_vector
        return {(p, q, ()): cp * cq for p, cp in a.items() for q, cq in u.items()}

    def smash_right(self, a: Mapping[int, Scalar]) -> SmashElement:
        """1 ⊗ a' # 1̲."""
        u = self.P.algebra.unit_vector
        return {(p, q, ()): cp * cq for p, cp in u.items() for q, cq in a.items()}

    def smash_lie(self, a: Mapping[int, Scalar]) -> SmashElement:
        """1 ⊗ 1' # a (a read as a degree-one element of U(A))."""
        u = self.P.algebra.unit_vector
        out: SmashElement = {}
        for p, cp in u.items():
            for q, cq in u.items():
                for k, ck in a.items():
                    _acc(out, (p, q, (k,)), cp * cq * ck)
        return out


# --------------------------------------------------------------------------
# the resolution Q_n = ⊕_{i+j=n} A^{i+2} ⊗ U(A) ⊗ ∧^j


@dataclass
class ResolutionElement:
    n: int
    terms: Dict[ResKey, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        for (atuple, _, wedge) in self.terms:
            if len(atuple) < 2:
                raise StructureError("resolution terms need at least two tensor factors")
            if len(atuple) - 2 + len(wedge) != self.n:
                raise StructureError(
                    f"term of degree ({len(atuple) - 2}, {len(wedge)}) in an element of degree {self.n}"
                )
            if any(wedge[k] >= wedge[k + 1] for k in range(len(wedge) - 1)):
                raise StructureError("wedge indices must be strictly increasing")

    def components(self) -> Dict[Tuple[int, int], Dict[ResKey, Scalar]]:
        out: Dict[Tuple[int, int], Dict[ResKey, Scalar]] = {}
        for key, c in self.terms.items():
            out.setdefault((len(key[0]) - 2, len(key[2])), {})[key] = c
        return out

    def is_zero(self) -> bool:
        return not self.terms


def _insert_wedge(rest: Tuple[int, ...], b: int) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """b ∧ rest rewritten in increasing order: (sign, subset) or None if b is in rest."""
    if b in rest:
        return None
    pos = sum(1 for y in rest if y < b)
    return (-1 if pos % 2 else 1), rest[:pos] + (b,) + rest[pos:]


def _tensor_expand(vectors: Sequence[Mapping[int, Scalar]]) -> Iterator[Tuple[Tuple[int, ...], Scalar]]:
    for combo in itertools.product(*(list(v.items()) for v in vectors)):
        coef = 1
        for _, c in combo:
            coef *= c
        yield tuple(k for k, _ in combo), coef


class Resolution:
    """Differentials φ_n and the free Q(A)-action on the resolution of A."""

    def __init__(self, env: Envelope):
        self.env = env
        self.P = env.P

    def differential(self, n: int, x: ResolutionElement) -> ResolutionElement:
        """φ_n = ⊕ (δ_i ⊗ id + (-1)^i id ⊗ d_j): Q_n -> Q_{n-1} for n >= 1."""
        if n < 1:
            raise ValueError("use augmentation() for φ_0")
        if x.n != n:
            raise StructureError(f"element of degree {x.n} passed to φ_{n}")
        mult = self.P.algebra.mult
        br = self.P.bracket.bracket
        out: Dict[ResKey, Scalar] = {}
        for (a, gamma, wedge), c in x.terms.items():
            i, j = len(a) - 2, len(wedge)
            if i >= 1:
                for k in range(i + 1):
                    sgn = -c if k % 2 else c
                    for b, cb in mult[a[k]][a[k + 1]]:
                        _acc(out, (a[:k] + (b,) + a[k + 2:], gamma, wedge), sgn * cb)
            if j >= 1:
                s_i = -c if i % 2 else c
                for l in range(j):
                    s_l = s_i if l % 2 == 0 else -s_i
                    rest = wedge[:l] + wedge[l + 1:]
                    for w, cw in self.env.normal_form(gamma + (wedge[l],)).items():
                        _acc(out, (a, w, rest), s_l * cw)
                for p, q in itertools.combinations(range(j), 2):
                    s_pq = s_i if (p + q) % 2 == 0 else -s_i
                    rest = wedge[:p] + wedge[p + 1:q] + wedge[q + 1:]
                    for b, cb in br[wedge[p]][wedge[q]]:
                        ins = _insert_wedge(rest, b)
                        if ins is None:
                            continue
                        sg, new = ins
                        _acc(out, (a, gamma, new), s_pq * sg * cb)
        return ResolutionElement(n - 1, out)

    def augmentation(self, x: ResolutionElement) -> SparseVector:
        """φ_0(a0 ⊗ a1 ⊗ α) = ε(α) a0 a1."""
        if x.n != 0:
            raise StructureError("φ_0 is defined on Q_0 only")
        out: SparseVector = {}
        for (a, gamma, _), c in x.terms.items():
            if gamma == ():
                add_into(out, dict(self.P.algebra.mult[a[0]][a[1]]), c)
        return out

    def act(self, g: Mapping[SmashKey, Scalar], x: ResolutionElement) -> ResolutionElement:
        """Free Q(A)-action on Q_n: α is split over the tensor factors and U(A)."""
        A = self.P.algebra
        env = self.env
        out: Dict[ResKey, Scalar] = {}
        for (p, q, alpha), cg in g.items():
            for (a, gamma, wedge), cx in x.terms.items():
                N = len(a)
                for parts in ordered_partitions(alpha, N + 1):
                    factors = [env.act_on_A({parts[k]: 1}, {a[k]: 1}) for k in range(N)]
                    factors[0] = A.product({p: 1}, factors[0])
                    factors[-1] = A.product(factors[-1], {q: 1})
                    if not all(factors):
                        continue
                    u = env.normal_form(parts[N] + gamma)
                    for atuple, ca in _tensor_expand(factors):
                        for w, cw in u.items():
                            _acc(out, (atuple, w, wedge), cg * cx * ca * cw)
        return ResolutionElement(x.n, out)

    def act_on_A(self, g: Mapping[SmashKey, Scalar], a: Mapping[int, Scalar]) -> SparseVector:
        A = self.P.algebra
        out: SparseVector = {}
        for (p, q, alpha), c in g.items():
            val = A.product(A.product({p: 1}, self.env.act_on_A({alpha: 1}, a)), {q: 1})
            add_into(out, val, c)
        return out

    def basis(self, n: int, max_u_degree: int) -> Iterator[ResolutionElement]:
        """Basis elements of Q_n whose U(A) part has degree <= max_u_degree."""
        d = self.P.dim
        words = pbw_words(self.P, max_u_degree)
        for j in range(0, min(n, d) + 1):
            i = n - j
            for wedge in itertools.combinations(range(d), j):
                for a in itertools.product(range(d), repeat=i + 2):
                    for w in words:
                        yield ResolutionElement(n, {(a, w, wedge): 1})


def pbw_words(P: PoissonAlgebra, max_degree: int) -> List[Word]:
    """All PBW basis words of degree <= max_degree."""
    order = P.order
    out: List[Word] = []
    for r in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(order, r):
            out.append(tuple(combo))
    return out


# --------------------------------------------------------------------------
# module-level convenience wrappers

_ENVELOPES: Dict[Tuple[str, int], Envelope] = {}


def envelope(P: PoissonAlgebra, max_degree: int = DEFAULT_MAX_U_DEGREE) -> Envelope:
    key = (P.fingerprint, max_degree)
    env = _ENVELOPES.get(key)
    if env is None:
        env = _ENVELOPES[key] = Envelope(P, max_degree)
    return env


def u_multiply(P: PoissonAlgebra, x: UElement, y: UElement) -> UElement:
    return envelope(P).multiply(x, y)


def shuffle_coproduct(P: PoissonAlgebra, x: UElement) -> Dict[Tuple[Word, Word], Scalar]:
    return envelope(P).coproduct(x)


def counit(x: UElement) -> Scalar:
    return Envelope.counit(x)


def u_action_on_A(P: PoissonAlgebra, x: UElement, a: SparseVector) -> SparseVector:
    return envelope(P).act_on_A(x, a)


def smash_multiply(P: PoissonAlgebra, x: SmashElement, y: SmashElement) -> SmashElement:
    return envelope(P).smash_multiply(x, y)


def resolution_differential(P: PoissonAlgebra, n: int, x: ResolutionElement) -> ResolutionElement:
    return Resolution(envelope(P)).differential(n, x)


def q_free_action(P: PoissonAlgebra, g: SmashElement, x: ResolutionElement) -> ResolutionElement:
    return Resolution(envelope(P)).act(g, x)


# --------------------------------------------------------------------------
# random samples


def random_word(rng: random.Random, env: Envelope, max_degree: int) -> Word:
    r = rng.randint(0, max_degree)
    return env.sort_word(rng.randrange(env.P.dim) for _ in range(r))


def random_u_element(rng: random.Random, env: Envelope, max_degree: int, terms: int = 3) -> UElement:
    out: UElement = {}
    for _ in range(rng.randint(1, terms)):
        _acc(out, random_word(rng, env, max_degree), rng.choice([-2, -1, 1, 2, 3]))
    return out


def random_smash_element(rng: random.Random, env: Envelope, max_degree: int, terms: int = 3) -> SmashElement:
    d = env.P.dim
    out: SmashElement = {}
    for _ in range(rng.randint(1, terms)):
        key = (rng.randrange(d), rng.randrange(d), random_word(rng, env, max_degree))
        _acc(out, key, rng.choice([-2, -1, 1, 2, 3]))
    return out


def random_vector(rng: random.Random, dim: int, terms: int = 3) -> SparseVector:
    out: SparseVector = {}
    for _ in range(rng.randint(1, terms)):
        _acc(out, rng.randrange(dim), rng.choice([-2, -1, 1, 2, 3]))
    return out


# --------------------------------------------------------------------------
# property checks


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    violations: List[str] = field(default_factory=list)
    seed: Optional[int] = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, ok: bool, witness) -> None:
        self.checked += 1
        if not ok and len(self.violations) < 5:
            self.violations.append(repr(witness))
        elif not ok:
            self.violations.append("...")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "violations": list(self.violations),
            "seed": self.seed,
            "detail": self.detail,
            "verdict": "pass" if self.ok else "fail",
        }


def _tensor_mul(env: Envelope, x: Mapping, y: Mapping) -> dict:
    out: dict = {}
    for (l1, r1), c1 in x.items():
        for (l2, r2), c2 in y.items():
            for wl, cl in env.normal_form(l1 + l2).items():
                for wr, cr in env.normal_form(r1 + r2).items():
                    _acc(out, (wl, wr), c1 * c2 * cl * cr)
    return out


def qp_action_roundtrip(
    P: PoissonAlgebra,
    M: QuasiPoissonModule,
    samples: int = 100,
    seed: int = 0,
    max_u_degree: int = 2,
) -> PropertyResult:
    """Q(A)-action built from (left, right, lie): read the three actions back on
    every basis pair, then test multiplicativity on sampled pairs."""
    env = envelope(P, max(DEFAULT_MAX_U_DEGREE, 2 * max_u_degree))
    res = PropertyResult(f"Q(A)-module round trip ({M.name or 'module'})", seed=seed)
    rng = random.Random(seed)
    for a in range(P.dim):
        for m in range(M.dim):
            e, v = {a: 1}, {m: 1}
            res.record(env.smash_act(env.smash_left(e), M, v) == M.act_left(e, v), ("left", a, m))
            res.record(env.smash_act(env.smash_right(e), M, v) == M.act_right(v, e), ("right", a, m))
            res.record(env.smash_act(env.smash_lie(e), M, v) == M.act_lie(e, v), ("lie", a, m))
    if M.dim == 0:
        return res
    for _ in range(samples):
        g = random_smash_element(rng, env, max_u_degree)
        h = random_smash_element(rng, env, max_u_degree)
        m = random_vector(rng, M.dim)
        lhs = env.smash_act(env.smash_multiply(g, h), M, m)
        rhs = env.smash_act(g, M, env.smash_act(h, M, m))
        res.record(lhs == rhs, ("multiplicativity", g, h, m))
    return res


def _generators(env: Envelope) -> List[SmashElement]:
    d = env.P.dim
    gens = []
    for k in range(d):
        gens += [env.smash_left({k: 1}), env.smash_right({k: 1}), env.smash_lie({k: 1})]
    return gens


def resolution_checks(
    P: PoissonAlgebra,
    max_n: int = 2,
    max_u_degree: int = 2,
    samples: int = 50,
    seed: int = 0,
    exhaustive_limit: int = 20000,
) -> List[PropertyResult]:
    """φ_n∘φ_{n+1} = 0 for n <= max_n and φ_n commuting with the generators."""
    env = envelope(P, max(DEFAULT_MAX_U_DEGREE, max_u_degree + 2))
    R = Resolution(env)
    rng = random.Random(seed)
    square = PropertyResult(f"φ_n∘φ_(n+1) = 0, n <= {max_n}", seed=seed)
    for n in range(max_n + 1):
        elems = list(R.basis(n + 1, max_u_degree))
        if len(elems) > exhaustive_limit:
            elems = rng.sample(elems, samples)
            square.detail += f"degree {n + 1} sampled; "
        for x in elems:
            y = R.differential(n + 1, x)
            z = R.augmentation(y) if n == 0 else R.differential(n, y).terms
            square.record(not z, x.terms)
    hom = PropertyResult("φ_n is a Q(A)-homomorphism on generators", seed=seed)
    gens = _generators(env)
    for _ in range(samples):
        n = rng.randint(0, max_n + 1)
        x = ResolutionElement(n, {})
        for _ in range(2):
            i = rng.randint(0, n)
            key = (
                tuple(rng.randrange(P.dim) for _ in range(i + 2)),
                random_word(rng, env, 1),
                tuple(sorted(rng.sample(range(P.dim), n - i))) if n - i <= P.dim else None,
            )
            if key[2] is None:
                continue
            _acc(x.terms, key, rng.choice([-1, 1, 2]))
        for g in gens:
            gx = R.act(g, x)
            if n == 0:
                ok = R.augmentation(gx) == R.act_on_A(g, R.augmentation(x))
            else:
                ok = R.differential(n, gx).terms == R.act(g, R.differential(n, x)).terms
            hom.record(ok, (n, g, x.terms))
    mult = PropertyResult("free Q(A)-action is multiplicative", seed=seed)
    for _ in range(samples):
        n = rng.randint(0, max_n)
        x = rng.choice(list(R.basis(n, 1))) if n <= 1 else next(R.basis(n, 0))
        g = random_smash_element(rng, env, 1)
        h = random_smash_element(rng, env, 1)
        mult.record(R.act(env.smash_multiply(g, h), x).terms == R.act(g, R.act(h, x)).terms, (g, h, x.terms))
    return [square, hom, mult]


def property_suite(
    P: PoissonAlgebra,
    samples: int = 200,
    seed: int = 0,
    max_u_degree: int = 9,
    resolution: bool = True,
) -> List[PropertyResult]:
    """The U(A) / Q(A) identities on seeded random samples.

    Sample degrees are the smaller of the nominal degree (3 for associativity,
    4 for the coalgebra laws, 2 for Hopf and smash checks) and what the U-degree
    cap allows for the products involved.
    """
    env = envelope(P, max_u_degree)
    rng = random.Random(seed)
    out: List[PropertyResult] = []

    deg = min(3, max_u_degree // 3)
    r = PropertyResult(f"u_multiply associative (degree <= {deg})", seed=seed)
    for _ in range(samples):
        x, y, z = (random_u_element(rng, env, deg) for _ in range(3))
        r.record(env.multiply(env.multiply(x, y), z) == env.multiply(x, env.multiply(y, z)), (x, y, z))
    out.append(r)

    r = PropertyResult("1̲ is a two-sided unit", seed=seed)
    for _ in range(samples // 4 or 1):
        x = random_u_element(rng, env, deg)
        r.record(env.multiply({(): 1}, x) == x == env.multiply(x, {(): 1}), x)
    out.append(r)

    deg = min(4, max_u_degree)
    coas = PropertyResult(f"Δ coassociative (all monomials of degree <= {deg})", seed=seed)
    cocom = PropertyResult(f"Δ cocommutative (all monomials of degree <= {deg})", seed=seed)
    cou = PropertyResult(f"ε is a counit (all monomials of degree <= {deg})", seed=seed)
    for w in pbw_words(P, deg):
        delta = env.coproduct({w: 1})
        left: dict = {}
        right: dict = {}
        for (a, b), c in delta.items():
            for (a1, a2), c1 in env.coproduct({a: 1}).items():
                _acc(left, (a1, a2, b), c * c1)
            for (b1, b2), c2 in env.coproduct({b: 1}).items():
                _acc(right, (a, b1, b2), c * c2)
        coas.record(left == right, w)
        swapped: dict = {}
        for (a, b), c in delta.items():
            _acc(swapped, (b, a), c)
        cocom.record(swapped == delta, w)
        lhs: dict = {}
        rhs: dict = {}
        for (a, b), c in delta.items():
            if a == ():
                _acc(lhs, b, c)
            if b == ():
                _acc(rhs, a, c)
        cou.record(lhs == {w: 1} == rhs, w)
    out += [coas, cocom, cou]

    deg = min(2, max_u_degree // 2)
    r = PropertyResult(f"Δ(xy) = Δ(x)Δ(y) (degree <= {deg})", seed=seed)
    for _ in range(samples // 2 or 1):
        x, y = random_u_element(rng, env, deg), random_u_element(rng, env, deg)
        r.record(env.coproduct(env.multiply(x, y)) == _tensor_mul(env, env.coproduct(x), env.coproduct(y)), (x, y))
    out.append(r)

    r = PropertyResult(f"α(ab) = Σ α1(a) α2(b) (degree <= {deg})", seed=seed)
    A = P.algebra
    for _ in range(samples // 2 or 1):
        x = random_u_element(rng, env, deg)
        a, b = random_vector(rng, P.dim), random_vector(rng, P.dim)
        lhs = env.act_on_A(x, A.product(a, b))
        rhs: SparseVector = {}
        for (w1, w2), c in env.coproduct(x).items():
            add_into(rhs, A.product(env.act_on_A({w1: 1}, a), env.act_on_A({w2: 1}, b)), c)
        r.record(lhs == {k: v for k, v in rhs.items() if v}, (x, a, b))
    out.append(r)

    deg = min(2, max_u_degree // 3)
    r = PropertyResult(f"smash_multiply associative (U-degree <= {deg})", seed=seed)
    for _ in range(samples // 2 or 1):
        x, y, z = (random_smash_element(rng, env, deg) for _ in range(3))
        r.record(
            env.smash_multiply(env.smash_multiply(x, y), z) == env.smash_multiply(x, env.smash_multiply(y, z)),
            (x, y, z),
        )
    out.append(r)

    r = PropertyResult("1_A ⊗ 1_A' # 1̲ is a two-sided unit", seed=seed)
    unit = env.smash_unit()
    for _ in range(samples // 4 or 1):
        x = random_smash_element(rng, env, deg)
        r.record(env.smash_multiply(unit, x) == x == env.smash_multiply(x, unit), x)
    out.append(r)

    out.append(qp_action_roundtrip(P, self_module(P), samples // 2 or 1, seed, min(2, max_u_degree // 2)))
    if resolution:
        out += resolution_checks(P, max_u_degree=min(2, max_u_degree), samples=samples // 4 or 1, seed=seed)
    return out
