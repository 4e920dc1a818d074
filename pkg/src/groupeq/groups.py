"""Finite group engine.

Groups are stored as validated Cayley tables over element indices
``0..order-1``. Index 0 is always the identity and is always named ``"1"``;
tables are normalized on construction so this holds for every group that
leaves this module. All objects are immutable after construction and safe
to share across threads.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import CapExceeded, ParseError, ValidationError
from .words import strip_comment

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutations (0-based internally; file cycle notation is 1-based)

def perm_compose(p: Perm, q: Perm) -> Perm:
    """Left-to-right composition: apply p, then q."""
    return tuple(q[x] for x in p)


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> Perm:
    """Parse cycle notation like ``(1 2 3)(4 5)`` or ``(1,2,3)`` (1-based)."""
    stripped = text.replace(" ", "").replace(",", "")
    if stripped in ("", "()"):
        return perm_identity(degree or 0)
    body = text.strip()
    if not re.fullmatch(r"(\s*\([^()]*\)\s*)+", body):
        raise ParseError(f"bad cycle notation: {text!r}")
    cycles: list[list[int]] = []
    maxpt = degree or 0
    for inner in _CYCLE_RE.findall(body):
        pts = [tok for tok in re.split(r"[,\s]+", inner.strip()) if tok]
        if not pts:
            continue
        try:
            cyc = [int(tok) for tok in pts]
        except ValueError as exc:
            raise ParseError(f"bad cycle entry in {text!r}: {exc}") from exc
        if any(p < 1 for p in cyc):
            raise ParseError(f"cycle points must be >= 1 in {text!r}")
        if len(set(cyc)) != len(cyc):
            raise ParseError(f"repeated point inside a cycle: {text!r}")
        maxpt = max(maxpt, max(cyc))
        cycles.append(cyc)
    flat = [p for cyc in cycles for p in cyc]
    if len(set(flat)) != len(flat):
        raise ParseError(f"cycles are not disjoint: {text!r}")
    perm = list(range(maxpt))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a - 1] = b - 1
    return tuple(perm)


def cycles_str(perm: Perm) -> str:
    """Format a permutation in compact 1-based cycle notation."""
    seen = [False] * len(perm)
    parts = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x + 1)
            x = perm[x]
        parts.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(parts) if parts else "()"


# ---------------------------------------------------------------------------
# core type

class FiniteGroup:
    """A finite group given by its Cayley table.

    ``table[a][b]`` is the index of the product a*b. Construction performs
    the cheap structural checks (identity, Latin property, two-sided
    inverses, unique names); ``validate()`` additionally checks
    associativity for all triples, which products built by this module
    guarantee by construction.
    """

    __slots__ = ("name", "order", "table", "names", "inverse", "_name_index",
                 "__dict__")

    def __init__(self, table: Sequence[Sequence[int]],
                 names: Sequence[str] | None = None,
                 name: str = "G") -> None:
        n = len(table)
        if n == 0:
            raise ValidationError("empty Cayley table")
        rows = [tuple(int(x) for x in row) for row in table]
        if any(len(row) != n for row in rows):
            raise ValidationError("Cayley table is not square")
        if any(x < 0 or x >= n for row in rows for x in row):
            raise ValidationError("Cayley table entry out of range")
        if names is None:
            names = ["1"] + [f"g{i}" for i in range(1, n)]
        names = [str(s) for s in names]
        if len(names) != n:
            raise ValidationError("names length does not match order")

        rows, names = _normalize_identity(rows, names)

        self.name = name
        self.order = n
        self.table = tuple(rows)
        self.names = tuple(names)
        if len(set(self.names)) != n:
            raise ValidationError("element names are not unique")
        self._name_index = {s: i for i, s in enumerate(self.names)}

        full = set(range(n))
        for i, row in enumerate(self.table):
            if set(row) != full:
                raise ValidationError(f"row of {self.names[i]!r} is not a permutation")
        for j in range(n):
            if {row[j] for row in self.table} != full:
                raise ValidationError(f"column of {self.names[j]!r} is not a permutation")

        inv = [-1] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == 0:
                    if self.table[b][a] != 0:
                        raise ValidationError(
                            f"element {self.names[a]!r} has no two-sided inverse")
                    inv[a] = b
                    break
        if any(x < 0 for x in inv):
            raise ValidationError("an element has no inverse")
        self.inverse = tuple(inv)

    # -- basic ops ---------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    @property
    def identity(self) -> int:
        return 0

    def conj(self, g: int, h: int) -> int:
        """g**h = h^-1 * g * h."""
        hinv = self.inverse[h]
        return self.table[self.table[hinv][g]][h]

    def comm(self, g: int, h: int) -> int:
        """[g,h] = g^-1 h^-1 g h."""
        t = self.table
        return t[t[t[self.inverse[g]][self.inverse[h]]][g]][h]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        out = 0
        while k:
            if k & 1:
                out = self.table[out][a]
            a = self.table[a][a]
            k >>= 1
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def elements(self) -> range:
        return range(self.order)

    def index_of(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise ValidationError(f"group {self.name!r} has no element named {name!r}") from None

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a]
                   for a in range(self.order) for b in range(a + 1, self.order))

    @cached_property
    def order_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_order(a) for a in self.elements()))

    def validate(self) -> None:
        """Full axiom check; raises ValidationError naming a failing triple."""
        t = np.array(self.table, dtype=np.int64)
        n = self.order
        for a in range(n):
            left = t[t[a]]          # (b,c) -> (a*b)*c
            right = t[a][t]         # (b,c) -> a*(b*c)
            if not np.array_equal(left, right):
                b, c = map(int, np.argwhere(left != right)[0])
                raise ValidationError(
                    "associativity fails at triple "
                    f"({self.names[a]!r}, {self.names[b]!r}, {self.names[c]!r})")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FiniteGroup) and self.table == other.table
                and self.names == other.names)

    def __hash__(self) -> int:
        return hash((self.order, self.table))


def _normalize_identity(rows: list[tuple[int, ...]],
                        names: list[str]) -> tuple[list[tuple[int, ...]], list[str]]:
    n = len(rows)
    ident = None
    idx = tuple(range(n))
    for e in range(n):
        if rows[e] == idx and all(rows[a][e] == a for a in range(n)):
            ident = e
            break
    if ident is None:
        raise ValidationError("table has no two-sided identity element")
    if ident != 0:
        swap = list(range(n))
        swap[0], swap[ident] = ident, 0
        rows = [tuple(swap[rows[swap[a]][swap[b]]] for b in range(n)) for a in range(n)]
        names = [names[swap[a]] for a in range(n)]
    if names[0] != "1":
        if "1" in names[1:]:
            raise ValidationError('the name "1" is reserved for the identity')
        names = ["1"] + names[1:]
    return rows, names


# ---------------------------------------------------------------------------
# subgroups and homomorphisms

@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        elems = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elems)
        if not elems or elems[0] != 0:
            raise ValidationError("subgroup must contain the identity")
        G = self.parent
        eset = set(elems)
        for a in elems:
            if G.inverse[a] not in eset:
                raise ValidationError(f"subgroup not closed under inverse at {G.names[a]!r}")
            for b in elems:
                if G.table[a][b] not in eset:
                    raise ValidationError(
                        f"subgroup not closed under product at "
                        f"({G.names[a]!r}, {G.names[b]!r})")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a: int) -> bool:
        return a in set(self.elements)

    def is_abelian(self) -> bool:
        t = self.parent.table
        return all(t[a][b] == t[b][a] for a in self.elements for b in self.elements)

    def as_group(self, name: str | None = None) -> FiniteGroup:
        """The subgroup as a standalone FiniteGroup on re-indexed elements."""
        pos = {g: i for i, g in enumerate(self.elements)}
        table = [[pos[self.parent.table[a][b]] for b in self.elements]
                 for a in self.elements]
        names = [self.parent.names[g] for g in self.elements]
        return FiniteGroup(table, names, name or f"{self.parent.name}-sub{self.order}")


def closure(G: FiniteGroup, seed: Sequence[int]) -> tuple[int, ...]:
    """Elements of the subgroup generated by *seed*."""
    elems = {0}
    frontier = [0]
    gens = sorted(set(seed) | {G.inverse[s] for s in seed})
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                x = G.table[a][g]
                if x not in elems:
                    elems.add(x)
                    nxt.append(x)
        frontier = nxt
    return tuple(sorted(elems))


def generated_subgroup(G: FiniteGroup, seed: Sequence[int]) -> Subgroup:
    return Subgroup(G, closure(G, seed))


def is_normal(G: FiniteGroup, S: Subgroup) -> bool:
    eset = set(S.elements)
    return all(G.conj(s, g) in eset for g in G.elements() for s in S.elements)


def all_subgroups(G: FiniteGroup, config: Config = DEFAULT_CONFIG) -> list[Subgroup]:
    """Every subgroup of G, found by joining cyclic subgroups pairwise.

    Every subgroup is a join of cyclic ones and joins are associative, so
    iterating pairwise joins to a fixed point is complete.
    """
    if G.order > config.subgroup_order_cap:
        raise CapExceeded(
            f"subgroup enumeration needs order <= {config.subgroup_order_cap}, "
            f"got {G.order}")
    found: dict[tuple[int, ...], None] = {}
    for g in G.elements():
        found.setdefault(closure(G, [g]), None)
    work = list(found)
    while work:
        new: list[tuple[int, ...]] = []
        for i, a in enumerate(work):
            for b in list(found):
                if a is b:
                    continue
                j = closure(G, a + b)
                if j not in found:
                    found[j] = None
                    new.append(j)
        work = new
    return [Subgroup(G, elems) for elems in sorted(found, key=lambda e: (len(e), e))]


def normal_subgroups(G: FiniteGroup, config: Config = DEFAULT_CONFIG) -> list[Subgroup]:
    return [S for S in all_subgroups(G, config) if is_normal(G, S)]


def commutator_subgroup(G: FiniteGroup, within: Subgroup | None = None) -> Subgroup:
    elems = within.elements if within is not None else tuple(G.elements())
    gens = {G.comm(a, b) for a in elems for b in elems}
    return generated_subgroup(G, sorted(gens))


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    """G >= G' >= G'' >= ..., stopping once the series stabilizes."""
    series = [Subgroup(G, tuple(G.elements()))]
    while True:
        nxt = commutator_subgroup(G, series[-1])
        if nxt.elements == series[-1].elements:
            break
        series.append(nxt)
        if nxt.order == 1:
            break
    return series


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    series = [Subgroup(G, tuple(G.elements()))]
    while True:
        gens = {G.comm(a, b) for a in series[-1].elements for b in G.elements()}
        nxt = generated_subgroup(G, sorted(gens))
        if nxt.elements == series[-1].elements:
            break
        series.append(nxt)
        if nxt.order == 1:
            break
    return series


def center(G: FiniteGroup) -> Subgroup:
    t = G.table
    elems = [z for z in G.elements()
             if all(t[z][g] == t[g][z] for g in G.elements())]
    return Subgroup(G, tuple(elems))


def is_metabelian(G: FiniteGroup) -> bool:
    """Second derived subgroup is trivial."""
    second = commutator_subgroup(G, commutator_subgroup(G))
    return second.order == 1


def is_nilpotent(G: FiniteGroup) -> bool:
    return lower_central_series(G)[-1].order == 1


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """A subgroup of order equal to the maximal power of p dividing |G|."""
    if G.order % p != 0:
        raise ValidationError(f"{p} does not divide the group order {G.order}")
    target = 1
    n = G.order
    while n % p == 0:
        target *= p
        n //= p
    current = generated_subgroup(G, [])
    while current.order < target:
        eset = set(current.elements)
        normalizer = [g for g in G.elements()
                      if all(G.conj(s, g) in eset for s in current.elements)]
        grown = None
        for y in normalizer:
            if y in eset:
                continue
            o = G.element_order(y)
            if o % p == 0 or o == p:
                while o % p == 0:
                    o //= p
                cand = closure(G, list(current.elements) + [G.power(y, o)])
                if _is_p_power(len(cand), p) and len(cand) > current.order:
                    grown = cand
                    break
        if grown is None:  # cannot happen in a genuine group
            raise ValidationError("Sylow subgroup construction got stuck")
        current = Subgroup(G, grown)
    return current


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteGroup
    target: FiniteGroup
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        img = tuple(int(x) for x in self.image)
        object.__setattr__(self, "image", img)
        if len(img) != self.source.order:
            raise ValidationError("homomorphism image has wrong length")
        if any(x < 0 or x >= self.target.order for x in img):
            raise ValidationError("homomorphism image out of range")
        if img[0] != 0:
            raise ValidationError("homomorphism must send identity to identity")
        s, t = self.source.table, self.target.table
        for a in range(self.source.order):
            for b in range(self.source.order):
                if img[s[a][b]] != t[img[a]][img[b]]:
                    raise ValidationError(
                        f"not multiplicative at ({self.source.names[a]!r}, "
                        f"{self.source.names[b]!r})")

    def __call__(self, a: int) -> int:
        return self.image[a]

    def is_injective(self) -> bool:
        return len(set(self.image)) == self.source.order

    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.target.order

    def kernel(self) -> Subgroup:
        return Subgroup(self.source,
                        tuple(a for a, x in enumerate(self.image) if x == 0))


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, Homomorphism]:
    """The quotient G/N with its canonical projection; N must be normal."""
    if N.parent is not G and N.parent != G:
        raise ValidationError("subgroup does not belong to this group")
    if not is_normal(G, N):
        raise ValidationError("subgroup is not normal")
    rep_of: dict[int, int] = {}
    reps: list[int] = []
    for g in G.elements():
        if g in rep_of:
            continue
        coset = sorted(G.table[g][n] for n in N.elements)
        for x in coset:
            rep_of[x] = coset[0]
        reps.append(coset[0])
    reps.sort()
    pos = {r: i for i, r in enumerate(reps)}
    table = [[pos[rep_of[G.table[a][b]]] for b in reps] for a in reps]
    names = ["1"] + [f"[{G.names[r]}]" for r in reps[1:]]
    Q = FiniteGroup(table, names, name=f"{G.name}/N{N.order}")
    proj = Homomorphism(G, Q, tuple(pos[rep_of[g]] for g in G.elements()))
    return Q, proj


# ---------------------------------------------------------------------------
# constructions

def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], ["1"], name="1")


def cyclic(n: int, name: str | None = None, gen_symbol: str = "g") -> FiniteGroup:
    if n < 1:
        raise ValidationError("cyclic group order must be >= 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["1"] + [gen_symbol if k == 1 else f"{gen_symbol}^{k}" for k in range(1, n)]
    return FiniteGroup(table, names, name or f"C{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    n, m = G.order, H.order
    table = [[(G.table[a1][a2]) * m + H.table[b1][b2]
              for a2 in range(n) for b2 in range(m)]
             for a1 in range(n) for b1 in range(m)]
    names = [f"({G.names[a]},{H.names[b]})" for a in range(n) for b in range(m)]
    names[0] = "1"
    return FiniteGroup(table, names, name or f"{G.name}x{H.name}")


Action = Mapping[int, Sequence[int]] | Callable[[int], Sequence[int]]


def semidirect_product(A: FiniteGroup, B: FiniteGroup, action: Action,
                       name: str | None = None) -> FiniteGroup:
    """A |x B where B acts on A by the given automorphisms.

    *action* maps each element index of B to a permutation of A's indices;
    each image must be an automorphism of A, and the map must satisfy
    act(b1*b2) = act(b1) o act(b2) (apply act(b2) innermost).
    """
    act_of = action if callable(action) else action.__getitem__
    acts = [tuple(act_of(b)) for b in B.elements()]
    for b, perm in enumerate(acts):
        if sorted(perm) != list(A.elements()):
            raise ValidationError(f"action of {B.names[b]!r} is not a bijection of A")
        if perm[0] != 0 or any(perm[A.table[x][y]] != A.table[perm[x]][perm[y]]
                               for x in A.elements() for y in A.elements()):
            raise ValidationError(f"action of {B.names[b]!r} is not an automorphism")
    for b1 in B.elements():
        for b2 in B.elements():
            composed = tuple(acts[b1][acts[b2][x]] for x in A.elements())
            if acts[B.table[b1][b2]] != composed:
                raise ValidationError(
                    f"action is not a homomorphism at ({B.names[b1]!r}, {B.names[b2]!r})")
    n, m = A.order, B.order
    table = [[A.table[a1][acts[b1][a2]] * m + B.table[b1][b2]
              for a2 in range(n) for b2 in range(m)]
             for a1 in range(n) for b1 in range(m)]
    names = [f"({A.names[a]},{B.names[b]})" for a in range(n) for b in range(m)]
    names[0] = "1"
    return FiniteGroup(table, names, name or f"{A.name}:{B.name}")


def cyclic_action(B: FiniteGroup, generator_action: Perm) -> dict[int, Perm]:
    """Action of a cyclic group B generated by element index 1."""
    n = B.order
    if n > 1 and closure(B, [1]) != tuple(range(n)):
        raise ValidationError("cyclic_action needs element 1 to generate B")
    powers = [perm_identity(len(generator_action))]
    for _ in range(1, n):
        powers.append(perm_compose(powers[-1], generator_action))
    # element at index k of a canonical cyclic group is generator**k
    return {k: powers[k % n] for k in range(n)}


def inversion_action(A: FiniteGroup) -> Perm:
    if not A.is_abelian:
        raise ValidationError("inversion is only an automorphism of abelian groups")
    return tuple(A.inverse)


def dihedral(n: int, name: str | None = None) -> FiniteGroup:
    """Dihedral group of order 2n (symmetries of the n-gon)."""
    if n == 1:
        return cyclic(2, name or "Dih1")
    act = {0: perm_identity(n), 1: inversion_action(cyclic(n))}
    return semidirect_product(cyclic(n, gen_symbol="r"), cyclic(2, gen_symbol="s"),
                              act, name or f"Dih{n}")


def dicyclic(n: int, name: str | None = None) -> FiniteGroup:
    """Dicyclic group of order 4n: <a,b | a^(2n)=1, b^2=a^n, a^b=a^-1>."""
    if n < 1:
        raise ValidationError("dicyclic parameter must be >= 1")
    m = 2 * n

    def mul(e1: tuple[int, int], e2: tuple[int, int]) -> tuple[int, int]:
        i, j = e1
        k, l = e2
        if j == 0:
            return ((i + k) % m, l)
        if l == 0:
            return ((i - k) % m, 1)
        return ((i - k + n) % m, 0)

    elems = [(i, j) for j in range(2) for i in range(m)]
    pos = {e: x for x, e in enumerate(elems)}
    table = [[pos[mul(e1, e2)] for e2 in elems] for e1 in elems]

    def nm(e: tuple[int, int]) -> str:
        i, j = e
        a = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
        b = "b" if j else ""
        return (a + ("*" if a and b else "") + b) or "1"

    return FiniteGroup(table, [nm(e) for e in elems], name or f"Dic{n}")


def quaternion_group() -> FiniteGroup:
    return dicyclic(2, name="Q8")


def affine_group_over_prime_field(p: int) -> FiniteGroup:
    """Maps x -> a*x + b over the p-element field under composition."""
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    elems = [(a, b) for a in range(1, p) for b in range(p)]
    elems.sort(key=lambda e: e != (1, 0))  # identity first
    pos = {e: i for i, e in enumerate(elems)}

    def mul(e1: tuple[int, int], e2: tuple[int, int]) -> tuple[int, int]:
        # (e1*e2)(x) = e2 applied after e1: a2*(a1*x+b1)+b2
        a1, b1 = e1
        a2, b2 = e2
        return ((a1 * a2) % p, (a2 * b1 + b2) % p)

    table = [[pos[mul(e1, e2)] for e2 in elems] for e1 in elems]
    names = [f"{a}x+{b}" for a, b in elems]
    names[0] = "1"
    return FiniteGroup(table, names, name=f"Aff{p}")


def from_generators(perms: Sequence[Perm | str], config: Config = DEFAULT_CONFIG,
                    name: str = "G") -> FiniteGroup:
    """Closure of permutations under composition, as a Cayley table."""
    parsed: list[Perm] = []
    for p in perms:
        parsed.append(parse_cycles(p) if isinstance(p, str) else tuple(p))
    degree = max((len(p) for p in parsed), default=1)
    gens = []
    for p in parsed:
        q = tuple(p) + tuple(range(len(p), degree))
        if sorted(q) != list(range(degree)):
            raise ValidationError(f"not a permutation: {p!r}")
        gens.append(q)
    ident = perm_identity(degree)
    elems: list[Perm] = [ident]
    pos: dict[Perm, int] = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                prod = perm_compose(e, g)
                if prod not in pos:
                    if len(elems) >= config.closure_cap:
                        raise CapExceeded(
                            f"generator closure exceeds cap {config.closure_cap}")
                    pos[prod] = len(elems)
                    elems.append(prod)
                    nxt.append(prod)
        frontier = nxt
    table = [[pos[perm_compose(a, b)] for b in elems] for a in elems]
    names = [cycles_str(e) for e in elems]
    names[0] = "1"
    return FiniteGroup(table, names, name=name)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors in increasing order."""
    out = []
    for p in itertools.chain([2], itertools.count(3, 2)):
        if p * p > n:
            break
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# isomorphism search

def _fingerprint(G: FiniteGroup) -> tuple:
    Z = center(G)
    series = derived_series(G)
    return (G.order, G.is_abelian, G.order_multiset,
            tuple(sorted(G.element_order(z) for z in Z.elements)),
            tuple(S.order for S in series))


def _generating_sequence(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span: tuple[int, ...] = (0,)
    for g in sorted(G.elements(), key=lambda x: (-G.element_order(x), x)):
        if g not in set(span):
            gens.append(g)
            span = closure(G, gens)
            if len(span) == G.order:
                break
    return gens


def _extend_map(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int],
                images: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Extend gens->images multiplicatively; None on conflict."""
    img = {0: 0}
    frontier = [0]
    for g, h in zip(gens, images):
        if img.setdefault(g, h) != h:
            return None
        frontier.append(g)
    known = list(img)
    while frontier:
        nxt = []
        for a in list(img):
            for g, h in zip(gens, images):
                x = G.table[a][g]
                y = H.table[img[a]][h]
                if x in img:
                    if img[x] != y:
                        return None
                else:
                    img[x] = y
                    nxt.append(x)
        frontier = nxt
        if len(img) == G.order:
            break
    if len(img) != G.order or len(set(img.values())) != G.order:
        return None
    image = tuple(img[a] for a in range(G.order))
    t, s = G.table, H.table
    for a in range(G.order):
        ia = image[a]
        row = t[a]
        srow = s[ia]
        for b in range(G.order):
            if image[row[b]] != srow[image[b]]:
                return None
    return image


def all_isomorphisms(G: FiniteGroup, H: FiniteGroup,
                     config: Config = DEFAULT_CONFIG) -> Iterator[Homomorphism]:
    """Yield every isomorphism G -> H (possibly none)."""
    if max(G.order, H.order) > config.iso_order_cap:
        raise CapExceeded(
            f"isomorphism search capped at order {config.iso_order_cap}")
    if _fingerprint(G) != _fingerprint(H):
        return
    gens = _generating_sequence(G)
    by_order: dict[int, list[int]] = {}
    for h in H.elements():
        by_order.setdefault(H.element_order(h), []).append(h)
    cands = [by_order.get(G.element_order(g), []) for g in gens]
    for images in itertools.product(*cands):
        image = _extend_map(G, H, gens, images)
        if image is not None:
            yield Homomorphism(G, H, image)


def isomorphic(G: FiniteGroup, H: FiniteGroup,
               config: Config = DEFAULT_CONFIG) -> Optional[Homomorphism]:
    """A concrete isomorphism G -> H, or None; the decision is exact."""
    return next(all_isomorphisms(G, H, config), None)


def automorphisms(G: FiniteGroup, config: Config = DEFAULT_CONFIG) -> list[Homomorphism]:
    return list(all_isomorphisms(G, G, config))


# ---------------------------------------------------------------------------
# abelian p-group decomposition

def abelian_p_basis(G: FiniteGroup, p: int) -> list[int]:
    """Indices b_1..b_l with G = <b_1> x ... x <b_l>, orders p^k1 >= ... >= p^kl."""
    if not G.is_abelian:
        raise ValidationError("group is not abelian")
    if not _is_p_power(G.order, p) and G.order != 1:
        raise ValidationError(f"group order {G.order} is not a power of {p}")
    if G.order == 1:
        return []
    orders = {g: G.element_order(g) for g in G.elements()}
    exponent = max(orders.values())
    # number of cyclic factors of order >= p^j follows from counting
    # elements of order dividing p^j
    le = {1: 1}
    pj = p
    while pj <= exponent:
        le[pj] = sum(1 for o in orders.values() if pj % o == 0)
        pj *= p
    lam = []
    pj = p
    while pj <= exponent:
        lam.append(round(math.log(le[pj] // le[pj // p], p)))
        pj *= p
    factor_orders: list[int] = []
    for j, ge in enumerate(lam, start=1):
        count_exactly_j = ge - (lam[j] if j < len(lam) else 0)
        factor_orders.extend([p ** j] * count_exactly_j)
    factor_orders.sort(reverse=True)

    basis: list[int] = []

    def pick(i: int, span: tuple[int, ...]) -> bool:
        if i == len(factor_orders):
            return len(span) == G.order
        want = factor_orders[i]
        size = len(span)
        for g in G.elements():
            if orders[g] != want or g in set(span):
                continue
            new_span = closure(G, list(basis) + [g])
            if len(new_span) == size * want:
                basis.append(g)
                if pick(i + 1, new_span):
                    return True
                basis.pop()
        return False

    if not pick(0, (0,)):
        raise ValidationError("no direct basis found; group is not an abelian p-group")
    return basis


def element_vector(G: FiniteGroup, basis: Sequence[int], a: int) -> tuple[int, ...]:
    """Exponent vector of element a over a direct basis."""
    orders = [G.element_order(b) for b in basis]
    for exps in itertools.product(*(range(o) for o in orders)):
        x = 0
        for b, e in zip(basis, exps):
            x = G.table[x][G.power(b, e)]
        if x == a:
            return exps
    raise ValidationError("element is not spanned by the basis")


def dlog_table(G: FiniteGroup, basis: Sequence[int]) -> dict[int, tuple[int, ...]]:
    """Exponent vectors of all elements over a direct basis."""
    orders = [G.element_order(b) for b in basis]
    out: dict[int, tuple[int, ...]] = {}
    for exps in itertools.product(*(range(o) for o in orders)):
        x = 0
        for b, e in zip(basis, exps):
            x = G.table[x][G.power(b, e)]
        out[x] = exps
    if len(out) != G.order:
        raise ValidationError("basis does not span the group")
    return out


# ---------------------------------------------------------------------------
# group file format

def load_group(text: str, config: Config = DEFAULT_CONFIG) -> FiniteGroup:
    """Parse and fully validate a group file (see package docs for the format)."""
    lines = [strip_comment(ln).rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise ParseError("empty group file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "group" or header[2] != "order":
        raise ParseError(f"bad header: {lines[0]!r} "
                         "(expected: group <name> order <n>)")
    name = header[1]
    try:
        order = int(header[3])
    except ValueError as exc:
        raise ParseError(f"bad order in header: {header[3]!r}") from exc
    if order < 1:
        raise ParseError("order must be positive")
    if len(lines) < 2:
        raise ParseError("missing body (table: or generators:)")
    mode = lines[1].strip()
    body = lines[2:]
    if mode == "table:":
        try:
            rows = [[int(tok) for tok in ln.split()] for ln in body]
        except ValueError as exc:
            raise ParseError(f"bad table entry: {exc}") from exc
        flat = [x for row in rows for x in row]
        if len(flat) != order * order:
            raise ParseError(
                f"table has {len(flat)} entries, expected {order * order}")
        table = [flat[i * order:(i + 1) * order] for i in range(order)]
        G = FiniteGroup(table, None, name=name)
        G.validate()
        return G
    if mode == "generators:":
        perms = [parse_cycles(ln) for ln in body]
        G = from_generators(perms, config, name=name)
        if G.order != order:
            raise ParseError(
                f"generators produce a group of order {G.order}, header says {order}")
        G.validate()
        return G
    raise ParseError(f"expected 'table:' or 'generators:', got {mode!r}")


def load_group_file(path: str | Path, config: Config = DEFAULT_CONFIG) -> FiniteGroup:
    return load_group(Path(path).read_text(encoding="utf-8"), config)


def format_group_file(G: FiniteGroup, style: str = "generators") -> str:
    """Serialize a group; 'generators' uses its right-regular representation."""
    out = [f"group {G.name} order {G.order}"]
    if style == "table":
        out.append("table:")
        for row in G.table:
            out.append(" ".join(map(str, row)))
    elif style == "generators":
        out.append("generators:")
        gens = _generating_sequence(G)
        if not gens:
            out.append("()")
        for g in gens:
            perm = tuple(G.table[x][g] for x in G.elements())
            out.append(cycles_str(perm))
    else:
        raise ValueError(f"unknown style {style!r}")
    return "\n".join(out) + "\n"
