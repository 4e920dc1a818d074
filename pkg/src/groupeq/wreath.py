"""Cartesian wreath products and the coordinatewise system transformation.

A wreath product H wr B is the set of pairs (f, t) with f: B -> H and
t in B; the top group acts on tuples by index translation, so conjugating
a base element by d moves coordinate b to coordinate b*d^-1. Elements are
packed into integers, which keeps groups like C2 wr (C2 x C3) (order 384)
cheap to work with; a full Cayley table is only materialized on demand.

The transformation pipeline turns a system over H wr B into an equivalent
family of systems over H, one per top element:

1. `normalize_top_component` changes variables so every coefficient lies
   in the base (the image system over the abelian top is solved first,
   extending the top p-group if needed).
2. `coordinatewise_transform` rewrites each equation into |B| equations over H in
   the doubled variable set y[i,b].
3. `extract_rows` produces, per original equation, the row of group-ring
   elements over Z_p[B] that controls independence, together with the
   translation relation between the rows for different top elements.
4. `reconstruct_solution` assembles a wreath solution from a pointwise one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .algebra import AbelianGroupSpec, AlgebraElement, RowFamily, augmentation
from .config import DEFAULT_CONFIG, Config
from .equations import (EquationSystem, is_p_nonsingular,
                        solve_abelian_p_system)
from .errors import CapExceeded, ValidationError
from .groups import (FiniteGroup, Homomorphism, Subgroup, abelian_p_basis,
                     dlog_table, quotient)
from .words import VAR


class WreathGroup:
    """H wr B on packed element indices; identity is index 0."""

    def __init__(self, base: FiniteGroup, top: FiniteGroup,
                 config: Config = DEFAULT_CONFIG) -> None:
        order = base.order ** top.order * top.order
        if order > config.wreath_order_cap:
            raise CapExceeded(
                f"wreath product order {base.order}^{top.order} * {top.order} "
                f"exceeds cap {config.wreath_order_cap}")
        self.base = base
        self.top = top
        self.order = order
        self._config = config
        self._group: FiniteGroup | None = None

    # -- packing -------------------------------------------------------------

    def encode(self, f: Sequence[int], t: int) -> int:
        code = 0
        for v in f:
            code = code * self.base.order + v
        return code * self.top.order + t

    def decode(self, x: int) -> tuple[tuple[int, ...], int]:
        code, t = divmod(x, self.top.order)
        f = [0] * self.top.order
        for i in range(self.top.order - 1, -1, -1):
            code, f[i] = divmod(code, self.base.order)
        return tuple(f), t

    @property
    def identity(self) -> int:
        return 0

    def embed_base(self, f: Sequence[int]) -> int:
        return self.encode(f, 0)

    def embed_top(self, t: int) -> int:
        return self.encode((0,) * self.top.order, t)

    def base_coordinate(self, x: int, b: int) -> int:
        return self.decode(x)[0][b]

    def top_of(self, x: int) -> int:
        return x % self.top.order

    def in_base(self, x: int) -> bool:
        return self.top_of(x) == 0

    # -- group law -------------------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        f, t = self.decode(x)
        g, u = self.decode(y)
        tm = self.top.table
        bm = self.base.table
        prod = tuple(bm[f[b]][g[tm[b][t]]] for b in range(self.top.order))
        return self.encode(prod, tm[t][u])

    def inv(self, x: int) -> int:
        f, t = self.decode(x)
        tinv = self.top.inverse[t]
        tm = self.top.table
        binv = self.base.inverse
        h = tuple(binv[f[tm[c][tinv]]] for c in range(self.top.order))
        return self.encode(h, tinv)

    def conj(self, x: int, d: int) -> int:
        return self.mul(self.mul(self.inv(d), x), d)

    def elements(self) -> range:
        return range(self.order)

    def element_name(self, x: int) -> str:
        f, t = self.decode(x)
        if x == 0:
            return "1"
        coords = ",".join(self.base.names[v] for v in f)
        return f"({coords};{self.top.names[t]})"

    def index_of(self, name: str) -> int:
        for x in self.elements():
            if self.element_name(x) == name:
                return x
        raise ValidationError(f"wreath product has no element named {name!r} "
                              "(hint: #<index> bindings always work)")

    @property
    def name(self) -> str:
        return f"{self.base.name}wr{self.top.name}"

    def realize(self) -> FiniteGroup:
        """Materialize the Cayley table (cached); capped because the table
        is quadratic in the order."""
        if self._group is None:
            if self.order > self._config.wreath_table_cap:
                raise CapExceeded(
                    f"wreath order {self.order} exceeds the table cap "
                    f"{self._config.wreath_table_cap}")
            table = [[self.mul(a, b) for b in range(self.order)]
                     for a in range(self.order)]
            names = [self.element_name(x) for x in range(self.order)]
            self._group = FiniteGroup(table, names, name=self.name)
        return self._group

    def __repr__(self) -> str:
        return f"WreathGroup({self.base.name} wr {self.top.name}, order={self.order})"


def wreath_product(base: FiniteGroup, top: FiniteGroup,
                   config: Config = DEFAULT_CONFIG) -> WreathGroup:
    return WreathGroup(base, top, config)


def kaloujnine_krasner(G: FiniteGroup, N: Subgroup,
                       config: Config = DEFAULT_CONFIG
                       ) -> tuple[WreathGroup, Homomorphism]:
    """Embed G into N wr (G/N) via the lex-least coset transversal.

    The returned homomorphism is fully validated, so injectivity and
    multiplicativity are exhaustively checked facts, not assumptions.
    """
    Q, proj = quotient(G, N)
    H = N.as_group(name=f"{G.name}-N")
    npos = {g: i for i, g in enumerate(N.elements)}
    # transversal: lex-least preimage of each quotient element
    transversal = [None] * Q.order
    for g in G.elements():
        q = proj(g)
        if transversal[q] is None or g < transversal[q]:
            transversal[q] = g
    W = WreathGroup(H, Q, config)
    if W.order > config.wreath_table_cap:
        raise CapExceeded(
            f"embedding target of order {W.order} exceeds the table cap")
    images = []
    for g in G.elements():
        pg = proj(g)
        f = []
        for q in range(Q.order):
            t_q = transversal[q]
            t_dest = transversal[Q.table[q][pg]]
            val = G.table[G.table[t_q][g]][G.inverse[t_dest]]
            f.append(npos[val])
        images.append(W.encode(f, pg))
    target = W.realize()
    hom = Homomorphism(G, target, tuple(images))
    if not hom.is_injective():
        raise ValidationError("embedding is not injective")  # cannot happen
    return W, hom


# ---------------------------------------------------------------------------
# wreath systems

class WVar(NamedTuple):
    name: str
    sign: int
    conj: int        # top element index d: the letter is x^(s*d)


class WCoeff(NamedTuple):
    base: tuple[int, ...]    # base-subgroup element, one H index per top element


WWord = tuple            # of WVar | WCoeff


@dataclass(frozen=True)
class WreathSystem:
    """A system over H wr B whose coefficients all lie in the base subgroup
    and whose variables carry explicit top conjugators."""
    wreath: WreathGroup
    variables: tuple[str, ...]
    words: tuple[WWord, ...]

    def __post_init__(self) -> None:
        for w in self.words:
            for letter in w:
                if isinstance(letter, WCoeff):
                    if len(letter.base) != self.wreath.top.order:
                        raise ValidationError("coefficient tuple has wrong length")
                elif isinstance(letter, WVar):
                    if letter.name not in set(self.variables):
                        raise ValidationError(f"undeclared variable {letter.name!r}")
                else:
                    raise ValidationError(f"bad letter {letter!r}")

    def exponent_sum(self, j: int, var: str) -> int:
        return sum(l.sign for l in self.words[j]
                   if isinstance(l, WVar) and l.name == var)


def evaluate_wreath_word(ws: WreathSystem, word: WWord,
                         assignment: Mapping[str, int]) -> int:
    W = ws.wreath
    acc = W.identity
    for letter in word:
        if isinstance(letter, WCoeff):
            val = W.embed_base(letter.base)
        else:
            val = W.conj(assignment[letter.name], W.embed_top(letter.conj))
            if letter.sign < 0:
                val = W.inv(val)
        acc = W.mul(acc, val)
    return acc


def wreath_solutions(ws: WreathSystem, base_only: bool = False) -> list[tuple[int, ...]]:
    """All solutions of a wreath system by exhaustive search (small W only)."""
    W = ws.wreath
    pool = [x for x in W.elements() if not base_only or W.in_base(x)]
    out = []
    for combo in itertools.product(pool, repeat=len(ws.variables)):
        assignment = dict(zip(ws.variables, combo))
        if all(evaluate_wreath_word(ws, w, assignment) == W.identity
               for w in ws.words):
            out.append(combo)
    return out


@dataclass(frozen=True)
class NormalizedSystem:
    system: WreathSystem
    wreath: WreathGroup              # possibly rebuilt over an extended top
    beta: dict[str, int]             # top solution used for the variable change
    top_embedding: Homomorphism | None   # old top -> new top, when extended


def normalize_top_component(system: EquationSystem, p: int,
                            config: Config = DEFAULT_CONFIG,
                            allow_extension: bool = False) -> NormalizedSystem:
    """Change variables x -> x*beta so all coefficients land in the base.

    beta solves the image system over the abelian top. By default the
    system must be p-nonsingular, in which case the image solves inside
    the top itself. With allow_extension=True any non-singular system is
    accepted: the image may then solve only in a p-group extension of the
    top, and the wreath product is rebuilt over the extended top with the
    original coefficients embedded coordinatewise.
    """
    if system.binding is None or not isinstance(system.binding.group, WreathGroup):
        raise ValidationError("system must be bound to a wreath product")
    W: WreathGroup = system.binding.group
    top = W.top
    if not top.is_abelian:
        raise ValidationError("the top group must be abelian")
    if not allow_extension and not is_p_nonsingular(system, p):
        raise ValidationError(
            f"system is not {p}-nonsingular; pass allow_extension=True to "
            "solve the top image in an extension instead")

    image_values = {c: W.top_of(v) for c, v in system.binding.values.items()}
    image_system = EquationSystem(system.variables, system.coefficients,
                                  system.words).bind(top, image_values)
    sol = solve_abelian_p_system(image_system, p)

    if sol.lift_exponent > 0:
        new_top = sol.group
        embed = sol.embedding
        W2 = WreathGroup(W.base, new_top, config)
        old_positions = {embed(b): b for b in top.elements()}

        def lift_coeff(x: int) -> int:
            f, t = W.decode(x)
            g = [0] * new_top.order
            for b2 in new_top.elements():
                if b2 in old_positions:
                    g[b2] = f[old_positions[b2]]
            return W2.encode(tuple(g), embed(t))

        values = {c: lift_coeff(v) for c, v in system.binding.values.items()}
        top_embedding = embed
        beta = dict(sol.assignment)
    else:
        # no extension: map the solver's canonical group back onto the top
        W2, values, top_embedding = W, dict(system.binding.values), None
        unembed = {sol.embedding(b): b for b in top.elements()}
        beta = {v: unembed[x] for v, x in sol.assignment.items()}
    topg = W2.top

    new_words = []
    for word in system.words:
        items: list[tuple] = []
        for kind, name, sign in word:
            if kind == VAR:
                if sign > 0:
                    items.append(("v", name, +1))
                    items.append(("t", beta[name]))
                else:
                    items.append(("t", topg.inverse[beta[name]]))
                    items.append(("v", name, -1))
            else:
                val = values[name]
                if sign < 0:
                    val = W2.inv(val)
                items.append(("e", val))
        letters: list = []
        t = 0
        for item in items:
            if item[0] == "v":
                letters.append(WVar(item[1], item[2], topg.inverse[t]))
            elif item[0] == "t":
                t = topg.table[t][item[1]]
            else:
                f, b = W2.decode(item[1])
                shifted = tuple(f[topg.table[q][t]] for q in range(topg.order))
                if any(shifted):
                    letters.append(WCoeff(shifted))
                t = topg.table[t][b]
        if t != 0:
            raise ValidationError(
                "internal error: top components did not cancel after the "
                "variable change")
        new_words.append(tuple(letters))
    ws = WreathSystem(W2, system.variables, tuple(new_words))
    return NormalizedSystem(ws, W2, dict(beta), top_embedding)


# ---------------------------------------------------------------------------
# the coordinatewise transformation

class TVar(NamedTuple):
    name: str
    top: int
    sign: int


class TCoeff(NamedTuple):
    elem: int        # base-group element index


TWord = tuple


@dataclass(frozen=True)
class TransformedSystem:
    """Equations f[j,b] over the base group H, variables y[i,b]."""
    base: FiniteGroup
    top: FiniteGroup
    variables: tuple[tuple[str, int], ...]       # (i, b) for all i, b
    words: tuple[tuple[TWord, ...], ...]         # [j][b]
    source: WreathSystem


def coordinatewise_transform(ws: WreathSystem) -> TransformedSystem:
    """Rewrite each wreath equation into one base-group equation per top
    element; coefficient c becomes its coordinate [c]_b and the variable
    letter x_i^d becomes y[i, b*d^-1]."""
    W = ws.wreath
    top = W.top
    tm = top.table
    tinv = top.inverse
    words_out = []
    for word in ws.words:
        per_b = []
        for b in top.elements():
            letters: list = []
            for letter in word:
                if isinstance(letter, WCoeff):
                    if letter.base[b] != 0:
                        letters.append(TCoeff(letter.base[b]))
                else:
                    letters.append(TVar(letter.name, tm[b][tinv[letter.conj]],
                                        letter.sign))
            per_b.append(tuple(letters))
        words_out.append(tuple(per_b))
    variables = tuple((i, b) for i in ws.variables for b in top.elements())
    return TransformedSystem(W.base, top, variables, tuple(words_out), ws)


def evaluate_transformed_word(ts: TransformedSystem, word: TWord,
                              pointwise: Mapping[tuple[str, int], int]) -> int:
    H = ts.base
    acc = 0
    for letter in word:
        if isinstance(letter, TCoeff):
            acc = H.table[acc][letter.elem]
        else:
            v = pointwise[(letter.name, letter.top)]
            if letter.sign < 0:
                v = H.inverse[v]
            acc = H.table[acc][v]
    return acc


def transformed_solutions(ts: TransformedSystem) -> list[dict[tuple[str, int], int]]:
    """All pointwise solutions by exhaustive search (small cases only)."""
    H = ts.base
    out = []
    for combo in itertools.product(H.elements(), repeat=len(ts.variables)):
        pointwise = dict(zip(ts.variables, combo))
        if all(evaluate_transformed_word(ts, w, pointwise) == 0
               for per_b in ts.words for w in per_b):
            out.append(pointwise)
    return out


def reconstruct_solution(ts: TransformedSystem,
                         pointwise: Mapping[tuple[str, int], int]) -> dict[str, int]:
    """Assemble base-subgroup wreath elements from a pointwise solution and
    verify them against the wreath system."""
    for per_b in ts.words:
        for w in per_b:
            if evaluate_transformed_word(ts, w, pointwise) != 0:
                raise ValidationError("pointwise assignment fails an equation")
    W = ts.source.wreath
    assignment = {}
    for i in ts.source.variables:
        f = tuple(pointwise[(i, b)] for b in ts.top.elements())
        assignment[i] = W.embed_base(f)
    for w in ts.source.words:
        if evaluate_wreath_word(ts.source, w, assignment) != W.identity:
            raise ValidationError("internal error: reconstruction fails to verify")
    return assignment


# ---------------------------------------------------------------------------
# group-ring rows

@dataclass(frozen=True)
class ExtractedRows:
    spec: AbelianGroupSpec
    rows: RowFamily                                   # the rows m[j,1]
    all_rows: dict[tuple[int, int], tuple[AlgebraElement, ...]]   # (j, b)
    translation_holds: bool                           # m[j,b] == b * m[j,1]
    augmentation_matches: bool                        # aug(m[j,1]) = exponent row mod p


def extract_rows(ts: TransformedSystem, p: int) -> ExtractedRows:
    """Rows of Z_p[B] elements recording where each variable occurs.

    Row (j,b) has one entry per original variable i: the sum over
    occurrences of y[i, b'] in f[j,b] of sign * b'. The rows satisfy
    m[j,b] = b * m[j,1], and augmenting m[j,1] recovers the exponent-sum
    row of the wreath equation j mod p.
    """
    top = ts.top
    basis = abelian_p_basis(top, p)
    exponents = []
    for g in basis:
        o = top.element_order(g)
        k = 0
        while o > 1:
            o //= p
            k += 1
        exponents.append(k)
    spec = AbelianGroupSpec(p, tuple(exponents), 0)
    logs = dlog_table(top, basis)

    def mono(b: int) -> AlgebraElement:
        return AlgebraElement.monomial(spec, logs[b])

    variables = ts.source.variables
    all_rows: dict[tuple[int, int], tuple[AlgebraElement, ...]] = {}
    for j, per_b in enumerate(ts.words):
        for b, word in enumerate(per_b):
            entries = {i: AlgebraElement.zero(spec) for i in variables}
            for letter in word:
                if isinstance(letter, TVar):
                    entries[letter.name] = entries[letter.name] + \
                        mono(letter.top).scale(letter.sign)
            all_rows[(j, b)] = tuple(entries[i] for i in variables)

    translation = True
    for j in range(len(ts.words)):
        m1 = all_rows[(j, 0)]
        for b in top.elements():
            shift = mono(b)
            if any(all_rows[(j, b)][k] != shift * m1[k] for k in range(len(m1))):
                translation = False

    aug_ok = True
    for j in range(len(ts.words)):
        for k, i in enumerate(variables):
            want = ts.source.exponent_sum(j, i) % p
            if augmentation(all_rows[(j, 0)][k]) != want:
                aug_ok = False

    rows = RowFamily(spec, tuple(all_rows[(j, 0)] for j in range(len(ts.words))))
    return ExtractedRows(spec, rows, all_rows, translation, aug_ok)
