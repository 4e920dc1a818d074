"""Structure classification, catalog audit, and the counterexample family.

The classification side answers one question per group: is it metabelian,
and if so, does it have an abelian normal subgroup A with G/A an abelian
p-group? Such a pair (A, p) is called a witness here; groups with a
witness cannot carry a unimodular equation that is unsolvable in
metabelian groups, so the audit over the bundled catalog isolates the
order-42 exception.

The counterexample side builds, for distinct primes p and q, the group
C2 wr (Cp x Cq) and the unimodular one-variable equation whose right-hand
side c*c^(ab) lies in the commutator subgroup. The obstruction to solving
it in any metabelian overgroup is checked exactly: the combination
S = n(1+b)(1+a+...+a^(p-1)) + m(1+a)(1+b+...+b^(q-1)) satisfies
S*(1+ab) = S*(a+b) in the integral group ring of Cp x Cq, while the
corresponding conjugate combinations of c*c^(ab) differ in the group.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .algebra import (AlgebraElement, IntegralGroupSpec, format_element)
from .catalog import AUDIT_ORDERS, EXPECTED_COUNTS
from .config import DEFAULT_CONFIG, Config
from .equations import (Classification, EquationSystem, classify,
                        evaluate_word)
from .errors import CapExceeded, GroupEqError, ValidationError
from .groups import (FiniteGroup, Subgroup, cyclic, direct_product,
                     is_metabelian, is_normal, is_prime, isomorphic,
                     load_group_file, normal_subgroups, prime_factors,
                     quotient, sylow_subgroup)
from .words import (COEFF, VAR, Letter, Word, word_conjugate,
                    word_inverse, word_power)
from .wreath import WreathGroup, wreath_product


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class Witness:
    subgroup: Subgroup
    prime: int


def verify_witness(G: FiniteGroup, w: Witness) -> bool:
    """Re-check a witness from scratch: A abelian normal, G/A an abelian
    p-group (the trivial quotient counts as a p-group for any p)."""
    A = w.subgroup
    if not A.is_abelian() or not is_normal(G, A):
        return False
    Q, _ = quotient(G, A)
    if Q.order == 1:
        return G.order % w.prime == 0 or G.order == 1
    return Q.is_abelian and _p_power(Q.order, w.prime)


def _p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def abelian_by_abelian_p_witness(G: FiniteGroup,
                                 config: Config = DEFAULT_CONFIG
                                 ) -> tuple[Witness | None, int]:
    """Exhaustive witness search over normal subgroups.

    Returns (witness, number of normal subgroups examined). The first
    witness in canonical order (largest A, then smallest p) is returned;
    None certifies that no normal subgroup works.
    """
    normals = normal_subgroups(G, config)
    examined = 0
    for A in sorted(normals, key=lambda S: (-S.order, S.elements)):
        examined += 1
        if not A.is_abelian():
            continue
        Q, _ = quotient(G, A)
        if Q.order == 1:
            p = prime_factors(G.order)[0] if G.order > 1 else 2
            w = Witness(A, p)
        else:
            ps = prime_factors(Q.order)
            if len(ps) != 1 or not Q.is_abelian:
                continue
            w = Witness(A, ps[0])
        if not verify_witness(G, w):
            raise ValidationError("internal error: witness failed re-verification")
        return w, examined
    return None, examined


@dataclass(frozen=True)
class ClassificationReport:
    group_id: str
    order: int
    metabelian: bool
    witness: Witness | None
    normals_examined: int
    note: str

    def to_dict(self) -> dict:
        return {
            "group": self.group_id,
            "order": self.order,
            "metabelian": self.metabelian,
            "witness": None if self.witness is None else {
                "subgroup_order": self.witness.subgroup.order,
                "subgroup_elements": list(self.witness.subgroup.elements),
                "prime": self.witness.prime,
            },
            "normals_examined": self.normals_examined,
            "note": self.note,
        }


def classify_group(G: FiniteGroup, config: Config = DEFAULT_CONFIG
                   ) -> ClassificationReport:
    if not is_metabelian(G):
        return ClassificationReport(
            G.name, G.order, False, None, 0,
            "not metabelian (second derived subgroup is nontrivial); skipped")
    w, examined = abelian_by_abelian_p_witness(G, config)
    if w is None:
        note = (f"metabelian, NO witness: none of the {examined} normal "
                "subgroups is abelian with an abelian prime-power quotient")
    else:
        Qord = G.order // w.subgroup.order
        note = (f"witness: abelian normal subgroup of order {w.subgroup.order}, "
                f"quotient is an abelian {w.prime}-group of order {Qord}")
    return ClassificationReport(G.name, G.order, True, w, examined, note)


# ---------------------------------------------------------------------------
# the two order-reduction arguments, as checkable reports

@dataclass(frozen=True)
class PqOrderReport:
    group_id: str
    p: int
    q: int
    sylow_q_unique: bool
    witness: Witness


def pq_structure_check(G: FiniteGroup, config: Config = DEFAULT_CONFIG) -> PqOrderReport:
    """For |G| = p*q (p < q primes): the Sylow q-subgroup is unique, hence
    normal, giving a witness (C_q, p)."""
    ps = prime_factors(G.order)
    if len(ps) != 2 or ps[0] * ps[1] != G.order:
        raise ValidationError(f"order {G.order} is not a product of two "
                              "distinct primes")
    p, q = ps
    syl = sylow_subgroup(G, q)
    unique = is_normal(G, syl)
    if not unique:
        # cannot happen for |G| = pq with q > p; re-derive by counting
        count = len({tuple(sorted(G.conj(s, g) for s in syl.elements))
                     for g in G.elements()})
        raise ValidationError(f"Sylow {q}-subgroup is not unique ({count} found)")
    w = Witness(syl, p)
    if not verify_witness(G, w):
        raise ValidationError("internal error: pq witness failed verification")
    return PqOrderReport(G.name, p, q, unique, w)


@dataclass(frozen=True)
class PGroupReport:
    group_id: str
    p: int
    trials: int
    solved: int
    seed: int

    @property
    def all_solved(self) -> bool:
        return self.solved == self.trials


def random_unimodular_equation(G: FiniteGroup, rng: random.Random
                               ) -> EquationSystem:
    """A one-variable equation with exponent sum forced to +-1, random
    coefficients from G."""
    target = rng.choice((1, -1))
    blocks = [rng.choice((-3, -2, -1, 1, 2, 3)) for _ in range(rng.randint(0, 3))]
    blocks.append(target - sum(blocks))
    blocks = [e for e in blocks if e != 0]
    coeffs = []
    letters: list[Letter] = []
    for e in blocks:
        sym = f"g{len(coeffs)}"
        coeffs.append((sym, rng.randrange(G.order)))
        letters.append(Letter(COEFF, sym, +1))
        letters.extend(word_power((Letter(VAR, "x", +1),), e))
    sym = f"g{len(coeffs)}"
    coeffs.append((sym, rng.randrange(G.order)))
    letters.append(Letter(COEFF, sym, +1))
    system = EquationSystem(("x",), tuple(s for s, _ in coeffs),
                            (tuple(letters),))
    return system.bind(G, dict(coeffs))


def p_group_equation_check(G: FiniteGroup, trials: int = 100, seed: int = 0) -> PGroupReport:
    """Solve random unimodular one-variable equations inside a p-group.

    All of them are expected to solve in G itself; a failure would be a
    finding, not an error.
    """
    ps = prime_factors(G.order)
    if len(ps) > 1:
        raise ValidationError(f"order {G.order} is not a prime power")
    p = ps[0] if ps else 2
    rng = random.Random(seed)
    solved = 0
    for _ in range(trials):
        system = random_unimodular_equation(G, rng)
        word = system.words[0]
        values = system.binding.values
        if any(evaluate_word(word, G, values, {"x": x}) == 0
               for x in G.elements()):
            solved += 1
    return PGroupReport(G.name, p, trials, solved, seed)


# ---------------------------------------------------------------------------
# catalog audit

@dataclass(frozen=True)
class AuditEntry:
    file: str
    report: ClassificationReport | None
    error: str | None


@dataclass(frozen=True)
class AuditReport:
    entries: tuple[AuditEntry, ...]
    orders: tuple[int, ...]
    deviations: tuple[str, ...]          # metabelian audit-order groups without witness
    counts_ok: bool
    pairwise_distinct: bool
    expected_without_witness: tuple[str, ...]   # order-42 exceptions found

    @property
    def all_witnessed(self) -> bool:
        return not self.deviations

    def to_dict(self) -> dict:
        return {
            "orders": list(self.orders),
            "groups": [e.report.to_dict() if e.report else {"file": e.file,
                                                            "error": e.error}
                       for e in self.entries],
            "deviations": list(self.deviations),
            "counts_ok": self.counts_ok,
            "pairwise_distinct": self.pairwise_distinct,
            "without_witness": list(self.expected_without_witness),
        }


def audit_catalog(directory: str | Path, orders: Sequence[int] | None = None,
                  config: Config = DEFAULT_CONFIG) -> AuditReport:
    """Classify every group file in a directory and check catalog hygiene.

    Per-file load errors are collected, not fatal. Within each order the
    groups are checked pairwise non-isomorphic and, when the order is one
    the catalog claims to cover completely, the count is compared against
    the classification count.
    """
    directory = Path(directory)
    files = sorted(directory.glob("*.grp"))

    def load_one(path: Path) -> tuple[AuditEntry, FiniteGroup | None]:
        try:
            G = load_group_file(path, config)
        except GroupEqError as exc:
            return AuditEntry(path.name, None, str(exc)), None
        if orders is not None and G.order not in orders:
            return AuditEntry(path.name, None, None), None   # filtered out
        return AuditEntry(path.name, classify_group(G, config), None), G

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(load_one, files))
    else:
        results = [load_one(f) for f in files]
    entries = [e for e, _ in results if e.report is not None or e.error is not None]

    present_orders = sorted({e.report.order for e in entries if e.report})
    deviations = []
    exceptions = []
    for e in entries:
        r = e.report
        if r is None or not r.metabelian:
            continue
        if r.witness is None:
            if r.order in AUDIT_ORDERS:
                deviations.append(f"{r.group_id} (order {r.order})")
            else:
                exceptions.append(f"{r.group_id} (order {r.order})")

    counts_ok = True
    for o in present_orders:
        have = sum(1 for e in entries if e.report and e.report.order == o)
        if o in EXPECTED_COUNTS and have != EXPECTED_COUNTS[o]:
            counts_ok = False

    pairwise = True
    loaded: dict[int, list[FiniteGroup]] = {}
    for (e, G) in results:
        if e.report is not None and G is not None:
            loaded.setdefault(G.order, []).append(G)
    for lst in loaded.values():
        for g1, g2 in itertools.combinations(lst, 2):
            if isomorphic(g1, g2, config) is not None:
                pairwise = False

    return AuditReport(tuple(entries), tuple(present_orders),
                       tuple(deviations), counts_ok, pairwise,
                       tuple(exceptions))


# ---------------------------------------------------------------------------
# the counterexample family

@dataclass(frozen=True)
class CounterexampleInstance:
    p: int
    q: int
    n: int
    m: int
    wreath: WreathGroup | None       # None in symbolic mode
    a: int | None                    # top generator of order p (wreath index)
    b: int | None                    # top generator of order q
    c: int | None                    # base generator at the identity coordinate
    system: EquationSystem
    classification: Classification
    realized: bool

    @property
    def order(self) -> int:
        return 2 ** (self.p * self.q) * self.p * self.q


def counterexample_equation(p: int, q: int, n: int, m: int) -> Word:
    """x^n * x^(na) * ... * x^(na^(p-1)) * x^m * x^(mb) * ... * x^(mb^(q-1))
    = c * c^(ab), folded into a single left-hand word."""
    x = (Letter(VAR, "x", +1),)
    a = (Letter(COEFF, "a", +1),)
    b = (Letter(COEFF, "b", +1),)
    c = (Letter(COEFF, "c", +1),)
    lhs: Word = ()
    for k in range(p):
        lhs += word_conjugate(word_power(x, n), word_power(a, k))
    for k in range(q):
        lhs += word_conjugate(word_power(x, m), word_power(b, k))
    rhs = c + word_conjugate(c, a + b)
    return lhs + word_inverse(rhs)


def counterexample_text(p: int, q: int, n: int, m: int) -> str:
    """The same equation in source syntax (parseable by the word grammar)."""
    parts = [f"x^{n}"]
    parts += [f"x^{n}^(a" + (f"^{k}" if k > 1 else "") + ")" for k in range(1, p)]
    parts.append(f"x^{m}")
    parts += [f"x^{m}^(b" + (f"^{k}" if k > 1 else "") + ")" for k in range(1, q)]
    return " ".join(parts) + " = c c^(a b)"


def counterexample_build(p: int, q: int, symbolic: bool = False,
                         config: Config = DEFAULT_CONFIG) -> CounterexampleInstance:
    """The wreath-product instance C2 wr (Cp x Cq) with its unimodular
    equation; n is the least positive integer with n*p = 1 (mod q)."""
    if not (is_prime(p) and is_prime(q)):
        raise ValidationError(f"{p} and {q} must be prime")
    if p == q:
        raise ValidationError("the two primes must be distinct")
    n = pow(p, -1, q)
    m = (1 - n * p) // q
    assert n * p + m * q == 1
    word = counterexample_equation(p, q, n, m)
    system = EquationSystem(("x",), ("a", "b", "c"), (word,))
    cls = classify(system)
    if not cls.unimodular:
        raise ValidationError("internal error: the equation must be unimodular")

    order = 2 ** (p * q) * p * q
    realized = order <= config.counterexample_cap
    if symbolic:
        return CounterexampleInstance(p, q, n, m, None, None, None, None,
                                      system, cls, False)
    if not realized:
        raise CapExceeded(
            f"group order {order} exceeds the realization cap "
            f"{config.counterexample_cap}; use symbolic mode for the ring "
            "identity alone")
    top = direct_product(cyclic(p), cyclic(q))
    W = wreath_product(cyclic(2, gen_symbol="c"), top, config)
    a = W.embed_top(q)         # (g_p, 1): index 1*q + 0
    b = W.embed_top(1)         # (1, g_q): index 0*q + 1
    c = W.embed_base((1,) + (0,) * (top.order - 1))
    bound = system.bind(W, {"a": a, "b": b, "c": c})
    return CounterexampleInstance(p, q, n, m, W, a, b, c, bound, cls, True)


@dataclass(frozen=True)
class ObstructionReport:
    ring_identity_holds: bool
    s_element: AlgebraElement
    s_is_zero: bool
    group_inequality_holds: bool | None     # None when the group part was skipped
    lhs_vs_rhs: tuple[str, str] | None

    @property
    def confirmed(self) -> bool | None:
        if self.group_inequality_holds is None:
            return None
        return self.ring_identity_holds and self.group_inequality_holds

    def to_dict(self) -> dict:
        return {
            "ring_identity_holds": self.ring_identity_holds,
            "s": format_element(self.s_element),
            "s_is_zero": self.s_is_zero,
            "group_inequality_holds": self.group_inequality_holds,
            "confirmed": self.confirmed,
        }


def obstruction_s_element(p: int, q: int, n: int, m: int) -> AlgebraElement:
    spec = IntegralGroupSpec((p, q), 0)
    one = AlgebraElement.one(spec)
    a = AlgebraElement.monomial(spec, (1, 0))
    b = AlgebraElement.monomial(spec, (0, 1))
    sum_a = AlgebraElement.zero(spec)
    for k in range(p):
        sum_a = sum_a + AlgebraElement.monomial(spec, (k, 0))
    sum_b = AlgebraElement.zero(spec)
    for k in range(q):
        sum_b = sum_b + AlgebraElement.monomial(spec, (0, k))
    return (one + b) * sum_a * AlgebraElement.scalar(spec, n) + \
           (one + a) * sum_b * AlgebraElement.scalar(spec, m)


def obstruction_check(inst: CounterexampleInstance,
                      config: Config = DEFAULT_CONFIG) -> ObstructionReport:
    """Exact check of both halves of the obstruction.

    (i)  S*(1+ab) = S*(a+b) in Z[Cp x Cq], by expansion.
    (ii) (c c^(ab))^(1+ab) != (c c^(ab))^(a+b) in the wreath group, when
         it is realizable under the cap.
    """
    spec = IntegralGroupSpec((inst.p, inst.q), 0)
    one = AlgebraElement.one(spec)
    a = AlgebraElement.monomial(spec, (1, 0))
    b = AlgebraElement.monomial(spec, (0, 1))
    S = obstruction_s_element(inst.p, inst.q, inst.n, inst.m)
    ring_ok = (S * (one + a * b)) == (S * (a + b))

    if inst.wreath is None or not inst.realized:
        return ObstructionReport(ring_ok, S, S.is_zero(), None, None)

    W = inst.wreath
    ab = W.mul(inst.a, inst.b)
    w = W.mul(inst.c, W.conj(inst.c, ab))
    lhs = W.mul(w, W.conj(w, ab))                      # w^(1+ab)
    rhs = W.mul(W.conj(w, inst.a), W.conj(w, inst.b))  # w^(a+b)
    return ObstructionReport(ring_ok, S, S.is_zero(), lhs != rhs,
                             (W.element_name(lhs), W.element_name(rhs)))


# ---------------------------------------------------------------------------
# brute-force equation solving

@dataclass(frozen=True)
class BruteForceResult:
    solution: dict[str, int] | None
    searched: int
    exhaustive: bool

    def to_dict(self) -> dict:
        return {"solution": self.solution, "searched": self.searched,
                "exhaustive": self.exhaustive}


def brute_force_solve(system: EquationSystem,
                      config: Config = DEFAULT_CONFIG,
                      descending: bool = False) -> BruteForceResult:
    """Scan all assignments in lexicographic element-index order.

    Returns the lexicographically least solution (greatest, if descending)
    or an exhaustive-failure certificate. The reported search count is the
    scan position of the solution (or the full space size), which does not
    depend on how the scan was partitioned across workers.
    """
    if system.binding is None:
        raise ValidationError("system must be bound to a group")
    G = system.binding.group
    order = G.order
    nvars = len(system.variables)
    total = order ** nvars
    if total > config.brute_force_cap:
        raise CapExceeded(f"search space {order}^{nvars} exceeds the cap "
                          f"{config.brute_force_cap}")
    values = system.binding.values
    words = system.words
    rng = range(order - 1, -1, -1) if descending else range(order)

    def position(combo: tuple[int, ...]) -> int:
        pos = 0
        for v in combo:
            pos = pos * order + (order - 1 - v if descending else v)
        return pos + 1

    def scan(first_values) -> dict[str, int] | None:
        for combo in itertools.product(first_values, *([rng] * (nvars - 1))):
            assignment = dict(zip(system.variables, combo))
            if all(evaluate_word(w, G, values, assignment) == G.identity
                   for w in words):
                return assignment
        return None

    if nvars == 0:
        ok = all(evaluate_word(w, G, values, {}) == G.identity for w in words)
        return BruteForceResult({} if ok else None, 1, not ok)

    if config.jobs > 1:
        chunks = _split_values(list(rng), config.jobs)
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(scan, chunks))
        sol = next((s for s in results if s is not None), None)
    else:
        sol = scan(rng)
    if sol is None:
        return BruteForceResult(None, total, True)
    combo = tuple(sol[v] for v in system.variables)
    return BruteForceResult(sol, position(combo), False)


def _split_values(items: list[int], k: int) -> list[list[int]]:
    size = max(1, (len(items) + k - 1) // k)
    return [items[i:i + size] for i in range(0, len(items), size)]
