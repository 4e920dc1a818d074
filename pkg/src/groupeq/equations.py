"""Equation systems, exponent matrices, and their classification.

An equation system is a list of words over declared variables and
coefficient symbols, optionally bound to a concrete group. Classification
(non-singular / p-nonsingular / unimodular) reads off the Smith normal
form of the exponent-sum matrix; ranks over Q and over prime fields are
implemented independently by elimination so the two routes can be checked
against each other.

All integer arithmetic is arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ParseError, ValidationError
from .groups import (FiniteGroup, Homomorphism, abelian_p_basis, cyclic,
                     direct_product, dlog_table, is_prime, load_group_file,
                     prime_factors)
from .words import (COEFF, VAR, Word, exponent_sum, format_word,
                    parse_word, strip_comment)

IntMatrix = list[list[int]]


# ---------------------------------------------------------------------------
# exact integer linear algebra

def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if A and B and len(A[0]) != len(B):
        raise ValueError("matrix shape mismatch")
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(cols)]
            for i in range(len(A))]


def det_int(A: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    m = [row[:] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}."""
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return tuple(self.D[i][i] for i in range(k) if self.D[i][i] != 0)


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Diagonalize an integer matrix by gcd-driven row/column reduction.

    The pivot is always a nonzero entry of minimal absolute value (lowest
    row, then column, index breaking ties), so the output is deterministic.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [[int(x) for x in row] for row in A]
    if any(len(row) != cols for row in D):
        raise ValueError("matrix is not rectangular")
    U = _identity(rows)
    V = _identity(cols)

    def row_op(i: int, j: int, q: int) -> None:   # row_i -= q * row_j
        D[i] = [a - q * b for a, b in zip(D[i], D[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i: int, j: int, q: int) -> None:   # col_i -= q * col_j
        for r in range(rows):
            D[r][i] -= q * D[r][j]
        for r in range(cols):
            V[r][i] -= q * V[r][j]

    def swap_rows(i: int, j: int) -> None:
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for r in range(rows):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(cols):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if D[i][j] != 0 and (best is None or abs(D[i][j]) < best):
                    best = abs(D[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        reduced = False
        for i in range(t + 1, rows):
            if D[i][t] != 0:
                q = D[i][t] // D[t][t]
                row_op(i, t, q)
                if D[i][t] != 0:
                    reduced = True
        for j in range(t + 1, cols):
            if D[t][j] != 0:
                q = D[t][j] // D[t][t]
                col_op(j, t, q)
                if D[t][j] != 0:
                    reduced = True
        if reduced:
            continue  # a smaller remainder appeared; pick a new pivot
        if D[t][t] < 0:
            for j in range(cols):
                D[t][j] = -D[t][j]
            U[t] = [-x for x in U[t]]
        t += 1
        if t >= min(rows, cols):
            break

    # enforce the divisibility chain d_i | d_{i+1}
    r = min(rows, cols)
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if a != 0 and b % a != 0:
                # fold entry (i+1,i+1) into row i and rediagonalize the pair
                col_op(i, i + 1, -1)  # col_i += col_{i+1}
                inner = smith_normal_form([[D[i][i], D[i][i + 1]],
                                           [D[i + 1][i], D[i + 1][i + 1]]])
                _apply_2x2(D, U, V, i, inner, rows, cols)
                changed = True
    return SmithDecomposition(U, D, V)


def _apply_2x2(D: IntMatrix, U: IntMatrix, V: IntMatrix, i: int,
               inner: SmithDecomposition, rows: int, cols: int) -> None:
    u, d, v = inner.U, inner.D, inner.V
    for r in range(2):
        for c in range(2):
            D[i + r][i + c] = d[r][c]
    newU = [[u[r][0] * U[i + 0][c] + u[r][1] * U[i + 1][c] for c in range(rows)]
            for r in range(2)]
    U[i], U[i + 1] = newU[0], newU[1]
    newVcols = [[V[rr][i + 0] * v[0][c] + V[rr][i + 1] * v[1][c] for rr in range(cols)]
                for c in range(2)]
    for rr in range(cols):
        V[rr][i], V[rr][i + 1] = newVcols[0][rr], newVcols[1][rr]


def rank_mod_p(A: Sequence[Sequence[int]], p: int) -> int:
    """Rank over the p-element field by Gaussian elimination."""
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    m = [[x % p for x in row] for row in A]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for i in range(rows):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def rank_rational(A: Sequence[Sequence[int]]) -> int:
    """Rank over Q by exact fraction elimination."""
    m = [[Fraction(x) for x in row] for row in A]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        lead = m[rank][c]
        m[rank] = [x / lead for x in m[rank]]
        for i in range(rows):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# equation systems

@dataclass(frozen=True)
class Binding:
    group: object                      # FiniteGroup or any group-like
    values: Mapping[str, int]          # coefficient symbol -> element index


@dataclass(frozen=True)
class EquationSystem:
    variables: tuple[str, ...]
    coefficients: tuple[str, ...]
    words: tuple[Word, ...]
    binding: Binding | None = None

    def __post_init__(self) -> None:
        declared = set(self.variables) | set(self.coefficients)
        if len(declared) != len(self.variables) + len(self.coefficients):
            raise ValidationError("variable/coefficient names overlap")
        for w in self.words:
            for letter in w:
                if letter.name not in declared:
                    raise ValidationError(f"undeclared symbol {letter.name!r} in word")
                want = VAR if letter.kind == VAR else COEFF
                have = VAR if letter.name in set(self.variables) else COEFF
                if want != have:
                    raise ValidationError(f"symbol {letter.name!r} used as wrong kind")
        if self.binding is not None:
            for c in self.coefficients:
                if c not in self.binding.values:
                    raise ValidationError(f"bound system lacks a value for {c!r}")

    def bind(self, group: object, values: Mapping[str, int]) -> "EquationSystem":
        return EquationSystem(self.variables, self.coefficients, self.words,
                              Binding(group, dict(values)))


def exponent_matrix(system: EquationSystem) -> IntMatrix:
    """Row j, column i: exponent sum of variable i in word j."""
    return [[exponent_sum(w, v) for v in system.variables] for w in system.words]


@dataclass(frozen=True)
class Classification:
    nonsingular: bool
    singular_primes: tuple[int, ...] | str   # finite set, or "all"
    unimodular: bool
    invariant_factors: tuple[int, ...]
    note: str

    def to_dict(self) -> dict:
        return {
            "nonsingular": self.nonsingular,
            "singular_primes": list(self.singular_primes)
            if isinstance(self.singular_primes, tuple) else self.singular_primes,
            "unimodular": self.unimodular,
            "invariant_factors": list(self.invariant_factors),
            "note": self.note,
        }


def classify_matrix(A: Sequence[Sequence[int]]) -> Classification:
    rows = len(A)
    snf = smith_normal_form(A)
    factors = snf.invariant_factors
    if len(factors) < rows:
        return Classification(
            nonsingular=False, singular_primes="all", unimodular=False,
            invariant_factors=factors,
            note="exponent rows are dependent over Q; singular for all p")
    last = factors[-1] if factors else 1
    bad = tuple(prime_factors(last)) if last > 1 else ()
    return Classification(
        nonsingular=True, singular_primes=bad, unimodular=not bad,
        invariant_factors=factors,
        note=f"primes dividing the last invariant factor {last}")


def classify(system: EquationSystem) -> Classification:
    """Non-singular / p-nonsingular / unimodular verdicts for a system."""
    return classify_matrix(exponent_matrix(system))


def is_p_nonsingular(system: EquationSystem, p: int) -> bool:
    return rank_mod_p(exponent_matrix(system), p) == len(system.words)


# ---------------------------------------------------------------------------
# system file format

def parse_system(text: str, base_dir: str | Path | None = None,
                 group: object | None = None) -> EquationSystem:
    """Parse a system file.

    Format: a ``vars:`` line, an optional ``coeffs:`` line, an optional
    ``bind:`` line (``bind: <group-file>|@group sym=element ...``), then one
    ``eq: <word>`` line per equation. ``#`` comments and blank lines are
    ignored. ``@group`` binds to the group passed by the caller.
    """
    variables: list[str] = []
    coefficients: list[str] = []
    bind_spec: tuple[str, list[tuple[str, str]]] | None = None
    eq_texts: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw).strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected '<key>: ...', got {line!r}")
        key, rest = line.split(":", 1)
        key = key.strip()
        rest = rest.strip()
        if key == "vars":
            variables.extend(rest.split())
        elif key == "coeffs":
            coefficients.extend(rest.split())
        elif key == "bind":
            toks = rest.split()
            if not toks:
                raise ParseError(f"line {lineno}: empty bind clause")
            pairs = []
            for tok in toks[1:]:
                if "=" not in tok:
                    raise ParseError(f"line {lineno}: bind entries look like sym=element")
                sym, elem = tok.split("=", 1)
                pairs.append((sym, elem))
            bind_spec = (toks[0], pairs)
        elif key == "eq":
            eq_texts.append(rest)
        else:
            raise ParseError(f"line {lineno}: unknown section {key!r}")
    words = tuple(parse_word(t, variables, coefficients) for t in eq_texts)
    system = EquationSystem(tuple(variables), tuple(coefficients), words)
    if bind_spec is None:
        return system
    source, pairs = bind_spec
    if source == "@group":
        if group is None:
            raise ParseError("system binds to @group but no group was supplied")
        target = group
    else:
        from .catalog import resolve_data_path
        path = resolve_data_path(source)
        if not source.startswith("@") and base_dir is not None \
                and not path.is_absolute():
            path = Path(base_dir) / path
        target = load_group_file(path)
    values = {}
    for sym, elem in pairs:
        if elem.startswith("#"):
            values[sym] = int(elem[1:])
        else:
            values[sym] = target.index_of(elem)
    return system.bind(target, values)


def parse_system_file(path: str | Path, group: object | None = None) -> EquationSystem:
    p = Path(path)
    return parse_system(p.read_text(encoding="utf-8"), p.parent, group)


def format_system(system: EquationSystem) -> str:
    out = []
    if system.variables:
        out.append("vars: " + " ".join(system.variables))
    if system.coefficients:
        out.append("coeffs: " + " ".join(system.coefficients))
    for w in system.words:
        out.append("eq: " + format_word(w))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# evaluation

def evaluate_word(word: Word, group, coeff_values: Mapping[str, int],
                  var_values: Mapping[str, int]) -> int:
    """Product of a word's letters in a group-like object."""
    acc = group.identity
    for kind, name, sign in word:
        x = coeff_values[name] if kind == COEFF else var_values[name]
        if sign < 0:
            x = group.inv(x)
        acc = group.mul(acc, x)
    return acc


def satisfies(system: EquationSystem, var_values: Mapping[str, int],
              group=None, coeff_values: Mapping[str, int] | None = None) -> bool:
    if group is None:
        if system.binding is None:
            raise ValidationError("system is not bound to a group")
        group = system.binding.group
        coeff_values = system.binding.values
    return all(evaluate_word(w, group, coeff_values or {}, var_values) == group.identity
               for w in system.words)


# ---------------------------------------------------------------------------
# abelian p-group solver (base case of the solvability machinery)

@dataclass(frozen=True)
class AbelianSolution:
    group: FiniteGroup                 # extension B' >= B
    embedding: Homomorphism            # B -> B'
    assignment: dict[str, int]         # variable -> element index of B'
    lift_exponent: int                 # every cyclic factor grew by p**this
    basis: tuple[int, ...]             # direct basis of B' (element indices)


def solve_abelian_p_system(system: EquationSystem, p: int,
                           basis: Sequence[int] | None = None) -> AbelianSolution:
    """Solve a non-singular system over a finite abelian p-group B.

    Returns an extension B' of B (each cyclic factor's exponent raised by
    the p-valuation of the last invariant factor of the exponent matrix)
    together with a satisfying assignment in B'. A p-nonsingular system
    solves inside B itself.
    """
    if system.binding is None:
        raise ValidationError("system must be bound to a group")
    B = system.binding.group
    if not isinstance(B, FiniteGroup):
        raise ValidationError("abelian solver needs a FiniteGroup binding")
    if basis is None:
        basis = abelian_p_basis(B, p)
    basis = list(basis)
    cyc_orders = [B.element_order(b) for b in basis]
    if B.order > 1 and not basis:
        raise ValidationError("no decomposition for the bound group")

    E = exponent_matrix(system)
    nvars = len(system.variables)
    neqs = len(system.words)
    if rank_rational(E) != neqs:
        raise ValidationError("system is not non-singular; the abelian solver "
                              "needs independent exponent rows")

    snf = smith_normal_form(E)
    factors = snf.invariant_factors
    last = factors[-1] if factors else 1
    v = 0
    while last % p == 0:
        last //= p
        v += 1

    # extension group B' and the embedding h -> h^(p^v)
    new_orders = [o * p ** v for o in cyc_orders]
    Bp = _direct_of_cyclics(new_orders, name=f"{B.name}-ext" if v else B.name)
    new_basis = _canonical_basis(Bp, new_orders)
    logB = dlog_table(B, basis)
    lift = p ** v

    def embed_vec(vec: Sequence[int]) -> int:
        return _from_vector(Bp, new_basis, [e * lift for e in vec])

    embedding = Homomorphism(
        B, Bp, tuple(embed_vec(logB[g]) for g in B.elements()))

    # right-hand side: equation j says sum_i E[j][i] * y_i = -c_j in B'
    rhs_vecs: list[list[int]] = []
    for w in system.words:
        acc = B.identity
        for kind, name, sign in w:
            if kind == COEFF:
                x = system.binding.values[name]
                acc = B.mul(acc, B.inv(x) if sign < 0 else x)
        vec = logB[B.inv(acc)]
        rhs_vecs.append([e * lift for e in vec])

    # solve D z = U b componentwise, then y = V z
    U, V = snf.U, snf.V
    ncomp = len(new_orders)
    z = [[0] * ncomp for _ in range(nvars)]
    for j in range(neqs):
        d = snf.D[j][j]
        target = [0] * ncomp
        for k in range(neqs):
            for t in range(ncomp):
                target[t] = (target[t] + U[j][k] * rhs_vecs[k][t]) % new_orders[t]
        for t in range(ncomp):
            z[j][t] = _solve_congruence(d, target[t], new_orders[t])
    y_vec = [[0] * ncomp for _ in range(nvars)]
    for i in range(nvars):
        for j in range(nvars):
            for t in range(ncomp):
                y_vec[i][t] = (y_vec[i][t] + V[i][j] * z[j][t]) % new_orders[t]

    assignment = {var: _from_vector(Bp, new_basis, y_vec[i])
                  for i, var in enumerate(system.variables)}

    coeffs_in_Bp = {c: embedding(system.binding.values[c])
                    for c in system.coefficients}
    for w in system.words:
        if evaluate_word(w, Bp, coeffs_in_Bp, assignment) != Bp.identity:
            raise ValidationError("internal error: abelian solution fails to verify")
    return AbelianSolution(Bp, embedding, assignment, v,
                           tuple(new_basis))


def _solve_congruence(d: int, a: int, n: int) -> int:
    """Some z with d*z = a (mod n); raises if insoluble."""
    import math as _math
    g = _math.gcd(d, n)
    if a % g != 0:
        raise ValidationError(f"congruence {d}*z = {a} (mod {n}) has no solution")
    if n == 1:
        return 0
    d2, a2, n2 = d // g, a // g, n // g
    return (a2 * pow(d2, -1, n2)) % n2


def _direct_of_cyclics(orders: Sequence[int], name: str = "B") -> FiniteGroup:
    if not orders:
        return cyclic(1, name=name)
    G = cyclic(orders[0], gen_symbol="h1")
    for t, o in enumerate(orders[1:], start=2):
        G = direct_product(G, cyclic(o, gen_symbol=f"h{t}"))
    return FiniteGroup(G.table, G.names, name=name)


def _canonical_basis(G: FiniteGroup, orders: Sequence[int]) -> list[int]:
    """Generator indices of a group built by _direct_of_cyclics."""
    basis = []
    stride = G.order
    for o in orders:
        stride //= o
        basis.append(stride)
    return basis


def _from_vector(G: FiniteGroup, basis: Sequence[int], vec: Sequence[int]) -> int:
    x = G.identity
    for b, e in zip(basis, vec):
        x = G.mul(x, G.power(b, e))
    return x
