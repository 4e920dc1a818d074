import itertools
import math
import random

import pytest

from groupeq.equations import (classify, classify_matrix, det_int,
                               evaluate_word, exponent_matrix, format_system,
                               mat_mul, parse_system, rank_mod_p,
                               rank_rational, satisfies, smith_normal_form,
                               solve_abelian_p_system)
from groupeq.errors import ParseError, ValidationError
from groupeq.groups import cyclic, dihedral, direct_product

EXAMPLE0 = """
vars: x y z
coeffs: g1 g2 g3
eq: [x,y] x^2 g1 y^-3
eq: [y,z] z
eq: x g2 y g3 z
"""


def minors_gcd(A, k):
    g = 0
    rows, cols = len(A), len(A[0])
    for ri in itertools.combinations(range(rows), k):
        for ci in itertools.combinations(range(cols), k):
            g = math.gcd(g, det_int([[A[i][j] for j in ci] for i in ri]))
    return g


def test_example_system_matrix_and_classification():
    s = parse_system(EXAMPLE0)
    E = exponent_matrix(s)
    assert E == [[2, -3, 0], [0, 0, 1], [1, 1, 1]]
    assert det_int(E) == -5
    cls = classify(s)
    assert cls.nonsingular and not cls.unimodular
    assert cls.singular_primes == (5,)
    assert cls.invariant_factors == (1, 1, 5)
    assert rank_mod_p(E, 5) == 2
    assert rank_mod_p(E, 2) == 3 and rank_mod_p(E, 3) == 3
    assert rank_rational(E) == 3


def test_empty_and_commutator_rows():
    s = parse_system("vars: x y\neq: x y x^-1 y^-1")
    assert exponent_matrix(s) == [[0, 0]]
    empty = parse_system("vars: x y\n")
    assert exponent_matrix(empty) == []
    cls = classify(empty)
    assert cls.unimodular and cls.nonsingular


def test_single_equation_classifications():
    s = parse_system("vars: x\neq: x^2")
    cls = classify(s)
    assert cls.nonsingular and cls.singular_primes == (2,) and not cls.unimodular
    dep = classify_matrix([[1, 1], [2, 2]])
    assert not dep.nonsingular and dep.singular_primes == "all"
    assert not dep.unimodular


def test_smith_trivial_cases():
    snf = smith_normal_form([[1, 0], [0, 1]])
    assert snf.D == [[1, 0], [0, 1]]
    z = smith_normal_form([[0, 0], [0, 0]])
    assert z.invariant_factors == ()
    assert z.D == [[0, 0], [0, 0]]


def test_smith_properties_random():
    rng = random.Random(0)
    for _ in range(400):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        A = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        snf = smith_normal_form(A)
        assert mat_mul(mat_mul(snf.U, A), snf.V) == snf.D
        assert abs(det_int(snf.U)) == 1
        assert abs(det_int(snf.V)) == 1
        fs = snf.invariant_factors
        assert all(f > 0 for f in fs)
        assert all(fs[i + 1] % fs[i] == 0 for i in range(len(fs) - 1))
        if rows <= 4 and cols <= 4:
            prod = 1
            for k in range(1, min(rows, cols) + 1):
                g = minors_gcd(A, k)
                if k <= len(fs):
                    prod *= fs[k - 1]
                    assert g == prod
                else:
                    assert g == 0


def test_rank_errors():
    with pytest.raises(ValidationError):
        rank_mod_p([[1]], 4)


def test_system_file_binding_and_format():
    text = "vars: x\ncoeffs: g\nbind: @catalog/003_c3.grp g=#1\neq: x^2 = g\n"
    s = parse_system(text)
    assert s.binding is not None
    assert s.binding.group.order == 3
    out = format_system(s)
    assert "eq: x^2 g^-1" in out


def test_system_parse_errors():
    with pytest.raises(ParseError):
        parse_system("vars: x\nnonsense\n")
    with pytest.raises(ParseError):
        parse_system("vars: x\nbogus: 1\n")
    with pytest.raises(ParseError):
        parse_system("vars: x\nbind: @group g=x\neq: x\n")   # no group given


def test_evaluate_and_satisfies():
    c6 = cyclic(6)
    s = parse_system("vars: x\ncoeffs: g\neq: x^2 g").bind(c6, {"g": 2})
    assert evaluate_word(s.words[0], c6, {"g": 2}, {"x": 2}) == 0
    assert satisfies(s, {"x": 2})
    assert not satisfies(s, {"x": 1})


def brute_solutions(system, B):
    out = []
    values = system.binding.values
    nvars = len(system.variables)
    for combo in itertools.product(B.elements(), repeat=nvars):
        assign = dict(zip(system.variables, combo))
        if all(evaluate_word(wd, B, values, assign) == 0 for wd in system.words):
            out.append(assign)
    return out


def test_abelian_solver_in_group():
    s = parse_system("vars: x\ncoeffs: g\neq: x g").bind(cyclic(3), {"g": 1})
    sol = solve_abelian_p_system(s, 3)
    assert sol.lift_exponent == 0 and sol.group.order == 3
    assert sol.assignment["x"] == 2


def test_abelian_solver_needs_extension():
    # x^3 g over C9 at p=3: no solution in C9, one extra power of 3 suffices
    c9 = cyclic(9)
    s = parse_system("vars: x\ncoeffs: g\neq: x^3 g").bind(c9, {"g": 1})
    assert not brute_solutions(s, c9)
    sol = solve_abelian_p_system(s, 3)
    assert sol.lift_exponent == 1 and sol.group.order == 27
    lifted = s.bind(sol.group, {"g": sol.embedding(1)})
    oracle = brute_solutions(lifted, sol.group)
    assert {"x": sol.assignment["x"]} in oracle


def test_abelian_solver_two_equations_over_c2():
    c2 = cyclic(2)
    s = parse_system("vars: x y\ncoeffs: g\neq: x y\neq: x y^-1 g").bind(
        c2, {"g": 1})
    sol = solve_abelian_p_system(s, 2)
    lifted = s.bind(sol.group, {"g": sol.embedding(1)})
    assert satisfies(lifted, sol.assignment)
    # oracle agrees a solution exists at this extension level
    assert brute_solutions(lifted, sol.group)


def test_abelian_solver_p_nonsingular_stays_inside():
    B = direct_product(cyclic(2), cyclic(4))
    rng = random.Random(3)
    for _ in range(25):
        e = rng.choice([1, 3, 5])
        g = rng.randrange(B.order)
        s = parse_system(f"vars: x\ncoeffs: g\neq: x^{e} g").bind(B, {"g": g})
        sol = solve_abelian_p_system(s, 2)
        assert sol.lift_exponent == 0
        lifted = s.bind(sol.group, {"g": sol.embedding(g)})
        assert satisfies(lifted, sol.assignment)


def test_abelian_solver_rejects_singular_and_nonabelian():
    s = parse_system("vars: x\neq: x x^-1").bind(cyclic(2), {})
    with pytest.raises(ValidationError):
        solve_abelian_p_system(s, 2)
    s2 = parse_system("vars: x\neq: x").bind(dihedral(3), {})
    with pytest.raises(ValidationError):
        solve_abelian_p_system(s2, 3)
