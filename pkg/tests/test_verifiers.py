import random

import pytest

from groupeq.algebra import AlgebraElement, IntegralGroupSpec
from groupeq.catalog import bundled_catalog_dir
from groupeq.config import Config
from groupeq.equations import parse_system
from groupeq.errors import CapExceeded, ValidationError
from groupeq.groups import (affine_group_over_prime_field, cyclic, dicyclic,
                            dihedral, quaternion_group)
from groupeq.verifiers import (abelian_by_abelian_p_witness, audit_catalog,
                               brute_force_solve, classify_group,
                               counterexample_build, counterexample_equation,
                               counterexample_text, p_group_equation_check,
                               pq_structure_check, obstruction_check,
                               obstruction_s_element, random_unimodular_equation,
                               verify_witness)
from groupeq.words import exponent_sum, parse_word


def build_a4():
    from groupeq.catalog import build_all
    return dict(build_all((12,)))["A4"]


def test_a4_witness():
    w, examined = abelian_by_abelian_p_witness(build_a4())
    assert w is not None
    assert w.subgroup.order == 4 and w.prime == 3
    assert examined >= 1


def test_affine7_has_no_witness():
    aff = affine_group_over_prime_field(7)
    w, examined = abelian_by_abelian_p_witness(aff)
    assert w is None
    assert examined == 5          # certified over all normal subgroups


def test_abelian_groups_witness_themselves():
    for G, p in [(cyclic(6), 2), (cyclic(9), 3), (cyclic(1), 2)]:
        w, _ = abelian_by_abelian_p_witness(G)
        assert w.subgroup.order == G.order and w.prime == p
        assert verify_witness(G, w)


def test_witness_reverification_catches_bad_pairs():
    from groupeq.groups import generated_subgroup
    from groupeq.verifiers import Witness
    s3 = dihedral(3)
    rot = [e for e in s3.elements() if s3.element_order(e) == 3][0]
    A3 = generated_subgroup(s3, [rot])
    assert verify_witness(s3, Witness(A3, 2))
    assert not verify_witness(s3, Witness(A3, 3))   # quotient C2, not a 3-group
    refl = [e for e in s3.elements() if s3.element_order(e) == 2][0]
    C2 = generated_subgroup(s3, [refl])
    assert not verify_witness(s3, Witness(C2, 3))   # not normal


def test_pq_structure():
    rep = pq_structure_check(dihedral(3))
    assert (rep.p, rep.q) == (2, 3)
    assert rep.witness.subgroup.order == 3 and rep.witness.prime == 2
    rep15 = pq_structure_check(cyclic(15))
    assert rep15.witness.subgroup.order == 5 and rep15.witness.prime == 3
    with pytest.raises(ValidationError):
        pq_structure_check(cyclic(8))
    with pytest.raises(ValidationError):
        pq_structure_check(cyclic(12))


def test_p_group_check_trivial_case():
    c3 = cyclic(3)
    s = parse_system("vars: x\ncoeffs: g\neq: x g").bind(c3, {"g": 1})
    res = brute_force_solve(s)
    assert res.solution == {"x": 2}


def test_p_group_check_dihedral_and_quaternion():
    for G, seed in [(dihedral(4), 0), (quaternion_group(), 1)]:
        rep = p_group_equation_check(G, trials=100, seed=seed)
        assert rep.all_solved, rep
    with pytest.raises(ValidationError):
        p_group_equation_check(cyclic(6))


def test_random_unimodular_equation_shape():
    rng = random.Random(5)
    G = dihedral(4)
    for _ in range(50):
        system = random_unimodular_equation(G, rng)
        assert abs(exponent_sum(system.words[0], "x")) == 1


def test_counterexample_build_2_3():
    inst = counterexample_build(2, 3)
    assert (inst.n, inst.m) == (2, -1)
    assert inst.n * 2 + inst.m * 3 == 1
    assert inst.order == 384 and inst.realized
    assert inst.classification.unimodular
    assert exponent_sum(inst.system.words[0], "x") == 1
    # the textual form parses to the same word
    text = counterexample_text(2, 3, inst.n, inst.m)
    parsed = parse_word(text, ["x"], ["a", "b", "c"])
    assert parsed == counterexample_equation(2, 3, inst.n, inst.m)


def test_counterexample_roles_swapped():
    inst = counterexample_build(3, 2)
    assert inst.n * 3 + inst.m * 2 == 1
    assert inst.classification.unimodular
    rep = obstruction_check(inst)
    assert rep.confirmed


def test_counterexample_rejects_bad_primes():
    with pytest.raises(ValidationError):
        counterexample_build(2, 2)
    with pytest.raises(ValidationError):
        counterexample_build(4, 3)


def test_counterexample_cap_and_symbolic():
    with pytest.raises(CapExceeded):
        counterexample_build(2, 5)
    inst = counterexample_build(2, 5, symbolic=True)
    rep = obstruction_check(inst)
    assert rep.ring_identity_holds
    assert rep.group_inequality_holds is None and rep.confirmed is None


def test_obstruction_2_3_confirmed():
    inst = counterexample_build(2, 3)
    rep = obstruction_check(inst)
    assert rep.ring_identity_holds
    assert not rep.s_is_zero
    assert rep.group_inequality_holds
    assert rep.confirmed
    # difference expands to the zero element exactly
    spec = IntegralGroupSpec((2, 3), 0)
    one = AlgebraElement.one(spec)
    a = AlgebraElement.monomial(spec, (1, 0))
    b = AlgebraElement.monomial(spec, (0, 1))
    S = obstruction_s_element(2, 3, inst.n, inst.m)
    assert (S * (one + a * b) - S * (a + b)).is_zero()


def test_obstruction_ring_identity_many_prime_pairs():
    for p, q in [(2, 3), (3, 2), (2, 5), (5, 2), (3, 5), (5, 7), (2, 7)]:
        n = pow(p, -1, q)
        m = (1 - n * p) // q
        spec = IntegralGroupSpec((p, q), 0)
        one = AlgebraElement.one(spec)
        a = AlgebraElement.monomial(spec, (1, 0))
        b = AlgebraElement.monomial(spec, (0, 1))
        S = obstruction_s_element(p, q, n, m)
        assert (S * (one + a * b)) == (S * (a + b)), (p, q)
        assert not S.is_zero()


def test_obstruction_s_zero_is_flagged_anomalous():
    from dataclasses import replace
    inst = counterexample_build(2, 3)
    forced = replace(inst, n=0, m=0)
    rep = obstruction_check(forced)
    assert rep.s_is_zero
    assert rep.ring_identity_holds          # trivially
    assert rep.group_inequality_holds       # group part still computed


def test_counterexample_equation_unsolvable_in_G_itself():
    # G is metabelian, so the equation cannot have a solution even in G
    inst = counterexample_build(2, 3)
    res = brute_force_solve(inst.system)
    assert res.solution is None and res.exhaustive
    assert res.searched == 384


def test_brute_force_examples_and_determinism():
    c3 = cyclic(3)
    s = parse_system("vars: x\ncoeffs: g\neq: x^2 = g").bind(c3, {"g": 1})
    res = brute_force_solve(s)
    assert res.solution == {"x": 2}
    res_desc = brute_force_solve(s, descending=True)
    assert res_desc.solution == {"x": 2}    # unique solution
    res_jobs = brute_force_solve(s, Config(jobs=4))
    assert res_jobs == res

    # x*g=1 over a nonabelian group
    d4 = dihedral(4)
    s2 = parse_system("vars: x\ncoeffs: g\neq: x g").bind(d4, {"g": 5})
    r2 = brute_force_solve(s2)
    assert r2.solution == {"x": d4.inverse[5]}

    # lexicographically least among several solutions, asc vs desc agree on
    # solvability
    s3 = parse_system("vars: x y\neq: x y").bind(cyclic(4), {})
    asc = brute_force_solve(s3)
    desc = brute_force_solve(s3, descending=True)
    assert asc.solution == {"x": 0, "y": 0}
    assert desc.solution == {"x": 3, "y": 1}
    assert (asc.solution is None) == (desc.solution is None)


def test_brute_force_cap():
    s = parse_system("vars: x y z\neq: x y z").bind(cyclic(12), {})
    with pytest.raises(CapExceeded):
        brute_force_solve(s, Config(brute_force_cap=100))


def test_classify_group_notes():
    rep = classify_group(dicyclic(6))
    assert rep.metabelian and rep.witness is not None
    from groupeq.catalog import build_all
    s4 = dict(build_all((24,)))["S4"]
    rep4 = classify_group(s4)
    assert not rep4.metabelian and rep4.witness is None
    assert "not metabelian" in rep4.note


def test_audit_catalog_order20():
    report = audit_catalog(bundled_catalog_dir(), orders=(20,))
    assert len(report.entries) == 5
    for e in report.entries:
        assert e.report is not None and e.report.metabelian
        assert e.report.witness is not None
        assert e.report.witness.prime == 2
    assert report.all_witnessed and report.counts_ok and report.pairwise_distinct


def test_audit_catalog_order42_exception():
    report = audit_catalog(bundled_catalog_dir(), orders=(42,))
    assert report.all_witnessed          # 42 is not an audited order
    assert report.expected_without_witness == ("F42 (order 42)",)


def test_audit_collects_load_errors(tmp_path):
    (tmp_path / "bad.grp").write_text("group X order 2\ntable:\n0 1\n1 1\n")
    (tmp_path / "good.grp").write_text("group C2 order 2\ntable:\n0 1\n1 0\n")
    report = audit_catalog(tmp_path)
    errs = [e for e in report.entries if e.error]
    assert len(errs) == 1 and errs[0].file == "bad.grp"
    assert len([e for e in report.entries if e.report]) == 1


def test_audit_empty_directory(tmp_path):
    report = audit_catalog(tmp_path)
    assert report.entries == ()
    assert report.all_witnessed
