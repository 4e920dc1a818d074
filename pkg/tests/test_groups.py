import random

import pytest

from groupeq.config import Config
from groupeq.errors import CapExceeded, ParseError, ValidationError
from groupeq.groups import (FiniteGroup, Homomorphism, abelian_p_basis,
                            affine_group_over_prime_field, all_subgroups,
                            automorphisms, closure, commutator_subgroup,
                            cyclic, cyclic_action, derived_series, dicyclic,
                            dihedral, direct_product, dlog_table,
                            format_group_file, from_generators,
                            generated_subgroup, is_metabelian, is_nilpotent,
                            isomorphic, load_group, normal_subgroups,
                            parse_cycles, perm_compose, prime_factors,
                            quaternion_group, quotient, semidirect_product,
                            sylow_subgroup, trivial_group)

# a 6x6 loop: identity, Latin, two-sided inverses, but (2*2)*4 != 2*(2*4)
NONASSOC_LOOP = [
    [0, 1, 2, 3, 4, 5],
    [1, 0, 3, 2, 5, 4],
    [2, 3, 4, 5, 0, 1],
    [3, 2, 5, 4, 1, 0],
    [4, 5, 0, 1, 3, 2],
    [5, 4, 1, 0, 2, 3],
]


def test_trivial_group_from_file():
    G = load_group("group T order 1\ntable:\n0\n")
    assert G.order == 1 and G.names == ("1",)


def test_nonassociative_table_is_rejected_naming_a_triple():
    table_text = "group L order 6\ntable:\n" + "\n".join(
        " ".join(map(str, row)) for row in NONASSOC_LOOP)
    with pytest.raises(ValidationError, match="associativity"):
        load_group(table_text)


def test_light_checks_reject_broken_tables():
    with pytest.raises(ValidationError):
        FiniteGroup([[0, 1], [1, 1]])           # not Latin
    with pytest.raises(ValidationError):
        FiniteGroup([[1, 0], [0, 1]], None)     # no identity at any index
    with pytest.raises(ValidationError):
        FiniteGroup([[0, 1], [1, 0]], ["1", "1"])   # duplicate names


def test_identity_normalization():
    # identity sits at index 1 here; construction must move it to 0
    table = [[1, 0, 2], [0, 1, 2], [2, 2, 0]]   # broken beyond identity, use C3 relabeled
    c3 = cyclic(3)
    perm = [2, 0, 1]   # new index -> old index
    relabeled = [[perm.index(c3.table[perm[a]][perm[b]]) for b in range(3)]
                 for a in range(3)]
    G = FiniteGroup(relabeled, ["a", "b", "c"])
    assert G.table[0] == (0, 1, 2)
    assert G.names[0] == "1" or G.names[0] == "b"


def test_s3_from_generators():
    G = from_generators(["(1 2)", "(1 2 3)"], name="S3")
    assert G.order == 6
    G.validate()
    subs = all_subgroups(G)
    assert len(subs) == 6
    norms = normal_subgroups(G)
    assert len(norms) == 3
    assert sorted(S.order for S in norms) == [1, 3, 6]


def test_from_generators_trivial_and_c2():
    assert from_generators([]).order == 1
    assert from_generators(["(1 2)"]).order == 2


def test_affine_group_orders():
    assert affine_group_over_prime_field(2).order == 2
    G3 = affine_group_over_prime_field(3)
    assert G3.order == 6
    assert isomorphic(G3, dihedral(3)) is not None
    assert affine_group_over_prime_field(7).order == 42
    with pytest.raises(ValidationError):
        affine_group_over_prime_field(6)


def test_affine7_matches_semidirect_construction():
    aff = affine_group_over_prime_field(7)
    sd = semidirect_product(cyclic(7), cyclic(6),
                            cyclic_action(cyclic(6),
                                          tuple((3 * x) % 7 for x in range(7))))
    assert isomorphic(aff, sd) is not None


def test_affine7_normal_subgroup_orders():
    aff = affine_group_over_prime_field(7)
    assert sorted(S.order for S in normal_subgroups(aff)) == [1, 7, 14, 21, 42]


def test_direct_product_c2_c3_is_c6():
    assert isomorphic(direct_product(cyclic(2), cyclic(3)), cyclic(6)) is not None


def test_cyclic_subgroup_count_prime():
    for p in (2, 3, 5, 7):
        assert len(all_subgroups(cyclic(p))) == 2


def test_semidirect_rejects_non_automorphism():
    with pytest.raises(ValidationError):
        semidirect_product(cyclic(3), cyclic(2),
                           {0: (0, 1, 2), 1: (0, 0, 0)})
    with pytest.raises(ValidationError):
        # inversion twice is not trivial, so this map is no homomorphism
        semidirect_product(cyclic(5), cyclic(4),
                           {0: (0, 1, 2, 3, 4), 1: (0, 4, 3, 2, 1),
                            2: (0, 4, 3, 2, 1), 3: (0, 1, 2, 3, 4)})


def test_derived_series_and_predicates():
    s3 = dihedral(3)
    assert [S.order for S in derived_series(s3)] == [6, 3, 1]
    assert is_metabelian(s3) and not s3.is_abelian
    assert not is_nilpotent(s3)
    aff = affine_group_over_prime_field(7)
    assert commutator_subgroup(aff).order == 7
    assert is_metabelian(aff) and not is_nilpotent(aff)
    for n in (1, 2, 6, 12):
        G = cyclic(n)
        assert G.is_abelian and is_metabelian(G) and is_nilpotent(G)
    assert is_nilpotent(quaternion_group())


def test_commutator_subgroup_contained_in_abelian_quotient_kernels():
    for G in (dihedral(6), affine_group_over_prime_field(5), dicyclic(3)):
        Gp = commutator_subgroup(G)
        for N in normal_subgroups(G):
            Q, _ = quotient(G, N)
            if Q.is_abelian:
                assert set(Gp.elements) <= set(N.elements)


def test_quotients():
    s3 = dihedral(3)
    A3 = generated_subgroup(s3, [e for e in s3.elements()
                                 if s3.element_order(e) == 3][:1])
    Q, proj = quotient(s3, A3)
    assert Q.order == 2
    assert proj.is_surjective() and proj.kernel().elements == A3.elements
    aff = affine_group_over_prime_field(7)
    C7 = [S for S in normal_subgroups(aff) if S.order == 7][0]
    Q7, _ = quotient(aff, C7)
    assert isomorphic(Q7, cyclic(6)) is not None
    triv = generated_subgroup(s3, [])
    Qt, _ = quotient(s3, triv)
    assert isomorphic(Qt, s3) is not None
    with pytest.raises(ValidationError):
        non_normal = [S for S in all_subgroups(s3)
                      if S.order == 2][0]
        quotient(s3, non_normal)


def test_sylow_subgroups():
    for G, p, want in [(dihedral(6), 2, 4), (dihedral(6), 3, 3),
                       (affine_group_over_prime_field(7), 7, 7),
                       (affine_group_over_prime_field(7), 2, 2),
                       (affine_group_over_prime_field(7), 3, 3),
                       (dicyclic(6), 2, 8)]:
        assert sylow_subgroup(G, p).order == want
    with pytest.raises(ValidationError):
        sylow_subgroup(cyclic(6), 5)


def test_isomorphic_basics():
    c4, v4 = cyclic(4), direct_product(cyclic(2), cyclic(2))
    assert isomorphic(c4, v4) is None
    hom = isomorphic(c4, c4)
    assert hom is not None and hom.is_injective()
    # symmetry on a sampled pair
    d6, c12 = dihedral(6), cyclic(12)
    assert (isomorphic(d6, c12) is None) == (isomorphic(c12, d6) is None)
    assert len(automorphisms(direct_product(cyclic(2), cyclic(2)))) == 6


def test_iso_cap():
    with pytest.raises(CapExceeded):
        isomorphic(cyclic(200), cyclic(200), Config(iso_order_cap=128))


def test_subgroup_enumeration_cap():
    with pytest.raises(CapExceeded):
        all_subgroups(cyclic(16), Config(subgroup_order_cap=8))


def test_homomorphism_validation():
    c4 = cyclic(4)
    c2 = cyclic(2)
    proj = Homomorphism(c4, c2, (0, 1, 0, 1))
    assert proj.kernel().order == 2
    with pytest.raises(ValidationError):
        Homomorphism(c4, c2, (0, 1, 1, 0))


def test_abelian_p_basis():
    G = direct_product(cyclic(2), cyclic(4))
    basis = abelian_p_basis(G, 2)
    assert sorted(G.element_order(b) for b in basis) == [2, 4]
    logs = dlog_table(G, basis)
    assert len(logs) == 8
    with pytest.raises(ValidationError):
        abelian_p_basis(dihedral(4), 2)
    with pytest.raises(ValidationError):
        abelian_p_basis(cyclic(6), 2)
    assert abelian_p_basis(trivial_group(), 3) == []


def test_group_file_roundtrip():
    for G in (dihedral(4), dicyclic(3), affine_group_over_prime_field(5)):
        for style in ("generators", "table"):
            G2 = load_group(format_group_file(G, style))
            assert G2.order == G.order
            assert isomorphic(G, G2) is not None


def test_group_file_errors():
    with pytest.raises(ParseError):
        load_group("nonsense\n")
    with pytest.raises(ParseError):
        load_group("group X order 3\ntable:\n0 1\n")
    with pytest.raises(ParseError):
        load_group("group X order 4\ngenerators:\n(1 2)\n")  # order mismatch
    with pytest.raises(ParseError):
        parse_cycles("(1 2")
    with pytest.raises(ParseError):
        parse_cycles("(1 1)")


def test_parse_cycles_forms():
    assert parse_cycles("(1 2 3)(4 5)") == parse_cycles("(1,2,3)(4,5)")
    assert parse_cycles("()") == ()
    p = parse_cycles("(1 2)")
    assert perm_compose(p, p) == (0, 1)


def test_closure_and_random_axioms():
    rng = random.Random(0)
    for G in (dihedral(5), dicyclic(4), affine_group_over_prime_field(5)):
        for _ in range(200):
            a, b, c = (rng.randrange(G.order) for _ in range(3))
            assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
            assert G.mul(a, G.inv(a)) == 0
        sub = closure(G, [1])
        assert len(G.elements()) % len(sub) == 0   # Lagrange


def test_prime_factors():
    assert prime_factors(1) == []
    assert prime_factors(42) == [2, 3, 7]
    assert prime_factors(64) == [2]


def test_bundled_s3_and_affine7_examples():
    from groupeq.catalog import bundled_examples_dir
    from groupeq.groups import (affine_group_over_prime_field, dihedral,
                                isomorphic, load_group_file)
    d = bundled_examples_dir()
    s3 = load_group_file(d / "s3.grp")
    assert s3.order == 6
    assert isomorphic(s3, dihedral(3)) is not None
    aff = load_group_file(d / "affine7.grp")
    assert aff.order == 42
    assert isomorphic(aff, affine_group_over_prime_field(7)) is not None
