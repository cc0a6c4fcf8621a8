import random

import numpy as np
import pytest

import helpers
from bricklab import fixtures, homs, quiver, torsion
from bricklab.errors import BadWitness, BudgetExceeded
from bricklab.quiver import Representation


def test_hom_worked_examples(a2, a2_mods):
    s1, s2, p2 = a2_mods["s1"], a2_mods["s2"], a2_mods["p2"]
    assert homs.hom_dim(s1, s2) == 0
    assert homs.hom_dim(p2, s2) == 1
    for m in (s1, s2, p2):
        assert homs.hom_dim(m, m) >= 1
    # the single map P2 -> S2 kills the socle: cross-checked by enumerating
    # every pair of 1x1 blocks over F_2
    assert helpers.exhaustive_hom_count(p2, s2) == 2


def test_hom_basis_elements_are_intertwiners(cn2, n2):
    rng = random.Random(23)
    for alg in (cn2, n2):
        for _ in range(8):
            m = helpers.sample_rep(alg, rng, max_total=4)
            n = helpers.sample_rep(alg, rng, max_total=4)
            hb = homs.hom_basis(m, n)
            for f in hb.morphisms:
                assert f.is_intertwiner()


def test_hom_dim_matches_exhaustive_enumeration(a2, n2, k2):
    rng = random.Random(31)
    pairs = []
    for alg in (a2, n2, k2):
        for _ in range(5):
            pairs.append(
                (
                    helpers.sample_rep(alg, rng, max_total=4),
                    helpers.sample_rep(alg, rng, max_total=4),
                )
            )
    for m, n in pairs:
        count = helpers.exhaustive_hom_count(m, n)
        assert count == m.algebra.p ** homs.hom_dim(m, n)


def test_end_algebra_worked_examples(a2, a2_mods):
    simple_end = homs.end_algebra(a2_mods["s1"])
    assert simple_end.dim == 1
    assert np.array_equal(simple_end.mult, np.array([[[1]]]))
    ps = quiver.direct_sum([a2_mods["p2"], a2_mods["s2"]])
    E = homs.end_algebra(ps)
    assert E.dim == 3
    nilpotents = [
        c
        for c in (np.array(v) for v in np.eye(3, dtype=np.int64))
        if E.is_nilpotent_element(c)
    ]
    assert len(nilpotents) == 1  # the map P2 -> S2
    m5 = fixtures.module("cn2_m5")
    E5 = homs.end_algebra(m5)
    assert E5.dim == 3
    # commutative: the three shift endomorphisms commute
    for i in range(3):
        for j in range(3):
            x, y = np.eye(3, dtype=np.int64)[i], np.eye(3, dtype=np.int64)[j]
            assert np.array_equal(E5.multiply(x, y), E5.multiply(y, x))


def test_end_algebra_associativity_random(cn2):
    rng = random.Random(37)
    for _ in range(5):
        m = helpers.sample_rep(cn2, rng, max_total=4)
        E = homs.end_algebra(m)
        eye = np.eye(E.dim, dtype=np.int64)
        for _ in range(20):
            x = eye[rng.randrange(E.dim)] if E.dim else np.zeros(0, dtype=np.int64)
            y = np.array([rng.randrange(2) for _ in range(E.dim)])
            z = np.array([rng.randrange(2) for _ in range(E.dim)])
            assert np.array_equal(
                E.multiply(E.multiply(x, y), z), E.multiply(x, E.multiply(y, z))
            )
            assert np.array_equal(E.multiply(E.unit, y), y)
            assert np.array_equal(E.multiply(y, E.unit), y)


def test_trace_submodule_examples(a2, a2_mods):
    s1, s2, p2 = a2_mods["s1"], a2_mods["s2"], a2_mods["p2"]
    assert homs.trace_submodule(p2, p2).is_full()
    assert homs.trace_submodule(s2, p2).total_dim == 0
    tr = homs.trace_submodule(p2, quiver.direct_sum([s1, s2]))
    assert tr.dim_vector == (0, 1)
    assert tr.is_arrow_closed()


def test_reject_submodule_examples(a2, a2_mods):
    s1, s2, p2 = a2_mods["s1"], a2_mods["s2"], a2_mods["p2"]
    assert homs.reject_submodule(p2, a2_mods["zero"]).is_full()
    rej = homs.reject_submodule(p2, s2)
    assert rej.dim_vector == (1, 0)
    assert rej.is_arrow_closed()
    assert homs.reject_submodule(s1, s1).total_dim == 0


def test_trace_and_reject_arrow_closed_random(cn2, node):
    rng = random.Random(41)
    for alg in (cn2, node):
        for _ in range(8):
            m = helpers.sample_rep(alg, rng, max_total=4)
            n = helpers.sample_rep(alg, rng, max_total=4)
            assert homs.trace_submodule(m, n).is_arrow_closed()
            assert homs.reject_submodule(m, n).is_arrow_closed()


def test_find_element_examples(a2, a2_mods):
    s1, s2, p2 = a2_mods["s1"], a2_mods["s2"], a2_mods["p2"]
    ident = homs.find_element(homs.hom_basis(s1, s1), "invertible")
    assert ident is not None and ident.is_invertible()
    assert homs.find_element(homs.hom_basis(p2, s2), "injective") is None
    double = quiver.direct_sum([p2, p2])
    witness = homs.find_element(
        homs.hom_basis(double, double), "neither-invertible-nor-nilpotent"
    )
    assert witness is not None
    assert not witness.is_invertible() and not witness.is_nilpotent()


def test_find_element_returns_lexicographically_first(a2, a2_mods):
    hb = homs.hom_basis(a2_mods["p2"], a2_mods["s2"])
    found = homs.find_element(hb, "surjective")
    all_matches = [
        tuple(c) for c, m in homs.iter_elements(hb) if m.is_surjective()
    ]
    assert tuple(found.blocks["2"].flatten()) is not None
    assert all_matches == sorted(all_matches)
    first = hb.element(np.array(all_matches[0]))
    assert all(
        np.array_equal(first.blocks[v], found.blocks[v]) for v in a2.vertices
    )


def test_find_element_budget(a2, a2_mods):
    big = quiver.direct_sum([a2_mods["s1"]] * 3 + [a2_mods["s2"]] * 3)
    hb = homs.hom_basis(big, big)
    with pytest.raises(BudgetExceeded):
        homs.find_element(hb, "invertible", budget=2**10)


def test_fitting_split_examples(a2, a2_mods):
    s1, s2, p2 = a2_mods["s1"], a2_mods["s2"], a2_mods["p2"]
    both = quiver.direct_sum([s1, s2])
    proj_s1 = quiver.Morphism(both, both, {"1": [[1]], "2": [[0]]})
    (ker_rep, _, _), (img_rep, _, _) = homs.fitting_split(both, proj_s1)
    assert {ker_rep.dim_vector, img_rep.dim_vector} == {(0, 1), (1, 0)}
    ps = quiver.direct_sum([p2, s2])
    idem = homs.find_element(
        homs.hom_basis(ps, ps), "neither-invertible-nor-nilpotent"
    )
    (k, ki, kp), (i, ii, ip) = homs.fitting_split(ps, idem)
    assert k.total_dim + i.total_dim == 3
    assert kp.compose(ki).is_invertible()
    assert ip.compose(ii).is_invertible()
    assert kp.compose(ii).is_zero() and ip.compose(ki).is_zero()
    with pytest.raises(BadWitness):
        nilp = quiver.Morphism(p2, p2, {})  # zero endomorphism is nilpotent
        homs.fitting_split(p2, nilp)
    with pytest.raises(BadWitness):
        homs.fitting_split(p2, quiver.identity_morphism(p2))


def test_decompose_examples(a2, a2_mods):
    s1, s2, p2 = a2_mods["s1"], a2_mods["s2"], a2_mods["p2"]
    single = homs.decompose(s1)
    assert len(single.summands) == 1 and single.summands[0][0].key() == s1.key()
    triple = homs.decompose(quiver.direct_sum([s1, s2, s2]))
    assert len(triple.summands) == 3
    iso_counts = {}
    for rep, _, _ in triple.summands:
        iso_counts[rep.dim_vector] = iso_counts.get(rep.dim_vector, 0) + 1
    assert iso_counts == {(1, 0): 1, (0, 1): 2}
    ps = homs.decompose(quiver.direct_sum([p2, s2]))
    assert sorted(r.dim_vector for r, _, _ in ps.summands) == [(0, 1), (1, 1)]


def test_decompose_witnesses(cn2, n2):
    rng = random.Random(43)
    for alg in (cn2, n2):
        for _ in range(6):
            m = helpers.sample_rep(alg, rng, max_total=5)
            dec = homs.decompose(m)
            # projections and inclusions pair up and no summand splits further
            for idx, (rep, incl, proj) in enumerate(dec.summands):
                assert incl.is_intertwiner() and proj.is_intertwiner()
                assert proj.compose(incl).is_invertible()
                assert homs.is_indecomposable(rep)
                for jdx, (_, incl2, _) in enumerate(dec.summands):
                    if idx != jdx:
                        assert proj.compose(incl2).is_zero()
            # completeness: the summands reassemble M up to isomorphism
            assert homs.iso_test(
                quiver.direct_sum([r for r, _, _ in dec.summands]), m
            )


def test_krull_schmidt_on_shuffled_sums(a2, a2_mods):
    rng = random.Random(47)
    s1, s2, p2 = a2_mods["s1"], a2_mods["s2"], a2_mods["p2"]
    pieces = [s1, s2, p2, s2]
    other = list(pieces)
    rng.shuffle(other)
    m1, m2 = quiver.direct_sum(pieces), quiver.direct_sum(other)
    d1 = homs.decompose(m1)
    d2 = homs.decompose(m2)
    assert len(d1.summands) == len(d2.summands)
    remaining = [r for r, _, _ in d2.summands]
    for rep, _, _ in d1.summands:
        for i, cand in enumerate(remaining):
            if homs.iso_test(rep, cand):
                remaining.pop(i)
                break
        else:
            raise AssertionError("unmatched summand")


def test_iso_test_examples(a2, a2_mods, k2):
    s1, s2, p2 = a2_mods["s1"], a2_mods["s2"], a2_mods["p2"]
    assert homs.iso_test(p2, p2)
    assert not homs.iso_test(s1, s2)
    r0, r1 = fixtures.module("k2_r0"), fixtures.module("k2_r1")
    assert not homs.iso_test(r0, r1)
    rinf = Representation(k2, {"1": 1, "2": 1}, {"a": [[0]], "b": [[1]]})
    assert not homs.iso_test(rinf, r0) and not homs.iso_test(rinf, r1)
    # same iso class under a change of basis
    twisted = Representation(k2, {"1": 1, "2": 1}, {"a": [[1]], "b": [[1]]})
    assert homs.iso_test(twisted, r1)
