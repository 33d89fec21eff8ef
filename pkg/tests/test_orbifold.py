"""The deformed bracket, the deformed operators, and the ring comparison."""

import pytest

from hilbfock.errors import EngineError, ModelError, UnknownCoefficientsError
from hilbfock.fock import FockSpace
from hilbfock.orbifold import (OrbifoldParam, orb_class, orbifold_engine,
                               theta_map, verify_marker_vanishing,
                               verify_orb_n_independence,
                               verify_ring_isomorphism)
from hilbfock.partitions import PartitionFunction
from hilbfock.rational import Q
from hilbfock.ring import RingEngine
from hilbfock.vertex import chern_operator, orbifold_operator


def test_param():
    p = OrbifoldParam(-1)
    assert p.t == Q(-1)
    assert OrbifoldParam(Q(2, 3)).t == Q(8, 27)
    with pytest.raises(EngineError):
        OrbifoldParam(0)


def test_deformed_bracket(models):
    model = models("toy_b2_1")
    h = model.basis_class(1)
    for s in (Q(-1), Q(1), Q(5, 2)):
        f = FockSpace(model, s)
        v = f.apply_heisenberg(-1, h, f.vacuum())
        # single contraction: s * 1 * int(h.h)
        assert f.apply_heisenberg(1, h, v) == f.vacuum().scaled(s)
    # s = -1 agrees with the undeformed engine on a composite input
    fh = FockSpace(model)
    fo = FockSpace(model, Q(-1))
    v = fh.unit(3)
    for idx in (1, -2, 2):
        assert fh.apply_heisenberg(idx, h, v) == fo.apply_heisenberg(idx, h, v)


def test_operator_has_no_canonical_terms(models):
    c2 = models("c2")
    for k in range(3):
        for c in range(c2.dim):
            op = orbifold_operator(c2, k, c2.basis_class(c))
            assert not op.has_unknown_terms
    # on a K-trivial model both operators are termwise identical
    k3 = models("k3_like")
    for k in range(3):
        a = chern_operator(k3, k, k3.basis_class(0))
        b = orbifold_operator(k3, k, k3.basis_class(0))
        assert [(f.ell, f.tag, f.cls) for f in a.families] == \
            [(f.ell, f.tag, f.cls) for f in b.families]


def test_pullback_compatibility(models):
    """Reducing the deformed class of an ambient argument equals the class of
    the reduced argument."""
    cot = models("cotangent_g1")
    f = FockSpace(cot, Q(-1))
    mixed = cot.basis_class(cot.index_of("f")) + cot.basis_class(cot.index_of("s"))
    for k in range(3):
        upstairs = f.reduce(orb_class(f, k, mixed, 3))
        downstairs = f.reduce(orb_class(f, k, cot.reduce_class(mixed), 3))
        assert upstairs == downstairs, k


def test_single_deformed_operator_helper(models):
    model = models("toy_b2_1")
    h = model.basis_class(1)
    param = OrbifoldParam(Q(2))
    f = FockSpace(model, param.s)
    v = f.apply_heisenberg(-1, h, f.vacuum())
    from hilbfock.orbifold import orb_apply_heisenberg
    assert orb_apply_heisenberg(param, 1, h, v, model) == f.vacuum().scaled(2)


def test_theta_map(models):
    model = models("toy_b2_1")
    f = FockSpace(model, Q(-1))
    assert theta_map(f.vacuum()) == f.vacuum()
    v = f.apply_heisenberg(-2, model.basis_class(1), f.vacuum())
    assert theta_map(v) == v
    w = v + f.unit(2).scaled(3) - f.apply_heisenberg(-2, model.basis_class(0),
                                                     f.vacuum())
    assert theta_map(w) == w


def test_level_one_is_surface_and_s_independent(models):
    ale = models("ale_2")
    t1 = orbifold_engine(ale, Q(1)).structure_constants(1)
    t2 = orbifold_engine(ale, Q(-1)).structure_constants(1)
    t3 = orbifold_engine(ale, Q(3, 5)).structure_constants(1)
    assert t1.entries == t2.entries == t3.entries
    hil = RingEngine(ale).structure_constants(1)
    assert t1.entries == hil.entries


def test_bracket_scaling(models):
    model = models("ale_2")
    h = model.basis_class(1)
    v1 = FockSpace(model, Q(1))
    v5 = FockSpace(model, Q(5))
    base = v1.apply_heisenberg(-2, h, v1.vacuum())
    a = v1.apply_heisenberg(2, h, base)
    b = v5.apply_heisenberg(2, h, base)
    assert b == a.scaled(5)


def test_deformed_tables_differ_away_from_minus_one(models):
    """The deformation is not vacuous: on the A_2 model the square of the
    shifted unit symbol scales like 1/s."""
    ale = models("ale_2")
    rho = PartitionFunction({0: (1,)})
    p_minus = orbifold_engine(ale, Q(-1)).b_product(rho, rho, 2)
    p_plus = orbifold_engine(ale, Q(1)).b_product(rho, rho, 2)
    p_two = orbifold_engine(ale, Q(2)).b_product(rho, rho, 2)
    assert p_minus != p_plus
    assert p_two == {nu: c * Q(-1, 2) for nu, c in p_minus.items()}


def test_ring_isomorphism_c2(models):
    rep = verify_ring_isomorphism(models("c2"), 2)
    assert rep["ok"], rep["witnesses"]
    rep = verify_ring_isomorphism(models("c2"), 3)
    assert rep["ok"]


def test_ring_isomorphism_projective_k_trivial(models):
    for n in (2, 3):
        rep = verify_ring_isomorphism(models("k3_like"), n)
        assert rep["ok"], (n, rep["witnesses"])


def test_deformed_operators_supercommute(models):
    """The deformed degree-shift operators super-commute as multiplication
    operators, at a generic parameter value."""
    model = models("odd_toy")
    f = FockSpace(model, Q(5, 3))
    from hilbfock.vertex import apply_operator
    vecs = [f.unit(3), f.apply_heisenberg(-2, model.basis_class(2), f.unit(1)),
            f.apply_heisenberg(-1, model.basis_class(1), f.unit(2))]
    for k1 in range(2):
        for k2 in range(2):
            for c1 in range(model.dim):
                for c2 in range(model.dim):
                    op1 = orbifold_operator(model, k1, model.basis_class(c1))
                    op2 = orbifold_operator(model, k2, model.basis_class(c2))
                    sign = (-1) ** (model.parities[c1] * model.parities[c2])
                    for v in vecs:
                        ab = apply_operator(f, op1, apply_operator(f, op2, v))
                        ba = apply_operator(f, op2, apply_operator(f, op1, v))
                        assert ab == ba.scaled(sign)


def test_ring_isomorphism_gate(models):
    with pytest.raises(UnknownCoefficientsError):
        verify_ring_isomorphism(models("p2"), 2)


def test_orb_n_independence(models):
    rep = verify_orb_n_independence(models("ale_2"), [2, 3], s=Q(1))
    assert rep["ok"], rep["witnesses"]
    rep = verify_orb_n_independence(models("c2"), [2, 3, 4], s=Q(-1))
    assert rep["ok"]
    with pytest.raises(ModelError):
        verify_orb_n_independence(models("k3_like"), [2, 3])


def test_marker_vanishing(models):
    rep = verify_marker_vanishing(models("c2"), 3)
    assert rep["ok"] and rep["terms_checked"] > 0
    rep = verify_marker_vanishing(models("ale_2"), 3)
    assert rep["ok"] and rep["terms_checked"] == 0   # K = 0: nothing to check
    with pytest.raises(UnknownCoefficientsError):
        verify_marker_vanishing(models("cotangent_g1").with_ideal(
            [models("cotangent_g1").point], suffix="tiny"), 2)
