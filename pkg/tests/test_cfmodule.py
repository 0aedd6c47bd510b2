from fractions import Fraction

import pytest

from pseudo.cfmodule import (
    BimoduleStructure,
    CLinearMap,
    check_module_axioms,
    chom_left_action,
    chom_right_action,
)
from pseudo.conformal import ASSOC_VARS, PRODUCT_VARS, CElement, free_rank_one
from pseudo.polyring import Poly, parse_poly

ONE = Poly.const(PRODUCT_VARS, 1)
DEL = Poly.var(PRODUCT_VARS, "del")


def rank_one_module(algebra, left_poly=None, right_poly=None):
    left = None if left_poly is None else (
        {} if left_poly.is_zero else {(0, 0): ((0, left_poly),)}
    )
    right = None if right_poly is None else (
        {} if right_poly.is_zero else {(0, 0): ((0, right_poly),)}
    )
    return BimoduleStructure(algebra=algebra, generators=("u",), left=left, right=right)


def test_regular_module_passes(cur1, mat2):
    for alg in (cur1, mat2):
        reg = BimoduleStructure.regular(alg)
        assert reg.generators == alg.generators
        assert reg.has_left and reg.has_right
        assert check_module_axioms(reg) is None


def test_two_sided_unit_module(cur1):
    mod = rank_one_module(cur1, ONE, ONE)
    assert check_module_axioms(mod) is None


def test_left_unit_zero_right_module(cur1):
    mod = rank_one_module(cur1, ONE, Poly.zero(PRODUCT_VARS))
    assert mod.right == {}
    assert check_module_axioms(mod) is None


def test_broken_left_law(cur1):
    mod = rank_one_module(cur1, DEL, ONE)
    cex = check_module_axioms(mod)
    assert cex is not None
    assert cex.law == "left"
    assert cex.triple == (0, 0, 0)
    assert cex.residual[0] == parse_poly("lam*del + del^2 - del", ASSOC_VARS)


def test_absent_sides_skip_their_laws(cur1):
    left_only = rank_one_module(cur1, DEL, None)
    cex = check_module_axioms(left_only)
    assert cex is not None and cex.law == "left"
    right_only = rank_one_module(cur1, None, ONE)
    assert check_module_axioms(right_only) is None
    assert not right_only.has_left


def test_structure_validation(cur1):
    with pytest.raises(ValueError):
        BimoduleStructure(algebra=cur1, generators=("u",),
                          left={(1, 0): ((0, ONE),)}, right=None)
    with pytest.raises(ValueError):
        BimoduleStructure(algebra=cur1, generators=("u",),
                          left={(0, 0): ((0, Poly.const(("del",), 1)),)}, right=None)
    with pytest.raises(ValueError):
        BimoduleStructure(algebra=cur1, generators=("u",), left=None, right=None)


def test_entry_lookup(mat2):
    reg = BimoduleStructure.regular(mat2)
    assert reg.left_entries(0, 1) == ((1, ONE),)
    assert reg.left_entries(0, 2) == ()
    assert reg.right_entries(1, 2) == ((0, ONE),)
    assert reg.structure_degree() == 0


def test_clinear_map_arithmetic():
    f = CLinearMap(("u",), ("v",), {(0, 0): DEL})
    g = CLinearMap(("u",), ("v",), {(0, 0): ONE})
    assert (f + g).entry(0, 0) == DEL + ONE
    assert (f - f).is_zero()
    assert f.scaled(2).entry(0, 0) == 2 * DEL
    lam = Poly.var(PRODUCT_VARS, "lam")
    assert f.del_action().entry(0, 0) == -lam * DEL
    zero = CLinearMap.zero(("u",), ("v",))
    assert zero.is_zero()
    with pytest.raises(ValueError):
        f + CLinearMap(("u", "w"), ("v",), {})
    with pytest.raises(ValueError):
        CLinearMap(("u",), ("v",), {(1, 0): ONE})


def test_chom_left_action_families(cur1, cur1_regular):
    e = CElement.generator(cur1, 0)
    ident = CLinearMap(("e",), ("e",), {(0, 0): ONE})
    fam = chom_left_action(e, ident, cur1_regular)
    assert fam == {(0, 0): Poly.const(ASSOC_VARS, 1)}
    shift = CLinearMap(("e",), ("e",), {(0, 0): DEL})
    fam2 = chom_left_action(e, shift, cur1_regular)
    assert fam2 == {(0, 0): parse_poly("lam + del", ASSOC_VARS)}


def test_chom_right_action_families(cur1, cur1_regular):
    e = CElement.generator(cur1, 0)
    ident = CLinearMap(("e",), ("e",), {(0, 0): ONE})
    fam = chom_right_action(ident, e, cur1_regular)
    assert fam == {(0, 0): Poly.const(ASSOC_VARS, 1)}
    shift = CLinearMap(("e",), ("e",), {(0, 0): DEL})
    fam2 = chom_right_action(shift, e, cur1_regular)
    assert fam2 == {(0, 0): Poly.var(ASSOC_VARS, "del")}


def test_chom_sesquilinear_in_the_algebra_argument(cur1, cur1_regular):
    """(del a) acting on a map scales the family by -lam on the left and
    (lam - mu) on the right, matching the translation rules."""
    dl_elem = CElement.from_coords(cur1, [Poly.var(("del",), "del")])
    e = CElement.generator(cur1, 0)
    f = CLinearMap(("e",), ("e",), {(0, 0): DEL + ONE})
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    base = chom_left_action(e, f, cur1_regular)
    bumped = chom_left_action(dl_elem, f, cur1_regular)
    assert bumped == {k: -lam * v for k, v in base.items()}
    base_r = chom_right_action(f, e, cur1_regular)
    bumped_r = chom_right_action(f, dl_elem, cur1_regular)
    assert bumped_r == {k: (lam - mu) * v for k, v in base_r.items()}


def test_chom_requires_left_action(cur1):
    right_only = rank_one_module(cur1, None, ONE)
    e = CElement.generator(cur1, 0)
    f = CLinearMap(("u",), ("u",), {(0, 0): ONE})
    with pytest.raises(ValueError):
        chom_left_action(e, f, right_only)
    with pytest.raises(ValueError):
        chom_right_action(f, e, right_only)
