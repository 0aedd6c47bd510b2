from fractions import Fraction

import pytest
from hypothesis import given

from conftest import polys
from pseudo.cfmodule import BimoduleStructure, CLinearMap, check_module_axioms
from pseudo.cohomology import Cochain, apply_dn, cochain_variables
from pseudo.conformal import (
    ASSOC_VARS,
    PRODUCT_VARS,
    check_associativity,
    free_rank_one,
)
from pseudo.constructions import (
    AbelianExtensionDatum,
    DeformationDatum,
    ExtensionDatum,
    build_abelian_extension,
    build_extension,
    deform,
    deformation_residuals,
    equivalent_deformations,
    equivalent_extensions,
    extension_residuals,
    find_deformation_witness,
    find_extension_witness,
    gamma_coboundary,
    search_deformation_witness,
    search_extension_witness,
)
from pseudo.polyring import Poly, parse_poly

D1 = cochain_variables(1)
D2 = cochain_variables(2)
DEL = ("del",)


def gamma_of(sub, quotient, text: str):
    poly = parse_poly(text, PRODUCT_VARS)
    if poly.is_zero:
        return {}
    return {0: CLinearMap(quotient.generators, sub.generators, {(0, 0): poly})}


def datum_of(cur1, cur1_regular, text: str) -> ExtensionDatum:
    return ExtensionDatum(
        cur1, cur1_regular, cur1_regular, gamma_of(cur1_regular, cur1_regular, text)
    )


def two_cochain(algebra, module, text: str) -> Cochain:
    return Cochain(2, algebra, module, {(0, 0): (parse_poly(text, D2),)})


def test_extension_datum_validation(cur1, mat2, cur1_regular, mat2_regular):
    with pytest.raises(ValueError):
        ExtensionDatum(cur1, cur1_regular, mat2_regular, {})
    right_only = BimoduleStructure(
        algebra=cur1, generators=("u",), left=None,
        right={(0, 0): ((0, Poly.const(PRODUCT_VARS, 1)),)},
    )
    with pytest.raises(ValueError):
        ExtensionDatum(cur1, right_only, cur1_regular, {})
    bad_shape = {0: CLinearMap(("u", "v"), ("e",), {})}
    with pytest.raises(ValueError):
        ExtensionDatum(cur1, cur1_regular, cur1_regular, bad_shape)


def test_extension_residuals_oracles(cur1, cur1_regular):
    const = datum_of(cur1, cur1_regular, "1")
    residuals = extension_residuals(const)
    assert set(residuals) == {(0, 0, 0, 0)}
    assert residuals[(0, 0, 0, 0)] == Poly.const(ASSOC_VARS, 1)
    flat = datum_of(cur1, cur1_regular, "lam")
    assert extension_residuals(flat) == {}


def test_build_extension_verdicts(cur1, cur1_regular):
    glued, ok = build_extension(datum_of(cur1, cur1_regular, "lam"))
    assert ok
    assert glued.generators == ("m:e", "n:e")
    assert glued.has_left and not glued.has_right
    assert check_module_axioms(glued) is None
    _, bad = build_extension(datum_of(cur1, cur1_regular, "1"))
    assert not bad


def test_build_extension_glued_entries(cur1, cur1_regular):
    glued, _ = build_extension(datum_of(cur1, cur1_regular, "lam"))
    one = Poly.const(PRODUCT_VARS, 1)
    assert glued.left_entries(0, 0) == ((0, one),)
    assert glued.left_entries(0, 1) == (
        (0, Poly.var(PRODUCT_VARS, "lam")), (1, one),
    )


def test_gamma_coboundary_oracles(cur1, cur1_regular):
    b_del = {(0, 0): Poly.var(DEL, "del")}
    out = gamma_coboundary(cur1_regular, cur1_regular, b_del)
    assert set(out) == {0}
    assert out[0].matrix == {(0, 0): Poly.var(PRODUCT_VARS, "lam")}
    b_const = {(0, 0): Poly.const(DEL, 1)}
    trivial = gamma_coboundary(cur1_regular, cur1_regular, b_const)
    assert all(m.is_zero() for m in trivial.values())
    with pytest.raises(ValueError):
        gamma_coboundary(cur1_regular, cur1_regular,
                         {(0, 0): Poly.const(PRODUCT_VARS, 1)})


def test_extension_witness_search(cur1, cur1_regular):
    flat = gamma_of(cur1_regular, cur1_regular, "lam")
    witness = find_extension_witness(cur1_regular, cur1_regular, flat, 2)
    assert witness is not None
    produced = gamma_coboundary(cur1_regular, cur1_regular, witness)
    diff = produced[0] - flat[0]
    assert diff.is_zero()
    stuck = gamma_of(cur1_regular, cur1_regular, "1")
    assert find_extension_witness(cur1_regular, cur1_regular, stuck, 3) is None


def test_equivalent_extensions_with_witness(cur1, cur1_regular):
    flat = datum_of(cur1, cur1_regular, "lam")
    zero = datum_of(cur1, cur1_regular, "0")
    b_del = {(0, 0): Poly.var(DEL, "del")}
    assert equivalent_extensions(flat, zero, b_del)
    shifted = {(0, 0): parse_poly("del + 5", DEL)}
    assert equivalent_extensions(flat, zero, shifted)
    wrong = {(0, 0): parse_poly("2*del", DEL)}
    assert not equivalent_extensions(flat, zero, wrong)
    found = search_extension_witness(flat, zero, 2)
    assert found is not None and equivalent_extensions(flat, zero, found)
    stuck = datum_of(cur1, cur1_regular, "1")
    assert search_extension_witness(stuck, zero, 3) is None


def test_abelian_extension_datum_validation(cur1, cur1_regular):
    with pytest.raises(ValueError):
        AbelianExtensionDatum(
            cur1, cur1_regular,
            Cochain(1, cur1, cur1_regular, {(0,): (Poly.var(D1, "del"),)}),
        )
    left_only = BimoduleStructure(
        algebra=cur1, generators=("u",),
        left={(0, 0): ((0, Poly.const(PRODUCT_VARS, 1)),)}, right=None,
    )
    with pytest.raises(ValueError):
        AbelianExtensionDatum(cur1, left_only, Cochain.zero(cur1, left_only, 2))
    mutant = free_rank_one(Poly.var(PRODUCT_VARS, "lam"))
    reg = BimoduleStructure.regular(mutant)
    with pytest.raises(ValueError):
        AbelianExtensionDatum(mutant, reg, Cochain.zero(mutant, reg, 2))


def test_build_abelian_extension_flat(cur1, cur1_regular):
    phi = two_cochain(cur1, cur1_regular, "1")
    assert apply_dn(phi).is_zero()
    extension, ok = build_abelian_extension(AbelianExtensionDatum(cur1, cur1_regular, phi))
    assert ok
    assert extension.generators == ("a:e", "m:e")
    assert check_associativity(extension) is None
    one = Poly.const(PRODUCT_VARS, 1)
    assert extension.products(0, 0) == ((0, one), (1, one))
    assert extension.products(0, 1) == ((1, one),)
    assert extension.products(1, 0) == ((1, one),)
    assert extension.products(1, 1) == ()


def test_build_abelian_extension_obstructed(cur1, cur1_regular):
    phi = two_cochain(cur1, cur1_regular, "lam1")
    assert not apply_dn(phi).is_zero()
    extension, ok = build_abelian_extension(
        AbelianExtensionDatum(cur1, cur1_regular, phi)
    )
    assert not ok
    assert check_associativity(extension) is not None


def test_deformation_datum_validation(cur1, cur1_regular):
    wrong_degree = Cochain(1, cur1, cur1_regular, {(0,): (Poly.var(D1, "del"),)})
    with pytest.raises(ValueError):
        DeformationDatum(cur1, wrong_degree)
    other = BimoduleStructure(
        algebra=cur1, generators=("u",),
        left={(0, 0): ((0, Poly.const(PRODUCT_VARS, 1)),)},
        right={(0, 0): ((0, Poly.const(PRODUCT_VARS, 1)),)},
    )
    with pytest.raises(ValueError):
        DeformationDatum(cur1, Cochain.zero(cur1, other, 2))


def test_deformation_residual_oracles(cur1, cur1_regular):
    flat = DeformationDatum(cur1, two_cochain(cur1, cur1_regular, "1"))
    assert deformation_residuals(flat) == {}
    residuals, ok = deform(flat)
    assert ok and residuals == {}
    bent = DeformationDatum(cur1, two_cochain(cur1, cur1_regular, "lam1"))
    residuals, ok = deform(bent)
    assert not ok
    assert set(residuals) == {(0, 0, 0, 0)}
    assert residuals[(0, 0, 0, 0)] == Poly.var(ASSOC_VARS, "lam")


@given(polys(D2, max_degree=2, max_terms=3))
def test_deformation_residual_is_minus_the_differential(q):
    algebra = free_rank_one()
    module = BimoduleStructure.regular(algebra)
    cocycle = Cochain(2, algebra, module, {(0, 0): (q,)})
    datum = DeformationDatum(algebra, cocycle)
    residuals = deformation_residuals(datum)
    image = apply_dn(cocycle)
    collected = {}
    for (a, b, c), vec in image.values.items():
        for s, poly in enumerate(vec):
            if not poly.is_zero:
                collected[(a, b, c, s)] = -poly.rename_vars(
                    {"lam1": "lam", "lam2": "mu"}, ASSOC_VARS
                )
    assert residuals == collected


def test_deformation_witness_search(cur1, cur1_regular):
    phi = Cochain(1, cur1, cur1_regular, {(0,): (parse_poly("del^2", D1),)})
    target = apply_dn(phi)
    witness = find_deformation_witness(cur1, target, 2)
    assert witness is not None
    assert (apply_dn(witness) - target).is_zero()
    obstructed = two_cochain(cur1, cur1_regular, "lam1")
    assert find_deformation_witness(cur1, obstructed, 4) is None


def test_equivalent_deformations_with_witness(cur1, cur1_regular):
    g = Cochain(1, cur1, cur1_regular, {(0,): (parse_poly("del^2 - del", D1),)})
    f = apply_dn(g)
    first = DeformationDatum(cur1, f)
    second = DeformationDatum(cur1, Cochain.zero(cur1, cur1_regular, 2))
    assert equivalent_deformations(first, second, g)
    assert equivalent_deformations(second, first, g.scaled(-1))
    assert not equivalent_deformations(first, second, g.scaled(2))
    found = search_deformation_witness(first, second, 2)
    assert found is not None and equivalent_deformations(first, second, found)


def test_search_deformation_witness_none_when_inequivalent(cur1, cur1_regular):
    bent = DeformationDatum(cur1, two_cochain(cur1, cur1_regular, "lam1"))
    flat = DeformationDatum(cur1, Cochain.zero(cur1, cur1_regular, 2))
    assert search_deformation_witness(bent, flat, 3) is None
