"""Extensions and first-order deformations built from cocycle data.

Three constructions, each paired with a direct verification route so the
verdict never rests on a single code path:

* module extensions 0 -> M -> E -> N -> 0 glued by a family of maps
  gamma(a): N -> M, one conformal linear map per algebra generator;
* abelian algebra extensions A (+) M twisted by a 2-cochain;
* first-order deformations of the product by a 2-cochain over the
  algebra acting on itself.

In every case the datum is accepted or rejected by an explicit residual
system, and the assembled object is independently re-checked with the
axiom checkers.  Disagreement between the two routes raises
ComplexInconsistencyError, since it can only come from a bug here.

Conventions for the residuals (all polynomials in del, lam, mu): lam is
the outer action variable and mu the total one, so the inner action
carries mu - lam.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .cfmodule import BimoduleStructure, CLinearMap, check_module_axioms
from .conformal import (
    ASSOC_VARS,
    PRODUCT_VARS,
    ConformalAlgebra,
    check_associativity,
)
from .cohomology import (
    Cochain,
    CochainIndex,
    ComplexInconsistencyError,
    apply_dn,
    differential_matrix,
    structure_degree_bound,
)
from .exactla import QMatrix, solve
from .polyring import Poly

DEL_ONLY = ("del",)


def _left_law_holds(module: BimoduleStructure) -> bool:
    """Check just the left module law, ignoring any right table."""
    probe = BimoduleStructure(
        algebra=module.algebra,
        generators=module.generators,
        left=dict(module.left or {}),
        right=None,
    )
    return check_module_axioms(probe) is None


@dataclass(frozen=True)
class ExtensionDatum:
    """Gluing data for a left-module extension of ``quotient`` by ``sub``.

    ``gamma[i]`` is the conformal linear map quotient -> sub describing the
    twisted part of the i-th generator's action; omitted indices are zero.
    """

    algebra: ConformalAlgebra
    sub: BimoduleStructure
    quotient: BimoduleStructure
    gamma: Mapping[int, CLinearMap]

    def __post_init__(self):
        for name, module in (("sub", self.sub), ("quotient", self.quotient)):
            if module.algebra != self.algebra:
                raise ValueError(f"{name} module is over a different algebra")
            if not module.has_left:
                raise ValueError(f"{name} module needs a left action")
            if not _left_law_holds(module):
                raise ValueError(f"{name} module violates its own left law")
        clean: dict[int, CLinearMap] = {}
        for i, gmap in self.gamma.items():
            i = int(i)
            if not (0 <= i < self.algebra.rank):
                raise ValueError(f"gamma index {i} out of range")
            if gmap.source != self.quotient.generators:
                raise ValueError("gamma source must be the quotient module")
            if gmap.target != self.sub.generators:
                raise ValueError("gamma target must be the sub module")
            if not gmap.is_zero():
                clean[i] = gmap
        object.__setattr__(self, "gamma", clean)

    def gamma_entry(self, i: int, t: int, s: int) -> Poly:
        gmap = self.gamma.get(i)
        if gmap is None:
            return Poly.zero(PRODUCT_VARS)
        return gmap.entry(t, s)


def extension_residuals(datum: ExtensionDatum) -> dict[tuple[int, int, int, int], Poly]:
    """Nonzero obstructions to the glued action satisfying the left law.

    Key (i, j, t, s): generators a_i (outer, variable lam) and a_j (inner,
    variable mu - lam) acting on quotient generator t, read off the
    coefficient of sub generator s.  Empty dict means gamma is a cocycle.
    """
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    dl = Poly.var(ASSOC_VARS, "del")
    algebra = datum.algebra
    sub, quo = datum.sub, datum.quotient
    out: dict[tuple[int, int, int, int], Poly] = {}
    for i in range(algebra.rank):
        for j in range(algebra.rank):
            for t in range(quo.rank):
                acc = [Poly.zero(ASSOC_VARS) for _ in range(sub.rank)]
                # a_i acts on the sub-valued part of a_j's twisted action
                for k in range(sub.rank):
                    g_jtk = datum.gamma_entry(j, t, k)
                    if g_jtk.is_zero:
                        continue
                    inner = g_jtk.substitute({"lam": mu - lam, "del": lam + dl})
                    for s, l_iks in sub.left_entries(i, k):
                        acc[s] = acc[s] + inner * l_iks.substitute(
                            {"lam": lam, "del": dl}
                        )
                # the twisted part of a_i's action on a_j . t inside the quotient
                for k, l_jtk in quo.left_entries(j, t):
                    inner = l_jtk.substitute({"lam": mu - lam, "del": lam + dl})
                    for s in range(sub.rank):
                        g_iks = datum.gamma_entry(i, k, s)
                        if g_iks.is_zero:
                            continue
                        acc[s] = acc[s] + inner * g_iks.substitute(
                            {"lam": lam, "del": dl}
                        )
                # minus the twisted action of the product a_i lam a_j
                for l, p_ijl in algebra.products(i, j):
                    outer = p_ijl.substitute({"lam": lam, "del": -mu})
                    for s in range(sub.rank):
                        g_lts = datum.gamma_entry(l, t, s)
                        if g_lts.is_zero:
                            continue
                        acc[s] = acc[s] - outer * g_lts.substitute(
                            {"lam": mu, "del": dl}
                        )
                for s, poly in enumerate(acc):
                    if not poly.is_zero:
                        out[(i, j, t, s)] = poly
    return out


def build_extension(datum: ExtensionDatum) -> tuple[BimoduleStructure, bool]:
    """Assemble E = sub (+) quotient with the glued left action.

    Returns the module and whether it satisfies the left law.  The verdict
    is computed twice, from the residual system and from the axiom checker
    on E itself; disagreement raises ComplexInconsistencyError.
    """
    sub, quo = datum.sub, datum.quotient
    r_sub = sub.rank
    names = tuple(f"m:{g}" for g in sub.generators) + tuple(
        f"n:{g}" for g in quo.generators
    )
    left: dict[tuple[int, int], list[tuple[int, Poly]]] = {}
    for i in range(datum.algebra.rank):
        for s in range(r_sub):
            entries = [(k, poly) for k, poly in sub.left_entries(i, s)]
            if entries:
                left[(i, s)] = entries
        for t in range(quo.rank):
            entries = []
            for s in range(r_sub):
                g = datum.gamma_entry(i, t, s)
                if not g.is_zero:
                    entries.append((s, g))
            entries.extend(
                (r_sub + k, poly) for k, poly in quo.left_entries(i, t)
            )
            if entries:
                left[(i, r_sub + t)] = entries
    extension = BimoduleStructure(
        algebra=datum.algebra, generators=names, left=left, right=None
    )
    residual_verdict = not extension_residuals(datum)
    checker_verdict = check_module_axioms(extension) is None
    if residual_verdict != checker_verdict:
        raise ComplexInconsistencyError(
            "extension residuals disagree with the axiom checker on E"
        )
    return extension, checker_verdict


def gamma_coboundary(
    sub: BimoduleStructure,
    quotient: BimoduleStructure,
    b_matrix: Mapping[tuple[int, int], Poly],
) -> dict[int, CLinearMap]:
    """Trivial gluing data generated by a del-equivariant map B: quotient -> sub.

    ``b_matrix[(t, k)]`` is the coefficient of sub generator k in B of
    quotient generator t, a polynomial in del alone.  The result is the
    family a |-> a . B(n) - B(a . n).
    """
    lam = Poly.var(PRODUCT_VARS, "lam")
    dl = Poly.var(PRODUCT_VARS, "del")
    entries_b: dict[tuple[int, int], Poly] = {}
    for (t, k), poly in b_matrix.items():
        if not (0 <= t < quotient.rank and 0 <= k < sub.rank):
            raise ValueError(f"B index {(t, k)} out of range")
        if poly.variables != DEL_ONLY:
            raise ValueError("B entries must be polynomials in del alone")
        if not poly.is_zero:
            entries_b[(t, k)] = poly

    def b_entry(t: int, k: int) -> Poly:
        return entries_b.get((t, k), Poly.zero(DEL_ONLY))

    out: dict[int, CLinearMap] = {}
    for i in range(sub.algebra.rank):
        matrix: dict[tuple[int, int], Poly] = {}
        for t in range(quotient.rank):
            for s in range(sub.rank):
                acc = Poly.zero(PRODUCT_VARS)
                for k in range(sub.rank):
                    b_tk = b_entry(t, k)
                    if b_tk.is_zero:
                        continue
                    shifted = b_tk.substitute({"del": lam + dl})
                    for s2, l_iks in sub.left_entries(i, k):
                        if s2 == s:
                            acc = acc + shifted * l_iks
                for k, l_itk in quotient.left_entries(i, t):
                    b_ks = b_entry(k, s)
                    if not b_ks.is_zero:
                        acc = acc - l_itk * b_ks.embed(PRODUCT_VARS)
                if not acc.is_zero:
                    matrix[(t, s)] = acc
        gmap = CLinearMap(quotient.generators, sub.generators, matrix)
        if not gmap.is_zero():
            out[i] = gmap
    return out


def find_extension_witness(
    sub: BimoduleStructure,
    quotient: BimoduleStructure,
    gamma_diff: Mapping[int, CLinearMap],
    max_degree: int,
) -> Optional[dict[tuple[int, int], Poly]]:
    """Search for B with deg <= max_degree whose coboundary equals gamma_diff.

    The search is an exact linear solve over the coefficients of B; None
    means no witness exists within the degree bound (a larger bound may
    still succeed).
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    unknowns = [
        (t, k, e)
        for t in range(quotient.rank)
        for k in range(sub.rank)
        for e in range(max_degree + 1)
    ]
    columns: list[dict[tuple[int, int, int, tuple[int, ...]], Fraction]] = []
    for t, k, e in unknowns:
        basis_b = {(t, k): Poly.monomial(DEL_ONLY, (e,), 1)}
        family = gamma_coboundary(sub, quotient, basis_b)
        col: dict[tuple[int, int, int, tuple[int, ...]], Fraction] = {}
        for i, gmap in family.items():
            for (tt, ss), poly in gmap.matrix.items():
                for exp, coeff in poly.terms.items():
                    col[(i, tt, ss, exp)] = coeff
        columns.append(col)
    target: dict[tuple[int, int, int, tuple[int, ...]], Fraction] = {}
    for i, gmap in gamma_diff.items():
        if gmap.is_zero():
            continue
        for (tt, ss), poly in gmap.matrix.items():
            for exp, coeff in poly.terms.items():
                target[(i, tt, ss, exp)] = coeff
    positions = sorted(set(target) | {key for col in columns for key in col})
    index = {key: row for row, key in enumerate(positions)}
    rows: list[dict[int, Fraction]] = [dict() for _ in positions]
    for c, col in enumerate(columns):
        for key, coeff in col.items():
            rows[index[key]][c] = coeff
    matrix = QMatrix(len(positions), len(unknowns), rows)
    rhs = [target.get(key, Fraction(0)) for key in positions]
    coords = solve(matrix, rhs)
    if coords is None:
        return None
    witness: dict[tuple[int, int], Poly] = {}
    for (t, k, e), c in zip(unknowns, coords):
        if not c:
            continue
        key = (t, k)
        mono = Poly.monomial(DEL_ONLY, (e,), c)
        witness[key] = witness.get(key, Poly.zero(DEL_ONLY)) + mono
    produced = gamma_coboundary(sub, quotient, witness)
    want = {i: g for i, g in gamma_diff.items() if not g.is_zero()}
    if set(produced) != set(want) or any(
        not (produced[i] - want[i]).is_zero() for i in produced
    ):
        raise ComplexInconsistencyError("witness reconstruction failed to verify")
    return witness


def _gamma_difference(
    first: ExtensionDatum, second: ExtensionDatum
) -> dict[int, CLinearMap]:
    if (first.algebra, first.sub, first.quotient) != (
        second.algebra,
        second.sub,
        second.quotient,
    ):
        raise ValueError("extension data live over different modules")
    diff: dict[int, CLinearMap] = {}
    zero = CLinearMap.zero(first.quotient.generators, first.sub.generators)
    for i in range(first.algebra.rank):
        d = first.gamma.get(i, zero) - second.gamma.get(i, zero)
        if not d.is_zero():
            diff[i] = d
    return diff


def equivalent_extensions(
    first: ExtensionDatum,
    second: ExtensionDatum,
    b_matrix: Mapping[tuple[int, int], Poly],
) -> bool:
    """Does the given map B: quotient -> sub identify the two extensions?

    True exactly when the gamma difference equals the coboundary of B as
    polynomials; a False here only rules out this particular witness.
    """
    diff = _gamma_difference(first, second)
    produced = gamma_coboundary(first.sub, first.quotient, b_matrix)
    if set(diff) != set(produced):
        return False
    return all((diff[i] - produced[i]).is_zero() for i in diff)


def search_extension_witness(
    first: ExtensionDatum, second: ExtensionDatum, max_degree: int
) -> Optional[dict[tuple[int, int], Poly]]:
    """Witness B identifying the two extensions, or None within the bound."""
    return find_extension_witness(
        first.sub, first.quotient, _gamma_difference(first, second), max_degree
    )


@dataclass(frozen=True)
class AbelianExtensionDatum:
    """Square-zero extension data: a bimodule and a degree-2 cochain."""

    algebra: ConformalAlgebra
    module: BimoduleStructure
    cocycle: Cochain

    def __post_init__(self):
        if self.module.algebra != self.algebra:
            raise ValueError("module is over a different algebra")
        if not (self.module.has_left and self.module.has_right):
            raise ValueError("abelian extension needs a two-sided module")
        if self.cocycle.degree != 2:
            raise ValueError("abelian extension twist must be a degree-2 cochain")
        if self.cocycle.algebra != self.algebra or self.cocycle.module != self.module:
            raise ValueError("cochain is not over this algebra and module")
        if check_associativity(self.algebra) is not None:
            raise ValueError("base algebra is not associative")
        if check_module_axioms(self.module) is not None:
            raise ValueError("module violates its axiom system")


def build_abelian_extension(
    datum: AbelianExtensionDatum,
) -> tuple[ConformalAlgebra, bool]:
    """Assemble A (+) M with product twisted by the cochain.

    Generators are the algebra's (prefixed a:) then the module's (prefixed
    m:); module generators multiply to zero among themselves.  Returns the
    algebra and whether it is associative, re-deriving the verdict from
    the cochain differential; disagreement raises ComplexInconsistencyError.
    """
    algebra, module, phi = datum.algebra, datum.module, datum.cocycle
    na = algebra.rank
    names = tuple(f"a:{g}" for g in algebra.generators) + tuple(
        f"m:{g}" for g in module.generators
    )
    structure: dict[tuple[int, int], list[tuple[int, Poly]]] = {}
    for i in range(na):
        for j in range(na):
            entries: list[tuple[int, Poly]] = list(algebra.products(i, j))
            twist = phi.values.get((i, j))
            if twist is not None:
                for s, poly in enumerate(twist):
                    if not poly.is_zero:
                        entries.append(
                            (na + s, poly.rename_vars({"lam1": "lam"}, PRODUCT_VARS))
                        )
            if entries:
                structure[(i, j)] = entries
        for t in range(module.rank):
            left = [(na + k, poly) for k, poly in module.left_entries(i, t)]
            if left:
                structure[(i, na + t)] = left
            right = [(na + k, poly) for k, poly in module.right_entries(t, i)]
            if right:
                structure[(na + t, i)] = right
    extension = ConformalAlgebra(names, structure)
    cochain_verdict = apply_dn(phi).is_zero()
    checker_verdict = check_associativity(extension) is None
    if cochain_verdict != checker_verdict:
        raise ComplexInconsistencyError(
            "cochain differential disagrees with the associativity checker"
        )
    return extension, checker_verdict


@dataclass(frozen=True)
class DeformationDatum:
    """First-order product perturbation, recorded as a degree-2 cochain
    over the algebra acting on itself."""

    algebra: ConformalAlgebra
    cocycle: Cochain

    def __post_init__(self):
        if self.cocycle.degree != 2:
            raise ValueError("deformation datum must be a degree-2 cochain")
        if self.cocycle.algebra != self.algebra:
            raise ValueError("cochain is over a different algebra")
        if self.cocycle.module != BimoduleStructure.regular(self.algebra):
            raise ValueError("deformation cochain must take values in the algebra")
        if check_associativity(self.algebra) is not None:
            raise ValueError("base algebra is not associative")


def deformation_residuals(
    datum: DeformationDatum,
) -> dict[tuple[int, int, int, int], Poly]:
    """First-order associativity obstruction of the perturbed product.

    Key (a, b, c, s): the coefficient of generator s in the degree-one
    part of (a lam b) (lam+mu) c - a lam (b mu c), a polynomial in
    (del, lam, mu).  Empty dict means the perturbation is flat to first
    order.
    """
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    dl = Poly.var(ASSOC_VARS, "del")
    algebra = datum.algebra
    n = algebra.rank

    def f_entry(i: int, j: int, k: int) -> Poly:
        vec = datum.cocycle.values.get((i, j))
        if vec is None:
            return Poly.zero(("del", "lam1"))
        return vec[k]

    out: dict[tuple[int, int, int, int], Poly] = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                acc = [Poly.zero(ASSOC_VARS) for _ in range(n)]
                # (P twist of a,b) applied to c plus (F twist) fed through P
                for l, p_abl in algebra.products(a, b):
                    outer = p_abl.substitute({"lam": lam, "del": -(lam + mu)})
                    for s in range(n):
                        f_lcs = f_entry(l, c, s)
                        if f_lcs.is_zero:
                            continue
                        acc[s] = acc[s] + outer * f_lcs.substitute(
                            {"lam1": lam + mu, "del": dl}
                        )
                for k in range(n):
                    f_abk = f_entry(a, b, k)
                    if f_abk.is_zero:
                        continue
                    outer = f_abk.substitute({"lam1": lam, "del": -(lam + mu)})
                    for s, p_kcs in algebra.products(k, c):
                        acc[s] = acc[s] + outer * p_kcs.substitute(
                            {"lam": lam + mu, "del": dl}
                        )
                # minus the right-association route
                for l, p_bcl in algebra.products(b, c):
                    inner = p_bcl.substitute({"lam": mu, "del": lam + dl})
                    for s in range(n):
                        f_als = f_entry(a, l, s)
                        if f_als.is_zero:
                            continue
                        acc[s] = acc[s] - inner * f_als.substitute(
                            {"lam1": lam, "del": dl}
                        )
                for k in range(n):
                    f_bck = f_entry(b, c, k)
                    if f_bck.is_zero:
                        continue
                    inner = f_bck.substitute({"lam1": mu, "del": lam + dl})
                    for s, p_aks in algebra.products(a, k):
                        acc[s] = acc[s] - inner * p_aks.substitute(
                            {"lam": lam, "del": dl}
                        )
                for s, poly in enumerate(acc):
                    if not poly.is_zero:
                        out[(a, b, c, s)] = poly
    return out


def deform(datum: DeformationDatum) -> tuple[dict[tuple[int, int, int, int], Poly], bool]:
    """Residual system and verdict for a first-order deformation.

    The verdict (flat to first order) is also re-derived from the cochain
    differential of the perturbation; the two routes must agree.
    """
    residuals = deformation_residuals(datum)
    direct_verdict = not residuals
    cochain_verdict = apply_dn(datum.cocycle).is_zero()
    if direct_verdict != cochain_verdict:
        raise ComplexInconsistencyError(
            "deformation residuals disagree with the cochain differential"
        )
    return residuals, direct_verdict


def find_deformation_witness(
    algebra: ConformalAlgebra, target: Cochain, max_degree: int
) -> Optional[Cochain]:
    """Degree-1 cochain whose differential equals the target, or None.

    The unknown cochain has value degree <= max_degree; the solve is
    exact, so None is a definitive answer within that bound.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    module = BimoduleStructure.regular(algebra)
    if target.degree != 2 or target.module != module:
        raise ValueError("target must be a degree-2 cochain valued in the algebra")
    bound = structure_degree_bound(algebra, module)
    out_degree = max(max_degree + bound, target.max_value_degree())
    matrix = differential_matrix(algebra, module, 1, max_degree, out_degree)
    rhs = CochainIndex(algebra, module, 2, out_degree).decompose(target)
    coords = solve(matrix, rhs)
    if coords is None:
        return None
    witness = CochainIndex(algebra, module, 1, max_degree).reconstruct(coords)
    if not (apply_dn(witness) - target).is_zero():
        raise ComplexInconsistencyError("witness reconstruction failed to verify")
    return witness


def equivalent_deformations(
    first: DeformationDatum, second: DeformationDatum, witness: Cochain
) -> bool:
    """Does the degree-1 cochain identify the two deformations?

    True exactly when the difference of the perturbations equals the
    differential of the witness.
    """
    if first.algebra != second.algebra:
        raise ValueError("deformations live over different algebras")
    if witness.degree != 1:
        raise ValueError("witness must be a degree-1 cochain")
    return (first.cocycle - second.cocycle - apply_dn(witness)).is_zero()


def search_deformation_witness(
    first: DeformationDatum, second: DeformationDatum, max_degree: int
) -> Optional[Cochain]:
    """Witness identifying two deformations to first order, or None."""
    if first.algebra != second.algebra:
        raise ValueError("deformations live over different algebras")
    return find_deformation_witness(
        first.algebra, first.cocycle - second.cocycle, max_degree
    )
