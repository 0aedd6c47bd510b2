"""Conformal modules over a conformal algebra, and conformal linear maps.

A module structure is presented the same way as an algebra: finitely many
generators over the polynomial ring in ``del`` and action tables

    a_i lam u_j = sum_k L_ijk(lam, del) u_k      (left)
    u_j lam a_i = sum_k R_jik(lam, del) u_k      (right)

Either table may be absent.  `check_module_axioms` verifies the left
axiom, the right axiom and the two-sided compatibility law, each as an
exact polynomial identity in (del, lam, mu) on generator triples.

A conformal linear map f: M -> N is a matrix of polynomials in (del, lam):
f_lam(u_j) = sum_k F_jk(lam, del) v_k, subject to f_lam(del u) =
(lam + del) f_lam(u).  The space of such maps carries algebra actions

    (a lam f) mu u = a lam (f_{mu-lam} u)
    (f lam a) mu u = f lam (a_{mu-lam} u)

returned here as polynomial families in (del, lam, mu), with lam the
action variable and mu the variable of the resulting map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .conformal import (
    ASSOC_VARS,
    PRODUCT_VARS,
    CElement,
    ConformalAlgebra,
    StructureMap,
    _validate_structure,
)
from .polyring import Poly, VariableMismatchError


@dataclass(frozen=True)
class BimoduleStructure:
    """Module generators plus left/right action tables (either may be None).

    ``left[(i, j)]`` lists (k, L) for a_i lam u_j; ``right[(j, i)]`` lists
    (k, R) for u_j lam a_i.  A present-but-empty table is the zero action;
    None means the structure genuinely lacks that side.
    """

    algebra: ConformalAlgebra
    generators: tuple[str, ...]
    left: Optional[StructureMap]
    right: Optional[StructureMap]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate module generator names")
        if self.left is None and self.right is None:
            raise ValueError("at least one action table is required")
        rank = len(self.generators)
        if self.left is not None:
            clean = _validate_structure(
                self.left, first=self.algebra.rank, second=rank, target=rank
            )
            object.__setattr__(self, "left", clean)
        if self.right is not None:
            clean = _validate_structure(
                self.right, first=rank, second=self.algebra.rank, target=rank
            )
            object.__setattr__(self, "right", clean)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def has_left(self) -> bool:
        return self.left is not None

    @property
    def has_right(self) -> bool:
        return self.right is not None

    def left_entries(self, i: int, j: int) -> tuple[tuple[int, Poly], ...]:
        if self.left is None:
            raise ValueError("module has no left action")
        return self.left.get((i, j), ())

    def right_entries(self, j: int, i: int) -> tuple[tuple[int, Poly], ...]:
        if self.right is None:
            raise ValueError("module has no right action")
        return self.right.get((j, i), ())

    def structure_degree(self) -> int:
        degree = self.algebra.structure_degree()
        for table in (self.left, self.right):
            if table is None:
                continue
            for entries in table.values():
                for _, poly in entries:
                    d = poly.total_degree()
                    if d is not None and d > degree:
                        degree = d
        return degree

    def generator_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise ValueError(f"unknown module generator {name!r}") from None

    @classmethod
    def regular(cls, algebra: ConformalAlgebra) -> "BimoduleStructure":
        """The algebra acting on itself on both sides."""
        return cls(
            algebra=algebra,
            generators=algebra.generators,
            left=dict(algebra.structure),
            right=dict(algebra.structure),
        )


@dataclass(frozen=True)
class ModuleAxiomCounterexample:
    law: str  # "left" | "right" | "compat"
    triple: tuple[int, int, int]
    lhs: tuple[Poly, ...]
    rhs: tuple[Poly, ...]

    @property
    def residual(self) -> tuple[Poly, ...]:
        return tuple(l - r for l, r in zip(self.lhs, self.rhs))


def _sides_left(module: BimoduleStructure, i: int, j: int, t: int):
    """a_i lam (a_j mu u_t)  vs  (a_i lam a_j) (lam+mu) u_t."""
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    dl = Poly.var(ASSOC_VARS, "del")
    rank = module.rank
    lhs = [Poly.zero(ASSOC_VARS) for _ in range(rank)]
    rhs = [Poly.zero(ASSOC_VARS) for _ in range(rank)]
    for k, l_jtk in module.left_entries(j, t):
        inner = l_jtk.substitute({"lam": mu, "del": lam + dl})
        for s, l_iks in module.left_entries(i, k):
            lhs[s] = lhs[s] + inner * l_iks.substitute({"lam": lam, "del": dl})
    for l, p_ijl in module.algebra.products(i, j):
        outer = p_ijl.substitute({"lam": lam, "del": -(lam + mu)})
        for s, l_lts in module.left_entries(l, t):
            rhs[s] = rhs[s] + outer * l_lts.substitute({"lam": lam + mu, "del": dl})
    return lhs, rhs


def _sides_right(module: BimoduleStructure, t: int, i: int, j: int):
    """u_t lam (a_i mu a_j)  vs  (u_t lam a_i) (lam+mu) a_j."""
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    dl = Poly.var(ASSOC_VARS, "del")
    rank = module.rank
    lhs = [Poly.zero(ASSOC_VARS) for _ in range(rank)]
    rhs = [Poly.zero(ASSOC_VARS) for _ in range(rank)]
    for l, p_ijl in module.algebra.products(i, j):
        inner = p_ijl.substitute({"lam": mu, "del": lam + dl})
        for s, r_tls in module.right_entries(t, l):
            lhs[s] = lhs[s] + inner * r_tls.substitute({"lam": lam, "del": dl})
    for k, r_tik in module.right_entries(t, i):
        outer = r_tik.substitute({"lam": lam, "del": -(lam + mu)})
        for s, r_kjs in module.right_entries(k, j):
            rhs[s] = rhs[s] + outer * r_kjs.substitute({"lam": lam + mu, "del": dl})
    return lhs, rhs


def _sides_compat(module: BimoduleStructure, i: int, t: int, j: int):
    """a_i lam (u_t mu a_j)  vs  (a_i lam u_t) (lam+mu) a_j."""
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    dl = Poly.var(ASSOC_VARS, "del")
    rank = module.rank
    lhs = [Poly.zero(ASSOC_VARS) for _ in range(rank)]
    rhs = [Poly.zero(ASSOC_VARS) for _ in range(rank)]
    for k, r_tjk in module.right_entries(t, j):
        inner = r_tjk.substitute({"lam": mu, "del": lam + dl})
        for s, l_iks in module.left_entries(i, k):
            lhs[s] = lhs[s] + inner * l_iks.substitute({"lam": lam, "del": dl})
    for k, l_itk in module.left_entries(i, t):
        outer = l_itk.substitute({"lam": lam, "del": -(lam + mu)})
        for s, r_kjs in module.right_entries(k, j):
            rhs[s] = rhs[s] + outer * r_kjs.substitute({"lam": lam + mu, "del": dl})
    return lhs, rhs


def check_module_axioms(module: BimoduleStructure) -> ModuleAxiomCounterexample | None:
    """Verify every applicable module law; None means all pass.

    Assumes the underlying algebra is associative (run check_associativity
    first); the verdict on a non-associative algebra is not meaningful.
    """
    na = module.algebra.rank
    nm = module.rank
    if module.has_left:
        for i in range(na):
            for j in range(na):
                for t in range(nm):
                    lhs, rhs = _sides_left(module, i, j, t)
                    if lhs != rhs:
                        return ModuleAxiomCounterexample(
                            "left", (i, j, t), tuple(lhs), tuple(rhs)
                        )
    if module.has_right:
        for t in range(nm):
            for i in range(na):
                for j in range(na):
                    lhs, rhs = _sides_right(module, t, i, j)
                    if lhs != rhs:
                        return ModuleAxiomCounterexample(
                            "right", (t, i, j), tuple(lhs), tuple(rhs)
                        )
    if module.has_left and module.has_right:
        for i in range(na):
            for t in range(nm):
                for j in range(na):
                    lhs, rhs = _sides_compat(module, i, t, j)
                    if lhs != rhs:
                        return ModuleAxiomCounterexample(
                            "compat", (i, t, j), tuple(lhs), tuple(rhs)
                        )
    return None


@dataclass(frozen=True)
class CLinearMap:
    """Conformal linear map between free modules, as a generator matrix.

    ``matrix[(j, k)]`` is the coefficient of the k-th target generator in
    f_lam(u_j), a polynomial in (del, lam).  Absent entries are zero.
    """

    source: tuple[str, ...]
    target: tuple[str, ...]
    matrix: Mapping[tuple[int, int], Poly]

    def __post_init__(self):
        clean = {}
        for (j, k), poly in self.matrix.items():
            if not (0 <= j < len(self.source) and 0 <= k < len(self.target)):
                raise ValueError(f"matrix index {(j, k)} out of range")
            if poly.variables != PRODUCT_VARS:
                raise VariableMismatchError(
                    f"map entries must be over {PRODUCT_VARS}, got {poly.variables}"
                )
            if not poly.is_zero:
                clean[(j, k)] = poly
        object.__setattr__(self, "matrix", clean)

    @classmethod
    def zero(cls, source: tuple[str, ...], target: tuple[str, ...]) -> "CLinearMap":
        return cls(source, target, {})

    def entry(self, j: int, k: int) -> Poly:
        return self.matrix.get((j, k), Poly.zero(PRODUCT_VARS))

    def is_zero(self) -> bool:
        return not self.matrix

    def __add__(self, other: "CLinearMap") -> "CLinearMap":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("map shapes differ")
        keys = set(self.matrix) | set(other.matrix)
        return CLinearMap(
            self.source,
            self.target,
            {key: self.entry(*key) + other.entry(*key) for key in keys},
        )

    def __sub__(self, other: "CLinearMap") -> "CLinearMap":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("map shapes differ")
        keys = set(self.matrix) | set(other.matrix)
        return CLinearMap(
            self.source,
            self.target,
            {key: self.entry(*key) - other.entry(*key) for key in keys},
        )

    def scaled(self, factor) -> "CLinearMap":
        return CLinearMap(
            self.source, self.target, {k: p * factor for k, p in self.matrix.items()}
        )

    def del_action(self) -> "CLinearMap":
        """del . f, characterized by (del f)_lam(u) = -lam f_lam(u)."""
        neg_lam = -Poly.var(PRODUCT_VARS, "lam")
        return CLinearMap(
            self.source, self.target, {k: neg_lam * p for k, p in self.matrix.items()}
        )


# family arena: lam = algebra action variable, mu = resulting map variable
FamilyMatrix = dict[tuple[int, int], Poly]


def chom_left_action(
    a: CElement, f: CLinearMap, target_module: BimoduleStructure
) -> FamilyMatrix:
    """(a lam f) as a family: entry (j, s) of a lam (f_{mu-lam} u_j).

    Requires a left action of a's algebra on the target module of f.
    """
    if target_module.generators != f.target:
        raise ValueError("target module does not match the map's target")
    if not target_module.has_left:
        raise ValueError("target module has no left action")
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    dl = Poly.var(ASSOC_VARS, "del")
    out: FamilyMatrix = {}
    for (j, k), f_jk in f.matrix.items():
        shifted = f_jk.substitute({"lam": mu - lam, "del": lam + dl})
        for i, p in enumerate(a.coords):
            if p.is_zero:
                continue
            scale = p.substitute({"del": -lam})
            for s, l_iks in target_module.left_entries(i, k):
                add = scale * shifted * l_iks.substitute({"lam": lam, "del": dl})
                key = (j, s)
                out[key] = out.get(key, Poly.zero(ASSOC_VARS)) + add
    return {k: v for k, v in out.items() if not v.is_zero}


def chom_right_action(
    f: CLinearMap, a: CElement, source_module: BimoduleStructure
) -> FamilyMatrix:
    """(f lam a) as a family: entry (j, s) of f_lam(a_{mu-lam} u_j).

    Requires a left action of a's algebra on the source module of f.
    """
    if source_module.generators != f.source:
        raise ValueError("source module does not match the map's source")
    if not source_module.has_left:
        raise ValueError("source module has no left action")
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    dl = Poly.var(ASSOC_VARS, "del")
    out: FamilyMatrix = {}
    for i, p in enumerate(a.coords):
        if p.is_zero:
            continue
        scale = p.substitute({"del": lam - mu})
        for j in range(source_module.rank):
            for k, l_ijk in source_module.left_entries(i, j):
                inner = l_ijk.substitute({"lam": mu - lam, "del": lam + dl})
                for (kk, s), f_ks in f.matrix.items():
                    if kk != k:
                        continue
                    add = scale * inner * f_ks.substitute({"lam": lam, "del": dl})
                    key = (j, s)
                    out[key] = out.get(key, Poly.zero(ASSOC_VARS)) + add
    return {k: v for k, v in out.items() if not v.is_zero}
