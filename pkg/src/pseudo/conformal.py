"""Finite associative conformal algebras presented by structure polynomials.

An algebra is a free module over the one-variable polynomial ring in
``del`` with a finite generator list; the product of two generators is

    a_i lam a_j  =  sum_k  P_ijk(lam, del) a_k.

The product of general elements follows by sesquilinearity: a ``del`` in
the left argument's coefficient turns into -lam, one in the right
argument's coefficient turns into lam + del.  Associativity

    (a lam b) (lam+mu) c  =  a lam (b mu c)

is then a polynomial identity in lam, mu, del for every generator triple,
which `check_associativity` verifies exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .polyring import Poly, Rational, VariableMismatchError

# arenas: structure polynomials live in (del, lam); both sides of the
# associativity identity live in (del, lam, mu)
PRODUCT_VARS = ("del", "lam")
ASSOC_VARS = ("del", "lam", "mu")

StructureMap = Mapping[tuple[int, int], tuple[tuple[int, Poly], ...]]


def _validate_structure(
    structure: Mapping, *, first: int, second: int, target: int
) -> dict[tuple[int, int], tuple[tuple[int, Poly], ...]]:
    """Normalize a {(i, j): [(k, poly), ...]} table; drop zeros, reject dups.

    ``first``/``second`` bound the key indices, ``target`` bounds k.
    """
    clean: dict[tuple[int, int], tuple[tuple[int, Poly], ...]] = {}
    for (i, j), entries in structure.items():
        if not (0 <= i < first and 0 <= j < second):
            raise ValueError(f"generator index out of range in {(i, j)}")
        seen = set()
        kept = []
        for k, poly in entries:
            if not (0 <= k < target):
                raise ValueError(f"target index {k} out of range")
            if k in seen:
                raise ValueError(f"duplicate target {k} for pair {(i, j)}")
            seen.add(k)
            if poly.variables != PRODUCT_VARS:
                raise VariableMismatchError(
                    f"structure polynomial must be over {PRODUCT_VARS}, got {poly.variables}"
                )
            if not poly.is_zero:
                kept.append((k, poly))
        if kept:
            clean[(i, j)] = tuple(sorted(kept, key=lambda e: e[0]))
    return clean


@dataclass(frozen=True)
class ConformalAlgebra:
    """Generator names plus the structure polynomial table."""

    generators: tuple[str, ...]
    structure: StructureMap

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        rank = len(self.generators)
        clean = _validate_structure(self.structure, first=rank, second=rank, target=rank)
        object.__setattr__(self, "structure", clean)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def products(self, i: int, j: int) -> tuple[tuple[int, Poly], ...]:
        return self.structure.get((i, j), ())

    def structure_degree(self) -> int:
        """Largest total degree among structure polynomials (0 if none)."""
        degree = 0
        for entries in self.structure.values():
            for _, poly in entries:
                d = poly.total_degree()
                if d is not None and d > degree:
                    degree = d
        return degree

    def generator_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise ValueError(f"unknown generator {name!r}") from None


@dataclass(frozen=True)
class CElement:
    """Element of an algebra: one coefficient polynomial in del per generator."""

    algebra: ConformalAlgebra
    coords: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.coords) != self.algebra.rank:
            raise ValueError("coordinate count does not match generator count")
        for poly in self.coords:
            if poly.variables != ("del",):
                raise VariableMismatchError(
                    f"element coordinates must be over ('del',), got {poly.variables}"
                )

    @classmethod
    def generator(cls, algebra: ConformalAlgebra, index: int) -> "CElement":
        coords = [Poly.zero(("del",)) for _ in range(algebra.rank)]
        coords[index] = Poly.const(("del",), 1)
        return cls(algebra, tuple(coords))

    @classmethod
    def from_coords(cls, algebra: ConformalAlgebra, coords: Sequence[Poly]) -> "CElement":
        return cls(algebra, tuple(coords))

    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.coords)

    def __add__(self, other: "CElement") -> "CElement":
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise ValueError("elements of different algebras")
        return CElement(
            self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "CElement") -> "CElement":
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise ValueError("elements of different algebras")
        return CElement(
            self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def scaled(self, factor) -> "CElement":
        return CElement(self.algebra, tuple(p * factor for p in self.coords))


def _neg_lam(p: Poly) -> Poly:
    # p(del) -> p(-lam), landing in (del, lam)
    return p.substitute({"del": -Poly.var(PRODUCT_VARS, "lam")})


def _shift_lam(p: Poly) -> Poly:
    # p(del) -> p(lam + del), landing in (del, lam)
    return p.substitute(
        {"del": Poly.var(PRODUCT_VARS, "lam") + Poly.var(PRODUCT_VARS, "del")}
    )


def lambda_product(a: CElement, b: CElement) -> list[Poly]:
    """Coordinates of a lam b over the generators, as polynomials in (del, lam).

    Bilinear extension of the structure table: a coefficient p(del) on the
    left contributes p(-lam), a coefficient q(del) on the right contributes
    q(lam + del), both multiplying the structure polynomial.
    """
    if a.algebra != b.algebra:
        raise ValueError("elements of different algebras")
    algebra = a.algebra
    out = [Poly.zero(PRODUCT_VARS) for _ in range(algebra.rank)]
    for i, p in enumerate(a.coords):
        if p.is_zero:
            continue
        left_factor = _neg_lam(p)
        for j, q in enumerate(b.coords):
            if q.is_zero:
                continue
            entries = algebra.products(i, j)
            if not entries:
                continue
            factor = left_factor * _shift_lam(q)
            for k, poly in entries:
                out[k] = out[k] + factor * poly
    return out


@dataclass(frozen=True)
class AssociativityCounterexample:
    """First generator triple on which the two association orders differ."""

    triple: tuple[int, int, int]
    lhs: tuple[Poly, ...]
    rhs: tuple[Poly, ...]

    @property
    def residual(self) -> tuple[Poly, ...]:
        return tuple(l - r for l, r in zip(self.lhs, self.rhs))


def _assoc_sides(
    algebra: ConformalAlgebra, i: int, j: int, k: int
) -> tuple[list[Poly], list[Poly]]:
    """Both sides of the associativity identity on (a_i, a_j, a_k)."""
    lam = Poly.var(ASSOC_VARS, "lam")
    mu = Poly.var(ASSOC_VARS, "mu")
    dl = Poly.var(ASSOC_VARS, "del")
    rank = algebra.rank
    lhs = [Poly.zero(ASSOC_VARS) for _ in range(rank)]
    rhs = [Poly.zero(ASSOC_VARS) for _ in range(rank)]
    # (a_i lam a_j) (lam+mu) a_k: the del inside P_ij* rides on the
    # intermediate generator, so it becomes -(lam+mu) in the outer product
    for l, p_ijl in algebra.products(i, j):
        outer_coeff = p_ijl.substitute({"lam": lam, "del": -(lam + mu)})
        for m, p_lkm in algebra.products(l, k):
            lhs[m] = lhs[m] + outer_coeff * p_lkm.substitute(
                {"lam": lam + mu, "del": dl}
            )
    # a_i lam (a_j mu a_k): the del inside P_jk* rides on the right
    # argument of the outer product, so it shifts to lam + del
    for l, p_jkl in algebra.products(j, k):
        inner_coeff = p_jkl.substitute({"lam": mu, "del": lam + dl})
        for m, p_ilm in algebra.products(i, l):
            rhs[m] = rhs[m] + inner_coeff * p_ilm.substitute({"lam": lam, "del": dl})
    return lhs, rhs


def check_associativity(algebra: ConformalAlgebra) -> AssociativityCounterexample | None:
    """None when every generator triple associates; else the first failure."""
    rank = algebra.rank
    for i in range(rank):
        for j in range(rank):
            for k in range(rank):
                lhs, rhs = _assoc_sides(algebra, i, j, k)
                if lhs != rhs:
                    return AssociativityCounterexample(
                        (i, j, k), tuple(lhs), tuple(rhs)
                    )
    return None


def free_rank_one(product: Poly | None = None, name: str = "e") -> ConformalAlgebra:
    """Rank-one algebra with e lam e = product (default: the unit current algebra)."""
    if product is None:
        product = Poly.const(PRODUCT_VARS, 1)
    structure = {(0, 0): ((0, product),)} if not product.is_zero else {}
    return ConformalAlgebra((name,), structure)
