"""Exact multivariate polynomials over the rationals.

A polynomial is a mapping from exponent vectors to nonzero rational
coefficients together with an ordered tuple of variable names.  The
variable universe is fixed: ``del`` (the translation generator acting on
module coordinates), the product variables ``lam`` and ``mu``, and the
numbered family ``lam1``, ``lam2``, ...  Variable tuples are always kept
sorted in the global order

    del < lam < mu < lam1 < lam2 < ...

so that the exponent vectors of any two polynomials over the same
variable set align position by position.  Alignment across *different*
variable sets is an explicit step (`embed`, `rename_vars`); the arithmetic
operators refuse mismatched operands instead of guessing.

Zero is the empty term map; no operation ever stores a zero coefficient.
Instances are immutable by convention and safe to share.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

# The package works over the field of rationals.  fractions.Fraction is
# arbitrary precision, always reduced, and keeps denominators positive,
# which is exactly the required normal form.
Rational = Fraction

_ZERO = Fraction(0)

_FIXED_ORDER = {"del": (0, 0), "lam": (1, 0), "mu": (2, 0)}
_NUMBERED = re.compile(r"^lam([1-9][0-9]*)$")


class VariableMismatchError(ValueError):
    """Operands live over different variable sets and must be aligned first."""


class PolyParseError(ValueError):
    """Rejected polynomial text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


def variable_key(name: str) -> tuple[int, int]:
    """Sort key realizing the global variable order; rejects unknown names."""
    try:
        return _FIXED_ORDER[name]
    except KeyError:
        pass
    m = _NUMBERED.match(name)
    if m:
        return (3, int(m.group(1)))
    raise ValueError(f"unknown polynomial variable {name!r}")


def sort_variables(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=variable_key))


class Poly:
    """Polynomial with exact rational coefficients.

    ``variables`` is the sorted variable tuple; ``terms`` maps exponent
    tuples (aligned with ``variables``) to nonzero Fractions.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping | Iterable = ()):
        variables = tuple(variables)
        if variables != sort_variables(variables):
            raise ValueError(f"variables not in canonical order: {variables}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(variables):
                raise ValueError(f"exponent {exp} does not match variables {variables}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            coeff = Fraction(coeff)
            acc = clean.get(exp, _ZERO) + coeff
            if acc:
                clean[exp] = acc
            else:
                clean.pop(exp, None)
        self.variables = variables
        self.terms = clean

    # -- construction ------------------------------------------------

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict) -> "Poly":
        # internal fast path: inputs already normalized
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        return p

    @classmethod
    def zero(cls, variables: Iterable[str]) -> "Poly":
        return cls(variables, ())

    @classmethod
    def const(cls, variables: Iterable[str], value) -> "Poly":
        variables = tuple(variables)
        value = Fraction(value)
        if not value:
            return cls(variables, ())
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables: Iterable[str], name: str) -> "Poly":
        variables = tuple(variables)
        if name not in variables:
            raise VariableMismatchError(f"{name!r} not among variables {variables}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exp: Fraction(1)})

    @classmethod
    def monomial(cls, variables: Iterable[str], exponents: Iterable[int], coeff=1) -> "Poly":
        return cls(variables, {tuple(exponents): Fraction(coeff)})

    # -- basic queries -----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int | None:
        """Maximum term degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def coefficient(self, exponents: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exponents), _ZERO)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), _ZERO)

    # -- ring operations ---------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.variables != self.variables:
                raise VariableMismatchError(
                    f"variable sets differ: {self.variables} vs {other.variables}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.variables, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = terms.get(exp, _ZERO) + coeff
            if acc:
                terms[exp] = acc
            else:
                terms.pop(exp, None)
        return Poly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return Poly.zero(self.variables)
            return Poly._raw(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(exp, _ZERO) + c1 * c2
                if acc:
                    terms[exp] = acc
                else:
                    terms.pop(exp, None)
        return Poly._raw(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {n!r}")
        out = Poly.const(self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    # -- variable plumbing -------------------------------------------

    def embed(self, variables: Iterable[str]) -> "Poly":
        """Reinterpret over a superset of the current variables."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        if variables != sort_variables(variables):
            raise ValueError(f"variables not in canonical order: {variables}")
        if not set(self.variables) <= set(variables):
            raise VariableMismatchError(
                f"{variables} does not contain {self.variables}"
            )
        pos = [variables.index(v) for v in self.variables]
        width = len(variables)
        terms = {}
        for exp, coeff in self.terms.items():
            new = [0] * width
            for p, e in zip(pos, exp):
                new[p] = e
            terms[tuple(new)] = coeff
        return Poly._raw(variables, terms)

    def substitute(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneously replace variables by polynomials (a ring map).

        Every bound name must occur in this polynomial's variable set.  All
        replacement polynomials must share a single target variable set,
        which must also contain every unbound variable: unbound variables
        map to themselves.
        """
        if not bindings:
            return self
        for name in bindings:
            if name not in self.variables:
                raise VariableMismatchError(
                    f"cannot substitute {name!r}: not among {self.variables}"
                )
        targets = {p.variables for p in bindings.values()}
        if len(targets) != 1:
            raise VariableMismatchError(
                f"replacement polynomials disagree on variables: {sorted(targets)}"
            )
        tvars = targets.pop()
        base: list[Poly] = []
        for v in self.variables:
            if v in bindings:
                base.append(bindings[v])
            elif v in tvars:
                base.append(Poly.var(tvars, v))
            else:
                raise VariableMismatchError(
                    f"unbound variable {v!r} missing from target variables {tvars}"
                )
        out = Poly.zero(tvars)
        cache: list[dict[int, Poly]] = [{} for _ in base]
        for exp, coeff in self.terms.items():
            term = Poly.const(tvars, coeff)
            for i, e in enumerate(exp):
                if e:
                    pw = cache[i].get(e)
                    if pw is None:
                        pw = base[i] ** e
                        cache[i][e] = pw
                    term = term * pw
            out = out + term
        return out

    def rename_vars(
        self, mapping: Mapping[str, str], target: Iterable[str] | None = None
    ) -> "Poly":
        """Injectively rename variables; unmentioned names keep themselves."""
        names = [mapping.get(v, v) for v in self.variables]
        if len(set(names)) != len(names):
            raise VariableMismatchError(f"rename collides: {mapping}")
        tvars = sort_variables(names) if target is None else tuple(target)
        bindings = {
            v: Poly.var(tvars, mapping.get(v, v)) for v in self.variables
        }
        return self.substitute(bindings)

    # -- printing and parsing ----------------------------------------

    def __str__(self) -> str:
        return poly_to_str(self)

    def __repr__(self) -> str:
        return f"Poly({self.variables}, {poly_to_str(self)!r})"


def align(*polys: Poly) -> tuple[Poly, ...]:
    """Embed all arguments over the union of their variable sets."""
    union = sort_variables(v for p in polys for v in p.variables)
    return tuple(p.embed(union) for p in polys)


def iter_monomials(variables: Iterable[str], max_degree: int) -> Iterator[tuple[int, ...]]:
    """Exponent tuples of total degree <= max_degree, ascending (degree, lex)."""
    variables = tuple(variables)
    n = len(variables)
    if max_degree < 0:
        return
    if n == 0:
        yield ()
        return

    def parts(total: int, slots: int):
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in parts(total - first, slots - 1):
                yield (first,) + rest

    for d in range(max_degree + 1):
        yield from parts(d, n)


# term order for printing: high degree first, ties broken by the reversed
# variable order so lam-heavy monomials come before del-heavy ones
def _print_key(variables: tuple[str, ...], exp: tuple[int, ...]):
    rev = tuple(reversed(exp))
    return (sum(exp), rev)


def poly_to_str(p: Poly) -> str:
    if not p.terms:
        return "0"
    rev_vars = tuple(reversed(p.variables))
    pieces: list[str] = []
    ordered = sorted(p.terms.items(), key=lambda kv: _print_key(p.variables, kv[0]), reverse=True)
    for idx, (exp, coeff) in enumerate(ordered):
        factors = []
        for v, e in zip(rev_vars, reversed(exp)):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if idx == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[()+\-*/^])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over: expr := term ((+|-) term)*;
    term := factor (* factor)*; factor := - factor | atom (^ int)?;
    atom := rational | variable | ( expr ).  '^' binds tightest; '/' only
    inside rational literals."""

    def __init__(self, tokens, variables: tuple[str, ...]):
        self.tokens = tokens
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise PolyParseError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def expr(self) -> Poly:
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                acc = acc + rhs if val == "+" else acc - rhs
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Poly:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return -self.factor()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "num":
                raise PolyParseError("exponent must be a nonnegative integer", pos)
            return base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.next()
        if kind == "num":
            num = int(val)
            kind2, val2, _ = self.peek()
            if kind2 == "op" and val2 == "/":
                self.next()
                kind3, val3, pos3 = self.next()
                if kind3 != "num":
                    raise PolyParseError("expected denominator digits", pos3)
                den = int(val3)
                if den == 0:
                    raise PolyParseError("zero denominator", pos3)
                return Poly.const(self.variables, Fraction(num, den))
            return Poly.const(self.variables, num)
        if kind == "name":
            if val not in self.variables:
                raise PolyParseError(
                    f"variable {val!r} not among allowed {self.variables}", pos
                )
            return Poly.var(self.variables, val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise PolyParseError(f"unexpected token {val or 'end of input'!r}", pos)


def parse_poly(text: str, allowed_variables: Iterable[str]) -> Poly:
    """Parse polynomial text over the given variables.

    Integers and p/q rationals, the operators + - * ^ and parentheses are
    accepted; '^' takes a nonnegative integer exponent and binds tightest.
    The result is over the full allowed variable set (canonically sorted),
    whether or not each variable occurs.
    """
    variables = sort_variables(allowed_variables)
    parser = _Parser(_tokenize(text), variables)
    result = parser.expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise PolyParseError(f"trailing input {val!r}", pos)
    return result
