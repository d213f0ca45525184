"""Sparse multivariate polynomials over F_p with weighted gradings.

A polynomial is a map from exponent tuples to residues in ``1..p-1``.  The
map is kept canonical (no zero coefficients), so equality is plain dict
equality.  Terms iterate in graded order: weighted degree descending, then
exponent tuples lexicographically descending.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateVariable,
    ExponentOverflow,
    NegativeDimension,
    NonpositiveWeight,
    NotHomogeneous,
    NotPrime,
    PolynomialSyntaxError,
    RingError,
    RingMismatch,
    UnknownVariable,
    ZeroPolynomial,
)

MAX_PRIME = 2**31
MAX_EXPONENT = 2**31 - 1

Monomial = tuple  # tuple[int, ...], one exponent per ring variable


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class WeightedRing:
    """Ambient data: prime field, weighted variables, relation degrees."""

    prime: int
    variables: tuple  # ((name, weight), ...)
    relation_degrees: tuple = ()

    @property
    def names(self) -> tuple:
        return tuple(name for name, _ in self.variables)

    @property
    def weights(self) -> tuple:
        return tuple(w for _, w in self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def dim(self) -> int:
        return len(self.variables) - len(self.relation_degrees)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def monomial_degree(self, exps: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def with_relations(self, relation_degrees: Iterable[int]) -> "WeightedRing":
        return make_ring(self.prime, self.variables, list(relation_degrees))

    def __str__(self) -> str:
        vs = ",".join(f"{n}:{w}" for n, w in self.variables)
        return f"F_{self.prime}[{vs}]"


def make_ring(p: int, vars: Iterable, relation_degrees: Iterable[int] = ()) -> WeightedRing:
    """Validate and build a :class:`WeightedRing`.

    ``vars`` is a sequence of ``(name, weight)`` pairs.
    """
    p = int(p)
    if not is_prime(p):
        raise NotPrime(p)
    if p >= MAX_PRIME:
        raise RingError(f"prime {p} exceeds the supported limit 2^31")
    variables = []
    seen = set()
    for name, weight in vars:
        if not isinstance(name, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise RingError(f"invalid variable name {name!r}")
        if name in seen:
            raise DuplicateVariable(name)
        if int(weight) < 1:
            raise NonpositiveWeight(name, weight)
        seen.add(name)
        variables.append((name, int(weight)))
    rels = tuple(int(d) for d in relation_degrees)
    if any(d < 1 for d in rels):
        raise RingError(f"relation degrees must be positive, got {rels}")
    if len(rels) > len(variables):
        raise NegativeDimension(len(variables), len(rels))
    return WeightedRing(p, tuple(variables), rels)


class Polynomial:
    """Immutable sparse polynomial over ``F_p``."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: WeightedRing, terms: Mapping = None):
        p = ring.prime
        n = ring.nvars
        clean = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise ValueError(f"monomial {mono} has {len(mono)} exponents, ring has {n} variables")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            if any(e > MAX_EXPONENT for e in mono):
                raise ExponentOverflow(f"exponent in {mono} exceeds 2^31 - 1")
            clean[mono] = clean.get(mono, 0) + int(coeff)
        self.ring = ring
        self._terms = {m: c % p for m, c in clean.items() if c % p}
        self._hash = None

    @classmethod
    def _make(cls, ring, terms):
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, ring: WeightedRing, c: int) -> "Polynomial":
        return cls(ring, {(0,) * ring.nvars: c})

    @classmethod
    def zero(cls, ring: WeightedRing) -> "Polynomial":
        return cls._make(ring, {})

    @classmethod
    def variable(cls, ring: WeightedRing, name: str) -> "Polynomial":
        i = ring.index(name)
        exps = [0] * ring.nvars
        exps[i] = 1
        return cls._make(ring, {tuple(exps): 1})

    @classmethod
    def monomial(cls, ring: WeightedRing, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        return cls(ring, {tuple(exps): coeff})

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list:
        """Terms as ``(monomial, coeff)`` pairs in canonical order."""
        deg = self.ring.monomial_degree
        return sorted(self._terms.items(), key=lambda t: (deg(t[0]), t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        p = self.ring.prime
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._make(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        p = self.ring.prime
        return Polynomial._make(self.ring, {m: p - c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        return poly_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        return poly_pow(self, k)

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.prime
        c %= p
        if not c:
            return Polynomial.zero(self.ring)
        return Polynomial._make(self.ring, {m: v * c % p for m, v in self._terms.items()})

    def max_exponent(self) -> int:
        return max((max(m, default=0) for m in self._terms), default=0)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.ring.nvars, 0)

    def degrees(self) -> set:
        deg = self.ring.monomial_degree
        return {deg(m) for m in self._terms}

    def __repr__(self) -> str:
        return f"Polynomial({render(self)!r}, p={self.ring.prime})"

    def __str__(self) -> str:
        return render(self)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Product of two polynomials over the same ring."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if not a._terms or not b._terms:
        return Polynomial.zero(a.ring)
    if a.max_exponent() + b.max_exponent() > MAX_EXPONENT:
        raise ExponentOverflow("product exponent exceeds 2^31 - 1")
    p = a.ring.prime
    acc = {}
    add = operator.add
    get = acc.get
    bt = list(b._terms.items())
    for ma, ca in a._terms.items():
        for mb, cb in bt:
            m = tuple(map(add, ma, mb))
            acc[m] = get(m, 0) + ca * cb
    return Polynomial._make(a.ring, {m: c % p for m, c in acc.items() if c % p})


def frobenius_scale(f: Polynomial, r: int) -> Polynomial:
    """Multiply every exponent by ``r``; equals ``f**r`` when ``r`` is a power of p."""
    if r == 1:
        return f
    if f.max_exponent() * r > MAX_EXPONENT:
        raise ExponentOverflow(f"scaling exponents by {r} exceeds 2^31 - 1")
    return Polynomial._make(f.ring, {tuple(e * r for e in m): c for m, c in f._terms.items()})


def _repeated_mul(f: Polynomial, k: int) -> Polynomial:
    out = Polynomial.constant(f.ring, 1)
    for _ in range(k):
        out = poly_mul(out, f)
    return out


def poly_pow(f: Polynomial, k: int) -> Polynomial:
    """``f**k`` through the base-p digits of ``k``.

    With ``k = sum c_i p^i``, ``f**k = prod (f**c_i)^[p^i]``, where ``^[r]``
    scales exponents by ``r``.  Only the powers ``f**c_i`` with ``c_i < p`` are
    multiplied out.
    """
    if k < 0:
        raise ValueError("negative exponent")
    p = f.ring.prime
    if k and f.max_exponent() * k > MAX_EXPONENT:
        raise ExponentOverflow(f"f^{k} exceeds exponent limit 2^31 - 1")
    small = {}
    out = Polynomial.constant(f.ring, 1)
    scale = 1
    while k:
        k, c = divmod(k, p)
        if c:
            if c not in small:
                small[c] = _repeated_mul(f, c)
            out = poly_mul(out, frobenius_scale(small[c], scale))
        scale *= p
    return out


def weighted_degree(f: Polynomial) -> int:
    """Common weighted degree of all terms; raises NotHomogeneous otherwise."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no degree")
    degs = f.degrees()
    if len(degs) > 1:
        raise NotHomogeneous(degs)
    return degs.pop()


def is_homogeneous(f: Polynomial) -> bool:
    return len(f.degrees()) <= 1


def bracket_normal_form(f: Polynomial, q: int) -> Polynomial:
    """Drop every term divisible by some ``x_j^q``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return Polynomial._make(
        f.ring, {m: c for m, c in f._terms.items() if all(e < q for e in m)}
    )


def render(f: Polynomial) -> str:
    """Canonical text form, e.g. ``2*x^2*y + z^3 + 1``."""
    if f.is_zero():
        return "0"
    names = f.ring.names
    parts = []
    for mono, c in f.sorted_terms():
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


# -- parser -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S)|$)")


def _tokenize(text: str, ring: WeightedRing) -> list:
    names = sorted(ring.names, key=len, reverse=True)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.lastindex is None:
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            word, start = m.group(2), m.start(2)
            # juxtaposed variables such as "yz" split by greedy longest match
            i = 0
            while i < len(word):
                for name in names:
                    if word.startswith(name, i):
                        tokens.append(("var", name, start + i))
                        i += len(name)
                        break
                else:
                    raise UnknownVariable(word[i:], start + i)
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise PolynomialSyntaxError(m.start(3), f"unexpected character {ch!r}")
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.ring = ring
        self.tokens = _tokenize(text, ring)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value or kind != "op":
            raise PolynomialSyntaxError(pos, f"expected {value!r}")

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise PolynomialSyntaxError(0, "empty expression")
        out = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(pos, f"unexpected {v!r}")
        return out

    def expr(self):
        out = self.term()
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in "+-":
                self.take()
                rhs = self.term()
                out = out + rhs if v == "+" else out - rhs
            else:
                return out

    def _starts_factor(self, tok):
        kind, v, _ = tok
        return kind in ("int", "var") or (kind == "op" and v == "(")

    def term(self):
        out = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                out = out * self.factor()
            elif self._starts_factor(tok):
                out = out * self.factor()
            else:
                return out

    def factor(self):
        kind, v, _ = self.peek()
        if kind == "op" and v in "+-":
            self.take()
            inner = self.factor()
            return -inner if v == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, v, _ = self.peek()
        if kind == "op" and v == "^":
            self.take()
            kind, k, pos = self.take()
            if kind != "int":
                raise PolynomialSyntaxError(pos, "exponent must be a nonnegative integer literal")
            if k > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {k} at position {pos} exceeds 2^31 - 1")
            return poly_pow(base, k)
        return base

    def atom(self):
        kind, v, pos = self.take()
        if kind == "int":
            return Polynomial.constant(self.ring, v)
        if kind == "var":
            return Polynomial.variable(self.ring, v)
        if kind == "op" and v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise PolynomialSyntaxError(pos, "unexpected end of input")
        raise PolynomialSyntaxError(pos, f"unexpected {v!r}")


def parse_poly(text: str, ring: WeightedRing) -> Polynomial:
    """Parse ``text`` such as ``"x^2+yz^2+y^4"`` into a polynomial over ``ring``.

    ``^`` binds tightest, then ``*`` or juxtaposition, then ``+``/``-``.
    Unary minus is allowed and whitespace is ignored.
    """
    return _Parser(text, ring).parse()


def monomials_up_to(ring: WeightedRing, q: int, max_degree: int):
    """Yield exponent tuples with every entry ``< q`` and weighted degree ``<= max_degree``."""
    weights = ring.weights
    n = len(weights)
    exps = [0] * n

    def rec(j, budget):
        if j == n:
            yield tuple(exps)
            return
        w = weights[j]
        top = min(q - 1, budget // w)
        for e in range(top + 1):
            exps[j] = e
            yield from rec(j + 1, budget - e * w)
        exps[j] = 0

    if max_degree < 0:
        return
    yield from rec(0, max_degree)
