"""Fadell-Husseini index arithmetic with F_p coefficients.

For an odd prime p, H*(BZ/p; F_p) = F_p[a, b]/<a^2> with deg a = 1 and
deg b = 2. Every index used here is a monomial ideal in that ring, so
membership reduces to divisibility of exponent pairs: a^e b^k divides
a^f b^n iff e <= f and k <= n. Multiplying by a kills anything already
containing a, which is why this rule is also correct in the quotient.

For p = 2 the ring is F_2[t] and ideals are principal, <t^m>.

Ideals in tensor products (several copies of Z/p) are kept as stored data
only: generators are recorded, never reduced.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

from .errors import InvalidInput
from .orbits import is_prime, require_odd_prime


@dataclass(frozen=True, order=True)
class MonomialAB:
    eps: int
    k: int
    p: int

    def __post_init__(self) -> None:
        if self.eps not in (0, 1):
            raise InvalidInput(f"exponent of a must be 0 or 1 (a^2 = 0), got {self.eps!r}")
        if self.k < 0:
            raise InvalidInput(f"exponent of b must be >= 0, got {self.k!r}")

    @property
    def degree(self) -> int:
        return self.eps + 2 * self.k

    def divides(self, other: "MonomialAB") -> bool:
        return self.eps <= other.eps and self.k <= other.k

    def __mul__(self, other: "MonomialAB") -> Optional["MonomialAB"]:
        """Product in F_p[a,b]/<a^2>; ``None`` stands for zero."""
        if self.p != other.p:
            raise InvalidInput(f"prime mismatch: {self.p} vs {other.p}")
        if self.eps + other.eps > 1:
            return None
        return MonomialAB(self.eps + other.eps, self.k + other.k, self.p)

    def __str__(self) -> str:
        return f"a^{self.eps} b^{self.k}"


def _minimal(gens: Iterable[MonomialAB]) -> Tuple[MonomialAB, ...]:
    unique = sorted(set(gens), key=lambda m: (m.eps, m.k))
    return tuple(
        g for g in unique if not any(h != g and h.divides(g) for h in unique)
    )


@dataclass(frozen=True)
class MonomialIdealAB:
    """Monomial ideal of F_p[a,b]/<a^2>, stored by its minimal generators."""

    p: int
    generators: Tuple[MonomialAB, ...] = ()

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise InvalidInput(f"p must be prime, got {self.p!r}")
        for g in self.generators:
            if g.p != self.p:
                raise InvalidInput(f"generator {g} lives over F_{g.p}, ideal over F_{self.p}")
        object.__setattr__(self, "generators", _minimal(self.generators))

    @classmethod
    def of(cls, p: int, *exponents: Tuple[int, int]) -> "MonomialIdealAB":
        """``MonomialIdealAB.of(3, (1, 2), (0, 3))`` is <a b^2, b^3>."""
        return cls(p, tuple(MonomialAB(e, k, p) for e, k in exponents))

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def __str__(self) -> str:
        if self.is_zero:
            return "<0>"
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def to_json(self) -> dict:
        return {"p": self.p, "generators": [[g.eps, g.k] for g in self.generators]}


@dataclass(frozen=True)
class PowerIdealT:
    """The ideal <t^exponent> of F_2[t]."""

    exponent: int
    p: int = 2

    def contains_power(self, k: int) -> bool:
        return k >= self.exponent

    def __str__(self) -> str:
        return f"<t^{self.exponent}>"


def _same_prime(*primes: int) -> None:
    if len(set(primes)) != 1:
        raise InvalidInput(f"prime mismatch: {sorted(set(primes))}")


def contains(ideal: MonomialIdealAB, m: MonomialAB) -> bool:
    _same_prime(ideal.p, m.p)
    return any(g.divides(m) for g in ideal.generators)


def includes(big: MonomialIdealAB, small: MonomialIdealAB) -> bool:
    """True iff ``small`` is a subset of ``big``."""
    _same_prime(big.p, small.p)
    return all(contains(big, g) for g in small.generators)


def index_free_sphere(n: int, p: int) -> Union[MonomialIdealAB, PowerIdealT]:
    """Index of a free Z/p-sphere (or any E_n Z/p-space) of dimension n."""
    if n < 0:
        raise InvalidInput(f"sphere dimension must be >= 0, got {n}")
    if p == 2:
        return PowerIdealT(n + 1)
    require_odd_prime(p)
    if n % 2 == 1:
        return MonomialIdealAB.of(p, (0, (n + 1) // 2))
    return MonomialIdealAB.of(p, (1, n // 2))


def index_config_space(d: int, p: int) -> MonomialIdealAB:
    """Index of F(R^d, p) under the cyclic shift: <a b^K, b^(K+1)>, K = (d-1)(p-1)/2.

    At d = 1 this gives <a, b>, the whole augmentation ideal, as it must for a
    free space homotopy equivalent to a finite set.
    """
    require_odd_prime(p)
    if d < 1:
        raise InvalidInput(f"d must be >= 1, got {d}")
    k = (d - 1) * (p - 1) // 2
    return MonomialIdealAB.of(p, (1, k), (0, k + 1))


def delta_complement_dim(r: int, p: int) -> int:
    """Dimension of the unit sphere in the orthogonal complement of the diagonal."""
    return r * (p - 1) - 1


def index_delta_complement(r: int, p: int) -> MonomialIdealAB:
    require_odd_prime(p)
    if r < 1:
        raise InvalidInput(f"r must be >= 1, got {r}")
    return MonomialIdealAB.of(p, (0, r * (p - 1) // 2))


class IndexVerdict(str, enum.Enum):
    EXCLUDED = "Excluded"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


def map_obstruction(source_index: MonomialIdealAB, target_index: MonomialIdealAB) -> IndexVerdict:
    """Monotonicity test for an equivariant map source -> target.

    A map can exist only if Ind(target) is contained in Ind(source); when that
    inclusion fails no equivariant map exists.
    """
    if includes(source_index, target_index):
        return IndexVerdict.INCONCLUSIVE
    return IndexVerdict.EXCLUDED


# ---------------------------------------------------------------- stored data

Exponents = Tuple[int, ...]


@dataclass(frozen=True)
class GradedPoly:
    """A polynomial over F_p in named variables, kept as exponent -> coefficient.

    Variables whose names start with ``a`` are exterior (square to zero).
    """

    p: int
    variables: Tuple[str, ...]
    terms: Tuple[Tuple[Exponents, int], ...]

    def __post_init__(self) -> None:
        cleaned: Dict[Exponents, int] = {}
        for exps, coeff in self.terms:
            if len(exps) != len(self.variables):
                raise InvalidInput("exponent vector does not match variables")
            c = (cleaned.get(tuple(exps), 0) + coeff) % self.p
            cleaned[tuple(exps)] = c
        object.__setattr__(
            self, "terms", tuple(sorted(((e, c) for e, c in cleaned.items() if c), reverse=True))
        )

    @classmethod
    def monomial(cls, p: int, variables: Sequence[str], exps: Sequence[int]) -> "GradedPoly":
        return cls(p, tuple(variables), ((tuple(exps), 1),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def extend(self, variables: Sequence[str]) -> "GradedPoly":
        """The same element viewed in a ring with more variables."""
        variables = tuple(variables)
        missing = set(self.variables) - set(variables)
        if missing:
            raise InvalidInput(f"target ring lacks variables {sorted(missing)}")
        pos = [variables.index(v) for v in self.variables]
        terms = []
        for exps, c in self.terms:
            new = [0] * len(variables)
            for i, e in zip(pos, exps):
                new[i] = e
            terms.append((tuple(new), c))
        return GradedPoly(self.p, variables, tuple(terms))

    def __mul__(self, other: "GradedPoly") -> "GradedPoly":
        _same_prime(self.p, other.p)
        if self.variables != other.variables:
            raise InvalidInput("multiply polynomials in the same ring (use extend first)")
        exterior = [v.startswith("a") for v in self.variables]
        out = []
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                exps = tuple(x + y for x, y in zip(e1, e2))
                if any(ext and e > 1 for ext, e in zip(exterior, exps)):
                    continue
                # graded signs between distinct exterior classes are not tracked
                if sum(e for ext, e in zip(exterior, e1) if ext) and sum(
                    e for ext, e in zip(exterior, e2) if ext
                ):
                    raise InvalidInput("products of two exterior classes are not supported")
                out.append((exps, c1 * c2))
        return GradedPoly(self.p, self.variables, tuple(out))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for exps, c in self.terms:
            factors = [
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            ]
            body = "*".join(factors) or "1"
            parts.append(body if c == 1 else (f"{c}" if body == "1" else f"{c}*{body}"))
        return " + ".join(parts)


@dataclass(frozen=True)
class StoredIdeal:
    """Ideal of a polynomial ring in ``variables``, recorded by its generators."""

    p: int
    variables: Tuple[str, ...]
    generators: Tuple[GradedPoly, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise InvalidInput("variable names must be distinct")
        gens = tuple(g.extend(self.variables) for g in self.generators if not g.is_zero)
        object.__setattr__(self, "generators", gens)

    def __str__(self) -> str:
        if not self.generators:
            return "<0>"
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def as_stored(ideal: MonomialIdealAB, suffix: str = "") -> StoredIdeal:
    """View a monomial ideal in variables ``a<suffix>``, ``b<suffix>``."""
    variables = (f"a{suffix}", f"b{suffix}")
    gens = tuple(GradedPoly.monomial(ideal.p, variables, (g.eps, g.k)) for g in ideal.generators)
    return StoredIdeal(ideal.p, variables, gens)


def index_product(first: StoredIdeal, second: StoredIdeal) -> StoredIdeal:
    """Index of X x Y under G x H: the generators of both, in the tensor ring."""
    _same_prime(first.p, second.p)
    shared = set(first.variables) & set(second.variables)
    if shared:
        raise InvalidInput(f"variable sets must be disjoint, both use {sorted(shared)}")
    variables = first.variables + second.variables
    return StoredIdeal(first.p, variables, first.generators + second.generators)


def index_join_spheres(f, g):
    """Generator of Ind S(U + V) from generators of Ind S(U) and Ind S(V).

    Works on :class:`MonomialAB` (``None`` means the product vanished),
    :class:`GradedPoly`, or exponents of t for p = 2 given as
    :class:`PowerIdealT`.
    """
    if isinstance(f, MonomialAB) and isinstance(g, MonomialAB):
        return f * g
    if isinstance(f, GradedPoly) and isinstance(g, GradedPoly):
        return f * g
    if isinstance(f, PowerIdealT) and isinstance(g, PowerIdealT):
        return PowerIdealT(f.exponent + g.exponent)
    raise InvalidInput(f"cannot multiply {type(f).__name__} by {type(g).__name__}")


def index_torus_rep_line(alpha: Sequence[int], p: int) -> GradedPoly:
    """Linear form alpha_1 b_1 + ... + alpha_n b_n over F_p."""
    require_odd_prime(p)
    alpha = [int(x) % p for x in alpha]
    if not alpha:
        raise InvalidInput("alpha must be nonempty")
    if not any(alpha):
        raise InvalidInput("alpha must be nonzero for a free sphere")
    n = len(alpha)
    variables = tuple(f"b{i + 1}" for i in range(n))
    terms = tuple(
        (tuple(1 if j == i else 0 for j in range(n)), c) for i, c in enumerate(alpha) if c
    )
    return GradedPoly(p, variables, terms)
