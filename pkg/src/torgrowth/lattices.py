"""Finite-index subgroups of Z^n and their finite abelian quotients.

Covers the quotient decomposition A = Z^n/Gamma with working projection and
section maps, exact shortest-vector norms by bounded enumeration, coordinate
orders, orthogonal-complement lattices, and the explicit converging families
Gamma_{s,j} = (k)^perp + j*k used by the growth experiments.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from . import intlinalg
from .intlinalg import hnf_rows, invert_unimodular, kernel_basis, nearest_div, snf_with_transforms

MIN_NORM_MAX_DIM = 4
_ENUM_BUDGET = 2_000_000


class SearchBudgetExceeded(RuntimeError):
    """A bounded deterministic search ran out of its configured budget."""


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of Z^nvars given by generating vectors (matrix columns)."""

    nvars: int
    gens: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be positive")
        object.__setattr__(
            self, "gens", tuple(tuple(int(x) for x in g) for g in self.gens)
        )
        for g in self.gens:
            if len(g) != self.nvars:
                raise ValueError("generator has wrong length")

    @classmethod
    def cyclic(cls, ell: int) -> "Subgroup":
        """ell*Z inside Z^1."""
        return cls(1, ((ell,),))

    @classmethod
    def diagonal(cls, nvars: int, d: int) -> "Subgroup":
        """d*Z^n inside Z^n."""
        gens = tuple(
            tuple(d if i == j else 0 for i in range(nvars)) for j in range(nvars)
        )
        return cls(nvars, gens)

    def basis(self) -> list[list[int]]:
        """Independent basis vectors (canonical Hermite form rows)."""
        return hnf_rows(self.gens)

    def rank(self) -> int:
        return len(self.basis())

    def contains(self, vec: Sequence[int]) -> bool:
        return intlinalg.lattice_contains(self.gens, vec)

    def to_json(self) -> list[list[int]]:
        return [list(g) for g in self.gens]

    @classmethod
    def from_json(cls, data) -> "Subgroup":
        gens = [tuple(int(x) for x in g) for g in data]
        if not gens:
            raise ValueError("empty generator list")
        return cls(len(gens[0]), tuple(gens))


class FinAbGroup:
    """A finite abelian group A = Z^n / Gamma in invariant-factor form.

    Elements are digit tuples over the invariant factors d1 | d2 | ... (all
    >= 2), enumerated lexicographically; the stored unimodular change of
    basis realizes the projection Z^n -> A and an integer section.
    """

    def __init__(self, nvars: int, dfull: Sequence[int], U, Uinv):
        self.nvars = nvars
        self._dfull = tuple(int(d) for d in dfull)
        if any(d == 0 for d in self._dfull) or len(self._dfull) < nvars:
            raise ValueError("quotient is infinite: subgroup not of full rank")
        self._U = [list(map(int, row)) for row in U]
        self._Uinv = [list(map(int, row)) for row in Uinv]
        self._keep = tuple(i for i, d in enumerate(self._dfull) if d > 1)
        self.invariant_factors = tuple(self._dfull[i] for i in self._keep)
        self.order = math.prod(self.invariant_factors)
        self._elements: list[tuple[int, ...]] | None = None
        self._index: dict[tuple[int, ...], int] | None = None

    @classmethod
    def from_invariant_factors(cls, factors: Sequence[int]) -> "FinAbGroup":
        """Direct construction (quotient of the diagonal lattice)."""
        factors = [int(d) for d in factors]
        if any(d < 1 for d in factors):
            raise ValueError("invariant factors must be positive")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")
        n = len(factors)
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(n, factors, eye, eye)

    @property
    def rank(self) -> int:
        """Number of nontrivial cyclic summands."""
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def elements(self) -> list[tuple[int, ...]]:
        """All elements, lexicographic over invariant-factor digit vectors."""
        if self._elements is None:
            self._elements = list(
                itertools.product(*(range(d) for d in self.invariant_factors))
            )
        return self._elements

    def index_of(self, elem: Sequence[int]) -> int:
        e = tuple(elem)
        if self._index is None:
            self._index = {a: i for i, a in enumerate(self.elements())}
        return self._index[e]

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def project(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Image of an integer vector under Z^n -> A."""
        if len(vec) != self.nvars:
            raise ValueError("vector has wrong length")
        coords = [
            sum(self._U[i][j] * int(vec[j]) for j in range(self.nvars))
            for i in range(self.nvars)
        ]
        return tuple(coords[i] % self._dfull[i] for i in self._keep)

    def section(self, elem: Sequence[int]) -> tuple[int, ...]:
        """An integer preimage of an element (project(section(a)) == a)."""
        lift = [0] * self.nvars
        for pos, i in enumerate(self._keep):
            lift[i] = int(elem[pos])
        return tuple(
            sum(self._Uinv[i][j] * lift[j] for j in range(self.nvars))
            for i in range(self.nvars)
        )

    def order_of(self, elem: Sequence[int]) -> int:
        o = 1
        for x, d in zip(elem, self.invariant_factors):
            o = math.lcm(o, d // math.gcd(x, d))
        return o

    def subgroup_closure(self, gens: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
        """All elements of the subgroup generated by `gens` (BFS closure)."""
        seen = {self.identity()}
        frontier = [self.identity()]
        gens = [tuple(g) for g in gens]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.add(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return sorted(seen)

    def __repr__(self) -> str:
        body = " x ".join(f"Z/{d}" for d in self.invariant_factors) or "0"
        return f"FinAbGroup({body})"


def quotient(gamma: Subgroup) -> FinAbGroup:
    """Invariant-factor decomposition of Z^n / Gamma for full-rank Gamma."""
    n = gamma.nvars
    if not gamma.gens:
        raise ValueError("subgroup has no generators")
    # columns generate Gamma; SNF of the n x m generator matrix
    mat = [[g[i] for g in gamma.gens] for i in range(n)]
    D, U, _ = snf_with_transforms(mat)
    diag = [int(D[i, i]) for i in range(min(n, len(gamma.gens)))]
    if len(diag) < n or any(d == 0 for d in diag):
        raise ValueError("subgroup is not of full rank; quotient is infinite")
    Uint = [list(map(int, row)) for row in U]
    return FinAbGroup(n, diag, Uint, invert_unimodular(Uint))


def _size_reduce(basis: list[list[int]]) -> list[list[int]]:
    vecs = [list(v) for v in basis]

    def norm2(v):
        return sum(x * x for x in v)

    changed = True
    while changed:
        changed = False
        vecs.sort(key=norm2)
        for i in range(len(vecs)):
            for j in range(len(vecs)):
                if i == j:
                    continue
                denom = norm2(vecs[j])
                if denom == 0:
                    continue
                mu = nearest_div(sum(a * b for a, b in zip(vecs[i], vecs[j])), denom)
                if mu:
                    cand = [a - mu * b for a, b in zip(vecs[i], vecs[j])]
                    if norm2(cand) < norm2(vecs[i]):
                        vecs[i] = cand
                        changed = True
    return vecs


def min_norm_sq(gamma: Subgroup) -> int:
    """Exact squared norm of a shortest nonzero vector of Gamma.

    Bounded exhaustive enumeration after pairwise size reduction; guarded to
    ambient dimension <= 4 (desk scale).
    """
    if gamma.nvars > MIN_NORM_MAX_DIM:
        raise ValueError(f"min_norm enumeration is guarded to n <= {MIN_NORM_MAX_DIM}")
    basis = gamma.basis()
    if not basis:
        raise ValueError("zero lattice has no shortest vector")
    basis = _size_reduce(basis)
    r = len(basis)
    gram = [[sum(a * b for a, b in zip(basis[i], basis[j])) for j in range(r)] for i in range(r)]
    radius2 = min(gram[i][i] for i in range(r))
    # coefficient box from the inverse Gram: c^T G c <= R^2 implies
    # c_i^2 <= R^2 * (G^-1)_ii
    ginv_diag = []
    for i in range(r):
        e = [Fraction(1) if k == i else Fraction(0) for k in range(r)]
        col = intlinalg.solve_rational(gram, e)
        ginv_diag.append(col[i])
    bounds = []
    for i in range(r):
        b2 = Fraction(radius2) * ginv_diag[i]
        bounds.append(math.isqrt(b2.numerator // b2.denominator) + 1)
    total = math.prod(2 * b + 1 for b in bounds)
    if total > _ENUM_BUDGET:
        raise SearchBudgetExceeded(
            f"shortest-vector enumeration box of size {total} exceeds budget"
        )
    best = radius2
    for coeffs in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if not any(coeffs):
            continue
        q = 0
        for i in range(r):
            ci = coeffs[i]
            if ci:
                q += ci * ci * gram[i][i]
                for j in range(i + 1, r):
                    if coeffs[j]:
                        q += 2 * ci * coeffs[j] * gram[i][j]
        if 0 < q < best:
            best = q
    return best


def min_norm(gamma: Subgroup) -> float:
    """Euclidean norm of a shortest nonzero lattice vector."""
    return math.sqrt(min_norm_sq(gamma))


def coordinate_order(group: FinAbGroup, i: int) -> int:
    """Order of the image of the i-th standard basis vector in A."""
    if not 0 <= i < group.nvars:
        raise ValueError("coordinate index out of range")
    e = [0] * group.nvars
    e[i] = 1
    return group.order_of(group.project(e))


def perp(k: Sequence[int]) -> Subgroup:
    """The saturated rank n-1 lattice {m : k·m = 0}."""
    k = [int(x) for x in k]
    if not any(k):
        raise ValueError("perp of the zero vector is not a lattice of rank n-1")
    cols = kernel_basis([k])
    return Subgroup(len(k), tuple(tuple(c) for c in cols))


def gamma_sj(k: Sequence[int], j: int) -> Subgroup:
    """The finite-index subgroup (k)^perp + j*k, of index j*|k|^2.

    Requires coprime entries; the quotient is cyclic of order j*|k|^2 via
    m -> m·k (mod j*|k|^2).
    """
    k = tuple(int(x) for x in k)
    if j < 1:
        raise ValueError("j must be a positive integer")
    if reduce(math.gcd, k) != 1:
        raise ValueError("entries of k must be coprime (index formula fails otherwise)")
    base = perp(k)
    jk = tuple(j * x for x in k)
    return Subgroup(len(k), base.gens + (jk,))


@dataclass(frozen=True)
class Direction:
    """A unit vector with nonnegative coordinates."""

    coords: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(x) for x in self.coords))
        if any(x < 0 for x in self.coords):
            raise ValueError("direction coordinates must be nonnegative")
        n = math.sqrt(sum(x * x for x in self.coords))
        if abs(n - 1.0) > 1e-9:
            raise ValueError("direction must have Euclidean norm 1")

    @classmethod
    def from_vector(cls, vec: Sequence[float]) -> "Direction":
        n = math.sqrt(sum(float(x) ** 2 for x in vec))
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(tuple(float(x) / n for x in vec))

    def distance(self, other: "Direction") -> float:
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(self.coords, other.coords)))


def direction_of(group: FinAbGroup) -> Direction:
    """Unit vector along the coordinate orders (d_1(Gamma), ..., d_n(Gamma))."""
    ds = [coordinate_order(group, i) for i in range(group.nvars)]
    return Direction.from_vector(ds)


def lawton_norm(k: Sequence[int]) -> float:
    """The quantity <k> = <k^perp>: shortest nonzero norm of k's orthogonal
    lattice; +inf in one variable, where the orthogonal lattice is zero."""
    if len(k) == 1:
        return math.inf
    return min_norm(perp(k))


def converging_k_sequence(kappa: Direction, s: int, max_norm: int = 80) -> tuple[int, ...]:
    """Deterministic search for k with positive coprime entries, <k^perp> > s,
    and direction of (1/k_1, ..., 1/k_n) within 1/s of kappa (enforced when
    kappa is interior).  Searches coprime vectors in increasing max-norm.
    """
    n = len(kappa.coords)
    if s < 1:
        raise ValueError("s must be a positive integer")
    if n == 1:
        return (1,)
    interior = all(x > 0 for x in kappa.coords)
    for mnorm in range(1, max_norm + 1):
        for k in itertools.product(range(1, mnorm + 1), repeat=n):
            if max(k) != mnorm:
                continue
            if reduce(math.gcd, k) != 1:
                continue
            if interior:
                inv_dir = Direction.from_vector([1.0 / x for x in k])
                if inv_dir.distance(kappa) >= 1.0 / s:
                    continue
            if lawton_norm(k) <= s:
                continue
            return k
    raise SearchBudgetExceeded(
        f"no admissible k with max-norm <= {max_norm} for s={s}"
    )
