"""The integer group algebra Z[A] of a finite abelian group.

Regular-representation matrices, characters with exact rational rotation
numbers, the complementary ideals attached to a subgroup B (the principal
ideal of the norm element u_B = sum of B, and the augmentation-style ideal
generated by 1-b), lattice volumes, and quotient orders.  These furnish the
exact order identities |Z[A]/(alpha(B) + beta(B))| = |B|^(|A|/|B|) used as a
test surface by the growth experiments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import intlinalg
from .intlinalg import bareiss_det, hnf_rows, kernel_basis
from .lattices import FinAbGroup
from .laurent import LaurentPoly


@dataclass(frozen=True)
class GroupAlgElem:
    """An element of Z[A]: coefficients over the canonical element order."""

    group: FinAbGroup
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.group.order:
            raise ValueError("coefficient vector length differs from |A|")

    @classmethod
    def identity(cls, group: FinAbGroup) -> "GroupAlgElem":
        c = [0] * group.order
        c[group.index_of(group.identity())] = 1
        return cls(group, tuple(c))

    @classmethod
    def basis_element(cls, group: FinAbGroup, elem: Sequence[int]) -> "GroupAlgElem":
        c = [0] * group.order
        c[group.index_of(tuple(elem))] = 1
        return cls(group, tuple(c))

    def __add__(self, other: "GroupAlgElem") -> "GroupAlgElem":
        self._check(other)
        return GroupAlgElem(self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "GroupAlgElem") -> "GroupAlgElem":
        self._check(other)
        return GroupAlgElem(self.group, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "GroupAlgElem":
        return GroupAlgElem(self.group, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "GroupAlgElem") -> "GroupAlgElem":
        self._check(other)
        A = self.group
        elems = A.elements()
        out = [0] * A.order
        for i, a in enumerate(self.coeffs):
            if a:
                ei = elems[i]
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[A.index_of(A.add(ei, elems[j]))] += a * b
        return GroupAlgElem(A, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other):
        if other.group is not self.group and other.group.invariant_factors != self.group.invariant_factors:
            raise ValueError("elements of different group algebras")


def project_poly(f: LaurentPoly, group: FinAbGroup) -> GroupAlgElem:
    """Push a Laurent polynomial along Z[t1^±,...] -> Z[A_Gamma].

    Sums coefficients over exponent classes mod Gamma.
    """
    if f.nvars != group.nvars:
        raise ValueError("dimension mismatch between polynomial and group")
    out = [0] * group.order
    for exp, c in f.terms:
        out[group.index_of(group.project(exp))] += c
    return GroupAlgElem(group, tuple(out))


def mult_matrix(a: GroupAlgElem) -> list[list[int]]:
    """Matrix of x -> a*x on Z[A] in the canonical basis (columns = images).

    Dense |A| x |A| output: memory is O(|A|^2).
    """
    A = a.group
    n = A.order
    elems = A.elements()
    out = [[0] * n for _ in range(n)]
    support = [(elems[i], c) for i, c in enumerate(a.coeffs) if c]
    for j in range(n):
        gj = elems[j]
        for h, c in support:
            out[A.index_of(A.add(h, gj))][j] += c
    return out


@dataclass(frozen=True)
class SubLattice:
    """A sublattice of Z^ambient stored by its canonical Hermite basis."""

    ambient: int
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "vectors", tuple(tuple(int(x) for x in v) for v in self.vectors)
        )
        for v in self.vectors:
            if len(v) != self.ambient:
                raise ValueError("vector length differs from ambient rank")

    @classmethod
    def from_generators(cls, ambient: int, vecs: Sequence[Sequence[int]]) -> "SubLattice":
        basis = hnf_rows(vecs) if vecs else []
        return cls(ambient, tuple(tuple(v) for v in basis))

    @classmethod
    def standard(cls, ambient: int) -> "SubLattice":
        return cls.from_generators(
            ambient, [[1 if i == j else 0 for i in range(ambient)] for j in range(ambient)]
        )

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def contains(self, vec: Sequence[int]) -> bool:
        return intlinalg.lattice_contains(self.vectors, vec) if self.vectors else not any(vec)


def norm_element(group: FinAbGroup, subgroup_elems: Sequence[Sequence[int]]) -> GroupAlgElem:
    """u_B: the sum of the elements of B inside Z[A]."""
    c = [0] * group.order
    for b in subgroup_elems:
        c[group.index_of(tuple(b))] += 1
    return GroupAlgElem(group, tuple(c))


def alpha_ideal(group: FinAbGroup, b_gens: Sequence[Sequence[int]]) -> SubLattice:
    """The principal ideal (u_B) of Z[A] as a sublattice of Z^|A|.

    Spanned by {g * u_B : g in A}; its Z-rank is |A|/|B|.
    """
    B = group.subgroup_closure(b_gens)
    vecs = []
    seen: set[int] = set()
    for g in group.elements():
        gi = group.index_of(g)
        if gi in seen:
            continue
        v = [0] * group.order
        for b in B:
            idx = group.index_of(group.add(g, b))
            v[idx] += 1
            seen.add(idx)
        vecs.append(v)
    lat = SubLattice.from_generators(group.order, vecs)
    assert lat.rank == group.order // len(B)
    return lat


def beta_ideal(group: FinAbGroup, b_gens: Sequence[Sequence[int]]) -> SubLattice:
    """The ideal of Z[A] generated by {1 - b : b in B}, as a sublattice.

    Spanned by {g*(1-b)}; the kernel lattice of Z[A] -> Z[A/B].
    """
    elems = group.elements()
    vecs = []
    for g in elems:
        gi = group.index_of(g)
        for b in b_gens:
            v = [0] * group.order
            v[gi] += 1
            v[group.index_of(group.add(g, tuple(b)))] -= 1
            if any(v):
                vecs.append(v)
    return SubLattice.from_generators(group.order, vecs)


def gram_det(lat: SubLattice) -> int:
    """Exact Gram determinant det(<v_i, v_j>) of the stored basis."""
    r = lat.rank
    gram = [
        [sum(a * b for a, b in zip(lat.vectors[i], lat.vectors[j])) for j in range(r)]
        for i in range(r)
    ]
    return bareiss_det(gram)


def vol(lat: SubLattice) -> float:
    """Lattice volume sqrt|det Gram|; >= 1 for nonzero integral lattices."""
    if lat.rank == 0:
        return 1.0
    return math.sqrt(gram_det(lat))


def quotient_order(outer: SubLattice, inner: SubLattice) -> int:
    """|outer / inner| for a finite-index sublattice of equal rank."""
    if inner.rank != outer.rank:
        raise ValueError("quotient_order requires equal ranks (finite index)")
    coords = []
    for v in inner.vectors:
        x = intlinalg.hnf_coordinates(outer.vectors, v)
        if x is None:
            raise ValueError("inner lattice is not contained in outer lattice")
        coords.append(x)
    return abs(bareiss_det(coords))


def sum_ideals(lats: Sequence[SubLattice]) -> SubLattice:
    """Lattice sum via concatenation of generators and reduction."""
    if not lats:
        raise ValueError("empty sum")
    ambient = lats[0].ambient
    vecs: list[Sequence[int]] = []
    for lat in lats:
        if lat.ambient != ambient:
            raise ValueError("ambient rank mismatch")
        vecs.extend(lat.vectors)
    return SubLattice.from_generators(ambient, vecs)


def intersect_ideals(lats: Sequence[SubLattice]) -> SubLattice:
    """Lattice intersection via integer kernels, pairwise."""
    if not lats:
        raise ValueError("empty intersection")
    ambient = lats[0].ambient
    acc = lats[0]
    for lat in lats[1:]:
        if lat.ambient != ambient:
            raise ValueError("ambient rank mismatch")
        if acc.rank == 0 or lat.rank == 0:
            acc = SubLattice.from_generators(ambient, [])
            continue
        # columns: acc basis then lat basis; kernel rows give x with
        # sum x_i acc_i = sum y_j lat_j
        cols = [list(v) for v in acc.vectors] + [list(v) for v in lat.vectors]
        mat = [[cols[k][i] for k in range(len(cols))] for i in range(ambient)]
        ker = kernel_basis(mat)
        vecs = []
        for kv in ker:
            x = kv[: acc.rank]
            vec = [
                sum(x[i] * acc.vectors[i][c] for i in range(acc.rank))
                for c in range(ambient)
            ]
            vecs.append(vec)
        acc = SubLattice.from_generators(ambient, vecs)
    return acc


def orthogonal_complement(lat: SubLattice) -> SubLattice:
    """{x in Z^ambient : <x, v> = 0 for all v in the lattice} (primitive)."""
    if lat.rank == 0:
        return SubLattice.standard(lat.ambient)
    ker = kernel_basis([list(v) for v in lat.vectors])
    return SubLattice.from_generators(lat.ambient, [list(c) for c in ker])


@dataclass(frozen=True)
class Character:
    """A character of A = Z^n/Gamma as a root-of-unity tuple.

    `rotations` are exact rational rotation numbers q_i with z_i =
    exp(2*pi*i*q_i), one per ambient variable, and z^gamma = 1 on Gamma.
    `digits` indexes the character against the canonical element order.
    """

    digits: tuple[int, ...]
    rotations: tuple[Fraction, ...]
    factors: tuple[int, ...]

    def value_on(self, elem: Sequence[int]) -> Fraction:
        """Rotation number of chi(a) for an element in digit form."""
        q = sum(Fraction(c * a, d) for c, a, d in zip(self.digits, elem, self.factors))
        return q % 1

    def point(self) -> tuple[complex, ...]:
        """The complex point (z_1, ..., z_n) on the torus."""
        return tuple(cmath.exp(2j * cmath.pi * float(q)) for q in self.rotations)

    def eval_poly(self, f: LaurentPoly) -> complex:
        return f.evaluate(self.point())


def characters(group: FinAbGroup) -> list[Character]:
    """All |A| characters, ordered like the element enumeration."""
    basis_images = []
    for i in range(group.nvars):
        e = [0] * group.nvars
        e[i] = 1
        basis_images.append(group.project(e))
    out = []
    for digits in group.elements():
        rots = []
        for img in basis_images:
            q = sum(
                Fraction(c * a, d)
                for c, a, d in zip(digits, img, group.invariant_factors)
            )
            rots.append(q % 1)
        out.append(Character(digits, tuple(rots), group.invariant_factors))
    return out
