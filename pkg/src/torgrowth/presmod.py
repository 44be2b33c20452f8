"""Finitely generated modules over Z[t1^±1,...,tn^±1] via presentation matrices.

A presentation matrix has m1 rows (relations) and m0 columns (generators),
presenting R^m1 -> R^m0 -> M -> 0.  The j-th Alexander polynomial is the
GCD of all (m0-j)-minors, with the degenerate conventions: nothing left to
take (m0-j <= 0) gives 1, minors larger than the matrix (m0-j > m1) give 0.

Also here: Fox calculus for group presentations, the chain complex of the
universal abelian cover of the associated 2-complex, and the block
presentation of the branched-cover module.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence

from .laurent import (
    LaurentPoly,
    UnitNormalForm,
    div_exact,
    gcd_list,
    normalize_unit,
    parse_poly,
    poly_from_json,
    poly_to_json,
)

MINOR_GUARD = 8


def _as_poly(entry, nvars: int) -> LaurentPoly:
    if isinstance(entry, LaurentPoly):
        if entry.nvars != nvars:
            raise ValueError("matrix entries disagree on the number of variables")
        return entry
    return LaurentPoly.constant(nvars, int(entry))


@dataclass(frozen=True)
class PresentedModule:
    """An R-module given by an m1 x m0 presentation matrix over R.

    `m0` (the generator count) may be omitted whenever the matrix has at
    least one row; a relation-free presentation needs it spelled out.
    """

    nvars: int
    matrix: tuple[tuple[LaurentPoly, ...], ...]
    m0: int = -1

    def __post_init__(self):
        rows = tuple(
            tuple(_as_poly(e, self.nvars) for e in row) for row in self.matrix
        )
        object.__setattr__(self, "matrix", rows)
        if rows:
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                raise ValueError("ragged presentation matrix")
            width = widths.pop()
            if self.m0 == -1:
                object.__setattr__(self, "m0", width)
            elif self.m0 != width:
                raise ValueError("m0 disagrees with the matrix width")
        elif self.m0 < 0:
            raise ValueError("a relation-free presentation needs an explicit m0")

    @property
    def m1(self) -> int:
        return len(self.matrix)

    @classmethod
    def free(cls, nvars: int, rank: int) -> "PresentedModule":
        """The free module R^rank (empty relation matrix)."""
        return cls(nvars, (), rank)

    @classmethod
    def quotient_by_ideal(cls, nvars: int, gens: Sequence[LaurentPoly]) -> "PresentedModule":
        """R/(f1,...,fl): one generator, one relation row per ideal generator."""
        return cls(nvars, tuple((_as_poly(g, nvars),) for g in gens), 1)

    def direct_sum(self, other: "PresentedModule") -> "PresentedModule":
        if other.nvars != self.nvars:
            raise ValueError("dimension mismatch")
        z = LaurentPoly.zero(self.nvars)
        rows = [tuple(r) + (z,) * other.m0 for r in self.matrix]
        rows += [(z,) * self.m0 + tuple(r) for r in other.matrix]
        return PresentedModule(self.nvars, tuple(rows), self.m0 + other.m0)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "m0": self.m0,
            "matrix": [[poly_to_json(e) for e in row] for row in self.matrix],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PresentedModule":
        nvars = int(data["nvars"])
        rows = tuple(
            tuple(poly_from_json(e, nvars) for e in row) for row in data["matrix"]
        )
        return cls(nvars, rows, int(data.get("m0", -1)))


def _poly_det(rows: list[list[LaurentPoly]], nvars: int) -> LaurentPoly:
    """Fraction-free (Bareiss) determinant over the Laurent ring."""
    n = len(rows)
    if n == 0:
        return LaurentPoly.one(nvars)
    a = [list(r) for r in rows]
    sign = 1
    prev = LaurentPoly.one(nvars)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly.zero(nvars)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pk = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pk * a[i][j] - a[i][k] * a[k][j]
                q = div_exact(num, prev)
                assert q is not None, "Bareiss division failed"
                a[i][j] = q
            a[i][k] = LaurentPoly.zero(nvars)
        prev = pk
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def rank(mod: PresentedModule) -> int:
    """Rank of M over the fraction field: m0 minus the matrix rank.

    Exact fraction-free elimination; no probabilistic evaluation.
    """
    rows = [list(r) for r in mod.matrix]
    if not rows:
        return mod.m0
    nvars = mod.nvars
    m, n = len(rows), mod.m0
    prev = LaurentPoly.one(nvars)
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        pk = rows[row][col]
        for i in range(row + 1, m):
            for j in range(col + 1, n):
                num = pk * rows[i][j] - rows[i][col] * rows[row][j]
                q = div_exact(num, prev)
                assert q is not None
                rows[i][j] = q
            rows[i][col] = LaurentPoly.zero(nvars)
        prev = pk
        row += 1
        if row == m:
            break
    return mod.m0 - row


def alexander(mod: PresentedModule, j: int) -> UnitNormalForm:
    """The j-th Alexander polynomial: GCD of the (m0-j)-minors, normalized."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    k = mod.m0 - j
    if k <= 0:
        return normalize_unit(LaurentPoly.one(mod.nvars))
    if k > mod.m1:
        return normalize_unit(LaurentPoly.zero(mod.nvars))
    if mod.m0 > MINOR_GUARD or mod.m1 > MINOR_GUARD:
        raise ValueError(
            f"minor enumeration guarded to presentations of size <= {MINOR_GUARD}"
        )
    acc = LaurentPoly.zero(mod.nvars)
    for rows_idx in itertools.combinations(range(mod.m1), k):
        for cols_idx in itertools.combinations(range(mod.m0), k):
            sub = [[mod.matrix[i][c] for c in cols_idx] for i in rows_idx]
            acc = (gcd_list([acc, _poly_det(sub, mod.nvars)], mod.nvars)).poly
            if acc.is_one():
                return normalize_unit(acc)
    return normalize_unit(acc)


def all_alexander(mod: PresentedModule) -> list[UnitNormalForm]:
    """Delta_j for j = 0..m0 (the last one is always 1)."""
    return [alexander(mod, j) for j in range(mod.m0 + 1)]


def delta(mod: PresentedModule) -> UnitNormalForm:
    """The first non-vanishing Alexander polynomial Delta(M) = Delta_rank(M)."""
    r = rank(mod)
    d = alexander(mod, r)
    assert not d.poly.is_zero()
    return d


def is_pseudo_zero_torsion(mod: PresentedModule) -> bool:
    """Pseudo-zero test for torsion modules: Delta_0(M) = 1.

    Raises for modules of positive rank, where the criterion does not apply.
    """
    if rank(mod) != 0:
        raise ValueError("pseudo-zero criterion applies to torsion modules only")
    return alexander(mod, 0).poly.is_one()


# ---------------------------------------------------------------------------
# Group presentations and Fox calculus
# ---------------------------------------------------------------------------


def _free_reduce(word: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(int(letter))
    return tuple(out)


@dataclass(frozen=True)
class GroupPresentation:
    """Generators, relator words, and the abelianization map rho.

    Words are sequences of nonzero signed 1-based generator indices, stored
    freely reduced.  rho sends each generator to a unit monomial in R.
    """

    ngens: int
    relators: tuple[tuple[int, ...], ...]
    rho: tuple[LaurentPoly, ...]

    def __post_init__(self):
        if len(self.rho) != self.ngens:
            raise ValueError("rho must assign an image to every generator")
        nv = {p.nvars for p in self.rho}
        if len(nv) != 1:
            raise ValueError("rho images disagree on the number of variables")
        for p in self.rho:
            if not p.is_unit():
                raise ValueError("rho images must be unit monomials")
        object.__setattr__(
            self, "relators", tuple(_free_reduce(w) for w in self.relators)
        )
        for w in self.relators:
            for letter in w:
                if letter == 0 or abs(letter) > self.ngens:
                    raise ValueError(f"letter {letter} out of range")

    @property
    def nvars(self) -> int:
        return self.rho[0].nvars

    def rho_of_word(self, word: Sequence[int]) -> LaurentPoly:
        out = LaurentPoly.one(self.nvars)
        for letter in word:
            img = self.rho[abs(letter) - 1]
            out = out * (img if letter > 0 else img ** -1)
        return out


def fox_derivative(word: Sequence[int], gen: int, pres: GroupPresentation) -> LaurentPoly:
    """rho-image of the free derivative d(word)/d(x_gen), gen 0-based.

    Satisfies sum_x d(w)/dx * (rho(x) - 1) = rho(w) - 1.
    """
    word = _free_reduce(word)
    if any(letter == 0 or abs(letter) > pres.ngens for letter in word):
        raise ValueError("malformed word")
    nv = pres.nvars
    total = LaurentPoly.zero(nv)
    prefix = LaurentPoly.one(nv)
    for letter in word:
        idx = abs(letter) - 1
        img = pres.rho[idx]
        if idx == gen:
            if letter > 0:
                total = total + prefix
            else:
                total = total - prefix * img ** -1
        prefix = prefix * (img if letter > 0 else img ** -1)
    return total


@dataclass(frozen=True)
class ChainComplex:
    """Free chain complex over R: diffs[i] is the boundary C_{i+1} -> C_i.

    Matrices use the row convention (rows index the source basis), so the
    composite of consecutive boundaries is the product diffs[i+1]*diffs[i],
    which must vanish.  `ranks` lists the free ranks of C_0..C_top and is
    derived from the matrices when omitted.
    """

    nvars: int
    diffs: tuple[tuple[tuple[LaurentPoly, ...], ...], ...]
    ranks: tuple[int, ...] = ()

    def __post_init__(self):
        diffs = tuple(
            tuple(tuple(_as_poly(e, self.nvars) for e in row) for row in mat)
            for mat in self.diffs
        )
        object.__setattr__(self, "diffs", diffs)
        if not self.ranks:
            if not diffs or not diffs[0]:
                raise ValueError("cannot derive ranks; pass them explicitly")
            ranks = [len(diffs[0][0])]
            for mat in diffs:
                ranks.append(len(mat))
            object.__setattr__(self, "ranks", tuple(ranks))
        if len(self.ranks) != len(diffs) + 1:
            raise ValueError("ranks must cover degrees 0..top")
        for i, mat in enumerate(diffs):
            if len(mat) != self.ranks[i + 1]:
                raise ValueError(f"boundary {i + 1} has wrong row count")
            if mat and len(mat[0]) != self.ranks[i]:
                raise ValueError(f"boundary {i + 1} has wrong column count")
        for up, down in zip(diffs[1:], diffs):
            for i in range(len(up)):
                for j in range(len(down[0]) if down else 0):
                    s = LaurentPoly.zero(self.nvars)
                    for k in range(len(down)):
                        s = s + up[i][k] * down[k][j]
                    if not s.is_zero():
                        raise ValueError("boundary composition is nonzero")

    @property
    def top_degree(self) -> int:
        return len(self.diffs)

    def coker_module(self, i: int) -> PresentedModule:
        """The module presented by the boundary into degree i."""
        if not 0 <= i <= self.top_degree:
            raise ValueError("degree out of range")
        if i == self.top_degree:
            return PresentedModule.free(self.nvars, self.ranks[i])
        return PresentedModule(self.nvars, self.diffs[i], self.ranks[i])


def alexander_complex(pres: GroupPresentation) -> ChainComplex:
    """Cellular complex of the universal abelian cover of the presentation
    2-complex: 0 -> R^m --d2--> R^(m+1) --d1--> R -> 0.

    d1 has rows (1 - rho(a_i)); d2 is the Fox Jacobian of the relators, and
    the composite vanishes by the fundamental identity of Fox calculus.
    """
    nv = pres.nvars
    one = LaurentPoly.one(nv)
    d1 = tuple((one - pres.rho[i],) for i in range(pres.ngens))
    d2 = tuple(
        tuple(fox_derivative(w, g, pres) for g in range(pres.ngens))
        for w in pres.relators
    )
    return ChainComplex(nv, (d1, d2), (1, pres.ngens, len(pres.relators)))


def alexander_module(pres: GroupPresentation) -> PresentedModule:
    """coker of the Fox Jacobian (the module presented by the relators)."""
    cx = alexander_complex(pres)
    return PresentedModule(pres.nvars, cx.diffs[1], pres.ngens)


def branched_module(d2, n: int, nvars: int | None = None) -> PresentedModule:
    """Block presentation [[d2, 0], [I, T]] of the branched-cover module.

    d2 is the m x (m+1) Fox Jacobian (no rows for the unknot spine);
    T = diag(1 - t_i) over the n link-component variables.  The Z-torsion of
    this module over Z[A_Gamma] computes the branched-cover homology torsion.
    """
    if isinstance(d2, PresentedModule):
        nvars = d2.nvars
        rows = [list(r) for r in d2.matrix]
        m0 = d2.m0
    else:
        rows = [list(r) for r in d2]
        if rows:
            nvars = rows[0][0].nvars
            m0 = len(rows[0])
        else:
            if nvars is None:
                raise ValueError("an empty d2 needs an explicit nvars")
            m0 = 1
    m = len(rows)
    if nvars != n:
        raise ValueError("number of variables must equal the number of link components")
    if m0 != m + 1:
        raise ValueError(f"d2 must have shape m x (m+1), got {m} x {m0}")
    if m + 1 < n:
        raise ValueError("need at least n generators (m+1 >= n)")
    zero = LaurentPoly.zero(nvars)
    one = LaurentPoly.one(nvars)
    out = []
    for r in rows:
        out.append(tuple(r) + (zero,) * n)
    for i in range(n):
        left = [zero] * (m + 1)
        left[i] = one
        right = [zero] * n
        right[i] = one - LaurentPoly.variable(i, nvars)
        out.append(tuple(left) + tuple(right))
    return PresentedModule(nvars, tuple(out), m0 + n)


# ---------------------------------------------------------------------------
# Presentation text format
# ---------------------------------------------------------------------------

_WORD_TOKEN = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?")


def parse_presentation(text: str) -> GroupPresentation:
    """Parse the presentation file format:

        gens: x y
        rho: x -> t1, y -> t1
        rel: x y x y^-1 x^-1 y^-1

    One relator per `rel:` line; rho images are unit monomials, and `#`
    starts a comment.
    """
    gens: list[str] = []
    rel_lines: list[str] = []
    rho_raw: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gens:"):
            gens = line[len("gens:"):].split()
        elif line.startswith("rho:"):
            for part in line[len("rho:"):].split(","):
                part = part.strip()
                if not part:
                    continue
                if "->" not in part:
                    raise ValueError(f"line {lineno}: rho entries look like 'x -> t1'")
                name, img = part.split("->", 1)
                rho_raw[name.strip()] = img.strip()
        elif line.startswith("rel:"):
            rel_lines.append(line[len("rel:"):].strip())
        else:
            raise ValueError(f"line {lineno}: unknown directive {line!r}")
    if not gens:
        raise ValueError("missing 'gens:' line")
    if set(rho_raw) != set(gens):
        raise ValueError("rho must be defined exactly on the generators")
    nvars = 1
    for img in rho_raw.values():
        for m in re.finditer(r"t(\d+)", img):
            nvars = max(nvars, int(m.group(1)))
    rho_map = {name: parse_poly(rho_raw[name], nvars) for name in gens}
    index = {name: i + 1 for i, name in enumerate(gens)}
    relators = []
    for line in rel_lines:
        word: list[int] = []
        pos = 0
        for m in _WORD_TOKEN.finditer(line):
            if line[pos:m.start()].strip(" *"):
                raise ValueError(f"cannot parse relator {line!r}")
            pos = m.end()
            name, exp = m.group(1), int(m.group(2) or 1)
            if name not in index:
                raise ValueError(f"unknown generator {name!r} in relator")
            letter = index[name]
            step = letter if exp > 0 else -letter
            word.extend([step] * abs(exp))
        if line[pos:].strip(" *"):
            raise ValueError(f"cannot parse relator {line!r}")
        relators.append(tuple(word))
    return GroupPresentation(
        len(gens), tuple(relators), tuple(rho_map[g] for g in gens)
    )


TREFOIL_PRESENTATION = """\
gens: x y
rho: x -> t1, y -> t1
rel: x y x y^-1 x^-1 y^-1
"""

FIGURE_EIGHT_PRESENTATION = """\
gens: x y
rho: x -> t1, y -> t1
rel: x^-1 y x y^-1 x y x^-1 y^-1 x y^-1
"""

HOPF_LINK_PRESENTATION = """\
gens: x y
rho: x -> t1, y -> t2
rel: x y x^-1 y^-1
"""
