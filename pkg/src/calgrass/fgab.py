"""Finitely generated abelian groups with exact integer arithmetic.

Matrices are handled as lists of lists of Python ints so that coefficient
growth never overflows.  Public functions accept anything convertible to
such a list (nested lists, integer numpy arrays).
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

# -- integer matrices ----------------------------------------------------------


def _as_int_matrix(M, shape=None) -> list[list[int]]:
    if isinstance(M, np.ndarray):
        if M.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
        M = M.tolist()
    rows = []
    for row in M:
        r = []
        for x in row:
            if isinstance(x, bool) or int(x) != x:
                raise ValueError(f"non-integer entry {x!r}")
            r.append(int(x))
        rows.append(r)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    if shape is not None:
        m, n = shape
        if not rows:
            rows = [[] for _ in range(m)] if n == 0 else [[0] * n for _ in range(m)]
        if len(rows) != m or (rows and len(rows[0]) != n):
            got = (len(rows), len(rows[0]) if rows else 0)
            raise ValueError(f"matrix has shape {got}, expected {shape}")
    return rows


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(A, B) -> list[list[int]]:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(inner)) for j in range(cols)] for i in range(len(A))]


def _to_array(A, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=object)
    for i, row in enumerate(A):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


@dataclass
class _SNF:
    D: list[list[int]]
    U: list[list[int]]
    Uinv: list[list[int]]
    V: list[list[int]]
    Vinv: list[list[int]]
    diagonal: list[int]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _snf(M: list[list[int]], m: int, n: int) -> _SNF:
    """Smith normal form ``U M V = D`` with inverses of both transforms."""
    A = [list(r) for r in M]
    U, Uinv, V, Vinv = _identity(m), _identity(m), _identity(n), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for r in Uinv:
            r[src] -= q * r[dst]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    diagonal = []
    t = 0
    while t < min(m, n):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    add_row(i, t, -q)
                clean &= A[i][t] == 0
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(j, t, -q)
                clean &= A[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if best is None:
            break
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
            for r in Uinv:
                r[t] = -r[t]
        diagonal.append(A[t][t])
        t += 1
    return _SNF(A, U, Uinv, V, Vinv, diagonal)


def smith_normal_form(M):
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` over the integers.

    ``U`` and ``V`` are unimodular and the nonzero diagonal entries of ``D``
    form a divisor chain.  Results are numpy object arrays of Python ints.
    """
    rows = _as_int_matrix(M)
    m = len(rows)
    n = len(rows[0]) if rows else (np.shape(M)[1] if np.ndim(M) == 2 else 0)
    rows = rows if rows else []
    s = _snf(rows, m, n)
    return _to_array(s.U, (m, m)), _to_array(s.D, (m, n)), _to_array(s.V, (n, n))


def integer_determinant(M) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss elimination)."""
    A = [list(r) for r in _as_int_matrix(M)]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("matrix is not square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def invariant_factors(M) -> list[int]:
    rows = _as_int_matrix(M)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    return _snf(rows, m, n).diagonal


# -- lattices --------------------------------------------------------------------
# A lattice in Z^n is given by a list of generator columns (a list of vectors).


def _columns_to_matrix(cols: list[list[int]], n: int) -> list[list[int]]:
    return [[c[i] for c in cols] for i in range(n)]


def kernel_basis(M, ncols: int | None = None) -> list[list[int]]:
    """Basis (list of integer vectors) of ``{x in Z^n : M x = 0}``."""
    rows = _as_int_matrix(M)
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if m == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    s = _snf(rows, m, n)
    return [[s.V[i][j] for i in range(n)] for j in range(s.rank, n)]


def lattice_basis(gens: list[list[int]], n: int) -> list[list[int]]:
    """A basis of the lattice spanned by ``gens`` in Z^n."""
    if not gens:
        return []
    M = _columns_to_matrix(gens, n)
    s = _snf(M, n, len(gens))
    # M = Uinv D Vinv, so the first r columns of Uinv scaled by d_i span the image
    return [[s.Uinv[i][j] * s.diagonal[j] for i in range(n)] for j in range(s.rank)]


def solve_in_lattice(basis: list[list[int]], v: list[int], n: int) -> list[int] | None:
    """Integer coordinates of ``v`` in ``basis`` (independent columns), or None."""
    if not basis:
        return [] if all(x == 0 for x in v) else None
    M = _columns_to_matrix(basis, n)
    s = _snf(M, n, len(basis))
    Uv = [sum(s.U[i][t] * v[t] for t in range(n)) for i in range(n)]
    y = []
    for i in range(n):
        if i < s.rank:
            if Uv[i] % s.diagonal[i]:
                return None
            y.append(Uv[i] // s.diagonal[i])
        elif Uv[i]:
            return None
    y += [0] * (len(basis) - len(y))
    return [sum(s.V[j][t] * y[t] for t in range(len(basis))) for j in range(len(basis))]


def subquotient(L_basis: list[list[int]], K_gens: list[list[int]], n: int) -> "FgAbGroup":
    """The group ``L / K`` for lattices ``K ⊂ L ⊂ Z^n``."""
    coords = []
    for k in K_gens:
        c = solve_in_lattice(L_basis, k, n)
        if c is None:
            raise ValueError("sublattice is not contained in the lattice")
        coords.append(c)
    r = len(L_basis)
    return FgAbGroup.from_relations(_columns_to_matrix(coords, r) if coords else [[] for _ in range(r)], r)


# -- groups ------------------------------------------------------------------------

_TERM = re.compile(r"^(?:Z|ℤ)(?:_?\{?(\d+)\}?)?(?:\^\{?(\d+)\}?)?$")


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^rank ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_s}`` with ``d_1 | d_2 | ... | d_s``, each ``d_i >= 2``.

    Any list of cyclic orders is accepted and normalized to the divisor
    chain, so ``FgAbGroup(0, (2, 3)) == FgAbGroup(0, (6,))``.
    """

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        orders = [int(d) for d in self.torsion]
        if any(d < 0 for d in orders):
            raise ValueError(f"cyclic orders must be non-negative, got {orders}")
        extra_rank = sum(1 for d in orders if d == 0)
        orders = [d for d in orders if d > 1]
        diag = [[orders[i] if i == j else 0 for j in range(len(orders))] for i in range(len(orders))]
        chain = tuple(invariant_factors(diag)) if orders else ()
        object.__setattr__(self, "rank", int(self.rank) + extra_rank)
        object.__setattr__(self, "torsion", tuple(d for d in chain if d > 1))

    # constructors
    @classmethod
    def zero(cls) -> "FgAbGroup":
        return cls()

    @classmethod
    def free(cls, rank: int = 1) -> "FgAbGroup":
        return cls(rank)

    @classmethod
    def cyclic(cls, m: int) -> "FgAbGroup":
        """``Z/m``; ``m = 0`` gives Z."""
        return cls(0, (m,))

    @classmethod
    def from_relations(cls, R, ngens: int) -> "FgAbGroup":
        """Cokernel ``Z^ngens / (column span of R)``."""
        rows = _as_int_matrix(R) if R else []
        if rows and len(rows) != ngens:
            raise ValueError(f"relation matrix has {len(rows)} rows, expected {ngens}")
        ncols = len(rows[0]) if rows else 0
        diag = _snf(rows, ngens, ncols).diagonal if rows and ncols else []
        return cls(ngens - len(diag), tuple(diag))

    @classmethod
    def parse(cls, text: str) -> "FgAbGroup":
        """Parse ``"0"``, ``"Z"``, ``"Z2"``, ``"Z+Z2"``, ``"Z^2"``, ``"Z2^2+Z4"``, ``"Z_2"``."""
        s = str(text).replace(" ", "").replace("⊕", "+")
        if s in ("0", ""):
            return cls()
        rank, orders = 0, []
        for term in s.split("+"):
            m = _TERM.match(term)
            if not m:
                raise ValueError(f"cannot parse group term {term!r} in {text!r}")
            order = int(m.group(1)) if m.group(1) else 0
            count = int(m.group(2)) if m.group(2) else 1
            if order == 1:
                continue
            if order == 0:
                rank += count
            else:
                orders += [order] * count
        return cls(rank, tuple(orders))

    # structure
    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def orders(self) -> list[int]:
        """Order of each canonical generator, 0 meaning infinite."""
        return [0] * self.rank + list(self.torsion)

    def relation_matrix(self) -> list[list[int]]:
        """Diagonal presentation on the canonical generators."""
        o = self.orders
        return [[o[i] if i == j else 0 for j in range(len(o))] for i in range(len(o))]

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def order(self) -> int | None:
        return math.prod(self.torsion) if self.rank == 0 else None

    def p_rank(self, p: int) -> int:
        """Number of cyclic summands of order divisible by ``p`` (dimension of the p-torsion)."""
        return sum(1 for d in self.torsion if d % p == 0)

    def free_part(self) -> "FgAbGroup":
        return FgAbGroup(self.rank)

    def torsion_part(self) -> "FgAbGroup":
        return FgAbGroup(0, self.torsion)

    def __add__(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup(self.rank + other.rank, self.torsion + other.torsion)

    def __mul__(self, count: int) -> "FgAbGroup":
        return FgAbGroup(self.rank * count, self.torsion * count)

    __rmul__ = __mul__

    def __bool__(self):
        return not self.is_zero

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        for d, grp in itertools.groupby(self.torsion):
            c = len(list(grp))
            parts.append(f"Z{d}" if c == 1 else f"Z{d}^{c}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"FgAbGroup({str(self)!r})"


def G(text) -> FgAbGroup:
    """Shorthand for :meth:`FgAbGroup.parse`; passes groups through."""
    return text if isinstance(text, FgAbGroup) else FgAbGroup.parse(text)


def group_list(items) -> list[FgAbGroup]:
    return [G(x) for x in items]


def format_list(groups) -> str:
    return "(" + ", ".join(str(g) for g in groups) + ")"


def _cyclic_pairs(A: FgAbGroup, B: FgAbGroup):
    return itertools.product(A.orders, B.orders)


def tensor(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    # Z/a ⊗ Z/b = Z/gcd(a, b) with 0 standing for Z
    return FgAbGroup(0, tuple(math.gcd(a, b) for a, b in _cyclic_pairs(A, B)))


def tor(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    return FgAbGroup(0, tuple(math.gcd(a, b) for a, b in _cyclic_pairs(A, B) if a and b))


def hom(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    # Hom(Z, Z/b) = Z/b, Hom(Z/a, Z) = 0, Hom(Z/a, Z/b) = Z/gcd
    return FgAbGroup(0, tuple(b if a == 0 else math.gcd(a, b) for a, b in _cyclic_pairs(A, B) if a == 0 or b))


def ext(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    # Ext(Z, -) = 0, Ext(Z/a, Z) = Z/a, Ext(Z/a, Z/b) = Z/gcd
    return FgAbGroup(0, tuple(a if b == 0 else math.gcd(a, b) for a, b in _cyclic_pairs(A, B) if a))


# -- homomorphisms -------------------------------------------------------------------


def _entry_allowed(src_order: int, tgt_order: int, value: int) -> bool:
    if src_order == 0:
        return True
    if tgt_order == 0:
        return value == 0
    return (value * src_order) % tgt_order == 0


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism given by its matrix on canonical generators.

    Column ``j`` is the image of source generator ``j``.  Entries in rows of
    torsion target generators are reduced modulo the generator order.
    """

    source: FgAbGroup
    target: FgAbGroup
    matrix: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        m, n = self.target.ngens, self.source.ngens
        rows = _as_int_matrix(self.matrix, (m, n)) if self.matrix or m * n == 0 else None
        if rows is None:
            rows = [[0] * n for _ in range(m)]
        orders = self.target.orders
        rows = [[x % orders[i] if orders[i] else x for x in row] for i, row in enumerate(rows)]
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in rows))
        bad = self.violations()
        if bad:
            raise ValueError(f"not a homomorphism {self.source} -> {self.target}: {bad[0]}")

    @classmethod
    def zero(cls, A: FgAbGroup, B: FgAbGroup) -> "GroupHom":
        return cls(A, B)

    @classmethod
    def scalar(cls, A: FgAbGroup, B: FgAbGroup, c: int) -> "GroupHom":
        """Multiplication by ``c`` between groups with a single generator each."""
        if A.ngens != 1 or B.ngens != 1:
            raise ValueError("scalar maps need cyclic source and target")
        return cls(A, B, ((c,),))

    def violations(self) -> list[str]:
        out = []
        so, to = self.source.orders, self.target.orders
        for i, row in enumerate(self.matrix):
            for j, x in enumerate(row):
                if not _entry_allowed(so[j], to[i], x):
                    out.append(f"entry ({i},{j})={x} incompatible with orders {so[j]} -> {to[i]}")
        return out

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix for x in r)

    def negated(self) -> "GroupHom":
        return GroupHom(self.source, self.target, tuple(tuple(-x for x in r) for r in self.matrix))

    def compose(self, first: "GroupHom") -> "GroupHom":
        """``self ∘ first``."""
        if first.target != self.source:
            raise ValueError("maps do not compose")
        A = [list(r) for r in self.matrix]
        B = [list(r) for r in first.matrix]
        M = _matmul(A, B) if A and B else [[0] * first.source.ngens for _ in range(self.target.ngens)]
        return GroupHom(first.source, self.target, tuple(tuple(r) for r in M))

    def __eq__(self, other):
        return (isinstance(other, GroupHom) and self.source == other.source
                and self.target == other.target and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def equal_up_to_sign(self, other: "GroupHom") -> bool:
        return self == other or self == other.negated()

    # lattice data: source = Z^a / R_A, target = Z^b / R_B
    def _preimage_lattice(self) -> list[list[int]]:
        """Basis of ``{x in Z^a : M x ∈ R_B}``."""
        a, b = self.source.ngens, self.target.ngens
        to = self.target.orders
        tors_rows = [i for i in range(b) if to[i]]
        # [M | -R_B] restricted to the columns of nonzero relations
        big = [list(self.matrix[i]) + [(-to[i] if i == t else 0) for t in tors_rows] for i in range(b)]
        ker = kernel_basis(big, a + len(tors_rows)) if b else [[int(i == j) for i in range(a)] for j in range(a)]
        if not b:
            return ker
        return lattice_basis([v[:a] for v in ker], a)

    def kernel(self) -> FgAbGroup:
        a = self.source.ngens
        L = self._preimage_lattice()
        R_A = [[o if i == j else 0 for i in range(a)] for j, o in enumerate(self.source.orders) if o]
        return subquotient(L, R_A, a)

    def image(self) -> FgAbGroup:
        a = self.source.ngens
        L = self._preimage_lattice()
        # image ≅ Z^a / L
        return FgAbGroup.from_relations(_columns_to_matrix(L, a) if L else [], a)

    def cokernel(self) -> FgAbGroup:
        b = self.target.ngens
        cols = [list(c) for c in zip(*self.matrix)] if self.matrix and self.source.ngens else []
        cols += [[o if i == j else 0 for i in range(b)] for j, o in enumerate(self.target.orders) if o]
        return FgAbGroup.from_relations(_columns_to_matrix(cols, b) if cols else [], b)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if self.source.ngens == 1 and self.target.ngens == 1:
            return f"x{self.matrix[0][0]}"
        return str([list(r) for r in self.matrix])


def hom_entry_choices(A: FgAbGroup, B: FgAbGroup, bound: int = 4) -> list[list[list[int]]]:
    """Admissible values for each matrix entry (rows = target generators)."""
    choices = []
    for t in B.orders:
        row = []
        for s in A.orders:
            if s == 0 and t == 0:
                row.append(list(range(-bound, bound + 1)))
            elif s == 0:
                row.append(list(range(t)))
            elif t == 0:
                row.append([0])
            else:
                step = t // math.gcd(s, t)
                row.append(list(range(0, t, step)))
        choices.append(row)
    return choices


def homs_complete(A: FgAbGroup, B: FgAbGroup) -> bool:
    """True when :func:`enumerate_homs` lists every homomorphism regardless of bound."""
    return A.rank == 0 or B.rank == 0


def enumerate_homs(A: FgAbGroup, B: FgAbGroup, bound: int = 4) -> list[GroupHom]:
    """All homomorphisms with free-to-free entries in ``[-bound, bound]``."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    choices = hom_entry_choices(A, B, bound)
    flat = [c for row in choices for c in row]
    n = A.ngens
    out = []
    for values in itertools.product(*flat):
        M = tuple(tuple(values[i * n:(i + 1) * n]) for i in range(B.ngens))
        out.append(GroupHom(A, B, M))
    return out


# -- chain complexes -------------------------------------------------------------------


class ChainComplex:
    """Integer chain complex ``C_top -> ... -> C_1 -> C_0``.

    ``boundaries[i]`` is the matrix of ``∂_{i+1}: C_{i+1} -> C_i`` (rows index
    cells of degree i).  ``dims`` gives the ranks of the chain groups and is
    needed when some ``C_i`` is zero, since an empty JSON matrix has no shape.
    """

    def __init__(self, boundaries, dims=None):
        raw = list(boundaries)
        if dims is None:
            dims = self._infer_dims(raw)
        dims = [int(d) for d in dims]
        if any(d < 0 for d in dims):
            raise ValueError("chain group ranks must be non-negative")
        if len(raw) > len(dims) - 1:
            raise ValueError(f"{len(raw)} boundary maps but only {len(dims)} chain groups")
        raw += [[]] * (len(dims) - 1 - len(raw))
        self.dims = dims
        self.boundaries = []
        for i, B in enumerate(raw):
            try:
                self.boundaries.append(_as_int_matrix(B, (dims[i], dims[i + 1])))
            except ValueError as exc:
                raise ValueError(f"boundary d_{i + 1}: {exc}") from None
        for i in range(len(self.boundaries) - 1):
            P = _matmul(self.boundaries[i], self.boundaries[i + 1])
            if any(x for r in P for x in r):
                raise ValueError(f"d_{i + 1} ∘ d_{i + 2} is not zero")

    @staticmethod
    def _infer_dims(raw) -> list[int]:
        if not raw:
            raise ValueError("need boundaries or dims")
        dims = []
        for i, B in enumerate(raw):
            rows = _as_int_matrix(B)
            if not rows:
                raise ValueError(f"boundary d_{i + 1} is empty; give 'dims' explicitly")
            m, n = len(rows), len(rows[0])
            if i == 0:
                dims.append(m)
            elif dims[-1] != m:
                raise ValueError(f"d_{i + 1} has {m} rows but d_{i} has {dims[-1]} columns")
            dims.append(n)
        return dims

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def rank_of(self, i: int) -> int:
        """Rank of ``∂_i`` (zero outside the complex)."""
        if i < 1 or i > self.top:
            return 0
        B = self.boundaries[i - 1]
        return len(invariant_factors(B)) if B and B[0] else 0

    def homology(self) -> list[FgAbGroup]:
        out = []
        for i in range(self.top + 1):
            free = self.dims[i] - self.rank_of(i) - self.rank_of(i + 1)
            tors = ()
            if i < self.top and self.boundaries[i] and self.boundaries[i][0]:
                tors = tuple(invariant_factors(self.boundaries[i]))
            out.append(FgAbGroup(free, tors))
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ChainComplex":
        if not isinstance(data, dict) or "boundaries" not in data:
            raise ValueError("chain complex JSON needs a 'boundaries' key")
        return cls(data["boundaries"], data.get("dims"))

    @classmethod
    def from_json(cls, text: str) -> "ChainComplex":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"boundaries": self.boundaries, "dims": self.dims}


def homology(c: ChainComplex) -> list[FgAbGroup]:
    return c.homology()


# -- universal coefficients and consistency checks --------------------------------------


def uct_with_coefficients(H, m: int) -> list[FgAbGroup]:
    """``H_n(X; Z_m) = H_n ⊗ Z_m ⊕ Tor(H_{n-1}, Z_m)``."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    H = group_list(H)
    Zm = FgAbGroup.cyclic(m)
    return [tensor(h, Zm) + (tor(H[n - 1], Zm) if n else FgAbGroup()) for n, h in enumerate(H)]


def uct_cohomology(H) -> list[FgAbGroup]:
    """``H^n = Hom(H_n, Z) ⊕ Ext(H_{n-1}, Z)``."""
    H = group_list(H)
    Z = FgAbGroup.free()
    return [hom(h, Z) + (ext(H[n - 1], Z) if n else FgAbGroup()) for n, h in enumerate(H)]


def homology_from_cohomology(Hc) -> list[FgAbGroup]:
    """Inverse of :func:`uct_cohomology`: ``H_n = free(H^n) ⊕ torsion(H^{n+1})``."""
    Hc = group_list(Hc)
    return [
        Hc[n].free_part() + (Hc[n + 1].torsion_part() if n + 1 < len(Hc) else FgAbGroup())
        for n in range(len(Hc))
    ]


@dataclass
class CheckResult:
    passed: bool
    detail: str = ""
    violation: int | None = None

    def __bool__(self):
        return self.passed


def poincare_duality_check(H, n: int) -> CheckResult:
    """``H_k ≅ H^{n-k}`` for all k, with cohomology from universal coefficients."""
    H = group_list(H)
    if len(H) != n + 1:
        raise ValueError(f"need n+1 = {n + 1} groups, got {len(H)}")
    Hc = uct_cohomology(H)
    for k in range(n + 1):
        if H[k] != Hc[n - k]:
            return CheckResult(False, f"H_{k} = {H[k]} but H^{n - k} = {Hc[n - k]}", k)
    return CheckResult(True, f"H_k ≅ H^{{{n}-k}} for k = 0..{n}")


def poly_mul(p, q) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


_MONO = re.compile(r"^([+-]?)(\d*)\*?(t(?:\^(\d+))?)?$")


def _parse_sum(text: str, whole: str) -> list[int]:
    coeffs: dict[int, int] = {}
    for term in re.findall(r"[+-]?[^+-]+", text):
        m = _MONO.match(term)
        if not m or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse term {term!r} in {whole!r}")
        c = int(m.group(2)) if m.group(2) else 1
        c = -c if m.group(1) == "-" else c
        e = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
        coeffs[e] = coeffs.get(e, 0) + c
    poly = [0] * (max(coeffs, default=0) + 1)
    for e, c in coeffs.items():
        poly[e] = c
    return poly


def parse_polynomial(text: str) -> list[int]:
    """Coefficients of a product of parenthesized sums in ``t``, e.g. ``(1+t^4)(1+t^5)``."""
    s = text.replace(" ", "")
    if "(" not in s:
        return _parse_sum(s, text)
    if not re.fullmatch(r"(\([^()]+\)\*?)+", s):
        raise ValueError(f"cannot parse polynomial {text!r}")
    result = [1]
    for factor in re.findall(r"\(([^()]+)\)", s):
        result = poly_mul(result, _parse_sum(factor, text))
    return result


def poincare_polynomial(H) -> list[int]:
    return [g.rank for g in group_list(H)]


def poincare_polynomial_check(H, p) -> CheckResult:
    coeffs = parse_polynomial(p) if isinstance(p, str) else [int(c) for c in p]
    ranks = poincare_polynomial(H)
    width = max(len(ranks), len(coeffs))
    ranks += [0] * (width - len(ranks))
    coeffs = coeffs + [0] * (width - len(coeffs))
    for k, (r, c) in enumerate(zip(ranks, coeffs)):
        if r != c:
            return CheckResult(False, f"rank H_{k} = {r} but coefficient of t^{k} is {c}", k)
    return CheckResult(True, "free ranks match")


def euler_characteristic(H) -> int:
    return sum((-1) ** k * g.rank for k, g in enumerate(group_list(H)))


def hurewicz_check(pi, H, simply_connected: bool = True) -> CheckResult:
    """First nontrivial homotopy group (degree >= 2) equals the homology there.

    Homology below that degree must vanish in positive degrees as well.
    """
    if not simply_connected:
        raise ValueError("the Hurewicz comparison here needs a simply connected space")
    pi, H = group_list(pi), group_list(H)
    if len(pi) > 1 and not pi[1].is_zero:
        raise ValueError("pi_1 is nontrivial")
    first = next((n for n in range(2, len(pi)) if not pi[n].is_zero), None)
    if first is None:
        return CheckResult(True, "no nontrivial homotopy group in the given range")
    if first >= len(H):
        return CheckResult(False, f"no homology given in degree {first}", first)
    for k in range(1, first):
        if not H[k].is_zero:
            return CheckResult(False, f"H_{k} = {H[k]} should vanish below degree {first}", k)
    if pi[first] != H[first]:
        return CheckResult(False, f"pi_{first} = {pi[first]} but H_{first} = {H[first]}", first)
    return CheckResult(True, f"pi_{first} ≅ H_{first} ≅ {H[first]}")


def p_rank_bound_ok(A: FgAbGroup, G_: FgAbGroup) -> bool:
    """Necessary condition for ``A`` to be a subquotient of ``G_``."""
    if A.rank > G_.rank:
        return False
    primes = {p for d in A.torsion for p in _prime_factors(d)}
    for p in primes:
        if A.p_rank(p) > G_.rank + G_.p_rank(p):
            return False
    if G_.is_finite and (not A.is_finite or G_.order % A.order):
        return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def direct_sum(groups) -> FgAbGroup:
    return reduce(lambda a, b: a + b, group_list(groups), FgAbGroup())
