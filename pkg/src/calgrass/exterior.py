"""Float-coefficient exterior algebra on R^n and the standard calibration forms.

Basis k-vectors are labelled by strictly increasing 1-based index tuples, so
``MultiVector(6, 3, {(1, 3, 5): 1.0})`` is ``e_135`` (equivalently the form
``dx^135`` under the orthonormal identification of vectors and covectors).

Complex structure convention: ``z_j = x_{2j-1} + i x_{2j}``, i.e. ``J`` pairs the
coordinates ``(1, 2), (3, 4), ...``.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Mapping

import numpy as np

MAX_DIM = 8

# coefficients below this are treated as round-off when building forms from
# trigonometric phases
_CLEAN_TOL = 1e-14


def permutation_sign(seq: Iterable[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (0 if it has repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class MultiVector:
    """Element of the k-th exterior power of R^n with a sparse coefficient map.

    Parameters
    ----------
    n : int
        Ambient dimension.
    k : int
        Degree, ``0 <= k <= n``.
    coeffs : mapping, optional
        Strictly increasing 1-based index tuples to real coefficients.  Exact
        zeros are dropped.
    """

    __slots__ = ("n", "k", "coeffs")

    def __init__(self, n: int, k: int, coeffs: Mapping[tuple, float] | None = None):
        if not (1 <= n <= MAX_DIM):
            raise ValueError(f"ambient dimension must be in 1..{MAX_DIM}, got {n}")
        if not (0 <= k <= n):
            raise ValueError(f"degree must be in 0..{n}, got {k}")
        self.n = int(n)
        self.k = int(k)
        clean = {}
        for key, value in (coeffs or {}).items():
            key = tuple(int(i) for i in key)
            if len(key) != k:
                raise ValueError(f"index {key} does not have length {k}")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise ValueError(f"index {key} is not strictly increasing")
            if key and (key[0] < 1 or key[-1] > n):
                raise ValueError(f"index {key} out of range 1..{n}")
            value = float(value)
            if value != 0.0:
                clean[key] = clean.get(key, 0.0) + value
        self.coeffs = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def basis(cls, n: int, index: Iterable[int], coeff: float = 1.0) -> "MultiVector":
        """``coeff * e_I`` for an arbitrary (possibly unsorted) index sequence."""
        index = tuple(index)
        sign = permutation_sign(index)
        if sign == 0:
            return cls(n, len(index))
        return cls(n, len(index), {tuple(sorted(index)): sign * coeff})

    @classmethod
    def scalar(cls, n: int, value: float) -> "MultiVector":
        return cls(n, 0, {(): value})

    @classmethod
    def volume(cls, n: int) -> "MultiVector":
        return cls(n, n, {tuple(range(1, n + 1)): 1.0})

    @classmethod
    def from_vector(cls, v) -> "MultiVector":
        v = np.asarray(v, dtype=float)
        return cls(v.size, 1, {(i + 1,): x for i, x in enumerate(v)})

    @classmethod
    def from_dense(cls, tensor: np.ndarray, tol: float = 0.0) -> "MultiVector":
        """Inverse of :meth:`to_dense` (reads the sorted-index entries)."""
        tensor = np.asarray(tensor, dtype=float)
        k = tensor.ndim
        n = tensor.shape[0] if k else 1
        if k == 0:
            return cls.scalar(n, float(tensor))
        coeffs = {}
        for idx in itertools.combinations(range(n), k):
            c = tensor[idx]
            if abs(c) > tol:
                coeffs[tuple(i + 1 for i in idx)] = c
        return cls(n, k, coeffs)

    # -- basic algebra ----------------------------------------------------
    def _check_same_space(self, other: "MultiVector") -> None:
        if not isinstance(other, MultiVector):
            raise TypeError(f"expected MultiVector, got {type(other).__name__}")
        if other.n != self.n or other.k != self.k:
            raise ValueError(
                f"shape mismatch: Lambda^{self.k} R^{self.n} vs Lambda^{other.k} R^{other.n}"
            )

    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._check_same_space(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) + c
        return MultiVector(self.n, self.k, out)

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.n, self.k, {key: -c for key, c in self.coeffs.items()})

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def __mul__(self, scalar: float) -> "MultiVector":
        return MultiVector(self.n, self.k, {key: scalar * c for key, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "MultiVector":
        return self * (1.0 / scalar)

    def __xor__(self, other: "MultiVector") -> "MultiVector":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiVector):
            return NotImplemented
        return (self.n, self.k, self.coeffs) == (other.n, other.k, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.k, tuple(sorted(self.coeffs.items()))))

    def __getitem__(self, key) -> float:
        return self.coeffs.get(tuple(key), 0.0)

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"MultiVector(n={self.n}, k={self.k}, 0)"
        terms = " ".join(
            f"{c:+g}*e{''.join(map(str, key))}" for key, c in sorted(self.coeffs.items())
        )
        return f"MultiVector(n={self.n}, k={self.k}, {terms})"

    def allclose(self, other: "MultiVector", atol: float = 1e-12) -> bool:
        self._check_same_space(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self[key] - other[key]) <= atol for key in keys)

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.coeffs.values()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def cleaned(self, tol: float = _CLEAN_TOL) -> "MultiVector":
        return MultiVector(self.n, self.k, {key: c for key, c in self.coeffs.items() if abs(c) > tol})

    # -- dense representation --------------------------------------------
    def to_dense(self) -> np.ndarray:
        """Fully antisymmetric array ``T`` of shape ``(n,)*k``.

        Contracting ``T`` with the columns of an n-by-k matrix ``F`` gives
        ``sum_I c_I det(F[I, :])``, i.e. the form evaluated on the columns.
        """
        if self.k == 0:
            return np.array(self[()])
        T = np.zeros((self.n,) * self.k)
        for key, c in self.coeffs.items():
            base = [i - 1 for i in key]
            for perm in itertools.permutations(range(self.k)):
                T[tuple(base[p] for p in perm)] = permutation_sign(perm) * c
        return T

    def evaluate(self, vectors) -> float:
        """Value of the form on the columns of an n-by-k matrix."""
        F = np.asarray(vectors, dtype=float)
        if F.shape != (self.n, self.k):
            raise ValueError(f"expected a {self.n}x{self.k} matrix, got {F.shape}")
        total = 0.0
        for key, c in self.coeffs.items():
            rows = [i - 1 for i in key]
            total += c * np.linalg.det(F[rows, :]) if self.k else c
        return float(total)

    def pullback(self, A) -> "MultiVector":
        """The form ``v_1, ..., v_k -> self(A v_1, ..., A v_k)`` on R^m.

        ``A`` is an n-by-m matrix.  Useful for restricting a form to a subspace
        spanned by orthonormal columns.
        """
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != self.n:
            raise ValueError(f"pullback matrix must have {self.n} rows, got shape {A.shape}")
        m = A.shape[1]
        if self.k > m:
            raise ValueError(f"cannot pull a degree-{self.k} form back to R^{m}")
        coeffs = {}
        for J in itertools.combinations(range(m), self.k):
            sub = A[:, J]
            coeffs[tuple(j + 1 for j in J)] = self.evaluate(sub)
        return MultiVector(m, self.k, coeffs)


def wedge(a: MultiVector, b: MultiVector) -> MultiVector:
    """Exterior product ``a ^ b``."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: R^{a.n} vs R^{b.n}")
    if a.k + b.k > a.n:
        raise ValueError(f"degree overflow: {a.k} + {b.k} > {a.n}")
    out: dict[tuple, float] = {}
    for I, ca in a.coeffs.items():
        for J, cb in b.coeffs.items():
            if set(I) & set(J):
                continue
            # number of transpositions needed to merge I and J
            inversions = sum(1 for i in I for j in J if i > j)
            key = tuple(sorted(I + J))
            out[key] = out.get(key, 0.0) + (-1) ** inversions * ca * cb
    return MultiVector(a.n, a.k + b.k, out)


def wedge_all(*factors: MultiVector) -> MultiVector:
    result = factors[0]
    for f in factors[1:]:
        result = wedge(result, f)
    return result


def inner(a: MultiVector, b: MultiVector) -> float:
    """Inner product induced from the Euclidean metric (basis k-vectors orthonormal)."""
    a._check_same_space(b)
    small, large = (a, b) if len(a.coeffs) <= len(b.coeffs) else (b, a)
    return float(sum(c * large[key] for key, c in small.coeffs.items()))


def hodge_star(a: MultiVector) -> MultiVector:
    """Hodge star with ``e_1 ^ ... ^ e_n`` positively oriented.

    Satisfies ``a ^ *a = <a, a> vol``.
    """
    n = a.n
    full = set(range(1, n + 1))
    out = {}
    for I, c in a.coeffs.items():
        comp = tuple(sorted(full - set(I)))
        out[comp] = permutation_sign(I + comp) * c
    return MultiVector(n, n - a.k, out)


# -- calibration forms ---------------------------------------------------

def _holomorphic_volume(n: int) -> dict[tuple, complex]:
    """Coefficients of ``dz_1 ^ ... ^ dz_n`` on R^{2n}."""
    out = {}
    for choice in itertools.product((0, 1), repeat=n):
        key = tuple(2 * j + 1 + c for j, c in enumerate(choice))
        out[key] = 1j ** sum(choice)
    return out


def sl_form(n: int, theta: float = 0.0) -> MultiVector:
    """Special Lagrangian form ``Re(exp(-i theta) dz_1 ^ ... ^ dz_n)`` on R^{2n}.

    ``theta = 0`` gives ``Re(Omega)``; ``theta = pi/2`` gives ``Im(Omega)``.
    """
    if n not in (2, 3, 4):
        raise ValueError(f"sl_form supports n in 2..4 (ambient R^4..R^8), got {n}")
    c, s = math.cos(theta), math.sin(theta)
    coeffs = {key: c * z.real + s * z.imag for key, z in _holomorphic_volume(n).items()}
    return MultiVector(2 * n, n, coeffs).cleaned()


def im_sl_form(n: int, theta: float = 0.0) -> MultiVector:
    """``Im(exp(-i theta) Omega)``, the companion of :func:`sl_form`."""
    return sl_form(n, theta + math.pi / 2)


def kaehler_form(n: int) -> MultiVector:
    """``omega = sum_j dx_{2j-1} ^ dx_{2j}`` on R^{2n}."""
    return MultiVector(2 * n, 2, {(2 * j - 1, 2 * j): 1.0 for j in range(1, n + 1)})


def kaehler_power(n: int, p: int) -> MultiVector:
    """``omega^p / p!`` on R^{2n}."""
    if not (1 <= p <= n):
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    omega = kaehler_form(n)
    result = omega
    for _ in range(p - 1):
        result = wedge(result, omega)
    return result / math.factorial(p)


_ASSOCIATIVE_TERMS = {
    (1, 2, 3): 1.0,
    (1, 4, 5): 1.0,
    (1, 6, 7): -1.0,
    (2, 4, 6): 1.0,
    (2, 5, 7): 1.0,
    (3, 4, 7): 1.0,
    (3, 5, 6): -1.0,
}


def associative_form() -> MultiVector:
    """The G2 3-form on R^7 in the convention
    ``e123 + e145 - e167 + e246 + e257 + e347 - e356``."""
    return MultiVector(7, 3, _ASSOCIATIVE_TERMS)


def coassociative_form() -> MultiVector:
    return hodge_star(associative_form())


def w_coordinate_form() -> tuple[MultiVector, MultiVector]:
    """Real and imaginary parts of ``dw_1 ^ dw_2`` on R^4.

    Here ``w_1 = x_1 + i x_3`` and ``w_2 = x_2 - i x_4``.  These are the
    coordinates that turn SL planes of ``(z_1, z_2) = (x_1 + i x_2, x_3 + i x_4)``
    into complex lines; ``dw_1 ^ dw_2 = omega - i Im(Omega)``.
    """
    dw1 = {(1,): 1.0 + 0j, (3,): 1j}
    dw2 = {(2,): 1.0 + 0j, (4,): -1j}
    re, im = {}, {}
    for (i,), a in dw1.items():
        for (j,), b in dw2.items():
            prod = a * b * permutation_sign((i, j))
            key = tuple(sorted((i, j)))
            re[key] = re.get(key, 0.0) + prod.real
            im[key] = im.get(key, 0.0) + prod.imag
    return MultiVector(4, 2, re).cleaned(), MultiVector(4, 2, im).cleaned()
