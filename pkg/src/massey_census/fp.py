"""Exact dense linear algebra over the prime fields F_p, for small p."""

from __future__ import annotations

import numpy as np

VECTOR_BUDGET = 10 ** 8

_MAX_PRIME = 7


class BudgetError(RuntimeError):
    """An enumeration would exceed its configured budget."""


def set_max_prime(p: int) -> None:
    """Raise (or lower) the largest modulus the library accepts; default 7."""
    global _MAX_PRIME
    _MAX_PRIME = int(p)


def check_prime(p) -> int:
    """Validate p as a supported prime modulus and return it as an int."""
    p = int(p)
    if p < 2:
        raise ValueError(f"modulus must be a prime >= 2, got {p}")
    if any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"modulus {p} is not prime")
    if p > _MAX_PRIME:
        raise ValueError(
            f"modulus {p} exceeds the configured maximum {_MAX_PRIME}; "
            f"call set_max_prime({p}) to allow it"
        )
    return p


def _inv_mod(a: int, p: int) -> int:
    # p is prime, so Fermat does the job
    return pow(a, p - 2, p)


class FpScalar:
    """A residue in F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        p = check_prime(p)
        self.value = int(value) % p
        self.p = p

    def _coerce(self, other) -> "FpScalar":
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, np.integer)):
            return FpScalar(int(other), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpScalar(self.value + other.value, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpScalar(self.value - other.value, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpScalar(self.value * other.value, self.p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value, self.p)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FpScalar(_inv_mod(self.value, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpScalar({self.value}, p={self.p})"


class FpVector:
    """A coordinate vector over F_p."""

    __slots__ = ("entries", "p")

    def __init__(self, entries, p):
        p = check_prime(p)
        self.entries = tuple(int(e) % p for e in entries)
        if not self.entries:
            raise ValueError("vector must have positive dimension")
        self.p = p

    @property
    def dim(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __add__(self, other):
        if not isinstance(other, FpVector):
            return NotImplemented
        _same_space(self, other)
        return FpVector(
            [a + b for a, b in zip(self.entries, other.entries)], self.p
        )

    def __sub__(self, other):
        if not isinstance(other, FpVector):
            return NotImplemented
        _same_space(self, other)
        return FpVector(
            [a - b for a, b in zip(self.entries, other.entries)], self.p
        )

    def scale(self, c) -> "FpVector":
        c = int(c) % self.p
        return FpVector([c * e for e in self.entries], self.p)

    def __eq__(self, other):
        if isinstance(other, FpVector):
            return self.p == other.p and self.entries == other.entries
        return NotImplemented

    def __hash__(self):
        return hash((self.entries, self.p))

    def __repr__(self):
        return f"FpVector({list(self.entries)}, p={self.p})"


def _same_space(u: FpVector, v: FpVector) -> None:
    if u.p != v.p:
        raise ValueError(f"modulus mismatch: {u.p} vs {v.p}")
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: {u.dim} vs {v.dim}")


class FpMatrix:
    """A dense matrix over F_p, stored row-major as a read-only int64 array."""

    __slots__ = ("array", "p")

    def __init__(self, rows, p):
        p = check_prime(p)
        a = np.array(rows, dtype=np.int64) % p
        if a.ndim != 2:
            raise ValueError(f"matrix must be 2-dimensional, got shape {a.shape}")
        a.setflags(write=False)
        self.array = a
        self.p = p

    @classmethod
    def identity(cls, n, p):
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows, cols, p):
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    def entry(self, i, j) -> FpScalar:
        return FpScalar(int(self.array[i, j]), self.p)

    def row(self, i) -> FpVector:
        return FpVector(self.array[i], self.p)

    def __eq__(self, other):
        if isinstance(other, FpMatrix):
            return (
                self.p == other.p
                and self.array.shape == other.array.shape
                and bool(np.array_equal(self.array, other.array))
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.array.tobytes(), self.array.shape, self.p))

    def __repr__(self):
        return f"FpMatrix({self.array.tolist()}, p={self.p})"


def rank_mod(a, p: int) -> int:
    """Row rank of an integer array over F_p, by Gaussian elimination."""
    a = np.array(a, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("rank needs a 2-dimensional array")
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if a[i, c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * _inv_mod(int(a[r, c]), p) % p
        for i in range(nrows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
        if r == nrows:
            break
    return r


def mat_rank(m) -> int:
    """Rank of an FpMatrix (or (array, p) pair is handled by rank_mod)."""
    if not isinstance(m, FpMatrix):
        raise TypeError("mat_rank expects an FpMatrix; use rank_mod for raw arrays")
    return rank_mod(m.array, m.p)


DIAGONAL_PROFILES = ("all_zero", "first_one")


class GramForm:
    """A bilinear pairing matrix: skew off the diagonal, with a declared
    diagonal profile ("all_zero" or, at p = 2, "first_one")."""

    __slots__ = ("matrix", "diagonal_profile")

    def __init__(self, matrix: FpMatrix, diagonal_profile: str = "all_zero"):
        if not isinstance(matrix, FpMatrix):
            raise TypeError("GramForm needs an FpMatrix")
        if matrix.rows != matrix.cols:
            raise ValueError("Gram matrix must be square")
        if diagonal_profile not in DIAGONAL_PROFILES:
            raise ValueError(f"unknown diagonal profile {diagonal_profile!r}")
        p = matrix.p
        a = matrix.array
        d = matrix.rows
        for i in range(d):
            for j in range(i + 1, d):
                if (a[i, j] + a[j, i]) % p != 0:
                    raise ValueError(
                        f"off-diagonal entries ({i},{j})/({j},{i}) are not skew"
                    )
        diag = [int(a[i, i]) for i in range(d)]
        if diagonal_profile == "all_zero":
            if any(diag):
                raise ValueError("all_zero profile but nonzero diagonal entry")
        else:
            if p != 2:
                raise ValueError("first_one profile only makes sense at p = 2")
            if diag[0] != 1 or any(diag[1:]):
                raise ValueError("first_one profile needs diagonal (1, 0, ..., 0)")
        self.matrix = matrix
        self.diagonal_profile = diagonal_profile

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def p(self) -> int:
        return self.matrix.p

    def __eq__(self, other):
        if isinstance(other, GramForm):
            return (
                self.matrix == other.matrix
                and self.diagonal_profile == other.diagonal_profile
            )
        return NotImplemented

    def __repr__(self):
        return (
            f"GramForm({self.matrix.array.tolist()}, p={self.p}, "
            f"profile={self.diagonal_profile})"
        )


def form_eval(f: GramForm, x: FpVector, y: FpVector) -> FpScalar:
    """Evaluate the pairing (x, y) under the Gram matrix."""
    if x.p != f.p or y.p != f.p:
        raise ValueError("vector/form modulus mismatch")
    if x.dim != f.dim or y.dim != f.dim:
        raise ValueError("vector/form dimension mismatch")
    xa = np.array(x.entries, dtype=np.int64)
    ya = np.array(y.entries, dtype=np.int64)
    return FpScalar(int(xa @ f.matrix.array @ ya), f.p)


def is_nondegenerate(f: GramForm) -> bool:
    """True when the Gram matrix has full rank over F_p."""
    return mat_rank(f.matrix) == f.dim


def vector_from_index(idx: int, d: int, p: int) -> FpVector:
    """Decode 0 <= idx < p**d into the vector whose coordinates, first one
    most significant, are the base-p digits of idx."""
    entries = [(idx // p ** t) % p for t in range(d - 1, -1, -1)]
    return FpVector(entries, p)


def index_of_vector(v: FpVector) -> int:
    idx = 0
    for e in v.entries:
        idx = idx * v.p + e
    return idx


def enumerate_vectors(d: int, p: int, budget: int = VECTOR_BUDGET):
    """Yield all p**d vectors of F_p^d in lexicographic digit order."""
    p = check_prime(p)
    if d < 1:
        raise ValueError("dimension must be positive")
    total = p ** d
    if total > budget:
        raise BudgetError(
            f"enumerating p^d = {total} vectors exceeds the budget {budget}"
        )
    for idx in range(total):
        yield vector_from_index(idx, d, p)


def vectors_array(d: int, p: int, budget: int = VECTOR_BUDGET) -> np.ndarray:
    """All of F_p^d as an int8 array of shape (p**d, d); row i decodes index i."""
    p = check_prime(p)
    total = p ** d
    if total > budget:
        raise BudgetError(
            f"materializing p^d = {total} vectors exceeds the budget {budget}"
        )
    idx = np.arange(total, dtype=np.int64)
    cols = [(idx // p ** t) % p for t in range(d - 1, -1, -1)]
    return np.stack(cols, axis=1).astype(np.int8)


# F_2 fast path: a vector is one machine word, first coordinate = highest bit.
# The packed index coincides with index_of_vector, so both enumerations agree.

def pack_bits(v: FpVector) -> int:
    """Pack an F_2 vector into an int bitmask (first coordinate highest bit)."""
    if v.p != 2:
        raise ValueError("pack_bits is the p = 2 fast path")
    return index_of_vector(v)


def unpack_bits(word: int, d: int) -> FpVector:
    if not 0 <= word < (1 << d):
        raise ValueError(f"word {word} out of range for {d} bits")
    return vector_from_index(word, d, 2)


def enumerate_packed(d: int):
    """All F_2^d vectors as bitmask words, in the same order as enumerate_vectors."""
    if d > 62:
        raise ValueError("packed enumeration supports d <= 62")
    return range(1 << d)
