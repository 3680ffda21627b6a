"""Unit upper-triangular groups U_n(F_p) and the center-dropped variants
used for representation searches (the (1,n) corner entry removed)."""

from __future__ import annotations

from functools import lru_cache

from . import fp
from .fp import FpMatrix, FpScalar

MIN_N = 3
MAX_N = 6


class ExponentToken:
    """A group exponent: a finite integer, or p-infinity.

    Raising to the p-infinity power means the limit of p^s-th powers, which
    is the identity in every finite p-group; arithmetic here treats it as 0.
    """

    __slots__ = ("value",)

    def __init__(self, value):
        if value is not None:
            value = int(value)
        self.value = value

    @classmethod
    def finite(cls, e):
        return cls(e)

    @property
    def is_infinite(self):
        return self.value is None

    def __eq__(self, other):
        if isinstance(other, ExponentToken):
            return self.value == other.value
        if isinstance(other, int) and self.value is not None:
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(("ExponentToken", self.value))

    def __repr__(self):
        return "ExponentToken(p-inf)" if self.is_infinite else f"ExponentToken({self.value})"


P_INFINITY = ExponentToken(None)


@lru_cache(maxsize=None)
def triangle_pairs(n: int, bar: bool = False) -> tuple:
    """Strictly-upper entry positions (i, j), 1-based: superdiagonal first,
    then band by band; the bar variant drops the (1, n) corner."""
    pairs = []
    for dist in range(1, n):
        for i in range(1, n - dist + 1):
            pairs.append((i, i + dist))
    if bar:
        assert pairs[-1] == (1, n)
        pairs = pairs[:-1]
    return tuple(pairs)


@lru_cache(maxsize=None)
def pair_index(n: int, bar: bool = False) -> dict:
    return {pq: t for t, pq in enumerate(triangle_pairs(n, bar))}


@lru_cache(maxsize=None)
def mul_recipe(n: int, bar: bool = False) -> tuple:
    """For each stored entry (i,j): the list of index pairs (u, w) with
    c[i,j] = a[i,j] + b[i,j] + sum a[u] * b[w] over i < k < j."""
    idx = pair_index(n, bar)
    recipe = []
    for (i, j) in triangle_pairs(n, bar):
        prods = tuple((idx[(i, k)], idx[(k, j)]) for k in range(i + 1, j))
        recipe.append(prods)
    return tuple(recipe)


def _check_n(n: int, bar: bool) -> None:
    if not MIN_N <= n <= MAX_N:
        kind = "bar-quotient" if bar else "group"
        raise ValueError(f"{kind} size n={n} outside supported range [{MIN_N}, {MAX_N}]")


class UniMatrix:
    """An element of U_n(F_p), stored by its strictly-upper entries."""

    bar = False
    __slots__ = ("n", "p", "entries")

    def __init__(self, n, p, entries=None):
        _check_n(n, self.bar)
        p = fp.check_prime(p)
        pairs = triangle_pairs(n, self.bar)
        if entries is None:
            entries = (0,) * len(pairs)
        entries = tuple(int(e) % p for e in entries)
        if len(entries) != len(pairs):
            raise ValueError(
                f"need {len(pairs)} entries for n={n}, got {len(entries)}"
            )
        self.n = n
        self.p = p
        self.entries = entries

    @classmethod
    def identity(cls, n, p):
        return cls(n, p)

    @classmethod
    def from_entry_map(cls, n, p, mapping):
        """Build from a {(i, j): value} dict; unmentioned entries are 0."""
        idx = pair_index(n, cls.bar)
        entries = [0] * len(idx)
        for key, val in mapping.items():
            if key not in idx:
                raise ValueError(f"position {key} is not a stored entry")
            entries[idx[key]] = val
        return cls(n, p, entries)

    def entry(self, i, j) -> int:
        idx = pair_index(self.n, self.bar)
        if (i, j) not in idx:
            raise ValueError(f"position ({i},{j}) is not in the stored triangle")
        return self.entries[idx[(i, j)]]

    def superdiagonal(self) -> tuple:
        return tuple(self.entries[: self.n - 1])

    def is_identity(self) -> bool:
        return all(e == 0 for e in self.entries)

    def to_dense(self):
        """The full n-by-n matrix (bar variants put 0 in the dropped corner)."""
        import numpy as np

        a = np.eye(self.n, dtype=np.int64)
        for (i, j), e in zip(triangle_pairs(self.n, self.bar), self.entries):
            a[i - 1, j - 1] = e
        return a

    def __mul__(self, other):
        if isinstance(other, UniMatrix):
            return group_mul(self, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, UniMatrix):
            return (
                self.bar == other.bar
                and self.n == other.n
                and self.p == other.p
                and self.entries == other.entries
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.bar, self.n, self.p, self.entries))

    def __repr__(self):
        name = type(self).__name__
        return f"{name}(n={self.n}, p={self.p}, entries={list(self.entries)})"


class UniBarMatrix(UniMatrix):
    """An element of the quotient of U_n(F_p) by its (1, n)-corner center."""

    bar = True
    __slots__ = ()


def _compat(a: UniMatrix, b: UniMatrix) -> None:
    if type(a) is not type(b) or a.n != b.n or a.p != b.p:
        raise ValueError("group elements live in different groups")


def group_mul(a: UniMatrix, b: UniMatrix) -> UniMatrix:
    """Product in U_n(F_p) (or its bar quotient)."""
    _compat(a, b)
    recipe = mul_recipe(a.n, a.bar)
    p = a.p
    ae, be = a.entries, b.entries
    out = []
    for t, prods in enumerate(recipe):
        v = ae[t] + be[t]
        for (u, w) in prods:
            v += ae[u] * be[w]
        out.append(v % p)
    return type(a)(a.n, a.p, out)


def group_inv(a: UniMatrix) -> UniMatrix:
    """Inverse, solved band by band from the superdiagonal inward."""
    pairs = triangle_pairs(a.n, a.bar)
    idx = pair_index(a.n, a.bar)
    p = a.p
    out = [0] * len(pairs)
    for t, (i, j) in enumerate(pairs):
        s = a.entries[t]
        for k in range(i + 1, j):
            s += out[idx[(i, k)]] * a.entries[idx[(k, j)]]
        out[t] = -s % p
    return type(a)(a.n, a.p, out)


def group_pow(a: UniMatrix, e) -> UniMatrix:
    """a**e by square-and-multiply; e may be an int or an ExponentToken
    (p-infinity gives the identity)."""
    if isinstance(e, ExponentToken):
        if e.is_infinite:
            return type(a)(a.n, a.p)
        e = e.value
    e = int(e)
    if e < 0:
        return group_pow(group_inv(a), -e)
    result = type(a)(a.n, a.p)
    base = a
    while e:
        if e & 1:
            result = group_mul(result, base)
        e >>= 1
        if e:
            base = group_mul(base, base)
    return result


def proj_entry(a: UniMatrix, i: int, j: int) -> FpScalar:
    """The (i, j) matrix entry as a field element (1-based, i < j)."""
    return FpScalar(a.entry(i, j), a.p)


def is_surjective_assignment(images, n: int, p: int) -> bool:
    """Do the generator images generate all of U_n(F_p)?  Equivalent to the
    (n-1) x (#images) matrix of superdiagonal entries having rank n - 1."""
    images = list(images)
    if not images:
        return False
    for im in images:
        if not isinstance(im, UniMatrix) or im.bar or im.n != n or im.p != p:
            raise ValueError("images must be UniMatrix elements of U_n(F_p)")
    rows = [[im.entry(k, k + 1) for im in images] for k in range(1, n)]
    return fp.mat_rank(FpMatrix(rows, p)) == n - 1


def aut_order(n: int, p: int) -> int:
    """|Aut(U_n(F_p))| for n in {3, 4}."""
    p = fp.check_prime(p)
    if n == 3:
        if p == 2:
            return 8
        return p ** 3 * (p ** 2 - 1) * (p - 1)
    if n == 4:
        if p == 2:
            return 384
        return 2 * (p - 1) ** 3 * p ** 8
    raise ValueError(f"automorphism order only supported for n in {{3, 4}}, got {n}")


class KernelElemM:
    """An element of the kernel M of U_4(F_p) -> (F_p)^3, coordinates
    (m13, m24, m14); M is elementary abelian of order p^3."""

    __slots__ = ("m13", "m24", "m14", "p")

    def __init__(self, m13, m24, m14, p):
        p = fp.check_prime(p)
        self.m13 = int(m13) % p
        self.m24 = int(m24) % p
        self.m14 = int(m14) % p
        self.p = p

    def as_matrix(self) -> UniMatrix:
        return UniMatrix.from_entry_map(
            4, self.p, {(1, 3): self.m13, (2, 4): self.m24, (1, 4): self.m14}
        )

    @classmethod
    def from_matrix(cls, u: UniMatrix):
        if u.bar or u.n != 4:
            raise ValueError("kernel elements live in U_4")
        if any(u.superdiagonal()):
            raise ValueError("matrix is not in the kernel: nonzero superdiagonal")
        return cls(u.entry(1, 3), u.entry(2, 4), u.entry(1, 4), u.p)

    def __eq__(self, other):
        if isinstance(other, KernelElemM):
            return (self.m13, self.m24, self.m14, self.p) == (
                other.m13,
                other.m24,
                other.m14,
                other.p,
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.m13, self.m24, self.m14, self.p))

    def __repr__(self):
        return f"KernelElemM({self.m13}, {self.m24}, {self.m14}, p={self.p})"


def element_count(n: int, p: int, bar: bool = False) -> int:
    return p ** len(triangle_pairs(n, bar))


def element_from_index(idx: int, n: int, p: int, bar: bool = False) -> UniMatrix:
    """Decode an index into a group element: entry t is digit t of idx base p
    (little-endian, so the superdiagonal entries are the lowest digits)."""
    pairs = triangle_pairs(n, bar)
    entries = [(idx // p ** t) % p for t in range(len(pairs))]
    cls = UniBarMatrix if bar else UniMatrix
    return cls(n, p, entries)


def index_of_element(a: UniMatrix) -> int:
    return sum(e * a.p ** t for t, e in enumerate(a.entries))


def enumerate_group(n: int, p: int, bar: bool = False):
    """Iterate the whole group in index order."""
    for idx in range(element_count(n, p, bar)):
        yield element_from_index(idx, n, p, bar)
