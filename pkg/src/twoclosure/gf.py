# gf.py

"""
Linear algebra over GF(p) and finite fields realised as matrix algebras inside GL_d(p).

Vectors are rows and matrices act on the right, ``v -> v @ M``.
"""

import logging
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import TooLargeError
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)


def mod_p(a: np.ndarray, p: int) -> np.ndarray:
    return np.asarray(a % p, dtype=np.int64)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return mod_p(a @ b, p)


def inv_mod_scalar(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """RREF over GF(p). Returns (reduced matrix, pivot columns)."""
    a = mod_p(np.array(a, dtype=np.int64, copy=True), p)
    m, n = a.shape
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if not len(nz):
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = mod_p(a[r] * inv_mod_scalar(a[r, c], p), p)
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if len(others):
            a[others] = mod_p(a[others] - np.outer(a[others, c], a[r]), p)
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    _, pivots = rref_mod(a, p)
    return len(pivots)


def nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Right nullspace basis of ``a`` over GF(p); columns form a basis."""
    a = mod_p(a, p)
    m, n = a.shape
    r, pivots = rref_mod(a, p)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, pc in enumerate(pivots):
            basis[pc, k] = (-r[row, f]) % p
    return basis


def inv_mod_mat(a: np.ndarray, p: int) -> np.ndarray:
    """Gauss-Jordan inverse over GF(p). Raises if singular."""
    n = a.shape[0]
    aug = np.concatenate([mod_p(a, p), np.eye(n, dtype=np.int64)], axis=1)
    r, _ = rref_mod(aug, p)
    if not np.array_equal(r[:, :n], np.eye(n, dtype=np.int64)):
        raise ValueError("Matrix not invertible mod p")
    return r[:, n:]


def is_invertible(a: np.ndarray, p: int) -> bool:
    return rank_mod(a, p) == a.shape[0]


def matrix_power_mod(a: np.ndarray, k: int, p: int) -> np.ndarray:
    result = np.eye(a.shape[0], dtype=np.int64)
    base = mod_p(a, p)
    if k < 0:
        base, k = inv_mod_mat(base, p), -k
    while k:
        if k & 1:
            result = matmul_mod(result, base, p)
        base = matmul_mod(base, base, p)
        k >>= 1
    return result


def matrix_key(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype=np.int64).tobytes()


def prime_factors(k: int) -> list[int]:
    primes = []
    f = 2
    while f * f <= k:
        if k % f == 0:
            primes.append(f)
            while k % f == 0:
                k //= f
        f += 1
    if k > 1:
        primes.append(k)
    return primes


def prime_power(n: int) -> Optional[tuple[int, int]]:
    """Return (p, d) with n = p^d, or None."""
    if n < 2:
        return None
    primes = prime_factors(n)
    if len(primes) != 1:
        return None
    p, d = primes[0], 0
    while n > 1:
        n //= p
        d += 1
    return p, d


def has_order(a: np.ndarray, order: int, p: int) -> bool:
    eye = np.eye(a.shape[0], dtype=np.int64)
    if not np.array_equal(matrix_power_mod(a, order, p), eye):
        return False
    return all(not np.array_equal(matrix_power_mod(a, order // r, p), eye) for r in prime_factors(order))


@dataclass(eq=False)
class FieldStructure:
    """
    GF(q) as {0} together with the powers of an invertible matrix ``c`` over GF(p).

    Elements are coded as integers: 0 is zero and ``k + 1`` is ``c^k``. Addition goes through
    the Zech table, ``c^zech[k] = 1 + c^k`` (``zech[k] = -1`` when ``1 + c^k = 0``).
    """

    p: int
    d: int
    a: int
    c: np.ndarray
    powers: np.ndarray
    exponent_of: dict[bytes, int]
    zech: np.ndarray

    @property
    def e(self) -> int:
        return self.d // self.a

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def units(self) -> int:
        return self.q - 1

    def matrix(self, code: int) -> np.ndarray:
        if code == 0:
            return np.zeros((self.d, self.d), dtype=np.int64)
        return self.powers[code - 1]

    def code_of_matrix(self, m: np.ndarray) -> Optional[int]:
        if not m.any():
            return 0
        k = self.exponent_of.get(matrix_key(m))
        return None if k is None else k + 1

    def contains(self, m: np.ndarray) -> bool:
        return self.code_of_matrix(m) is not None

    def element_set(self) -> frozenset[bytes]:
        return frozenset(self.exponent_of)

    @cached_property
    def neg_one(self) -> int:
        if self.p == 2:
            return 1
        return int(np.flatnonzero(self.zech == -1)[0]) + 1

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return (x - 1 + y - 1) % self.units + 1

    def add(self, x: int, y: int) -> int:
        if x == 0:
            return y
        if y == 0:
            return x
        z = int(self.zech[(y - x) % self.units])
        return 0 if z < 0 else (x - 1 + z) % self.units + 1

    def neg(self, x: int) -> int:
        return self.mul(x, self.neg_one)

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse in GF(q)")
        return (-(x - 1)) % self.units + 1

    def power(self, x: int, k: int) -> int:
        if x == 0:
            return 0 if k > 0 else 1
        return ((x - 1) * k) % self.units + 1

    def frobenius(self, x: int, i: int) -> int:
        return self.power(x, self.p**i)

    def square(self, x: int) -> int:
        return self.mul(x, x)

    @cached_property
    def add_table(self) -> np.ndarray:
        q = self.q
        table = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(q):
                table[x, y] = self.add(x, y)
        return table

    @cached_property
    def mul_table(self) -> np.ndarray:
        codes = np.arange(self.q)
        table = ((codes[:, None] - 1) + (codes[None, :] - 1)) % max(self.units, 1) + 1
        table[0, :] = 0
        table[:, 0] = 0
        return table

    @cached_property
    def prime_field_codes(self) -> list[int]:
        """Codes of 0, 1, ..., p-1 in that order."""
        codes = [0, 1]
        for _ in range(2, self.p):
            codes.append(self.add(codes[-1], 1))
        return codes[: self.p]

    @cached_property
    def poly_codes(self) -> np.ndarray:
        """Code of sum_j x_j c^j indexed by sum_j x_j p^j for j < e."""
        out = np.zeros(self.q, dtype=np.int64)
        basis = [self.powers[j % len(self.powers)] for j in range(self.e)]
        for coeffs in product(range(self.p), repeat=self.e):
            m = sum((x * b for x, b in zip(coeffs, basis)), np.zeros((self.d, self.d), dtype=np.int64))
            code = self.code_of_matrix(mod_p(m, self.p))
            out[sum(x * self.p**j for j, x in enumerate(coeffs))] = code
        return out

    @cached_property
    def code_polys(self) -> np.ndarray:
        """Inverse of ``poly_codes``: coefficient row over I, c, ..., c^(e-1) for each code."""
        out = np.zeros((self.q, self.e), dtype=np.int64)
        for index, code in enumerate(self.poly_codes):
            out[code] = [(index // self.p**j) % self.p for j in range(self.e)]
        return out

    def span_rows(self, vectors: np.ndarray) -> np.ndarray:
        """GF(p)-spanning rows of the GF(q)-span of the given vectors."""
        vectors = np.atleast_2d(vectors)
        return np.vstack([matmul_mod(vectors, self.powers[j % len(self.powers)], self.p) for j in range(self.e)])

    def rank(self, vectors: np.ndarray) -> int:
        """GF(q)-dimension of the span of vectors in GF(p)^d."""
        if len(vectors) == 0:
            return 0
        return rank_mod(self.span_rows(vectors), self.p) // self.e

    def rank_codes(self, rows: Sequence[Sequence[int]]) -> int:
        """Rank of a matrix with entries given as codes."""
        m = [list(r) for r in rows]
        rank = 0
        cols = len(m[0]) if m else 0
        for c in range(cols):
            piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            inv = self.inv(m[rank][c])
            m[rank] = [self.mul(inv, x) for x in m[rank]]
            for i in range(len(m)):
                if i != rank and m[i][c]:
                    f = m[i][c]
                    m[i] = [self.sub(x, self.mul(f, y)) for x, y in zip(m[i], m[rank])]
            rank += 1
        return rank

    def __repr__(self) -> str:
        return f"FieldStructure(p={self.p}, d={self.d}, a={self.a}, q={self.q})"


def field_from_element(
    c: np.ndarray, a: int, p: int, settings: Optional[Settings] = None
) -> Optional[FieldStructure]:
    """
    Recover GF(p^(d/a)) from a candidate generator of its multiplicative group.

    Args:
        c (np.ndarray): Invertible d x d matrix over GF(p)
        a (int): Divisor of d; the field has degree d/a over GF(p)
        p (int): Prime
        settings (Optional[Settings]): Caps; ``field_cap`` bounds q

    Returns:
        Optional[FieldStructure]: The field, or None if ``c`` has the wrong order or its powers
        are not closed under addition
    """
    settings = settings or get_settings()
    c = mod_p(c, p)
    d = c.shape[0]
    if a <= 0 or d % a:
        return None
    q = p ** (d // a)
    if q > settings.field_cap:
        logger.warning(f"Field of order {q} exceeds field_cap {settings.field_cap}")
        return None
    eye = np.eye(d, dtype=np.int64)
    units = q - 1
    powers = np.empty((units, d, d), dtype=np.int64)
    exponent_of: dict[bytes, int] = {}
    m = eye
    for k in range(units):
        key = matrix_key(m)
        if key in exponent_of:
            return None
        exponent_of[key] = k
        powers[k] = m
        m = matmul_mod(m, c, p)
    if not np.array_equal(m, eye):
        return None
    zech = np.empty(units, dtype=np.int64)
    for k in range(units):
        s = mod_p(eye + powers[k], p)
        if not s.any():
            zech[k] = -1
            continue
        z = exponent_of.get(matrix_key(s))
        if z is None:
            return None
        zech[k] = z
    return FieldStructure(p, d, a, c, powers, exponent_of, zech)


def semilinear_check(gens: Sequence[np.ndarray], fs: FieldStructure) -> Optional[list[int]]:
    """
    Frobenius exponent of each generator, or None if some generator does not normalise the field.

    A generator g has exponent i when g^-1 c g = c^(p^i).
    """
    exponents = []
    for g in gens:
        conj = matmul_mod(matmul_mod(inv_mod_mat(g, fs.p), fs.c, fs.p), g, fs.p)
        k = fs.exponent_of.get(matrix_key(conj))
        if k is None:
            return None
        i = next((i for i in range(fs.e) if pow(fs.p, i, fs.units) == k % fs.units), None)
        if i is None:
            return None
        exponents.append(i)
    return exponents


@dataclass(frozen=True, eq=False)
class MatrixSpace:
    """GF(p)-span of linearly independent d x d matrices."""

    p: int
    d: int
    basis: tuple[np.ndarray, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, m: np.ndarray) -> bool:
        if not self.basis:
            return not mod_p(m, self.p).any()
        stacked = np.vstack([b.reshape(-1) for b in self.basis] + [mod_p(m, self.p).reshape(-1)])
        return rank_mod(stacked, self.p) == self.dimension

    def combination(self, coeffs: Sequence[int]) -> np.ndarray:
        total = np.zeros((self.d, self.d), dtype=np.int64)
        for x, b in zip(coeffs, self.basis):
            total = total + int(x) * b
        return mod_p(total, self.p)

    def elements(self) -> Iterator[np.ndarray]:
        for coeffs in product(range(self.p), repeat=self.dimension):
            yield self.combination(coeffs)


def _solution_space(blocks: list[np.ndarray], p: int, d: int) -> MatrixSpace:
    if not blocks:
        basis = tuple(np.eye(d * d, dtype=np.int64)[k].reshape(d, d) for k in range(d * d))
        return MatrixSpace(p, d, basis)
    null = nullspace_mod(np.vstack(blocks), p)
    return MatrixSpace(p, d, tuple(null[:, k].reshape(d, d) for k in range(null.shape[1])))


def centralizer_space(gens: Sequence[np.ndarray], p: int, d: Optional[int] = None) -> MatrixSpace:
    """
    Matrices X with X g = g X for every generator g.

    Row-major vec(X g - g X) = (I (x) g^T - g (x) I) vec(X); the blocks are stacked and solved.
    """
    d = gens[0].shape[0] if gens else d
    if d is None:
        raise ValueError("dimension needed when there are no generators")
    eye = np.eye(d, dtype=np.int64)
    blocks = [mod_p(np.kron(eye, g.T) - np.kron(g, eye), p) for g in gens]
    return _solution_space(blocks, p, d)


def enumerate_units(
    space: MatrixSpace, cap: Optional[int] = None, settings: Optional[Settings] = None
) -> list[np.ndarray]:
    """
    All invertible elements of a matrix space.

    Raises:
        TooLargeError: If the space has more than ``cap`` elements
    """
    settings = settings or get_settings()
    cap = settings.field_cap if cap is None else cap
    size = space.p**space.dimension
    if size > cap:
        raise TooLargeError("matrix space", size, cap)
    return [m for m in space.elements() if is_invertible(m, space.p)]


def _divisors(d: int) -> list[int]:
    return [a for a in range(1, d + 1) if d % a == 0]


def prime_field(p: int, d: int, settings: Optional[Settings] = None) -> FieldStructure:
    """GF(p) acting by scalars on GF(p)^d."""
    root = next(g for g in range(1, p) if p == 2 or all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1)))
    fs = field_from_element(root * np.eye(d, dtype=np.int64), d, p, settings)
    assert fs is not None
    return fs


def enumerate_field_structures(
    g0_gens: Sequence[np.ndarray],
    derived_gens: Sequence[np.ndarray],
    p: int,
    d: int,
    settings: Optional[Settings] = None,
) -> tuple[list[tuple[int, FieldStructure]], bool]:
    """
    Every field GF(p^(d/a)) of matrices normalised by G0 whose units centralise G0'.

    Args:
        g0_gens (Sequence[np.ndarray]): Zero-stabilizer generators as matrices
        derived_gens (Sequence[np.ndarray]): Generators of the derived subgroup of G0
        p (int): Prime
        d (int): Dimension
        settings (Optional[Settings]): Caps

    Returns:
        tuple[list[tuple[int, FieldStructure]], bool]: (a, field) pairs sorted by a, and whether
        the enumeration was complete
    """
    settings = settings or get_settings()
    complete = True
    units: list[np.ndarray] = []
    try:
        units = enumerate_units(centralizer_space(derived_gens, p, d), settings=settings)
    except TooLargeError as e:
        logger.warning(f"Centralizer of G0' too large ({e}); falling back to the centralizer of G0")
        complete = False
        try:
            units = enumerate_units(centralizer_space(g0_gens, p, d), settings=settings)
        except TooLargeError as e2:
            logger.warning(f"Centralizer of G0 too large as well ({e2})")

    found: list[tuple[int, FieldStructure]] = []
    for a in _divisors(d):
        q = p ** (d // a)
        if q > settings.field_cap:
            complete = False
            continue
        fields_for_a: list[FieldStructure] = []
        candidates = units if a < d else [prime_field(p, d, settings).c]
        for u in candidates:
            if any(fs.contains(u) for fs in fields_for_a):
                continue
            if not has_order(u, q - 1, p):
                continue
            fs = field_from_element(u, a, p, settings)
            if fs is None or semilinear_check(g0_gens, fs) is None:
                continue
            fields_for_a.append(fs)
        found.extend((a, fs) for fs in fields_for_a)
    logger.debug(f"Field structures over GF({p})^{d}: {[(a, fs.q) for a, fs in found]}")
    return found, complete


def tuple_intertwiner(
    gs: Sequence[np.ndarray],
    hs: Sequence[np.ndarray],
    p: int,
    settings: Optional[Settings] = None,
) -> Optional[np.ndarray]:
    """
    Find an invertible t with g_i t = t h_i for all i.

    Args:
        gs (Sequence[np.ndarray]): First tuple
        hs (Sequence[np.ndarray]): Second tuple, same length
        p (int): Prime
        settings (Optional[Settings]): ``intertwiner_tries`` and ``intertwiner_scan_cap``

    Returns:
        Optional[np.ndarray]: Such a t, or None
    """
    settings = settings or get_settings()
    if len(gs) != len(hs):
        raise ValueError("tuples of different lengths")
    d = gs[0].shape[0] if gs else (hs[0].shape[0] if hs else 0)
    if d == 0:
        return None
    eye = np.eye(d, dtype=np.int64)
    blocks = [mod_p(np.kron(g, eye) - np.kron(eye, h.T), p) for g, h in zip(gs, hs)]
    space = _solution_space(blocks, p, d)
    if not space.dimension:
        return None
    rng = random.Random(settings.seed)
    for b in space.basis:
        if is_invertible(b, p):
            return b
    for _ in range(settings.intertwiner_tries):
        t = space.combination([rng.randrange(p) for _ in range(space.dimension)])
        if is_invertible(t, p):
            return t
    if p**space.dimension > settings.intertwiner_scan_cap:
        logger.warning(f"Intertwiner space of dimension {space.dimension} too large to scan")
        return None
    for t in space.elements():
        if is_invertible(t, p):
            return t
    return None


def companion_matrix(coeffs: Sequence[int], p: int) -> np.ndarray:
    """Companion of x^e + sum_j coeffs[j] x^j in the row convention e_i C = e_(i+1)."""
    e = len(coeffs)
    m = np.zeros((e, e), dtype=np.int64)
    for i in range(e - 1):
        m[i, i + 1] = 1
    m[e - 1] = [(-x) % p for x in coeffs]
    return m


def prime_power_field(q: int, settings: Optional[Settings] = None) -> FieldStructure:
    """
    GF(q) as matrices over GF(p) from the first primitive polynomial in lexicographic order.

    Raises:
        ValueError: If q is not a prime power
    """
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    p, e = pp
    if e == 1:
        return prime_field(p, 1, settings)
    for coeffs in product(range(p), repeat=e):
        if coeffs[0] == 0:
            continue
        fs = field_from_element(companion_matrix(coeffs, p), 1, p, settings)
        if fs is not None:
            return fs
    raise ValueError(f"no primitive polynomial found for GF({q})")
