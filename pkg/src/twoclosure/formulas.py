# formulas.py

"""
Closed formulas for subdegrees and group orders of the rank 3 families handled here.
"""

from math import factorial, prod
from typing import Union

from .gf import prime_power

Sign = Union[int, str]


def sign(eps: Sign) -> int:
    """Normalise a form type given as '+', '-', 1 or -1."""
    if eps in ("+", 1, "plus"):
        return 1
    if eps in ("-", -1, "minus"):
        return -1
    raise ValueError(f"form type must be '+' or '-', got {eps!r}")


def field_degree(q: int) -> int:
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"{q} is not a prime power")
    return pp[1]


def order_gl(n: int, q: int) -> int:
    return prod(q**n - q**i for i in range(n))


def order_sl(n: int, q: int) -> int:
    return order_gl(n, q) // (q - 1)


def order_orthogonal(eps: Sign, dim: int, q: int) -> int:
    """Order of the full isometry group of a nondegenerate quadratic form of even dimension."""
    if dim % 2:
        raise ValueError("only even dimensions are supported")
    m, e = dim // 2, sign(eps)
    return 2 * q ** (m * (m - 1)) * (q**m - e) * prod(q ** (2 * i) - 1 for i in range(1, m))


def hamming_subdegrees(q: int) -> tuple[int, int]:
    return tuple(sorted((2 * (q - 1), (q - 1) ** 2)))


def bilinear_subdegrees(q: int, m: int) -> tuple[int, int]:
    """Subdegrees of the bilinear forms graph on 2 x m matrices over GF(q)."""
    return tuple(sorted(((q + 1) * (q**m - 1), q * (q**m - 1) * (q ** (m - 1) - 1))))


def isotropic_count(eps: Sign, m: int, q: int) -> int:
    """Nonzero singular vectors of a form of type eps in dimension 2m."""
    e = sign(eps)
    return (q**m - e) * (q ** (m - 1) + e)


def affine_polar_subdegrees(eps: Sign, m: int, q: int) -> tuple[int, int]:
    iso = isotropic_count(eps, m, q)
    return tuple(sorted((iso, q ** (2 * m) - 1 - iso)))


def wreath_order(b: int, k: int) -> int:
    """Order of Sym(b) wr Sym(k) in imprimitive action."""
    return factorial(b) ** k * factorial(k)


def product_order(q: int) -> int:
    """Order of Sym(q) wr Sym(2) in product action."""
    return factorial(q) ** 2 * 2


def tensor_closure_order(q: int, m: int) -> int:
    """Order of F^(2m) x| ((GL_2(q) o GL_m(q)) x| Aut(F)), with the factor swap when m = 2."""
    e = field_degree(q)
    base = q ** (2 * m) * order_gl(2, q) * order_gl(m, q) // (q - 1) * e
    return base * 2 if m == 2 else base


def qform_closure_order(eps: Sign, m: int, q: int) -> int:
    """Order of F^(2m) x| GammaO^eps_2m(q): isometries, multipliers and field automorphisms."""
    return q ** (2 * m) * order_orthogonal(eps, 2 * m, q) * (q - 1) * field_degree(q)
