"""Lamé-polynomial coefficient vectors of arbitrary order.

For order ``N`` the profile pair is

    odd N:   f = sum_k a_k y^(2k+1),        g = s * sum_k b_k y^(2k)
    even N:  f = sum_k a_k y^(2k),          g = s * y * sum_k b_k y^(2k)

with ``k`` counted from zero (``a[0]`` is the lowest power). ``a`` is in units
of ``1/sqrt|mu1|`` and ``b`` in units of ``1/sqrt|mu2|``. The coefficients come
from closed-form falling-factorial expressions; ``chebyshev_crosscheck`` ties
them to T_N and U_{N-1}.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial, perm

from .chebyshev import ChebKind, IntPoly, cheb_coeffs, parity_slice


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"


@dataclass(frozen=True)
class LameCoeffs:
    N: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    parity: Parity

    def to_dict(self) -> dict:
        return {"N": self.N, "parity": self.parity.value,
                "a": list(self.a), "b": list(self.b)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "LameCoeffs":
        return cls(N=int(d["N"]), a=tuple(int(v) for v in d["a"]),
                   b=tuple(int(v) for v in d["b"]), parity=Parity(d["parity"]))

    def flipped(self, which: str = "a", index: int = 0) -> "LameCoeffs":
        """Copy with one coefficient negated; used as a mutation control."""
        vec = list(getattr(self, which))
        vec[index] = -vec[index]
        return replace(self, **{which: tuple(vec)})


def _as_int(q: Fraction) -> int:
    if q.denominator != 1:
        raise ArithmeticError(f"non-integral Lamé coefficient {q}")
    return q.numerator


def a_term(n: int, k: int) -> int:
    """``(-1)^k n (n-k-1)(n-k-2)...(n-2k+1) / k! * 2^(n-2k-1)``.

    The numerator ``n (n-k-1)...(n-2k+1)`` equals ``n (n-k-1)! / (n-2k)!``; at
    ``k = 0`` this is 1, and at the even edge ``k = n/2`` the power of two is
    ``1/2``, giving the constant term ``(-1)^(n/2)``.
    """
    numer = Fraction(n * factorial(n - k - 1), factorial(n - 2 * k))
    return _as_int((-1) ** k * numer / factorial(k) * Fraction(2) ** (n - 2 * k - 1))


def b_term(n: int, k: int) -> int:
    """``(-1)^k (n-k-1)(n-k-2)...(n-2k) / k! * 2^(n-2k-1)``."""
    numer = perm(n - k - 1, k)
    return _as_int((-1) ** k * Fraction(numer, factorial(k)) * Fraction(2) ** (n - 2 * k - 1))


def general_coeffs(n: int) -> LameCoeffs:
    if n < 1:
        raise ValueError("Lamé order must be >= 1")
    parity = Parity.ODD if n % 2 else Parity.EVEN
    len_a = n // 2 + 1 if parity is Parity.EVEN else (n + 1) // 2
    len_b = (n + 1) // 2 if parity is Parity.ODD else n // 2
    a = [0] * len_a
    b = [0] * len_b
    # k = 0 is the top coefficient; it lands at the end of the ascending list
    for k in range(len_a):
        a[len_a - 1 - k] = a_term(n, k)
    for k in range(len_b):
        b[len_b - 1 - k] = b_term(n, k)
    return LameCoeffs(N=n, a=tuple(a), b=tuple(b), parity=parity)


def chebyshev_crosscheck(n: int) -> bool:
    """True iff ``a`` is the nonzero-parity slice of T_N and ``b`` that of U_{N-1}."""
    c = general_coeffs(n)
    t = cheb_coeffs(ChebKind.FIRST, n)
    u = cheb_coeffs(ChebKind.SECOND, n - 1)
    return list(c.a) == parity_slice(t, n % 2) and list(c.b) == parity_slice(u, (n - 1) % 2)


def sign_pattern_check(n: int) -> bool:
    """Low-order coefficients against the residue-class rules for ``N mod 4``."""
    c = general_coeffs(n)
    r = n % 4
    if r == 1:
        return c.a[0] == n and c.b[0] == 1
    if r == 3:
        return c.a[0] == -n and c.b[0] == -1
    if r == 2:
        return c.a[0] == -1 and c.b[0] == n and 2 * c.a[1] == n * n
    return c.a[0] == 1 and c.b[0] == -n and 2 * c.a[1] == -n * n


def constraint_polynomial(c: LameCoeffs) -> IntPoly:
    """``|mu1| f^2 + |mu2| g^2 - 1`` written as a polynomial in ``z = y^2``.

    With ``s^2 = 1 - z`` this is ``z A(z)^2 + (1-z) B(z)^2 - 1`` for odd order
    and ``A(z)^2 + z (1-z) B(z)^2 - 1`` for even order. Each coefficient is one
    of the quadratic relations the vectors must satisfy; all vanish exactly.
    """
    A = IntPoly(c.a)
    B = IntPoly(c.b)
    z = IntPoly([0, 1])
    one_minus_z = IntPoly([1, -1])
    if c.parity is Parity.ODD:
        return z * A * A + one_minus_z * B * B - 1
    return A * A + z * one_minus_z * B * B - 1


def constraint_relations(c: LameCoeffs) -> list[int]:
    """Coefficient of every power ``z^0 .. z^N`` of ``constraint_polynomial``."""
    p = constraint_polynomial(c)
    return [p[k] for k in range(c.N + 1)]
