"""Chebyshev polynomials: exact integer coefficients, float evaluation, and an
exact-arithmetic prover for the Pythagorean identity

    T_N(y)^2 + (1 - y^2) U_{N-1}(y)^2 = 1

together with the explicit-sum representations of T_N and x U_{N-1}.

Coefficients are stored in ascending degree order everywhere.
"""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np


class ChebKind(enum.Enum):
    FIRST = "T"
    SECOND = "U"


class IntPoly:
    """Polynomial with exact rational (normally integer) coefficients.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff: Rational = 1) -> "IntPoly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == IntPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return IntPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self), len(other))
        return IntPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = IntPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "IntPoly":
        return IntPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


X = IntPoly([0, 1])


@lru_cache(maxsize=None)
def _cheb_table(kind: ChebKind, n: int) -> IntPoly:
    if n == 0:
        return IntPoly([1])
    if n == 1:
        return IntPoly([0, 1]) if kind is ChebKind.FIRST else IntPoly([0, 2])
    return 2 * X * _cheb_table(kind, n - 1) - _cheb_table(kind, n - 2)


def cheb_coeffs(kind: ChebKind, n: int) -> IntPoly:
    """Exact coefficients of ``T_n`` or ``U_n`` from the three-term recurrence."""
    if n < 0:
        raise ValueError("Chebyshev order must be non-negative")
    # fill the cache bottom-up so deep orders never hit the recursion limit
    for k in range(n + 1):
        _cheb_table(kind, k)
    return _cheb_table(kind, n)


def cheb_eval(kind: ChebKind, n: int, x):
    """Evaluate ``T_n(x)`` or ``U_n(x)`` by forward three-term recurrence.

    Vectorised over ``x``. On ``[-1, 1]`` the recurrence is the stable
    direction; for ``|x| > 1`` the dominant solution is the one being
    computed, so relative accuracy is kept as well.
    """
    if n < 0:
        raise ValueError("Chebyshev order must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if x.ndim else float(prev)
    cur = x.copy() if kind is ChebKind.FIRST else 2.0 * x
    two_x = 2.0 * x
    for _ in range(n - 1):
        prev, cur = cur, two_x * cur - prev
    return cur if x.ndim else float(cur)


# ---------------------------------------------------------------------------
# explicit sums

def explicit_first_kind(n: int) -> IntPoly:
    """``f_n(x) = sum_l C(n-l, l) (-1)^l n (2x)^(n-2l) / (2(n-l))`` in exact rationals."""
    if n < 1:
        raise ValueError("explicit sums are defined for n >= 1")
    coeffs: dict[int, Fraction] = {}
    for l in range(n // 2 + 1):
        term = Fraction(comb(n - l, l) * (-1) ** l * n * 2 ** (n - 2 * l), 2 * (n - l))
        coeffs[n - 2 * l] = coeffs.get(n - 2 * l, 0) + term
    return IntPoly(_normalise(coeffs.get(k, 0)) for k in range(n + 1))


def explicit_second_kind(n: int) -> IntPoly:
    """``g_n(x) = 1/2 sum_l C(n-l-1, l) (-1)^l (2x)^(n-2l)`` in exact rationals."""
    if n < 1:
        raise ValueError("explicit sums are defined for n >= 1")
    coeffs: dict[int, Fraction] = {}
    for l in range(n // 2 + 1):
        term = Fraction(comb(n - l - 1, l) * (-1) ** l * 2 ** (n - 2 * l), 2)
        coeffs[n - 2 * l] = coeffs.get(n - 2 * l, 0) + term
    return IntPoly(_normalise(coeffs.get(k, 0)) for k in range(n + 1))


def _normalise(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else q


def explicit_formula_check(n: int) -> bool:
    """True iff ``f_n == T_n`` and ``g_n == x U_{n-1}`` coefficient-wise."""
    f_ok = explicit_first_kind(n) == cheb_coeffs(ChebKind.FIRST, n)
    g_ok = explicit_second_kind(n) == X * cheb_coeffs(ChebKind.SECOND, n - 1)
    return f_ok and g_ok


def derivative_relation_check(n: int) -> bool:
    """``n g_n(x) == x T_n'(x)`` as exact polynomials."""
    lhs = n * explicit_second_kind(n)
    rhs = X * cheb_coeffs(ChebKind.FIRST, n).derivative()
    return lhs == rhs


def summation_values(n: int) -> tuple[Rational, Rational]:
    """Exact ``(f_n(1), g_n(1))``; expected ``(1, n)``."""
    return explicit_first_kind(n)(1), explicit_second_kind(n)(1)


# ---------------------------------------------------------------------------
# master identity

@dataclass(frozen=True)
class ProofReport:
    kind: str
    N: int
    residual_coeffs: tuple
    verdict: str

    @property
    def proved(self) -> bool:
        return self.verdict == "proved"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["residual_coeffs"] = [int(c) for c in self.residual_coeffs]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def master_residual(n: int) -> IntPoly:
    t = cheb_coeffs(ChebKind.FIRST, n)
    u = cheb_coeffs(ChebKind.SECOND, n - 1)
    return t * t + IntPoly([1, 0, -1]) * u * u - 1


def prove_master_identity(n: int) -> ProofReport:
    """Expand ``T_n^2 + (1-y^2) U_{n-1}^2 - 1`` over the integers.

    A non-empty residual is reported with verdict ``"falsified"``.
    """
    if n < 1:
        raise ValueError("master identity is stated for N >= 1")
    res = master_residual(n)
    return ProofReport(
        kind="master_identity",
        N=n,
        residual_coeffs=res.coeffs,
        verdict="proved" if res.is_zero() else "falsified",
    )


def parity_slice(poly: IntPoly | Sequence, parity: int) -> list:
    """Coefficients of degrees ``parity, parity+2, ...`` up to the degree of ``poly``."""
    coeffs = poly.coeffs if isinstance(poly, IntPoly) else tuple(poly)
    return list(coeffs[parity::2])
