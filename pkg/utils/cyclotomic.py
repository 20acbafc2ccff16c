"""Exact arithmetic in Z[zeta_p].

A CycInt is stored in the integral basis 1, zeta, ..., zeta^{p-2}; zeta^{p-1}
is eliminated through 1 + zeta + ... + zeta^{p-1} = 0. Products are computed as
integer polynomials and reduced modulo the cyclotomic polynomial
Phi_p = X^{p-1} + ... + X + 1.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime
from sympy.polys.densearith import dup_mul, dup_mul_ground, dup_rem
from sympy.polys.densebasic import dup_strip
from sympy.polys.domains import ZZ


def _check_prime(p: int) -> None:
    if p < 2 or not isprime(p):
        raise ValueError(f"p must be prime, got p={p}")


def _cyclotomic_poly(p: int) -> list:
    return [ZZ(1)] * p


@dataclass(frozen=True)
class CycInt:
    """sum_i coeffs[i] * zeta_p^i with len(coeffs) == p - 1."""
    p: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise ValueError(f"CycInt over p={self.p} needs {self.p - 1} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def integer(cls, p: int, n: int) -> "CycInt":
        return cls(p, (int(n),) + (0,) * (p - 2))

    @classmethod
    def from_exponent_counts(cls, p: int, counts: Sequence[int]) -> "CycInt":
        """sum_k counts[k] * zeta^k for a length-p vector of (possibly weighted) counts."""
        if len(counts) != p:
            raise ValueError(f"expected {p} exponent counts, got {len(counts)}")
        top = int(counts[p - 1])
        return cls(p, tuple(int(counts[i]) - top for i in range(p - 1)))

    @classmethod
    def from_exponents(cls, p: int, exponents: np.ndarray, weights: Optional[np.ndarray] = None) -> "CycInt":
        """sum_j weights[j] * zeta^{exponents[j]}; unit weights when none are given."""
        exponents = np.asarray(exponents, dtype=np.int64) % p
        if weights is None:
            counts = np.bincount(exponents, minlength=p)
        else:
            counts = np.zeros(p, dtype=np.int64)
            np.add.at(counts, exponents, np.asarray(weights, dtype=np.int64))
        return cls.from_exponent_counts(p, counts)

    # sympy dense form: highest degree first
    def _dense(self) -> list:
        return dup_strip([ZZ(c) for c in reversed(self.coeffs)])

    @classmethod
    def _from_dense(cls, p: int, dense: list) -> "CycInt":
        reduced = dup_rem(dense, _cyclotomic_poly(p), ZZ)
        low = [int(c) for c in reversed(reduced)]
        return cls(p, tuple(low + [0] * (p - 1 - len(low))))

    def _check_same_ring(self, other: "CycInt") -> None:
        if other.p != self.p:
            raise ValueError(f"cannot combine Z[zeta_{self.p}] with Z[zeta_{other.p}]")

    def _lift(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            self._check_same_ring(other)
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.integer(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt._from_dense(self.p, dup_mul(self._dense(), other._dense(), ZZ))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in Z[zeta]")
        result = CycInt.integer(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, n: int) -> "CycInt":
        return CycInt._from_dense(self.p, dup_mul_ground(self._dense(), ZZ(n), ZZ))

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return as_rational_integer(self) == int(other)
        if isinstance(other, CycInt):
            return self.p == other.p and self.coeffs == other.coeffs
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_rational_integer(self) -> Optional[int]:
        return as_rational_integer(self)

    def __str__(self):
        n = as_rational_integer(self)
        if n is not None:
            return str(n)
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            atom = "1" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(atom)
            elif c == -1:
                terms.append(f"-{atom}")
            else:
                terms.append(f"{c}*{atom}")
        return " + ".join(terms).replace("+ -", "- ")


def zeta_pow(p: int, k: int) -> CycInt:
    """zeta_p^{k mod p} in canonical form."""
    _check_prime(p)
    k %= p
    if k == p - 1:
        return CycInt(p, (-1,) * (p - 1))
    coeffs = [0] * (p - 1)
    coeffs[k] = 1
    return CycInt(p, tuple(coeffs))


def cyc_arith(op: str, x: CycInt, y: Union[CycInt, int]) -> CycInt:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "scale":
        if not isinstance(y, (int, np.integer)):
            raise ValueError("scale expects an integer factor")
        return x.scale(int(y))
    raise ValueError(f"unknown cyclotomic operation {op!r}")


def as_rational_integer(x: CycInt) -> Optional[int]:
    """n when x == n * 1, otherwise None."""
    if any(x.coeffs[1:]):
        return None
    return int(x.coeffs[0])


def cyc_sum(p: int, values) -> CycInt:
    total = CycInt.zero(p)
    for v in values:
        total = total + v
    return total
