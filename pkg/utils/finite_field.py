"""Exact arithmetic in F_p and F_{p^e} = F_p[X]/(pi(X)).

Elements are addressed by their enumeration index

    index(c_0 + c_1 X + ... + c_{e-1} X^{e-1}) = c_0 + c_1 p + ... + c_{e-1} p^{e-1}

so the prime-field residue c has index c. Multiplication runs through
exp/log tables built from the primitive element; addition works on the
coefficient vectors. Every table is computed once, when the context is built
or, for the q x q multiplication and trace-form tables, on first use under a
lock, after which a FieldCtx is read-only.
"""
import math
import threading
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, computed_field, model_validator
from sympy import isprime, primefactors
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd, gf_mul, gf_pow_mod, gf_rem, gf_strip, gf_sub

from config.config import MAX_FIELD_ORDER
from utils.logger import get_logger

logger = get_logger(__name__)

Modulus = Tuple[int, ...]


class CodeSpec(BaseModel):
    """Parameter tuple (p, e, l) of one code instance, with derived m, s, q."""
    p: int
    e: int
    l: int

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_hypotheses(self) -> "CodeSpec":
        if self.p < 3 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got p={self.p}")
        if self.e < 1:
            raise ValueError(f"e must be a positive even integer, got e={self.e}")
        if self.e % 2:
            raise ValueError(f"e must be even, got e={self.e}")
        if self.l < 1:
            raise ValueError(f"l must be a positive integer, got l={self.l}")
        s = math.gcd(self.l, self.e)
        if (self.e // s) % 2:
            raise ValueError(f"e/s must be even, got e/s={self.e // s} (s=gcd(l, e)={s})")
        return self

    @computed_field
    @property
    def m(self) -> int:
        return self.e // 2

    @computed_field
    @property
    def s(self) -> int:
        return math.gcd(self.l, self.e)

    @computed_field
    @property
    def q(self) -> int:
        return self.p ** self.e

    @computed_field
    @property
    def parity(self) -> int:
        """m/s mod 2: 1 selects the odd-ratio closed forms, 0 the even-ratio ones."""
        return (self.m // self.s) % 2


def _dense(coeffs: Sequence[int]) -> list:
    """Low-to-high coefficients -> sympy dense list (leading coefficient first)."""
    return gf_strip([ZZ(int(c)) for c in reversed(coeffs)])


def _sparse(dense: list, length: int) -> Tuple[int, ...]:
    """sympy dense list -> low-to-high coefficient tuple padded to length."""
    low = [int(c) for c in reversed(dense)]
    return tuple(low + [0] * (length - len(low)))


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """gcd(f, X^{p^i} - X) = 1 for every i <= deg(f)/2."""
    f = _dense(modulus)
    degree = len(f) - 1
    if degree < 1:
        return False
    x = [ZZ(1), ZZ(0)]
    for i in range(1, degree // 2 + 1):
        xp = gf_pow_mod(x, p ** i, f, p, ZZ)
        if gf_gcd(f, gf_sub(xp, x, p, ZZ), p, ZZ) != [1]:
            return False
    return True


def smallest_irreducible(p: int, e: int) -> Modulus:
    """Lexicographically smallest monic irreducible of degree e (c_0 compared first)."""
    for low in product(range(p), repeat=e):
        candidate = tuple(low) + (1,)
        if is_irreducible(candidate, p):
            return candidate
    raise ValueError(f"no irreducible polynomial of degree {e} over F_{p}")


def format_modulus(modulus: Sequence[int]) -> str:
    terms = []
    for i in range(len(modulus) - 1, -1, -1):
        c = modulus[i]
        if c == 0:
            continue
        power = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
        coeff = "" if (c == 1 and i > 0) else str(c)
        terms.append(coeff + power)
    return " + ".join(terms) or "0"


class FieldElement:
    """An element of F_q, stored as its enumeration index in the owning context."""
    __slots__ = ("ctx", "index")

    def __init__(self, ctx: "FieldCtx", index: int):
        self.ctx = ctx
        self.index = int(index)

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return tuple(int(c) for c in self.ctx.coords[self.index])

    def is_zero(self) -> bool:
        return self.index == 0

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx.key != self.ctx.key:
                raise ValueError("elements belong to different fields")
            return other.index
        if isinstance(other, (int, np.integer)):
            return self.ctx.scalar(int(other)).index
        return NotImplemented

    def __add__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.add_idx(self.index, j))

    __radd__ = __add__

    def __sub__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.add_idx(self.index, self.ctx.neg_idx(j)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg_idx(self.index))

    def __mul__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_idx(self.index, j))

    __rmul__ = __mul__

    def __truediv__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_idx(self.index, self.ctx.inv_idx(j)))

    def __pow__(self, n: int):
        return FieldElement(self.ctx, self.ctx.pow_idx(self.index, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv_idx(self.index))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx.key == other.ctx.key and self.index == other.index
        if isinstance(other, (int, np.integer)):
            return self.index == self.ctx.scalar(int(other)).index
        return NotImplemented

    def __lt__(self, other: "FieldElement") -> bool:
        return self.index < other.index

    def __hash__(self):
        return hash((self.ctx.key, self.index))

    def __repr__(self):
        return f"FieldElement({self.ctx.format(self.index)})"


class FieldCtx:
    """The field F_{p^e} in polynomial basis, plus its lookup tables."""

    def __init__(self, p: int, e: int, modulus: Optional[Sequence[int]] = None):
        if p < 2 or not isprime(p):
            raise ValueError(f"p must be prime, got p={p}")
        if e < 1:
            raise ValueError(f"e must be positive, got e={e}")
        self.p = p
        self.e = e
        self.q = p ** e
        if self.q > MAX_FIELD_ORDER:
            logger.warning(f"F_{self.q} is outside the tested envelope q <= {MAX_FIELD_ORDER}")

        if modulus is None:
            self.modulus = smallest_irreducible(p, e)
        else:
            self.modulus = self._check_modulus(modulus)
        self.key = (p, e, self.modulus)
        self._f = _dense(self.modulus)

        self.weights = p ** np.arange(e, dtype=np.int64)
        self.coords = (np.arange(self.q, dtype=np.int64)[:, None] // self.weights) % p
        self.coords.setflags(write=False)

        self.primitive_index = self._find_primitive()
        self.exp, self.log = self._build_power_tables()
        self.frob = self.pow_table(p)
        self.traces = self._build_trace_table()
        self._tables_lock = threading.Lock()
        self._mul_table = None
        self._trace_form = None

        logger.debug(
            f"Built F_{self.q}: modulus {format_modulus(self.modulus)}, "
            f"primitive element {self.format(self.primitive_index)}"
        )

    def _check_modulus(self, modulus: Sequence[int]) -> Modulus:
        coeffs = tuple(int(c) % self.p for c in modulus)
        if len(coeffs) != self.e + 1 or coeffs[-1] != 1:
            raise ValueError(
                f"modulus must be monic of degree {self.e} given as {self.e + 1} "
                f"coefficients low-to-high, got {list(modulus)}"
            )
        if not is_irreducible(coeffs, self.p):
            raise ValueError(f"modulus {format_modulus(coeffs)} is reducible over F_{self.p}")
        return coeffs

    # -- polynomial-level helpers used while the tables are being built

    def _to_dense(self, index: int) -> list:
        return _dense(self.coords[index])

    def _to_index(self, dense: list) -> int:
        return int(np.dot(_sparse(dense, self.e), self.weights))

    def _find_primitive(self) -> int:
        one = [ZZ(1)]
        cofactors = [(self.q - 1) // r for r in primefactors(self.q - 1)]
        for index in range(1, self.q):
            poly = self._to_dense(index)
            if all(gf_pow_mod(poly, c, self._f, self.p, ZZ) != one for c in cofactors):
                return index
        raise RuntimeError(f"no primitive element found in F_{self.q}")

    def _build_power_tables(self):
        exp = np.zeros(self.q - 1, dtype=np.int64)
        log = np.full(self.q, -1, dtype=np.int64)
        h = self._to_dense(self.primitive_index)
        current = [ZZ(1)]
        for k in range(self.q - 1):
            index = self._to_index(current)
            exp[k] = index
            log[index] = k
            current = gf_rem(gf_mul(current, h, self.p, ZZ), self._f, self.p, ZZ)
        if current != [1] or (log[1:] < 0).any():
            raise RuntimeError("primitive element does not generate F_q^*")
        exp.setflags(write=False)
        log.setflags(write=False)
        return exp, log

    def _build_trace_table(self) -> np.ndarray:
        # Tr(x) = x + x^p + ... + x^{p^{e-1}}, summed coefficient-wise
        total = self.coords.copy()
        current = np.arange(self.q)
        for _ in range(1, self.e):
            current = self.frob[current]
            total += self.coords[current]
        total %= self.p
        if total[:, 1:].any():
            raise RuntimeError("trace left the prime subfield")
        traces = total[:, 0].copy()
        traces.setflags(write=False)
        return traces

    # -- index-level arithmetic

    def add_idx(self, i: int, j: int) -> int:
        return int(np.dot((self.coords[i] + self.coords[j]) % self.p, self.weights))

    def neg_idx(self, i: int) -> int:
        return int(np.dot((-self.coords[i]) % self.p, self.weights))

    def mul_idx(self, i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        return int(self.exp[(self.log[i] + self.log[j]) % (self.q - 1)])

    def inv_idx(self, i: int) -> int:
        if i == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.q}")
        return int(self.exp[(-self.log[i]) % (self.q - 1)])

    def pow_idx(self, i: int, n: int) -> int:
        if n < 0:
            return self.pow_idx(self.inv_idx(i), -n)
        if n == 0:
            return 1
        if i == 0:
            return 0
        return int(self.exp[(int(self.log[i]) * (n % (self.q - 1))) % (self.q - 1)])

    def pow_table(self, n: int) -> np.ndarray:
        """Index of x^n for every x, n >= 1."""
        table = np.zeros(self.q, dtype=np.int64)
        k = n % (self.q - 1)
        table[1:] = self.exp[(self.log[1:] * k) % (self.q - 1)]
        return table

    def mul_vec(self, i: int, indices: np.ndarray) -> np.ndarray:
        """Index of x_i * x_j for every j in indices."""
        if i == 0:
            return np.zeros(len(indices), dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        out = self.exp[(self.log[indices] + self.log[i]) % (self.q - 1)]
        return np.where(indices == 0, 0, out)

    @property
    def mul_table(self) -> np.ndarray:
        if self._mul_table is None:
            with self._tables_lock:
                if self._mul_table is None:
                    self._mul_table = self._build_mul_table()
        return self._mul_table

    @property
    def trace_form(self) -> np.ndarray:
        """Matrix of Tr(a*x) indexed by (a, x)."""
        if self._trace_form is None:
            table = self.mul_table
            with self._tables_lock:
                if self._trace_form is None:
                    form = self.traces[table]
                    form.setflags(write=False)
                    self._trace_form = form
        return self._trace_form

    def _build_mul_table(self) -> np.ndarray:
        logs = self.log[1:]
        table = np.zeros((self.q, self.q), dtype=np.int64)
        table[1:, 1:] = self.exp[(logs[:, None] + logs[None, :]) % (self.q - 1)]
        table.setflags(write=False)
        return table

    # -- element-level API

    def from_index(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise ValueError(f"index {index} outside F_{self.q}")
        return FieldElement(self, index)

    def element(self, coeffs: Sequence[int]) -> FieldElement:
        if len(coeffs) > self.e:
            raise ValueError(f"at most {self.e} coefficients expected, got {len(coeffs)}")
        padded = [int(c) % self.p for c in coeffs] + [0] * (self.e - len(coeffs))
        return FieldElement(self, int(np.dot(padded, self.weights)))

    def scalar(self, c: int) -> FieldElement:
        return FieldElement(self, c % self.p)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def primitive_element(self) -> FieldElement:
        return FieldElement(self, self.primitive_index)

    def elements(self) -> Iterator[FieldElement]:
        for index in range(self.q):
            yield FieldElement(self, index)

    def in_prime_field(self, x: FieldElement) -> bool:
        return x.index < self.p

    def order(self, x: FieldElement) -> int:
        if x.is_zero():
            raise ValueError("0 has no multiplicative order")
        return (self.q - 1) // math.gcd(int(self.log[x.index]), self.q - 1)

    def format(self, index: int) -> str:
        return format_modulus(tuple(int(c) for c in self.coords[index])) if index else "0"

    def __repr__(self):
        return f"FieldCtx(F_{self.p}^{self.e}, modulus={format_modulus(self.modulus)})"


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus: Optional[Modulus]) -> FieldCtx:
    return FieldCtx(p, e, modulus)


def make_field(spec: CodeSpec, modulus: Optional[Sequence[int]] = None) -> FieldCtx:
    """Field F_{p^e} for a validated code spec; contexts are shared per (p, e, modulus)."""
    return _cached_field(spec.p, spec.e, tuple(modulus) if modulus is not None else None)


def field(p: int, e: int, modulus: Optional[Sequence[int]] = None) -> FieldCtx:
    """Shared context for F_{p^e} without code-level hypotheses (used by the character sums)."""
    return _cached_field(p, e, tuple(modulus) if modulus is not None else None)


def arith(op: str, x: FieldElement, y: Union[FieldElement, int, None] = None) -> FieldElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "pow":
        if not isinstance(y, (int, np.integer)) or y < 0:
            raise ValueError(f"pow expects a non-negative integer exponent, got {y!r}")
        return x ** int(y)
    raise ValueError(f"unknown field operation {op!r}")


def trace(ctx: FieldCtx, x: FieldElement) -> int:
    """Absolute trace Tr: F_q -> F_p, as a residue in [0, p-1]."""
    return int(ctx.traces[x.index])


def frobenius_iter(ctx: FieldCtx, x: FieldElement, k: int) -> FieldElement:
    """x^{p^k}, as (k mod e) applications of the Frobenius map."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    index = x.index
    for _ in range(k % ctx.e):
        index = int(ctx.frob[index])
    return FieldElement(ctx, index)


def enumerate_elements(ctx: FieldCtx) -> List[FieldElement]:
    return list(ctx.elements())
