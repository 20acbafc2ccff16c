"""Closed-form predictions for C_D and their exact comparison with brute force.

The predictions follow the published case analysis literally: the length
formula, the two weight tables, the per-codeword symbol counts N_rho(a, b),
the phi decomposition of N_rho and the complete weight enumerator
polynomials. Brute force is the reference; any disagreement ends up in a
VerificationReport instead of raising.
"""
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel
from sympy.ntheory import is_primitive_root, primitive_root

from utils.char_sums import artin_map, eta, weil_sum
from utils.code_construct import (
    CompleteWeightEnumerator,
    PlessReport,
    SymbolCountVector,
    WeightDistribution,
    build_defining_set,
    iter_symbol_counts,
    pless_checks,
    weight_distribution,
)
from utils.cyclotomic import CycInt, as_rational_integer, zeta_pow
from utils.finite_field import CodeSpec, FieldCtx, FieldElement, frobenius_iter, make_field, trace
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class TheoremConstants:
    """Constants shared by the length formula, the weight tables and the CWE polynomials.

    big     = p^{2e-3}
    small   = p^{e+m-2} when m/s is odd, p^{e+m+s-2} when m/s is even
    fibre   = multiplicity of each quadratic-family summand
    flat    = multiplicity of the summands with a single heavy symbol
    uniform = number of codewords with all symbols equally frequent
    """
    p: int
    n: int
    big: int
    small: int
    fibre: int
    flat: int
    uniform: int
    reduced_m: int
    reduced_e: int


def theorem_constants(spec: CodeSpec) -> TheoremConstants:
    p, e, m, s = spec.p, spec.e, spec.m, spec.s
    if spec.parity == 1:
        small = p ** (e + m - 2)
        reduced_m, reduced_e = m, e
        uniform = p ** e * (p ** e - p)
    else:
        if m < s + 1:
            raise ValueError(f"m/s even requires m >= s + 1, got m={m}, s={s}")
        small = p ** (e + m + s - 2)
        reduced_m, reduced_e = m - s, e - 2 * s
        uniform = p ** (2 * e) - p ** (e + 1 - 2 * s)
    fibre = p ** (reduced_e - 1) + p ** (reduced_m - 1)
    flat = p ** (reduced_e - 1) - p ** reduced_m + p ** (reduced_m - 1) - 1
    big = p ** (2 * e - 3)
    return TheoremConstants(
        p=p,
        n=p * big + small,
        big=big,
        small=small,
        fibre=fibre,
        flat=flat,
        uniform=uniform,
        reduced_m=reduced_m,
        reduced_e=reduced_e,
    )


def predicted_length(spec: CodeSpec) -> int:
    return theorem_constants(spec).n


def predicted_trace_value_counts(spec: CodeSpec) -> Dict[int, int]:
    """c -> |{x : Tr(x^{p^l+1}) = c}| from the evaluated Weil sums S(y, 0)."""
    p, e = spec.p, spec.e
    k = spec.m if spec.parity == 1 else spec.m + spec.s
    counts = {0: p ** (e - 1) - (p - 1) * p ** (k - 1)}
    counts.update({c: p ** (e - 1) + p ** (k - 1) for c in range(1, p)})
    return counts


def length_via_character_sums(ctx: FieldCtx, l: int) -> int:
    """n = p^{2e-2} + p^{e-2} sum_{y != 0} zeta^{-y} S(y, 0), evaluated in Z[zeta]."""
    p, e = ctx.p, ctx.e
    total = CycInt.zero(p)
    for y in range(1, p):
        total = total + zeta_pow(p, -y) * weil_sum(ctx, l, ctx.scalar(y), ctx.zero)
    value = total.scale(p ** (e - 2)) + p ** (2 * e - 2)
    n = as_rational_integer(value)
    if n is None:
        raise ArithmeticError(f"length sum is not a rational integer: {value}")
    return n


def _exact(value: Fraction, label: str) -> int:
    if value.denominator != 1:
        raise ArithmeticError(f"{label} multiplicity {value} is not an integer")
    return int(value)


def predicted_weight_distribution(spec: CodeSpec) -> WeightDistribution:
    """Closed-form weight table for the parameter parity, coinciding weights merged.

    Rows whose multiplicity evaluates to 0 are dropped; negative values are
    kept so the verifier can report them.
    """
    c = theorem_constants(spec)
    p, big, small = c.p, c.big, c.small
    m, e = c.reduced_m, c.reduced_e
    half = Fraction(1, 2)
    rows = [
        (c.n, Fraction(p - 1)),
        ((p - 1) * (big + small // p), Fraction(c.uniform)),
        (
            big * (p - 1),
            half * (2 * p ** (m - 1) - 3 * p ** m + p ** (m + 1) + 2 * p ** (e - 1) - p ** e + p ** (e + 1) - 2),
        ),
        (
            big * (p - 1) + 2 * small,
            half * (2 * p ** (m - 1) - 3 * p ** m + p ** (m + 1) + 2 * p ** (e - 1) - 3 * p ** e + p ** (e + 1)),
        ),
        (
            big * (p - 1) + small,
            Fraction(1 - p - 2 * p ** (m - 1) + 3 * p ** m - p ** (m + 1) - 2 * p ** (e - 1) + 2 * p ** e),
        ),
    ]
    counts = Counter({0: 1})
    for weight, multiplicity in rows:
        counts[weight] += _exact(multiplicity, f"weight {weight}")
    return WeightDistribution(c.n, {w: a for w, a in sorted(counts.items()) if a != 0})


# -- per-codeword symbol counts

@dataclass(frozen=True)
class GammaInfo:
    """Solvability of X^{p^{2l}} + X = -a^{p^l} and T = Tr(gamma^{p^l+1})."""
    a_is_zero: bool
    solvable: bool
    t: Optional[int]


def gamma_info(spec: CodeSpec, ctx: FieldCtx, a: FieldElement) -> GammaInfo:
    if a.is_zero():
        return GammaInfo(True, True, 0)
    solutions = artin_map(ctx, spec.l, ctx.one).solve(-frobenius_iter(ctx, a, spec.l))
    if not solutions:
        return GammaInfo(False, False, None)
    gamma = solutions[0]
    return GammaInfo(False, True, trace(ctx, gamma ** (ctx.p ** spec.l + 1)))


def _b_class(ctx: FieldCtx, b: FieldElement) -> Optional[int]:
    """Residue of b when b lies in F_p, None otherwise."""
    return b.index if ctx.in_prime_field(b) else None


def _lemma_counts(c: TheoremConstants, info: GammaInfo, b: Optional[int]) -> Tuple[int, ...]:
    p, n, big, small = c.p, c.n, c.big, c.small
    if b is None:
        return (n // p,) * p
    if info.a_is_zero:
        counts = [0] * p
        counts[b] = n
        return tuple(counts)
    if not info.solvable:
        return (n // p,) * p
    t = info.t
    rest = []
    for rho in range(1, p):
        if t == 0:
            rest.append(big + small if (b != 0 and rho == b) else big)
        else:
            rest.append(big - small * eta(p, (rho - b) ** 2 - 4 * t))
    return (n - sum(rest),) + tuple(rest)


class _LemmaTable:
    """Memoised lemma evaluation keyed by the case that applies."""

    def __init__(self, spec: CodeSpec, ctx: FieldCtx):
        self.spec = spec
        self.ctx = ctx
        self.constants = theorem_constants(spec)
        self._gamma: Dict[int, GammaInfo] = {}
        self._counts: Dict[Tuple[GammaInfo, Optional[int]], Tuple[int, ...]] = {}

    def info(self, a: FieldElement) -> GammaInfo:
        if a.index not in self._gamma:
            self._gamma[a.index] = gamma_info(self.spec, self.ctx, a)
        return self._gamma[a.index]

    def counts(self, a: FieldElement, b: FieldElement) -> Tuple[int, ...]:
        key = (self.info(a), _b_class(self.ctx, b))
        if key not in self._counts:
            self._counts[key] = _lemma_counts(self.constants, *key)
        return self._counts[key]

    def rows(self, a_indices: np.ndarray) -> np.ndarray:
        """Predicted N[a, b, rho] for the given a and every b."""
        ctx, p = self.ctx, self.ctx.p
        table = np.empty((len(a_indices), ctx.q, p), dtype=np.int64)
        for i, a_index in enumerate(a_indices):
            a = ctx.from_index(int(a_index))
            for b_index in range(p):
                table[i, b_index] = self.counts(a, ctx.from_index(b_index))
            # every b outside F_p gives the flat profile
            table[i, p:] = self.counts(a, ctx.from_index(p))
        return table


def predicted_n_rho(spec: CodeSpec, ctx: FieldCtx, a: FieldElement, b: FieldElement) -> SymbolCountVector:
    table = _LemmaTable(spec, ctx)
    return SymbolCountVector(table.counts(a, b))


def predicted_n_rho_table(spec: CodeSpec, ctx: FieldCtx) -> np.ndarray:
    """Predicted N[a, b, rho] for every pair, laid out like symbol_count_table."""
    return _LemmaTable(spec, ctx).rows(np.arange(ctx.q))


@dataclass(frozen=True)
class PhiBreakdown:
    """N_rho(a, b) = n/p + phi1 + phi2 + phi3 + phi4."""
    phi1: int
    phi2: int
    phi3: int
    phi4: int
    base: Fraction

    @property
    def total(self) -> Fraction:
        return self.base + self.phi1 + self.phi2 + self.phi3 + self.phi4


def phi_breakdown(spec: CodeSpec, ctx: FieldCtx, a: FieldElement, b: FieldElement, rho: int) -> PhiBreakdown:
    p = spec.p
    if rho % p == 0:
        raise ValueError("rho must be a nonzero residue")
    rho %= p
    c = theorem_constants(spec)
    big, small, tail = c.big, c.small, c.small // p
    info = gamma_info(spec, ctx, a)
    b_res = _b_class(ctx, b)
    a_zero = a.is_zero()

    phi1 = -big if (a_zero and b.is_zero()) else 0
    phi2 = 0
    if a_zero and b_res:
        phi2 = big * (p - 1) if rho == b_res else -big

    phi3 = 0
    if b.is_zero():
        if a_zero or (info.solvable and info.t == 0):
            phi3 = -tail
        elif info.solvable:
            phi3 = -tail - small * eta(p, rho * rho - 4 * info.t)

    phi4 = 0
    if b_res:
        if a_zero or (info.solvable and info.t == 0):
            phi4 = tail * (p - 1) if rho == b_res else -tail
        elif info.solvable:
            phi4 = -tail - small * eta(p, (rho - b_res) ** 2 - 4 * info.t)

    return PhiBreakdown(phi1, phi2, phi3, phi4, Fraction(c.n, p))


def predicted_cwe(spec: CodeSpec, g: int) -> CompleteWeightEnumerator:
    """Every summand of the closed-form CWE polynomial, over the literal index ranges."""
    p = spec.p
    if g % p == 0 or not is_primitive_root(g % p, p):
        raise ValueError(f"g={g} does not generate F_{p}^*")
    g %= p
    c = theorem_constants(spec)
    n, big, small = c.n, c.big, c.small
    half = (p - 1) // 2
    eta_minus_one = eta(p, -1)
    terms = Counter()

    def add(multiplicity, zero_exponent, exponent_of):
        terms[(zero_exponent,) + tuple(exponent_of(rho) for rho in range(1, p))] += multiplicity

    add(1, n, lambda rho: 0)
    for alpha in range(1, p):
        ga = pow(g, alpha, p)
        add(1, 0, lambda rho: n if rho == ga else 0)

    for alpha in range(1, p):
        ga = pow(g, alpha, p)
        add(c.fibre, big, lambda rho: big - small * eta(p, rho * rho - 2 * ga * rho))

    add(c.uniform, n // p, lambda rho: n // p)
    add(c.flat, big + small, lambda rho: big)

    for beta in range(1, half + 1):
        nonsquare = pow(g, 2 * beta + 1, p)
        add(
            c.fibre,
            big + small * eta_minus_one,
            lambda rho: big - small * eta(p, rho * rho - 4 * nonsquare),
        )

    for beta in range(1, half + 1):
        square = pow(g, 2 * beta, p)
        roots = {2 * pow(g, beta, p) % p, (p - 2 * pow(g, beta, p)) % p}
        add(
            c.fibre,
            big - small * eta_minus_one,
            lambda rho: big if rho in roots else big - small * eta(p, rho * rho - 4 * square),
        )

    for alpha in range(1, p):
        ga = pow(g, alpha, p)
        for beta in range(1, half + 1):
            nonsquare = pow(g, 2 * beta + 1, p)
            add(c.fibre, big + small, lambda rho: big - small * eta(p, rho * rho - 2 * ga * rho + nonsquare))

    for beta in range(1, half + 1):
        square = pow(g, 2 * beta, p)
        for alpha in range(1, p):
            if alpha == beta or alpha == half + beta:
                continue
            ga = pow(g, alpha, p)
            add(c.fibre, big - small, lambda rho: big - small * eta(p, rho * rho - 2 * ga * rho + square))

    for alpha in range(1, p):
        ga = pow(g, alpha, p)
        add(c.flat, big, lambda rho: big + small if rho == ga else big)

    return CompleteWeightEnumerator(p, n, {k: v for k, v in sorted(terms.items()) if v != 0})


# -- verification

class CodewordMismatch(BaseModel):
    a: int
    b: int
    predicted: List[int]
    actual: List[int]


class NegativeMultiplicity(BaseModel):
    kind: str
    key: List[int]
    multiplicity: int


class VerificationReport(BaseModel):
    spec: CodeSpec
    n: int
    predicted_n: int
    length_match: bool
    wd_match: bool
    cwe_match: bool
    n_rho_match: bool
    pless: PlessReport
    per_codeword_mismatches: List[CodewordMismatch] = []
    negative_multiplicities: List[NegativeMultiplicity] = []
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.cwe_match and self.n_rho_match and self.pless.passed and not self.negative_multiplicities


def run_verification(
    spec: CodeSpec,
    modulus=None,
    jobs: int = 1,
) -> Tuple[VerificationReport, CompleteWeightEnumerator]:
    """Brute force and prediction side by side; returns the report and the brute-force CWE."""
    start = time.perf_counter()
    ctx = make_field(spec, modulus)
    ds = build_defining_set(ctx, spec.l)
    lemmas = _LemmaTable(spec, ctx)

    mismatches: List[CodewordMismatch] = []
    terms = Counter()
    for a_indices, actual in iter_symbol_counts(ds, jobs):
        predicted = lemmas.rows(a_indices)
        rows, counts = np.unique(actual.reshape(-1, ctx.p), axis=0, return_counts=True)
        terms.update({tuple(int(v) for v in row): int(k) for row, k in zip(rows, counts)})
        for i, b in zip(*np.nonzero((predicted != actual).any(axis=2))):
            mismatches.append(
                CodewordMismatch(
                    a=int(a_indices[i]),
                    b=int(b),
                    predicted=[int(v) for v in predicted[i, b]],
                    actual=[int(v) for v in actual[i, b]],
                )
            )
    mismatches.sort(key=lambda m: (m.a, m.b))
    actual_cwe = CompleteWeightEnumerator(ctx.p, ds.n, dict(sorted(terms.items())))
    actual_wd = weight_distribution(actual_cwe, ds.n)

    predicted_n = predicted_length(spec)
    predicted_wd = predicted_weight_distribution(spec)
    predicted = predicted_cwe(spec, primitive_root(spec.p))

    negatives = [
        NegativeMultiplicity(kind="weight", key=[w], multiplicity=a)
        for w, a in predicted_wd.counts.items()
        if a < 0
    ] + [
        NegativeMultiplicity(kind="composition", key=list(k), multiplicity=v)
        for k, v in predicted.terms.items()
        if v < 0
    ]

    length_match = predicted_n == ds.n
    wd_match = length_match and predicted_wd.counts == actual_wd.counts
    cwe_match = wd_match and predicted.terms == actual_cwe.terms

    report = VerificationReport(
        spec=spec,
        n=ds.n,
        predicted_n=predicted_n,
        length_match=length_match,
        wd_match=wd_match,
        cwe_match=cwe_match,
        n_rho_match=not mismatches,
        pless=pless_checks(actual_wd, spec),
        per_codeword_mismatches=mismatches,
        negative_multiplicities=negatives,
        elapsed=time.perf_counter() - start,
    )
    if not report.passed:
        logger.warning(
            f"Prediction differs from brute force for (p, e, l)=({spec.p}, {spec.e}, {spec.l}): "
            f"length={length_match}, wd={wd_match}, cwe={cwe_match}, "
            f"{len(mismatches)} codeword mismatches, {len(negatives)} negative multiplicities"
        )
    return report, actual_cwe


def verify(spec: CodeSpec, modulus=None, jobs: int = 1) -> VerificationReport:
    return run_verification(spec, modulus, jobs)[0]
