"""Text, JSON and CSV rendering of processor results.

JSON and CSV are byte-stable: keys and rows come out in a fixed order and
timing is left out unless explicitly requested.
"""
import csv
import io
import json
from typing import List, Union

from utils.cyclotomic import CycInt
from utils.finite_field import format_modulus
from utils.processor import CodeResult, SweepResult, WeilSumResult

Result = Union[CodeResult, WeilSumResult, SweepResult]

CELL_EXCLUDE = {"elapsed": True, "verification": {"elapsed": True}}


def _status(cell: CodeResult) -> str:
    if cell.skipped:
        return "skipped"
    if not cell.success:
        return "error"
    if cell.verification is None:
        return "ok"
    return "pass" if cell.verification.passed else "FAIL"


def _polynomial(cell: CodeResult) -> str:
    terms = []
    for row in cell.weights:
        if row.weight == 0:
            terms.append(str(row.multiplicity))
        else:
            terms.append(f"{row.multiplicity}z^{row.weight}")
    return " + ".join(terms)


def _monomial(composition: List[int]) -> str:
    factors = [f"w{rho}^{t}" for rho, t in enumerate(composition) if t]
    return " ".join(factors) if factors else "1"


def _cyc(p: int, coeffs: List[int]) -> str:
    return str(CycInt(p, tuple(coeffs)))


# -- text

def _code_text(cell: CodeResult) -> List[str]:
    lines = [f"C_D over F_{cell.p}^{cell.e}, l={cell.l} (modulus {format_modulus(cell.modulus)})"]
    lines.append(f"  [n, k, d] = [{cell.n}, {cell.k}, {cell.d}]")
    lines.append(f"  weight enumerator: {_polynomial(cell)}")
    lines.append(f"  nonzero weights: {cell.weight_count}")
    lines.append(f"  complete weight enumerator ({len(cell.cwe)} terms):")
    for term in cell.cwe:
        lines.append(f"    {term.multiplicity} * {_monomial(term.composition)}")
    g = cell.griesmer
    lines.append(f"  Griesmer: bound {g.bound} for length {g.n}, {g.classification}")

    report = cell.verification
    if report is not None:
        lines.append(f"  verification: {'PASS' if report.passed else 'FAIL'}")
        lines.append(f"    length: {'match' if report.length_match else 'MISMATCH'} "
                     f"(predicted {report.predicted_n}, actual {report.n})")
        lines.append(f"    weight distribution: {'match' if report.wd_match else 'MISMATCH'}")
        lines.append(f"    complete weight enumerator: {'match' if report.cwe_match else 'MISMATCH'}")
        lines.append(f"    per-codeword N_rho: {'match' if report.n_rho_match else 'MISMATCH'}")
        held = sum(c.passed for c in report.pless.checks)
        lines.append(f"    Pless moments: {held}/{len(report.pless.checks)} hold")
        for neg in report.negative_multiplicities:
            lines.append(f"    negative {neg.kind} multiplicity {neg.multiplicity} at {neg.key}")
        for m in report.per_codeword_mismatches:
            lines.append(f"    (a={m.a}, b={m.b}): predicted {m.predicted}, actual {m.actual}")
    lines.append(f"  elapsed: {cell.elapsed:.3f}s")
    return lines


def _weil_text(result: WeilSumResult) -> List[str]:
    lines = [f"S(alpha, beta) over F_{result.p}^{result.e}, l={result.l}"]
    lines.append(f"  alpha: index {result.alpha_index} {tuple(result.alpha_coeffs)}")
    lines.append(f"  beta:  index {result.beta_index} {tuple(result.beta_coeffs)}")
    lines.append(f"  brute force: {_cyc(result.p, result.brute)}  coeffs {result.brute}")
    if result.closed is None:
        lines.append("  closed form: n/a")
    else:
        lines.append(f"  closed form: {_cyc(result.p, result.closed)}  coeffs {result.closed}")
        lines.append(f"  agree: {'yes' if result.match else 'NO'}")
    lines.append(f"  diagnosis: {result.diagnosis}")
    lines.append(f"  elapsed: {result.elapsed:.3f}s")
    return lines


def _sweep_text(result: SweepResult) -> List[str]:
    lines = [f"{'p':>3} {'e':>3} {'l':>4}  {'status':<8} {'[n, k, d]':<18} note"]
    for cell in result.cells:
        params = f"[{cell.n}, {cell.k}, {cell.d}]" if cell.n is not None else "-"
        note = cell.error or (cell.griesmer.classification if cell.griesmer else "")
        lines.append(f"{cell.p:>3} {cell.e:>3} {cell.l:>4}  {_status(cell):<8} {params:<18} {note}")
    lines.append(
        f"{len(result.passed)} passed, {len(result.failed)} failed, {len(result.skipped)} skipped"
    )
    return lines


def to_text(result: Result) -> str:
    if isinstance(result, CodeResult):
        return "\n".join(_code_text(result)) + "\n"
    if isinstance(result, WeilSumResult):
        return "\n".join(_weil_text(result)) + "\n"
    return "\n".join(_sweep_text(result)) + "\n"


# -- JSON

def to_json(result: Result, timing: bool = False) -> str:
    if isinstance(result, SweepResult):
        exclude = None if timing else {"cells": {"__all__": CELL_EXCLUDE}}
    elif isinstance(result, CodeResult):
        exclude = None if timing else CELL_EXCLUDE
    else:
        exclude = None if timing else {"elapsed"}
    return json.dumps(result.model_dump(mode="json", exclude=exclude), indent=2) + "\n"


# -- CSV

def to_csv(result: Result, timing: bool = False) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if isinstance(result, CodeResult):
        writer.writerow(["weight", "multiplicity"])
        for row in result.weights:
            writer.writerow([row.weight, row.multiplicity])
        elapsed = result.elapsed
    elif isinstance(result, WeilSumResult):
        writer.writerow(["p", "e", "l", "alpha_index", "beta_index", "brute", "closed", "match"])
        closed = " ".join(map(str, result.closed)) if result.closed is not None else "n/a"
        match = "" if result.match is None else int(result.match)
        writer.writerow([
            result.p, result.e, result.l, result.alpha_index, result.beta_index,
            " ".join(map(str, result.brute)), closed, match,
        ])
        elapsed = result.elapsed
    else:
        writer.writerow(["p", "e", "l", "status", "n", "k", "d"])
        for cell in result.cells:
            writer.writerow([cell.p, cell.e, cell.l, _status(cell), cell.n or "", cell.k or "", cell.d or ""])
        elapsed = sum(cell.elapsed for cell in result.cells)
    if timing:
        buffer.write(f"# elapsed,{elapsed:.3f}\n")
    return buffer.getvalue()


def render(result: Result, fmt: str = "text", timing: bool = False) -> str:
    if fmt == "json":
        return to_json(result, timing)
    if fmt == "csv":
        return to_csv(result, timing)
    return to_text(result)
