"""Command-line front end.

Verbs:
    decompose    factor a generator and print (W, Y, Z, prefactor) + residuals
    verify       run a chosen set of consistency checks and report pass/fail
    reconstruct  reassemble a transfer matrix from an emitted factorization
    catalog      list the named operators and their parameter keys

Wire format: every complex scalar is a two-element array [re, im]; matrices
are row-major nested arrays of such pairs (plain numbers are accepted on
input for real entries).  Input files are one JSON document holding either
{"catalog": name, "params": {...}}, raw blocks {"D1": ..., "F": ..., "D2": ...},
or transfer-matrix blocks {"T11": ..., "T12": ..., "T21": ..., "T22": ...}.

Exit codes: 0 pass, 1 input error, 2 decomposition-domain error (singular
T22 or a branch-cut eigenvalue), 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import catalog as _catalog
from .core import (
    AsymmetryError,
    Factorization,
    QuadraticGenerator,
    TransferMatrix,
    assemble_generator,
    block_relation_residual,
    gauss_decompose,
    reconstruct,
    reconstruction_residual,
    symplectic_residual,
    transfer_matrix,
)
from .gaussian import apply_factorization, evolve_generator, state_distance, vacuum
from .linalg import BranchCut, ShapeError, SingularMatrix, maxabs
from .ode_checks import v_ode_check
from .one_mode import ZeroT22

__all__ = ["Tolerances", "JobSpec", "main", "entry"]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3

CHECK_ORDER = ("symplectic", "block_relation", "reconstruct", "oracle", "appendix")

#: environment variable overriding the default residual tolerance
TOL_ENV_VAR = "EQO_DEFAULT_TOL"


class _InputError(ValueError):
    """Malformed command line or input document."""


@dataclass(frozen=True)
class Tolerances:
    """Per-check pass thresholds.

    ``residual`` covers the symplectic and block-relation checks and defaults
    to 1e-10 (overridable with the EQO_DEFAULT_TOL environment variable);
    the remaining thresholds track the accuracy each check can promise.
    """

    residual: float = 1e-10
    reconstruct: float = 1e-9
    oracle: float = 1e-6
    prefactor: float = 1e-7

    @classmethod
    def from_env(cls) -> "Tolerances":
        raw = os.environ.get(TOL_ENV_VAR)
        if raw is None:
            return cls()
        try:
            return cls(residual=float(raw))
        except ValueError as exc:
            raise _InputError(f"{TOL_ENV_VAR} must be a float, got {raw!r}") from exc

    def override_all(self, tol: float) -> "Tolerances":
        return Tolerances(residual=tol, reconstruct=tol, oracle=tol, prefactor=tol)

    def for_check(self, name: str) -> float:
        if name in ("symplectic", "block_relation"):
            return self.residual
        if name == "reconstruct":
            return self.reconstruct
        if name == "oracle":
            return self.oracle
        return self.prefactor


@dataclass(frozen=True)
class JobSpec:
    """One resolved command: exactly one source plus options."""

    catalog_name: str | None = None
    params: dict | None = None
    generator: QuadraticGenerator | None = None
    transfer: TransferMatrix | None = None
    checks: tuple = ()
    tolerances: Tolerances = Tolerances()
    output_format: str = "text"
    steps: int = 4000


# ---------------------------------------------------------------------------
# wire format
# ---------------------------------------------------------------------------

def encode_complex(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def encode_matrix(m: np.ndarray) -> list:
    m = np.asarray(m)
    return [[encode_complex(m[i, j]) for j in range(m.shape[1])] for i in range(m.shape[0])]


def _decode_entry(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if (isinstance(v, (list, tuple)) and len(v) == 2
            and all(isinstance(x, (int, float)) for x in v)):
        return complex(v[0], v[1])
    raise _InputError(f"{where}: expected a number or [re, im] pair, got {v!r}")


def decode_matrix(obj, name: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise _InputError(f"field {name!r} must be a non-empty nested array (row-major matrix)")
    width = len(obj[0])
    rows = []
    for i, row in enumerate(obj):
        if len(row) != width:
            raise _InputError(f"field {name!r} row {i} has length {len(row)}, expected {width}")
        rows.append([_decode_entry(v, f"{name}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows, dtype=complex)


# ---------------------------------------------------------------------------
# source resolution
# ---------------------------------------------------------------------------

def _parse_params(pairs) -> dict:
    out = {}
    for p in pairs or ():
        if "=" not in p:
            raise _InputError(f"--param expects K=V, got {p!r}")
        key, _, raw = p.partition("=")
        key = key.strip()
        if not key:
            raise _InputError(f"--param has empty key in {p!r}")
        try:
            out[key] = float(raw)
        except ValueError as exc:
            raise _InputError(f"parameter {key!r} must be a float, got {raw!r}") from exc
    return out


def _load_input_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise _InputError(f"cannot read input file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _InputError(f"input file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise _InputError(f"input file {path} must hold a JSON object")
    return doc


def _spec_from_args(args) -> JobSpec:
    sources = 0
    name = None
    params = None
    gen = None
    transfer = None
    if getattr(args, "catalog", None):
        sources += 1
        name = args.catalog
        params = _parse_params(getattr(args, "param", None))
        try:
            gen = _catalog.build_catalog_operator(name, params).generator
        except KeyError as exc:
            raise _InputError(exc.args[0]) from exc
        except ValueError as exc:
            raise _InputError(str(exc)) from exc
    if getattr(args, "input", None):
        sources += 1
        doc = _load_input_file(args.input)
        keys = set(doc)
        try:
            if {"catalog", "params"} <= keys:
                name = doc["catalog"]
                params = dict(doc["params"])
                gen = _catalog.build_catalog_operator(name, params).generator
            elif {"D1", "F", "D2"} <= keys:
                gen = assemble_generator(
                    decode_matrix(doc["D1"], "D1"),
                    decode_matrix(doc["F"], "F"),
                    decode_matrix(doc["D2"], "D2"),
                )
            elif {"T11", "T12", "T21", "T22"} <= keys:
                blocks = [decode_matrix(doc[k], k) for k in ("T11", "T12", "T21", "T22")]
                n = blocks[0].shape[0]
                transfer = TransferMatrix(n, *blocks)
            else:
                raise _InputError(
                    "input document must contain catalog+params, D1/F/D2, or T11/T12/T21/T22"
                )
        except KeyError as exc:
            raise _InputError(str(exc.args[0])) from exc
        except (ValueError, ShapeError, AsymmetryError) as exc:
            raise _InputError(str(exc)) from exc
    if sources != 1:
        raise _InputError("exactly one source required: --catalog NAME or --input FILE")

    checks = ()
    if hasattr(args, "checks"):
        raw = args.checks or "all"
        if raw == "all":
            checks = CHECK_ORDER
        else:
            wanted = [c.strip() for c in raw.split(",") if c.strip()]
            bad = [c for c in wanted if c not in CHECK_ORDER]
            if bad:
                raise _InputError(
                    f"unknown checks {bad}; valid: {', '.join(CHECK_ORDER)} or 'all'"
                )
            checks = tuple(c for c in CHECK_ORDER if c in wanted)

    tolerances = Tolerances.from_env()
    if getattr(args, "tol", None) is not None:
        if args.tol <= 0:
            raise _InputError(f"--tol must be positive, got {args.tol}")
        tolerances = tolerances.override_all(args.tol)
    steps = int(getattr(args, "steps", 4000) or 4000)
    if steps < 1:
        raise _InputError(f"--steps must be positive, got {steps}")
    return JobSpec(
        catalog_name=name,
        params=params,
        generator=gen,
        transfer=transfer,
        checks=checks,
        tolerances=tolerances,
        output_format=getattr(args, "format", "text") or "text",
        steps=steps,
    )


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _emit(doc: dict, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
    else:
        for line in text_lines:
            print(line)


def _check_table(results) -> list:
    lines = ["check            residual      tolerance     verdict",
             "-" * 52]
    for r in results:
        lines.append(
            f"{r['name']:<16} {r['residual']:>12.2e} {r['tolerance']:>12.2e}"
            f"  {'pass' if r['passed'] else 'FAIL'}"
        )
    return lines


def _factorization_doc(f: Factorization, residuals: dict) -> dict:
    return {
        "n": f.n,
        "W": encode_matrix(f.W),
        "Y": encode_matrix(f.Y),
        "Z": encode_matrix(f.Z),
        "prefactor": encode_complex(f.prefactor),
        "residuals": residuals,
    }


def _matrix_lines(name: str, m: np.ndarray) -> list:
    lines = [f"{name} ="]
    for row in np.asarray(m):
        lines.append("    " + "  ".join(f"{z.real:+.12e}{z.imag:+.12e}j" for z in row))
    return lines


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _resolve_transfer(spec: JobSpec) -> TransferMatrix:
    if spec.transfer is not None:
        return spec.transfer
    return transfer_matrix(spec.generator)


def cmd_decompose(spec: JobSpec) -> int:
    t = _resolve_transfer(spec)
    f = gauss_decompose(t)
    residuals = {
        "symplectic": symplectic_residual(t),
        "block_relation": block_relation_residual(t),
        "reconstruct": reconstruction_residual(t, f),
    }
    doc = _factorization_doc(f, residuals)
    lines = []
    for nm, m in (("W", f.W), ("Y", f.Y), ("Z", f.Z)):
        lines.extend(_matrix_lines(nm, m))
    lines.append(f"prefactor = {f.prefactor.real:+.12e}{f.prefactor.imag:+.12e}j")
    lines.append("residuals: " + "  ".join(f"{k}={v:.2e}" for k, v in residuals.items()))
    _emit(doc, spec.output_format, lines)
    return EXIT_OK


def cmd_verify(spec: JobSpec) -> int:
    results = []
    for name in spec.checks:
        if name in ("oracle", "appendix") and spec.generator is None:
            raise _InputError(f"check {name!r} needs a generator source, not raw T blocks")
        tol = spec.tolerances.for_check(name)
        if name == "symplectic":
            residual = symplectic_residual(_resolve_transfer(spec))
        elif name == "block_relation":
            residual = block_relation_residual(_resolve_transfer(spec))
        elif name == "reconstruct":
            t = _resolve_transfer(spec)
            residual = reconstruction_residual(t, gauss_decompose(t))
        elif name == "oracle":
            g = spec.generator
            start = vacuum(g.n)
            factored = apply_factorization(gauss_decompose(transfer_matrix(g)), start)
            flowed = evolve_generator(g, start, spec.steps)
            residual = state_distance(factored, flowed)
        else:  # appendix: prefactor against the integrated matrix element
            g = spec.generator
            v = v_ode_check(g, spec.steps)
            f = gauss_decompose(transfer_matrix(g))
            residual = abs(v.v_final - f.prefactor)
        results.append(
            {"name": name, "residual": float(residual), "tolerance": float(tol),
             "passed": bool(residual < tol)}
        )
    passed = all(r["passed"] for r in results)
    doc = {"checks": results, "passed": passed}
    lines = _check_table(results)
    lines.append(f"overall: {'pass' if passed else 'FAIL'}")
    _emit(doc, spec.output_format, lines)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_reconstruct(args) -> int:
    doc = _load_input_file(args.input)
    needed = {"W", "Y", "Z"}
    if not needed <= set(doc):
        raise _InputError("reconstruct input must contain W, Y and Z matrices")
    w = decode_matrix(doc["W"], "W")
    y = decode_matrix(doc["Y"], "Y")
    z = decode_matrix(doc["Z"], "Z")
    if "prefactor" in doc:
        prefactor = _decode_entry(doc["prefactor"], "prefactor")
    else:
        prefactor = complex(np.exp(0.5 * np.trace(y)))
    try:
        f = Factorization(w.shape[0], w, y, z, prefactor)
    except (ShapeError, ValueError) as exc:
        raise _InputError(str(exc)) from exc
    t = reconstruct(f)
    residual = symplectic_residual(t)
    out = {
        "n": t.n,
        "T11": encode_matrix(t.T11),
        "T12": encode_matrix(t.T12),
        "T21": encode_matrix(t.T21),
        "T22": encode_matrix(t.T22),
        "residual_symplectic": residual,
    }
    lines = []
    for nm in ("T11", "T12", "T21", "T22"):
        lines.extend(_matrix_lines(nm, getattr(t, nm)))
    lines.append(f"symplectic residual = {residual:.2e}")
    _emit(out, args.format or "text", lines)
    return EXIT_OK


def cmd_catalog(args) -> int:
    entries = [{"name": nm, "params": list(keys)} for nm, keys in _catalog.CATALOG.items()]
    doc = {"operators": entries}
    lines = [f"{e['name']}({', '.join(e['params'])})" for e in entries]
    _emit(doc, args.format or "text", lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that
        raise _InputError(message)


def _add_source_opts(p):
    p.add_argument("--catalog", help="catalog operator name (see 'eqo catalog list')")
    p.add_argument("--param", action="append", metavar="K=V",
                   help="catalog parameter, repeatable")
    p.add_argument("--input", help="JSON input file (generator blocks, catalog job, or T blocks)")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--tol", type=float, help="override every check tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eqo", description="Reorder exponential quadratic operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="factor a generator")
    _add_source_opts(p_dec)

    p_ver = sub.add_parser("verify", help="run consistency checks")
    _add_source_opts(p_ver)
    p_ver.add_argument("--checks", default="all",
                       help="comma-separated subset of "
                            f"{','.join(CHECK_ORDER)}, or 'all'")
    p_ver.add_argument("--steps", type=int, default=4000,
                       help="integration steps for the oracle / prefactor checks")

    p_rec = sub.add_parser("reconstruct", help="reassemble T from a factorization")
    p_rec.add_argument("--input", required=True, help="JSON file with W, Y, Z (and prefactor)")
    p_rec.add_argument("--format", choices=("json", "text"), default="text")

    p_cat = sub.add_parser("catalog", help="catalog inspection")
    cat_sub = p_cat.add_subparsers(dest="subcommand", required=True)
    p_list = cat_sub.add_parser("list", help="list named operators")
    p_list.add_argument("--format", choices=("json", "text"), default="text")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "decompose":
            return cmd_decompose(_spec_from_args(args))
        if args.command == "verify":
            return cmd_verify(_spec_from_args(args))
        if args.command == "reconstruct":
            return cmd_reconstruct(args)
        return cmd_catalog(args)
    except _InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SingularMatrix, BranchCut, ZeroT22) as exc:
        print(f"decomposition error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
