"""Command-line front end.

Subcommands: check, cohomology, derivations, deform, extend, classical.
Reports go to stdout and are byte-identical across runs for identical
inputs and flags; wall-clock timing goes to stderr so it never perturbs
the report.  Exit codes: 0 success, 1 usage or parse error, 2 a
mathematical counterexample (the inputs fail the property under test),
3 internal inconsistency (a broken identity that can only be a bug).

The JSON report always carries the keys command, inputs, truncation,
results, residuals and version; truncation fields are null for commands
that do not truncate.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from typing import Optional, Sequence

from . import __version__
from .cfmodule import BimoduleStructure, check_module_axioms
from .classical import (
    center_dimension,
    derivation_space_dimension,
    hochschild_dimension,
    inner_derivation_space_dimension,
    is_associative,
    regular_bimodule,
)
from .cohomology import (
    Cochain,
    CochainIndex,
    ComplexInconsistencyError,
    TruncationOverflowError,
    TruncationWindow,
    cohomology_dimensions,
    derivation_basis,
    inner_derivation_basis,
)
from .conformal import check_associativity
from .constructions import (
    AbelianExtensionDatum,
    DeformationDatum,
    ExtensionDatum,
    build_extension,
    deformation_residuals,
    extension_residuals,
)
from .exactla import ContainmentError
from .formats import (
    DefinitionError,
    parse_algebra,
    parse_cochain,
    parse_fd_algebra,
    parse_gamma,
    parse_module,
)
from .polyring import PolyParseError, poly_to_str

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_INTERNAL = 3

DEFAULT_MAX_ROUNDS = 4

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["command", "inputs", "truncation", "results", "residuals", "version"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": False,
                "required": ["path", "sha256"],
                "properties": {
                    "path": {"type": "string"},
                    "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                },
            },
        },
        "truncation": {
            "type": "object",
            "additionalProperties": False,
            "required": ["deg", "margin", "stabilized"],
            "properties": {
                "deg": {"type": ["integer", "null"]},
                "margin": {"type": ["integer", "null"]},
                "stabilized": {"type": ["boolean", "null"]},
            },
        },
        "results": {
            "type": "object",
            "additionalProperties": {
                "type": ["integer", "string", "boolean", "array", "null"],
                "items": {"type": "string"},
            },
        },
        "residuals": {"type": "array", "items": {"type": "string"}},
        "version": {"type": "string"},
    },
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's default 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pseudo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, module=False, modules=False, cocycle=False,
            n=None, deg=None, margin=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("algebra", help="definition file")
        if module:
            p.add_argument("--module", help="module definition file (default: regular)")
        if modules:
            p.add_argument(
                "--module",
                action="append",
                default=None,
                help="module file; give twice for sub then quotient (default: regular)",
            )
        if cocycle:
            p.add_argument("--cocycle", required=True, help="cochain definition file")
        if n is not None:
            p.add_argument("--n", type=int, default=n, help=f"degree (default {n})")
        if deg is not None:
            p.add_argument(
                "--deg", type=int, default=deg, help=f"truncation degree (default {deg})"
            )
        if margin:
            p.add_argument(
                "--margin", type=int, default=1, help="stabilization step (default 1)"
            )
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        return p

    add("check", "verify associativity and module axioms", module=True)
    add("cohomology", "truncated cohomology slice dimensions",
        module=True, n=1, deg=2, margin=True)
    add("derivations", "derivation and inner-derivation bases", module=True, deg=2)
    add("deform", "first-order deformation verdict", cocycle=True)
    add("extend", "module extension verdict from gluing data",
        modules=True, cocycle=True)
    add("classical", "finite-dimensional bar-complex dimensions", n=1)
    return parser


def _read_input(path: str) -> tuple[str, dict]:
    with open(path, "rb") as fh:
        data = fh.read()
    digest = hashlib.sha256(data).hexdigest()
    return data.decode("utf-8"), {"path": path, "sha256": digest}


def _report(command: str, inputs: dict, results: dict, residuals: list,
            truncation: Optional[dict] = None) -> dict:
    if truncation is None:
        truncation = {"deg": None, "margin": None, "stabilized": None}
    return {
        "command": command,
        "inputs": inputs,
        "truncation": truncation,
        "results": results,
        "residuals": residuals,
        "version": __version__,
    }


def _render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    lines.append("inputs:")
    for name in sorted(report["inputs"]):
        info = report["inputs"][name]
        lines.append(f"  {name}: {info['path']} sha256={info['sha256']}")
    t = report["truncation"]
    if t["deg"] is None:
        lines.append("truncation: none")
    else:
        parts = [f"deg={t['deg']}"]
        if t["margin"] is not None:
            parts.append(f"margin={t['margin']}")
        if t["stabilized"] is not None:
            parts.append("stabilized=" + ("yes" if t["stabilized"] else "no"))
        lines.append("truncation: " + " ".join(parts))
    lines.append("results:")
    for key, value in report["results"].items():
        if isinstance(value, bool):
            value = "PASS" if value else "FAIL"
        if isinstance(value, list):
            if value:
                lines.append(f"  {key}:")
                lines.extend(f"    - {item}" for item in value)
            else:
                lines.append(f"  {key}: (none)")
        else:
            lines.append(f"  {key}: {value}")
    if report["residuals"]:
        lines.append("residuals:")
        for item in report["residuals"]:
            lines.append(f"  - {item}")
    else:
        lines.append("residuals: none")
    lines.append(f"version: {report['version']}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, as_json: bool):
    if as_json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(_render_text(report))


def _max_rounds() -> int:
    raw = os.environ.get("PSEUDO_MAX_MARGIN")
    if raw is None:
        return DEFAULT_MAX_ROUNDS
    try:
        value = int(raw)
    except ValueError:
        raise _UsageError(f"PSEUDO_MAX_MARGIN must be an integer, got {raw!r}") from None
    if value < 1:
        raise _UsageError("PSEUDO_MAX_MARGIN must be at least 1")
    return value


def _load_algebra(path: str):
    text, info = _read_input(path)
    return parse_algebra(text), info


def _load_module(path, algebra) -> tuple[BimoduleStructure, Optional[dict], str]:
    if path is None:
        return BimoduleStructure.regular(algebra), None, "(regular)"
    text, info = _read_input(path)
    return parse_module(text, algebra), info, path


def _tuple_names(algebra, indices) -> str:
    return "(" + ", ".join(algebra.generators[i] for i in indices) + ")"


def _module_triple_names(module, law: str, triple) -> str:
    alg = module.algebra.generators
    mod = module.generators
    order = {
        "left": (alg, alg, mod),
        "right": (mod, alg, alg),
        "compat": (alg, mod, alg),
    }[law]
    return "(" + ", ".join(seq[idx] for seq, idx in zip(order, triple)) + ")"


def _render_cochain(cochain: Cochain) -> str:
    """Canonical one-line form: 'a b -> P * m; ...' over sorted tuples."""
    module = cochain.module
    algebra = cochain.algebra
    parts = []
    for key in sorted(cochain.values):
        vec = cochain.values[key]
        names = " ".join(algebra.generators[i] for i in key)
        for k, poly in enumerate(vec):
            if poly.is_zero:
                continue
            prefix = f"{names} -> " if names else "-> "
            parts.append(f"{prefix}{poly_to_str(poly)} * {module.generators[k]}")
    return "; ".join(parts) if parts else "0"


def _axiom_precheck(algebra, module, inputs, command, as_json) -> Optional[int]:
    """Shared abort path: report the first broken axiom and exit 2."""
    cex = check_associativity(algebra)
    if cex is not None:
        residuals = [
            f"associativity {_tuple_names(algebra, cex.triple)}"
            f"[{algebra.generators[s]}]: {poly_to_str(poly)}"
            for s, poly in enumerate(cex.residual)
            if not poly.is_zero
        ]
        report = _report(command, inputs,
                         {"precheck": "associativity failed",
                          "triple": _tuple_names(algebra, cex.triple)},
                         residuals)
        _emit(report, as_json)
        return EXIT_COUNTEREXAMPLE
    if module is not None:
        mex = check_module_axioms(module)
        if mex is not None:
            residuals = [
                f"{mex.law} {_module_triple_names(module, mex.law, mex.triple)}"
                f"[{module.generators[s]}]: {poly_to_str(poly)}"
                for s, poly in enumerate(mex.residual)
                if not poly.is_zero
            ]
            report = _report(command, inputs,
                             {"precheck": f"module {mex.law} law failed",
                              "triple": _module_triple_names(module, mex.law, mex.triple)},
                             residuals)
            _emit(report, as_json)
            return EXIT_COUNTEREXAMPLE
    return None


def _cmd_check(args) -> int:
    algebra, alg_info = _load_algebra(args.algebra)
    inputs = {"algebra": alg_info}
    module = None
    if args.module is not None:
        text, info = _read_input(args.module)
        module = parse_module(text, algebra)
        inputs["module"] = info
    results: dict = {}
    residuals: list[str] = []
    code = EXIT_OK
    cex = check_associativity(algebra)
    if cex is None:
        results["associativity"] = True
    else:
        results["associativity"] = False
        results["associativity_counterexample"] = _tuple_names(algebra, cex.triple)
        residuals.extend(
            f"associativity {_tuple_names(algebra, cex.triple)}"
            f"[{algebra.generators[s]}]: {poly_to_str(poly)}"
            for s, poly in enumerate(cex.residual)
            if not poly.is_zero
        )
        code = EXIT_COUNTEREXAMPLE
    if module is not None:
        mex = check_module_axioms(module)
        if mex is None:
            results["module_axioms"] = True
        else:
            results["module_axioms"] = False
            results["module_counterexample"] = (
                f"{mex.law} {_module_triple_names(module, mex.law, mex.triple)}"
            )
            residuals.extend(
                f"{mex.law} {_module_triple_names(module, mex.law, mex.triple)}"
                f"[{module.generators[s]}]: {poly_to_str(poly)}"
                for s, poly in enumerate(mex.residual)
                if not poly.is_zero
            )
            code = EXIT_COUNTEREXAMPLE
    _emit(_report("check", inputs, results, residuals), args.json)
    return code


def _cmd_cohomology(args) -> int:
    if args.n < 0 or args.deg < 0 or args.margin < 1:
        raise _UsageError("need --n >= 0, --deg >= 0, --margin >= 1")
    algebra, alg_info = _load_algebra(args.algebra)
    module, mod_info, _ = _load_module(args.module, algebra)
    inputs = {"algebra": alg_info}
    if mod_info is not None:
        inputs["module"] = mod_info
    aborted = _axiom_precheck(algebra, module, inputs, "cohomology", args.json)
    if aborted is not None:
        return aborted
    window = TruncationWindow(args.deg, args.margin)
    rep = cohomology_dimensions(algebra, module, args.n, window,
                                max_rounds=_max_rounds())
    report = _report(
        "cohomology",
        inputs,
        {
            "degree": rep.degree,
            "dim_cocycles_slice": rep.dim_cocycles,
            "dim_coboundaries_slice": rep.dim_coboundaries,
            "dim_cohomology_slice": rep.dim_cohomology,
            "stabilization_rounds": rep.rounds,
        },
        [],
        truncation={
            "deg": rep.degree_bound,
            "margin": rep.stabilization_margin,
            "stabilized": rep.stabilized,
        },
    )
    _emit(report, args.json)
    return EXIT_OK


def _cmd_derivations(args) -> int:
    if args.deg < 0:
        raise _UsageError("need --deg >= 0")
    algebra, alg_info = _load_algebra(args.algebra)
    module, mod_info, _ = _load_module(args.module, algebra)
    inputs = {"algebra": alg_info}
    if mod_info is not None:
        inputs["module"] = mod_info
    aborted = _axiom_precheck(algebra, module, inputs, "derivations", args.json)
    if aborted is not None:
        return aborted
    der = derivation_basis(algebra, module, args.deg)
    inner = inner_derivation_basis(algebra, module, args.deg)
    index = CochainIndex(algebra, module, 1, args.deg)
    der_lines = [_render_cochain(index.reconstruct(vec)) for vec in der.vectors]
    inner_lines = [_render_cochain(index.reconstruct(vec)) for vec in inner.vectors]
    report = _report(
        "derivations",
        inputs,
        {
            "dim_derivations_slice": der.dim,
            "dim_inner_derivations_slice": inner.dim,
            "derivation_basis": der_lines,
            "inner_derivation_basis": inner_lines,
        },
        [],
        truncation={"deg": args.deg, "margin": None, "stabilized": None},
    )
    _emit(report, args.json)
    return EXIT_OK


def _cmd_deform(args) -> int:
    algebra, alg_info = _load_algebra(args.algebra)
    cocycle_text, coc_info = _read_input(args.cocycle)
    inputs = {"algebra": alg_info, "cocycle": coc_info}
    aborted = _axiom_precheck(algebra, None, inputs, "deform", args.json)
    if aborted is not None:
        return aborted
    module = BimoduleStructure.regular(algebra)
    cochain = parse_cochain(cocycle_text, algebra, module)
    if cochain.degree != 2:
        raise DefinitionError("deformation data must be a degree-2 cochain", 1)
    datum = DeformationDatum(algebra, cochain)
    residual_map = deformation_residuals(datum)
    flat = not residual_map
    from .cohomology import apply_dn

    if flat != apply_dn(cochain).is_zero():
        raise ComplexInconsistencyError(
            "deformation residuals disagree with the cochain differential"
        )
    residuals = [
        f"{_tuple_names(algebra, key[:3])}[{algebra.generators[key[3]]}]: "
        f"{poly_to_str(poly)}"
        for key, poly in sorted(residual_map.items())
    ]
    report = _report(
        "deform",
        inputs,
        {"first_order_associative": flat},
        residuals,
    )
    _emit(report, args.json)
    return EXIT_OK if flat else EXIT_COUNTEREXAMPLE


def _cmd_extend(args) -> int:
    algebra, alg_info = _load_algebra(args.algebra)
    inputs = {"algebra": alg_info}
    paths = args.module or []
    if len(paths) > 2:
        raise _UsageError("extend takes at most two --module files")
    if not paths:
        sub = quotient = BimoduleStructure.regular(algebra)
    elif len(paths) == 1:
        text, info = _read_input(paths[0])
        sub = quotient = parse_module(text, algebra)
        inputs["module"] = info
    else:
        text, info = _read_input(paths[0])
        sub = parse_module(text, algebra)
        inputs["sub_module"] = info
        text, info = _read_input(paths[1])
        quotient = parse_module(text, algebra)
        inputs["quotient_module"] = info
    cocycle_text, coc_info = _read_input(args.cocycle)
    inputs["cocycle"] = coc_info
    aborted = _axiom_precheck(algebra, None, inputs, "extend", args.json)
    if aborted is not None:
        return aborted
    gamma = parse_gamma(cocycle_text, algebra, sub, quotient)
    datum = ExtensionDatum(algebra, sub, quotient, gamma)
    extension, passed = build_extension(datum)
    residual_map = extension_residuals(datum)
    residuals = [
        f"({algebra.generators[i]}, {algebra.generators[j]}, "
        f"{quotient.generators[t]})[{sub.generators[s]}]: {poly_to_str(poly)}"
        for (i, j, t, s), poly in sorted(residual_map.items())
    ]
    report = _report(
        "extend",
        inputs,
        {
            "left_module_law": passed,
            "extension_generators": " ".join(extension.generators),
        },
        residuals,
    )
    _emit(report, args.json)
    return EXIT_OK if passed else EXIT_COUNTEREXAMPLE


def _cmd_classical(args) -> int:
    if args.n < 0:
        raise _UsageError("need --n >= 0")
    text, info = _read_input(args.algebra)
    algebra = parse_fd_algebra(text)
    inputs = {"algebra": info}
    if not is_associative(algebra):
        report = _report("classical", inputs,
                         {"precheck": "structure constants not associative"}, [])
        _emit(report, args.json)
        return EXIT_COUNTEREXAMPLE
    module = regular_bimodule(algebra)
    dim = hochschild_dimension(algebra, module, args.n)
    results = {
        "degree": args.n,
        "dim_cohomology": dim,
        "dim_center": center_dimension(algebra),
        "dim_derivations": derivation_space_dimension(algebra),
        "dim_inner_derivations": inner_derivation_space_dimension(algebra),
    }
    _emit(_report("classical", inputs, results, []), args.json)
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "cohomology": _cmd_cohomology,
    "derivations": _cmd_derivations,
    "deform": _cmd_deform,
    "extend": _cmd_extend,
    "classical": _cmd_classical,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    started = time.perf_counter()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        code = _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DefinitionError, PolyParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ComplexInconsistencyError, TruncationOverflowError, ContainmentError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        elapsed = time.perf_counter() - started
        print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
