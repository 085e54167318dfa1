"""Command-line front end: named catalogs, dispatch, canonical reports.

Exit codes follow a three-way contract so CI can distinguish outcomes:
0 means every requested check passed, 1 means a mathematical statement
came out false (an axiom failed, two invariants differ), and 2 means the
invocation itself was bad (unknown names, malformed files, bad flags).
"""

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from .braid import parse_word, word_to_string
from .coeffs import AbelianGroup, Character, dumps_canonical
from .cohomology import (
    augmented_system_cocycle,
    check_cocycle2,
    check_system_cocycle,
    compute_H2,
    cochain_from_json,
    d3_psi_cocycle,
    is_coboundary2,
    nosaka_system_cocycle,
    phi_i_cocycle,
    system_cocycle_from_json,
    zero_cochain2,
)
from .hopf import (
    HopfData,
    TsdObjectData,
    build_named,
    check_braid_eq_dense,
    check_categorical_cocycle,
    check_rack_object,
    check_tsd_object,
    frobenius_suite,
    hopf_from_json,
    hopf_to_json,
    lift_set_cocycle,
    quantum_heap,
    validate_hopf,
)
from .quantum import WeightContext, compare_invariants, quantum_invariant
from .statesum import vector_invariant
from .tsd import (
    CompatibleSystem,
    GFamily,
    ResourceLimitError,
    TernaryStructure,
    alexander_gfamily_sl2z3,
    augmented_cyclic_system,
    check_compatible_system,
    check_rack,
    check_tsd,
    compose_binary,
    cyclic_group,
    dihedral_group_d3,
    dihedral_quandle,
    gfamily_check,
    gfamily_to_compatible,
    heap_of_group,
    mutual_shift_pair,
    structure_from_json,
    symmetric_group_s3,
)

SYSTEM_BUDGET = 100_000_000
SMOKE_BUDGET = 1_000_000
DENSE_BUDGET = 300_000


class UsageError(Exception):
    """Bad flags, unknown names, or malformed files; exit code 2."""


class SchemaError(UsageError):
    """A file violated the expected schema; points at the offending field."""

    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__("at %r: %s" % (pointer or "/", message))


class MathFailure(Exception):
    """A checked identity is false; exit code 1 with the payload attached."""

    def __init__(self, payload):
        self.payload = payload
        super().__init__(payload.get("reason", "check failed"))


def _digest(obj):
    return hashlib.sha256(dumps_canonical(obj).encode("utf-8")).hexdigest()


class RunReport:
    """One invocation echoed back with hashed inputs and a result payload.

    Serialization is canonical and deliberately excludes the measured
    timing, so identical inputs and seed give identical bytes; the timing
    is kept on the object for the human-readable printout.
    """

    def __init__(self, command, inputs, result, coverage=None):
        self.command = command
        self.inputs = inputs
        self.result = result
        self.coverage = coverage
        self.timing_ms = None

    def to_json(self):
        out = {"command": self.command, "inputs": self.inputs,
               "result": self.result}
        if self.coverage is not None:
            out["coverage"] = self.coverage
        return out

    def dumps(self):
        return dumps_canonical(self.to_json())

    def __repr__(self):
        return "RunReport(%s)" % self.command.get("subcommand", "?")


class CatalogEntry:
    """A named builder plus the validator its kind promises."""

    def __init__(self, name, kind, build):
        self.name = name
        self.kind = kind
        self.build = build

    def validate(self, budget=SMOKE_BUDGET, seed=0):
        obj = self.build()
        if self.kind == "structure":
            return bool(check_tsd(obj).ok)
        if self.kind == "cocycle":
            return bool(check_cocycle2(obj).ok)
        if self.kind == "gfamily":
            return all(r.ok for r in gfamily_check(obj))
        if self.kind == "system":
            return bool(check_compatible_system(obj, budget=budget,
                                                seed=seed).ok)
        if self.kind == "hopf":
            if isinstance(obj, HopfData):
                return bool(validate_hopf(obj).ok)
            return bool(check_tsd_object(obj).ok)
        raise ValueError("no validator for kind %r" % self.kind)

    def __repr__(self):
        return "CatalogEntry(%s, kind=%s)" % (self.name, self.kind)


def _heap_builder(m):
    return lambda: heap_of_group(cyclic_group(m))


def _dihedral_builder(m):
    return lambda: compose_binary(dihedral_quandle(m))


def catalog_entries():
    """The named objects the CLI can build, each with a startup validator."""
    entries = []
    for m in range(2, 13):
        entries.append(CatalogEntry("heap:Z%d" % m, "structure", _heap_builder(m)))
    entries.append(CatalogEntry("heap:D3", "structure",
                                lambda: heap_of_group(dihedral_group_d3())))
    entries.append(CatalogEntry("heap:S3", "structure",
                                lambda: heap_of_group(symmetric_group_s3())))
    for m in (3, 4, 5):
        entries.append(CatalogEntry("dihedral:Z%d" % m, "structure",
                                    _dihedral_builder(m)))
    entries.append(CatalogEntry("alexander-gfamily:SL2Z3", "gfamily",
                                alexander_gfamily_sl2z3))
    for i in range(4):
        entries.append(CatalogEntry(
            "phi:%d" % i, "cocycle",
            lambda i=i: phi_i_cocycle(4, i)))
    entries.append(CatalogEntry("d3psi", "cocycle", d3_psi_cocycle))
    entries.append(CatalogEntry(
        "zero", "cocycle",
        lambda: zero_cochain2(heap_of_group(cyclic_group(2)),
                              AbelianGroup((0,)))))
    entries.append(CatalogEntry("mutual-shift:Z5", "system", mutual_shift_pair))
    entries.append(CatalogEntry(
        "augmented:2-2-3", "system",
        lambda: augmented_cyclic_system(2, 2, 3)))
    entries.append(CatalogEntry(
        "nosaka:SL2Z3", "system",
        lambda: gfamily_to_compatible(alexander_gfamily_sl2z3())[0]))
    for name in ("Z2", "Z3", "Z4", "Z5", "Z6", "D3", "S3"):
        entries.append(CatalogEntry(
            "group-algebra:%s" % name, "hopf",
            lambda name=name: build_named("group-algebra:%s" % name)))
    for name in ("lie:abelian1", "lie:abelian2", "lie:sl2"):
        entries.append(CatalogEntry(name, "hopf",
                                    lambda name=name: build_named(name)))
    names = [e.name for e in entries]
    assert len(names) == len(set(names)), "catalog names must be unique"
    return entries


def _catalog_map():
    return {e.name: e for e in catalog_entries()}


# ---------------------------------------------------------------------------
# Input resolution


def load_structure_file(path):
    """Read a JSON structure file and validate it before returning it."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise SchemaError("", "not valid JSON (%s)" % exc) from exc
    if not isinstance(obj, dict):
        raise SchemaError("", "expected a JSON object")
    if "mu" in obj:
        try:
            return _validated("hopf", hopf_from_json(obj), path)
        except (KeyError, TypeError) as exc:
            raise SchemaError("/mu", "bad Hopf data: %s" % exc) from exc
    if "kind" not in obj:
        raise SchemaError("/kind", "missing field")
    try:
        built = structure_from_json(obj)
    except KeyError as exc:
        raise SchemaError("/%s" % exc.args[0], "missing field") from exc
    except ValueError as exc:
        pointer = "/kind" if "kind" in str(exc) else "/table"
        raise SchemaError(pointer, str(exc)) from exc
    return _validated(_kind_of(built), built, path)


def _kind_of(obj):
    if isinstance(obj, HopfData):
        return "hopf"
    if isinstance(obj, TsdObjectData):
        return "hopf"
    if isinstance(obj, GFamily):
        return "gfamily"
    if isinstance(obj, CompatibleSystem):
        return "system"
    return "structure"


def _validated(kind, obj, name):
    """Run the kind's validator; a failure aborts the load with exit 1."""
    if kind == "structure":
        rep = check_tsd(obj)
        if not rep.ok:
            raise MathFailure({"reason": "structure fails self-distributivity",
                               "name": name, "check": rep.to_json()})
        check_rack(obj)          # fills the left inverse when it exists
    elif kind == "gfamily":
        reports = gfamily_check(obj)
        bad = [r for r in reports if not r.ok]
        if bad:
            raise MathFailure({"reason": "G-family axiom fails",
                               "name": name,
                               "check": bad[0].to_json()})
    elif kind == "hopf":
        if isinstance(obj, HopfData):
            rep = validate_hopf(obj)
            if not rep.ok:
                raise MathFailure({"reason": "Hopf axiom fails", "name": name,
                                   "failing": rep.failing,
                                   "counterexample": _jsonable(rep.counterexample)})
        else:
            rep = check_tsd_object(obj)
            if not rep.ok:
                raise MathFailure({"reason": "ternary object fails %s" % rep.failing,
                                   "name": name,
                                   "counterexample": _jsonable(rep.counterexample)})
    # systems are validated by the system subcommand under its budget flags
    return obj


def resolve_structure(token, inputs, kinds=("structure",)):
    """Catalog name, builder pattern, or file path to a validated object."""
    entry = _catalog_map().get(token)
    if entry is not None and entry.kind in kinds:
        obj = _validated(entry.kind, entry.build(), token)
        inputs["structure"] = {"name": token, "kind": entry.kind,
                               "sha256": _digest(_payload_json(obj))}
        return obj, entry.kind
    built = _pattern_build(token, kinds)
    if built is not None:
        kind, obj = built
        obj = _validated(kind, obj, token)
        inputs["structure"] = {"name": token, "kind": kind,
                               "sha256": _digest(_payload_json(obj))}
        return obj, kind
    if os.path.exists(token):
        obj = load_structure_file(token)
        kind = _kind_of(obj)
        if kind not in kinds:
            raise UsageError("%s holds a %s, expected one of %s"
                             % (token, kind, "/".join(kinds)))
        inputs["structure"] = {"name": os.path.basename(token), "kind": kind,
                               "sha256": _digest(_payload_json(obj))}
        return obj, kind
    raise UsageError("unknown structure %r (not a catalog name, builder, "
                     "or file)" % token)


def _pattern_build(token, kinds):
    """Builder families beyond the finite catalog listing."""
    head, _, tail = token.partition(":")
    if "structure" in kinds and head == "heap" and tail.startswith("Z") \
            and tail[1:].isdigit():
        return "structure", heap_of_group(cyclic_group(int(tail[1:])))
    if "structure" in kinds and head == "dihedral" and tail.startswith("Z") \
            and tail[1:].isdigit() and int(tail[1:]) >= 2:
        return "structure", compose_binary(dihedral_quandle(int(tail[1:])))
    if "hopf" in kinds and head in ("group-algebra", "lie"):
        try:
            return "hopf", build_named(token)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if "system" in kinds and head == "augmented":
        parts = tail.split("-")
        if len(parts) == 3 and all(p.isdigit() for p in parts):
            return "system", augmented_cyclic_system(*map(int, parts))
    return None


def _payload_json(obj):
    if isinstance(obj, HopfData):
        return hopf_to_json(obj)
    if isinstance(obj, TsdObjectData):
        return {"name": obj.name, "dim": obj.dim}
    return obj.to_json()


def resolve_cocycle(token, structure, inputs, coeffs=None):
    """A named or file-based 2-cochain bound to the given structure."""
    c = None
    head, _, tail = token.partition(":")
    if head == "phi" and tail.isdigit():
        c = phi_i_cocycle(structure.size, int(tail))
    elif token == "d3psi":
        c = d3_psi_cocycle()
    elif token == "zero":
        c = zero_cochain2(structure, coeffs or AbelianGroup((0,)))
    elif os.path.exists(token):
        try:
            with open(token, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
            c = cochain_from_json(obj, resolve=lambda name: structure)
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError("cannot load cocycle %s: %s" % (token, exc)) from exc
    else:
        raise UsageError("unknown cocycle %r" % token)
    if c.structure.size != structure.size or not np.array_equal(
            c.structure.table, structure.table):
        raise UsageError("cocycle %s is defined on %s, not on the requested "
                         "structure" % (token, c.structure.name or "another table"))
    inputs["cocycle"] = {"name": token, "sha256": _digest(c.to_json())}
    return c


def resolve_braid(token, inputs):
    try:
        b = parse_word(token)
    except ValueError as exc:
        raise UsageError("bad braid word: %s" % exc) from exc
    norm = word_to_string(b)
    inputs["braid"] = {"word": norm, "sha256": _digest(norm)}
    return b


def resolve_coeffs(token):
    if token is None:
        return AbelianGroup((0,))
    try:
        return AbelianGroup.from_spec(token)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _character(cochain, order):
    if order is None:
        raise UsageError("--char-order is required for this command")
    try:
        return Character(cochain.coeffs, order,
                         (1,) * len(cochain.coeffs.factors))
    except ValueError as exc:
        raise UsageError("char order %d does not fit the cocycle "
                         "coefficients: %s" % (order, exc)) from exc


def _jsonable(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "to_json"):
        return v.to_json()
    return repr(v)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_verify(args, inputs):
    if args.structure is None:
        rows = []
        for e in catalog_entries():
            ok = e.validate(budget=args.budget or SMOKE_BUDGET, seed=args.seed)
            rows.append({"name": e.name, "kind": e.kind, "ok": ok})
        inputs["catalog"] = {"entries": len(rows)}
        all_ok = all(r["ok"] for r in rows)
        return all_ok, {"catalog": rows, "ok": all_ok}, None
    obj, kind = resolve_structure(
        args.structure, inputs, kinds=("structure", "gfamily", "system", "hopf"))
    if kind == "structure":
        tsd_rep = check_tsd(obj)
        rack_rep = check_rack(obj)
        result = {"kind": kind, "size": obj.size,
                  "tsd": tsd_rep.to_json(), "rack": rack_rep.to_json()}
        return tsd_rep.ok, result, None
    if kind == "gfamily":
        reports = gfamily_check(obj)
        result = {"kind": kind, "operations": obj.group.size,
                  "set_size": obj.set_size,
                  "axioms": [r.to_json() for r in reports]}
        return all(r.ok for r in reports), result, None
    if kind == "system":
        cov = check_compatible_system(obj, budget=args.budget or SYSTEM_BUDGET,
                                      seed=args.seed, exhaustive=args.exhaustive)
        return cov.ok, {"kind": kind, "sizes": list(obj.sizes),
                        "distributivity": cov.to_json()}, _coverage(cov)
    if isinstance(obj, HopfData):
        rep = validate_hopf(obj)
        result = {"kind": kind, "dim": obj.dim, "ok": rep.ok,
                  "failing": rep.failing,
                  "cocommutative": rep.cocommutative,
                  "involutory": rep.involutory}
        return rep.ok, result, None
    rep = check_tsd_object(obj)
    return rep.ok, {"kind": kind, "dim": obj.dim, "ok": rep.ok,
                    "failing": rep.failing}, None


def cmd_cohomology(args, inputs):
    structure, _ = resolve_structure(_require(args, "structure"), inputs)
    coeffs = resolve_coeffs(args.coeffs)
    rep = compute_H2(structure, coeffs)
    result = rep.to_json()
    result["group"] = rep.group_description()
    return True, result, None


def cmd_cocycle(args, inputs):
    structure, _ = resolve_structure(_require(args, "structure"), inputs)
    c = resolve_cocycle(_require(args, "cocycle"), structure, inputs,
                        coeffs=resolve_coeffs(args.coeffs))
    rep = check_cocycle2(c)
    verdict, witness = (False, None)
    if rep.ok:
        verdict, witness = is_coboundary2(c)
    result = {"cocycle_condition": rep.to_json(),
              "is_coboundary": verdict,
              "witness": None if witness is None else witness.to_json()}
    return rep.ok, result, None


def _colored_context(args, inputs):
    structure, _ = resolve_structure(_require(args, "structure"), inputs)
    rack = check_rack(structure)
    if not rack.ok:
        raise MathFailure({"reason": "structure is not a rack",
                           "check": rack.to_json()})
    c = resolve_cocycle(_require(args, "cocycle"), structure, inputs,
                        coeffs=resolve_coeffs(args.coeffs))
    rep = check_cocycle2(c)
    if not rep.ok:
        raise MathFailure({"reason": "cochain fails the 2-cocycle condition",
                           "check": rep.to_json()})
    b = resolve_braid(_require(args, "braid"), inputs)
    return structure, c, b


def cmd_invariant(args, inputs):
    structure, c, b = _colored_context(args, inputs)
    val = vector_invariant(b, structure, c, verify=False)
    return True, {"invariant": val.to_json()}, None


def cmd_quantum(args, inputs):
    structure, c, b = _colored_context(args, inputs)
    chi = _character(c, args.char_order)
    inputs["char_order"] = args.char_order
    ctx = WeightContext(structure, c, chi, verify=False)
    trace = quantum_invariant(ctx, b)
    return True, {"trace": trace.to_json(), "root_order": ctx.order}, None


def cmd_compare(args, inputs):
    structure, c, b = _colored_context(args, inputs)
    chi = _character(c, args.char_order)
    inputs["char_order"] = args.char_order
    ctx = WeightContext(structure, c, chi, verify=False)
    rep = compare_invariants(ctx, b)
    return rep.equal, rep.to_json(), None


def cmd_hopf(args, inputs):
    obj, _ = resolve_structure(_require(args, "structure"), inputs,
                               kinds=("hopf",))
    if isinstance(obj, TsdObjectData):
        if args.cocycle:
            raise UsageError("--cocycle needs an involutory Hopf algebra")
        rep = check_tsd_object(obj)
        result = {"dim": obj.dim, "tsd_object": rep.ok,
                  "failing": rep.failing,
                  "cocommutative": obj.cocommutative()}
        if obj.T_inv is not None:
            rack = check_rack_object(obj)
            result["rack_object"] = rack.ok
            result["ok"] = rep.ok and rack.ok
        else:
            result["ok"] = rep.ok
        return result["ok"], result, None
    axioms = validate_hopf(obj)
    result = {"dim": obj.dim, "axioms": axioms.ok, "failing": axioms.failing,
              "cocommutative": axioms.cocommutative,
              "involutory": axioms.involutory}
    ok = axioms.ok
    if axioms.ok and axioms.involutory:
        D = quantum_heap(obj)
        result["heap_tsd"] = check_tsd_object(D).ok
        result["heap_rack"] = check_rack_object(D).ok
        frob = frobenius_suite(obj)
        result["frobenius"] = {"ok": frob.ok, "failures": frob.failures(),
                               "scalars": {k: _jsonable(v)
                                           for k, v in frob.scalars.items()}}
        ok = ok and result["heap_tsd"] and result["heap_rack"] and frob.ok
        if args.cocycle:
            set_structure = _heap_for(obj, inputs)
            c = resolve_cocycle(args.cocycle, set_structure, inputs)
            chi = _character(c, args.char_order)
            inputs["char_order"] = args.char_order
            alpha = lift_set_cocycle(c, chi)
            crep = check_categorical_cocycle(D, alpha)
            result["categorical_cocycle"] = {"ok": crep.ok,
                                             "failing": crep.failing,
                                             "normalized": crep.normalized}
            braid_rep = check_braid_eq_dense(
                D, alpha, limit=args.budget or DENSE_BUDGET)
            result["braid_identities"] = {"ok": braid_rep.ok,
                                          "failing": braid_rep.failing}
            ok = ok and crep.ok and braid_rep.ok
    elif args.cocycle:
        raise UsageError("--cocycle needs an involutory Hopf algebra")
    result["ok"] = ok
    return ok, result, None


def _heap_for(H, inputs):
    """The set-level heap matching a catalog group algebra, for lifting."""
    name = (inputs.get("structure") or {}).get("name", "")
    head, _, tail = name.partition(":")
    if head == "group-algebra" and tail:
        sub = {}
        obj, _ = resolve_structure("heap:%s" % tail, sub)
        return obj
    raise UsageError("cocycle lifting needs a catalog group algebra "
                     "(group-algebra:<name>)")


def cmd_system(args, inputs):
    name = _require(args, "structure")
    budget = args.budget or SYSTEM_BUDGET
    if name == "nosaka:SL2Z3":
        alpha, nrep = nosaka_system_cocycle(budget=budget, seed=args.seed,
                                            exhaustive=args.exhaustive)
        cov = check_compatible_system(alpha.system, budget=budget,
                                      seed=args.seed,
                                      exhaustive=args.exhaustive)
        inputs["structure"] = {"name": name, "kind": "system",
                               "sha256": _digest(alpha.system.to_json())}
        ok = cov.ok and nrep.check.ok
        return ok, {"distributivity": cov.to_json(),
                    "cocycle": nrep.to_json()}, _coverage(cov)
    head, _, tail = name.partition(":")
    if head == "augmented":
        parts = tail.split("-")
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise UsageError("expected augmented:<n>-<m1>-<m2>, got %r" % name)
        system, alpha = augmented_system_cocycle(*map(int, parts))
        inputs["structure"] = {"name": name, "kind": "system",
                               "sha256": _digest(system.to_json())}
        cov = check_compatible_system(system, budget=budget, seed=args.seed,
                                      exhaustive=args.exhaustive)
        crep = check_system_cocycle(alpha, budget=budget, seed=args.seed,
                                    exhaustive=args.exhaustive)
        ok = cov.ok and crep.ok
        return ok, {"distributivity": cov.to_json(),
                    "cocycle": crep.to_json()}, _coverage(cov)
    system, _ = resolve_structure(name, inputs, kinds=("system",))
    cov = check_compatible_system(system, budget=budget, seed=args.seed,
                                  exhaustive=args.exhaustive)
    result = {"distributivity": cov.to_json()}
    ok = cov.ok
    if args.cocycle:
        try:
            with open(args.cocycle, "r", encoding="utf-8") as fh:
                alpha = system_cocycle_from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError("cannot load system cocycle %s: %s"
                             % (args.cocycle, exc)) from exc
        crep = check_system_cocycle(alpha, budget=budget, seed=args.seed,
                                    exhaustive=args.exhaustive)
        result["cocycle"] = crep.to_json()
        ok = ok and crep.ok
    return ok, result, _coverage(cov)


def _coverage(cov):
    out = {"mode": cov.mode, "seed": cov.seed}
    if cov.mode == "sampled":
        out["fraction"] = cov.fraction
    return out


def _require(args, field):
    value = getattr(args, field.replace("-", "_"), None)
    if value is None:
        raise UsageError("--%s is required for %r" % (field, args.command))
    return value


HANDLERS = {
    "verify": cmd_verify,
    "cohomology": cmd_cohomology,
    "cocycle": cmd_cocycle,
    "invariant": cmd_invariant,
    "quantum": cmd_quantum,
    "compare": cmd_compare,
    "hopf": cmd_hopf,
    "system": cmd_system,
}


# ---------------------------------------------------------------------------
# Argument plumbing


def _parser():
    parser = argparse.ArgumentParser(
        prog="ternlink",
        description="Exact checks and invariants for ternary "
                    "self-distributive structures.")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "verify": "validate a catalog entry, file, or the whole catalog",
        "cohomology": "compute second cohomology of a structure",
        "cocycle": "check the 2-cocycle condition and triviality",
        "invariant": "state-sum invariant of a framed braid closure",
        "quantum": "trace of the braid operator for a lifted cocycle",
        "compare": "state sum against quantum trace, both routes",
        "hopf": "Hopf-algebra axioms and the derived ternary objects",
        "system": "multi-carrier compatibility and system cocycles",
    }
    for name, blurb in specs.items():
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--structure", help="catalog name, builder, or JSON file")
        p.add_argument("--cocycle", help="catalog cocycle name or JSON file")
        p.add_argument("--braid", help="framed braid word, e.g. 'n=2; s1 s1'")
        p.add_argument("--coeffs", help="coefficient group, e.g. Z, Z2, Z2xZ4")
        p.add_argument("--char-order", type=int, dest="char_order",
                       help="root-of-unity order for the character")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for sampled checks (default 0)")
        p.add_argument("--budget", type=int,
                       help="identity/cell budget override")
        p.add_argument("--exhaustive", action="store_true",
                       help="lift sampling budgets and enumerate fully")
        p.add_argument("--workers", type=int, default=1,
                       help="worker budget for table checks (vectorized "
                            "kernels run in one process)")
        p.add_argument("--json", action="store_true",
                       help="print the canonical RunReport on stdout")
    return parser


def _command_echo(args):
    skip = {"command", "json"}
    options = {k: v for k, v in sorted(vars(args).items())
               if k not in skip and v not in (None, False)}
    return {"subcommand": args.command, "options": options}


def _print_human(report, ok, stream=None):
    stream = stream if stream is not None else sys.stdout
    print("command: %s" % report.command["subcommand"], file=stream)
    for key, val in sorted(report.inputs.items()):
        if isinstance(val, dict) and "sha256" in val:
            label = val.get("name", val.get("word", "?"))
            print("%s: %s  [%s]" % (key, label, val["sha256"][:12]),
                  file=stream)
        else:
            print("%s: %s" % (key, val), file=stream)
    if report.coverage is not None:
        print("coverage: %s" % dumps_canonical(report.coverage), file=stream)
    print("result:", file=stream)
    print(json.dumps(report.result, indent=2, sort_keys=True), file=stream)
    if report.timing_ms is not None:
        print("time: %d ms" % report.timing_ms, file=stream)
    print("status: %s" % ("pass" if ok else "FAIL"), file=stream)


def main(argv=None):
    started = time.monotonic()
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return 2
    inputs = {}
    try:
        ok, result, coverage = HANDLERS[args.command](args, inputs)
    except MathFailure as exc:
        ok, result, coverage = False, exc.payload, None
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    report = RunReport(_command_echo(args), inputs, _jsonable(result), coverage)
    report.timing_ms = int((time.monotonic() - started) * 1000)
    if args.json:
        print(report.dumps())
    else:
        _print_human(report, ok)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
