"""Command line: ``sprime check``, ``sprime verify``, ``sprime search`` and helpers.

Exit codes: 0 pass, 1 violations found, 2 usage or parse error, 3 validation error.
"""

import argparse
import json
import sys
import time

from . import predicates as pd
from .bits import full, indices_of, mask_of
from .errors import SPrimeError
from .harness import (DROPPABLE, Corpus, CorpusSpec, run_verify, search_counterexamples,
                      theorem_ids)
from .instance import ParseError, ValidationError, load_schema, parse_instance
from .substructures import (Ideal, MSystem, Submodule, colon_module,
                            generate_right_ideal, generate_submodule, generate_two_sided_ideal,
                            is_msystem, principal_ideal)

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3

CHECKS = ("is-msystem", "is-prime-ideal", "is-s-prime-ideal", "is-prime-submodule",
          "is-s-prime-submodule", "is-multiplication", "is-s-multiplication", "is-s-finite",
          "is-s-noetherian", "colon", "generate")

# witness / counterexample keys naming ring elements; the rest name module elements
_RING_KEYS = {"s", "a", "b", "r", "S", "I", "J", "colon", "A", "B", "multipliers"}


class UsageError(SPrimeError):
    pass


def _emit(obj, out=None):
    (out or sys.stdout).write(json.dumps(obj, separators=(",", ":")) + "\n")


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"{args.command} needs --{name.replace('_', '-')}")
    return value


def _subset(inst, name, cls):
    sub = inst.get(name)
    if not isinstance(sub, cls):
        # plain subsets are re-validated by the predicate's own guards
        owner = inst.module if cls is Submodule else inst.ring
        return cls(owner, sub.bits)
    return sub


def _msys(inst, name):
    sub = inst.get(name)
    if isinstance(sub, MSystem):
        return sub
    v = is_msystem(inst.ring, sub)
    if not v:
        a, b = v.counterexample["a"], v.counterexample["b"]
        raise ValidationError(f"msystem {name}", f"not an m-system: fails at pair ({a},{b})")
    return MSystem(inst.ring, sub.bits)


def _render(inst, payload):
    """Human-readable names for every element index in a payload."""
    out = {}
    if not payload:
        return out
    for key, val in payload.items():
        owner = inst.ring if key in _RING_KEYS else inst.module
        if isinstance(val, bool):
            continue
        if isinstance(val, int):
            out[key] = owner.render(val)
        elif isinstance(val, list) and all(isinstance(v, int) for v in val):
            out[key] = [owner.render(v) for v in val]
    return out


def _verdict_doc(args, inst, v):
    doc = {"schema": "sprime-check/1", "command": args.command, "holds": v.holds}
    if v.witness is not None:
        doc["witness"] = v.witness
    if v.counterexample is not None:
        doc["counterexample"] = v.counterexample
    rendered = {}
    for part in ("witness", "counterexample"):
        r = _render(inst, getattr(v, part))
        if r:
            rendered[part] = r
    if rendered:
        doc["rendered"] = rendered
    if v.notes:
        doc["notes"] = v.notes
    return doc


def _result_doc(args, inst, owner, bits, notes=None):
    doc = {"schema": "sprime-check/1", "command": args.command, "result": indices_of(bits),
           "rendered": {"result": [owner.render(x) for x in indices_of(bits)]}}
    if notes:
        doc["notes"] = notes
    return doc


def run_check(args, out=None):
    t0 = time.perf_counter()
    inst = parse_instance(args.instance)
    cmd = args.command
    m, r = inst.module, inst.ring
    mode = args.mode
    figure_marks = {}
    if cmd == "is-msystem":
        v = is_msystem(r, inst.get(_need(args, "S")))
        doc = _verdict_doc(args, inst, v)
    elif cmd == "is-prime-ideal":
        p = _subset(inst, _need(args, "P"), Ideal)
        doc = _verdict_doc(args, inst, pd.is_prime_ideal(r, p))
    elif cmd == "is-s-prime-ideal":
        p = _subset(inst, _need(args, "P"), Ideal)
        s = _msys(inst, _need(args, "S"))
        if args.form == "ideal":
            v = pd.is_s_prime_ideal_by_ideals(r, p, s)
        else:
            v = pd.is_s_prime_ideal(r, p, s, mode)
        doc = _verdict_doc(args, inst, v)
    elif cmd == "is-prime-submodule":
        p = _subset(inst, _need(args, "P"), Submodule)
        figure_marks["P"] = p.bits
        doc = _verdict_doc(args, inst, pd.is_prime_submodule(m, p))
    elif cmd == "is-s-prime-submodule":
        p = _subset(inst, _need(args, "P"), Submodule)
        s = _msys(inst, _need(args, "S"))
        figure_marks["P"] = p.bits
        if args.form == "ideal":
            v = None
            for x in s:
                v = pd.is_s_prime_submodule_by_ideals(m, p, s, x)
                if v:
                    break
        else:
            v = pd.is_s_prime_submodule(m, p, s, mode)
        doc = _verdict_doc(args, inst, v)
        if v and v.witness and "s" in v.witness:
            col = pd.probe(m, p).b_rows[v.witness["s"]]
            figure_marks["(P:<s>)"] = col
    elif cmd == "is-multiplication":
        doc = _verdict_doc(args, inst, pd.is_multiplication_module(m))
    elif cmd == "is-s-multiplication":
        doc = _verdict_doc(args, inst, pd.is_s_multiplication_module(m, _msys(inst, _need(args, "S"))))
    elif cmd == "is-s-finite":
        n = _subset(inst, _need(args, "N"), Submodule)
        figure_marks["N"] = n.bits
        doc = _verdict_doc(args, inst, pd.is_s_finite(n, _msys(inst, _need(args, "S")), args.max_gens))
    elif cmd == "is-s-noetherian":
        s = _msys(inst, _need(args, "S"))
        if args.ring:
            v = pd.is_right_s_noetherian_ring(r, s, args.max_gens)
        else:
            v = pd.is_s_noetherian_module(m, s, args.max_gens)
        doc = _verdict_doc(args, inst, v)
    elif cmd == "colon":
        doc = _colon(args, inst, figure_marks)
    elif cmd == "generate":
        doc = _generate(args, inst, figure_marks)
    else:  # argparse restricts choices
        raise UsageError(f"unknown check {cmd!r}")
    if args.figure:
        from .report import submodule_lattice
        submodule_lattice(m, args.figure, highlight=figure_marks)
        doc.setdefault("notes", {})["figure"] = args.figure
    doc["elapsed_s"] = round(time.perf_counter() - t0, 4)
    _emit(doc, out)
    return EXIT_OK


def _colon(args, inst, marks):
    p = _subset(inst, _need(args, "of"), Submodule)
    marks["P"] = p.bits
    if args.over is not None:
        if args.over == "M":
            n_bits = full(inst.module.order)
        else:
            n_bits = _subset(inst, args.over, Submodule).bits
        bits = _colon_over(inst.module, n_bits, p.bits)
        return _result_doc(args, inst, inst.ring, bits, {"kind": "(P :_R N)"})
    if args.by is not None:
        j = Ideal(inst.ring, inst.get(args.by).bits)
    elif args.by_element is not None:
        if not 0 <= args.by_element < inst.ring.order:
            raise ValidationError("--by-element", "not a ring element")
        j = principal_ideal(inst.ring, args.by_element)
    else:
        raise UsageError("colon needs --over or --by/--by-element")
    bits = colon_module(p, j).bits
    marks["colon"] = bits
    return _result_doc(args, inst, inst.module, bits, {"kind": "(P :_M J)"})


def _colon_over(m, n_bits, p_bits):
    """(P :_R N): ring elements r with N r ⊆ P."""
    acc = full(m.ring.order)
    for x in indices_of(n_bits):
        acc &= mask_of(r for r in range(m.ring.order) if (p_bits >> int(m.act[x, r])) & 1)
    return acc


def _generate(args, inst, marks):
    gens = _int_list(args.gens)
    kind = args.kind
    if kind == "submodule":
        owner = inst.module
        if any(not 0 <= g < owner.order for g in gens):
            raise ValidationError("--gens", "element out of range")
        bits = generate_submodule(owner, gens).bits
        marks["generated"] = bits
    else:
        owner = inst.ring
        if any(not 0 <= g < owner.order for g in gens):
            raise ValidationError("--gens", "element out of range")
        fn = generate_right_ideal if kind == "right_ideal" else generate_two_sided_ideal
        bits = fn(owner, gens).bits
    return _result_doc(args, inst, owner, bits, {"kind": kind, "generators": gens})


def _int_list(text):
    if text is None or text == "":
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _load_corpus(args):
    spec = CorpusSpec()
    if args.corpus:
        try:
            with open(args.corpus) as fh:
                spec = CorpusSpec.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
            raise ParseError(f"corpus {args.corpus}: {exc}") from None
    if args.seed is not None:
        spec.seed = args.seed
    if args.budget is not None:
        spec.budget = args.budget
    if getattr(args, "n_max", None) is not None:
        spec.n_max = args.n_max
    return Corpus(spec)


def run_verify_cmd(args, out=None):
    if args.theorem != "all" and args.theorem not in theorem_ids():
        raise UsageError(f"unknown theorem id {args.theorem!r}; see 'sprime list'")
    corpus = _load_corpus(args)
    sink = open(args.out, "w") if args.out else (out or sys.stdout)
    reports = []
    try:
        for rep in run_verify(args.theorem, corpus):
            reports.append(rep)
            _emit(rep.to_dict(include_timing=args.timing), sink)
            sink.flush()
    finally:
        if args.out:
            sink.close()
    if args.figures:
        from .report import write_verify_figures
        write_verify_figures(reports, args.figures)
    return EXIT_VIOLATIONS if any(not r.passed for r in reports) else EXIT_OK


def run_search_cmd(args, out=None):
    if args.toggle not in DROPPABLE:
        raise UsageError(f"unknown toggle {args.toggle!r}; choose from {sorted(DROPPABLE)}")
    rep = search_counterexamples(args.toggle, _load_corpus(args))
    _emit(rep.to_dict(include_timing=args.timing), out)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="sprime", description="S-prime submodules over finite rings")
    sub = ap.add_subparsers(dest="action", required=True)

    c = sub.add_parser("check", help="run one predicate on an instance document")
    c.add_argument("command", choices=CHECKS)
    c.add_argument("instance")
    for flag in ("P", "S", "N"):
        c.add_argument(f"--{flag}", dest=flag, help=f"subset name for {flag}")
    c.add_argument("--mode", choices=pd.MODES, default=pd.UNIFORM)
    c.add_argument("--form", choices=("element", "ideal"), default="element",
                   help="element-wise or ideal-wise S-prime test")
    c.add_argument("--max-gens", type=int, default=None)
    c.add_argument("--ring", action="store_true", help="is-s-noetherian: right ideals of R")
    c.add_argument("--of", help="colon: submodule name P")
    c.add_argument("--over", help="colon: (P :_R N) with N a submodule name or M")
    c.add_argument("--by", help="colon: (P :_M J) with J an ideal name")
    c.add_argument("--by-element", type=int, help="colon: (P :_M <s>)")
    c.add_argument("--kind", choices=("submodule", "right_ideal", "ideal"), default="submodule")
    c.add_argument("--gens", help="generate: comma-separated element indices")
    c.add_argument("--figure", help="write the submodule lattice to this image file")

    for name, hlp in (("verify", "run theorem verifiers over a corpus"),
                      ("search", "re-run a verifier with a hypothesis removed")):
        v = sub.add_parser(name, help=hlp)
        if name == "verify":
            v.add_argument("theorem", help="theorem id or 'all'")
            v.add_argument("--n-max", type=int, default=None)
            v.add_argument("--out", help="write JSON Lines here instead of stdout")
            v.add_argument("--figures", help="directory for summary figures")
        else:
            v.add_argument("toggle", help="e.g. thm-2.16/ker")
        v.add_argument("--corpus", help="corpus spec JSON (see 'sprime corpus')")
        v.add_argument("--seed", type=int, default=None)
        v.add_argument("--budget", type=int, default=None)
        v.add_argument("--timing", action="store_true", help="include elapsed_s in reports")

    sub.add_parser("list", help="theorem ids and hypothesis toggles")
    s = sub.add_parser("schema", help="print a JSON schema")
    s.add_argument("which", choices=("instance", "report"))
    sub.add_parser("corpus", help="print the default corpus spec")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.action == "check":
            return run_check(args)
        if args.action == "verify":
            return run_verify_cmd(args)
        if args.action == "search":
            return run_search_cmd(args)
        if args.action == "list":
            _emit({"theorems": theorem_ids(), "toggles": sorted(DROPPABLE)}, sys.stdout)
            return EXIT_OK
        if args.action == "schema":
            print(json.dumps(load_schema(f"{args.which}.schema.json"), indent=2))
            return EXIT_OK
        if args.action == "corpus":
            print(json.dumps(CorpusSpec().to_dict(), indent=2))
            return EXIT_OK
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SPrimeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
