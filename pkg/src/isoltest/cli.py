"""``isoltest`` command line.

Exit codes: 0 success, 1 semantic negative (inequivalent models, FAIL
verdicts, missed hard criterion, empty CTG, unsatisfiable intent), 2 usage or
parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import soc
from .bisim import Relation, equivalent, minimize
from .dsl import DslError
from .dsl.params_text import parse_soc_params
from .dsl.pss_text import parse_pss_model, parse_vi
from .dsl.suite_json import Suite, model_digest, read_suite, write_suite
from .dsl.tp_text import parse_tp
from .lts import AutParseError, Lts, ResourceLimitError, ValidationError, aut_read, aut_write, hide, rename
from .pss import UnsatisfiableError, backward_infer, monolithic_ri_model
from .scenarios import SCENARIO_IDS, catalog, ctg_for, extended_tp
from .testgen import EmptyCtgError, Verdict, choices, decision_states, extract_single_test, extract_test_suite, run_suite

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _counts(l: Lts) -> str:
    return f"{l.n_states} states, {l.n_transitions} transitions, {l.label_count() + 1} labels ({l.label_count()} visible)"


# -- model selection ---------------------------------------------------------------------


def _params(args) -> soc.SocParams:
    if getattr(args, "params", None):
        return parse_soc_params(Path(args.params).read_text(), args.params)
    if getattr(args, "sources", None) is None:
        return soc.eight_source_params()
    if args.sources < 1:
        raise UsageError("--sources must be at least 1")
    if args.sources == 8 and not args.multitasking:
        return soc.eight_source_params()
    return soc.SocParams(args.sources, args.multitasking)


def _spec_model(args) -> Lts:
    """Model the tests are generated from: an AUT file or the strongly minimized SoC model."""
    if getattr(args, "model", None):
        return aut_read(args.model)
    return minimize(soc.build_soc_lts(_params(args)), "strong")


def _purpose(args):
    if args.tp:
        return parse_tp(Path(args.tp).read_text(), args.tp)
    if args.scenario == "extended":
        return extended_tp()
    return catalog().purposes[int(args.scenario)]


def _scenario_id(args) -> str:
    return Path(args.tp).stem if args.tp else str(args.scenario)


# -- commands ---------------------------------------------------------------------------------


def cmd_build_lts(args) -> int:
    p = _params(args)
    l = soc.mutate(p, args.mutation) if args.mutation else soc.build_soc_lts(p)
    if args.drop_ids:
        l = rename(l, soc.drop_id)
    if args.hide:
        l = hide(l, args.hide)
    if args.minimize:
        l = minimize(l, args.minimize)
    print(_counts(l))
    if args.out:
        aut_write(l, args.out)
    return OK


def cmd_compare(args) -> int:
    a, b = aut_read(args.a), aut_read(args.b)
    if args.drop_ids:
        a, b = rename(a, soc.drop_id), rename(b, soc.drop_id)
    if args.hide:
        a, b = hide(a, args.hide), hide(b, args.hide)
    r = equivalent(a, b, args.relation)
    print(r.describe())
    return OK if r else NEGATIVE


def cmd_gen_ctg(args) -> int:
    ctg = ctg_for(_purpose(args), _spec_model(args))
    print(_counts(ctg.lts))
    print(f"choices {choices(ctg)} (decision states {decision_states(ctg)})")
    if args.out:
        ctg.write(f"{args.out}.aut", f"{args.out}.json")
    return OK


def cmd_gen_suite(args) -> int:
    model = _spec_model(args)
    ctg = ctg_for(_purpose(args), model)
    sid = _scenario_id(args)
    if args.coverage == "all-choices":
        tests = extract_test_suite(ctg, prefix=f"s{sid}_t")
    else:
        tests = [extract_single_test(ctg, seed=args.seed, name=f"s{sid}_t0")]
    print(f"{len(tests)} tests, {sum(len(t.stimuli()) for t in tests)} stimuli")
    if args.out:
        write_suite(Suite(sid, model_digest(model), tests), args.out)
    return OK


def cmd_infer(args) -> int:
    m = parse_pss_model(Path(args.model).read_text(), args.model) if args.model else monolithic_ri_model()
    vi = parse_vi(Path(args.vi).read_text(), m, args.vi) if args.vi else catalog().intents[int(args.scenario)]
    test = backward_infer(m, vi, select=args.select, seed=args.seed)
    for k, step in enumerate(test.steps):
        handle = f" [{step.handle}]" if step.handle else ""
        print(f"{k:3d}  {step.action}{handle}")
    print(f"{len(test)} steps")
    return OK


def cmd_run_suite(args) -> int:
    if args.model:
        impl = aut_read(args.model)
        digest = model_digest(minimize(impl, "strong"))
    else:
        p = _params(args)
        impl = soc.mutate(p, args.mutation) if args.mutation else soc.build_soc_lts(p)
        digest = model_digest(minimize(soc.build_soc_lts(p), "strong"))
    suite, warnings = read_suite(args.suite, digest)
    for w in warnings:
        print(w, file=sys.stderr)
    counts = {v: 0 for v in Verdict}
    for seed in range(args.seed, args.seed + args.seeds):
        for v in run_suite(suite.tests, impl, seed=seed):
            counts[v] += 1
    print("  ".join(f"{v.name} {counts[v]}" for v in Verdict))
    failed = counts[Verdict.FAIL] > 0
    if args.expect_fail:
        return OK if failed else NEGATIVE
    return NEGATIVE if failed else OK


def cmd_repro(args) -> int:
    from . import repro

    rep = repro.run(quick=args.quick)
    print(rep.table())
    print(f"\n{len(rep.hard_failures)} hard criteria missed; {rep.seconds:.1f} s")
    return NEGATIVE if rep.hard_failures else OK


def cmd_extended(args) -> int:
    model = _spec_model(args)
    ctg = ctg_for(extended_tp(), model)
    test = extract_single_test(ctg, seed=args.seed, name="extended")
    print(_counts(ctg.lts))
    print(f"one test with {len(test.stimuli())} stimuli")
    if args.out:
        write_suite(Suite("extended", model_digest(model), [test]), args.out)
    return OK


# -- parser --------------------------------------------------------------------------------


def _scenario_arg(p, allow_extended=True):
    g = p.add_mutually_exclusive_group(required=True)
    ids = [str(k) for k in SCENARIO_IDS] + (["extended"] if allow_extended else [])
    g.add_argument("--scenario", choices=ids, help="builtin scenario")
    g.add_argument("--tp", help="test purpose file")


def _model_args(p):
    p.add_argument("--sources", type=int, help="number of sources (default 8)")
    p.add_argument("--multitasking", action="store_true")
    p.add_argument("--params", help="SoC parameter file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isoltest", description="Resource-isolation test generation for SoC models.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build-lts", help="generate the SoC LTS")
    _model_args(p)
    p.add_argument("--mutation", choices=soc.MUTATIONS)
    p.add_argument("--minimize", choices=[r.value for r in Relation if r is not Relation.WEAK_TRACE])
    p.add_argument("--drop-ids", action="store_true", help="remove the IP identifier offer")
    p.add_argument("--hide", nargs="*", default=[], metavar="GATE")
    p.add_argument("--out", help="AUT output file")
    p.set_defaults(fn=cmd_build_lts)

    p = sub.add_parser("compare", help="check two AUT files for equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--relation", choices=[r.value for r in Relation], default="branching")
    p.add_argument("--drop-ids", action="store_true")
    p.add_argument("--hide", nargs="*", default=[], metavar="GATE")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("gen-ctg", help="extract a complete test graph")
    _scenario_arg(p)
    _model_args(p)
    p.add_argument("--model", help="AUT model instead of the SoC model")
    p.add_argument("--out", help="output prefix; writes PREFIX.aut and PREFIX.json")
    p.set_defaults(fn=cmd_gen_ctg)

    p = sub.add_parser("gen-suite", help="extract test cases into a JSON suite")
    _scenario_arg(p)
    _model_args(p)
    p.add_argument("--model", help="AUT model instead of the SoC model")
    p.add_argument("--coverage", choices=["all-choices", "single"], default="all-choices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="suite JSON file")
    p.set_defaults(fn=cmd_gen_suite)

    p = sub.add_parser("infer", help="backward inference of a test from a verification intent")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--scenario", choices=[str(k) for k in SCENARIO_IDS])
    g.add_argument("--vi", help="verification intent file")
    p.add_argument("--model", help="constraint model file (default: builtin model)")
    p.add_argument("--select", choices=["shortest", "sample"], default="shortest")
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=cmd_infer)

    p = sub.add_parser("run-suite", help="execute a suite against a (mutated) model")
    p.add_argument("--suite", required=True)
    _model_args(p)
    p.add_argument("--model", help="AUT implementation instead of the SoC model")
    p.add_argument("--mutation", choices=soc.MUTATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--expect-fail", action="store_true", help="succeed only if some test fails")
    p.set_defaults(fn=cmd_run_suite)

    p = sub.add_parser("repro", help="print the count reproduction table")
    p.add_argument("--quick", action="store_true", help="skip the scenario-2 suite and the mutation runs")
    p.set_defaults(fn=cmd_repro)

    p = sub.add_parser("extended", help="one long test over every source and target configuration")
    _model_args(p)
    p.add_argument("--model", help="AUT model instead of the SoC model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="suite JSON file")
    p.set_defaults(fn=cmd_extended)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"isoltest: {e}", file=sys.stderr)
        return USAGE
    except DslError as e:
        print(e, file=sys.stderr)
        return USAGE
    except (AutParseError, OSError) as e:
        print(f"isoltest: {e}", file=sys.stderr)
        return USAGE
    except ValidationError as e:
        print(f"isoltest: invalid input: {e}", file=sys.stderr)
        return USAGE
    except EmptyCtgError as e:
        print(f"isoltest: EMPTY_CTG for scenario {_scenario_id(args)}: {e}", file=sys.stderr)
        return NEGATIVE
    except UnsatisfiableError as e:
        where = args.vi or f"scenario {args.scenario}"
        print(f"isoltest: UNSATISFIABLE intent ({where}): {e}", file=sys.stderr)
        return NEGATIVE
    except ResourceLimitError as e:
        print(f"isoltest: {e}", file=sys.stderr)
        return NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
