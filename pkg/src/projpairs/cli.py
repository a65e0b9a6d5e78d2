"""Command-line front end: ``projpairs <command> ...``.

Every command prints one JSON object ``{"status": ..., "payload": ...}``
with sorted keys. Exit codes: 0 for ``ok`` and ``unsolvable``, 2 for
``invalid_input``, 3 for ``cap_exceeded``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from typing import Any

from . import io
from .cohomology import restriction_surjective
from .dep import (DEPError, canonical_solution, check_solution, dominate_split, is_split,
                  lift_via_fiber, require_valid, semidirect_complement, solve_weak,
                  solve_weak_prescribed, split_over_subgroup, sylow_obstruction_check,
                  validate_dep, wreath_obstruction_dep)
from .formations import FormationSpec, composition_factors, formation_member
from .groups import (CapExceeded, GroupError, is_normal, is_simple,
                     normal_subgroups, set_order_cap)
from .homs import HomConstraints, first_hom, identity_hom, quotient
from .sampler import ExperimentSpec, run_experiment

EXIT = {"ok": 0, "unsolvable": 0, "invalid_input": 2, "cap_exceeded": 3}


@dataclass
class CommandResult:
    status: str
    payload: Any
    elapsed_ms: int = 0

    def to_json(self, timing: bool) -> dict:
        out = {"status": self.status, "payload": self.payload}
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def _solution_json(dd: io.DepData, sol) -> dict:
    check_solution(dd.dep, sol)
    return {"theta": io.hom_to_json(sol.theta), "eta": io.eta_to_json(dd, sol.eta), "verified": True}


def cmd_solve(args) -> CommandResult:
    dd = io.load_dep(args.dep)
    dep = require_valid(dd.dep)
    if args.prescribe:
        eta = io.load_eta(dd, args.prescribe)
        sol = lift_via_fiber(dep, eta) if args.via_fiber else solve_weak_prescribed(dep, eta)
        if sol is None:
            return CommandResult("unsolvable", "unsolvable")
        return CommandResult("ok", [_solution_json(dd, sol)])
    if args.via_fiber:
        raise io.InputError("--via-fiber", "requires --prescribe")
    if args.all:
        sols = solve_weak(dep, want_all=True)
    else:
        first = solve_weak(dep)
        sols = [] if first is None else [first]
    if not sols:
        return CommandResult("unsolvable", "unsolvable")
    return CommandResult("ok", [_solution_json(dd, s) for s in sols])


def cmd_dominate(args) -> CommandResult:
    dd = io.load_dep(args.dep)
    dep = require_valid(dd.dep)
    theta = io.load_theta(dd, args.theta)
    eta = io.load_eta(dd, args.eta)
    w = dominate_split(dep, theta, eta)
    split, _ = is_split(w.dominating)
    canon = canonical_solution(w)
    return CommandResult("ok", {
        "dominating": io.dep_to_json(w.dominating),
        "is_split": split,
        "N_order": w.N.order,
        "sections": {"alpha_hat_prime": io.hom_to_json(w.alpha_hat_prime),
                     "beta_hat_prime": io.hom_to_json(w.beta_hat_prime)},
        "canonical_solution": None if canon is None else {"theta": io.hom_to_json(canon.theta)},
    })


def _words_arg(text: str, path: str):
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise io.InputError(path, f"invalid JSON: {exc.msg}") from None
    return io._list(value, path)


def cmd_split(args) -> CommandResult:
    _, pd = io.load_pair_file(args.pair)
    L = pd.pair.ambient
    N = io.subgroup(L, _words_arg(args.N, "--N"), "--N")
    if not N.is_subset(pd.pair.distinguished):
        raise io.InputError("--N", "N is not inside the distinguished subgroup")
    M = split_over_subgroup(pd.pair, N)
    if M is None:
        return CommandResult("unsolvable", "none")
    return CommandResult("ok", {"M": io.subgroup_to_json(M), "order": M.order,
                                "members": list(M.members)})


def cmd_complement(args) -> CommandResult:
    _, pd = io.load_pair_file(args.pair)
    M = semidirect_complement(pd.pair)
    if M is None:
        return CommandResult("unsolvable", "none")
    return CommandResult("ok", {"M": io.subgroup_to_json(M), "order": M.order,
                                "members": list(M.members)})


def cmd_h1(args) -> CommandResult:
    action = io.load_action(args.action)
    sub = io.subgroup(action.actor, _words_arg(args.subgroup, "--subgroup"), "--subgroup")
    rep = restriction_surjective(action, sub, level=args.level)
    if rep.surjective:
        witness = [{"cocycle": list(k), "extension": list(v)} for k, v in sorted(rep.witness.items())]
    else:
        witness = list(rep.witness.values)
    return CommandResult("ok", {
        "surjective": rep.surjective, "level": args.level, "witness": witness,
        "cocycles_full": rep.count_full, "cocycles_sub": rep.count_sub,
        "classes_full": rep.classes_full, "classes_sub": rep.classes_sub,
        "subgroup_members": list(sub.members),
    })


def cmd_wreath_test(args) -> CommandResult:
    loader, pd = io.load_pair_file(args.pair)
    L, Gm = pd.pair.ambient, pd.pair.distinguished
    A = loader.group(args.A, "--A")
    G = loader.group(args.G, "--G")
    if not is_normal(L, Gm):
        raise io.InputError("$.distinguished", "the distinguished subgroup is not normal")
    eta = first_hom(Gm.group, A, surjective_only=True)
    nu = first_hom(L, G, HomConstraints(image_in=(Gm, G.trivial_subgroup)), surjective_only=True)
    if eta is None or nu is None:
        raise io.InputError("$", "the pair admits no epimorphisms Gm -> A and L/Gm -> G")
    dep, eta1 = wreath_obstruction_dep(pd.pair, eta, nu)
    a = solve_weak_prescribed(dep, eta1)
    b = lift_via_fiber(dep, eta1)
    payload = {"wreath_order": dep.H.order, "prescribed": a is not None, "via_fiber": b is not None,
               "agree": (a is None) == (b is None)}
    return CommandResult("unsolvable" if a is None and b is None else "ok", payload)


def cmd_sylow_test(args) -> CommandResult:
    loader = io.Loader()
    Q = loader.group(args.group, "--group")
    p = args.p
    psi = None
    if is_simple(Q) and not Q.is_abelian:
        psi = identity_hom(Q)
    else:
        for N in sorted(normal_subgroups(Q), key=lambda s: (s.order, s.members)):
            if N.order == Q.order:
                continue
            S, q = quotient(Q, N)
            if not S.is_abelian and S.order % p == 0 and is_simple(S):
                psi = q
                break
    if psi is None:
        raise io.InputError("--group", f"no non-abelian simple quotient of order divisible by {p}")
    verdict = sylow_obstruction_check(Q, p, psi)
    return CommandResult("ok", {"obstructed": verdict, "quotient_order": psi.target.order, "p": p})


def cmd_sample(args) -> CommandResult:
    loader = io.Loader()
    data = loader.read(args.experiment)
    bobj = io._get(data, "beta", "$")
    H = loader.group(io._get(bobj, "source", "$.beta"), "$.beta.source")
    B = loader.group(io._get(bobj, "target", "$.beta"), "$.beta.target")
    beta = io.hom(H, B, bobj, "$.beta")
    if not beta.is_surjective:
        raise io.InputError("$.beta", "beta must be surjective")
    b = [io.element(B, v, f"$.b[{i}]") for i, v in enumerate(io._list(io._get(data, "b", "$"), "$.b"))]
    h = [io.element(H, v, f"$.h[{i}]") for i, v in enumerate(io._list(io._get(data, "h", "$"), "$.h"))]
    spec = ExperimentSpec(beta, io._int(io._get(data, "e", "$"), "$.e"),
                          io._int(io._get(data, "n", "$"), "$.n"), b, h,
                          trials=io._int(data.get("trials", 10_000), "$.trials"),
                          seed=io._int(data.get("seed", 0), "$.seed"),
                          exhaustive=args.exhaustive or data.get("exhaustive", "auto"))
    rep = run_experiment(spec, threads=args.threads)
    return CommandResult("ok", rep.to_json(timing=args.timing))


def cmd_formation(args) -> CommandResult:
    loader = io.Loader()
    group = loader.group(args.group, "--group")
    if args.kind == "p_group":
        if args.p is None:
            raise io.InputError("--p", "required for p_group")
        spec = FormationSpec.p_group(args.p)
    elif args.kind == "solvable":
        spec = FormationSpec.solvable()
    elif args.kind == "all":
        spec = FormationSpec.all()
    else:
        names = [n for n in (args.factors or "").split(",") if n]
        if not names:
            raise io.InputError("--factors", "give a comma-separated list of groups")
        spec = FormationSpec.composition_factors_in([loader.group(n, "--factors") for n in names])
    factors = composition_factors(group)
    return CommandResult("ok", {
        "member": formation_member(group, spec), "kind": args.kind, "order": group.order,
        "composition_factor_orders": sorted(f.order for f in factors),
    })


def cmd_validate(args) -> CommandResult:
    loader = io.Loader()
    data = loader.read(args.file)
    if "H" in data and "pair" in data:
        dd = io.load_dep(args.file)
        diags = validate_dep(dd.dep)
        if diags:
            return CommandResult("invalid_input", {"kind": "dep", "diagnostics": [
                {"arrow": d.arrow, "message": d.message, "witness": d.witness} for d in diags]})
        return CommandResult("ok", {"kind": "dep", "valid": True})
    if "actor" in data:
        action = io.load_action(args.file)
        return CommandResult("ok", {"kind": "action", "valid": True,
                                    "actor_order": action.actor.order,
                                    "space_order": action.space.order})
    if "ambient" in data:
        _, pd = io.load_pair_file(args.file)
        return CommandResult("ok", {"kind": "pair", "valid": True,
                                    "ambient_order": pd.pair.ambient.order,
                                    "distinguished_order": pd.pair.distinguished.order,
                                    "normal": is_normal(pd.pair.ambient, pd.pair.distinguished)})
    if "kind" in data:
        g = loader.group(data, "$")
        return CommandResult("ok", {"kind": "group", "valid": True, "order": g.order,
                                    "abelian": g.is_abelian})
    raise io.InputError("$", "unrecognised file kind")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="projpairs", description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--cap", type=int, default=None, help="maximum group order")
    ap.add_argument("--output", default="stdout", help="output path or 'stdout'")
    ap.add_argument("--timing", action="store_true", help="include elapsed_ms in the output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="weak solutions of a double embedding problem")
    p.add_argument("dep")
    p.add_argument("--all", action="store_true")
    p.add_argument("--prescribe", metavar="ETA_FILE")
    p.add_argument("--via-fiber", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("dominate", help="split problem dominating a DEP")
    p.add_argument("dep")
    p.add_argument("--theta", required=True)
    p.add_argument("--eta", required=True)
    p.set_defaults(func=cmd_dominate)

    p = sub.add_parser("split", help="M with N = Gm ∩ M and Gm M = L")
    p.add_argument("pair")
    p.add_argument("--N", required=True, help="JSON list of words in the ambient group")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("complement", help="normal complement of the distinguished subgroup")
    p.add_argument("pair")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("h1", help="surjectivity of cocycle restriction")
    p.add_argument("action")
    p.add_argument("--subgroup", required=True, help="JSON list of words in the actor")
    p.add_argument("--level", choices=["cocycle", "class"], default="cocycle")
    p.set_defaults(func=cmd_h1)

    p = sub.add_parser("wreath-test", help="wreath-product obstruction for a normal pair")
    p.add_argument("pair")
    p.add_argument("--A", required=True)
    p.add_argument("--G", required=True)
    p.set_defaults(func=cmd_wreath_test)

    p = sub.add_parser("sylow-test", help="Sylow complement obstruction")
    p.add_argument("group")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_sylow_test)

    p = sub.add_parser("sample", help="random-tuple lifting experiment")
    p.add_argument("experiment")
    p.add_argument("--exhaustive", choices=["auto", "force", "off"], default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("formation", help="formation membership")
    p.add_argument("group")
    p.add_argument("--kind", choices=["all", "p_group", "solvable", "composition"], required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--factors", help="comma-separated group refs (composition kind)")
    p.set_defaults(func=cmd_formation)

    p = sub.add_parser("validate", help="check a group, pair, action or DEP file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)
    return ap


def run(argv=None) -> tuple[CommandResult, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    set_order_cap(args.cap)
    try:
        result = args.func(args)
    except CapExceeded as exc:
        result = CommandResult("cap_exceeded", {"error": str(exc)})
    except io.InputError as exc:
        result = CommandResult("invalid_input", {"error": exc.message, "path": exc.path})
    except DEPError as exc:
        result = CommandResult("invalid_input", {"error": str(exc), "diagnostics": [
            {"arrow": d.arrow, "message": d.message, "witness": d.witness} for d in exc.diagnostics]})
    except GroupError as exc:
        result = CommandResult("invalid_input", {"error": str(exc)})
    finally:
        set_order_cap(None)
    result.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return result, args


def main(argv=None) -> int:
    result, args = run(argv)
    text = io.dumps(result.to_json(args.timing))
    if args.output == "stdout":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT[result.status]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
