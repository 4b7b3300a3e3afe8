"""Command-line interface: ``tpvsim <subcommand> ...``.

Exit codes: 0 success (or equality for ``compare``), 1 mismatch, 2 usage or
input errors.
"""
from __future__ import annotations

import argparse
import sys as _sys

from .constructions import (compare, compile_machine,
                            compile_tpv_to_pbrm, round_trip, run_system)
from .dsl import parse_machine, parse_system, print_machine, print_system
from .ptpv import PtpvSystem
from .regmach import machine_enumerate
from .render import emit_dot, format_trace
from .search import SearchBudget
from .tpv import Mode, Strategy


def _read(path):
    if path == "-":
        return _sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _vectors(res, out):
    for v in res.vectors:
        out.write(" ".join(map(str, v)) + "\n")


def cmd_run_machine(a, out):
    p = parse_machine(_read(a.program))
    res = machine_enumerate(p, SearchBudget(a.max_steps, a.max_sum, a.max_states),
                            workers=a.workers)
    _vectors(res, out)
    out.write(res.footer() + "\n")
    return 0


def cmd_run_system(a, out):
    s = parse_system(_read(a.system))
    res = run_system(s, a.mode, Strategy.parse(a.strategy),
                     SearchBudget(a.max_steps, a.max_size, a.max_states),
                     workers=a.workers, keep_witnesses=a.trace)
    _vectors(res, out)
    if a.trace:
        for v in res.vectors:
            out.write(f"# witness {' '.join(map(str, v))}\n")
            for line in format_trace(s, a.mode, res.witnesses[v]):
                out.write(line + "\n")
    out.write(res.footer() + "\n")
    return 0


def cmd_compile(a, out):
    if a.construction == "thm4":
        s = parse_system(_read(a.input))
        if isinstance(s, PtpvSystem):
            raise ValueError("the machine compiler takes a non-polarized system")
        text = print_machine(compile_tpv_to_pbrm(s))
    else:
        text = print_system(compile_machine(a.construction, parse_machine(_read(a.input)),
                                            a.strategy))
    if a.out == "-":
        out.write(text)
    else:
        with open(a.out, "w", encoding="utf-8") as f:
            f.write(text)
    return 0


def _diff(missing, extra, out):
    for v in sorted(missing):
        out.write("- " + " ".join(map(str, v)) + "\n")
    for v in sorted(extra):
        out.write("+ " + " ".join(map(str, v)) + "\n")


def cmd_compare(a, out):
    if a.construction == "thm4":
        if not a.system or a.max_steps is None or a.max_size is None:
            raise ValueError("thm4 compare needs --system, --max-steps and --max-size")
        s = parse_system(_read(a.system))
        sys_res, m_res = round_trip(s, SearchBudget(a.max_steps, a.max_size, a.max_states),
                                    workers=a.workers)
        _diff(m_res.as_set() - sys_res.as_set(), sys_res.as_set() - m_res.as_set(), out)
        out.write(f"# system {sys_res.footer()[2:]}\n# machine {m_res.footer()[2:]}\n")
        return 0 if sys_res.as_set() == m_res.as_set() else 1
    if not a.machine or a.machine_steps is None:
        raise ValueError(f"{a.construction} compare needs --machine and --machine-steps")
    p = parse_machine(_read(a.machine))
    budget = SearchBudget(a.machine_steps,
                          a.max_sum if a.max_sum is not None else max(a.machine_steps, 1),
                          a.max_states)
    c = compare(a.construction, p, budget, a.strategy, workers=a.workers)
    _diff(c.missing, c.extra, out)
    for v in sorted(c.machine.as_set() - c.system.as_set() - c.missing):
        out.write("- " + " ".join(map(str, v)) + "\n")
    out.write(f"# system {c.system.footer()[2:]}\n# oracle {c.oracle.footer()[2:]}\n")
    return 0 if c.ok else 1


def cmd_graph(a, out):
    out.write(emit_dot(parse_system(_read(a.system))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tpvsim", description="Vesicle P system and register machine toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--max-states", type=int, default=1_000_000)
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("run-machine", help="enumerate a register machine's outputs")
    p.add_argument("--program", required=True)
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--max-sum", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_run_machine)

    p = sub.add_parser("run-system", help="enumerate a vesicle system's outputs")
    p.add_argument("--system", required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], required=True)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], required=True)
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--trace", action="store_true")
    common(p)
    p.set_defaults(func=cmd_run_system)

    p = sub.add_parser("compile", help="translate a machine into a system or back")
    p.add_argument("--construction", choices=["thm1", "thm2", "thm4", "thm5"], required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--strategy", choices=[s.value for s in Strategy])
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("compare", help="check a construction against the machine oracle")
    p.add_argument("--construction", choices=["thm1", "thm2", "thm4", "thm5"], required=True)
    p.add_argument("--machine")
    p.add_argument("--machine-steps", type=int)
    p.add_argument("--max-sum", type=int)
    p.add_argument("--system", help="input system for thm4")
    p.add_argument("--max-steps", type=int, help="system step budget for thm4")
    p.add_argument("--max-size", type=int, help="system size budget for thm4")
    p.add_argument("--strategy", choices=[s.value for s in Strategy])
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("graph", help="print the communication graph")
    p.add_argument("--system", required=True)
    p.add_argument("--dot", action="store_true", default=True)
    p.set_defaults(func=cmd_graph)
    return ap


def main(argv=None, out=None) -> int:
    out = out or _sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ValueError, OSError) as e:
        print(f"tpvsim: error: {e}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
