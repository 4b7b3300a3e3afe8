"""DOT export of communication graphs and replayable derivation traces."""
from __future__ import annotations

import re

from . import ptpv, tpv
from .errors import ParseError
from .multiset import Multiset
from .ptpv import PtpvSystem
from .tpv import Mode, TpvSystem, VesicleConfig, comm_graph

POL_MARK = {1: "⟨+⟩", 0: "⟨0⟩", -1: "⟨−⟩"}


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(sys: TpvSystem | PtpvSystem) -> str:
    """Graphviz text for the communication graph, in declaration order."""
    polarized = isinstance(sys, PtpvSystem)
    base = sys.base if polarized else sys
    undirected = polarized and not sys.directed
    lines = [("graph" if undirected else "digraph") + " tpv {"]
    for c in base.cells:
        label = f"{c} {POL_MARK[sys.pol.cell_pol[c]]}" if polarized else c
        attrs = ", peripheries=2" if c == base.output_cell else ""
        lines.append(f"  {_q(c)} [label={_q(label)}{attrs}];")
    if undirected:
        for a, b in sorted(tuple(sorted(e)) for e in sys.edges):
            lines.append(f"  {_q(a)} -- {_q(b)};")
    else:
        for a, b in comm_graph(base).edges:
            lines.append(f"  {_q(a)} -> {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _explain(sys, mode, cfg, nxt):
    if isinstance(sys, PtpvSystem):
        return [list(s) for s in ptpv.explain_step(sys, mode, cfg, nxt)]
    return [[r.mutation for r in s] for s in tpv.explain_step(sys, mode, cfg, nxt)]


def format_trace(sys, mode: Mode, path) -> list:
    """``step n: cell i {..} --[rules]--> cell j {..}`` for each step of ``path``."""
    out = []
    for n, (cfg, nxt) in enumerate(zip(path, path[1:]), 1):
        sets = _explain(sys, mode, cfg, nxt)
        rules = ", ".join(str(m) for m in sets[0]) if sets else "?"
        out.append(f"step {n}: {cfg} --[{rules}]--> {nxt}")
    return out


_STEP = re.compile(r"step (\d+): cell (\S+) \{([^}]*)\} --\[[^\]]*\]--> cell (\S+) \{([^}]*)\}$")


def parse_multiset(text: str) -> Multiset:
    counts = {}
    for item in text.split():
        sym, _, n = item.partition("*")
        counts[sym] = counts.get(sym, 0) + (int(n) if n else 1)
    return Multiset(counts)


def replay_trace(sys, mode: Mode, lines) -> list:
    """Re-check a trace against the successor relation; returns the configurations.

    Raises :class:`ParseError` on a malformed line, a broken chain, or a step the
    system cannot make.
    """
    base = sys.base if isinstance(sys, PtpvSystem) else sys
    succ = ((lambda c: ptpv.ptpv_successors(sys, mode, c)) if isinstance(sys, PtpvSystem)
            else (lambda c: tpv.tpv_successors(sys, mode, c)))
    path = [VesicleConfig(base.init_cell, base.init_multiset)]
    for n, line in enumerate(lines, 1):
        m = _STEP.match(line.strip())
        if not m:
            raise ParseError("not a trace line", n, 1, line)
        cfg = VesicleConfig(m.group(2), parse_multiset(m.group(3)))
        nxt = VesicleConfig(m.group(4), parse_multiset(m.group(5)))
        if int(m.group(1)) != n or cfg != path[-1]:
            raise ParseError("trace does not continue the previous step", n, 1, line)
        if nxt not in succ(cfg):
            raise ParseError("step is not a successor", n, 1, line)
        path.append(nxt)
    return path
