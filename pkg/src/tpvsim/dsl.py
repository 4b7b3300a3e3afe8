"""Line-oriented text formats for machines and systems, with canonical printers.

Machine files::

    registers 2
    outputs 1
    kind general            # or: blind
    init l0
    l0: ADD 1 l0 l1
    l1: SUB 2 l2 l3         # blind programs: l1: SUB 2 l2
    l3: HALT

System files (``#`` starts a comment only at the beginning of a line, since
``#`` is a legal symbol)::

    kind tpv                # tpv | ptpv | uptpv, inferred when absent
    cells 0 h
    alphabet p a #          # polarized: p+:+1 p-:-1 (default 0)
    terminals a
    output h
    init 0 { p a*2 }
    cellpol 0 0             # polarized systems only
    edge 0 h                # undirected systems only
    rule 0 : + a -> @h      # insertion
    rule 0 : a - -> @h      # deletion
    rule 0 : p => a @h      # substitution; undirected files omit "@target"
"""
from __future__ import annotations

import re

from .errors import ParseError, ValidationError
from .multiset import Kind, Multiset, PolarizationTable, delete, insert, substitute
from .ptpv import PtpvSystem
from .regmach import HALT, Instruction, MachineProgram, Op, add, sub, sub_blind
from .tpv import TpvRule, TpvSystem

RESERVED = {":", "+", "-", "->", "=>", "{", "}", "@"}
_TOKEN = re.compile(r"\S+")


def _tokens(line):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _lines(text, inline_comments):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw
        if inline_comments and "#" in line:
            line = line[:line.index("#")]
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield n, _tokens(line)


def _int(tok, n, col, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected {what}", n, col, tok) from None


# ---------------------------------------------------------------- machines

def parse_machine(text: str) -> MachineProgram:
    header, body = {}, []
    for n, toks in _lines(text, inline_comments=True):
        word, col = toks[0]
        if word in ("registers", "outputs", "kind", "init"):
            if len(toks) != 2:
                raise ParseError(f"'{word}' takes one value", n, col, word)
            if word in header:
                raise ParseError(f"repeated '{word}' header", n, col, word)
            header[word] = (toks[1][0], n, toks[1][1])
        else:
            body.append((n, toks))
    for need in ("registers", "outputs"):
        if need not in header:
            raise ParseError(f"missing '{need}' header")
    m = _int(*header["registers"], "a register count")
    k = _int(*header["outputs"], "an output count")
    kind = header.get("kind", ("general", 0, 0))
    if kind[0] not in ("general", "blind"):
        raise ParseError("kind must be 'general' or 'blind'", kind[1], kind[2], kind[0])
    blind = kind[0] == "blind"

    code = {}
    for n, toks in body:
        first, col = toks[0]
        if first.endswith(":") and len(first) > 1:
            label, rest = first[:-1], toks[1:]
        elif len(toks) > 1 and toks[1][0] == ":":
            label, rest = first, toks[2:]
        else:
            raise ParseError("expected '<label>: <instruction>'", n, col, first)
        if not rest:
            raise ParseError("missing instruction", n, col, first)
        op, ocol = rest[0]
        args = [t for t, _ in rest[1:]]
        if op == "HALT":
            if args:
                raise ParseError("HALT takes no operands", n, rest[1][1], args[0])
            ins = HALT
        elif op in ("ADD", "SUB"):
            if not args:
                raise ParseError(f"{op} needs a register", n, ocol, op)
            r = _int(args[0], n, rest[1][1], "a register index")
            if not 1 <= r <= m:
                raise ParseError(f"unknown register {r} (machine has {m})", n, rest[1][1], args[0])
            targets = args[1:]
            if op == "ADD":
                if len(targets) not in (1, 2):
                    raise ParseError("ADD takes one or two successor labels", n, ocol, op)
                ins = add(r, *targets)
            elif blind:
                if len(targets) != 1:
                    raise ParseError("SUB in a blind machine takes one successor label", n, ocol, op)
                ins = sub_blind(r, targets[0])
            else:
                if len(targets) != 2:
                    raise ParseError("SUB in a general machine takes two successor labels", n, ocol, op)
                ins = sub(r, *targets)
        else:
            raise ParseError("unknown instruction", n, ocol, op)
        code.setdefault(label, []).append(ins)
    if not code:
        raise ParseError("program has no instructions")
    init = header["init"][0] if "init" in header else next(iter(code))
    return MachineProgram(m, k, {l: tuple(i) for l, i in code.items()}, init, blind=blind)


def format_instruction(i: Instruction) -> str:
    if i.op is Op.HALT:
        return "HALT"
    if i.op is Op.SUB_BLIND:
        return f"SUB {i.register} {i.next1}"
    return f"{i.op.value} {i.register} {i.next1} {i.next2}"


def print_machine(p: MachineProgram) -> str:
    lines = [f"registers {p.registers}", f"outputs {p.outputs}", f"kind {p.kind}", f"init {p.init}"]
    lines += [f"{label}: {format_instruction(i)}" for label, i in p.instructions()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- systems

def _check_name(tok, n, col, symbol):
    bad = "{}@*:" if symbol else "{}@"
    if tok in RESERVED or any(ch in tok for ch in bad):
        raise ParseError(f"illegal {'symbol' if symbol else 'cell'} name", n, col, tok)


def _pol(text, n, col, tok):
    if text not in ("-1", "0", "+1", "1", "+0", "-0"):
        raise ParseError("polarization must be -1, 0 or +1", n, col, tok)
    return int(text)


def _parse_multiset(toks, n, alphabet):
    text = " ".join(t for t, _ in toks)
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError("expected '{ ... }'", n, toks[0][1] if toks else 0, text)
    counts = {}
    for item in text[1:-1].split():
        sym, _, times = item.partition("*")
        if sym not in alphabet:
            raise ParseError("symbol not in alphabet", n, toks[0][1], sym)
        counts[sym] = counts.get(sym, 0) + (_int(times, n, toks[0][1], "a count") if times else 1)
    return Multiset(counts)


def _parse_rule(toks, n, cells, alphabet, undirected):
    def cell(tok, col):
        if tok not in cells:
            raise ParseError("unknown cell", n, col, tok)
        return tok

    def sym(tok, col):
        if tok not in alphabet:
            raise ParseError("symbol not in alphabet", n, col, tok)
        return tok

    if len(toks) < 4 or toks[2][0] != ":":
        raise ParseError("expected 'rule <cell> : ...'", n, toks[0][1], toks[0][0])
    src = cell(*toks[1])
    body = toks[3:]
    words = [t for t, _ in body]
    target = None
    if words and words[-1].startswith("@"):
        if undirected:
            raise ParseError("rules of an undirected system take no target", n, body[-1][1], words[-1])
        target = cell(words[-1][1:], body[-1][1])
        body, words = body[:-1], words[:-1]
    elif not undirected:
        raise ParseError("missing '@<target>'", n, toks[-1][1], toks[-1][0])
    if len(words) >= 2 and words[0] == "+":
        if words[2:] not in ([], ["->"]) or (words[2:] == [] and target is not None):
            raise ParseError("insertion is written '+ <b> -> @<cell>'", n, body[0][1], words[0])
        mut = insert(sym(*body[1]))
    elif len(words) >= 2 and words[1] == "-":
        if words[2:] not in ([], ["->"]) or (words[2:] == [] and target is not None):
            raise ParseError("deletion is written '<a> - -> @<cell>'", n, body[0][1], words[0])
        mut = delete(sym(*body[0]))
    elif len(words) == 3 and words[1] == "=>":
        mut = substitute(sym(*body[0]), sym(*body[2]))
    else:
        raise ParseError("unrecognized rule", n, body[0][1] if body else toks[0][1],
                         " ".join(words))
    return src, mut, target


def parse_system(text: str) -> TpvSystem | PtpvSystem:
    cells, alphabet, terminals, sym_pol = [], [], [], {}
    cell_pol, edges, rule_lines = {}, [], []
    output = init = kind = None
    for n, toks in _lines(text, inline_comments=False):
        word, col = toks[0]
        args = toks[1:]
        if word == "kind":
            if len(args) != 1 or args[0][0] not in ("tpv", "ptpv", "uptpv"):
                raise ParseError("kind must be tpv, ptpv or uptpv", n, col, word)
            kind = args[0][0]
        elif word == "cells":
            if not args:
                raise ParseError("empty 'cells' line", n, col, word)
            for t, c in args:
                _check_name(t, n, c, symbol=False)
                cells.append(t)
        elif word == "alphabet":
            if not args:
                raise ParseError("empty 'alphabet' line", n, col, word)
            for t, c in args:
                name, colon, p = t.rpartition(":")
                if not colon:
                    name, p = t, "0"
                _check_name(name, n, c, symbol=True)
                alphabet.append(name)
                sym_pol[name] = _pol(p, n, c, t)
        elif word == "terminals":
            for t, c in args:
                if t not in sym_pol:
                    raise ParseError("terminal not in alphabet", n, c, t)
                terminals.append(t)
        elif word == "output":
            if len(args) != 1:
                raise ParseError("'output' takes one cell", n, col, word)
            output = args[0]
        elif word == "init":
            if len(args) < 2:
                raise ParseError("expected 'init <cell> { ... }'", n, col, word)
            init = (args[0], args[1:], n)
        elif word == "cellpol":
            if len(args) != 2:
                raise ParseError("expected 'cellpol <cell> <pol>'", n, col, word)
            cell_pol[args[0][0]] = (_pol(args[1][0], n, args[1][1], args[1][0]), n, args[0][1])
        elif word == "edge":
            if len(args) != 2:
                raise ParseError("expected 'edge <cell> <cell>'", n, col, word)
            edges.append((args[0], args[1], n))
        elif word == "rule":
            rule_lines.append((n, toks))
        else:
            raise ParseError("unknown keyword", n, col, word)

    if not cells:
        raise ParseError("missing 'cells' line")
    if not alphabet:
        raise ParseError("missing 'alphabet' line")
    if output is None or init is None:
        raise ParseError(f"missing '{'output' if output is None else 'init'}' line")
    cellset = set(cells)
    for (t, c), n in [(output, 0)] + [((init[0][0], init[0][1]), init[2])]:
        if t not in cellset:
            raise ParseError("unknown cell", n, c, t)
    for c, (_, n, col) in cell_pol.items():
        if c not in cellset:
            raise ParseError("unknown cell", n, col, c)
    if kind is None:
        kind = "uptpv" if edges else "ptpv" if cell_pol or any(sym_pol.values()) else "tpv"
    undirected = kind == "uptpv"
    if edges and not undirected:
        raise ParseError(f"'edge' lines are only allowed in uptpv systems", edges[0][2])
    if kind == "tpv" and (cell_pol or any(sym_pol.values())):
        raise ParseError("polarizations given for a non-polarized system")
    for a, b, n in edges:
        for t, c in (a, b):
            if t not in cellset:
                raise ParseError("unknown cell", n, c, t)

    V = set(alphabet)
    w0 = _parse_multiset(init[1], init[2], V)
    parsed = [_parse_rule(toks, n, cellset, V, undirected) for n, toks in rule_lines]
    common = dict(cells=cells, alphabet=alphabet, terminals=terminals,
                  init_cell=init[0][0], init_multiset=w0, output_cell=output[0])
    if kind == "tpv":
        return TpvSystem(rules=[TpvRule(s, m, t) for s, m, t in parsed], **common)
    for c in cells:
        if c not in cell_pol:
            raise ValidationError(f"cell {c!r} has no polarization")
    pol = PolarizationTable({c: p for c, (p, _, _) in cell_pol.items()}, sym_pol)
    if undirected:
        return PtpvSystem.undirected(free_rules=[(s, m) for s, m, _ in parsed], pol=pol,
                                     edges=[(a[0], b[0]) for a, b, _ in edges], **common)
    return PtpvSystem(TpvSystem(rules=[TpvRule(s, m, t) for s, m, t in parsed], **common), pol)


def format_mutation(m) -> str:
    if m.kind is Kind.INSERT:
        return f"+ {m.rhs} ->"
    if m.kind is Kind.DELETE:
        return f"{m.lhs} - ->"
    return f"{m.lhs} => {m.rhs}"


def _rule_line(cell, m, target=None):
    text = f"rule {cell} : {format_mutation(m)}"
    if target is None:
        return text.removesuffix(" ->")
    return f"{text} @{target}"


def _fmt_pol(p):
    return {1: "+1", 0: "0", -1: "-1"}[p]


def print_system(sys) -> str:
    polarized = isinstance(sys, PtpvSystem)
    base = sys.base if polarized else sys
    kind = "tpv" if not polarized else "ptpv" if sys.directed else "uptpv"
    if polarized:
        alpha = [s if sys.pol.sym_pol[s] == 0 else f"{s}:{_fmt_pol(sys.pol.sym_pol[s])}"
                 for s in base.alphabet]
    else:
        alpha = list(base.alphabet)
    lines = [f"kind {kind}", "cells " + " ".join(base.cells), "alphabet " + " ".join(alpha),
             ("terminals " + " ".join(base.terminals)).rstrip(),
             f"output {base.output_cell}",
             f"init {base.init_cell} {{ {' '.join(_ms_items(base.init_multiset))} }}".replace("{  }", "{ }")]
    if polarized:
        lines += [f"cellpol {c} {_fmt_pol(sys.pol.cell_pol[c])}" for c in base.cells]
        if not sys.directed:
            lines += [f"edge {a} {b}" for a, b in sorted(tuple(sorted(e)) for e in sys.edges)]
            lines += [_rule_line(c, m) for c, m in sys.free_rules]
            return "\n".join(lines) + "\n"
    lines += [_rule_line(r.source, r.mutation, r.target) for r in base.rules]
    return "\n".join(lines) + "\n"


def _ms_items(w):
    return [s if n == 1 else f"{s}*{n}" for s, n in w.items()]
