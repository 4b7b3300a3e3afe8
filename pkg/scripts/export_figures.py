"""Write DOT files for the two reference layouts.

    python scripts/export_figures.py [outdir]

star.dot: the hierarchical smax system for one output and two working
registers.  polarized.dot: the undirected polarized system for two registers.
"""
import sys
from pathlib import Path

from tpvsim.constructions import compile_rm_to_pv_smax, compile_rm_to_uptpv
from tpvsim.regmach import HALT, MachineProgram, add, sub
from tpvsim.render import emit_dot


def three_registers():
    code = {"l1": (add(1, "l2"),), "l2": (add(2, "l3"),), "l3": (add(3, "l4"),),
            "l4": (sub(2, "l5", "l5"),), "l5": (sub(3, "lh", "lh"),), "lh": (HALT,)}
    return MachineProgram(3, 1, code, "l1")


def two_registers():
    code = {"l1": (add(1, "l2"),), "l2": (add(2, "l3"),), "l3": (sub(1, "l4", "l4"),),
            "l4": (sub(2, "lh", "lh"),), "lh": (HALT,)}
    return MachineProgram(2, 1, code, "l1")


def main(outdir="figures"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "star.dot").write_text(emit_dot(compile_rm_to_pv_smax(three_registers())))
    (out / "polarized.dot").write_text(emit_dot(compile_rm_to_uptpv(two_registers())))
    print(f"wrote {out / 'star.dot'} and {out / 'polarized.dot'}")


if __name__ == "__main__":
    main(*sys.argv[1:])
