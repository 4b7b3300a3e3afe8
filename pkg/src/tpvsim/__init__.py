"""Simulators, compilers and bounded oracles for tissue P systems on vesicles."""
from .constructions import (BUDGET_MAPS, BudgetMap, Comparison, compare, compile_machine,
                            compile_pbrm_to_pv_sequ, compile_rm_to_pv_smax,
                            compile_rm_to_uptpv, compile_tpv_to_pbrm, matched_budgets,
                            round_trip, run_system)
from .dsl import parse_machine, parse_system, print_machine, print_system
from .errors import ContractError, ParseError, ValidationError
from .multiset import Multiset, Mutation, PolarizationTable, delete, insert, substitute
from .ptpv import PtpvSystem, ptpv_enumerate
from .regmach import (HALT, Instruction, MachineConfig, MachineProgram, add,
                      machine_enumerate, sub, sub_blind)
from .render import emit_dot, format_trace, replay_trace
from .search import ResultSet, SearchBudget
from .tpv import Mode, Strategy, TpvRule, TpvSystem, VesicleConfig, tpv_enumerate

__all__ = [n for n in dir() if not n.startswith("_")]
