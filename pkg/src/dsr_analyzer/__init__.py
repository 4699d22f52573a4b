"""Qualitative injectivity analysis of interaction networks via DSR graphs."""

from .cyclecheck import (Cycle, CycleClass, StarResult, check_condition_star, classify,
                         enumerate_cycles, s_to_r_intersection)
from .dsrgraph import DsrEdge, DsrGraph, Direction, build_dsr, build_sr, export_dot
from .netmodel import NetworkModel, ParseError, compile_to_matrices, parse_network, render
from .qualmat import QualEntry, QualMatrix, Sign, MinorSign, is_P0_minus, qual_minor_sign
from .verdict import AnalysisOptions, Report, analyze, check_genlem, lint_motifs, report_to_json

__version__ = "0.1.0"

__all__ = [
    "AnalysisOptions", "Cycle", "CycleClass", "Direction", "DsrEdge", "DsrGraph", "MinorSign",
    "NetworkModel", "ParseError", "QualEntry", "QualMatrix", "Report", "Sign", "StarResult",
    "analyze", "build_dsr", "build_sr", "check_condition_star", "check_genlem", "classify",
    "compile_to_matrices", "enumerate_cycles", "export_dot", "is_P0_minus", "lint_motifs",
    "parse_network", "qual_minor_sign", "render", "report_to_json", "s_to_r_intersection",
]
