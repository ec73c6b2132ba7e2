"""Conjugate nets, Levy transformations and their multi-Wronskian closed form."""

from .expr import FLOAT, EvalMode, ExpPoly, Point, RationalExpr, evaluate, is_zero
from .levy import levy_sequence, levy_step
from .netcore import NetState, SeedRecord, make_background, net_from_document
from .parser import format_expr, parse_expr
from .wronski import Partition, TransformedNet, bordered, closed_form, multi_wronskian, wronski_block

__version__ = "0.1.0"

__all__ = [
    "FLOAT",
    "EvalMode",
    "ExpPoly",
    "Point",
    "RationalExpr",
    "evaluate",
    "is_zero",
    "levy_step",
    "levy_sequence",
    "NetState",
    "SeedRecord",
    "make_background",
    "net_from_document",
    "parse_expr",
    "format_expr",
    "Partition",
    "TransformedNet",
    "bordered",
    "closed_form",
    "multi_wronskian",
    "wronski_block",
]
