"""schemamine: hyperparameter schema mining from numpydoc docstrings."""

from .diagnostics import Diagnostics
from .numpydoc_parser import ArgDoc, Section, parse_parameters, split_sections
from .refiner import ObservationSet, Overrides, RefinerConfig, refine
from .schema_assembler import OperatorSchemas, assemble, mine_operator
from .source_extractor import ClassDoc, Literal, SourceFile, scan_source
from .type_cnl import ParsedShortDesc, ParseFailure, lower_type, parse_short_desc, tokenize

__version__ = "0.1.0"

__all__ = [
    "ArgDoc",
    "ClassDoc",
    "Diagnostics",
    "Literal",
    "ObservationSet",
    "OperatorSchemas",
    "Overrides",
    "ParseFailure",
    "ParsedShortDesc",
    "RefinerConfig",
    "Section",
    "SourceFile",
    "assemble",
    "lower_type",
    "mine_operator",
    "parse_parameters",
    "parse_short_desc",
    "refine",
    "scan_source",
    "split_sections",
    "tokenize",
    "__version__",
]
