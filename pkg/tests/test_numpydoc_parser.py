from hypothesis import given, strategies as st

from schemamine.diagnostics import Diagnostics
from schemamine.numpydoc_parser import (
    first_sentence,
    parse_parameters,
    split_sections,
)
from schemamine.source_extractor import SourceFile, scan_source

from fig2_expected import FIG2_SOURCE_PATH


def fig2_docstring() -> str:
    return scan_source(SourceFile.from_path(FIG2_SOURCE_PATH))[0].class_docstring


def test_split_sections_fig2():
    sections = split_sections(fig2_docstring())
    assert [s.title for s in sections] == ["Other", "Parameters"]
    assert sections[0].lines[0] == "Logistic Regression classifier."
    args = parse_parameters(sections[1])
    assert [a.name for a in args] == ["solver", "penalty", "C"]


def test_split_sections_empty_string():
    sections = split_sections("")
    assert len(sections) == 1
    assert sections[0].title == "Other"
    assert sections[0].lines == [""]


def test_split_sections_returns_only():
    sections = split_sections("Returns\n-------")
    assert [s.title for s in sections] == ["Other", "Returns"]


def test_split_sections_unknown_title_preserved():
    sections = split_sections("summary\n\nExamples\n--------\nsome code\n")
    assert [s.title for s in sections] == ["Other", "Other"]
    assert sections[1].raw_title == "Examples"
    assert sections[1].lines == ["some code", ""]


def test_parse_parameters_fig2_entries():
    sections = split_sections(fig2_docstring())
    args = parse_parameters(sections[1])
    solver, penalty, c = args
    assert solver.short_desc == \
        "str, {'linear', 'sag', 'lbfgs'}, optional (default='linear')."
    assert "- Solvers 'sag' and 'lbfgs' support only l2." in solver.long_desc
    assert penalty.short_desc == "str, 'l1' or 'l2', default: 'l2'"
    assert c.short_desc == "float, default: 1.0"
    assert c.long_desc.startswith("Inverse regularization strength;")


def test_header_continuation_joined():
    doc = (
        "Parameters\n"
        "----------\n"
        "max_features: int, float, string or None, optional \\\n"
        "    (default=None)\n"
        "    The number of features.\n"
    )
    args = parse_parameters(split_sections(doc)[1])
    assert args[0].name == "max_features"
    assert args[0].short_desc == \
        "int, float, string or None, optional (default=None)"
    assert args[0].long_desc == "The number of features."


def test_entry_without_body():
    doc = "Parameters\n----------\nx : int\n"
    args = parse_parameters(split_sections(doc)[1])
    assert args[0].long_desc == ""


def test_entry_name_colon_no_space():
    doc = "Parameters\n----------\ncriterion: string, optional\n    Quality.\n"
    args = parse_parameters(split_sections(doc)[1])
    assert args[0].name == "criterion"
    assert args[0].short_desc == "string, optional"


def test_malformed_entry_reported_others_kept():
    diags = Diagnostics()
    doc = (
        "Parameters\n"
        "----------\n"
        "good : int\n"
        "    Fine.\n"
        "this line has no colon\n"
        "also_good : float\n"
    )
    args = parse_parameters(split_sections(doc)[1], diags)
    assert [a.name for a in args] == ["good", "also_good"]
    assert diags.count("malformed_entry") == 1


def test_duplicate_entry_reported():
    diags = Diagnostics()
    doc = "Parameters\n----------\nx : int\nx : float\n"
    args = parse_parameters(split_sections(doc)[1], diags)
    assert [a.name for a in args] == ["x"]
    assert args[0].short_desc == "int"
    assert diags.count("malformed_entry") == 1


def test_tabs_expanded_before_indentation():
    doc = "Parameters\n----------\nx : int\n\tTab-indented body.\n"
    args = parse_parameters(split_sections(doc)[1])
    assert args[0].long_desc == "Tab-indented body."


def test_reconstruction_modulo_headers():
    doc = fig2_docstring()
    sections = split_sections(doc)
    rebuilt: list[str] = []
    original = doc.expandtabs(4).split("\n")
    for section in sections:
        if section.raw_title is not None:
            # header and underline were consumed; re-align using original
            idx = len(rebuilt)
            rebuilt.append(original[idx])
            rebuilt.append(original[idx + 1])
        rebuilt.extend(section.lines)
    assert rebuilt == original


@given(st.text(max_size=400))
def test_split_sections_total_and_lossless_linecount(text):
    sections = split_sections(text)
    assert sections
    kept = sum(len(s.lines) for s in sections)
    consumed = sum(2 for s in sections if s.raw_title is not None)
    assert kept + consumed == len(text.expandtabs(4).split("\n"))


def test_first_sentence_rules():
    assert first_sentence("Algorithm for optimization.\n- Solvers 'sag'.") == \
        "Algorithm for optimization."
    assert first_sentence("Inverse regularization strength;\nmust be positive.") == \
        "Inverse regularization strength."
    assert first_sentence("No terminator here") == "No terminator here"
    assert first_sentence("") == ""
