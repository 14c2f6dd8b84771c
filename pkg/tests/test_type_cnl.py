import pytest
from hypothesis import given, settings, strategies as st

from schemamine.type_cnl import (
    AnyOf,
    ArrayType,
    EnumType,
    ParseFailure,
    Prim,
    Shape,
    fragment_accepts,
    lower_type,
    parse_short_desc,
    tokenize,
)

from corpus import GRAMMAR_CORPUS


def test_tokenize_solver_line():
    toks = tokenize("str, {'linear', 'sag', 'lbfgs'}, optional (default='linear').")
    kinds = [(t.kind, t.text) for t in toks]
    assert kinds == [
        ("WORD", "str"), ("PUNCT", ","), ("PUNCT", "{"),
        ("QUOTED", "linear"), ("PUNCT", ","), ("QUOTED", "sag"),
        ("PUNCT", ","), ("QUOTED", "lbfgs"), ("PUNCT", "}"), ("PUNCT", ","),
        ("WORD", "optional"), ("PUNCT", "("), ("WORD", "default"),
        ("PUNCT", "="), ("QUOTED", "linear"), ("PUNCT", ")"), ("PUNCT", "."),
    ]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_c_line():
    toks = tokenize("float, default: 1.0")
    assert [(t.kind, t.text) for t in toks] == [
        ("WORD", "float"), ("PUNCT", ","), ("WORD", "default"),
        ("PUNCT", ":"), ("NUMBER", "1.0")]


def test_tokenize_noise_filtering():
    toks = tokenize("str \\\n 'a'")
    assert [(t.kind, t.text) for t in toks] == [("WORD", "str"), ("QUOTED", "a")]


def test_tokenize_numbers():
    texts = [t.text for t in tokenize("1e-3 -2.5 .5 +4 0.5.")]
    assert texts == ["1e-3", "-2.5", ".5", "+4", "0.5", "."]


@pytest.mark.parametrize("line,expected", GRAMMAR_CORPUS,
                         ids=[repr(line) for line, _ in GRAMMAR_CORPUS])
def test_grammar_corpus(line, expected):
    toks = tokenize(line)
    if expected is None:
        with pytest.raises(ParseFailure):
            parse_short_desc(toks)
        return
    parsed = parse_short_desc(toks)
    assert parsed.optional_flag == expected["optional"]
    assert lower_type(parsed) == expected["lower"]


def test_solver_folds_str_prefix_into_enum():
    parsed = parse_short_desc(tokenize(
        "str, {'linear', 'sag', 'lbfgs'}, optional (default='linear')."))
    assert isinstance(parsed.types, EnumType)
    assert [v.value for v in parsed.types.values] == ["linear", "sag", "lbfgs"]
    assert parsed.optional_flag is True
    assert parsed.default.value == "linear"


def test_max_features_union():
    parsed = parse_short_desc(tokenize(
        "int, float, string or None, optional (default=None)"))
    assert isinstance(parsed.types, AnyOf)
    kinds = [m.kind for m in parsed.types.members]
    assert kinds == ["integer", "number", "string", "none"]
    assert parsed.default.kind == "none"


def test_array_shape_derived():
    parsed = parse_short_desc(tokenize("array-like, shape = [n_samples]"))
    assert parsed.types == ArrayType(atype=("array-like",),
                                     shape=Shape(dims=("n_samples",)))


def test_parse_failure_carries_prefix_and_span():
    line = "float > 0"
    with pytest.raises(ParseFailure) as err:
        parse_short_desc(tokenize(line))
    assert err.value.consumed >= 1
    assert err.value.span is not None
    start, end = err.value.span
    assert 0 <= start < end <= len(line)


def test_lowering_examples():
    assert lower_type(parse_short_desc(tokenize("str, 'l1' or 'l2', default: 'l2'"))) \
        == {"enum": ["l1", "l2"], "default": "l2"}
    assert lower_type(parse_short_desc(tokenize("float, default: 1.0"))) \
        == {"type": "number", "default": 1.0}
    assert lower_type(parse_short_desc(tokenize("int or None"))) \
        == {"anyOf": [{"type": "integer"}, {"enum": [None]}]}


def test_anyof_never_nested():
    parsed = parse_short_desc(tokenize("int, float, string or None"))
    assert isinstance(parsed.types, AnyOf)
    assert all(not isinstance(m, AnyOf) for m in parsed.types.members)


def test_default_int_float_distinction():
    one = parse_short_desc(tokenize("float, default: 1.0")).default.value
    assert isinstance(one, float)
    three = parse_short_desc(tokenize("int, optional (default=3)")).default.value
    assert isinstance(three, int) and not isinstance(three, bool)


def test_unknown_word_not_guessed_as_object():
    # a lone class name is only an object when followed by "instance"
    with pytest.raises(ParseFailure):
        parse_short_desc(tokenize("RandomState"))


_TYPE_VOCAB = st.sampled_from([
    "int", "float", "str", "string", "bool", "None", "optional", "default",
    "{", "}", "(", ")", "[", "]", ",", ".", "|", "=", ":", "'a'", "'b'",
    "1.0", "3", "or", "of", "shape", "array", "list", "by", "instance",
])


@settings(max_examples=300, deadline=None)
@given(st.one_of(
    st.text(max_size=60),
    st.lists(_TYPE_VOCAB, max_size=12).map(" ".join),
))
def test_fuzz_never_crashes(line):
    toks = tokenize(line)
    try:
        parsed = parse_short_desc(toks)
    except ParseFailure:
        return
    frag = lower_type(parsed)
    assert isinstance(frag, dict)


def test_fragment_accepts():
    assert fragment_accepts({"enum": ["a", "b"]}, "a")
    assert not fragment_accepts({"enum": ["a", "b"]}, "warn")
    assert fragment_accepts({"type": "number"}, 1.0)
    assert fragment_accepts({"type": "number"}, 1)
    assert not fragment_accepts({"type": "number"}, True)
    assert not fragment_accepts({"type": "integer"}, 0.5)
    assert fragment_accepts({"anyOf": [{"type": "integer"}, {"enum": [None]}]}, None)
    assert not fragment_accepts({"anyOf": [{"type": "integer"}, {"enum": [None]}]}, "x")
    assert fragment_accepts({}, object())
