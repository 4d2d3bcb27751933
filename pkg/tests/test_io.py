import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mssc.core import make_instance, validate_instance
from mssc.exact import SetCoverInstance
from mssc.experiment import generate_instance
from mssc.io import ParseError, format_instance, format_setcover, parse_instance, parse_setcover


def test_format_is_the_documented_layout():
    inst = make_instance([2, 0, 1], [{1}, {0, 2}])
    assert format_instance(inst) == "mssc 1\nn 3 T 2\npi0 2 0 1\nreq 1 1\nreq 2 0 2\n"


def test_comments_and_blank_lines_are_ignored():
    text = "# hello\nmssc 1\n\n# mid\nn 2 T 1\npi0 1 0\n  # indented\nreq 1 0\n"
    assert parse_instance(text) == make_instance([1, 0], [{0}])


@settings(max_examples=50)
@given(st.integers(1, 8), st.integers(1, 6), st.integers(0, 10**6))
def test_round_trip(n, T, seed):
    inst = generate_instance(n, T, max(1, n // 2), "mixed", seed)
    text = format_instance(inst, "a comment")
    assert parse_instance(text) == inst
    assert format_instance(parse_instance(text), "a comment") == text


@pytest.mark.parametrize(
    "text",
    [
        "",
        "mssc 2\nn 1 T 0\npi0 0\n",
        "mssc 1\nn 2\npi0 0 1\n",
        "mssc 1\nn 2 T 1\npi0 0\nreq 1 0\n",
        "mssc 1\nn 2 T 1\npi0 0 1\nreq 2 0\n",
        "mssc 1\nn 2 T 2\npi0 0 1\nreq 1 0\n",
        "mssc 1\nn 2 T 1\npi0 0 1\nreq 1 x\n",
        "mssc 1\nn 2 T 1\npi0 0 1\nreq 2 0 0\n",
        "mssc 1\nn 2 T 1\npi0 0 0\nreq 1 0\n",
        "mssc 1\nn 2 T 1\npi0 0 1\nreq 1 5\n",
        "mssc 1\nn 2 T 1\npi0 0 1\nset 1 0\n",
        "mssc 1\nn 2 T 1\n",
    ],
)
def test_malformed_instances(text):
    with pytest.raises(ParseError):
        parse_instance(text)


def test_setcover_round_trip_and_errors():
    sc = SetCoverInstance(3, ({1, 2}, {3}))
    text = format_setcover(sc)
    assert text == "setcover 1\nelements 3 sets 2\nset 2 1 2\nset 1 3\n"
    assert parse_setcover(text) == sc
    for bad in ["setcover 1\nelements 3 sets 2\nset 1 1\n", "setcover 1\nelements 2 sets 1\nset 1 3\n",
                "setcover 1\nsets 1 elements 2\nset 1 1\n", "mssc 1\n"]:
        with pytest.raises(ParseError):
            parse_setcover(bad)


def test_generator_distributions():
    inst = generate_instance(5, 20, 2, "uniform-r", 1)
    assert all(len(r) == 2 for r in inst.requests)
    assert validate_instance(inst) == []
    mixed = generate_instance(6, 50, 3, "mixed", 2)
    sizes = {len(r) for r in mixed.requests}
    assert sizes <= {1, 2, 3} and len(sizes) > 1
    assert generate_instance(6, 5, 3, "mixed", 9) == generate_instance(6, 5, 3, "mixed", 9)


@pytest.mark.parametrize("args", [(3, 2, 4, "uniform-r"), (3, 0, 1, "mixed"), (3, 2, 1, "zipf"), (3, 2, 0, "mixed")])
def test_generator_rejects_bad_parameters(args):
    with pytest.raises(ValueError):
        generate_instance(*args, seed=0)
