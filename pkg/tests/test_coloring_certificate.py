import numpy as np
import pytest

from core.certificate import GOOD_COLORING, Certificate, decode_certificate, encode_certificate, make_meta
from core.coloring import RED, EdgeColoring, coloring_from_rows, decode_coloring, encode_coloring
from core.errors import GraphFormatError
from core.graph import perfect_matching


def test_color_classes_partition_the_host():
    c = coloring_from_rows([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    red, blue = c.color_class(0), c.color_class(1)
    assert red == perfect_matching(3)
    assert red.edge_count + blue.edge_count == 9
    left, right = c.red_degrees()
    assert list(left) == [1, 1, 1]
    assert list(right) == [1, 1, 1]


def test_from_red_graph_round_trip():
    red = perfect_matching(4)
    c = EdgeColoring.from_red_graph(red)
    assert c.color_class(RED) == red
    assert c.blue == 1


def test_matrix_is_frozen():
    c = EdgeColoring.constant(2, 2, 1)
    with pytest.raises(ValueError):
        c.matrix[0, 0] = 0


def test_restrict_takes_leading_sub_board():
    c = coloring_from_rows([[0, 1, 1], [1, 1, 0], [0, 0, 0]])
    assert c.restrict(2) == coloring_from_rows([[0, 1], [1, 1]])


def test_random_matching_coloring_has_one_red_edge_per_vertex():
    c = EdgeColoring.random_matching_coloring(6, np.random.default_rng(3))
    left, right = c.red_degrees()
    assert set(left.tolist()) == {1}
    assert set(right.tolist()) == {1}


def test_coloring_codec():
    c = coloring_from_rows([[0, 2], [1, 0]], num_colors=3)
    assert decode_coloring(encode_coloring(c)) == c


@pytest.mark.parametrize(
    "text,field",
    [
        ('{"n": 2, "colors": 2, "matrix": [[0, 1]]}', "matrix"),
        ('{"n": 2, "colors": 2, "matrix": [[0, 1], [1, 2]]}', "matrix[1][1]"),
        ('{"n": 1, "colors": 1, "matrix": [[0]]}', "colors"),
        ('{"n": 1, "colors": 2, "matrix": [[true]]}', "matrix[0][0]"),
    ],
)
def test_bad_coloring_names_field(text, field):
    with pytest.raises(GraphFormatError) as err:
        decode_coloring(text)
    assert err.value.field == field


def test_certificate_text_is_deterministic():
    meta = make_meta(seed=7)
    a = Certificate(GOOD_COLORING, ["x"], {"N": 1}, meta)
    b = Certificate(GOOD_COLORING, ["x"], {"N": 1}, dict(meta))
    assert encode_certificate(a) == encode_certificate(b)
    assert a.digest() == b.digest()
    assert decode_certificate(encode_certificate(a)).to_json() == a.to_json()


def test_stamp_adds_created_field():
    assert "created" not in make_meta()
    assert "created" in make_meta(stamp=True)


def test_unknown_kind_is_rejected():
    with pytest.raises(GraphFormatError) as err:
        decode_certificate('{"kind": "proof", "claims": [], "payload": {}}')
    assert err.value.field == "kind"
    with pytest.raises(ValueError):
        Certificate("proof", [], {})
