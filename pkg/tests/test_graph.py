import json

import numpy as np
import pytest

from chanspec import presets
from chanspec.errors import CapExceeded, SpecError
from chanspec.graph import ChannelSpec, GraphSpec, assemble, decompose, from_dense_matrix, parse_spec

H2K1_JSON = {
    "name": "h2k1",
    "junctions": [{"id": "J"}],
    "junction_edges": [{"from": "J", "to": "J", "weight": [5, 0]}],
    "channels": [
        {"from": "J", "to": "J", "e": 1, "alpha": [2, 0], "beta": [2, 0]},
        {"from": "J", "to": "J", "e": 1, "alpha": [-1, 0], "beta": [3, 0]},
    ],
}


def test_parse_matches_preset():
    assert parse_spec(json.dumps(H2K1_JSON)) == presets.h2k1()


def test_json_round_trip_for_every_graph_preset():
    for p in presets.PRESETS.values():
        if p.kind == "graph":
            spec = p.graph()
            assert parse_spec(json.dumps(spec.to_json())) == spec


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d["junctions"].append({"id": "J"}), "duplicate junction id"),
        (lambda d: d["channels"][0].update({"to": "K"}), "dangling endpoint"),
        (lambda d: d["channels"][0].update({"beta": [0, 0]}), "zero channel weight"),
        (lambda d: d["channels"][0].update({"e": 0}), "schema violation"),
        (lambda d: d.pop("channels"), "schema violation"),
    ],
)
def test_invalid_specs(mutate, message):
    doc = json.loads(json.dumps(H2K1_JSON))
    mutate(doc)
    with pytest.raises(SpecError, match=message):
        parse_spec(doc)


def test_non_irreducible_graph_is_rejected():
    with pytest.raises(SpecError, match="non-irreducible"):
        GraphSpec.build(["a", "b"], {}, [ChannelSpec("a", "b", 1, 0, 1)])


def test_bad_json_text():
    with pytest.raises(SpecError, match="invalid JSON"):
        parse_spec("{not json")


def test_assembly_layout_and_entries():
    spec = presets.h2k1()
    m = assemble(spec, 3)
    assert m.dimension == 7 == spec.dimension(3)
    a = m.dense()
    # channel 1 occupies rows 0..2, channel 2 rows 3..5, junction row 6
    assert np.allclose(np.diag(a), [2, 2, 2, -1, -1, -1, 5])
    assert a[0, 1] == 2 and a[2, 6] == 2 and a[6, 0] == 2
    assert a[3, 4] == 3 and a[5, 6] == 3 and a[6, 3] == 3
    assert np.count_nonzero(a) == 7 + 2 * 2 + 2 * 2
    assert m.trace().to_complex() == 3 * 2 - 3 + 5


def test_lengthened_channel_respects_base_length():
    spec = GraphSpec.build(["J"], {("J", "J"): 1}, [ChannelSpec("J", "J", 3, 0, 1)])
    assert assemble(spec, 4).dimension == 13


def test_dimension_cap():
    with pytest.raises(CapExceeded):
        assemble(presets.h2k1(), 1000, cap=100)


def test_decomposition_blocks():
    dec = decompose(presets.three())
    assert dec.h == 3 and dec.k == 2
    assert dec.junctions == (("u", "w"), ("v",))
    assert decompose(presets.h2k2()).k == 2
    assert decompose(presets.h2k2(0.01)).k == 1


def test_from_dense_matrix_recovers_channels():
    a = assemble(presets.h3k1(), 4).dense()
    a[np.abs(a) > 0] = 1
    np.fill_diagonal(a, 0)
    spec = from_dense_matrix(a)
    assert spec.h == 3 and [c.e for c in spec.channels] == [4, 4, 4]
    assert len(spec.junction_vertices) == 1
    assert assemble(spec, 1).dimension == a.shape[0]


def test_from_dense_matrix_bare_cycle():
    a = np.roll(np.eye(5), 1, axis=1)
    spec = from_dense_matrix(a)
    assert spec.h == 1 and spec.channels[0].e == 4


def test_from_dense_matrix_rejects_weights():
    with pytest.raises(SpecError):
        from_dense_matrix(np.array([[0, 2], [1, 0]]))
