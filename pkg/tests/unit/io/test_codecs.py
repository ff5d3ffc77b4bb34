"""Test :mod:`bicap.io`."""

import json
import math
from pathlib import Path

import jax.numpy as jnp
import pytest

from bicap.bitree import ROOT2, Node1, Node2, NodeSet, TreeShape
from bicap.bridge import BidiscAtom
from bicap.capacity import capacity
from bicap.io import decode_node, dump_json, dumps, from_json, load_json, to_json
from bicap.potential import Measure, SparseFunction


class TestEncode:
    def test_deep_vertices_are_exact(self) -> None:
        node = Node1(10**30, 3)
        text = dumps(node)
        assert str(10**30) in text
        assert decode_node(json.loads(text)) == node

    def test_results_are_field_by_field(self) -> None:
        a = Node1(1, 0)
        res = capacity(TreeShape(1), [Node2(a, a)])
        record = to_json(res)
        assert set(record) == {"cap", "equilibrium", "gap", "iterations", "certified"}
        assert record["equilibrium"]["entries"] == [[[[1, 0], [1, 0]], pytest.approx(0.25)]]

    def test_infinities_are_strings(self) -> None:
        assert to_json(math.inf) == "inf"
        assert to_json({"x": [1.5, -math.inf]}) == {"x": [1.5, "-inf"]}

    def test_arrays_become_lists(self) -> None:
        assert to_json(jnp.array([1.0, 2.0])) == [1.0, 2.0]

    def test_atoms(self) -> None:
        atom = BidiscAtom((0.5, 1.0), (1.0, 0.0), 2.0)
        assert to_json(atom) == {"z1": [0.5, 1.0], "z2": [1.0, 0.0], "mass": 2.0}


class TestDecode:
    def test_nodeset(self) -> None:
        s = from_json(NodeSet, {"kind": "boundary", "nodes": [[[0, 0], [0, 0]]]})
        assert s.kind == "boundary"
        assert s.nodes == (ROOT2,)

    def test_kind_defaults_to_exact(self) -> None:
        assert from_json(NodeSet, {"nodes": [[1, 1]]}).kind == "exact"

    def test_sparse_maps(self) -> None:
        mu = Measure(TreeShape(2), {ROOT2: 0.5, Node2(Node1(2, 1), Node1(1, 0)): 0.25})
        back = from_json(Measure, json.loads(dumps(mu)))
        assert back.shape == mu.shape
        assert dict(back.atoms) == dict(mu.atoms)
        f = from_json(SparseFunction, to_json(mu))
        assert isinstance(f, SparseFunction)

    def test_atom_list(self) -> None:
        atoms = from_json(BidiscAtom, [{"z1": [1, 0], "z2": [0.5, 3.0], "mass": 1}])
        assert atoms == [BidiscAtom((1.0, 0.0), (0.5, 3.0), 1.0)]

    @pytest.mark.parametrize("obj", [[1, 2, 3], [1.5, 0], ["a", 0]])
    def test_bad_vertices(self, obj: list) -> None:
        with pytest.raises(ValueError, match="vertex"):
            decode_node(obj)


class TestFiles:
    def test_dump_and_load(self, tmp_path: Path) -> None:
        path = dump_json({"shape": TreeShape(3)}, tmp_path / "out.json")
        assert load_json(path) == {"shape": {"depth": 3, "ndim": 2}}
        assert path.read_text(encoding="utf-8").endswith("\n")
