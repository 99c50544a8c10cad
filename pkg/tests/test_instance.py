import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chargesweep.instance import (Instance, InstanceError, ParseError, full_view,
                                  induced_subgraph, load, require_valid, save, validate)


def square(sensors=2, tt=10.0, tc=20.0):
    return Instance.from_coordinates([(0, 0), (4, 0), (4, 3)], [(0, 3)], speed=1.0,
                                     sweep_period=tt, charge_period=tc, sensors=sensors)


def test_node_layout_and_params():
    inst = square()
    assert inst.n_nodes == 4
    assert inst.charger_node(0) == 3
    with pytest.raises(InstanceError):
        inst.charger_node(1)
    p = inst.params
    assert p.sweep_length == 10 and p.charge_length == 20
    assert p.q == 2 and p.q_hat is None and p.charge_ge_sweep


def test_q_hat_when_sweep_period_longer():
    p = square(tt=30.0, tc=10.0).params
    assert p.q is None and p.q_hat == 3 and not p.charge_ge_sweep


@pytest.mark.parametrize("tt,tc", [(10.0, 15.0), (15.0, 10.0), (10.0, 9.0)])
def test_non_integer_ratio_rejected(tt, tc):
    inst = square(tt=tt, tc=tc)
    assert "multiplicity" in validate(inst).codes()
    with pytest.raises(InstanceError):
        require_valid(inst)


def test_valid_euclidean_instance():
    assert validate(square()).ok


def test_matrix_violations_reported():
    d = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
    inst = Instance.from_matrix(d, 2, speed=1, sweep_period=1, charge_period=1, sensors=1)
    report = validate(inst)
    assert "triangle" in report.codes()
    assert any(v.nodes == (0, 2, 1) for v in report.violations)

    d = np.array([[0, 1], [2, 0]], dtype=float)
    inst = Instance.from_matrix(d, 1, speed=1, sweep_period=1, charge_period=1, sensors=1)
    assert "asymmetric" in validate(inst).codes()

    d = np.array([[1, 1], [1, 0]], dtype=float)
    inst = Instance.from_matrix(d, 1, speed=1, sweep_period=1, charge_period=1, sensors=1)
    assert "diagonal" in validate(inst).codes()


def test_counts_and_positive_parameters():
    inst = Instance.from_coordinates([], [(0, 0)], speed=0.0, sweep_period=1,
                                     charge_period=1, sensors=0)
    codes = validate(inst).codes()
    assert {"count", "nonpositive"} <= codes
    # an empty target set is allowed where the caller opts in
    ok = Instance.from_coordinates([], [(0, 0)], speed=1, sweep_period=1,
                                   charge_period=1, sensors=1)
    require_valid(ok, allow_no_targets=True)
    with pytest.raises(InstanceError):
        require_valid(ok)


def test_colocated_target_is_only_a_note():
    inst = Instance.from_coordinates([(0, 0)], [(0, 0)], speed=1, sweep_period=1,
                                     charge_period=1, sensors=1)
    report = validate(inst)
    assert report.ok
    assert [n.code for n in report.notes] == ["colocated"]


def test_induced_subgraph():
    inst = square()
    view = induced_subgraph(inst, [2, 0, 2])
    assert view.targets == (0, 2)
    assert view.without([0]).targets == (2,)
    assert len(full_view(inst)) == 3
    assert view.dist(0, 3) == pytest.approx(3.0)
    with pytest.raises(InstanceError):
        induced_subgraph(inst, [5])


def test_round_trip_coordinates_and_matrix():
    inst = square()
    assert load(save(inst)) == inst
    assert "dist" not in json.loads(save(inst))
    d = np.array([[0, 2, 3], [2, 0, 2], [3, 2, 0]], dtype=float)
    m = Instance.from_matrix(d, 2, speed=2, sweep_period=5, charge_period=10, sensors=3)
    doc = json.loads(save(m))
    assert doc["dist"] == d.tolist()
    assert load(save(m)) == m


@pytest.mark.parametrize("doc,path", [
    ("[]", "$"),
    ("{", "$"),
    ('{"targets": []}', "chargers"),
    ('{"targets": [], "chargers": [{"id": 0}], "speed": "fast", "sweep_period": 1,'
     ' "charge_period": 1, "sensors": 1}', "speed"),
    ('{"targets": [{"id": 1}], "chargers": [{"id": 0, "x": 0, "y": 0}], "speed": 1,'
     ' "sweep_period": 1, "charge_period": 1, "sensors": 1}', "targets"),
    ('{"targets": [{"id": 0}], "chargers": [{"id": 0}], "speed": 1,'
     ' "sweep_period": 1, "charge_period": 1, "sensors": 1}', "dist"),
    ('{"targets": [{"id": 0}], "chargers": [{"id": 0}], "speed": 1,'
     ' "sweep_period": 1, "charge_period": 1, "sensors": 1, "dist": [[0, -1], [1, 0]]}',
     "dist[0][1]"),
    ('{"targets": [], "chargers": [{"id": 0, "x": 0, "y": 0}], "speed": 1,'
     ' "sweep_period": 1, "charge_period": 1, "sensors": 1.5}', "sensors"),
])
def test_parse_errors_name_the_field(doc, path):
    with pytest.raises(ParseError) as exc:
        load(doc)
    assert exc.value.path == path


coord = st.floats(-50, 50, allow_nan=False, width=32)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=1, max_size=6),
       st.lists(st.tuples(coord, coord), min_size=1, max_size=2),
       st.integers(1, 4), st.integers(1, 3), st.booleans())
def test_euclidean_instances_validate(targets, chargers, m, ratio, longer_charge):
    tt, tc = (1.0, float(ratio)) if longer_charge else (float(ratio + 1), 1.0)
    inst = Instance.from_coordinates(targets, chargers, speed=1.0, sweep_period=tt,
                                     charge_period=tc, sensors=m)
    assert validate(inst).ok
    assert load(save(inst)) == inst
