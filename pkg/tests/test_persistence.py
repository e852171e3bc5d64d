import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topogate.persistence import (
    PersistenceDiagram,
    PersistencePair,
    load_diagram,
    save_diagram,
    sublevel_diagram,
)
from topogate.signal import MAXIMUM, MINIMUM, Signal, critical_points

from oracles import sweep_diagram


def diagram_of(values):
    return sublevel_diagram(Signal(values))


class TestWorkedExamples:
    def test_single_dip(self):
        d = diagram_of([1.0, 3.0, 0.0, 2.0])
        assert d.pairs.tolist() == [[1.0, 3.0]]
        assert d.essential_birth == 0.0

    def test_two_dips(self):
        d = diagram_of([2.0, 5.0, 0.0, 4.0, 1.0, 3.0])
        assert d.pairs.tolist() == [[1.0, 4.0], [2.0, 5.0]]
        assert d.essential_birth == 0.0

    def test_monotone_has_no_pairs(self):
        d = diagram_of([0.0, 1.0, 2.0, 3.0])
        assert len(d) == 0
        assert d.essential_birth == 0.0

    def test_plateau_ties(self):
        # the bridge at value 1 merges the two zero-born components
        d = diagram_of([0.0, 1.0, 1.0, 0.0])
        assert d.pairs.tolist() == [[0.0, 1.0]]
        assert d.essential_birth == 0.0


class TestOracleAgreement:
    @given(
        st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=30)
    )
    def test_matches_sweep_oracle(self, values):
        got = diagram_of(values)
        pairs, essential = sweep_diagram(values)
        assert np.array_equal(got.pairs, pairs)
        assert got.essential_birth == essential

    @given(st.lists(st.integers(0, 8), min_size=2, max_size=25))
    def test_matches_sweep_oracle_with_many_ties(self, values):
        values = [float(v) for v in values]
        got = diagram_of(values)
        pairs, essential = sweep_diagram(values)
        assert np.array_equal(got.pairs, pairs)
        assert got.essential_birth == essential


class TestInvariants:
    @given(st.lists(st.floats(0, 1, allow_nan=False), min_size=2, max_size=50))
    def test_pairs_sorted_and_positive_persistence(self, values):
        d = diagram_of(values)
        if len(d):
            assert np.all(d.deaths > d.births)
            keys = list(zip(d.births, d.deaths))
            assert keys == sorted(keys)

    @given(st.lists(st.floats(0, 1, allow_nan=False), min_size=2, max_size=50))
    def test_births_at_minima_deaths_at_maxima(self, values):
        s = Signal(values)
        d = sublevel_diagram(s)
        mins = {p.y for p in critical_points(s) if p.kind == MINIMUM}
        maxs = {p.y for p in critical_points(s) if p.kind == MAXIMUM}
        assert set(d.births) <= mins
        assert set(d.deaths) <= maxs

    @given(st.lists(st.floats(0, 1, allow_nan=False), min_size=2, max_size=50))
    def test_essential_is_global_min(self, values):
        d = diagram_of(values)
        assert d.essential_birth == min(values)

    @given(
        st.lists(st.floats(0, 1, allow_nan=False), min_size=2, max_size=30),
        st.integers(1, 5),
        st.integers(1, 5),
    )
    def test_endpoint_value_padding_leaves_pairs_unchanged(self, values, front, back):
        base = diagram_of(values)
        padded = [values[0]] * front + list(values) + [values[-1]] * back
        same = diagram_of(padded)
        assert np.array_equal(base.pairs, same.pairs)
        assert base.essential_birth == same.essential_birth

    @settings(max_examples=50)
    @given(st.integers(0, 10_000))
    def test_epsilon_stability(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 40))
        values = rng.permutation(n).astype(float)  # distinct, gap 1
        eps = 1e-9
        noise = rng.uniform(-eps, eps, size=n)
        base = diagram_of(values)
        moved = diagram_of(values + noise)
        assert len(base) == len(moved)
        if len(base):
            assert np.max(np.abs(base.pairs - moved.pairs)) <= eps + 1e-15


class TestDiagramType:
    def test_pair_list_and_properties(self):
        d = diagram_of([2.0, 5.0, 0.0, 4.0, 1.0, 3.0])
        assert d.pair_list() == [PersistencePair(1.0, 4.0), PersistencePair(2.0, 5.0)]
        assert d.pair_list()[0].persistence == 3.0
        assert np.array_equal(d.births, [1.0, 2.0])
        assert np.array_equal(d.deaths, [4.0, 5.0])

    def test_rejects_nonpositive_persistence(self):
        with pytest.raises(ValueError):
            PersistenceDiagram(pairs=np.array([[1.0, 1.0]]), essential_birth=0.0)

    def test_json_round_trip_is_exact(self, tmp_path):
        d = diagram_of(np.random.default_rng(3).normal(size=40))
        path = tmp_path / "diagram.json"
        save_diagram(path, d)
        back = load_diagram(path)
        assert np.array_equal(back.pairs, d.pairs)
        assert back.essential_birth == d.essential_birth
        payload = json.loads(path.read_text())
        assert set(payload) == {"pairs", "essential_birth"}
