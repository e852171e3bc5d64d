import numpy as np
import pytest

from topogate.data import (
    Dataset,
    load_dataset,
    load_mitbih_csv,
    load_ucr,
    make_dip_dataset,
    make_folds,
    save_dataset,
    shift_augment,
    stratified_folds,
)
from topogate.landscape import landscape_stack
from topogate.persistence import sublevel_diagram
from topogate.signal import MINIMUM, Signal, critical_points


def labeled(values, label):
    return Signal(values, label=label)


class TestDataset:
    def test_from_signals(self):
        ds = Dataset.from_signals(
            [labeled([0.0, 1.0, 0.0], 0), labeled([0.0, 0.5, 0.0], 1)], name="toy"
        )
        assert len(ds) == 2
        assert ds.length == 3
        assert ds.class_count == 2
        assert ds.class_histogram.tolist() == [1, 1]
        assert ds.matrix().shape == (2, 3)
        assert ds.labels().tolist() == [0, 1]

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="empty"):
            Dataset.from_signals([], name="toy")

    def test_rejects_mixed_lengths(self):
        with pytest.raises(ValueError, match="mixed lengths"):
            Dataset.from_signals(
                [labeled([0.0, 1.0, 0.0], 0), labeled([0.0, 1.0, 0.0, 1.0], 1)], name="toy"
            )

    def test_rejects_missing_labels(self):
        with pytest.raises(ValueError, match="label"):
            Dataset.from_signals([Signal([0.0, 1.0, 0.0])], name="toy")


class TestStratifiedFolds:
    def test_balance_within_classes(self):
        labels = np.repeat([0, 1, 2], [50, 23, 17])
        assignments = stratified_folds(labels, folds=5, seed=0)
        for cls in range(3):
            counts = np.bincount(assignments[labels == cls], minlength=5)
            assert counts.max() - counts.min() <= 1

    def test_deterministic(self):
        labels = np.repeat([0, 1], 20)
        a = stratified_folds(labels, folds=4, seed=3)
        b = stratified_folds(labels, folds=4, seed=3)
        assert np.array_equal(a, b)

    def test_scarce_class_rejected(self):
        with pytest.raises(ValueError, match="fewer than"):
            stratified_folds([0, 0, 0, 1], folds=3, seed=0)

    def test_fold_plan_partitions(self):
        ds = make_dip_dataset(count=40, seed=0)
        plan = make_folds(ds, folds=4, seed=1)
        seen = np.concatenate([plan.test_indices(f) for f in range(4)])
        assert sorted(seen.tolist()) == list(range(40))
        train = plan.train_indices(0)
        assert not set(train) & set(plan.test_indices(0))


class TestUcrLoader:
    def write_split(self, path, rows, sep="\t"):
        path.write_text("\n".join(sep.join(str(v) for v in row) for row in rows) + "\n")

    def test_single_file_with_label_remap(self, tmp_path):
        path = tmp_path / "Toy_TRAIN.tsv"
        self.write_split(path, [[-1, 0.0, 2.0, 1.0], [1, 3.0, 1.0, 2.0]])
        ds = load_ucr(path)
        assert ds.name == "Toy_TRAIN"
        assert ds.labels().tolist() == [0, 1]
        assert ds.length == 3
        for s in ds.signals:
            assert s.values.min() == 0.0 and s.values.max() == 1.0

    def test_directory_merges_train_then_test(self, tmp_path):
        self.write_split(tmp_path / "Toy_TRAIN.tsv", [[1, 0.0, 1.0, 0.5]])
        self.write_split(tmp_path / "Toy_TEST.tsv", [[2, 1.0, 0.0, 0.5]], sep="\t")
        ds = load_ucr(tmp_path)
        assert ds.name == "Toy"
        assert len(ds) == 2
        assert ds.labels().tolist() == [0, 1]

    def test_comma_separated(self, tmp_path):
        path = tmp_path / "c.csv"
        self.write_split(path, [[0, 0.0, 1.0, 0.0]], sep=",")
        assert len(load_ucr(path)) == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_ucr(tmp_path / "absent.tsv")

    def test_non_integer_labels_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        self.write_split(path, [[0.5, 0.0, 1.0, 0.0]])
        with pytest.raises(ValueError, match="label"):
            load_ucr(path)


class TestHeartbeatLoader:
    def test_loads_fixed_width_rows(self, tmp_path):
        rng = np.random.default_rng(0)
        rows = []
        for label in (0.0, 3.0):
            rows.append(np.concatenate([rng.uniform(0, 1, size=187), [label]]))
        path = tmp_path / "beats.csv"
        path.write_text(
            "\n".join(",".join(repr(float(v)) for v in row) for row in rows) + "\n"
        )
        ds = load_mitbih_csv(path)
        assert len(ds) == 2
        assert ds.length == 187
        assert ds.labels().tolist() == [0, 1]

    def test_rejects_wrong_width(self, tmp_path):
        path = tmp_path / "beats.csv"
        path.write_text(",".join(["0.5"] * 10) + "\n")
        with pytest.raises(ValueError, match="188"):
            load_mitbih_csv(path)


class TestShiftAugment:
    def test_identity_at_same_length(self):
        ds = make_dip_dataset(count=10, seed=0)
        shifted = shift_augment(ds, ds.length, seed=5)
        assert np.array_equal(shifted.matrix(), ds.matrix())

    def test_pads_to_target_and_keeps_labels(self):
        ds = make_dip_dataset(count=10, seed=0)
        shifted = shift_augment(ds, 2 * ds.length, seed=5)
        assert shifted.length == 2 * ds.length
        assert shifted.labels().tolist() == ds.labels().tolist()

    def test_padding_preserves_diagrams(self):
        ds = make_dip_dataset(count=10, seed=0)
        shifted = shift_augment(ds, 2 * ds.length, seed=5)
        for before, after in zip(ds.signals, shifted.signals):
            a = sublevel_diagram(before)
            b = sublevel_diagram(after)
            assert a.pairs.tobytes() == b.pairs.tobytes()
            assert a.essential_birth == b.essential_birth

    def test_rejects_shrinking(self):
        ds = make_dip_dataset(count=4, seed=0)
        with pytest.raises(ValueError, match="shorter"):
            shift_augment(ds, ds.length - 1, seed=0)


class TestNpzRoundTrip:
    def test_round_trip(self, tmp_path):
        ds = make_dip_dataset(count=6, seed=2)
        path = tmp_path / "ds.npz"
        save_dataset(path, ds)
        back = load_dataset(path)
        assert back.name == ds.name
        assert np.array_equal(back.matrix(), ds.matrix())
        assert np.array_equal(back.labels(), ds.labels())

    def test_accepts_bare_signals_and_labels(self, tmp_path):
        ds = make_dip_dataset(count=6, seed=2)
        path = tmp_path / "bare.npz"
        np.savez(path, signals=ds.matrix(), labels=ds.labels())
        back = load_dataset(path)
        assert back.name == "bare"
        assert np.array_equal(back.matrix(), ds.matrix())
        assert np.array_equal(back.labels(), ds.labels())

    def test_rejects_archive_without_signals(self, tmp_path):
        path = tmp_path / "broken.npz"
        np.savez(path, labels=np.array([0, 1]))
        with pytest.raises(KeyError, match="matrix"):
            load_dataset(path)


class TestDipDataset:
    def test_shape_and_alternating_labels(self):
        ds = make_dip_dataset(count=20, length=64, seed=0)
        assert len(ds) == 20
        assert ds.length == 64
        assert ds.labels().tolist() == [0, 1] * 10
        assert ds.class_histogram.tolist() == [10, 10]

    def test_every_diagram_has_two_nested_pairs(self):
        ds = make_dip_dataset(count=30, seed=1)
        for s in ds.signals:
            pairs = sublevel_diagram(s).pairs
            assert pairs.shape == (2, 2)
            assert pairs[0, 0] == 0.0 and pairs[0, 1] == 1.0
            assert pairs[0, 0] < pairs[1, 0] and pairs[1, 1] < pairs[0, 1]

    def test_first_level_is_shared_second_level_separates(self):
        ds = make_dip_dataset(count=30, seed=2)
        stacks = [landscape_stack(sublevel_diagram(s), levels=2) for s in ds.signals]
        first = stacks[0].levels[0]
        peaks = np.array([st.levels[1].max() for st in stacks])
        labels = ds.labels()
        assert all(st.levels[0].tobytes() == first.tobytes() for st in stacks)
        assert peaks[labels == 1].min() > peaks[labels == 0].max()

    def test_positional_variant_separates_dip_abscissa(self):
        ds = make_dip_dataset(count=30, length=64, seed=3, positional=True)
        positions = []
        for s in ds.signals:
            dips = [
                p.x
                for p in critical_points(s, include_endpoints=False)
                if p.kind == MINIMUM
            ]
            assert len(dips) == 1
            positions.append(dips[0])
        positions = np.array(positions)
        labels = ds.labels()
        assert positions[labels == 0].max() < positions[labels == 1].min()

    def test_rejects_short_length(self):
        with pytest.raises(ValueError, match="at least 32"):
            make_dip_dataset(count=4, length=16)
