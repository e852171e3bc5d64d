"""Acceptance gate: one test per shipping criterion, one verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines
(``[criterion NN] name: PASS/FAIL (numbers)``).  Criteria that need the
real datasets (ECG5000, the per-beat heartbeat CSV) look under the
directory named by TOPOGATE_DATA and skip with an explicit reason when the
files are absent, since this environment cannot download them.

Tolerances are pinned here and nowhere else:

  1. pairing oracle: exact equality, 10,000 signals with n <= 12, < 30 s
  2. landscape oracle: row error <= 1e-12; unit areas within 1e-9
  3. gradient check: relative error < 1e-4 on every parameter
  4. round trip: exact critical-point recovery and diagram equality, 1,000 signals
  5. selection: three pinned examples exact; 20,000 fuzz vectors in (0,1)^10
  6. padding invariance: bit-identical pairs, stacks and model outputs, 1,000 signals
  7. gate attribution: mean CV accuracy >= 0.95; level-2 gate in the top 2 in >= 4/5 folds
  8. ECG5000: raw >= 0.88, landscapes >= 0.86, |raw - landscapes| <= 0.06
  9. ECG5000: |selected-prefix - full-stack| <= 0.02
 10. padding direction: padded raw accuracy strictly below unpadded; landscape
     results identical to the bit
"""

from __future__ import annotations

import time

import numpy as np
import pytest

import conftest
from oracles import pointwise_landscape, sweep_diagram

from topogate.data import (
    Dataset,
    load_mitbih_csv,
    load_ucr,
    make_dip_dataset,
    shift_augment,
)
from topogate.landscape import (
    LandscapeGrid,
    landscape_stack,
    level_areas,
    normalize_area,
    stack_dataset,
    stacks_matrix,
)
from topogate.model import (
    ModelConfig,
    TrainConfig,
    forward,
    init_model,
    loss_and_gradients,
    train,
)
from topogate.persistence import PersistenceDiagram, sublevel_diagram
from topogate.reconstruction import reconstruct_signal
from topogate.selection import DROP_RULE, MASS_RULE, select_levels
from topogate.signal import Signal, critical_points


def _verdict(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"[criterion {num:02d}] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num:02d} {name}: {detail}"


def test_criterion_01_pairing_matches_threshold_sweep_oracle():
    rng = np.random.default_rng(20260814)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(10_000):
        n = int(rng.integers(2, 13))
        values = rng.uniform(-1.0, 1.0, size=n)
        while np.unique(values).size != n:
            values = rng.uniform(-1.0, 1.0, size=n)
        got = sublevel_diagram(Signal(values))
        want_pairs, want_essential = sweep_diagram(values)
        if not (
            np.array_equal(got.pairs, want_pairs)
            and got.essential_birth == want_essential
        ):
            mismatches += 1
    elapsed = time.perf_counter() - start
    _verdict(
        1,
        "sublevel pairing equals the threshold-sweep oracle",
        mismatches == 0 and elapsed < 30.0,
        f"10000 signals, n <= 12, distinct values: {mismatches} mismatches, "
        f"{elapsed:.1f} s of a 30 s budget",
    )


def test_criterion_02_landscape_rows_match_per_point_tent_sort():
    rng = np.random.default_rng(2)
    grid = LandscapeGrid(0.0, 1.0, 100)
    worst_row = 0.0
    worst_area = 0.0
    monotone = True
    for _ in range(1_000):
        count = int(rng.integers(0, 7))
        births = rng.uniform(0.0, 0.9, size=count)
        deaths = births + rng.uniform(1e-3, 0.2, size=count)
        diagram = PersistenceDiagram(
            pairs=np.column_stack([births, deaths]) if count else np.empty((0, 2)),
            essential_birth=0.0,
        )
        stack = landscape_stack(diagram, grid, levels=8)
        expected = pointwise_landscape(diagram.pairs, grid.values, 8)
        worst_row = max(worst_row, float(np.abs(stack.levels - expected).max()))
        monotone = monotone and bool(np.all(np.diff(stack.levels, axis=0) <= 0.0))
        areas = level_areas(normalize_area(stack))
        nonzero = stack.levels.any(axis=1)
        if nonzero.any():
            worst_area = max(worst_area, float(np.abs(areas[nonzero] - 1.0).max()))
    _verdict(
        2,
        "landscape stacking equals the per-point tent-sort oracle",
        worst_row <= 1e-12 and monotone and worst_area <= 1e-9,
        f"1000 diagrams, <= 6 pairs: max row error {worst_row:.2e} (tol 1e-12), "
        f"levels non-increasing {monotone}, max |area - 1| {worst_area:.2e} (tol 1e-9)",
    )


def test_criterion_03_gradients_match_central_differences():
    config = ModelConfig(
        input_shape=(3, 8),
        num_classes=2,
        conv_channels=(4, 6, 8),
        dense_hidden=16,
        use_gating=True,
        seed=7,
    )
    model = init_model(config)
    rng = np.random.default_rng(123)
    for value in model.params.values():
        value += rng.uniform(-0.3, 0.3, size=value.shape)
    x = rng.normal(size=(5, 3, 8))
    y = np.array([0, 1, 1, 0, 1])
    _, grads = loss_and_gradients(model, x, y)

    h = 1e-5
    worst = 0.0
    total = 0
    for name, value in model.params.items():
        flat = value.reshape(-1)
        gflat = grads[name].reshape(-1)
        for idx in range(flat.size):
            keep = flat[idx]
            flat[idx] = keep + h
            up, _ = loss_and_gradients(model, x, y)
            flat[idx] = keep - h
            down, _ = loss_and_gradients(model, x, y)
            flat[idx] = keep
            numeric = (up - down) / (2.0 * h)
            err = abs(gflat[idx] - numeric) / max(1.0, abs(gflat[idx]) + abs(numeric))
            worst = max(worst, err)
            total += 1
    _verdict(
        3,
        "analytic gradients match central differences",
        worst < 1e-4,
        f"3-row, 8-column gated model, 2 classes, all {total} parameters: "
        f"worst relative error {worst:.2e} (tol 1e-4)",
    )


def test_criterion_04_reconstruction_round_trip():
    rng = np.random.default_rng(4)
    checked = 0
    redrawn = 0
    failures = 0
    while checked < 1_000:
        n = int(rng.integers(4, 21))
        signal = Signal(rng.permutation(n).astype(np.float64))
        diagram = sublevel_diagram(signal)
        if diagram.pairs.shape[0] == 0:
            redrawn += 1
            continue
        checked += 1
        levels = tuple(range(1, diagram.pairs.shape[0] + 1))
        rec = reconstruct_signal(signal, level_indices=levels)
        back = sublevel_diagram(rec.simplified)
        if (
            list(rec.points) != critical_points(signal)
            or not np.array_equal(back.pairs, diagram.pairs)
            or back.essential_birth != diagram.essential_birth
        ):
            failures += 1
    _verdict(
        4,
        "reconstruction from all nonzero levels recovers every critical point",
        failures == 0,
        f"1000 signals, n <= 20, distinct values: {failures} failures "
        f"({redrawn} monotone draws redrawn; they have no nonzero level)",
    )


def test_criterion_05_level_selection_rules():
    a = select_levels([0.9, 0.7, 0.3, 0.1, 0.05, 0.04, 0.04, 0.03, 0.03, 0.02])
    b = select_levels([0.5] * 10)
    c = select_levels([0.8, 0.3] + [0.29] * 8)
    exact = (
        a.selected == (1, 2, 3) and a.cut_index == 4 and a.rule == DROP_RULE
        and b.selected == (1, 2, 3, 4, 5, 6) and b.cut_index == 7 and b.rule == MASS_RULE
        and c.selected == (1,) and c.cut_index == 2 and c.rule == DROP_RULE
    )
    rng = np.random.default_rng(5)
    fuzz_failures = 0
    for _ in range(20_000):
        result = select_levels(rng.uniform(1e-9, 1.0, size=10))
        if not result.selected or result.selected != tuple(range(1, result.cut_index)):
            fuzz_failures += 1
    _verdict(
        5,
        "level selection reproduces the pinned examples and always keeps a prefix",
        exact and fuzz_failures == 0,
        f"3 pinned examples exact: {exact}; 20000 weight vectors in (0,1)^10: "
        f"{fuzz_failures} empty or non-prefix selections",
    )


def test_criterion_06_zero_padding_leaves_pairs_stacks_and_outputs_identical():
    rng = np.random.default_rng(6)
    grid = LandscapeGrid(0.0, 1.0, 100)
    pairs_identical = True
    stacks_identical = True
    before = []
    after = []
    for _ in range(1_000):
        n = int(rng.integers(8, 41))
        values = rng.uniform(-1.0, 1.0, size=n)
        values[0] = 0.0
        values[-1] = 0.0
        pad = int(rng.integers(1, 17))
        front = int(rng.integers(0, pad + 1))
        padded = np.concatenate([np.zeros(front), values, np.zeros(pad - front)])
        da = sublevel_diagram(Signal(values))
        db = sublevel_diagram(Signal(padded))
        pairs_identical = pairs_identical and (
            da.pairs.tobytes() == db.pairs.tobytes()
            and da.essential_birth == db.essential_birth
        )
        sa = landscape_stack(da, grid, levels=10)
        sb = landscape_stack(db, grid, levels=10)
        stacks_identical = stacks_identical and (
            sa.levels.tobytes() == sb.levels.tobytes()
        )
        before.append(sa.levels)
        after.append(sb.levels)
    model = init_model(
        ModelConfig(
            input_shape=(10, 100),
            num_classes=2,
            conv_channels=(4, 6, 8),
            dense_hidden=16,
            use_gating=True,
            seed=0,
        )
    )
    outputs_identical = bool(
        np.array_equal(forward(model, np.stack(before)), forward(model, np.stack(after)))
    )
    _verdict(
        6,
        "randomly split zero padding changes nothing downstream",
        pairs_identical and stacks_identical and outputs_identical,
        f"1000 signals with zero endpoints: pairs bit-identical {pairs_identical}, "
        f"stacks bit-identical {stacks_identical}, model outputs identical {outputs_identical}",
    )


def test_criterion_07_gates_attribute_the_class_to_level_two():
    dataset = make_dip_dataset(count=1_000, seed=0)
    labels = dataset.labels()
    grid = LandscapeGrid(0.0, 1.0, 100)

    raw_stacks = stack_dataset(dataset.signals, grid=grid, levels=10, normalize=False)
    shared = raw_stacks[0].levels[0].tobytes()
    level1_shared = all(s.levels[0].tobytes() == shared for s in raw_stacks)
    upper_zero = all(not s.levels[2:].any() for s in raw_stacks)
    peaks = np.array([s.levels[1].max() for s in raw_stacks])
    separated = peaks[labels == 1].min() > peaks[labels == 0].max()
    construction_ok = level1_shared and upper_zero and separated

    stacks = stack_dataset(dataset.signals, grid=grid, levels=10, normalize=True)
    _, report = train(
        stacks_matrix(stacks),
        labels,
        ModelConfig(
            input_shape=(10, 100),
            num_classes=2,
            conv_channels=(8, 16, 32),
            dense_hidden=32,
            use_gating=True,
            seed=0,
        ),
        TrainConfig(epochs=12, batch_size=64, folds=5),
    )
    ranks = [
        1 + int(np.sum(np.asarray(fold) > fold[1])) for fold in report.gating_folds
    ]
    top_two_folds = sum(r <= 2 for r in ranks)
    _verdict(
        7,
        "gating finds the level that carries the class",
        construction_ok and report.mean_accuracy >= 0.95 and top_two_folds >= 4,
        f"construction oracle (level 1 shared across 1000 signals, levels 3+ zero, "
        f"level-2 peaks class-separated): {construction_ok}; mean CV accuracy "
        f"{report.mean_accuracy:.4f} (need >= 0.95); level-2 gate rank per fold {ranks} "
        f"(top 2 in {top_two_folds}/5 folds, need >= 4)",
    )


@pytest.fixture(scope="module")
def ecg5000_reports():
    path = conftest.require_ecg5000()
    dataset = load_ucr(path, name="ECG5000")
    labels = dataset.labels()
    tcfg = TrainConfig(epochs=60, batch_size=64, folds=5)

    raw_cfg = ModelConfig(
        input_shape=(1, dataset.length), num_classes=dataset.class_count, seed=0
    )
    _, raw = train(dataset.matrix()[:, None, :], labels, raw_cfg, tcfg)

    stacks = stack_dataset(dataset.signals, levels=10, normalize=True)
    inputs = stacks_matrix(stacks)
    land_cfg = ModelConfig(
        input_shape=(10, 100),
        num_classes=dataset.class_count,
        use_gating=True,
        seed=0,
    )
    _, land = train(inputs, labels, land_cfg, tcfg)

    selection = select_levels(land.gating_mean)
    kept = [k - 1 for k in selection.selected]
    sel_cfg = ModelConfig(
        input_shape=(len(kept), 100), num_classes=dataset.class_count, seed=0
    )
    _, sel = train(inputs[:, kept, :], labels, sel_cfg, tcfg)
    return {"raw": raw, "land": land, "sel": sel, "selection": selection}


def test_criterion_08_ecg5000_raw_vs_landscapes(ecg5000_reports):
    raw = ecg5000_reports["raw"].mean_accuracy
    land = ecg5000_reports["land"].mean_accuracy
    gap = abs(raw - land)
    _verdict(
        8,
        "ECG5000: landscapes stay close to raw signals",
        raw >= 0.88 and land >= 0.86 and gap <= 0.06,
        f"raw {raw:.4f} (need >= 0.88), 10-level landscapes {land:.4f} "
        f"(need >= 0.86), gap {gap:.4f} (need <= 0.06)",
    )


def test_criterion_09_ecg5000_selected_prefix_vs_full_stack(ecg5000_reports):
    land = ecg5000_reports["land"].mean_accuracy
    sel = ecg5000_reports["sel"].mean_accuracy
    selection = ecg5000_reports["selection"]
    _verdict(
        9,
        "ECG5000: the selected prefix keeps the full-stack accuracy",
        abs(land - sel) <= 0.02,
        f"selected levels {list(selection.selected)} ({selection.rule}): "
        f"{sel:.4f} vs full stack {land:.4f}, |gap| {abs(land - sel):.4f} (need <= 0.02)",
    )


def test_criterion_10_padding_hurts_raw_but_not_landscapes():
    dataset = make_dip_dataset(
        count=600,
        seed=0,
        positional=True,
        depth_ranges=((0.20, 0.35), (0.10, 0.25)),
    )
    labels = dataset.labels()
    padded = shift_augment(dataset, 2 * dataset.length, seed=1)

    tcfg = TrainConfig(epochs=30, batch_size=64, folds=5)
    raw_cfg = ModelConfig(
        input_shape=(1, dataset.length),
        num_classes=2,
        conv_channels=(8, 16, 32),
        dense_hidden=32,
        seed=0,
    )
    _, raw = train(dataset.matrix()[:, None, :], labels, raw_cfg, tcfg)
    pad_cfg = ModelConfig(
        input_shape=(1, padded.length),
        num_classes=2,
        conv_channels=(8, 16, 32),
        dense_hidden=32,
        seed=0,
    )
    _, raw_padded = train(padded.matrix()[:, None, :], padded.labels(), pad_cfg, tcfg)
    drop = raw.mean_accuracy - raw_padded.mean_accuracy

    stacks = stack_dataset(dataset.signals, levels=10, normalize=True)
    stacks_padded = stack_dataset(padded.signals, levels=10, normalize=True)
    bit_identical = all(
        a.levels.tobytes() == b.levels.tobytes()
        for a, b in zip(stacks, stacks_padded)
    )
    land_cfg = ModelConfig(
        input_shape=(10, 100),
        num_classes=2,
        conv_channels=(8, 16, 32),
        dense_hidden=32,
        seed=0,
    )
    land_tcfg = TrainConfig(epochs=5, batch_size=64, folds=5)
    _, land = train(stacks_matrix(stacks), labels, land_cfg, land_tcfg)
    _, land_padded = train(stacks_matrix(stacks_padded), padded.labels(), land_cfg, land_tcfg)
    _verdict(
        10,
        "random zero padding drops raw accuracy and leaves landscapes untouched",
        drop > 0.0 and bit_identical and land == land_padded,
        f"600 position-coded signals padded to double length: raw {raw.mean_accuracy:.4f} "
        f"-> {raw_padded.mean_accuracy:.4f} (drop {drop:.4f}, need > 0); stacks "
        f"bit-identical {bit_identical}; landscape reports identical {land == land_padded}",
    )


def test_criterion_10_real_heartbeats_variant():
    path = conftest.require_mitbih()
    full = load_mitbih_csv(path)
    labels = full.labels()
    rng = np.random.default_rng(0)
    keep: list[int] = []
    for cls in range(full.class_count):
        idx = np.flatnonzero(labels == cls)
        keep.extend(rng.permutation(idx)[:2_000].tolist())
    subset = Dataset.from_signals(
        [full.signals[i] for i in sorted(keep)], name="mitbih-subset"
    )
    zero_endpoints = sum(
        1 for s in subset.signals if s.values[0] == 0.0 and s.values[-1] == 0.0
    )
    padded = shift_augment(subset, 2 * subset.length, seed=1)

    tcfg = TrainConfig(epochs=30, batch_size=64, folds=5)
    raw_cfg = ModelConfig(
        input_shape=(1, subset.length), num_classes=subset.class_count, seed=0
    )
    _, raw = train(subset.matrix()[:, None, :], subset.labels(), raw_cfg, tcfg)
    pad_cfg = ModelConfig(
        input_shape=(1, padded.length), num_classes=padded.class_count, seed=0
    )
    _, raw_padded = train(padded.matrix()[:, None, :], padded.labels(), pad_cfg, tcfg)
    drop = raw.mean_accuracy - raw_padded.mean_accuracy

    stacks = stack_dataset(subset.signals, levels=10, normalize=True)
    stacks_padded = stack_dataset(padded.signals, levels=10, normalize=True)
    bit_identical = all(
        a.levels.tobytes() == b.levels.tobytes()
        for a, b in zip(stacks, stacks_padded)
    )
    _verdict(
        10,
        "real heartbeats: padding drops raw accuracy, landscapes unchanged",
        drop > 0.0 and bit_identical,
        f"{len(subset)} beats (<= 2000 per class), {zero_endpoints} with both "
        f"endpoints exactly 0: raw {raw.mean_accuracy:.4f} -> {raw_padded.mean_accuracy:.4f} "
        f"(drop {drop:.4f}, need > 0); stacks bit-identical {bit_identical} "
        f"(padding preserves stacks only for signals whose endpoints are 0)",
    )
