"""Greedy growth: insertion/deletion sweeps, stage traces, local optimality."""

import numpy as np
import pytest

from webbiclust.greedy import STAGES, enlarge, grow_all, refine
from webbiclust.metrics import Bicluster, acv_submatrix
from webbiclust.synth import ImplantSpec, generate


def _coherent_host(seed=0):
    """60x20 noise matrix with an exactly coherent 8x6 block at rows 10..17, cols 3..8."""
    data = generate(
        60,
        20,
        [ImplantSpec(8, 6, model="shift", row_start=10, col_start=3, integer_valued=True)],
        seed=seed,
    )
    return np.asarray(data.matrix.values, dtype=float), data.truth[0]


def test_enlarge_recovers_coherent_block_from_small_seed():
    data, truth = _coherent_host()
    seed = Bicluster(truth.rows[:2], truth.cols[:2])
    grown = enlarge(data, seed)
    assert grown == truth
    assert acv_submatrix(data[np.ix_(grown.rows, grown.cols)]) == pytest.approx(1.0)


def test_refine_removes_incoherent_members():
    data, truth = _coherent_host(seed=4)
    # pollute the block with one noise row and one noise column
    noisy = Bicluster(truth.rows + (55,), truth.cols + (17,))
    refined = refine(data, noisy)
    before = acv_submatrix(data[np.ix_(noisy.rows, noisy.cols)])
    after = acv_submatrix(data[np.ix_(refined.rows, refined.cols)])
    assert after > before
    assert set(refined.rows) <= set(noisy.rows)
    assert set(refined.cols) <= set(noisy.cols)
    assert 55 not in refined.rows
    assert 17 not in refined.cols


def test_enlarge_and_refine_require_2x2():
    data = np.zeros((5, 5))
    with pytest.raises(ValueError):
        enlarge(data, Bicluster((0,), (0, 1)))
    with pytest.raises(ValueError):
        refine(data, Bicluster((0, 1), (1,)))


def test_accepted_moves_improve_acv_on_random_data():
    rng = np.random.default_rng(14)
    for _ in range(10):
        data = rng.integers(0, 51, size=(20, 10)).astype(float)
        seed = Bicluster(
            tuple(rng.choice(20, size=4, replace=False).tolist()),
            tuple(rng.choice(10, size=3, replace=False).tolist()),
        )
        accepted = []
        grow_all(data, [seed], on_accept=lambda st, b, a: accepted.append((st, b, a)))
        for stage, before, after in accepted:
            assert stage in STAGES
            assert after > before


def test_grow_all_reaches_single_move_local_optimum():
    rng = np.random.default_rng(2)
    data = rng.integers(0, 51, size=(15, 8)).astype(float)
    seed = Bicluster((1, 5, 9, 12), (0, 3, 6))
    grown, _ = grow_all(data, [seed])
    final = grown[0]
    current = acv_submatrix(data[np.ix_(final.rows, final.cols)])
    # no single insertion or deletion may improve ACV
    for r in range(15):
        if r not in final.rows:
            trial = acv_submatrix(data[np.ix_(final.rows + (r,), final.cols)])
            assert trial <= current + 1e-12
    for c in range(8):
        if c not in final.cols:
            trial = acv_submatrix(data[np.ix_(final.rows, final.cols + (c,))])
            assert trial <= current + 1e-12
    if len(final.rows) > 2:
        for r in final.rows:
            rest = tuple(x for x in final.rows if x != r)
            assert acv_submatrix(data[np.ix_(rest, final.cols)]) <= current + 1e-12
    if len(final.cols) > 2:
        for c in final.cols:
            rest = tuple(x for x in final.cols if x != c)
            assert acv_submatrix(data[np.ix_(final.rows, rest)]) <= current + 1e-12


def test_grow_all_stage_trace_shape_and_monotonicity():
    data, truth = _coherent_host(seed=9)
    seeds = [
        Bicluster(truth.rows[:3], truth.cols[:3]),
        Bicluster((20, 25, 30), (0, 10, 15)),
    ]
    grown, trace = grow_all(data, seeds)
    assert len(grown) == 2
    assert tuple(r.stage for r in trace.records) == STAGES
    acvs = [r.avg_acv for r in trace.records]
    assert all(b >= a for a, b in zip(acvs, acvs[1:]))
    assert all(r.avg_volume >= 4 for r in trace.records)


def test_grow_all_requires_seeds():
    with pytest.raises(ValueError):
        grow_all(np.zeros((4, 4)), [])


def test_stage_trace_csv_round_trip(tmp_path):
    data, truth = _coherent_host(seed=12)
    _, trace = grow_all(data, [Bicluster(truth.rows[:2], truth.cols[:2])])
    path = tmp_path / "trace.csv"
    trace.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "stage,avg_acv,avg_volume"
    assert len(lines) == 1 + len(STAGES)
    for line, record in zip(lines[1:], trace.records):
        stage, avg_acv, avg_volume = line.split(",")
        assert stage == record.stage
        assert float(avg_acv) == record.avg_acv
        assert float(avg_volume) == record.avg_volume
