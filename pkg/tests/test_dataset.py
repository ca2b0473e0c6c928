"""Cleaning, standardization, split, and pool behaviour."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surprise_bo import dataset as ds_mod
from surprise_bo.dataset import (
    CandidatePool,
    Dataset,
    FeatureSchema,
    MELTPOOL_FEATURES,
    denormalize,
    load_and_clean,
    make_pool,
    meltpool_schema,
    normalize,
    split,
)
from surprise_bo.errors import (
    BudgetError,
    DegenerateScaleError,
    DomainError,
    EmptyDatasetError,
    ParseError,
    PoolExhaustedError,
    SchemaError,
    SplitError,
)

from conftest import random_dataset


HEADER = ",".join(MELTPOOL_FEATURES + ("depth",))


def write_csv(tmp_path, rows, header=HEADER, name="data.csv"):
    path = tmp_path / name
    path.write_text(header + "\n" + "\n".join(rows) + "\n")
    return path


def make_row(rng):
    return ",".join(f"{v:.6f}" for v in rng.uniform(1, 9, size=7))


class TestSchema:
    def test_standard_schema(self):
        s = meltpool_schema("width")
        assert len(s.names) == 6
        assert s.target == "width"
        assert s.columns[-1] == "width"

    def test_wrong_feature_count(self):
        with pytest.raises(SchemaError):
            FeatureSchema(names=("a", "b", "c"), target="depth")

    def test_duplicate_names(self):
        names = ("a", "a", "c", "d", "e", "f")
        with pytest.raises(SchemaError):
            FeatureSchema(names=names, target="depth")

    def test_bad_target(self):
        with pytest.raises(SchemaError):
            FeatureSchema(names=MELTPOOL_FEATURES, target="area")


class TestLoadAndClean:
    def test_clean_file_is_identity(self, tmp_path, schema):
        rng = np.random.default_rng(0)
        rows = [make_row(rng) for _ in range(12)]
        out = load_and_clean(write_csv(tmp_path, rows), schema)
        assert out.n_rows == 12
        assert out.cleaning == {
            "dropped_missing": 0,
            "dropped_duplicate": 0,
            "rows_in": 12,
            "rows_out": 12,
        }

    def test_duplicates_and_missing_dropped(self, tmp_path, schema):
        rng = np.random.default_rng(1)
        base = [make_row(rng) for _ in range(7)]
        # 10 rows: 7 distinct, 2 exact duplicates, 1 missing density
        damaged = base[0].split(",")
        damaged[3] = ""
        rows = base + [base[1], base[2], ",".join(damaged)]
        out = load_and_clean(write_csv(tmp_path, rows), schema)
        assert out.n_rows == 7
        assert out.cleaning["dropped_missing"] == 1
        assert out.cleaning["dropped_duplicate"] == 2
        assert out.cleaning["rows_in"] == 10
        assert out.cleaning["rows_out"] == 7

    def test_missing_column_raises(self, tmp_path, schema):
        header = ",".join(MELTPOOL_FEATURES[:-1] + ("depth",))
        path = write_csv(tmp_path, ["1,2,3,4,5,6"], header=header)
        with pytest.raises(SchemaError):
            load_and_clean(path, schema)

    def test_non_numeric_cell_located(self, tmp_path, schema):
        rng = np.random.default_rng(2)
        bad = make_row(rng).split(",")
        bad[1] = "fast"
        path = write_csv(tmp_path, [make_row(rng), ",".join(bad)])
        with pytest.raises(ParseError) as err:
            load_and_clean(path, schema)
        assert err.value.column == "scanning_velocity"
        assert err.value.row == 1

    def test_all_rows_dropped(self, tmp_path, schema):
        row = make_row(np.random.default_rng(3)).split(",")
        row[0] = ""
        with pytest.raises(EmptyDatasetError):
            load_and_clean(write_csv(tmp_path, [",".join(row)]), schema)

    def test_constant_column_rejected(self, tmp_path, schema):
        rng = np.random.default_rng(4)
        rows = []
        for _ in range(5):
            vals = make_row(rng).split(",")
            vals[4] = "1660.0"
            rows.append(",".join(vals))
        with pytest.raises(DegenerateScaleError) as err:
            load_and_clean(write_csv(tmp_path, rows), schema)
        assert err.value.column == "melting_temperature"

    def test_recleaning_is_stable(self, tmp_path, schema):
        rng = np.random.default_rng(5)
        rows = [make_row(rng) for _ in range(9)]
        rows.append(rows[0])
        first = load_and_clean(write_csv(tmp_path, rows), schema)
        body = [
            ",".join(
                [repr(float(v)) for v in first.rows[i]]
                + [repr(float(first.targets[i]))]
            )
            for i in range(first.n_rows)
        ]
        second = load_and_clean(write_csv(tmp_path, body, name="again.csv"), schema)
        assert second.cleaning["dropped_missing"] == 0
        assert second.cleaning["dropped_duplicate"] == 0
        np.testing.assert_allclose(second.rows, first.rows, rtol=0, atol=0)
        np.testing.assert_allclose(second.targets, first.targets, rtol=0, atol=0)


class TestNormalize:
    def test_hand_example(self, schema):
        # column [2, 4, 6]: mean 4, sample std 2, so values map to -1, 0, 1
        rows = np.tile([2.0, 4.0, 6.0], (6, 1)).T
        targets = np.array([2.0, 4.0, 6.0])
        out = normalize(Dataset(schema=schema, rows=rows, targets=targets))
        np.testing.assert_allclose(out.rows[:, 0], [-1.0, 0.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(out.targets, [-1.0, 0.0, 1.0], atol=1e-12)
        assert out.normalization.target_mean == 4.0
        assert out.normalization.target_std == 2.0

    def test_columns_standardized(self, small_dataset):
        out = normalize(small_dataset)
        np.testing.assert_allclose(out.rows.mean(axis=0), 0.0, atol=1e-9)
        np.testing.assert_allclose(out.rows.std(axis=0, ddof=1), 1.0, atol=1e-9)
        assert abs(out.targets.mean()) < 1e-9
        assert abs(out.targets.std(ddof=1) - 1.0) < 1e-9

    def test_round_trip(self, small_dataset):
        back = denormalize(normalize(small_dataset))
        np.testing.assert_allclose(back.rows, small_dataset.rows, rtol=1e-9)
        np.testing.assert_allclose(back.targets, small_dataset.targets, rtol=1e-9)

    def test_idempotent_on_standardized(self, small_dataset):
        once = normalize(small_dataset)
        twice = normalize(once)
        np.testing.assert_allclose(twice.rows, once.rows, atol=1e-9)
        np.testing.assert_allclose(twice.targets, once.targets, atol=1e-9)

    def test_constant_column_named(self, schema):
        rows = np.random.default_rng(6).normal(size=(5, 6))
        rows[:, 2] = 7.7
        with pytest.raises(DegenerateScaleError) as err:
            normalize(Dataset(schema=schema, rows=rows, targets=rows[:, 0]))
        assert err.value.column == "beam_diameter"

    def test_denormalize_needs_parameters(self, small_dataset):
        with pytest.raises(DomainError):
            denormalize(small_dataset)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_round_trip_property(self, seed):
        data = random_dataset(12, seed=seed)
        back = denormalize(normalize(data))
        np.testing.assert_allclose(back.rows, data.rows, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(
            back.targets, data.targets, rtol=1e-9, atol=1e-12
        )


class TestSplit:
    @pytest.mark.parametrize(
        "n,train,test", [(1115, 836, 279), (850, 637, 213), (257, 192, 65)]
    )
    def test_published_counts(self, n, train, test):
        out = split(random_dataset(n, seed=n), fraction=0.75, seed=11)
        assert out.train.n_rows == train
        assert out.test.n_rows == test

    def test_partition_is_exact(self, small_dataset):
        out = split(small_dataset, fraction=0.75, seed=3)
        merged = np.vstack([out.train.rows, out.test.rows])
        original = {tuple(r) for r in small_dataset.rows}
        assert {tuple(r) for r in merged} == original
        assert out.train.n_rows + out.test.n_rows == small_dataset.n_rows

    def test_same_seed_same_partition(self, small_dataset):
        a = split(small_dataset, fraction=0.75, seed=42)
        b = split(small_dataset, fraction=0.75, seed=42)
        np.testing.assert_array_equal(a.train.rows, b.train.rows)
        np.testing.assert_array_equal(a.test.rows, b.test.rows)

    def test_different_seeds_same_sizes(self):
        data = random_dataset(4, seed=9)
        a = split(data, fraction=0.75, seed=1)
        b = split(data, fraction=0.75, seed=2)
        assert a.train.n_rows == b.train.n_rows == 3
        assert a.test.n_rows == b.test.n_rows == 1

    def test_bad_fraction(self, small_dataset):
        for frac in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(SplitError):
                split(small_dataset, fraction=frac, seed=0)

    def test_empty_side_rejected(self):
        with pytest.raises(SplitError):
            split(random_dataset(2, seed=1), fraction=0.1, seed=0)

    @given(
        st.integers(min_value=2, max_value=60),
        st.floats(min_value=0.05, max_value=0.95),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    @settings(max_examples=40, deadline=None)
    def test_floor_sizes_property(self, n, fraction, seed):
        want = math.floor(n * fraction + 1e-9)
        if want == 0 or want == n:
            return
        out = split(random_dataset(n, seed=n + 1), fraction=fraction, seed=seed)
        assert out.train.n_rows == want
        assert out.test.n_rows == n - want


class TestPool:
    def test_depth_warmup_counts(self):
        train = random_dataset(836, seed=77)
        warmup, pool = make_pool(train, warmup_count=50, seed=5)
        assert len(warmup) == 50
        assert len(pool) == 786
        assert set(warmup).isdisjoint(pool.indices)

    def test_zero_warmup(self, small_dataset):
        warmup, pool = make_pool(small_dataset, warmup_count=0, seed=5)
        assert warmup.size == 0
        assert sorted(pool.indices) == list(range(small_dataset.n_rows))

    def test_boundary_warmup(self, small_dataset):
        n = small_dataset.n_rows
        warmup, pool = make_pool(small_dataset, warmup_count=n - 1, seed=5)
        assert len(pool) == 1

    def test_warmup_too_large(self, small_dataset):
        with pytest.raises(BudgetError):
            make_pool(small_dataset, small_dataset.n_rows, seed=0)

    def test_deterministic(self, small_dataset):
        a = make_pool(small_dataset, 10, seed=8)
        b = make_pool(small_dataset, 10, seed=8)
        np.testing.assert_array_equal(a[0], b[0])
        assert a[1].indices == b[1].indices

    def test_consume_tracks_conservation(self):
        pool = CandidatePool(indices=[3, 1, 4, 1 + 4, 9])
        start = pool.initial_size
        pool.consume(4)
        pool.consume(9)
        assert len(pool.indices) + len(pool.consumed) == start
        assert set(pool.indices).isdisjoint(pool.consumed)
        assert pool.consumed == [4, 9]

    def test_double_consume_rejected(self):
        pool = CandidatePool(indices=[0, 1])
        pool.consume(0)
        with pytest.raises(DomainError):
            pool.consume(0)

    def test_empty_pool_raises(self):
        pool = CandidatePool(indices=[2])
        pool.consume(2)
        with pytest.raises(PoolExhaustedError):
            pool.consume(2)

    def test_overlap_rejected(self):
        with pytest.raises(DomainError):
            CandidatePool(indices=[1, 2], consumed=[2])

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_conservation_property(self, seed):
        rng = np.random.default_rng(seed)
        pool = CandidatePool(indices=list(range(20)))
        start = pool.initial_size
        order = rng.permutation(20)[: int(rng.integers(1, 20))]
        for idx in order:
            pool.consume(int(idx))
            assert len(pool.indices) + len(pool.consumed) == start
