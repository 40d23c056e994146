import numpy as np
import pytest

from logtukey import data
from logtukey.errors import InvalidSpec, ParseError, SplitError, ValidationError
from logtukey.stats import moments


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestGenerate:
    def test_exponential_mean_parameterization(self):
        xs = data.generate(data.Exponential(0.5, 100_000, 42))
        m = moments(xs)
        assert m.mean == pytest.approx(0.5, abs=0.01)
        assert m.std_dev == pytest.approx(0.5, abs=0.01)

    def test_uniform(self):
        xs = data.generate(data.Uniform(0, 1, 100_000, 42))
        assert xs.min() >= 0 and xs.max() <= 1
        assert xs.mean() == pytest.approx(0.5, abs=0.01)

    def test_lognormal(self):
        xs = data.generate(data.LogNormal(0.0, 0.5, 50_000, 1))
        assert np.log(xs).std() == pytest.approx(0.5, abs=0.01)

    @pytest.mark.parametrize("spec", [
        data.Uniform(1, 1), data.Exponential(0.0), data.LogNormal(0, -1), data.Uniform(n=0),
        data.GaussianMixtureClasses(skew="cubic"), data.GaussianMixtureClasses(n_base=15, n_validation=10),
    ])
    def test_invalid(self, spec):
        with pytest.raises(InvalidSpec):
            data.generate(spec)

    @pytest.mark.parametrize("spec", [data.Uniform(seed=3), data.Exponential(seed=3),
                                      data.GaussianMixtureClasses(seed=3)])
    def test_deterministic(self, spec):
        a, b = data.generate(spec), data.generate(spec)
        if isinstance(a, data.FeatureDataset):
            a, b = a.features, b.features
        np.testing.assert_array_equal(a, b)

    def test_zero_spread_rows_equal_class_mean(self):
        ds = data.generate(data.GaussianMixtureClasses(n_classes=4, dim=3, samples_per_class=6, spread=0.0,
                                                       n_base=1, n_validation=1))
        for c in ds.classes():
            rows = ds.features[ds.rows_of(c)]
            np.testing.assert_array_equal(rows, np.broadcast_to(rows[0], rows.shape))
            np.testing.assert_allclose(rows.mean(axis=0), rows[0], rtol=1e-15)

    def test_mixture_layout(self):
        ds = data.generate(data.GaussianMixtureClasses())
        assert ds.features.shape == (800, 64)
        assert len(ds.classes("base")) == 8 and len(ds.classes("validation")) == 2
        assert len(ds.classes("novel")) == 10
        assert ds.non_negative and (ds.features >= 0).all()
        assert set(ds.class_counts().values()) == {40}


class TestIris:
    def test_feature_0(self):
        xs = data.iris_feature(0)
        assert xs.shape == (150,)
        assert xs[0] == 5.1
        assert xs.mean() == pytest.approx(5.843, abs=0.001)
        assert moments(xs).std_dev == pytest.approx(0.825, abs=0.005)

    def test_known_column_sums(self):
        # column totals of the classic table
        np.testing.assert_allclose(data.iris().sum(axis=0), [876.5, 458.6, 563.7, 179.9], atol=1e-9)

    @pytest.mark.parametrize("index", [-1, 4])
    def test_index(self, index):
        with pytest.raises(IndexError):
            data.iris_feature(index)


class TestDatasetInvariants:
    def test_unassigned_class(self):
        with pytest.raises(SplitError):
            data.FeatureDataset(np.zeros((2, 1)), ["a", "b"], {"a": "base"})

    def test_bad_partition(self):
        with pytest.raises(SplitError):
            data.FeatureDataset(np.zeros((1, 1)), ["a"], {"a": "train"})

    def test_non_negative(self):
        with pytest.raises(ValidationError):
            data.FeatureDataset(np.array([[1.0], [-1.0]]), ["a", "a"], {"a": "base"}, non_negative=True)

    def test_counts_agree(self):
        with pytest.raises(ValidationError):
            data.FeatureDataset(np.zeros((3, 2)), ["a", "a"], {"a": "base"})

    def test_partition_is_a_partition(self):
        ds = data.generate(data.GaussianMixtureClasses())
        parts = [set(ds.classes(p)) for p in data.PARTITIONS]
        assert set.union(*parts) == set(ds.classes())
        assert sum(len(p) for p in parts) == len(ds.classes())


class TestFeatureFiles:
    def test_hand_written(self, tmp_path):
        f = write(tmp_path / "f.csv", "label,f0,f1\ncat,1.0,2.0\ndog,3,4\ncat,0.5,0.25\n")
        s = write(tmp_path / "s.csv", "cat,base\ndog,novel\n")
        ds = data.load_features(f, s)
        assert len(ds) == 3 and ds.dim == 2
        assert ds.classes("base") == ["cat"] and ds.classes("novel") == ["dog"]
        assert ds.class_counts() == {"cat": 2, "dog": 1}
        assert len(ds.labels) == ds.features.shape[0]

    def test_nan_names_row(self, tmp_path):
        rows = ["label,f0,f1"] + [f"a,{i},{i}" for i in range(1, 7)] + ["a,1,nan"] + ["a,2,2"]
        f = write(tmp_path / "f.csv", "\n".join(rows) + "\n")
        s = write(tmp_path / "s.csv", "a,base\n")
        with pytest.raises(ValidationError) as exc:
            data.load_features(f, s)
        assert exc.value.row == 7
        assert "row 7" in str(exc.value)

    def test_unparseable(self, tmp_path):
        f = write(tmp_path / "f.csv", "label,f0\na,1\na,x\n")
        s = write(tmp_path / "s.csv", "a,base\n")
        with pytest.raises(ParseError) as exc:
            data.load_features(f, s)
        assert (exc.value.line, exc.value.column) == (3, 2)

    def test_bad_header(self, tmp_path):
        f = write(tmp_path / "f.csv", "name,x0\na,1\n")
        s = write(tmp_path / "s.csv", "a,base\n")
        with pytest.raises(ParseError):
            data.load_features(f, s)

    def test_ragged_row(self, tmp_path):
        f = write(tmp_path / "f.csv", "label,f0,f1\na,1\n")
        s = write(tmp_path / "s.csv", "a,base\n")
        with pytest.raises(ParseError):
            data.load_features(f, s)

    def test_class_in_two_partitions(self, tmp_path):
        f = write(tmp_path / "f.csv", "label,f0\na,1\n")
        s = write(tmp_path / "s.csv", "a,base\na,novel\n")
        with pytest.raises(SplitError):
            data.load_features(f, s)

    def test_class_in_no_partition(self, tmp_path):
        f = write(tmp_path / "f.csv", "label,f0\na,1\nb,2\n")
        s = write(tmp_path / "s.csv", "a,base\n")
        with pytest.raises(SplitError):
            data.load_features(f, s)

    def test_negative_rejected_when_flagged(self, tmp_path):
        f = write(tmp_path / "f.csv", "label,f0\na,1\na,-2\n")
        s = write(tmp_path / "s.csv", "a,base\n")
        assert len(data.load_features(f, s)) == 2
        with pytest.raises(ValidationError) as exc:
            data.load_features(f, s, non_negative=True)
        assert exc.value.row == 2

    def test_round_trip_byte_identical(self, tmp_path):
        ds = data.generate(data.GaussianMixtureClasses(n_classes=5, dim=4, samples_per_class=3,
                                                       n_base=2, n_validation=1))
        f1, s1 = tmp_path / "a.csv", tmp_path / "a_split.csv"
        data.save_features(ds, f1, s1)
        loaded = data.load_features(f1, s1)
        np.testing.assert_array_equal(loaded.features, ds.features)
        f2, s2 = tmp_path / "b.csv", tmp_path / "b_split.csv"
        data.save_features(loaded, f2, s2)
        assert f1.read_bytes() == f2.read_bytes()
        assert s1.read_bytes() == s2.read_bytes()
