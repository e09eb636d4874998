import json

import numpy as np
import pytest
from scipy import stats

from helpers import random_core, random_gdina_reg, random_reg
from lcmid.fileio import (
    ParamsBundle,
    ParseError,
    canonical_json,
    load_matrix,
    load_params,
    load_qmatrix,
    save_params,
    save_qmatrix,
)
from lcmid.fixtures import BLOCK_ORDER, CHECKSUMS, checksum, fixture
from lcmid.model import CoreParams, CovariateDesign, ModelSpec, QMatrix, RegressionParams, enumerate_patterns
from lcmid.sim import (
    ConfigError,
    Generator,
    SimConfig,
    expected_distribution,
    load_dataset,
    mixture_distribution,
    save_dataset,
    simulate,
    total_variation,
)


class TestFixtures:
    def test_k7_shape_and_rows(self):
        Q = fixture("timss_k7")
        assert Q.entries.shape == (25, 7)
        assert Q.entries[0].tolist() == [1, 0, 0, 0, 0, 0, 0]
        assert np.all(Q.entries.sum(axis=0) >= 1)

    def test_k3_rows(self):
        Q = fixture("timss_k3")
        assert Q.entries.shape == (25, 3)
        assert Q.entries[7].tolist() == [1, 1, 0]
        assert Q.entries[10].tolist() == [1, 1, 0]

    def test_checksums(self):
        for name in ("timss_k7", "timss_k3"):
            assert checksum(name) == CHECKSUMS[name]

    def test_block_order_covers_every_item(self):
        for groups in BLOCK_ORDER.values():
            assert sorted(i for g in groups for i in g) == list(range(1, 26))

    def test_unknown(self):
        with pytest.raises(KeyError):
            fixture("nope")


class TestQFiles:
    def test_round_trip_k7(self, tmp_path):
        Q = fixture("timss_k7")
        save_qmatrix(tmp_path / "q.csv", Q)
        back = load_qmatrix(tmp_path / "q.csv")
        np.testing.assert_array_equal(back.entries, Q.entries)
        assert back.labels == Q.labels

    def test_headerless(self, tmp_path):
        (tmp_path / "q.csv").write_text("1,0\n0,1\n\n1,1\n")
        assert load_qmatrix(tmp_path / "q.csv").entries.tolist() == [[1, 0], [0, 1], [1, 1]]

    def test_non_binary_entry(self, tmp_path):
        (tmp_path / "q.csv").write_text("a,b\n1,0\n0,2\n")
        with pytest.raises(ParseError, match=r"q.csv:3:2"):
            load_qmatrix(tmp_path / "q.csv")

    def test_ragged_row(self, tmp_path):
        (tmp_path / "q.csv").write_text("1,0\n0\n")
        with pytest.raises(ParseError, match=r":2: expected 2 columns"):
            load_qmatrix(tmp_path / "q.csv")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_qmatrix(tmp_path / "missing.csv")

    def test_numeric_matrix(self, tmp_path):
        (tmp_path / "m.csv").write_text("1,0.5\n-2,3e-1\n")
        np.testing.assert_array_equal(load_matrix(tmp_path / "m.csv"), [[1, 0.5], [-2, 0.3]])


class TestParamFiles:
    def test_core_round_trip_exact(self, tmp_path):
        params = random_core(np.random.default_rng(0), (2, 3), 3)
        save_params(tmp_path / "p.json", params)
        back = load_params(tmp_path / "p.json").core
        assert np.max(np.abs(back.eta - params.eta)) == 0
        assert max(np.max(np.abs(a - b)) for a, b in zip(back.theta, params.theta)) == 0

    def test_regression_with_design(self, tmp_path):
        reg = random_reg(np.random.default_rng(1), (2, 2), 2, p=1, q=1)
        design = CovariateDesign.shared(np.array([0.0, 1.0, 1.0]), 2)
        save_params(tmp_path / "p.json", ParamsBundle(reg=reg, design=design))
        back = load_params(tmp_path / "p.json")
        np.testing.assert_array_equal(back.reg.beta, reg.beta)
        np.testing.assert_array_equal(back.design.Z, design.Z)

    def test_gdina_bundle(self, tmp_path):
        Q = QMatrix(np.array([[1, 0], [0, 1], [1, 1]]))
        doc = {
            "gdina": {
                "levels": [2, 2, 2],
                "coefficients": [
                    {"item": 0, "level": 1, "effects": {"": -1.0, "0": 2.0}},
                    {"item": 1, "level": 1, "effects": {"": -1.0, "1": 2.0}},
                    {"item": 2, "level": 1, "effects": {"": -1.0, "0": 0.5, "1": 0.5, "0,1": 1.0}},
                ],
            },
            "design": {"X": [[1, 0], [1, 1]], "Z": [[0], [1]]},
            "beta": [[0, 0.1, 0.2, 0.3], [0, 0, 0, 0.5]],
            "lambda": [[[0], [0.2]], [[0], [0.1]], [[0], [0.0]]],
        }
        (tmp_path / "p.json").write_text(json.dumps(doc))
        bundle = load_params(tmp_path / "p.json").resolve(Q)
        assert bundle.reg.n_classes == 4 and bundle.reg.p == 1 and bundle.reg.q == 1
        assert bundle.reg.gamma[2][3, 1] == pytest.approx(1.0)
        assert bundle.design.Z.shape == (3, 2, 1)

    def test_malformed(self, tmp_path):
        (tmp_path / "p.json").write_text('{"eta": [0.5, 0.5],\n "theta": [[[0.5, 0.5]], ]}')
        with pytest.raises(ParseError, match=r"p.json:2:"):
            load_params(tmp_path / "p.json")
        (tmp_path / "q.json").write_text('{"something": 1}')
        with pytest.raises(ParseError, match="exactly one"):
            load_params(tmp_path / "q.json")


class TestCanonicalJson:
    def test_sorted_and_17_digits(self):
        text = canonical_json({"b": 0.1, "a": [1, 2.0, np.float64(1 / 3)], "c": np.int64(3)})
        assert text.index('"a"') < text.index('"b"')
        assert "0.10000000000000001" in text
        assert "0.33333333333333331" in text
        assert "2.0" in text
        assert json.loads(text)["c"] == 3

    def test_nonfinite_as_strings(self):
        assert json.loads(canonical_json({"x": float("inf")}))["x"] == "Infinity"


class TestGenerators:
    def test_validation(self):
        with pytest.raises(ConfigError):
            Generator("bernoulli", p=1.5)
        with pytest.raises(ConfigError):
            Generator("uniform", a=1.0, b=1.0)
        with pytest.raises(ConfigError):
            Generator.from_dict({"type": "poisson"})
        with pytest.raises(ConfigError):
            SimConfig(0)

    def test_shared_default_needs_matching_dimensions(self):
        with pytest.raises(ConfigError):
            SimConfig(10).generators(1, 2)
        assert SimConfig(10).generators(1, 1)[1] is None

    def test_config_round_trip(self):
        cfg = SimConfig(5, 9, (Generator("uniform", a=-1, b=2),), (Generator("constant", value=3.0),))
        assert SimConfig.from_dict(cfg.to_dict()) == cfg


class TestSimulate:
    def test_zero_links_are_uniform(self):
        reg = RegressionParams.zeros(ModelSpec((2, 2, 2), 3))
        data = simulate(reg, SimConfig(100_000, seed=1))
        np.testing.assert_allclose(data.responses.mean(axis=0), 0.5, atol=0.01)

    def test_single_class_binomial(self):
        rng = np.random.default_rng(0)
        core = CoreParams(np.array([1.0]), tuple(rng.dirichlet([1, 1], size=1) for _ in range(4)))
        reg = RegressionParams.from_core(core)
        N = 100_000
        data = simulate(reg, SimConfig(N, seed=2))
        for j, t in enumerate(core.theta):
            p = t[0, 1]
            assert abs(data.responses[:, j].mean() - p) < 3 * np.sqrt(p * (1 - p) / N)

    def test_seed_determinism(self, tmp_path):
        reg = random_reg(np.random.default_rng(3), (2, 3), 2, p=1, q=1)
        save_dataset(tmp_path / "a.csv", simulate(reg, SimConfig(500, seed=42)))
        save_dataset(tmp_path / "b.csv", simulate(reg, SimConfig(500, seed=42)))
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        back = load_dataset(tmp_path / "a.csv", (2, 3))
        assert back.responses.shape == (500, 2) and back.design.q == 1

    def test_latent_conditional_frequencies(self):
        rng = np.random.default_rng(4)
        reg = random_reg(rng, (3, 2), 2)
        N = 100_000
        data = simulate(reg, SimConfig(N, seed=7))
        theta = [np.exp(g) / np.exp(g).sum(axis=1, keepdims=True) for g in reg.gamma]
        for c in range(2):
            rows = data.responses[data.latent == c]
            for j, t in enumerate(theta):
                observed = np.bincount(rows[:, j], minlength=t.shape[1])
                _, pval = stats.chisquare(observed, t[c] * rows.shape[0])
                assert pval > 0.001

    def test_mixture_matches_expected_for_shared_binary(self):
        Q = QMatrix(np.array([[1, 0], [0, 1], [1, 1], [0, 1]]))
        reg = random_gdina_reg(np.random.default_rng(5), Q, p=1, q=1)
        cfg = SimConfig(20_000, seed=3)
        space = enumerate_patterns(reg.levels)
        exp = expected_distribution(reg, cfg, space)
        assert exp.sum() == pytest.approx(1.0)
        data = simulate(reg, cfg)
        realised = mixture_distribution(reg, data.design, space)
        assert total_variation(exp, realised) < 0.02
        empirical = data.pattern_counts() / cfg.n_subjects
        assert total_variation(empirical, realised) < 0.03

    def test_uniform_generator(self):
        reg = random_reg(np.random.default_rng(6), (2, 2), 2, p=1, q=0)
        cfg = SimConfig(1000, seed=1, x=(Generator("uniform", a=-1.0, b=1.0),), z=())
        data = simulate(reg, cfg)
        assert data.design.X[:, 1].min() >= -1.0 and data.design.X[:, 1].max() < 1.0
