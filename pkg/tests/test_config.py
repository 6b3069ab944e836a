import pytest

from config import RunConfig, env_seed, load_config, render_defaults, tomllib
from datafiles.provenance import Provenance, config_hash, read_header
from errors import ConfigError


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestLoadConfig:
    def test_no_file_means_defaults(self):
        assert load_config(None) == RunConfig()

    def test_rendered_defaults_load_back(self, tmp_path):
        assert load_config(write(tmp_path, render_defaults())) == RunConfig()

    def test_partial_override(self, tmp_path):
        cfg = load_config(write(tmp_path, "[mcmc]\nchains = 2\nlag = 5\n\n[synthetic]\nn_participants = 40\n"))
        assert cfg.mcmc.chains == 2 and cfg.mcmc.lag == 5
        assert cfg.mcmc.burnin == 7500
        assert cfg.synthetic.n_participants == 40

    def test_unknown_section(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown config section"):
            load_config(write(tmp_path, "[plots]\ndpi = 300\n"))

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError, match=r"unknown key\(s\) in \[mcmc\]: thin"):
            load_config(write(tmp_path, "[mcmc]\nthin = 3\n"))

    def test_wrong_type(self, tmp_path):
        with pytest.raises(ConfigError, match="mcmc.chains"):
            load_config(write(tmp_path, "[mcmc]\nchains = \"four\"\n"))

    def test_invalid_value(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "[synthetic]\ngroup_proportions = [0.5, 0.5, 0.5]\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(str(tmp_path / "absent.toml"))

    def test_bad_toml(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot parse"):
            load_config(write(tmp_path, "[mcmc\n"))

    def test_custom_grid(self, tmp_path):
        cfg = load_config(write(tmp_path, "[world]\npreset = \"custom\"\nvalues = [1, 2, 3]\nmidpoint = 2\n"))
        assert cfg.grid_spec() == ((1.0, 2.0, 3.0), 2.0)


def test_render_defaults_is_toml():
    data = tomllib.loads(render_defaults())
    assert data["mcmc"]["burnin"] == 7500
    assert data["model"]["levels"] == ["J0", "J1"]


class TestEnvSeed:
    def test_unset(self):
        assert env_seed() is None

    def test_set(self, monkeypatch):
        monkeypatch.setenv("SEED", "17")
        assert env_seed() == 17

    def test_not_a_number(self, monkeypatch):
        monkeypatch.setenv("SEED", "seventeen")
        with pytest.raises(ConfigError):
            env_seed()


class TestProvenance:
    def test_hash_follows_the_config(self, tmp_path):
        base = config_hash(RunConfig())
        assert base == config_hash(load_config(None))
        assert len(base) == 16
        changed = load_config(write(tmp_path, "[mcmc]\nchains = 3\n"))
        assert config_hash(changed) != base

    def test_hash_follows_the_version(self):
        assert config_hash(RunConfig(), "0.3.0") != config_hash(RunConfig(), "9.9.9")

    def test_header_round_trip(self, tmp_path):
        stamp = Provenance("0.3.0", 42, "0123456789abcdef")
        path = write(tmp_path, stamp.header() + "\na,b\n1,2\n", "out.csv")
        assert stamp.header() == "# version=0.3.0 seed=42 config_hash=0123456789abcdef"
        assert read_header(path) == stamp

    def test_header_without_seed(self, tmp_path):
        stamp = Provenance("0.3.0", None, "abc")
        assert "seed=none" in stamp.header()
        assert read_header(write(tmp_path, stamp.header() + "\n", "out.csv")) == stamp

    def test_no_header(self, tmp_path):
        assert read_header(write(tmp_path, "a,b\n", "plain.csv")) is None
