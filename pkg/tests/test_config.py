import pytest

from privedge.config import (
    ConfigError,
    ExperimentConfig,
    load_config,
    parse_config_file,
)


def write(tmp_path, text):
    path = tmp_path / "exp.conf"
    path.write_text(text)
    return str(path)


def test_defaults():
    config = load_config()
    assert config.e_max == 9
    assert config.gamma == (0.5, 1.0, 2.0, 4.0, 8.0)
    assert config.z == (1, 2, 3, 4)
    assert config.trials == 10_000
    assert not config.no_upload


def test_parse_file_with_comments(tmp_path):
    path = write(
        tmp_path,
        """
        # experiment settings
        e_max = 6       # smaller sweep
        gamma = 0.5,2,8
        z = 1,2
        no_upload = true
        eta = 1.6
        """,
    )
    values = parse_config_file(path)
    assert values == {
        "e_max": 6,
        "gamma": (0.5, 2.0, 8.0),
        "z": (1, 2),
        "no_upload": True,
        "eta": 1.6,
    }


def test_unknown_key_rejected(tmp_path):
    path = write(tmp_path, "wavelength = 3\n")
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_file(path)


def test_bad_syntax_reports_line(tmp_path):
    path = write(tmp_path, "e_max = 6\njust words\n")
    with pytest.raises(ConfigError, match=":2:"):
        parse_config_file(path)


def test_bad_value_type(tmp_path):
    path = write(tmp_path, "trials = many\n")
    with pytest.raises(ConfigError, match="invalid value"):
        parse_config_file(path)


def test_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config_file("/nonexistent/exp.conf")


def test_overrides_beat_file(tmp_path):
    path = write(tmp_path, "trials = 500\nseed = 1\n")
    config = load_config(path, trials=50)
    assert config.trials == 50
    assert config.seed == 1


def test_none_overrides_ignored(tmp_path):
    path = write(tmp_path, "trials = 500\n")
    config = load_config(path, trials=None, seed=None)
    assert config.trials == 500
    assert config.seed == 0


def test_validation_rules():
    with pytest.raises(ConfigError):
        load_config(trials=0)
    with pytest.raises(ConfigError):
        load_config(mu=1.5)
    with pytest.raises(ConfigError):
        load_config(eta=0.0)
    with pytest.raises(ConfigError):
        load_config(gamma=(-1.0,))
    with pytest.raises(ConfigError):
        load_config(z=(-1,))
    with pytest.raises(ConfigError):
        load_config(e=3, n=4)


def test_empty_sweep_lists_allowed():
    config = load_config(gamma=(), z=())
    assert config.gamma == () and config.z == ()


def test_system_params_carries_fields():
    config = load_config(eta=1.6, e_max=6)
    params = config.system_params(z=2, gamma=4.0)
    assert (params.z, params.gamma, params.eta, params.e_max) == (2, 4.0, 1.6, 6)


def test_system_params_invalid_becomes_config_error():
    config = ExperimentConfig()
    with pytest.raises(ConfigError):
        config.system_params(z=-1, gamma=1.0)
