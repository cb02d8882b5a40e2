import pytest

from critherm.config import _FLAG_TYPES, CrithermConfig
from critherm.exceptions import BadConfigException
from tests.util import check_exception_raised


def test_defaults():
    config = CrithermConfig.default_config()
    assert config.get_flag("threads") == 1
    assert config.get_flag("output_format") == "csv"
    assert config.size_cap("Spin1SMA") == 2000
    assert config.size_cap("oracle") == 12
    assert "probability_floor" in config.valid_flags()


def test_set_flag_maps_types():
    config = CrithermConfig()
    config.set_flag("threads", "4")
    config.set_flag("probability_floor", "1e-12")
    assert config.get_flag("threads") == 4
    assert config.get_flag("probability_floor") == 1e-12
    config.set_flag("threads", None)
    assert config.get_flag("threads") == 1
    config.set_flag("degeneracy_rtol", 1)
    assert isinstance(config.get_flag("degeneracy_rtol"), float)
    config.set_flag("threads", 2.0)
    assert config.get_flag("threads") == 2 and isinstance(config.get_flag("threads"), int)


def test_flags_are_numbers_or_strings():
    assert set(_FLAG_TYPES.values()) <= {int, float, str}


@pytest.mark.parametrize("flag,value", [("threads", "0"), ("threads", "many"), ("output_format", "xlsx"), ("degeneracy_rtol", "-1")])
def test_set_flag_rejects_bad_values(flag, value):
    check_exception_raised(lambda: CrithermConfig().set_flag(flag, value), ValueError)


def test_unknown_flag():
    check_exception_raised(lambda: CrithermConfig().get_flag("colour"), KeyError)
    check_exception_raised(lambda: CrithermConfig().set_flag("colour", "red"), KeyError)


def test_env_override(monkeypatch):
    config = CrithermConfig()
    config.set_flag("xxz_size_cap", 10)
    monkeypatch.setenv("CRITHERM_SIZE_CAP", "14")
    assert config.size_cap("XXZChain") == 14
    monkeypatch.setenv("CRITHERM_SIZE_CAP", "fourteen")
    check_exception_raised(lambda: config.size_cap("XXZChain"), BadConfigException, "CRITHERM_SIZE_CAP")
    monkeypatch.delenv("CRITHERM_SIZE_CAP")
    assert config.size_cap("XXZChain") == 10


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "critherm" / "config"
    config = CrithermConfig()
    config.set_flag("threads", 3)
    config.set_flag("output_format", "json")
    config.to_config_file(path)
    loaded = CrithermConfig.load_config(path)
    assert loaded.get_flag("threads") == 3
    assert loaded.get_flag("output_format") == "json"
    assert loaded.get_flag("spin1_size_cap") == 2000

    config.set_flag("threads", None)
    config.to_config_file(path)
    assert "threads" not in path.read_text()


def test_load_config_errors(tmp_path):
    check_exception_raised(lambda: CrithermConfig.load_config(tmp_path / "missing"), FileNotFoundError)
    path = tmp_path / "config"
    path.write_text("[flags]\nthreads = -2\n")
    check_exception_raised(lambda: CrithermConfig.load_config(path), BadConfigException, "flags.threads")
