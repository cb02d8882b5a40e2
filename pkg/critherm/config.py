import configparser
import os
from dataclasses import dataclass
from pathlib import Path

from typing import Any, Optional

from critherm.exceptions import BadConfigException

_FLAG_TYPES = {
    "xxz_size_cap": int,
    "spin1_size_cap": int,
    "oracle_size_cap": int,
    "threads": int,
    "degeneracy_rtol": float,
    "probability_floor": float,
    "output_format": str,
}

_DEFAULT_FLAGS = {
    "xxz_size_cap": 12,  # 2^12 = 4096 basis states
    "spin1_size_cap": 2000,
    "oracle_size_cap": 12,
    "threads": 1,
    "degeneracy_rtol": 1e-9,
    "probability_floor": 1e-14,
    "output_format": "csv",
}

# flags that an environment variable may override at read time
_ENV_OVERRIDES = {
    "xxz_size_cap": "CRITHERM_SIZE_CAP",
}

_OUTPUT_FORMATS = ("csv", "json")


def _map_type(value, val_type):
    if isinstance(value, val_type) and not isinstance(value, bool):
        return value
    return val_type(value)


@dataclass
class CrithermConfig:
    @classmethod
    def default_config(cls) -> "CrithermConfig":
        return cls()

    @classmethod
    def load_config(cls, path) -> "CrithermConfig":
        """Load from a config file."""
        path = Path(path)
        config = configparser.ConfigParser()
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        config.read(path)

        critherm_config = cls()
        if "flags" in config:
            for flag_name in _FLAG_TYPES:
                if flag_name in config["flags"]:
                    try:
                        critherm_config.set_flag(flag_name, config["flags"][flag_name])
                    except ValueError as e:
                        raise BadConfigException(str(e), key_path=f"flags.{flag_name}") from e
        return critherm_config

    def to_config_file(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        config = configparser.ConfigParser()
        if path.exists():
            config.read(os.path.expanduser(path))

        if "flags" not in config:
            config.add_section("flags")

        for flag_name in _FLAG_TYPES:
            val = getattr(self, f"flag_{flag_name}", None)
            if val is not None:
                config.set("flags", flag_name, str(val))
            else:
                if "flags" in config and flag_name in config["flags"]:
                    config.remove_option("flags", flag_name)

        with path.open("w") as f:
            config.write(f)

    def valid_flags(self):
        return list(_FLAG_TYPES.keys())

    def get_flag(self, flag_name):
        if flag_name not in self.valid_flags():
            raise KeyError(f"Invalid flag: {flag_name}")
        env_name = _ENV_OVERRIDES.get(flag_name)
        if env_name and os.environ.get(env_name):
            try:
                return _map_type(os.environ[env_name], _FLAG_TYPES[flag_name])
            except ValueError as e:
                raise BadConfigException(f"invalid value {os.environ[env_name]!r}", key_path=env_name) from e
        value = getattr(self, f"flag_{flag_name}", None)
        return _DEFAULT_FLAGS[flag_name] if value is None else value

    def set_flag(self, flag_name, value: Optional[Any]):
        if flag_name not in self.valid_flags():
            raise KeyError(f"Invalid flag: {flag_name}")
        if value is not None:
            value = _map_type(value, _FLAG_TYPES.get(flag_name, str))
            if flag_name == "output_format" and value not in _OUTPUT_FORMATS:
                raise ValueError(f"Invalid output format: {value} (expected one of {', '.join(_OUTPUT_FORMATS)})")
            if _FLAG_TYPES[flag_name] in (int, float) and value <= 0:
                raise ValueError(f"Flag {flag_name} must be positive, got {value}")
            setattr(self, f"flag_{flag_name}", value)
        else:
            setattr(self, f"flag_{flag_name}", None)

    def size_cap(self, kind: str) -> int:
        """Size cap for a model kind ("Spin1SMA", "XXZChain" or "oracle")."""
        flag = {"Spin1SMA": "spin1_size_cap", "XXZChain": "xxz_size_cap", "oracle": "oracle_size_cap"}[kind]
        return self.get_flag(flag)
