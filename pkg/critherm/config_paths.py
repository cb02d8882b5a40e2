import functools
import os
from pathlib import Path


__config_root__ = Path("~/.critherm").expanduser()


@functools.lru_cache(maxsize=None)
def load_config_path():
    if "CRITHERM_CONFIG" in os.environ:
        path = Path(os.environ["CRITHERM_CONFIG"]).expanduser()
    else:
        path = __config_root__ / "config"
    return path


@functools.lru_cache(maxsize=None)
def load_critherm_config(path):
    from critherm.config import CrithermConfig

    if path.exists():
        return CrithermConfig.load_config(path)
    else:
        return CrithermConfig.default_config()


config_path = load_config_path()
critherm_config = load_critherm_config(config_path)
