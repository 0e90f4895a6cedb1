"""INI run-configuration loader.

Keys may sit inside ``[section]`` blocks or be written as dotted keys at the
top of the file (``grid.n = 64``); both spellings end up in the same nested
dictionary, which ``RunConfig`` then validates.
"""

import configparser
from pathlib import Path
from typing import (
    Any,
    Dict,
    Union,
)

from pydantic import ValidationError

from odhall.schemas import RunConfig
from odhall.shared.exceptions import (
    ConfigurationError,
    StorageError,
)

_ROOT = "__root__"


def _flatten(text: str) -> Dict[str, str]:
    parser = configparser.ConfigParser(
        interpolation=None, strict=True, default_section="__defaults__"
    )
    parser.optionxform = str
    try:
        parser.read_string(f"[{_ROOT}]\n{text}")
    except configparser.DuplicateOptionError as e:
        raise ConfigurationError(_dotted(e.section, e.option), "given more than once")
    except configparser.DuplicateSectionError as e:
        raise ConfigurationError(e.section, "section given more than once")
    except configparser.Error as e:
        raise ConfigurationError("<file>", f"not valid INI text: {e.message}")

    flat: Dict[str, str] = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            dotted = _dotted(section, key)
            if dotted in flat:
                raise ConfigurationError(dotted, "given more than once")
            flat[dotted] = value.strip()
    return flat


def _dotted(section: str, key: str) -> str:
    return key if section == _ROOT else f"{section}.{key}"


def _nest(flat: Dict[str, str]) -> Dict[str, Any]:
    nested: Dict[str, Any] = {}
    for dotted, value in flat.items():
        parts = dotted.split(".")
        if len(parts) > 2 or not all(parts):
            raise ConfigurationError(dotted, "unknown key")
        if len(parts) == 1:
            if isinstance(nested.get(dotted), dict):
                raise ConfigurationError(dotted, "is a section, not a key")
            nested[dotted] = value
        else:
            section = nested.setdefault(parts[0], {})
            if not isinstance(section, dict):
                raise ConfigurationError(parts[0], "is a key, not a section")
            section[parts[1]] = value
    return nested


def _first_error(error: ValidationError) -> ConfigurationError:
    item = error.errors()[0]
    key = ".".join(str(part) for part in item["loc"])
    if item["type"] == "extra_forbidden":
        return ConfigurationError(key, "unknown key")
    if item["type"] == "missing":
        return ConfigurationError(key, "required key is missing")
    return ConfigurationError(key, item["msg"], item.get("input"))


def parse_config(text: str) -> RunConfig:
    """Validated run configuration from INI text.

    Raises:
        ConfigurationError: Naming the offending dotted key and the constraint
    """
    try:
        config = RunConfig.model_validate(_nest(_flatten(text)))
    except ValidationError as e:
        raise _first_error(e)

    grid = config.build_grid()
    if "cutoff" not in config.ic.model_fields_set and config.ic.cutoff > grid.max_wavenumber:
        # the default flat radius shrinks to fit small grids; an explicit one is checked
        ic = config.ic.model_copy(update={"cutoff": float(grid.max_wavenumber)})
        config = config.model_copy(update={"ic": ic})
    if config.ic.cutoff > grid.max_wavenumber:
        raise ConfigurationError(
            "ic.cutoff",
            f"must not exceed the largest grid wavenumber {grid.max_wavenumber:.6g}",
            config.ic.cutoff,
        )
    return config


def load_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise StorageError(f"Cannot read config: {e}", path)
    return parse_config(text)


def _render_value(value: Any) -> str:
    if isinstance(value, bool):
        return "on" if value else "off"
    if isinstance(value, tuple):
        return ", ".join(
            ":".join(repr(float(x)) for x in item) if isinstance(item, tuple) else str(item)
            for item in value
        )
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def render_config(config: RunConfig) -> str:
    """INI text that ``parse_config`` turns back into ``config``."""
    lines = [f"model = {config.model.value}"]
    for section, values in config.model_dump(exclude={"model"}).items():
        lines.append("")
        lines.append(f"[{section}]")
        for key, value in values.items():
            if value is None or value == ():
                continue
            lines.append(f"{key} = {_render_value(value)}")
    return "\n".join(lines) + "\n"
