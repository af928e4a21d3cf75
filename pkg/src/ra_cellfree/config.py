"""``key = value`` experiment configuration files.

Lines are UTF-8, ``#`` starts a comment. Values given on the command line
override the file.
"""

from __future__ import annotations

from dataclasses import fields, replace

from .experiments import ExperimentConfig
from .optimizer import OptimizerConfig
from .params import SystemParams


class ConfigError(ValueError):
    pass


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def _parse_list(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _parse_int_list(text):
    return tuple(int(v) for v in _parse_list(text))


_PARAM_FIELDS = {f.name for f in fields(SystemParams)}
_OPT_FIELDS = {f.name for f in fields(OptimizerConfig)}

# key -> (parser, type name shown in errors, section)
KEYS = {name: (int if name in ("num_aps", "num_users", "directivity") else float,
               "int" if name in ("num_aps", "num_users", "directivity") else "float",
               "params")
        for name in _PARAM_FIELDS}
KEYS.update({
    "xi": (float, "float", "opt"),
    "max_outer": (int, "int", "opt"),
    "inner_tol": (float, "float", "opt"),
    "max_inner": (int, "int", "opt"),
    "armijo_c": (float, "float", "opt"),
    "armijo_shrink": (float, "float", "opt"),
    "bb_steps": (_parse_bool, "bool", "opt"),
    "init_mode": (str, "str", "opt"),
    "denom_mode": (str, "str", "opt"),
    "schemes": (_parse_list, "comma-separated list", "exp"),
    "trials": (int, "int", "exp"),
    "master_seed": (int, "int", "exp"),
    "sweep_values": (_parse_int_list, "comma-separated int list", "exp"),
    "output_path": (str, "str", "exp"),
    "isotropic_hemisphere": (_parse_bool, "bool", "exp"),
    "workers": (int, "int", "exp"),
})


def read_config_text(text, source="<config>"):
    """Parse config text into a dict of typed values."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}, line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}, line {lineno}: unknown key {key!r}")
        parser, type_name, _ = KEYS[key]
        try:
            values[key] = parser(value)
        except ValueError:
            raise ConfigError(
                f"{source}, line {lineno}: {key} = {value!r} is not a valid {type_name}") from None
    return values


def build_config(values, base=None) -> ExperimentConfig:
    """Apply a dict of typed values onto ``base`` (defaults if omitted)."""
    base = base or ExperimentConfig()
    sections = {"params": {}, "opt": {}, "exp": {}}
    for key, value in values.items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        sections[KEYS[key][2]][key] = value
    try:
        params = replace(base.params, **sections["params"])
        opt = replace(base.opt, **sections["opt"])
        return replace(base, params=params, opt=opt, **sections["exp"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def parse_config(path=None, overrides=None, base=None) -> ExperimentConfig:
    """Read ``path`` (if any), then apply ``overrides`` on top."""
    values = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            values.update(read_config_text(fh.read(), str(path)))
    values.update(overrides or {})
    return build_config(values, base)
