"""Flat key=value run configuration covering all parameter blocks.

One dotted key per line, e.g. `motion.meas_noise_pos=10`. Unknown keys are
rejected; missing keys take the parameter defaults. `#` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Any, Callable, Dict

from .appearance import AppearanceParams, UpdateMode
from .association import AssociationParams, Mode
from .motion import MotionParams
from .tracker import TrackerParams

__all__ = ["RunConfig", "load_config", "parse_config"]


@dataclass(frozen=True)
class RunConfig:
    motion: MotionParams = field(default_factory=MotionParams)
    appearance: AppearanceParams = field(default_factory=AppearanceParams)
    association: AssociationParams = field(default_factory=AssociationParams)
    tracker: TrackerParams = field(default_factory=TrackerParams)


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("true", "1", "yes", "on"):
        return True
    if v in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_update_mode(s: str) -> UpdateMode:
    return UpdateMode(s.strip().lower())


def _parse_assoc_mode(s: str) -> Mode:
    return Mode(s.strip().lower())


_PARSERS: Dict[type, Callable[[str], Any]] = {
    float: float,
    int: int,
    bool: _parse_bool,
    UpdateMode: _parse_update_mode,
    Mode: _parse_assoc_mode,
}

_BLOCKS = {
    "motion": MotionParams,
    "appearance": AppearanceParams,
    "association": AssociationParams,
    "tracker": TrackerParams,
}

_KEY_ALIASES = {"appearance.lambda": "appearance.ewma_lambda"}


def _resolve(cls, name: str) -> type:
    # dataclass field types are strings under `from __future__ import annotations`
    import typing

    hints = typing.get_type_hints(cls)
    return hints[name]


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    values: Dict[str, Dict[str, Any]] = {b: {} for b in _BLOCKS}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = _KEY_ALIASES.get(key.strip(), key.strip())
        if key in seen:
            raise ValueError(f"{source}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        block, _, name = key.partition(".")
        if block not in _BLOCKS or not name:
            raise ValueError(f"{source}:{lineno}: unknown key {key!r}")
        cls = _BLOCKS[block]
        field_names = {f.name for f in fields(cls)}
        if name not in field_names:
            raise ValueError(f"{source}:{lineno}: unknown key {key!r}")
        parser = _PARSERS[_resolve(cls, name)]
        try:
            values[block][name] = parser(value.strip())
        except ValueError as e:
            raise ValueError(f"{source}:{lineno}: bad value for {key}: {e}") from None
    return RunConfig(
        motion=MotionParams(**values["motion"]),
        appearance=AppearanceParams(**values["appearance"]),
        association=AssociationParams(**values["association"]),
        tracker=TrackerParams(**values["tracker"]),
    )


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), source=str(path))
