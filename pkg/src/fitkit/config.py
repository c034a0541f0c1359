"""Loading and validating JSON config files.

A config names a group and one place (``inertia_gens``, ``decomp_gens``,
``frobenius_lift``), optionally a prime, a character ``chi`` of the
prime-to-p part and a list of ``places`` for the multi-place criterion::

    {"group": [3, 3], "inertia_gens": [[1, 0]], "decomp_gens": [[1, 0], [0, 1]],
     "frobenius_lift": [0, 1], "prime": 3}

Errors are raised as :class:`ConfigError` with the JSON path of the offending
field (or the line and column for malformed JSON).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .groups import Character, FiniteAbelianGroup, GroupInputError, InertiaConfig, PrimarySplit, is_prime


class ConfigError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


@dataclass
class ConfigFile:
    group: FiniteAbelianGroup
    place: InertiaConfig | None
    prime: int | None = None
    chi: Character | None = None
    places: list[InertiaConfig] = field(default_factory=list)
    raw: dict = field(default_factory=dict)

    @property
    def config(self) -> InertiaConfig:
        if self.place is not None:
            return self.place
        if self.places:
            return self.places[0]
        raise ConfigError("$", "no place given (need inertia_gens/decomp_gens/frobenius_lift or places)")

    def all_places(self) -> list[InertiaConfig]:
        return self.places or ([self.place] if self.place is not None else [])


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(where, "expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
    raise ConfigError(where, f"expected an integer, got {value!r}")


def _int_list(value: Any, where: str) -> list[int]:
    if not isinstance(value, list):
        raise ConfigError(where, f"expected a list of integers, got {value!r}")
    return [_int(v, f"{where}[{k}]") for k, v in enumerate(value)]


def _element(value: Any, where: str, G: FiniteAbelianGroup) -> tuple[int, ...]:
    e = _int_list(value, where)
    if len(e) != len(G.factors):
        raise ConfigError(where, f"element has {len(e)} coordinates, the group has {len(G.factors)} factors")
    return G.reduce(e)


def _elements(value: Any, where: str, G: FiniteAbelianGroup) -> list[tuple[int, ...]]:
    if not isinstance(value, list):
        raise ConfigError(where, "expected a list of elements")
    return [_element(v, f"{where}[{k}]", G) for k, v in enumerate(value)]


def _place(block: dict, where: str, G: FiniteAbelianGroup) -> InertiaConfig:
    for key in ("inertia_gens", "decomp_gens", "frobenius_lift"):
        if key not in block:
            raise ConfigError(f"{where}.{key}", "missing field")
    inertia = _elements(block["inertia_gens"], f"{where}.inertia_gens", G)
    decomp = _elements(block["decomp_gens"], f"{where}.decomp_gens", G)
    phi = _element(block["frobenius_lift"], f"{where}.frobenius_lift", G)
    parts = None
    if block.get("decomposition_override") is not None:
        raw = block["decomposition_override"]
        if not isinstance(raw, list):
            raise ConfigError(f"{where}.decomposition_override", "expected a list of [generator, order] pairs")
        parts = []
        for k, pair in enumerate(raw):
            w = f"{where}.decomposition_override[{k}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise ConfigError(w, "expected a [generator, order] pair")
            parts.append((_element(pair[0], f"{w}[0]", G), _int(pair[1], f"{w}[1]")))
    try:
        return InertiaConfig.build(G, inertia, decomp, phi, parts)
    except GroupInputError as exc:
        raise ConfigError(where, str(exc)) from None


def parse_config(data: Any) -> ConfigFile:
    if not isinstance(data, dict):
        raise ConfigError("$", "a config must be a JSON object")
    if "group" not in data:
        raise ConfigError("$.group", "missing field")
    factors = _int_list(data["group"], "$.group")
    if any(n < 1 for n in factors):
        raise ConfigError("$.group", "cyclic factor orders must be positive")
    G = FiniteAbelianGroup(tuple(factors))

    has_place = any(k in data for k in ("inertia_gens", "decomp_gens", "frobenius_lift"))
    place = _place(data, "$", G) if has_place else None

    places = []
    if data.get("places") is not None:
        if not isinstance(data["places"], list) or not data["places"]:
            raise ConfigError("$.places", "expected a non-empty list of place blocks")
        for k, block in enumerate(data["places"]):
            if not isinstance(block, dict):
                raise ConfigError(f"$.places[{k}]", "a place must be a JSON object")
            places.append(_place(block, f"$.places[{k}]", G))
    if place is None and not places:
        raise ConfigError("$", "no place given (need inertia_gens/decomp_gens/frobenius_lift or places)")

    prime = None
    if data.get("prime") is not None:
        prime = _int(data["prime"], "$.prime")
        if prime == 2 or not is_prime(prime):
            raise ConfigError("$.prime", f"{prime} is not an odd prime")

    chi = None
    if data.get("chi") is not None:
        if prime is None:
            raise ConfigError("$.chi", "chi needs a prime")
        Gq = PrimarySplit(G, prime).prime_to_p
        ex = _int_list(data["chi"], "$.chi")
        if len(ex) != len(Gq.factors):
            raise ConfigError("$.chi", f"expected {len(Gq.factors)} exponents (one per factor of {Gq})")
        try:
            chi = Character(Gq, tuple(ex))
        except GroupInputError as exc:
            raise ConfigError("$.chi", str(exc)) from None
    return ConfigFile(G, place, prime, chi, places, data)


def loads(text: str) -> ConfigFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return parse_config(data)


def load(path: str | Path) -> ConfigFile:
    return loads(Path(path).read_text(encoding="utf-8"))


def dump_config(cfg: InertiaConfig, prime: int | None = None) -> dict:
    out = cfg.as_dict()
    if prime is not None:
        out["prime"] = prime
    return out
