"""Bundled fixture packs and schema-validated JSON loading.

A pack is a JSON document holding an algebra presentation, named modules and
the list of names that are the pack's indecomposables.  A module entry is an
explicit representation (``{"dim": ..., "arrows": ...}``), a canonical module
(``{"canonical": "projective", "vertex": "2"}``) or a direct sum of earlier
entries (``{"sum": ["P2", "S1"]}``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .algebra import BasedAlgebra, algebra_from_json
from .linalg import Field, field_json, parse_field
from .modules import Module, direct_sum_module, injective, projective, simple

PACK_NAMES = ("eximp", "ejp1", "radsq3", "gamma-eximp")

_CANONICAL = {"simple": simple, "projective": projective, "injective": injective}


class FixtureError(ValueError):
    """A fixture or input file failed validation."""


@lru_cache(maxsize=None)
def _schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("data/schema.json").read_text())


def _validator(kind: str) -> jsonschema.Draft202012Validator:
    schema = {"$ref": f"#/$defs/{kind}", "$defs": _schema()["$defs"]}
    return jsonschema.Draft202012Validator(schema)


def validate(data: dict, kind: str) -> None:
    """Validate ``data`` against the bundled schema for ``kind`` (algebra, module, pack).

    Raises:
        FixtureError: with the first schema violation.
    """
    errors = sorted(_validator(kind).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.path) or "<root>"
        raise FixtureError(f"{kind} JSON invalid at {where}: {e.message}")


def _read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FixtureError(f"cannot read {path}: {exc}") from exc


def load_algebra_file(path: str | Path, field: Field | None = None) -> BasedAlgebra:
    data = _read_json(path)
    validate(data, "algebra")
    return algebra_from_json(data, field=field, name=Path(path).name.split(".")[0])


def load_module_file(A: BasedAlgebra, path: str | Path) -> Module:
    data = _read_json(path)
    validate(data, "module")
    return Module.from_json(A, data, name=Path(path).name.split(".")[0])


@dataclass
class FixturePack:
    """A loaded pack.

    Attributes:
        name: pack identifier.
        algebra: the algebra, over the requested field.
        modules: every named module of the pack.
        indecomposables: names of the pack's pairwise non-isomorphic indecomposables.
        roles: named roles, e.g. ``{"M": "M"}`` for the module under study.
    """

    name: str
    algebra: BasedAlgebra
    modules: dict[str, Module]
    indecomposables: list[str]
    roles: dict[str, str] = field(default_factory=dict)
    description: str = ""

    def __getitem__(self, key: str) -> Module:
        return self.modules[self.roles.get(key, key)]

    def ind(self) -> list[Module]:
        return [self.modules[k] for k in self.indecomposables]


def pack_data(name: str) -> dict:
    if name not in PACK_NAMES:
        raise FixtureError(f"unknown fixture pack {name!r}; expected one of {', '.join(PACK_NAMES)}")
    data = json.loads(resources.files(__package__).joinpath(f"data/{name}.json").read_text())
    validate(data, "pack")
    return data


def validate_all() -> list[str]:
    """Schema-validate every bundled pack; returns the pack names."""
    for name in PACK_NAMES:
        pack_data(name)
    return list(PACK_NAMES)


def _build_module(A: BasedAlgebra, name: str, entry: dict, built: dict[str, Module]) -> Module:
    if "canonical" in entry:
        v = A.vertex_index(entry["vertex"])
        return _CANONICAL[entry["canonical"]](A, v).with_name(name)
    if "sum" in entry:
        missing = [k for k in entry["sum"] if k not in built]
        if missing:
            raise FixtureError(f"module {name} refers to undefined {missing}")
        return direct_sum_module([built[k] for k in entry["sum"]], name=name)
    return Module.from_json(A, entry, name=name)


@lru_cache(maxsize=None)
def _load(name: str, field_key: str) -> FixturePack:
    data = pack_data(name)
    fld = parse_field(json.loads(field_key)) if field_key else None
    A = algebra_from_json(data["algebra"], field=fld, name=name)
    built: dict[str, Module] = {}
    for mname, entry in data["modules"].items():
        built[mname] = _build_module(A, mname, entry, built)
    for k in data["indecomposables"]:
        if k not in built:
            raise FixtureError(f"pack {name} lists undefined indecomposable {k}")
    return FixturePack(name, A, built, list(data["indecomposables"]), dict(data.get("roles", {})), data.get("description", ""))


def load_pack(name: str, field: Field | str | None = None) -> FixturePack:
    """Load a bundled pack, optionally over another field (``"Q"``, ``"Fp:3"`` or a Field).

    Packs are cached per field, so repeated loads share module objects and caches.
    """
    key = json.dumps(field_json(parse_field(field))) if field is not None else ""
    return _load(name, key)
