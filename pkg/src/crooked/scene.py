"""Scene documents: named vectors, points, crooked planes, flows and
foliation specs in one YAML file, validated against a JSON schema.

Errors carry the line of the offending node.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

import jsonschema
import numpy as np
import yaml

from .errors import CrookedError, InvalidParams
from .flows import REGIONS, HyperbolicFlow, OrbitParams, ParabolicFlow
from .minkowski import Isometry, Point, causal_class, is_spacelike, vec
from .planes import CrookedPlane
from .verify import DEFAULT_INTERVAL, DEFAULT_SAMPLES, FAMILIES, FoliationSpec


class SceneError(CrookedError):
    def __init__(self, message, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_NUM = {"type": "number"}
_VEC = {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3}
_REF_OR_VEC = {"oneOf": [{"type": "string"}, _VEC]}

_HYPERBOLIC = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind", "l", "alpha"],
    "properties": {
        "kind": {"const": "hyperbolic"},
        "l": {"type": "number", "exclusiveMinimum": 0},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "conjugator": {
            "type": "object",
            "additionalProperties": False,
            "required": ["linear", "translation"],
            "properties": {
                "linear": {"type": "array", "items": _VEC, "minItems": 3, "maxItems": 3},
                "translation": _VEC,
            },
        },
    },
}
_PARABOLIC = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind", "a", "b", "c"],
    "properties": {"kind": {"const": "parabolic"}, "a": _NUM, "b": _NUM, "c": _NUM},
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "vectors": {"type": "object", "additionalProperties": _VEC},
        "points": {"type": "object", "additionalProperties": _VEC},
        "crooked_planes": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": False,
                "required": ["vertex", "director"],
                "properties": {"vertex": _REF_OR_VEC, "director": _REF_OR_VEC},
            },
        },
        "flows": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["kind"],
                "properties": {"kind": {"enum": ["hyperbolic", "parabolic"]}},
                "if": {"properties": {"kind": {"const": "hyperbolic"}}},
                "then": _HYPERBOLIC,
                "else": _PARABOLIC,
            },
        },
        "foliation_specs": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": False,
                "required": ["flow"],
                "properties": {
                    "flow": {"type": "string"},
                    "region": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["tag"],
                        "properties": {
                            "tag": {"enum": list(REGIONS)},
                            "k": _NUM,
                            "t0": _NUM,
                            "shift": _NUM,
                        },
                    },
                    "family": {"enum": list(FAMILIES)},
                    "interval": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
                    "samples": {"type": "integer", "minimum": 2},
                },
            },
        },
    },
}


# YAML 1.1 only reads floats with a dot and a signed exponent; accept
# ``1e-05`` and friends too so that Python reprs round-trip
_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _relevance(err):
    # report a bad ``kind`` before the fields that depend on it
    return (err.validator == "enum", -len(err.absolute_path))


class _Loader(yaml.SafeLoader):
    pass


_FLOAT = re.compile(
        r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
        |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
        |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
        |[-+]?\.(?:inf|Inf|INF)
        |\.(?:nan|NaN|NAN))$""",
        re.X,
)
_Loader.add_implicit_resolver("tag:yaml.org,2002:float", _FLOAT, list("-+0123456789."))


class _Dumper(yaml.SafeDumper):
    pass


def _float_repr(dumper, x):
    return dumper.represent_scalar("tag:yaml.org,2002:float", repr(float(x)))


_Dumper.add_implicit_resolver("tag:yaml.org,2002:float", _FLOAT, list("-+0123456789."))
_Dumper.add_representer(float, _float_repr)


@dataclass(frozen=True)
class SpecEntry:
    flow: str
    region: Optional[OrbitParams] = None
    family: str = "ultraparallel"
    interval: tuple = DEFAULT_INTERVAL
    samples: int = DEFAULT_SAMPLES


@dataclass
class Scene:
    vectors: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    crooked_planes: dict = field(default_factory=dict)
    flows: dict = field(default_factory=dict)
    foliation_specs: dict = field(default_factory=dict)

    def foliation(self, name: str) -> FoliationSpec:
        e = self.foliation_specs[name]
        flow = self.flows[e.flow]
        if isinstance(flow, ParabolicFlow):
            return FoliationSpec.parabolic(flow)
        return FoliationSpec.hyperbolic(flow, e.region or OrbitParams("axis"), e.family)

    def to_dict(self) -> dict:
        return scene_to_dict(self)

    def __eq__(self, other):
        return isinstance(other, Scene) and self.to_dict() == other.to_dict()


def _node_line(node, path):
    """1-based line of the YAML node at ``path`` (deepest resolvable)."""
    line = node.start_mark.line + 1
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = next((v for k, v in node.value if k.value == key), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            nxt = node.value[key]
        else:
            nxt = None
        if nxt is None:
            break
        node = nxt
        line = node.start_mark.line + 1
    return line


def _non_string_key(obj, path):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if not isinstance(k, str):
                return k, path
            found = _non_string_key(v, path + [k])
            if found is not None:
                return found
    return None


def _vector(raw, names):
    if isinstance(raw, str):
        if raw not in names:
            raise KeyError(raw)
        return names[raw]
    return vec(raw)


def load_scene(text: str) -> Scene:
    """Parse and validate a scene document; :class:`SceneError` on failure."""
    try:
        data = yaml.load(text, Loader=_Loader)
        root = yaml.compose(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise SceneError(str(exc).splitlines()[0], mark.line + 1 if mark else None) from None
    if data is None:
        data = {}
    bad = _non_string_key(data, [])
    if bad is not None:
        key, path = bad
        raise SceneError(f"name {key!r} is not a string (quote it)", _node_line(root, path))
    exc = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(data), key=_relevance)
    if exc is not None:
        line = _node_line(root, list(exc.absolute_path)) if root is not None else None
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SceneError(f"{where}: {exc.message}", line) from None

    def fail(msg, *path):
        raise SceneError(msg, _node_line(root, list(path)))

    scene = Scene()
    for name, v in data.get("vectors", {}).items():
        scene.vectors[name] = vec(v)
    for name, p in data.get("points", {}).items():
        scene.points[name] = Point(p)
    for name, cp in data.get("crooked_planes", {}).items():
        try:
            vertex = cp["vertex"]
            vertex = scene.points[vertex] if isinstance(vertex, str) else Point(vertex)
        except KeyError:
            fail(f"unknown point {cp['vertex']!r}", "crooked_planes", name, "vertex")
        try:
            u = _vector(cp["director"], scene.vectors)
        except KeyError:
            fail(f"unknown vector {cp['director']!r}", "crooked_planes", name, "director")
        if not is_spacelike(u):
            fail(f"director {u.tolist()} is {causal_class(u)}, not spacelike", "crooked_planes", name, "director")
        scene.crooked_planes[name] = CrookedPlane(vertex, u)
    for name, f in data.get("flows", {}).items():
        try:
            if f["kind"] == "parabolic":
                scene.flows[name] = ParabolicFlow(float(f["a"]), float(f["b"]), float(f["c"]))
            else:
                conj = f.get("conjugator")
                C = Isometry(conj["linear"], conj["translation"]) if conj else Isometry.identity()
                scene.flows[name] = HyperbolicFlow(float(f["l"]), float(f["alpha"]), C)
        except (CrookedError, ValueError) as exc:
            fail(str(exc), "flows", name)
    for name, s in data.get("foliation_specs", {}).items():
        if s["flow"] not in scene.flows:
            fail(f"unknown flow {s['flow']!r}", "foliation_specs", name, "flow")
        region = None
        if "region" in s:
            r = s["region"]
            try:
                region = OrbitParams(r["tag"], float(r.get("k", 0.0)), float(r.get("t0", 0.0)), float(r.get("shift", 0.0)))
            except CrookedError as exc:
                fail(str(exc), "foliation_specs", name, "region")
        interval = tuple(float(x) for x in s.get("interval", DEFAULT_INTERVAL))
        if not interval[0] < interval[1]:
            fail("interval must be increasing", "foliation_specs", name, "interval")
        scene.foliation_specs[name] = SpecEntry(
            s["flow"], region, s.get("family", "ultraparallel"), interval, int(s.get("samples", DEFAULT_SAMPLES))
        )
    return scene


def _floats(a):
    return [float(x) for x in np.asarray(a, dtype=float).ravel()]


def flow_to_dict(flow) -> dict:
    if isinstance(flow, ParabolicFlow):
        return {"kind": "parabolic", "a": float(flow.a), "b": float(flow.b), "c": float(flow.c)}
    d = {"kind": "hyperbolic", "l": float(flow.l), "alpha": float(flow.alpha)}
    C = flow.conjugator
    if not (np.array_equal(C.linear, np.eye(3)) and not C.translation.any()):
        d["conjugator"] = {
            "linear": [_floats(row) for row in C.linear],
            "translation": _floats(C.translation),
        }
    return d


def spec_to_dict(e: SpecEntry) -> dict:
    d = {"flow": e.flow}
    if e.region is not None:
        r = e.region
        d["region"] = {"tag": r.region, "k": float(r.k), "t0": float(r.t0), "shift": float(r.shift)}
    d["family"] = e.family
    d["interval"] = [float(x) for x in e.interval]
    d["samples"] = int(e.samples)
    return d


def scene_to_dict(scene: Scene) -> dict:
    out = {}
    if scene.vectors:
        out["vectors"] = {k: _floats(v) for k, v in scene.vectors.items()}
    if scene.points:
        out["points"] = {k: _floats(p.coords) for k, p in scene.points.items()}
    if scene.crooked_planes:
        out["crooked_planes"] = {
            k: {"vertex": _floats(cp.vertex.coords), "director": _floats(cp.director)}
            for k, cp in scene.crooked_planes.items()
        }
    if scene.flows:
        out["flows"] = {k: flow_to_dict(f) for k, f in scene.flows.items()}
    if scene.foliation_specs:
        out["foliation_specs"] = {k: spec_to_dict(e) for k, e in scene.foliation_specs.items()}
    return out


def dump_scene(scene: Scene) -> str:
    return yaml.dump(scene_to_dict(scene), Dumper=_Dumper, sort_keys=False, default_flow_style=None)


def read_scene(path) -> Scene:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidParams(f"cannot read scene {path}: {exc.strerror}") from None
    return load_scene(text)
