"""JSON schema ``tpc-invariants/1``: parsing input documents and encoding
results.

Integers outside the signed 64-bit range are written as decimal strings,
residues as ``{"value": v, "mod": n}`` (``mod`` 0 meaning a plain integer).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import kirby, lattice
from .embed import Block, Condition, ConstructionCertificate, FeasibilityReport, TargetSurface
from .jspace import JClassDescriptor, SurfaceData
from .kirby import LinkingPresentation, SpinStructureRep
from .lattice import FinAbGroup, FormDescriptor, GroupElement
from .residue import Residue

SCHEMA_VERSION = "tpc-invariants/1"
INT64 = 2 ** 63


class SchemaError(ValueError):
    """Malformed input document; mapped to exit code 2."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# ---------------------------------------------------------------------------
# encoding


def encode_int(x: int) -> int | str:
    return x if -INT64 <= x < INT64 else str(x)


def encode(obj: Any) -> Any:
    """Convert library values to JSON-ready data."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return encode_int(obj)
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else encode_int(obj.numerator)
    if isinstance(obj, Residue):
        return {"value": encode_int(obj.value), "mod": encode_int(obj.mod)}
    if isinstance(obj, FinAbGroup):
        return {"free_rank": obj.free_rank, "torsion": [encode_int(t) for t in obj.torsion],
                "text": str(obj)}
    if isinstance(obj, GroupElement):
        return {"group": encode(obj.group), "coords": [encode_int(x) for x in obj.coords]}
    if isinstance(obj, SpinStructureRep):
        return list(obj.c)
    if isinstance(obj, FormDescriptor):
        return {"b_plus": obj.b_plus, "b_minus": obj.b_minus, "parity": obj.parity}
    if isinstance(obj, LinkingPresentation):
        return presentation_to_json(obj)
    if isinstance(obj, SurfaceData):
        return {"a": [encode_int(x) for x in obj.a], "twists": [encode_int(x) for x in obj.twists]}
    if isinstance(obj, JClassDescriptor):
        return {
            "gamma": encode(obj.gamma),
            "c1": encode(obj.c1),
            "spin": encode(obj.spin),
            "theta": encode(obj.theta),
            "theta_phi": encode(obj.theta_phi),
            "orbit_order": encode_int(obj.orbit_order),
        }
    if isinstance(obj, Condition):
        return {"name": obj.name, "required": encode(obj.required),
                "actual": encode(obj.actual), "passed": obj.passed}
    if isinstance(obj, FeasibilityReport):
        return {"verdict": obj.verdict, "reasons": [encode(r) for r in obj.reasons],
                "spin_realizable": obj.spin_realizable,
                "witness_m": obj.witness_m, "witness_beta": encode(obj.witness_beta)}
    if isinstance(obj, TargetSurface):
        return target_to_json(obj)
    if isinstance(obj, ConstructionCertificate):
        return certificate_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(encode(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def presentation_to_json(P: LinkingPresentation) -> dict:
    out: dict = {"L": [[encode_int(x) for x in row] for row in P.L]}
    if P.component_names is not None:
        out["component_names"] = list(P.component_names)
    if P.arf_overrides:
        out["arf_overrides"] = [{"sublink": list(k), "arf": v} for k, v in sorted(P.arf_overrides.items())]
    return out


def target_to_json(X: TargetSurface) -> dict:
    out = {"b_plus": X.b_plus, "b_minus": X.b_minus, "div_c1": X.div_c1, "spin": X.spin,
           "simply_connected": X.simply_connected}
    if X.pairing_values is not None:
        out["pairing_values"] = list(X.pairing_values)
    if X.c1_squared is not None:
        out["c1_squared"] = encode_int(X.c1_squared)
    return out


def certificate_to_json(cert: ConstructionCertificate) -> dict:
    claimed = {k: encode(v) for k, v in cert.claimed.items()}
    return {
        "version": SCHEMA_VERSION,
        "base": presentation_to_json(cert.base),
        "summands": [{"kind": b.kind, "role": b.role, "sign": b.sign} for b in cert.summands],
        "c": [encode_int(x) for x in cert.c],
        "claimed": claimed,
        "perp": encode(cert.perp),
        "surface": encode(cert.surface),
        "theta_target": encode(cert.theta_target),
        "target": None if cert.target is None else target_to_json(cert.target),
        "reserved": None if cert.reserved is None else list(cert.reserved),
        "params": encode(cert.params),
    }


# ---------------------------------------------------------------------------
# decoding


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool):
        raise SchemaError(path, "expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x, 10)
        except ValueError:
            pass
    raise SchemaError(path, f"expected an integer, got {x!r}")


def _int_list(x: Any, path: str) -> list[int]:
    if not isinstance(x, list):
        raise SchemaError(path, "expected a list of integers")
    return [_int(v, f"{path}[{i}]") for i, v in enumerate(x)]


def _obj(x: Any, path: str) -> dict:
    if not isinstance(x, dict):
        raise SchemaError(path, "expected an object")
    return x


def _bool(x: Any, path: str) -> bool:
    if not isinstance(x, bool):
        raise SchemaError(path, "expected a boolean")
    return x


def _known_keys(d: dict, allowed: set, path: str) -> None:
    extra = set(d) - allowed
    if extra:
        raise SchemaError(path, f"unknown fields {sorted(extra)}")


def parse_residue(x: Any, path: str) -> Residue:
    d = _obj(x, path)
    _known_keys(d, {"value", "mod"}, path)
    return Residue(_int(d.get("value"), path + ".value"), _int(d.get("mod", 0), path + ".mod"))


def parse_presentation(x: Any, path: str) -> LinkingPresentation:
    d = _obj(x, path)
    _known_keys(d, {"L", "component_names", "arf_overrides"}, path)
    if "L" not in d or not isinstance(d["L"], list):
        raise SchemaError(path + ".L", "missing linking matrix")
    rows = [_int_list(r, f"{path}.L[{i}]") for i, r in enumerate(d["L"])]
    try:
        L = lattice.symmetric(rows)
    except ValueError as e:
        raise SchemaError(path + ".L", str(e)) from None
    names = d.get("component_names")
    if names is not None and (not isinstance(names, list) or not all(isinstance(s, str) for s in names)):
        raise SchemaError(path + ".component_names", "expected a list of strings")
    arf = {}
    for i, item in enumerate(d.get("arf_overrides", [])):
        p = f"{path}.arf_overrides[{i}]"
        item = _obj(item, p)
        key = tuple(v % 2 for v in _int_list(item.get("sublink"), p + ".sublink"))
        val = _int(item.get("arf"), p + ".arf")
        if len(key) != len(L) or val not in (0, 1):
            raise SchemaError(p, "sublink length or arf value out of range")
        arf[key] = val
    try:
        P = LinkingPresentation(L, tuple(names) if names is not None else None, arf)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None
    return P


def parse_surface(x: Any, path: str) -> SurfaceData:
    d = _obj(x, path)
    _known_keys(d, {"a", "twists"}, path)
    a = _int_list(d.get("a"), path + ".a")
    t = _int_list(d["twists"], path + ".twists") if "twists" in d else None
    if t is not None and len(t) != len(a):
        raise SchemaError(path + ".twists", "length differs from a")
    return SurfaceData(a, t)


def parse_target(x: Any, path: str) -> TargetSurface:
    d = _obj(x, path)
    _known_keys(d, {"b_plus", "b_minus", "div_c1", "spin", "pairing_values", "c1_squared",
                    "simply_connected"}, path)
    for k in ("b_plus", "b_minus", "div_c1", "spin"):
        if k not in d:
            raise SchemaError(f"{path}.{k}", "missing field")
    pv = d.get("pairing_values")
    try:
        return TargetSurface(
            _int(d["b_plus"], path + ".b_plus"),
            _int(d["b_minus"], path + ".b_minus"),
            _int(d["div_c1"], path + ".div_c1"),
            _bool(d["spin"], path + ".spin"),
            None if pv is None else tuple(_int_list(pv, path + ".pairing_values")),
            None if d.get("c1_squared") is None else _int(d["c1_squared"], path + ".c1_squared"),
            _bool(d.get("simply_connected", True), path + ".simply_connected"),
        )
    except ValueError as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(path, str(e)) from None


def parse_form(x: Any, path: str) -> FormDescriptor:
    d = _obj(x, path)
    try:
        return FormDescriptor(_int(d.get("b_plus"), path + ".b_plus"),
                              _int(d.get("b_minus"), path + ".b_minus"), d.get("parity"))
    except ValueError as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(path, str(e)) from None


def parse_certificate(x: Any, path: str = "$") -> ConstructionCertificate:
    d = _obj(x, path)
    if d.get("version") != SCHEMA_VERSION:
        raise SchemaError(path + ".version", f"expected {SCHEMA_VERSION!r}")
    summands = []
    for i, b in enumerate(d.get("summands", [])):
        p = f"{path}.summands[{i}]"
        b = _obj(b, p)
        if b.get("kind") not in ("double", "H", "I"):
            raise SchemaError(p + ".kind", "expected double, H or I")
        summands.append(Block(b["kind"], str(b.get("role", "")), _int(b.get("sign", 1), p + ".sign")))
    claimed = dict(_obj(d.get("claimed", {}), path + ".claimed"))
    if "theta" in claimed:
        claimed["theta"] = parse_residue(claimed["theta"], path + ".claimed.theta")
    for k, v in list(claimed.items()):
        if k != "theta" and not isinstance(v, bool):
            claimed[k] = _int(v, f"{path}.claimed.{k}")
    reserved = d.get("reserved")
    return ConstructionCertificate(
        base=parse_presentation(d.get("base"), path + ".base"),
        summands=tuple(summands),
        c=tuple(_int_list(d.get("c"), path + ".c")),
        claimed=claimed,
        perp=None if d.get("perp") is None else parse_form(d["perp"], path + ".perp"),
        surface=parse_surface(d.get("surface"), path + ".surface"),
        theta_target=parse_residue(d.get("theta_target"), path + ".theta_target"),
        target=None if d.get("target") is None else parse_target(d["target"], path + ".target"),
        reserved=None if reserved is None else tuple(_int_list(reserved, path + ".reserved")),
        params=dict(d.get("params") or {}),
    )


# ---------------------------------------------------------------------------
# documents


BUILTIN_PRESENTATIONS = {
    "empty": kirby.EMPTY,
    "s2xs1": kirby.S2xS1,
    "e8": kirby.E8,
    "hyperbolic": kirby.HYPERBOLIC,
}
ZERO_SPINS = ("s0",)
ZERO_SURFACES = ("emptyF", "zero")


@dataclass
class Job:
    command: str
    args: list
    path: str


@dataclass
class InputDocument:
    presentations: dict = field(default_factory=dict)
    surfaces: dict = field(default_factory=dict)
    spins: dict = field(default_factory=dict)
    targets: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    jobs: list = field(default_factory=list)

    def presentation(self, name: str, path: str) -> LinkingPresentation:
        if name in self.presentations:
            return self.presentations[name]
        if name in BUILTIN_PRESENTATIONS:
            return BUILTIN_PRESENTATIONS[name]
        raise SchemaError(path, f"unknown presentation {name!r}")

    def spin(self, name: str, P: LinkingPresentation, path: str) -> SpinStructureRep:
        if name in self.spins:
            s = self.spins[name]
        elif name in ZERO_SPINS:
            s = SpinStructureRep((0,) * P.n)
        else:
            raise SchemaError(path, f"unknown spin structure {name!r}")
        if len(s.c) != P.n:
            raise SchemaError(path, f"spin {name!r} has length {len(s.c)}, presentation has {P.n}")
        return s

    def surface(self, name: str, P: LinkingPresentation, path: str) -> SurfaceData:
        if name in self.surfaces:
            F = self.surfaces[name]
        elif name in ZERO_SURFACES:
            F = SurfaceData.empty(P.n)
        else:
            raise SchemaError(path, f"unknown surface {name!r}")
        if len(F.a) != P.n:
            raise SchemaError(path, f"surface {name!r} has length {len(F.a)}, presentation has {P.n}")
        return F

    def target(self, name: str, path: str) -> TargetSurface:
        if name not in self.targets:
            raise SchemaError(path, f"unknown target {name!r}")
        return self.targets[name]

    def certificate(self, name: str, path: str) -> ConstructionCertificate:
        if name not in self.certificates:
            raise SchemaError(path, f"unknown certificate {name!r}")
        return self.certificates[name]


def parse_document(x: Any) -> InputDocument:
    d = _obj(x, "$")
    _known_keys(d, {"version", "presentations", "surfaces", "spins", "targets", "certificates",
                    "jobs"}, "$")
    if d.get("version") != SCHEMA_VERSION:
        raise SchemaError("$.version", f"expected {SCHEMA_VERSION!r}")
    doc = InputDocument()
    for k, v in _obj(d.get("presentations", {}), "$.presentations").items():
        doc.presentations[k] = parse_presentation(v, f"$.presentations.{k}")
    for k, v in _obj(d.get("surfaces", {}), "$.surfaces").items():
        doc.surfaces[k] = parse_surface(v, f"$.surfaces.{k}")
    for k, v in _obj(d.get("spins", {}), "$.spins").items():
        doc.spins[k] = SpinStructureRep(_int_list(v, f"$.spins.{k}"))
    for k, v in _obj(d.get("targets", {}), "$.targets").items():
        doc.targets[k] = parse_target(v, f"$.targets.{k}")
    for k, v in _obj(d.get("certificates", {}), "$.certificates").items():
        doc.certificates[k] = parse_certificate(v, f"$.certificates.{k}")
    jobs = d.get("jobs", [])
    if not isinstance(jobs, list):
        raise SchemaError("$.jobs", "expected a list")
    for i, j in enumerate(jobs):
        p = f"$.jobs[{i}]"
        j = _obj(j, p)
        _known_keys(j, {"command", "args"}, p)
        if not isinstance(j.get("command"), str):
            raise SchemaError(p + ".command", "expected a string")
        args = j.get("args", [])
        if not isinstance(args, list):
            raise SchemaError(p + ".args", "expected a list")
        doc.jobs.append(Job(j["command"], args, p))
    return doc
