"""JSON form of decision certificates and their independent re-verification."""
from __future__ import annotations

import json
from typing import Any, Dict

from .engine import Certificate, IntractableSet, Orientation, all_signs_equal, verify_intractable_set
from .errors import InvalidInput
from .graph import Circuit, Graph, edge
from .matchings import DEFAULT_CAP, OneFactor, has_one_factor
from .witness import K33Witness


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    return value


def certificate_to_json(cert: Certificate) -> Dict[str, Any]:
    out: Dict[str, Any] = {"verdict": cert.verdict, "kind": cert.kind}
    if cert.kind == "pfaffian":
        out["orientation"] = [list(a) for a in cert.orientation.arcs()]
    elif cert.kind == "intractable":
        s = cert.intractable_set
        out["intractable_set"] = {
            "factor": [list(e) for e in sorted(s.factor)],
            "circuits": [list(c.vertices) for c in s.circuits],
        }
    elif cert.kind == "witness":
        out["witness"] = cert.witness.to_json()
    else:
        raise InvalidInput(f"unknown certificate kind {cert.kind!r}")
    if cert.meta:
        out["meta"] = _plain(cert.meta)
    return out


def certificate_from_json(g: Graph, data: Dict[str, Any]) -> Certificate:
    if "orientation" in data:
        o = Orientation.from_arcs(g, [tuple(a) for a in data["orientation"]])
        return Certificate("pfaffian", g, orientation=o)
    if "intractable_set" in data:
        s = data["intractable_set"]
        f = OneFactor(edge(*e) for e in s["factor"])
        circuits = tuple(Circuit.from_cycle(c) for c in s["circuits"])
        return Certificate("intractable", g, intractable_set=IntractableSet(f, circuits))
    if "witness" in data:
        return Certificate("witness", g, witness=K33Witness.from_json(data["witness"]))
    raise InvalidInput("certificate holds no orientation, intractable set or witness")


def verify_certificate(g: Graph, cert: Certificate, cap: int = DEFAULT_CAP) -> bool:
    if cert.kind == "pfaffian":
        if cert.orientation.graph != g:
            return False
        return not has_one_factor(g) or all_signs_equal(cert.orientation, cap)
    if cert.kind == "intractable":
        return verify_intractable_set(g, cert.intractable_set)
    if cert.kind == "witness":
        return cert.witness.verify(g)
    return False


def verify_certificate_json(g: Graph, data: Dict[str, Any], cap: int = DEFAULT_CAP) -> bool:
    """Re-check a certificate using only its JSON and the graph."""
    try:
        cert = certificate_from_json(g, data)
    except (InvalidInput, KeyError, TypeError, ValueError):
        return False
    if data.get("verdict") not in (None, cert.verdict):
        return False
    return verify_certificate(g, cert, cap)


def dumps(data: Any, reproducible: bool = False) -> str:
    return json.dumps(data, sort_keys=reproducible)
