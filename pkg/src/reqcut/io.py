"""Instance file formats.

Text format (whitespace separated, # starts a comment):

    n m g
    u v cost        (m edge lines, 0-indexed endpoints, cost decimal or a/b)
    r k v_1 ... v_k (g group lines)

JSON mirror:

    {"n": 3, "edges": [[0, 1, 1], [1, 2, "1/2"]],
     "groups": [{"r": 2, "members": [0, 2]}]}

Edge ids are the 0-based position in the edge list in both formats.
"""

import json
from fractions import Fraction

from .errors import InputError, ParseError
from .graph import Graph, Instance, to_cost


def _tokens(text):
    out = []
    for line in text.splitlines():
        hash_at = line.find("#")
        if hash_at >= 0:
            line = line[:hash_at]
        out.extend(line.split())
    return out


def parse_instance_text(text):
    toks = _tokens(text)
    pos = 0

    def take(what):
        nonlocal pos
        if pos >= len(toks):
            raise ParseError(f"unexpected end of file, expected {what}", pos)
        tok = toks[pos]
        pos += 1
        return tok

    def take_int(what):
        tok = take(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer {what}, got {tok!r}", pos - 1) from None

    n = take_int("vertex count")
    m = take_int("edge count")
    g = take_int("group count")
    if n < 0 or m < 0 or g < 0:
        raise ParseError(f"negative counts in header ({n} {m} {g})")
    edges = []
    for _ in range(m):
        u = take_int("edge endpoint")
        v = take_int("edge endpoint")
        cost = take("edge cost")
        try:
            edges.append((u, v, Fraction(cost)))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad edge cost {cost!r}", pos - 1) from None
    groups = []
    reqs = []
    for _ in range(g):
        r = take_int("group requirement")
        k = take_int("group size")
        if k < 0:
            raise ParseError(f"negative group size {k}", pos - 1)
        members = [take_int("group member") for _ in range(k)]
        groups.append(members)
        reqs.append(r)
    if pos != len(toks):
        raise ParseError(f"{len(toks) - pos} trailing tokens", pos)
    try:
        graph = Graph(n, edges)
    except InputError as exc:
        raise ParseError(str(exc)) from None
    return Instance(graph=graph, groups=tuple(tuple(s) for s in groups),
                    requirements=tuple(reqs))


def parse_instance_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    for key in ("n", "edges", "groups"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    try:
        edges = [(u, v, to_cost(c)) for u, v, c in doc["edges"]]
        graph = Graph(int(doc["n"]), edges)
        groups = [tuple(int(v) for v in grp["members"]) for grp in doc["groups"]]
        reqs = [int(grp["r"]) for grp in doc["groups"]]
    except (TypeError, ValueError, KeyError, InputError) as exc:
        raise ParseError(f"malformed instance: {exc}") from None
    return Instance(graph=graph, groups=tuple(groups), requirements=tuple(reqs))


def parse_instance(text):
    if text.lstrip()[:1] == "{":
        return parse_instance_json(text)
    return parse_instance_text(text)


def load_instance(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_instance(text)


def _cost_str(cost):
    if cost.denominator == 1:
        return str(cost.numerator)
    return f"{cost.numerator}/{cost.denominator}"


def dump_instance_text(instance):
    g = instance.graph
    lines = [f"{g.n} {g.m} {instance.num_groups}"]
    for _, u, v, cost in g.edges:
        lines.append(f"{u} {v} {_cost_str(cost)}")
    for members, r in zip(instance.groups, instance.requirements):
        ms = sorted(members)
        lines.append(f"{r} {len(ms)} " + " ".join(str(v) for v in ms))
    return "\n".join(lines) + "\n"


def dump_instance_json(instance):
    g = instance.graph
    doc = {
        "n": g.n,
        "edges": [[u, v, _cost_str(cost)] for _, u, v, cost in g.edges],
        "groups": [{"r": r, "members": sorted(members)}
                   for members, r in zip(instance.groups, instance.requirements)],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def save_instance(instance, path, fmt="text"):
    text = dump_instance_json(instance) if fmt == "json" else dump_instance_text(instance)
    with open(path, "w") as fh:
        fh.write(text)
