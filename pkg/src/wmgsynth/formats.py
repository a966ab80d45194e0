"""Line-oriented text formats for LTSs and WMG systems, and DOT output.

LTS files::

    # comment
    initial s0
    arc s0 a s1
    state s7        (optional: declares a state without arcs)
    label c         (optional: declares a label used by no arc)

Net files::

    place p tokens=3 in=a:2 out=b:1
    transition c    (optional: transitions are inferred from the places)
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

from .errors import ParseError, WmgError
from .lts import Lts
from .net import PlaceDescriptor, System, build_system, place_descriptor

_NAME = re.compile(r"^[^\s#=:]+$")
_STATE = re.compile(r"^[^\s#]+$")


def _records(text: str) -> Iterable[tuple[int, list[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _check_name(number, name, pattern=_NAME):
    if not pattern.match(name):
        raise ParseError(number, f"bad name {name!r}")
    return name


def parse_lts(text: str) -> Lts:
    records = list(_records(text))
    if not records:
        raise ParseError(1, "empty input, expected 'initial <state>'")
    number, first = records[0]
    if first[0] != "initial" or len(first) != 2:
        raise ParseError(number, "first record must be 'initial <state>'")
    initial = _check_name(number, first[1], _STATE)
    arcs, seen, states, labels = [], set(), [], []
    for number, fields in records[1:]:
        kind = fields[0]
        if kind == "arc" and len(fields) == 4:
            src, label, dst = fields[1:]
            arc = (_check_name(number, src, _STATE), _check_name(number, label), _check_name(number, dst, _STATE))
            if arc in seen:
                raise ParseError(number, f"duplicate arc {' '.join(arc)}")
            seen.add(arc)
            arcs.append(arc)
        elif kind == "state" and len(fields) == 2:
            states.append(_check_name(number, fields[1], _STATE))
        elif kind == "label" and len(fields) == 2:
            labels.append(_check_name(number, fields[1]))
        elif kind == "initial":
            raise ParseError(number, "second 'initial' record")
        else:
            raise ParseError(number, f"cannot parse record {' '.join(fields)!r}")
    return Lts.build(initial, arcs, states=states, labels=labels)


def emit_lts(lts: Lts) -> str:
    lines = [f"initial {lts.initial}"]
    used_states = {lts.initial} | {a[0] for a in lts.arcs} | {a[2] for a in lts.arcs}
    used_labels = {a[1] for a in lts.arcs}
    lines += [f"state {s}" for s in sorted(lts.states - used_states)]
    lines += [f"label {t}" for t in lts.labels if t not in used_labels]
    lines += [f"arc {a} {t} {b}" for a, t, b in sorted(lts.arcs)]
    return "\n".join(lines) + "\n"


def _weighted(number, value):
    name, _, weight = value.partition(":")
    if not weight:
        weight = "1"
    if not weight.isdigit() or int(weight) < 1:
        raise ParseError(number, f"bad weight in {value!r}")
    return _check_name(number, name), int(weight)


def parse_net(text: str) -> System:
    places, transitions = [], []
    for number, fields in _records(text):
        kind = fields[0]
        if kind == "transition" and len(fields) == 2:
            transitions.append(_check_name(number, fields[1]))
            continue
        if kind != "place" or len(fields) < 2:
            raise ParseError(number, f"cannot parse record {' '.join(fields)!r}")
        name = _check_name(number, fields[1])
        opts = {}
        for item in fields[2:]:
            key, eq, value = item.partition("=")
            if not eq or key not in ("tokens", "in", "out") or key in opts:
                raise ParseError(number, f"bad attribute {item!r}")
            opts[key] = value
        tokens = opts.get("tokens", "0")
        if not tokens.isdigit():
            raise ParseError(number, f"bad token count {tokens!r}")
        src, w_in = _weighted(number, opts["in"]) if "in" in opts else (None, None)
        dst, w_out = _weighted(number, opts["out"]) if "out" in opts else (None, None)
        try:
            places.append((name, PlaceDescriptor(src, dst, w_in, w_out, int(tokens))))
        except ValueError as exc:
            raise ParseError(number, str(exc)) from exc
    if not places and not transitions:
        raise ParseError(1, "empty net description")
    try:
        return build_system(places, transitions=transitions)
    except (WmgError, ValueError) as exc:
        raise ParseError(number, str(exc)) from exc


def emit_net(system: System) -> str:
    net = system.net
    lines = []
    for p, k in zip(net.places, system.initial):
        d = place_descriptor(net, p, k)
        parts = [f"place {p}", f"tokens={k}"]
        if d.input is not None:
            parts.append(f"in={d.input}:{d.in_weight}")
        if d.output is not None:
            parts.append(f"out={d.output}:{d.out_weight}")
        lines.append(" ".join(parts))
    lines += [f"transition {t}" for t in net.transitions]
    return "\n".join(lines) + "\n"


def read_lts(path) -> Lts:
    with open(path, encoding="utf-8") as fh:
        return parse_lts(fh.read())


def read_net(path) -> System:
    with open(path, encoding="utf-8") as fh:
        return parse_net(fh.read())


# ---------------------------------------------------------------------------
# DOT
# ---------------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def lts_to_dot(lts: Lts, name: str = "lts") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for s in sorted(lts.states):
        shape = "doublecircle" if s == lts.initial else "circle"
        lines.append(f"  {_q(s)} [shape={shape}];")
    for a, t, b in sorted(lts.arcs):
        lines.append(f"  {_q(a)} -> {_q(b)} [label={_q(t)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def net_to_dot(system: System, name: str = "net") -> str:
    net = system.net
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for p, k in sorted(zip(net.places, system.initial)):
        lines.append(f"  {_q(p)} [shape=circle,xlabel={_q(k)}];")
    for t in sorted(net.transitions):
        lines.append(f"  {_q(t)} [shape=box];")
    arcs = [(t, p, w) for (t, p), w in net.post.items()] + [(p, t, w) for (p, t), w in net.pre.items()]
    for a, b, w in sorted(arcs):
        label = f" [label={_q(w)}]" if w != 1 else ""
        lines.append(f"  {_q(a)} -> {_q(b)}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(obj, name: Optional[str] = None) -> str:
    if isinstance(obj, Lts):
        return lts_to_dot(obj, name or "lts")
    if isinstance(obj, System):
        return net_to_dot(obj, name or "net")
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")
