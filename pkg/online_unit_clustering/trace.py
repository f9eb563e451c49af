""" Game traces: one event per point fed to an online algorithm, plus their JSON-lines file format. """

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from online_unit_clustering.errors import IllegalMoveError
from online_unit_clustering.model import OPEN, OnState, apply, assign, resolve_cluster
from online_unit_clustering.offline_opt import opt_cover, ratio
from online_unit_clustering.util import DEFAULT_SCALE, format_position, format_ratio, parse_position, parse_ratio


@dataclass(frozen=True)
class TraceEvent:
    step: int
    point: int
    decision: str  # "open" or "assign"
    cluster: str  # label of the cluster the point went to, "#<id>" if unlabelled
    on_cost: int
    opt_cost: int
    ratio: Fraction


@dataclass(frozen=True)
class Trace:
    scale: int = DEFAULT_SCALE
    events: Tuple[TraceEvent, ...] = ()
    leaf_id: Optional[str] = None
    leaf_tag: Optional[str] = None
    covered_gives: Tuple[int, ...] = ()  # steps where the adversary gave an already covered point
    final_state: OnState = field(default=None, compare=False)

    @property
    def on_cost(self):
        return self.events[-1].on_cost if self.events else 0

    @property
    def opt_cost(self):
        return self.events[-1].opt_cost if self.events else 0

    @property
    def ratio(self):
        return self.events[-1].ratio if self.events else None


def record_step(state, p, decision, label=None):
    """ Applies a decision and returns the successor state together with its trace event. """
    new_state = apply(state, p, decision, label=label)
    cluster = new_state.clusters[new_state.assignment[-1]]
    opt_cost = opt_cover(new_state.points, new_state.scale).count
    event = TraceEvent(step=len(new_state.points), point=p, decision="open" if decision.is_open else "assign",
                       cluster=cluster.name, on_cost=new_state.on_cost, opt_cost=opt_cost,
                       ratio=ratio(new_state.on_cost, opt_cost))
    return new_state, event


def dump_trace(trace):
    """ JSON lines, one event per line; the last event also names the terminal leaf (if any). """
    lines = []
    for index, event in enumerate(trace.events):
        record = {"step": event.step, "point": format_position(event.point, trace.scale),
                  "decision": event.decision, "cluster": event.cluster, "on_cost": event.on_cost,
                  "opt_cost": event.opt_cost, "ratio": format_ratio(event.ratio)}
        if index == len(trace.events) - 1 and trace.leaf_id is not None:
            record["leaf"] = trace.leaf_id
            record["tag"] = trace.leaf_tag
        lines.append(json.dumps(record))
    return "".join(line + "\n" for line in lines)


def load_trace(text, scale=DEFAULT_SCALE):
    events = []
    leaf_id = leaf_tag = None
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            events.append(TraceEvent(step=int(record["step"]), point=parse_position(record["point"], scale),
                                     decision=record["decision"], cluster=record["cluster"],
                                     on_cost=int(record["on_cost"]), opt_cost=int(record["opt_cost"]),
                                     ratio=parse_ratio(record["ratio"])))
        except (KeyError, TypeError, json.JSONDecodeError) as e:
            raise ValueError(f"trace line {number} is malformed: {e}")
        leaf_id = record.get("leaf", leaf_id)
        leaf_tag = record.get("tag", leaf_tag)
    return Trace(scale=scale, events=tuple(events), leaf_id=leaf_id, leaf_tag=leaf_tag)


def replay_trace(trace):
    """ Re-applies every decision of a trace from the empty state and checks the recorded costs.

    Opened clusters get the recorded cluster name as label, so later assignments resolve by name.

    :return: the re-derived :class:`Trace`
    :raises IllegalMoveError: if a decision is infeasible or a recorded cost differs
    """
    state = OnState(scale=trace.scale)
    events = []
    for event in trace.events:
        if event.decision == "open":
            label = None if event.cluster.startswith("#") else event.cluster
            decision = OPEN
        else:
            label = None
            decision = assign(resolve_cluster(state, event.cluster, event.step).id)
        state, new_event = record_step(state, event.point, decision, label)
        if (new_event.on_cost, new_event.opt_cost, new_event.ratio) != \
                (event.on_cost, event.opt_cost, event.ratio):
            raise IllegalMoveError(f"replayed costs {new_event.on_cost}/{new_event.opt_cost} differ from the "
                                   f"recorded {event.on_cost}/{event.opt_cost}", step=event.step)
        events.append(new_event)
    return Trace(scale=trace.scale, events=tuple(events), leaf_id=trace.leaf_id, leaf_tag=trace.leaf_tag,
                 final_state=state)
