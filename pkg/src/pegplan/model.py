"""Ground STRIPS models and their unit-feature calculus.

A model is broken down into atomic features: membership of a fact in the
initial state, in the goal, or in an action's precondition/add/delete sets,
plus one cost feature per action.  Feature strings follow a fixed grammar
(``init-has-<fact>``, ``<action>-has-precondition-<fact>``, ...) so that two
models can be diffed, edited, and reconciled one feature at a time.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

__all__ = [
    "Fact",
    "GroundAction",
    "Model",
    "FeatureKind",
    "Feature",
    "FeatureChange",
    "ModelError",
    "UniverseMismatchError",
    "ChangePreconditionError",
    "InvalidEditError",
    "parse_fact",
    "parse_feature",
    "parse_change",
    "gamma",
    "reconstruct",
    "delta",
    "model_distance",
    "apply_change",
]

# "-has-" is the reserved infix of the feature grammar; identifiers must not
# contain it, or feature strings would no longer parse unambiguously.
_IDENT_RE = re.compile(r"[a-z0-9_][a-z0-9_-]*")
_RESERVED_INFIX = "-has-"
_RESERVED_NAMES = frozenset({"init", "goal"})


class ModelError(Exception):
    """Base class for model construction and editing errors."""


class UniverseMismatchError(ModelError):
    """Two models that should share a universe do not."""


class ChangePreconditionError(ModelError):
    """A change's presence/absence precondition does not hold."""


class InvalidEditError(ModelError):
    """Applying a change would produce an invalid model."""


def _check_ident(text: str, what: str) -> str:
    if not _IDENT_RE.fullmatch(text or ""):
        raise ModelError(f"invalid {what} {text!r}: expected lowercase identifier")
    if _RESERVED_INFIX in text:
        raise ModelError(f"invalid {what} {text!r}: {_RESERVED_INFIX!r} is reserved")
    return text


@dataclass(frozen=True, order=True)
class Fact:
    """A ground atom, rendered as ``name`` or ``name(arg1,arg2,...)``."""

    name: str
    args: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        _check_ident(self.name, "fact name")
        for a in self.args:
            _check_ident(a, "fact argument")

    def render(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({','.join(self.args)})"

    def __str__(self) -> str:
        return self.render()


_FACT_RE = re.compile(r"(?P<name>[^(),\s]+)(?:\((?P<args>[^()]*)\))?$")


def parse_fact(text: str) -> Fact:
    """Inverse of :meth:`Fact.render`; accepts ``p`` and ``p()`` alike."""
    m = _FACT_RE.fullmatch(text.strip())
    if m is None:
        raise ModelError(f"cannot parse fact {text!r}")
    raw_args = m.group("args")
    if raw_args is None or raw_args == "":
        args: tuple[str, ...] = ()
    else:
        args = tuple(a.strip() for a in raw_args.split(","))
    return Fact(m.group("name"), args)


@dataclass(frozen=True)
class GroundAction:
    """A ground action with disjoint add/delete effects and an integer cost."""

    name: str
    preconditions: frozenset[Fact]
    add_effects: frozenset[Fact]
    delete_effects: frozenset[Fact]
    cost: int = 1

    def __post_init__(self) -> None:
        _check_ident(self.name, "action name")
        if self.name in _RESERVED_NAMES:
            raise ModelError(f"action name {self.name!r} is reserved")
        if not isinstance(self.cost, int) or isinstance(self.cost, bool):
            raise ModelError(f"action {self.name}: cost must be an int")
        if self.cost < 0:
            raise ModelError(f"action {self.name}: cost must be non-negative")
        overlap = self.add_effects & self.delete_effects
        if overlap:
            names = ", ".join(sorted(f.render() for f in overlap))
            raise ModelError(f"action {self.name}: add and delete effects overlap on {names}")


def _as_fact_set(facts: Iterable[Fact]) -> frozenset[Fact]:
    return facts if isinstance(facts, frozenset) else frozenset(facts)


@dataclass(frozen=True)
class Model:
    """A ground planning model: fact universe, actions, initial state, goal."""

    facts: frozenset[Fact]
    actions: tuple[GroundAction, ...]
    init: frozenset[Fact]
    goal: frozenset[Fact]

    def __post_init__(self) -> None:
        object.__setattr__(self, "facts", _as_fact_set(self.facts))
        object.__setattr__(self, "init", _as_fact_set(self.init))
        object.__setattr__(self, "goal", _as_fact_set(self.goal))
        object.__setattr__(
            self, "actions", tuple(sorted(self.actions, key=lambda a: a.name))
        )
        names = [a.name for a in self.actions]
        if len(set(names)) != len(names):
            raise ModelError("duplicate action names in model")
        for label, facts in (("init", self.init), ("goal", self.goal)):
            missing = facts - self.facts
            if missing:
                raise ModelError(
                    f"{label} references facts outside the universe: "
                    + ", ".join(sorted(f.render() for f in missing))
                )
        for act in self.actions:
            referenced = act.preconditions | act.add_effects | act.delete_effects
            missing = referenced - self.facts
            if missing:
                raise ModelError(
                    f"action {act.name} references facts outside the universe: "
                    + ", ".join(sorted(f.render() for f in missing))
                )

    def action(self, name: str) -> GroundAction:
        for act in self.actions:
            if act.name == name:
                return act
        raise KeyError(name)

    def action_map(self) -> dict[str, GroundAction]:
        return {a.name: a for a in self.actions}

    def with_facts(self, extra: Iterable[Fact]) -> "Model":
        """Return the same model with the fact universe extended."""
        return Model(self.facts | frozenset(extra), self.actions, self.init, self.goal)

    def replace_action(self, action: GroundAction) -> "Model":
        rest = tuple(a for a in self.actions if a.name != action.name)
        if len(rest) == len(self.actions):
            raise InvalidEditError(f"model has no action named {action.name!r}")
        return Model(self.facts, rest + (action,), self.init, self.goal)

    def digest(self) -> str:
        """Short stable hash of the model's feature content."""
        text = "\n".join(sorted(f.render() for f in gamma(self)))
        return hashlib.sha256(text.encode()).hexdigest()[:12]


class FeatureKind(Enum):
    INIT = "init"
    GOAL = "goal"
    PRECONDITION = "precondition"
    ADD_EFFECT = "add-effect"
    DELETE_EFFECT = "delete-effect"
    COST = "cost"


_SET_KINDS = (
    FeatureKind.INIT,
    FeatureKind.GOAL,
    FeatureKind.PRECONDITION,
    FeatureKind.ADD_EFFECT,
    FeatureKind.DELETE_EFFECT,
)


@dataclass(frozen=True, order=True)
class Feature:
    """One atomic statement about a model, identified by its rendered string."""

    sort_index: str = field(init=False, repr=False, compare=True)
    kind: FeatureKind = field(compare=False)
    owner: str | None = field(default=None, compare=False)
    fact: Fact | None = field(default=None, compare=False)
    cost: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind in (FeatureKind.INIT, FeatureKind.GOAL):
            if self.owner is not None or self.fact is None or self.cost is not None:
                raise ModelError(f"{self.kind.value} features carry a fact and nothing else")
        elif self.kind is FeatureKind.COST:
            if self.owner is None or self.fact is not None or self.cost is None:
                raise ModelError("cost features carry an owner and an integer cost")
            _check_ident(self.owner, "action name")
            if not isinstance(self.cost, int) or isinstance(self.cost, bool) or self.cost < 0:
                raise ModelError("cost features carry a non-negative integer")
        else:
            if self.owner is None or self.fact is None or self.cost is not None:
                raise ModelError(f"{self.kind.value} features carry an owner and a fact")
            _check_ident(self.owner, "action name")
        object.__setattr__(self, "sort_index", self._render())

    def _render(self) -> str:
        if self.kind is FeatureKind.INIT:
            return f"init-has-{self.fact.render()}"
        if self.kind is FeatureKind.GOAL:
            return f"goal-has-{self.fact.render()}"
        if self.kind is FeatureKind.COST:
            return f"{self.owner}-has-cost-{self.cost}"
        return f"{self.owner}-has-{self.kind.value}-{self.fact.render()}"

    def render(self) -> str:
        return self.sort_index

    def __str__(self) -> str:
        return self.sort_index


def init_feature(fact: Fact) -> Feature:
    return Feature(FeatureKind.INIT, fact=fact)


def goal_feature(fact: Fact) -> Feature:
    return Feature(FeatureKind.GOAL, fact=fact)


def parse_feature(text: str) -> Feature:
    """Inverse of :meth:`Feature.render`."""
    text = text.strip()
    head, sep, rest = text.partition(_RESERVED_INFIX)
    if not sep:
        raise ModelError(f"cannot parse feature {text!r}: missing {_RESERVED_INFIX!r}")
    if head == "init":
        return Feature(FeatureKind.INIT, fact=parse_fact(rest))
    if head == "goal":
        return Feature(FeatureKind.GOAL, fact=parse_fact(rest))
    owner = _check_ident(head, "action name")
    for kind in (FeatureKind.PRECONDITION, FeatureKind.ADD_EFFECT, FeatureKind.DELETE_EFFECT):
        prefix = kind.value + "-"
        if rest.startswith(prefix):
            return Feature(kind, owner=owner, fact=parse_fact(rest[len(prefix):]))
    if rest.startswith("cost-"):
        value = rest[len("cost-"):]
        if not value.isdigit():
            raise ModelError(f"cannot parse feature {text!r}: cost must be an unsigned integer")
        return Feature(FeatureKind.COST, owner=owner, cost=int(value))
    raise ModelError(f"cannot parse feature {text!r}: unknown feature kind")


@dataclass(frozen=True, order=True)
class FeatureChange:
    """One unit edit: add or remove a feature.

    Adding a cost feature replaces the action's current cost (each action
    carries exactly one cost feature, so cost edits are replace-style);
    removing a cost feature is never valid.
    """

    direction: str  # "add" | "remove"
    feature: Feature

    def __post_init__(self) -> None:
        if self.direction not in ("add", "remove"):
            raise ModelError(f"invalid change direction {self.direction!r}")

    def render(self) -> str:
        return f"{self.direction} {self.feature.render()}"

    def __str__(self) -> str:
        return self.render()


def parse_change(text: str) -> FeatureChange:
    """Parse ``add <feature>`` / ``remove <feature>`` lines."""
    parts = text.strip().split(None, 1)
    if len(parts) != 2 or parts[0] not in ("add", "remove"):
        raise ModelError(f"cannot parse change {text!r}: expected 'add <feature>' or 'remove <feature>'")
    return FeatureChange(parts[0], parse_feature(parts[1]))


def gamma(model: Model) -> frozenset[Feature]:
    """Decompose a model into its feature set."""
    features: set[Feature] = set()
    for fact in model.init:
        features.add(Feature(FeatureKind.INIT, fact=fact))
    for fact in model.goal:
        features.add(Feature(FeatureKind.GOAL, fact=fact))
    for act in model.actions:
        for fact in act.preconditions:
            features.add(Feature(FeatureKind.PRECONDITION, owner=act.name, fact=fact))
        for fact in act.add_effects:
            features.add(Feature(FeatureKind.ADD_EFFECT, owner=act.name, fact=fact))
        for fact in act.delete_effects:
            features.add(Feature(FeatureKind.DELETE_EFFECT, owner=act.name, fact=fact))
        features.add(Feature(FeatureKind.COST, owner=act.name, cost=act.cost))
    return frozenset(features)


def reconstruct(features: Iterable[Feature], facts: Iterable[Fact] | None = None) -> Model:
    """Rebuild the model a feature set came from.

    The fact universe is recovered from the features themselves unless a
    larger universe is supplied; action names are recovered from the cost
    features, which every action carries exactly one of.
    """
    init: set[Fact] = set()
    goal: set[Fact] = set()
    pre: dict[str, set[Fact]] = {}
    add: dict[str, set[Fact]] = {}
    dele: dict[str, set[Fact]] = {}
    costs: dict[str, int] = {}
    owners: set[str] = set()
    for feat in features:
        if feat.kind is FeatureKind.INIT:
            init.add(feat.fact)
        elif feat.kind is FeatureKind.GOAL:
            goal.add(feat.fact)
        elif feat.kind is FeatureKind.COST:
            if feat.owner in costs:
                raise ModelError(f"action {feat.owner}: more than one cost feature")
            costs[feat.owner] = feat.cost
            owners.add(feat.owner)
        else:
            table = {
                FeatureKind.PRECONDITION: pre,
                FeatureKind.ADD_EFFECT: add,
                FeatureKind.DELETE_EFFECT: dele,
            }[feat.kind]
            table.setdefault(feat.owner, set()).add(feat.fact)
            owners.add(feat.owner)
    missing_costs = owners - set(costs)
    if missing_costs:
        raise ModelError(
            "actions without a cost feature: " + ", ".join(sorted(missing_costs))
        )
    actions = tuple(
        GroundAction(
            name,
            frozenset(pre.get(name, ())),
            frozenset(add.get(name, ())),
            frozenset(dele.get(name, ())),
            costs[name],
        )
        for name in sorted(owners)
    )
    referenced: set[Fact] = set(init) | set(goal)
    for act in actions:
        referenced |= act.preconditions | act.add_effects | act.delete_effects
    universe = frozenset(facts) | frozenset(referenced) if facts is not None else frozenset(referenced)
    return Model(universe, actions, frozenset(init), frozenset(goal))


def delta(m1: Model, m2: Model) -> frozenset[FeatureChange]:
    """The unit changes that transform ``m1`` into a model feature-equal to ``m2``.

    Cost differences contribute a single replace-style ``add`` of the target
    cost feature rather than an add/remove pair.
    """
    names1 = {a.name for a in m1.actions}
    names2 = {a.name for a in m2.actions}
    if names1 != names2:
        diff = sorted(names1 ^ names2)
        raise UniverseMismatchError(
            "models do not share an action-name universe: " + ", ".join(diff)
        )
    g1 = gamma(m1)
    g2 = gamma(m2)
    changes: set[FeatureChange] = set()
    for feat in g2 - g1:
        changes.add(FeatureChange("add", feat))
    for feat in g1 - g2:
        if feat.kind is FeatureKind.COST:
            continue  # covered by the replace-style add of m2's cost
        changes.add(FeatureChange("remove", feat))
    return frozenset(changes)


def model_distance(m1: Model, m2: Model) -> int:
    """Number of unit changes between two models; a metric over feature sets."""
    return len(delta(m1, m2))


def apply_change(model: Model, change: FeatureChange) -> Model:
    """Apply one unit change, returning a new model.

    Raises :class:`ChangePreconditionError` if the feature is already in the
    asserted state, and :class:`InvalidEditError` if the edit would leave the
    model invalid (unknown action, unknown fact, overlapping effects).
    """
    feat = change.feature
    adding = change.direction == "add"

    if feat.kind is FeatureKind.COST:
        if not adding:
            raise InvalidEditError(
                f"cannot remove {feat.render()}: cost features are replace-only"
            )
        try:
            act = model.action(feat.owner)
        except KeyError:
            raise InvalidEditError(f"model has no action named {feat.owner!r}") from None
        if act.cost == feat.cost:
            raise ChangePreconditionError(f"{feat.render()} is already present")
        return model.replace_action(
            GroundAction(act.name, act.preconditions, act.add_effects, act.delete_effects, feat.cost)
        )

    if feat.fact not in model.facts:
        raise InvalidEditError(
            f"cannot apply {change.render()}: fact {feat.fact.render()} is outside the universe"
        )

    if feat.kind in (FeatureKind.INIT, FeatureKind.GOAL):
        current = model.init if feat.kind is FeatureKind.INIT else model.goal
        if adding and feat.fact in current:
            raise ChangePreconditionError(f"{feat.render()} is already present")
        if not adding and feat.fact not in current:
            raise ChangePreconditionError(f"{feat.render()} is absent")
        updated = current | {feat.fact} if adding else current - {feat.fact}
        if feat.kind is FeatureKind.INIT:
            return Model(model.facts, model.actions, updated, model.goal)
        return Model(model.facts, model.actions, model.init, updated)

    try:
        act = model.action(feat.owner)
    except KeyError:
        raise InvalidEditError(f"model has no action named {feat.owner!r}") from None
    slot = {
        FeatureKind.PRECONDITION: act.preconditions,
        FeatureKind.ADD_EFFECT: act.add_effects,
        FeatureKind.DELETE_EFFECT: act.delete_effects,
    }[feat.kind]
    if adding and feat.fact in slot:
        raise ChangePreconditionError(f"{feat.render()} is already present")
    if not adding and feat.fact not in slot:
        raise ChangePreconditionError(f"{feat.render()} is absent")
    updated = slot | {feat.fact} if adding else slot - {feat.fact}
    pre, addf, delf = act.preconditions, act.add_effects, act.delete_effects
    if feat.kind is FeatureKind.PRECONDITION:
        pre = updated
    elif feat.kind is FeatureKind.ADD_EFFECT:
        addf = updated
    else:
        delf = updated
    try:
        new_act = GroundAction(act.name, pre, addf, delf, act.cost)
    except ModelError as exc:
        raise InvalidEditError(f"cannot apply {change.render()}: {exc}") from None
    return model.replace_action(new_act)
