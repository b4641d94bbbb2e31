"""Finite-domain structural causal models.

A model pairs a signature (exogenous variables, endogenous variables, and a
finite domain for each) with one mechanism per endogenous variable.  All
operations here are pure: models, contexts, and assignments are never mutated
after construction, so everything is safe to share across threads.

Values are plain Python ints or strings.  Contexts and assignments are plain
dicts from variable name to value; validation happens at the operation
boundary rather than through wrapper classes.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    DuplicateMechanism,
    MissingMechanism,
    NotRecursive,
    OutOfRangeOutput,
    OutOfRangeValue,
    SearchSpaceTooLarge,
    UndeclaredDependency,
    UnknownVariable,
)

Value = int | str
Assignment = dict[str, Value]

# Exhaustive totality verification is skipped above this many input rows;
# mechanisms that large are spot-checked and flagged instead.
TOTALITY_CHECK_BOUND = 2 ** 20

# Fixed-point enumeration refuses outright above this many total assignments.
FIXED_POINT_ENUMERATION_CAP = 2 ** 24

_SPOT_CHECK_SAMPLES = 512

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Domain:
    """Ordered finite set of values; the order is the canonical enumeration."""

    values: tuple[Value, ...]

    def __post_init__(self):
        if not self.values:
            raise OutOfRangeValue("a domain must contain at least one value")
        if len(set(self.values)) != len(self.values):
            raise OutOfRangeValue(f"domain has duplicate values: {self.values}")

    def __contains__(self, value: Value) -> bool:
        return value in self.values

    def __iter__(self) -> Iterator[Value]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


def domain(*values: Value) -> Domain:
    return Domain(tuple(values))


@dataclass(frozen=True, eq=True)
class Signature:
    """Variable split and per-variable domains.

    Declaration order of the tuples is significant: it fixes topological
    tie-breaking and every canonical enumeration order downstream.
    """

    exogenous: tuple[str, ...]
    endogenous: tuple[str, ...]
    ranges: Mapping[str, Domain] = field(hash=False)

    def __post_init__(self):
        for name in itertools.chain(self.exogenous, self.endogenous):
            if not _IDENT.match(name):
                raise UnknownVariable(f"illegal variable name {name!r}")
        overlap = set(self.exogenous) & set(self.endogenous)
        if overlap:
            raise UnknownVariable(
                f"variables declared both exogenous and endogenous: {sorted(overlap)}")
        if len(set(self.exogenous)) != len(self.exogenous) or \
                len(set(self.endogenous)) != len(self.endogenous):
            raise UnknownVariable("duplicate variable declaration")
        # An empty endogenous tuple is legal only so that fully-clamped
        # submodels stay representable; the text format requires at least one.
        missing = [v for v in itertools.chain(self.exogenous, self.endogenous)
                   if v not in self.ranges]
        if missing:
            raise OutOfRangeValue(f"no domain declared for: {missing}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.exogenous + self.endogenous

    def domain_of(self, name: str) -> Domain:
        try:
            return self.ranges[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name!r}") from None

    def is_endogenous(self, name: str) -> bool:
        return name in self.ranges and name in set(self.endogenous)


class Mechanism:
    """Total rule fixing one endogenous variable from its dependencies.

    The rule is held either as an exhaustive table keyed by dependency-value
    tuples, or as a callable taking a {name: value} mapping.  build_model
    materialises callables into tables whenever the dependency cross-product
    is small enough to verify exhaustively.
    """

    __slots__ = ("target", "deps", "table", "fn")

    def __init__(self, target: str, deps: Sequence[str],
                 table: Mapping[tuple[Value, ...], Value] | None = None,
                 fn: Callable[[Mapping[str, Value]], Value] | None = None):
        if (table is None) == (fn is None):
            raise MissingMechanism(
                f"mechanism for {target}: supply exactly one of table or fn")
        self.target = target
        self.deps = tuple(deps)
        self.table = dict(table) if table is not None else None
        self.fn = fn

    @classmethod
    def from_table(cls, target: str, deps: Sequence[str],
                   table: Mapping[tuple[Value, ...], Value]) -> "Mechanism":
        return cls(target, deps, table=table)

    @classmethod
    def from_function(cls, target: str, deps: Sequence[str],
                      fn: Callable[[Mapping[str, Value]], Value]) -> "Mechanism":
        return cls(target, deps, fn=fn)

    @classmethod
    def constant(cls, target: str, value: Value) -> "Mechanism":
        return cls(target, (), table={(): value})

    def value_at(self, env: Mapping[str, Value]) -> Value:
        key = tuple(env[d] for d in self.deps)
        if self.table is not None:
            try:
                return self.table[key]
            except KeyError:
                raise MissingMechanism(
                    f"mechanism for {self.target} has no row for "
                    f"{dict(zip(self.deps, key))}") from None
        return self.fn(dict(zip(self.deps, key)))

    def __repr__(self):
        kind = "table" if self.table is not None else "fn"
        return f"Mechanism({self.target} <- {self.deps}, {kind})"


class CausalModel:
    """Validated model: signature, mechanisms, derived graph and solve order.

    Instances are produced by build_model / submodel and treated as immutable.
    """

    __slots__ = ("name", "signature", "mechanisms", "parents", "recursive",
                 "order", "unverified_totality")

    def __init__(self, name, signature, mechanisms, parents, recursive, order,
                 unverified_totality):
        self.name = name
        self.signature = signature
        self.mechanisms = mechanisms
        self.parents = parents                # target -> full dependency tuple
        self.recursive = recursive
        self.order = order                    # topological, None if cyclic
        self.unverified_totality = unverified_totality

    @property
    def endogenous(self) -> tuple[str, ...]:
        return self.signature.endogenous

    @property
    def exogenous(self) -> tuple[str, ...]:
        return self.signature.exogenous

    def domain_of(self, name: str) -> Domain:
        return self.signature.domain_of(name)

    def endo_edges(self) -> list[tuple[str, str]]:
        """Edges X -> Y between endogenous variables, declaration order."""
        endo = set(self.endogenous)
        return [(p, t) for t in self.endogenous
                for p in self.parents[t] if p in endo]

    def __repr__(self):
        tag = self.name or "model"
        return (f"CausalModel({tag}: {len(self.exogenous)} exogenous, "
                f"{len(self.endogenous)} endogenous)")


@dataclass(frozen=True)
class ExtendedCausalModel:
    """A model plus a rule for which total endogenous settings are allowable.

    ``allowable`` is either an explicit frozenset of value tuples (in
    endogenous declaration order), a predicate over total assignments, or an
    event-formula object understood by the cause checker.  ``None`` means all
    settings are allowable, which makes every verdict coincide with the plain
    model's.
    """

    base: CausalModel
    allowable: Any = None


def _topological_order(endogenous: tuple[str, ...],
                       parents: Mapping[str, tuple[str, ...]]) -> tuple[str, ...] | None:
    """Deterministic Kahn order; ties broken by declaration order."""
    endo_set = set(endogenous)
    remaining = {t: {p for p in parents[t] if p in endo_set} for t in endogenous}
    order: list[str] = []
    placed: set[str] = set()
    while len(order) < len(endogenous):
        ready = next((v for v in endogenous
                      if v not in placed and remaining[v] <= placed), None)
        if ready is None:
            return None
        order.append(ready)
        placed.add(ready)
    return tuple(order)


def _verify_mechanism(signature: Signature, mech: Mechanism,
                      totality_bound: int) -> tuple[Mechanism, bool]:
    """Check totality and range; returns (normalised mechanism, verified)."""
    dep_domains = [signature.domain_of(d).values for d in mech.deps]
    size = 1
    for values in dep_domains:
        size *= len(values)
    target_domain = signature.domain_of(mech.target)

    if mech.table is not None:
        for key in mech.table:
            if len(key) != len(mech.deps):
                raise MissingMechanism(
                    f"mechanism for {mech.target}: row {key} does not match "
                    f"dependencies {mech.deps}")
            for value, values in zip(key, dep_domains):
                if value not in values:
                    raise OutOfRangeValue(
                        f"mechanism for {mech.target}: row key {key} uses a "
                        f"value outside its dependency's domain")

    if size <= totality_bound:
        table: dict[tuple[Value, ...], Value] = {}
        for key in itertools.product(*dep_domains):
            env = dict(zip(mech.deps, key))
            out = mech.value_at(env)
            if out not in target_domain:
                raise OutOfRangeOutput(
                    f"mechanism for {mech.target} yields {out!r} at {env}, "
                    f"outside domain {target_domain.values}",
                    target=mech.target, inputs=env)
            table[key] = out
        return Mechanism.from_table(mech.target, mech.deps, table), True

    # Too large to verify exhaustively: deterministic spot check only.
    rng = random.Random(0xAC2)
    for _ in range(_SPOT_CHECK_SAMPLES):
        key = tuple(rng.choice(values) for values in dep_domains)
        env = dict(zip(mech.deps, key))
        out = mech.value_at(env)
        if out not in target_domain:
            raise OutOfRangeOutput(
                f"mechanism for {mech.target} yields {out!r} at {env}, "
                f"outside domain {target_domain.values}",
                target=mech.target, inputs=env)
    return mech, False


def build_model(signature: Signature, mechanisms: Iterable[Mechanism], *,
                name: str | None = None,
                totality_bound: int = TOTALITY_CHECK_BOUND,
                verify: bool = True) -> CausalModel:
    """Validate mechanisms against the signature and derive graph facts.

    Totality and output range are verified by exhaustive enumeration when the
    dependency cross-product has at most ``totality_bound`` rows; larger
    mechanisms are spot-checked and listed in ``unverified_totality``.
    ``verify=False`` skips re-verification for rules already known total
    (submodels of verified models).
    """
    declared = set(signature.variables)
    endo_set = set(signature.endogenous)
    by_target: dict[str, Mechanism] = {}
    for mech in mechanisms:
        if mech.target in by_target:
            raise DuplicateMechanism(f"two mechanisms for {mech.target}")
        if mech.target not in endo_set:
            raise UndeclaredDependency(
                f"mechanism target {mech.target!r} is not an endogenous variable")
        for dep in mech.deps:
            if dep not in declared:
                raise UndeclaredDependency(
                    f"mechanism for {mech.target} depends on undeclared {dep!r}")
            if dep == mech.target:
                raise UndeclaredDependency(
                    f"mechanism for {mech.target} may not depend on itself")
        by_target[mech.target] = mech
    missing = [v for v in signature.endogenous if v not in by_target]
    if missing:
        raise MissingMechanism(f"no mechanism for: {missing}")

    normalised: dict[str, Mechanism] = {}
    unverified: list[str] = []
    for target in signature.endogenous:
        mech = by_target[target]
        if verify:
            mech, ok = _verify_mechanism(signature, mech, totality_bound)
            if not ok:
                unverified.append(target)
        normalised[target] = mech

    parents = {t: normalised[t].deps for t in signature.endogenous}
    order = _topological_order(signature.endogenous, parents)
    return CausalModel(name, signature, normalised, parents,
                       recursive=order is not None, order=order,
                       unverified_totality=tuple(unverified))


def is_recursive(model: CausalModel) -> bool:
    """True iff the endogenous dependency graph is acyclic."""
    return model.recursive


def _check_context(model: CausalModel, context: Mapping[str, Value]) -> None:
    for name in model.exogenous:
        if name not in context:
            raise UnknownVariable(f"context does not assign exogenous {name!r}")
        if context[name] not in model.domain_of(name):
            raise OutOfRangeValue(
                f"context value {context[name]!r} outside domain of {name}")
    for name in context:
        if name not in set(model.exogenous):
            raise UnknownVariable(f"context assigns non-exogenous {name!r}")


def _check_intervention(model: CausalModel,
                        intervention: Mapping[str, Value]) -> None:
    endo = set(model.endogenous)
    for name, value in intervention.items():
        if name not in endo:
            # Exogenous variables are fixed by the context and can never be
            # intervention targets.
            raise UnknownVariable(
                f"cannot intervene on {name!r}: not an endogenous variable")
        if value not in model.domain_of(name):
            raise OutOfRangeValue(
                f"intervention value {value!r} outside domain of {name}")


def submodel(model: CausalModel,
             intervention: Mapping[str, Value]) -> CausalModel:
    """Model with the intervened variables clamped and removed.

    Remaining mechanisms have the clamped variables substituted by their fixed
    values; the dependency graph is recomputed from the restricted rules.
    """
    _check_intervention(model, intervention)
    if not intervention:
        return model

    sig = model.signature
    new_endo = tuple(v for v in sig.endogenous if v not in intervention)
    kept_ranges = {v: sig.ranges[v] for v in sig.exogenous}
    kept_ranges.update({v: sig.ranges[v] for v in new_endo})

    new_mechs: list[Mechanism] = []
    for target in new_endo:
        mech = model.mechanisms[target]
        fixed = {d: intervention[d] for d in mech.deps if d in intervention}
        if not fixed:
            new_mechs.append(mech)
            continue
        new_deps = tuple(d for d in mech.deps if d not in fixed)
        if mech.table is not None:
            table: dict[tuple[Value, ...], Value] = {}
            positions = [i for i, d in enumerate(mech.deps) if d not in fixed]
            for key, out in mech.table.items():
                if all(key[i] == fixed[d] for i, d in enumerate(mech.deps)
                       if d in fixed):
                    table[tuple(key[i] for i in positions)] = out
            new_mechs.append(Mechanism.from_table(target, new_deps, table))
        else:
            def restricted(env: Mapping[str, Value], _mech=mech, _fixed=fixed):
                full = dict(env)
                full.update(_fixed)
                return _mech.value_at(full)
            new_mechs.append(Mechanism.from_function(target, new_deps, restricted))

    new_sig = Signature(sig.exogenous, new_endo, kept_ranges)
    return build_model(new_sig, new_mechs, name=model.name, verify=False)


def solve(model: CausalModel, context: Mapping[str, Value],
          intervention: Mapping[str, Value] | None = None) -> Assignment:
    """Unique simultaneous solution of a recursive model in a context.

    With an intervention, the clamped variables keep their clamped values and
    every other mechanism is evaluated under them, which equals solving the
    corresponding submodel and re-adding the clamps.
    """
    if not model.recursive:
        raise NotRecursive(
            "model has cyclic dependencies; use solve_all instead")
    _check_context(model, context)
    if intervention:
        _check_intervention(model, intervention)
    env: dict[str, Value] = dict(context)
    if intervention:
        for name in model.order:
            if name in intervention:
                env[name] = intervention[name]
            else:
                env[name] = model.mechanisms[name].value_at(env)
    else:
        for name in model.order:
            env[name] = model.mechanisms[name].value_at(env)
    return {v: env[v] for v in model.endogenous}


def solve_all(model: CausalModel, context: Mapping[str, Value],
              intervention: Mapping[str, Value] | None = None, *,
              cap: int = FIXED_POINT_ENUMERATION_CAP) -> list[Assignment]:
    """All simultaneous solutions, by exhaustive fixed-point enumeration.

    Works on cyclic models; a recursive model always yields exactly the
    solve() result.  Deterministic order: the domain-product order over
    endogenous variables in declaration order.
    """
    _check_context(model, context)
    if intervention:
        _check_intervention(model, intervention)
    intervention = intervention or {}

    endo = model.endogenous
    columns = [(model.domain_of(v).values if v not in intervention
                else (intervention[v],)) for v in endo]
    total = 1
    for col in columns:
        total *= len(col)
    if total > cap:
        raise SearchSpaceTooLarge(
            f"{total} candidate assignments exceed the cap of {cap}")

    free = [v for v in endo if v not in intervention]
    solutions: list[Assignment] = []
    base_env = dict(context)
    base_env.update(intervention)
    for combo in itertools.product(*columns):
        env = dict(base_env)
        env.update(zip(endo, combo))
        if all(model.mechanisms[v].value_at(env) == env[v] for v in free):
            solutions.append({v: env[v] for v in endo})
    return solutions


def check_fixed_point(model: CausalModel, context: Mapping[str, Value],
                      assignment: Mapping[str, Value]) -> bool:
    """True iff every mechanism reproduces the assigned value of its target."""
    _check_context(model, context)
    for name in model.endogenous:
        if name not in assignment:
            raise UnknownVariable(f"assignment does not cover {name!r}")
        if assignment[name] not in model.domain_of(name):
            raise OutOfRangeValue(
                f"assignment value {assignment[name]!r} outside domain of {name}")
    env = dict(context)
    env.update({v: assignment[v] for v in model.endogenous})
    return all(model.mechanisms[v].value_at(env) == env[v]
               for v in model.endogenous)


def all_contexts(model: CausalModel) -> Iterator[Assignment]:
    """Every total exogenous assignment, in domain-product order."""
    names = model.exogenous
    for combo in itertools.product(*(model.domain_of(u).values for u in names)):
        yield dict(zip(names, combo))


def descendants(model: CausalModel, var: str,
                include_self: bool = True) -> frozenset[str]:
    """Endogenous variables reachable from ``var`` along mechanism edges."""
    if var not in set(model.endogenous):
        raise UnknownVariable(f"{var!r} is not an endogenous variable")
    children: dict[str, list[str]] = {v: [] for v in model.endogenous}
    for parent, target in model.endo_edges():
        children[parent].append(target)
    seen: set[str] = set()
    stack = [var]
    while stack:
        node = stack.pop()
        for child in children[node]:
            if child not in seen:
                seen.add(child)
                stack.append(child)
    if include_self:
        seen.add(var)
    return frozenset(seen)
