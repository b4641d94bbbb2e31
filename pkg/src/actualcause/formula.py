"""Event formulas and counterfactual formulas over a causal model.

An event formula is a Boolean combination of primitive events ``X = x`` over
endogenous variables.  A counterfactual formula additionally wraps event
formulas in intervention operators: ``Basic(iv, body)`` reads "body holds in
the world arising from clamping the variables in ``iv``"; its diamond form is
the existential dual, which only differs on non-recursive models.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import NotRecursive, OutOfRangeValue, UnknownVariable
from .model import Assignment, CausalModel, Value, solve, solve_all


@dataclass(frozen=True)
class Prim:
    """Primitive event: the variable has exactly this value."""
    var: str
    value: Value


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Basic:
    """Intervention-prefixed event formula ``[X1<-v1, ...] body``.

    ``intervention`` may be empty, which denotes the plain body.  ``diamond``
    selects the existential reading over solution sets; on recursive models
    the box and diamond readings coincide.
    """
    intervention: tuple[tuple[str, Value], ...]
    body: "Formula"
    diamond: bool = False


Formula = Prim | Not | And | Or | Basic
EventFormula = Prim | Not | And | Or


def p(var: str, value: Value) -> Prim:
    return Prim(var, value)


def conj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def neg(body: Formula) -> Formula:
    return Not(body)


def event_vars(formula: Formula) -> tuple[str, ...]:
    """Variables mentioned anywhere in the formula, first-mention order."""
    seen: dict[str, None] = {}

    def walk(f: Formula) -> None:
        if isinstance(f, Prim):
            seen.setdefault(f.var, None)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or)):
            for part in f.parts:
                walk(part)
        elif isinstance(f, Basic):
            for var, _ in f.intervention:
                seen.setdefault(var, None)
            walk(f.body)
    walk(formula)
    return tuple(seen)


def validate_event_formula(model: CausalModel, formula: Formula) -> None:
    """Reject references to non-endogenous variables or out-of-domain values."""
    endo = set(model.endogenous)

    def walk(f: Formula) -> None:
        if isinstance(f, Prim):
            if f.var not in endo:
                raise UnknownVariable(
                    f"formula mentions non-endogenous variable {f.var!r}")
            if f.value not in model.domain_of(f.var):
                raise OutOfRangeValue(
                    f"formula value {f.value!r} outside domain of {f.var}")
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or)):
            for part in f.parts:
                walk(part)
        else:
            raise UnknownVariable("intervention operators are not allowed here")
    walk(formula)


def validate_causal_formula(model: CausalModel, formula: Formula) -> None:
    endo = set(model.endogenous)

    def walk(f: Formula) -> None:
        if isinstance(f, Basic):
            names = [var for var, _ in f.intervention]
            if len(set(names)) != len(names):
                raise UnknownVariable(
                    f"intervention clamps a variable twice: {names}")
            for var, value in f.intervention:
                if var not in endo:
                    raise UnknownVariable(
                        f"cannot intervene on {var!r}: not endogenous")
                if value not in model.domain_of(var):
                    raise OutOfRangeValue(
                        f"intervention value {value!r} outside domain of {var}")
            validate_event_formula(model, f.body)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or)):
            for part in f.parts:
                walk(part)
        else:
            validate_event_formula(model, f)
    walk(formula)


def eval_event(assignment: Mapping[str, Value], formula: Formula) -> bool:
    """Standard Boolean evaluation of an event formula at a total assignment."""
    if isinstance(formula, Prim):
        try:
            return assignment[formula.var] == formula.value
        except KeyError:
            raise UnknownVariable(
                f"assignment does not cover {formula.var!r}") from None
    if isinstance(formula, Not):
        return not eval_event(assignment, formula.body)
    if isinstance(formula, And):
        return all(eval_event(assignment, part) for part in formula.parts)
    if isinstance(formula, Or):
        return any(eval_event(assignment, part) for part in formula.parts)
    raise UnknownVariable("intervention operators are not event formulas")


def eval_formula(model: CausalModel, context: Mapping[str, Value],
                 formula: Formula) -> bool:
    """Truth of a counterfactual formula in a recursive model and context.

    Every Basic node solves the intervened system from scratch; since the
    solution is unique, the box and diamond readings agree here.
    """
    if not model.recursive:
        raise NotRecursive("use eval_nonrecursive for cyclic models")
    if isinstance(formula, Basic):
        sol = solve(model, context, dict(formula.intervention))
        return eval_event(sol, formula.body)
    if isinstance(formula, Prim):
        return eval_event(solve(model, context), formula)
    if isinstance(formula, Not):
        return not eval_formula(model, context, formula.body)
    if isinstance(formula, And):
        return all(eval_formula(model, context, part) for part in formula.parts)
    if isinstance(formula, Or):
        return any(eval_formula(model, context, part) for part in formula.parts)
    raise UnknownVariable(f"cannot evaluate {formula!r}")


def eval_nonrecursive(model: CausalModel, context: Mapping[str, Value],
                      actual: Mapping[str, Value], formula: Formula) -> bool:
    """Truth relative to a designated actual world of a possibly cyclic model.

    Bare primitive events read off ``actual``.  A box Basic node requires its
    body in every solution of the intervened system (vacuously true when there
    is none); the diamond form requires some solution (false when none).

    This is the natural generalisation of the recursive semantics, but it is
    the least exercised corner of the package: treat verdicts that hinge on
    multiple or missing solutions with according care.
    """
    from .model import check_fixed_point
    if not check_fixed_point(model, context, actual):
        raise ValueError("the designated actual world is not a solution")
    return _eval_nr(model, context, actual, formula)


def _eval_nr(model, context, actual, formula) -> bool:
    if isinstance(formula, Basic):
        sols = solve_all(model, context, dict(formula.intervention))
        if formula.diamond:
            return any(eval_event(s, formula.body) for s in sols)
        return all(eval_event(s, formula.body) for s in sols)
    if isinstance(formula, Prim):
        return eval_event(actual, formula)
    if isinstance(formula, Not):
        return not _eval_nr(model, context, actual, formula.body)
    if isinstance(formula, And):
        return all(_eval_nr(model, context, actual, part) for part in formula.parts)
    if isinstance(formula, Or):
        return any(_eval_nr(model, context, actual, part) for part in formula.parts)
    raise UnknownVariable(f"cannot evaluate {formula!r}")


def eval_trace(model: CausalModel, context: Mapping[str, Value],
               formula: Formula) -> list[tuple[dict[str, Value], Assignment]]:
    """(intervention, solved world) pairs for every Basic node, in eval order."""
    out: list[tuple[dict[str, Value], Assignment]] = []

    def walk(f: Formula) -> None:
        if isinstance(f, Basic):
            iv = dict(f.intervention)
            out.append((iv, solve(model, context, iv)))
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or)):
            for part in f.parts:
                walk(part)
    walk(formula)
    return out


def satisfiable_together(ranges: Mapping[str, tuple[Value, ...]],
                         *formulas: Formula) -> bool:
    """Whether some assignment over the mentioned variables satisfies all.

    Purely combinatorial: mechanisms play no role, only the domains.
    """
    names: list[str] = []
    for f in formulas:
        for var in event_vars(f):
            if var not in names:
                names.append(var)
    for combo in itertools.product(*(ranges[v] for v in names)):
        env = dict(zip(names, combo))
        if all(eval_event(env, f) for f in formulas):
            return True
    return False


def entails(ranges: Mapping[str, tuple[Value, ...]],
            premise: Formula, conclusion: Formula) -> bool:
    """Whether every domain assignment satisfying ``premise`` satisfies
    ``conclusion`` (no counterexample exists)."""
    return not satisfiable_together(ranges, premise, Not(conclusion))
