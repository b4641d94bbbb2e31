"""Causation does not chain: treatment, withheld treatment, survival.

The Monday dose causes Tuesday's dose to be withheld, and the withheld dose
causes survival (two doses would have been lethal).  Yet the Monday dose is
not a cause of survival: skipping it still leads to a live patient, and no
contingency can say otherwise without side effects.
"""

from actualcause import CauseQuery, cause_of, disj, eval_formula, is_actual_cause, p
from actualcause.corpus import load_example
from actualcause.formula import Basic

loaded = load_example("doctor").loaded
model, context = loaded.model, loaded.context("monday")
alive = disj(p("BMC", 0), p("BMC", 1), p("BMC", 2))


def check(cause, effect, label):
    verdict = is_actual_cause(CauseQuery(model, context, cause, effect))
    print(f"  {label}: {verdict.overall}")


print("links in the putative chain:")
check(cause_of(p("MT", 1)), p("TT", 0), "Monday dose -> Tuesday dose withheld")
check(cause_of(p("TT", 0)), alive, "withheld dose -> survival")
print("the composite claim:")
check(cause_of(p("MT", 1)), alive, "Monday dose -> survival")
print()
print("counterfactual check: had Monday's dose been skipped,")
survives = eval_formula(model, context, Basic((("MT", 0),), alive))
print(f"the patient would still be alive: {survives}")
