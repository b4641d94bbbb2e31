"""Two arsonists, one forest: overdetermination and contingencies.

Two lit matches land in a dry forest.  In the disjunctive telling either
match alone burns it down; in the conjunctive telling both are needed.
Counterfactually neither match "made the difference" in the disjunctive
case, yet each is an actual cause: the check is allowed to imagine the
other match out of the picture, as long as doing so has no side effect on
the fire once the candidate match is restored.
"""

from actualcause import CauseQuery, cause_of, enumerate_witnesses, is_actual_cause, p
from actualcause.cause import classify_contributory
from actualcause.corpus import load_example

for key in ("arson_disjunctive", "arson_conjunctive"):
    loaded = load_example(key).loaded
    model, context = loaded.model, loaded.context("u11")
    print(f"== {key}")
    query = CauseQuery(model, context, cause_of(p("ML1", 1)), p("FB", 1))
    verdict = is_actual_cause(query)
    print(f"  ML1=1 actual cause of FB=1?  {verdict.overall}")
    witness = verdict.witness
    held = ", ".join(f"{v}={x}" for v, x in zip(witness.w_set, witness.w_prime))
    print(f"  first witness holds {{{held or 'nothing'}}} fixed")
    print(f"  classification: {classify_contributory(query)}")
    print(f"  all witnesses: {len(enumerate_witnesses(query))}")
    print()

print("In the conjunctive story the contingency set can keep its actual")
print("values, so the match is a cause in the strictest sense; in the")
print("disjunctive story every witness must imagine the other match out.")
