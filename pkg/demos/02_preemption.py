"""Late preemption: the first rock shatters the bottle, the second never hits.

The coarse model cannot tell the throwers apart, so both come out as causes.
Adding hit variables (or time slices) records who actually connected, and the
preempted throw loses its status: every candidate contingency for it ends up
disturbing the causal process and fails the no-side-effect clause.
"""

from actualcause import enumerate_causes, p
from actualcause.corpus import load_example

for key, effect in (("rock_coarse", p("BS", 1)),
                    ("rock_refined", p("BS", 1)),
                    ("rock_time_indexed", p("BS3", 1))):
    loaded = load_example(key).loaded
    model, context = loaded.model, loaded.context(tuple(loaded.contexts)[0])
    causes = enumerate_causes(model, context, effect, exclude_self=True)
    print(f"{key:18s} causes of the shattering: "
          f"{', '.join(map(str, causes)) or 'none'}")

print()
print("Only the refined structures separate thrower one (a cause) from")
print("thrower two (preempted, not a cause).")
