"""Allowable settings: pruning far-fetched contingencies changes verdicts.

A factory accident severs a finger, which is sewn back on and heals.  Add a
lurking loanshark who would have cut it off for good, and the accident
becomes a cause of the healthy finger.  Declaring loanshark-worlds off the
table (an allow clause) retires that verdict again.  The track-switch story
shows the same lever: with each track its own mechanism the switch causes the
arrival, until cross-track malfunction worlds are disallowed.
"""

from actualcause import CauseQuery, cause_of, is_actual_cause, p
from actualcause.corpus import load_example


def verdict(loaded, context_name, cause, effect, extended):
    model = loaded.extended() if extended else loaded.model
    query = CauseQuery(model, loaded.context(context_name), cause, effect)
    return is_actual_cause(query).overall


bare = load_example("loanshark_bare").loaded
full = load_example("loanshark").loaded
print("accident -> working finger?")
print(f"  without the loanshark:            "
      f"{verdict(bare, 'accident', cause_of(p('FS', 1)), p('FF', 1), False)}")
print(f"  with him modelled:                "
      f"{verdict(full, 'accident', cause_of(p('FS', 1)), p('FF', 1), False)}")
print(f"  with his worlds disallowed:       "
      f"{verdict(full, 'accident', cause_of(p('FS', 1)), p('FF', 1), True)}")
print()

two = load_example("track_switch_two_var").loaded
print("switch flip -> train arrives?")
print(f"  two free track mechanisms:        "
      f"{verdict(two, 'flipped', cause_of(p('F', 1)), p('A', 1), False)}")
print(f"  cross-track settings disallowed:  "
      f"{verdict(two, 'flipped', cause_of(p('F', 1)), p('A', 1), True)}")
