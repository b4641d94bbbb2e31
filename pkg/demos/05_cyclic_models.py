"""Beyond acyclic models: solution sets and the box/diamond split.

A cyclic equation system can have several simultaneous solutions or none.
Plain counterfactuals then split into a universal reading (the body holds in
every solution of the intervened system) and an existential one (in some
solution).  On acyclic models the two coincide, which is why the rest of the
package never needs the distinction.
"""

from actualcause import (
    Domain,
    Mechanism,
    Signature,
    build_model,
    eval_nonrecursive,
    p,
    solve_all,
)
from actualcause.formula import Basic

# X copies Y and Y copies X: two self-consistent worlds
loop = build_model(
    Signature(("U",), ("X", "Y"),
              {n: Domain((0, 1)) for n in ("U", "X", "Y")}),
    [Mechanism.from_table("X", ("Y",), {(0,): 0, (1,): 1}),
     Mechanism.from_table("Y", ("X",), {(0,): 0, (1,): 1})],
    name="copy_loop")

context = {"U": 0}
solutions = solve_all(loop, context)
print(f"solutions of the copying loop: {solutions}")

anchor = solutions[0]
box = Basic((), p("X", 0))
diamond = Basic((), p("X", 0), diamond=True)
print(f"[](X=0) holds in every solution?   "
      f"{eval_nonrecursive(loop, context, anchor, box)}")
print(f"<>(X=0) holds in some solution?    "
      f"{eval_nonrecursive(loop, context, anchor, diamond)}")
print()
print("clamping X collapses the ambiguity:")
print(f"  solutions under X<-1: {solve_all(loop, context, {'X': 1})}")
