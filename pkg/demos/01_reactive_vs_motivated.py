"""Same hungry, slightly thirsty animat, two settings of alpha.

Water is in view, food is not. With alpha = 0 hunger cannot act without
seeing food, so the animat drinks first and only eats once it stumbles on
food. With alpha = 0.9 hunger wins straight away and the animat explores
for food.
"""

from collections import Counter

from ibenet import load_scenario, run_scenario
from ibenet.harness import first_consummatory

scenario = load_scenario("foraging")

for alpha in (0.0, 0.9):
    trace = run_scenario(scenario, alpha_override=alpha, seed=0)
    labels = trace.labels()
    first = first_consummatory(labels)
    eat_at = labels.index("eat") if "eat" in labels else None
    print(f"alpha={alpha}")
    print(f"  first ten actions : {labels[:10]}")
    print(f"  first consummatory: {first}")
    print(f"  first eat at tick : {eat_at}")
    print(f"  action counts     : {dict(Counter(labels).most_common(5))}")

# the per-tick record keeps every term of the congruence formula
rec = run_scenario(scenario, alpha_override=0.9, seed=0, max_ticks=1).records[0]
h = rec["congruence"]["hunger"]
print("tick 0 hunger:", {k: h[k] for k in ("alpha", "o_e", "o_s", "o_d", "raw", "certainty")})
