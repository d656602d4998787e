"""Reaction time to hidden food as the weight of the internal state grows.

Writes one CSV row per run and a per-alpha summary next to this script.
"""

from pathlib import Path

from ibenet import emit, load_scenario, sweep_alpha

out = Path(__file__).with_name("sweep_out")
out.mkdir(exist_ok=True)

scenario = load_scenario("foraging")
result = sweep_alpha(scenario, [0.0, 0.25, 0.5, 0.75, 1.0], repeats=20)

for row in result.summary:
    print(f"alpha {row['alpha']:<5} median rtime {row['median_rtime']:>6}  resolved {row['resolved']}/{row['runs']}")
print(f"spearman(alpha, median) = {result.spearman:.3f}")

emit(result, "csv", out / "runs.csv")
emit(result.summary_table(), "csv", out / "summary.csv")
print("wrote", out / "runs.csv", "and", out / "summary.csv")
