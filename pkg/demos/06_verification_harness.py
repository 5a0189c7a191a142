"""Seeded verification scenarios and their reports.

The same checks are available from the command line:

    python -m mtf verify all --format text
    python -m mtf verify duality --grid-n 1024 --seed 3
"""

# %%
import json

from mtf import SCENARIOS, AtomConfig, GridSpec, emit_report, run_scenario

cfg = AtomConfig(Z=1.0, N=1.0, q=2.0)
print("scenarios:", ", ".join(SCENARIOS))

# %% a quick scenario in text form
report = run_scenario("isometry", cfg, GridSpec(n=1024), seed=7)
print(emit_report(report, "text"))

# %% the JSON form carries everything needed to rerun it
doc = json.loads(emit_report(run_scenario("repulsion-paths", cfg, GridSpec(n=512), seed=7)))
print(json.dumps({k: doc[k] for k in ("scenario", "passed", "config")}, indent=2))
for m in doc["metrics"]:
    print(f"  {m['name']}: {m['value']:.2e} (tolerance {m['tolerance']:.0e}) {m['status']}")

# %% same inputs, same metrics
again = run_scenario("repulsion-paths", cfg, GridSpec(n=512), seed=7).as_dict()
print("\nrerun identical:", again["metrics"] == doc["metrics"])
