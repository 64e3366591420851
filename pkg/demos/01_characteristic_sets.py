"""
Single points of failure in a four-layer network
================================================

Load the bundled case-study model, build the success tree of every layer
and read off which components are single points of failure and which ones
back each other up.
"""

from layerdep import casestudy_path, load_model, run_pipeline
from layerdep.formula import render

model = load_model(casestudy_path())
for layer in model.layers:
    print(layer.index, layer.name, ", ".join(layer.ids))

# %%
# The pipeline enumerates routes for every requirement, turns them into a
# monotone formula per layer and drops the access points (end-user hosts).
bundle = run_pipeline(model)

for n in sorted(bundle.cnfs, reverse=True):
    profile = bundle.profiles[n]
    print(f"\n{model.layer(n).name}: {render(bundle.cnfs[n])}")
    print("  SPOF:", sorted(profile.spof) or "-")
    for g in profile.groups:
        print("  recovery group:", g)
    print("  tolerates", profile.tolerance, "arbitrary failure(s)")

# %%
# Every clause should also be a minimal vertex cut of the layer graph.
issues = [msg for msgs in bundle.discrepancies.values() for msg in msgs]
print("\ngraph cross-check:", issues or "consistent")
