"""
Analysing your own topology
===========================

A small two-layer model written inline: a client reaches a database through
either of two application servers, but both servers share one switch.
"""

import json

from layerdep import parse_model, run_pipeline, validate_model
from layerdep.formula import render

doc = {
    "name": "shop",
    "layers": [
        {"index": 1, "name": "Physical",
         "components": [{"id": c, "kind": ""} for c in ("client", "sw", "app1", "app2", "db")],
         "links": [["client", "sw"], ["sw", "app1"], ["sw", "app2"], ["app1", "db"], ["app2", "db"]],
         "access_points": ["client"]},
        {"index": 2, "name": "Service",
         "components": [{"id": "ui", "kind": ""}, {"id": "store", "kind": ""}],
         "links": [["ui", "store"]], "access_points": ["ui"]},
    ],
    "projections": [{"upper": 2, "lower": 1, "map": {"ui": ["client"], "store": ["db"]}}],
    "probabilities": {"sw": 0.99, "app1": 0.95, "app2": 0.95, "db": 0.999},
    "requirements": [{"name": "checkout", "layer": 2, "source": "ui", "destination": "store",
                      "characteristics": {}}],
}

model = parse_model(json.dumps(doc))
assert validate_model(model) == []

bundle = run_pipeline(model)
profile = bundle.profiles[1]
print(render(bundle.cnfs[1]))
print("SPOF:", sorted(profile.spof))
print("groups:", [str(g) for g in profile.groups])

# %%
rep = bundle.reliability[1]
print(f"R = {rep.exact:.6f}, single-failure estimate short by {rep.deviation[1]:.3f}%")
print(bundle.plan.total, "templates")
