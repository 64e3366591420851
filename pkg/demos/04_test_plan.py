"""
From recovery groups to fault-injection templates
=================================================

Each member of a recovery group gets an inject template (does the system
notice the failure and re-route?) and a repair template (does it notice the
component coming back?). Asking for double faults adds survivable pairs.
"""

import json

from layerdep import casestudy_path, generate_double_fault_plan, run_pipeline
from layerdep.render import template_data

bundle = run_pipeline(casestudy_path())
plan = bundle.plan
print(plan.total, "templates;", ", ".join(f"layer {n}: {c}" for n, c in plan.counts.items()))
print(json.dumps(template_data(plan.templates[0]), indent=2))

# %%
double = generate_double_fault_plan(bundle.profiles, bundle.cnfs, bundle.model.name)
pairs = sorted({t.targets for t in double.templates if len(t.targets) == 2})
print("\nsurvivable pairs:", pairs)
print("excluded:", [targets for _, targets in double.excluded])

# %%
b = plan.bounds
print(f"\nsingle-fault ceiling {b.upper_single}, double-fault ceiling {b.upper_double}")
