"""
Exact reliability by enumeration
================================

The physical layer reduces to two mirrored pairs. With four variables the
whole state space is only sixteen rows, so we can print it and compare the
exact value against the product form and the single-failure estimate.
"""

from layerdep import casestudy_path, load_model, run_pipeline
from layerdep.reliability import closed_form_reliability, exact_reliability, limited_coverage, truth_table

model = load_model(casestudy_path())
f = run_pipeline(model).cnfs[1]
probs = model.probabilities

rows = truth_table(f, probs)
names = list(rows[0].assignment)
print("  ".join(f"{n:>9}" for n in names), " state  probability")
for row in rows:
    cells = "  ".join(f"{row.assignment[n]:>9}" for n in names)
    print(cells, f"   {row.status}   {row.probability:.10f}")

# %%
r = exact_reliability(f, probs)
groups = run_pipeline(model).profiles[1].groups
print(f"\nexact        {r:.10f}")
print(f"closed form  {closed_form_reliability(groups, probs):.10f}")
for k in (1, 2):
    rk = limited_coverage(f, probs, k)
    print(f"<= {k} failed  {rk:.10f}  ({(r - rk) / r:.3%} short)")
