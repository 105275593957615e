"""Classifying every builtin model as rigid, non-rigid or unknown.

Run: python3 walkthroughs/04_rigidity.py
"""
from zrigid.models import CATALOG, builtin
from zrigid.rigidity import decide_rigidity

for name in CATALOG:
    verdict = decide_rigidity(builtin(name), samples=30)
    line = f"{name:20} {verdict.status:9}"
    if verdict.witness is not None:
        line += f" witness {verdict.witness.to_json()}"
    elif verdict.reason:
        line += f" ({verdict.reason})"
    print(line)

# %% The chain of reasons behind one rigid verdict.
for step in decide_rigidity(builtin("G_exm")).justification:
    print("  -", step)
