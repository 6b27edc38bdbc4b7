"""No global section over 18 rays in C^4.

Nine orthogonal bases built from 18 rays, each ray shared by two bases.  A
global section would pick one ray per basis consistently, i.e. a
non-contextual value assignment, and the search proves none exists.
"""

import json
from pathlib import Path

from toposq import build_poset
from toposq.ks import find_global_section
from toposq.scenario import load_scenario

here = Path(__file__).parent
scenario = load_scenario(here / "cabello18.json")
poset = build_poset(scenario.seed_contexts())
print(f"{len(poset)} contexts, {len(poset.maximal())} maximal")

result = find_global_section(poset)
print(json.dumps({"status": result.status, "exhaustive": result.exhaustive, "leaves": result.leaves}))

# dropping one basis leaves a colourable set
poset = build_poset(scenario.seed_contexts()[:-1])
result = find_global_section(poset)
print("without the last basis:", result.status)
