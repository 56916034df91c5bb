"""Rigidity census: perturbed seeds, converged outputs, structure verdicts.

Seeds with one displaced interface angle are relaxed by flow plus Newton on
the circle (pass --torus to add the flat-torus runs; slower).  Every run that
converges to a critical point is structure-checked; the falsifiable claim is
an empty set of converged solutions with the full interface count and broken
congruence or rotation symmetry.  Equal-spacing control seeds document that
the symmetric solutions are reachable at every width.
"""

import sys
from pathlib import Path

from phaselab import emit_plotdata, experiment_m_rigidity, experiment_two_interface

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

surfaces = ("circle", "torus") if "--torus" in sys.argv else ("circle",)

print("two-interface census (converged pairs must be antipodal):")
rep = experiment_two_interface(eps_list=(0.2, 0.25), seeds=range(8), n=256)
print("  outcomes:", rep.census())
for a in rep.assertions:
    print(f"  [{'PASS' if a['passed'] else 'FAIL'}] {a['name']}")
(OUT / "two_interface.json").write_bytes(rep.to_json_bytes())

print(f"\nfour-interface census on {surfaces} (perturbation 0.3):")
rep = experiment_m_rigidity(
    4, eps_list=(0.1, 0.15), seeds=range(5), perturbation=0.3, surfaces=surfaces
)
print("  outcomes:", rep.census())
for a in rep.assertions:
    print(f"  [{'PASS' if a['passed'] else 'FAIL'}] {a['name']}")
emit_plotdata(rep, OUT / "m_rigidity_census.csv")
(OUT / "m_rigidity.json").write_bytes(rep.to_json_bytes())
print("wrote census CSV + JSON reports to", OUT)
