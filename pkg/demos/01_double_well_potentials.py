"""Double-well potentials and the axiom checker.

Evaluates the default quartic well, runs the four-axiom verification, and
shows how the checker rejects two classic near-misses: a single well (wrong
zero set) and a well with degenerate minima (zero curvature at the bottoms).
"""

import numpy as np

from phaselab import check_double_well, from_callables, interface_energy, quartic


def show(report, name):
    print(f"\n{name}:")
    for c in report.checks:
        mark = "ok " if c.passed else "FAIL"
        extra = f"  (witness x = {c.witness:.4g}: {c.detail})" if not c.passed else ""
        print(f"  [{mark}] axiom {c.axiom}: {c.name}{extra}")


p = quartic()
print("quartic well W(x) = (1 - x^2)^2 / 4")
print("  W(-1), W(0), W(1) =", p.w(-1.0), p.w(0.0), p.w(1.0))
print("  transition cost per interface:", interface_energy(p))
show(check_double_well(p), "axiom check, quartic")

single = from_callables(lambda x: x * x, lambda x: 2 * x, lambda x: 2 + 0 * x, "single_well")
show(check_double_well(single), "axiom check, single well x^2")

flat = from_callables(
    lambda x: 0.25 * (1 - x * x) ** 4,
    lambda x: -2 * x * (1 - x * x) ** 3,
    lambda x: -2 * (1 - x * x) ** 3 + 12 * x * x * (1 - x * x) ** 2,
    "flat_wells",
)
show(check_double_well(flat), "axiom check, flat wells (1 - x^2)^4 / 4")

print("\nfinite differences reproduce W' to second order:")
x = np.linspace(-2, 2, 201)
for h in (1e-2, 1e-3, 1e-4):
    fd = (p.w(x + h) - p.w(x - h)) / (2 * h)
    print(f"  h = {h:.0e}: max |fd - W'| = {np.max(np.abs(fd - p.dw(x))):.3e}")
