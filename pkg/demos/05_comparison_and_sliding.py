"""Ordering between nested profiles and the sliding-barrier mechanics.

First, the comparison principle: a positive critical point dominates any
critical point that vanishes on the boundary of a sub-domain; violated
preconditions classify as inapplicable rather than pass/fail.  Second, the
sliding experiment: against a synthetic field with a non-alternating sign
layout, the three-lobe barrier admits an interior first touch within twice
the localization radius - the mechanism that rules such layouts out.
"""

from phaselab import experiment_comparison, experiment_slide

rep = experiment_comparison()
print("comparison principle:")
for r in rep.runs:
    gap = f", min gap {r['min_gap']:.2e}" if r["min_gap"] else ""
    print(f"  {r['case']}: {r['outcome']}{gap}")

rep = experiment_slide(eps=0.1, m=4, delta_fractions=(0.5, 0.25))
print("\nsliding barrier (circumference 8*pi, four marked angles):")
for r in rep.runs:
    print(
        f"  radius {r['delta']:.3f}: first touch at offset {r['offset']:.3f} "
        f"(< 2*radius = {2 * r['delta']:.3f}), interior = {r['interior']}, "
        f"barrier peak {r['barrier_max']:.3f}"
    )
print("verdict:", "PASS" if rep.passed else "FAIL")
