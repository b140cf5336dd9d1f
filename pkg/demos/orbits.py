"""
Orbit records and the four-way verdict
======================================

Iterate seeds, inspect the recorded peaks and returns, and classify
orbits as Escaping, Bounded, Bungee, or Unresolved.
"""

from bungee import (
    ClassifierConfig,
    classify,
    classify_point,
    detect_cycle,
    iterate_orbit,
    parse,
)

# The reciprocal square is the classic bungee oracle: off the unit
# circle, orbits alternate between huge and tiny moduli.
f = parse("1/pow(z,2)")
rec = iterate_orbit(f, 0.5)
print("orbit of 0.5 under", "1/z^2")
for n, m in enumerate(rec.moduli):
    print(f"  n={n:2d}  |z_n| = {m:.6g}")
print("termination:", rec.termination)
print("peaks:", [(i, f"{v:.3g}") for i, v in rec.peaks])
print("returns below r_bound:", rec.returns)
print("verdict:", classify(rec))

# Fixed points end orbits early through cycle detection.
print("\nfixed point at 1:", iterate_orbit(f, 1).termination)
print("transient into the 1-cycle from i:", iterate_orbit(f, 1j).termination)
print("cycle scan over the raw values:", detect_cycle(rec.values, 1e-12))

# A slow escaper: z + sin(z) + 2*pi drifts outward by 2*pi per step, far
# too slowly for the default escape radius of 1e6. Its catalog entry
# ships a config that reads escape at a lower radius.
drift = parse("z+sin(z)+2*pi")
print("\ndrift at default config:", classify_point(drift, 0))
drift_cfg = ClassifierConfig(max_iter=2000, r_bound=100.0, r_esc=1e3)
print("drift at drift config:  ", classify_point(drift, 0, drift_cfg))

# The scaled exponential 0.3*exp(z) has an attracting fixed point near
# 0.4894; real seeds left of the repelling point stay bounded, seeds to
# its right blow up.
lam = parse("0.3*exp(z)")
print("\n0.3*exp(z) at 0:", classify_point(lam, 0))
print("0.3*exp(z) at 3:", classify_point(lam, 3))
print("settled value:", iterate_orbit(lam, 0).values[-1])
