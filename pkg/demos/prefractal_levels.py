"""Reachable plateau levels of the prefractal tent member.

The level-3 construction keeps 8 intervals where f vanishes identically.
Only their left endpoints are reachable as far-field limits: the potential
has to strictly dominate everything below, and inside a flat stretch it
cannot. The probe shows what goes wrong when a launch aims slightly past
a reachable level.
"""

from fractions import Fraction

from farfield.nonlinearity import compute_Zf, make, zero_set
from farfield.profile1d import disconnectedness_probe

nl = make("cantor:3")
E = zero_set(nl)
zf = compute_Zf(nl)

print(f"zero set: {len(E.points)} isolated points, {len(E.intervals)} flat intervals")
for a, b in E.intervals:
    print(f"  [{a:.9f}, {b:.9f}]")

print(f"\nreachable levels ({len(zf.points)}):")
for z in zf.points:
    frac = Fraction(z).limit_denominator(27)
    print(f"  {z:.12f}  ~ {frac}")

# overshooting a reachable level runs into the flat stretch and stalls
probe = disconnectedness_probe(nl, zf.points[1], 1e-4, +1, xi_max=60.0)
print(f"\nprobe past {zf.points[1]:.6f}: event '{probe.event}' "
      f"at xi = {probe.xi_event:.2f}")
