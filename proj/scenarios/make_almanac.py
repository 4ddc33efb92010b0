"""Writes gps_almanac.toml: a synthetic 31-satellite GPS-like constellation.

Six planes at 55 deg inclination, right ascensions 60 deg apart, slots
spread unevenly in mean anomaly. Reference epochs default to the scenario
start when loaded.
"""
import math

PLANES = "ABCDEF"
SLOTS = [5, 5, 5, 5, 5, 6]
SQRT_A = 5153.6
OMEGA_DOT = -8.1e-9
DELTA_N = 4.5e-9

lines = ["# Synthetic GPS almanac, generated by make_almanac.py", ""]
prn = 1
for p, plane in enumerate(PLANES):
    n = SLOTS[p]
    for k in range(n):
        m0 = (k * 360.0 / n + p * 17.0 + (k % 2) * 9.0) % 360.0
        e = 0.002 + 0.001 * ((prn * 7) % 9)
        lines += [
            "[[satellite]]",
            f"prn = {prn}  # plane {plane} slot {k + 1}",
            f"sqrt_a = {SQRT_A + 0.15 * ((prn * 5) % 7 - 3):.2f}",
            f"e = {e:.4f}",
            f"i0_deg = {55.0 + 0.3 * ((prn * 3) % 5 - 2):.2f}",
            f"omega0_deg = {p * 60.0 + 12.0:.1f}",
            f"omega_deg = {(prn * 37) % 360:.1f}",
            f"m0_deg = {(m0 - (prn * 37) % 360) % 360:.3f}",
            f"delta_n_rad_s = {DELTA_N:.3e}",
            f"omega_dot_rad_s = {OMEGA_DOT:.3e}",
            "",
        ]
        prn += 1

with open("gps_almanac.toml", "w", encoding="utf-8") as f:
    f.write("\n".join(lines))
