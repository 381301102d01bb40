#!/usr/bin/env python3
"""How the MSE reduction ratio scales with word width.

gamma = (3B/2) 2^B / (4^B - 1) compares the optimized MSE to the uniform
allocation's at the same budget.  It decays like (3B/2) 2^{-B}: each extra
bit of width roughly halves the ratio, because the uniform allocation keeps
spending equally on bits whose errors matter exponentially less.
"""

from pulseopt import reduction_ratio

print(" B | gamma exact   | gamma ~ (3B/2) 2^-B | improvement factor")
print("-" * 62)
for bits in (1, 2, 4, 8, 12, 16, 24, 32):
    exact, approx = reduction_ratio(bits)
    print(f"{bits:2d} | {exact:.6e} | {approx:19.6e} | {1/exact:12.1f}x")

print()
print("B = 8 gives gamma ~ 0.0469 (a 21x MSE improvement); by B = 32 the")
print("uniform strategy is 10^8 times worse than water-filling.")
