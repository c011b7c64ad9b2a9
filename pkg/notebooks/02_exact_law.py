"""Exact law of the descent count.

A(n, k), the number of permutations of n elements with k descents, obeys a
two-term recurrence. The law of D_n also equals that of the integer part of
a sum of n independent uniforms, which we verify here in exact rationals.
"""

from fractions import Fraction

from descent_tails import eulerian_distribution, exact_tail, irwin_hall_interval

for n in range(1, 8):
    print(n, eulerian_distribution(n).weights)

n = 12
dist = eulerian_distribution(n)
print(f"n={n}: mean {dist.mean()}, variance {dist.variance()}")
print("integer part of a uniform sum:", all(dist.pmf(k) == irwin_hall_interval(n, k) for k in range(n)))

# ceil(nx) is formed in exact arithmetic, so lattice levels are unambiguous
for x in ("0.7", Fraction(2, 3), 0.7):
    print(f"P(D_30/30 >= {x!r}) = {float(exact_tail(30, x)):.10e}")
