"""The rate function of D_n/n and its saddlepoint.

D_n/n concentrates at 1/2 and deviations to level x cost exp(-n I(x)),
where I is the Legendre transform of L(t) = log((e^t - 1)/t), the CGF of a
Uniform[0,1] variable. Below we tabulate t_x, I(x) and the tilted variance
sigma_x^2 = L''(t_x), and check the symmetry I(x) = I(1 - x).
"""

from descent_tails import cgf_L1, rate_function, solve_saddlepoint

print(f"{'x':>6} {'t_x':>12} {'I(x)':>12} {'sigma_x^2':>12}")
for x in ("0.05", "0.2", "0.5", "0.6", "0.7", "0.8", "0.9", "0.99"):
    rp = solve_saddlepoint(x)
    print(f"{x:>6} {rp.t_x:12.6f} {rp.rate:12.8f} {rp.sigma_sq:12.8f}")

# L' is a bijection of the real line onto (0, 1)
for t in (-50.0, -1.0, 0.0, 1.0, 50.0):
    print(f"L'({t:+}) = {cgf_L1(t):.6f}")

for x in (0.1, 0.3, 0.45):
    print(f"I({x}) = {rate_function(x):.12f}   I({1 - x:.2f}) = {rate_function(1 - x):.12f}")
