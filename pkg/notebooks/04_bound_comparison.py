"""Comparing tail bounds with the exact tail.

For x in (1/2, 1) every estimate shares exp(-n I(x) - {nx} t_x) with
{nx} = ceil(nx) - nx. The sharp approximation divides it by
sigma_x t_x sqrt(2 pi n); the CID and Q_n bounds multiply that by an O(1)
prefactor. Chernoff keeps the exponential alone, and Azuma uses only the
bounded martingale increments.
"""

import math

from descent_tails import bound_report, sharpness_crossover

x = "0.7"
print(f"{'n':>5} {'exact':>11} {'sharp':>11} {'cid':>11} {'qn':>11} {'azuma':>11} {'chernoff':>11}")
for n in (10, 30, 100, 300, 1000):
    rep = bound_report(n, x)
    cells = [rep.log_exact, rep.sharp, rep.cid, rep.qn, rep.azuma, rep.chernoff]
    print(f"{n:5d} " + " ".join(f"{c / math.log(10):11.3f}" for c in cells))
print("(log10 of each quantity)")

# from which n on the CID bound beats the classical ones
for level in ("0.6", "0.7", "0.8", "0.9"):
    print(level, "chernoff n0 =", sharpness_crossover(level, "chernoff"),
          "azuma n0 =", sharpness_crossover(level, "azuma"))
