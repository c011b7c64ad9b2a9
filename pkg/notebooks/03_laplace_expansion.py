"""How fast the Laplace transform approaches its leading term.

m_n(t) = E exp(t D_n) equals ((1 - e^{-t})/t) ((e^t - 1)/t)^n (1 + r_n(t)),
and |r_n(t)| is bounded by an explicit envelope that shrinks geometrically.
The realized remainder is computed in high precision against the exact law.
"""

import math

from descent_tails import complex_envelope, complex_remainder, laplace_estimate

for t in (0.5, 2.0, -1.0):
    print(f"t = {t}")
    for n in (1, 5, 10, 20, 40):
        est = laplace_estimate(n, t)
        print(f"  n={n:3d}  |r_n| = {abs(est.remainder):.3e}  envelope = {est.envelope:.3e}")

# on the line t + iv the envelope holds up to |v| < pi
for v in (0.5, 2.0, 3.0):
    r = complex_remainder(30, 1.0, v)
    print(f"v={v}: |r_30(1+iv)| = {abs(r):.3e} <= {complex_envelope(30, 1.0, v):.3e}")
print("pi - 1e-3 envelope:", complex_envelope(30, 1.0, math.pi - 1e-3))
