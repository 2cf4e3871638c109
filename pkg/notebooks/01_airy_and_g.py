# Airy function on the imaginary axis and the one-sided factor g_c.
# Run: python3 notebooks/01_airy_and_g.py
import numpy as np

from chernoff import airy, gfunc

# %% constants at the origin
k = airy.airy_constants()
print("Ai(0) =", k.ai0, " Ai'(0) =", k.ai_prime0, " nu = -Ai'(0)/Ai(0) =", k.nu)

# %% Ai along i*y: it grows like exp((sqrt 2 / 3) y^1.5), so 1/Ai decays fast
y = np.array([0.0, 2.0, 5.0, 10.0, 20.0])
print("|1/Ai(iy)|:", np.abs(1 / airy.ai(1j * y)))

# %% zeros -a_k and the Hadamard product
a = airy.airy_zeros(5)
print("first zeros:", a)
x = np.linspace(-12, 2, 701)
exact = airy.ai(x).real
for m in (25, 125, 500):
    gap = np.max(np.abs(airy.ai_hadamard(x, m) - exact))
    print(f"sup |product_{m} - Ai| on [-12, 2] = {gap:.4g}")  # converges slowly

# sum of 1/a_k^2 is nu^2; the partial sums creep up like m^(-1/3)
part = np.cumsum(1 / airy.airy_zeros(2000) ** 2)
print("nu^2 - partial sums at m = 10, 100, 2000:", k.nu ** 2 - part[[9, 99, 1999]])

# %% g_1 by Fourier inversion
P = gfunc.GParams(1.0)
xs = np.array([-7.0, -4.0, -2.0, 0.0, 1.0, 2.0, 3.0])
print("g_1:", gfunc.g(P, xs))
print("closed-form mass 2^(1/3)/Ai(0) =", gfunc.g_integral(P))

# (-log g)'' is positive everywhere we can resolve it
print("v(x) on [-3, 2]:", gfunc.v(P, np.linspace(-3, 2, 6)))
