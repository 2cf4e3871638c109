# The normal density in the same product form: phi(z) = g(z) g(-z) / 2.
# Run: python3 notebooks/04_gaussian_factor.py
import numpy as np

from chernoff import gaussfact as GF

z = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
for v in map(GF.g_normal_value, z):
    print(f"z={v.z:5.1f}  g={v.g:.12f}  residual={v.residual:.2e}")

# the two integral representations agree
print("form gap at z=2:", GF.g_normal(2.0) - GF.g_normal_first_form(2.0))

# -log g has second derivative e^z / (1 + e^z): a logistic curve, so g is log-concave
grid = np.linspace(-6, 6, 25)
print("(-log g)'' by differences:", np.round(GF.log_concavity_scan(grid), 4))
print(GF.integrability_report())
