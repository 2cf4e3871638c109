# The density f(t) = g(t) g(-t) / 2, its cdf and quantiles, and log-concavity.
# Run: python3 notebooks/02_chernoff_density.py
import numpy as np

from chernoff import ChernoffDist, distribution as D

d = ChernoffDist(1.0)      # builds the cdf cache (~2 s)

# %% density, cdf, quantiles
t = np.array([0.0, 0.5, 1.0, 2.0])
print("f:", d.pdf(t))
print("F:", d.cdf(t))
print("95% two-sided interval: +-", d.quantile(0.975))
print("Var Z =", d.moment(2), " E Z^4 =", d.moment(4))

# %% w = (-log f)'' and the Gaussian scale at 0
print("w(0) =", d.w(0.0), " sigma0 =", D.sigma0(d), " sigma0^1.5 =", D.sigma0(d) ** 1.5)
grid = np.round(np.arange(-2.5, 2.5001, 0.01), 12)
ww = d.w(grid)
print("min w - w(0) on [-2.5, 2.5]:", ww.min() - d.w(0.0))   # strong log-concavity evidence

# %% scaling Z_c = c^(-2/3) Z_1
for c in (0.5, 2.0):
    print(f"c={c}: max residual", np.max(np.abs(D.scaling_check(c, [-1, 0, 0.7]))),
          " var ratio", ChernoffDist(c).moment(2) / d.moment(2), "vs", c ** (-4 / 3))

# %% the correlation-type inequality: unsquared form changes sign, squared one does not
print("I1*I2 + I3   at (3,-1):", D.correlation_inequality(3.0, -1.0))
print("I1*I2 + I3^2 at (3,-1):", D.correlation_inequality(3.0, -1.0, squared_cross_term=True))

# %% transport map from N(0,1)
rep = D.transport_map(d, np.linspace(-2, 2, 5), full_output=True)
print("T:", rep.T, " T' at -1,0,1:", rep.derivative)
