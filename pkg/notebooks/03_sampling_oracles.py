# Samplers and the Brownian argmax oracle, compared by KS distance.
# Run: python3 notebooks/03_sampling_oracles.py   (~30 s)
import numpy as np
from scipy import stats

from chernoff import ChernoffDist, gfunc, hypoexp

d = ChernoffDist(1.0)
n = 20000
crit = stats.kstwo.ppf(0.99, n)
print(f"1% KS critical value at n={n}: {crit:.4f}")

# %% envelope rejection from the log-concave density
z, info = hypoexp.sample_chernoff(d, n, seed=1, full_output=True)
print("rejection: acceptance", round(info.acceptance_rate, 4),
      " KS", stats.kstest(z, d.cdf).statistic)

# %% argmax of W(t) - t^2 on a grid
za = hypoexp.simulate_argmax(1.0, 3.0, 1e-3, n, seed=2)
print("argmax sim: KS", stats.kstest(za, d.cdf).statistic, " var", za.var(), "vs", d.moment(2))

# %% g~ as a centred sum of exponentials
rep = hypoexp.GTildeRep.from_c(1.0, 400)
P = gfunc.GParams(1.0)
cdf = lambda x: gfunc.gtilde_cdf(P, x)
for tail in (True, False):
    y = hypoexp.sample_gtilde(rep, n, seed=3, gaussian_tail=tail)
    print(f"g~ sampler (gaussian tail={tail}): KS", stats.kstest(y, cdf).statistic)
print("omitted-term sd:", np.sqrt(rep.tail_variance))

# %% Harrison's density and v_m convexity
probe = hypoexp.vm_convexity_probe([1.0, 2.0, 3.0], np.linspace(0.1, 5, 200))
print("m=3 min second difference of v_3:", probe.min_second_diff)
