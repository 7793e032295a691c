# %% [markdown]
# # Monte-Carlo checks under the Gauss measure
#
# Samples come from the Gauss density 1/((1+x) log 2). Batches have their own
# seeds, so results do not depend on the worker count.

# %%
from nbsums import stats_mc as mc

cfg = mc.MCConfig(samples=200_000)
inv = mc.mc_invariance((0.0, 0.5), cfg)
print(f"invariance: measure={inv.measure:.6f} preimage={inv.preimage_estimate:.6f} z={inv.z_score:.2f}")

for s in (1, 3, 6, 10):
    c = mc.mc_contraction(s, 2.0, cfg)
    print(f"contraction s={s:2d} ratio={c.ratio:.3e} bound={c.bound:.3e} ok={c.passes}")

# %% [markdown]
# Tail of q_s: the fraction of points whose s-th denominator exceeds exp(C1 s).

# %%
tail = mc.mc_tail_qs(2.0, [10, 15, 20], mc.MCConfig(samples=100_000, bits=256))
for r in tail.rows:
    print(f"s={r.s} estimate={r.estimate:.2e} bound={r.bound:.2e} gamma bound={r.gamma_bound:.2e}")

# %%
rep = mc.check_alpha_product(mc.MCConfig(samples=2_000, bits=128))
print("alpha-product inequality violations:", rep.violations, "of", rep.levels_checked)
cells = mc.exhaustive_cell_check(4, 12)
print(f"cells={cells.cells} measure failures={cells.measure_failures} log q failures={cells.logq_failures}")
