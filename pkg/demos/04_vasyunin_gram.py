# %% [markdown]
# # Vasyunin sums and the Gram matrix
#
# The Gram entries b_{h,k} are closed forms in Vasyunin's cotangent sum. They are
# cross-checked against direct quadrature of |zeta(1/2+it)|^2 (h/k)^{it} / (1/4+t^2).

# %%
import math

from nbsums.nb import verify_bhk_integral
from nbsums.sums import cotangent_c0, gram_b, gram_matrix, vasyunin_orientation, vasyunin_V

print("V(1/5) =", vasyunin_V(1, 5), " c0(1/5) =", cotangent_c0(1, 5))
o = vasyunin_orientation(60)
print("orientation over k<=60:", o["orientation"], "pairs:", o["pairs"])

# %%
for h, k in [(1, 1), (1, 2), (2, 3), (3, 7)]:
    r = verify_bhk_integral(h, k, T=2000.0)
    print(f"b({h},{k}) closed={r.closed_form:.8f} quadrature={r.quadrature.value:.8f} diff={r.difference:.1e}")

# %%
B = gram_matrix(6)
print(B.round(4))
print("smallest eigenvalue:", min(abs(x) for x in __import__("numpy").linalg.eigvalsh(B)))
