# %% [markdown]
# # Exponent constants
#
# C, v0, z0 and C4 are roots of explicit scalar equations found by bisection.

# %%
import json

from nbsums.constants import exponent_balance, solve_section_constants, solve_theorem_constants

for name, c in solve_theorem_constants().items():
    print(name, json.dumps(c.as_dict(), default=str))
sec = solve_section_constants()
print("C4 block:", sec.as_dict())
print("balance at v0:", exponent_balance(solve_theorem_constants()["equation_root"].v0))
