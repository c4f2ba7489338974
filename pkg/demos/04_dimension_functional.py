"""
A dimension for infinite-dimensional subspaces
==============================================

Even subspaces admit a canonical "dimension" d: an exact dyadic rational
that is additive, kills orthocomplement pairs, is blind to conjugation
by invertible even operators, and extends the relative index.  Removing
a single direction from a realization shifts d by exactly -1, so d sees
more than the symbol -- but its fractional part does not.
"""

from etaforge import dimension_functional, orthocomplement
from etaforge.kzn import fractional_eta_topological
from etaforge.subspaces import conjugate_subspace, puncture, trivial_subspace
from etaforge.suites import even_invertible_symbol, even_subspace_suite, rng_for

print("subspace            d      d(complement)   fractional")
for name, L in even_subspace_suite():
    d = dimension_functional(L)
    dp = dimension_functional(orthocomplement(L))
    print(f"{name:18s} {str(d):>4s}   {str(dp):>6s}          "
          f"{fractional_eta_topological(L)}")

# puncture a realization: the symbol is untouched but d drops by one
base = trivial_subspace(2, 1)
holed = puncture(base)
print("\nd(trivial line)   =", dimension_functional(base))
print("d(punctured line) =", dimension_functional(holed))

# conjugation by an invertible even multiplication cannot move d, even
# though it scrambles the realization completely
rng = rng_for(7, "demo_conj")
W = even_invertible_symbol(rng, 2)
moved = conjugate_subspace(holed, W.plus, name="conjugated_hole")
print("d after conjugation =", dimension_functional(moved))
