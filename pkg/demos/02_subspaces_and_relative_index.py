"""
Subspaces cut out by projections, and the relative index
========================================================

The range of an order-zero projection-valued symbol is a "subspace" in
the operator-theoretic sense: Hardy space (nonnegative modes) is the
classic odd example, the rotating half-spin line is the classic even
one.  Two subspaces with the same symbol differ by finitely many
dimensions, and that difference is the relative index.
"""

import numpy as np

from etaforge import (hardy_subspace, mobius_subspace, relative_index,
                      spectral_subspace, quantize)
from etaforge.subspaces import dump_subspace_csv, face_residual
from etaforge.symbols import CircleSymbol
from etaforge.core import TrigPolyMatrix

hardy = hardy_subspace()
print("Hardy subspace:", hardy.name, "fiber", hardy.fiber,
      "parity", hardy.symbol.parity)
print("rank at N=8:", hardy.rank(8), "of ambient", 2 * 8 + 1)

# shifting the cutoff mode drops k dimensions: the relative index sees
# exactly that, independent of the truncation
for k in range(4):
    print(f"ind(Hardy, Hardy shifted by {k}) =",
          relative_index(hardy, hardy_subspace(k)))

# the Mobius-type line: rank N vs the trivial line's N+1 -- an even
# subspace that no constant splitting reproduces
mob = mobius_subspace()
print("\nMobius line parity:", mob.symbol.parity)
print("rank at N=8:", mob.rank(8))
print("projection residual (symbol vs realization):",
      f"{face_residual(mob, 8):.2e}")

# spectral subspaces of a self-adjoint elliptic symbol recover Hardy up
# to a finite-rank correction
sign_sym = CircleSymbol(1, TrigPolyMatrix({0: np.eye(1)}),
                        TrigPolyMatrix({0: -np.eye(1)}), name="sign")
spec = spectral_subspace(quantize(sign_sym, 12))
print("\nind(spectral subspace, Hardy) =", relative_index(spec, hardy))

# realizations dump to CSV for inspection
path = dump_subspace_csv(hardy, (4,), "hardy_realization.csv")
print("wrote", path)
