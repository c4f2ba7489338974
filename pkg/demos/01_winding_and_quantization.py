"""
Matrix loops, winding numbers, and discretization
=================================================

A symbol on the circle is a pair of matrix-valued trigonometric
polynomials (one per cotangent direction).  This walk-through builds a
few loops, reads off their determinant windings, and shows what the
finite Fourier-mode truncation of a symbol looks like.
"""

import numpy as np

from etaforge import CircleSymbol, TrigPolyMatrix, quantize, winding_number
from etaforge.symbols import mode_labels

# a scalar loop z^3 and a 2x2 loop diag(z, z^-1): windings 3 and 0
z3 = TrigPolyMatrix({3: np.eye(1)})
balanced = TrigPolyMatrix({1: np.diag([1.0, 0.0]), -1: np.diag([0.0, 1.0])})
print("winding of z^3:        ", winding_number(z3))
print("winding of diag(z,1/z):", winding_number(balanced))

# windings add under pointwise products
print("winding of product:    ", winding_number(z3 @ z3))

# a symbol carries one face per direction; equal faces mean the operator
# is an honest multiplication
sym = CircleSymbol(0, z3, z3, name="mult_z3")
print("\nsymbol:", sym.name, "order", sym.order, "rows", sym.rows)

# the truncation keeps modes |n| <= N (N must exceed twice the symbol
# degree); each block row applies the face matching the sign of its mode
N = 8
T = quantize(sym, N)
print("truncated matrix shape:", T.matrix.shape)

# mode bookkeeping: which ambient row belongs to which |mode|
print("mode labels at N=2, fiber 2:", mode_labels(2, 2).tolist())

# a z-shift moves mode n to n+1, so the last rows of the window die;
# that boundary effect is why index counts filter by mode location
col_mass = np.abs(T.matrix).sum(axis=0)
print("columns annihilated by the window:",
      int((col_mass < 1e-12).sum()), "of", T.matrix.shape[1])
