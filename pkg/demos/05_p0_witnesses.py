"""
When a matrix is not P0^(-)
===========================

For a matrix A that is not P0^(-) there are positive diagonal matrices
D1, D2 with det(A - D1) < 0 < det(A - D2). Somewhere on the segment between
them the determinant vanishes; bisection on exact rationals brackets it.
"""

from dsr_analyzer.qualmat import concrete, det, is_P0_minus, p0_witnesses

for rows in ([[1]], [[0, 1], [1, 0]], [[2, 0], [0, -1]], [[-1, 2, 0], [0, -1, 2], [2, 0, -1]]):
    a = concrete(rows)
    check = is_P0_minus(a)
    print(rows, "P0^(-)" if check else f"fails on {check.witness}")
    if check:
        continue
    w = p0_witnesses(a)
    print(f"    D1 = {[str(x) for x in w.d1]}  det {w.det1}")
    print(f"    D2 = {[str(x) for x in w.d2]}  det {w.det2}")
    print(f"    sign change for lambda in [{float(w.lam_low):.12f}, {float(w.lam_high):.12f}]")
