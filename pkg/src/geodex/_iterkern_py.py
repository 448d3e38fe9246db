"""Pure-Python twin of the compiled iteration kernel.

Same contract as ``geodex._iterkern``: given the coefficient form of the
iteration formulas for a model whose rotation angles are all rational,
produce the (index, nullity) table for m = 1..mmax.  Unbounded integers, so
no overflow guard is needed here.
"""

from __future__ import annotations

BACKEND = "python"


def rational_iteration_table(mmax, k_lin, k_const, k_even, rot_nums, rot_dens,
                             nu_one, q_weight, null_dens, phi_dens):
    """Index/nullity table for a rational-rotation model.

    i(m)  = m*k_lin + 2*sum_j ceil(m*num_j/den_j) + k_const
            + [m even]*k_even - 2*#{s in phi_dens : s | m}
    nu(m) = nu_one + [m even]*q_weight + 2*#{s in null_dens : s | m}
    """
    idx = [0] * mmax
    nul = [0] * mmax
    nrot = len(rot_nums)
    for m in range(1, mmax + 1):
        acc = m * k_lin + k_const
        for j in range(nrot):
            num = m * rot_nums[j]
            den = rot_dens[j]
            acc += 2 * ((num + den - 1) // den)
        if m % 2 == 0:
            acc += k_even
        for s in phi_dens:
            if m % s == 0:
                acc -= 2
        nv = nu_one
        if m % 2 == 0:
            nv += q_weight
        for s in null_dens:
            if m % s == 0:
                nv += 2
        idx[m - 1] = acc
        nul[m - 1] = nv
    return idx, nul
