# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled iteration kernel: (index, nullity) tables for rational-rotation
models.  Exact twin of geodex._iterkern_py; callers guarantee the int64
bounds before dispatching here.
"""

from libc.stdlib cimport free, malloc

BACKEND = "cython"


def rational_iteration_table(long long mmax, long long k_lin, long long k_const,
                             long long k_even, rot_nums, rot_dens,
                             long long nu_one, long long q_weight,
                             null_dens, phi_dens):
    cdef Py_ssize_t nrot = len(rot_nums)
    cdef Py_ssize_t nnul = len(null_dens)
    cdef Py_ssize_t nphi = len(phi_dens)
    cdef long long *nums = <long long *> malloc(nrot * sizeof(long long)) if nrot else NULL
    cdef long long *dens = <long long *> malloc(nrot * sizeof(long long)) if nrot else NULL
    cdef long long *nuls = <long long *> malloc(nnul * sizeof(long long)) if nnul else NULL
    cdef long long *phis = <long long *> malloc(nphi * sizeof(long long)) if nphi else NULL
    cdef Py_ssize_t j
    cdef long long m, acc, nv, num, den
    idx = [0] * mmax
    nul = [0] * mmax
    try:
        for j in range(nrot):
            nums[j] = rot_nums[j]
            dens[j] = rot_dens[j]
        for j in range(nnul):
            nuls[j] = null_dens[j]
        for j in range(nphi):
            phis[j] = phi_dens[j]
        for m in range(1, mmax + 1):
            acc = m * k_lin + k_const
            for j in range(nrot):
                num = m * nums[j]
                den = dens[j]
                acc += 2 * ((num + den - 1) / den)
            if m % 2 == 0:
                acc += k_even
            for j in range(nphi):
                if m % phis[j] == 0:
                    acc -= 2
            nv = nu_one
            if m % 2 == 0:
                nv += q_weight
            for j in range(nnul):
                if m % nuls[j] == 0:
                    nv += 2
            idx[m - 1] = acc
            nul[m - 1] = nv
    finally:
        if nums != NULL:
            free(nums)
        if dens != NULL:
            free(dens)
        if nuls != NULL:
            free(nuls)
        if phis != NULL:
            free(phis)
    return idx, nul
