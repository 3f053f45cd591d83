# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled fixed-step RK4 for psi' = -i (A + s B) psi."""

import numpy as np


cdef inline void _rhs(const double complex[:, ::1] a, const double complex[:, ::1] b,
                      double s, const double complex[::1] x, double complex[::1] out,
                      Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double complex acc
    for i in range(d):
        acc = 0
        for j in range(d):
            acc = acc + (a[i, j] + s * b[i, j]) * x[j]
        # multiply by -i
        out[i] = acc.imag - 1j * acc.real


def rk4_affine(psi0, a, b, double s0, double h, Py_ssize_t nsteps):
    cdef const double complex[:, ::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef const double complex[:, ::1] bv = np.ascontiguousarray(b, dtype=np.complex128)
    out = np.array(psi0, dtype=np.complex128, copy=True, order="C")
    cdef Py_ssize_t d = out.shape[0]
    if av.shape[0] != d or av.shape[1] != d or bv.shape[0] != d or bv.shape[1] != d:
        raise ValueError("matrix and state dimensions disagree")
    cdef double complex[::1] psi = out
    cdef double complex[::1] k1 = np.empty(d, np.complex128)
    cdef double complex[::1] k2 = np.empty(d, np.complex128)
    cdef double complex[::1] k3 = np.empty(d, np.complex128)
    cdef double complex[::1] k4 = np.empty(d, np.complex128)
    cdef double complex[::1] tmp = np.empty(d, np.complex128)
    cdef Py_ssize_t step, i
    cdef double s, half = 0.5 * h, sixth = h / 6.0
    with nogil:
        for step in range(nsteps):
            s = s0 + step * h
            _rhs(av, bv, s, psi, k1, d)
            for i in range(d):
                tmp[i] = psi[i] + half * k1[i]
            _rhs(av, bv, s + half, tmp, k2, d)
            for i in range(d):
                tmp[i] = psi[i] + half * k2[i]
            _rhs(av, bv, s + half, tmp, k3, d)
            for i in range(d):
                tmp[i] = psi[i] + h * k3[i]
            _rhs(av, bv, s + h, tmp, k4, d)
            for i in range(d):
                psi[i] = psi[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return out
