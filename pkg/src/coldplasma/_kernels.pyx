# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sweep kernel; same contract as ``_fallback.advance``.

Characteristics are stepped in blocks of ``BLOCK`` so the stage loops run
over independent lanes and vectorize; the arithmetic per lane matches the
numpy path operation for operation.
"""
from cython.parallel cimport prange
from libc.math cimport isfinite, sqrt

cimport numpy as cnp

DEF BLOCK = 64


cdef inline void _rhs(double[5][BLOCK] y, const double* e0, double[5][BLOCK] d,
                      int nb) noexcept nogil:
    cdef int b
    cdef double P, g, v
    for b in range(nb):
        P = y[1][b]
        g = sqrt(1.0 + P * P)
        v = P / g
        d[0][b] = v
        d[1][b] = -y[2][b]
        d[2][b] = v
        d[3][b] = -((y[4][b] + e0[b]) - 1.0)
        d[4][b] = y[3][b] * (1.0 / (g * g * g))


cdef void _advance_block(double* state, const double* e0, signed char* status,
                         cnp.int64_t* event_step, double* event_state,
                         int nb, double h, Py_ssize_t nsteps) noexcept nogil:
    cdef double y[5][BLOCK]
    cdef double t[5][BLOCK]
    cdef double yn[5][BLOCK]
    cdef double k1[5][BLOCK]
    cdef double k2[5][BLOCK]
    cdef double k3[5][BLOCK]
    cdef double k4[5][BLOCK]
    cdef int active[BLOCK]
    cdef double hh = 0.5 * h
    cdef double h6 = h / 6.0
    cdef int b, j, n_active = 0
    cdef Py_ssize_t i
    for b in range(nb):
        active[b] = status[b] == 1
        n_active += active[b]
        for j in range(5):
            y[j][b] = state[5 * b + j]
    if n_active == 0:
        return
    for i in range(nsteps):
        _rhs(y, e0, k1, nb)
        for j in range(5):
            for b in range(nb):
                t[j][b] = y[j][b] + hh * k1[j][b]
        _rhs(t, e0, k2, nb)
        for j in range(5):
            for b in range(nb):
                t[j][b] = y[j][b] + hh * k2[j][b]
        _rhs(t, e0, k3, nb)
        for j in range(5):
            for b in range(nb):
                t[j][b] = y[j][b] + h * k3[j][b]
        _rhs(t, e0, k4, nb)
        for j in range(5):
            for b in range(nb):
                yn[j][b] = y[j][b] + h6 * (((k1[j][b] + 2.0 * k2[j][b]) + 2.0 * k3[j][b])
                                           + k4[j][b])
        for b in range(nb):
            if not active[b]:
                continue
            if not (isfinite(yn[0][b]) and isfinite(yn[1][b]) and isfinite(yn[2][b])
                    and isfinite(yn[3][b]) and isfinite(yn[4][b])):
                status[b] = 2
            elif yn[4][b] <= 0.0:
                status[b] = 0
            else:
                for j in range(5):
                    y[j][b] = yn[j][b]
                continue
            active[b] = 0
            n_active -= 1
            event_step[b] = i
            for j in range(5):
                event_state[5 * b + j] = y[j][b]
        if n_active == 0:
            break
    for b in range(nb):
        for j in range(5):
            state[5 * b + j] = y[j][b]


def advance(double[:, ::1] state, const double[::1] e0, signed char[::1] status,
            double h, Py_ssize_t nsteps, cnp.int64_t[::1] event_step,
            double[:, ::1] event_state):
    cdef Py_ssize_t M = state.shape[0]
    cdef Py_ssize_t n_blocks = (M + BLOCK - 1) // BLOCK
    cdef Py_ssize_t k, start, m
    cdef int nb
    cdef Py_ssize_t before = 0, after = 0
    if nsteps <= 0 or M == 0:
        return 0
    for m in range(M):
        before += status[m] == 1
    for k in prange(n_blocks, nogil=True, schedule="static"):
        start = k * BLOCK
        nb = <int>(M - start if M - start < BLOCK else BLOCK)
        _advance_block(&state[start, 0], &e0[start], &status[start],
                       &event_step[start], &event_state[start, 0], nb, h, nsteps)
    for m in range(M):
        after += status[m] == 1
    return before - after
