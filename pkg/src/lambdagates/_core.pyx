# cython: language_level=3, boundscheck=False, wraparound=False
# cython: cdivision=True, initializedcheck=False
"""Compiled propagation kernels.

Same contracts as ``_core_py``: an exponential-midpoint unitary product
driven by per-step Hermitian eigendecompositions (LAPACK ``zheevd``),
and an RK4 stepper for the Lindblad master equation. Matrices are tiny
(4x4 in practice), so everything is hand-rolled flat loops; the win
over numpy is per-call overhead, not BLAS throughput.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin
from libc.string cimport memcpy
from scipy.linalg.cython_lapack cimport zheevd

cnp.import_array()

BACKEND_NAME = "compiled"

ctypedef double complex zdouble


cdef inline void _zmatmul(const zdouble* a, const zdouble* b, zdouble* out,
                          int d) noexcept nogil:
    """out = a @ b for C-ordered d x d buffers (out must not alias inputs)."""
    cdef int i, j, k
    cdef zdouble acc
    for i in range(d):
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = acc + a[i * d + k] * b[k * d + j]
            out[i * d + j] = acc


cdef inline void _reconstruct_step(const zdouble* z, const double* w,
                                   double dt, zdouble* u, zdouble* phase,
                                   int d) noexcept nogil:
    """u = exp(-i H dt) from the zheevd output buffer.

    The C-ordered Hermitian input reads as its conjugate in Fortran
    order, so LAPACK returns eigenvectors of conj(H): Fortran column k
    (flat z[i + k*d]) is u_k with H conj(u_k) = w_k conj(u_k). Then
    exp(-i H dt)[a, b] = sum_k e^{-i w_k dt} conj(u_k[a]) u_k[b].
    """
    cdef int a, b, k
    cdef zdouble acc
    for k in range(d):
        phase[k] = cos(w[k] * dt) - 1j * sin(w[k] * dt)
    for a in range(d):
        for b in range(d):
            acc = 0
            for k in range(d):
                acc = acc + phase[k] * z[a + k * d].conjugate() * z[b + k * d]
            u[a * d + b] = acc


def propagate_unitary_stack(h_mid, dt, psi0=None, stride=0):
    """Accumulate U = prod_k exp(-i H_k dt) over the midpoint stack.

    Mirrors ``_core_py.propagate_unitary_stack``: with ``stride > 0``
    and ``psi0`` given, records the state before every ``stride``-th
    step and after the last one. Returns ``(U, sample_steps, states)``.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] H = \
        np.ascontiguousarray(h_mid, dtype=np.complex128)
    cdef int n = H.shape[0]
    cdef int d = H.shape[1]
    cdef double dtc = float(dt)
    cdef int istride = int(stride)
    cdef bint record = istride > 0 and psi0 is not None

    cdef int n_rec = 1, rec = 0
    if record:
        n_rec = (0 if n == 0 else (n - 1) // istride + 1) + 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1, mode="c"] psi = \
        np.ascontiguousarray(psi0 if record else np.zeros(d),
                             dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] states = \
        np.empty((n_rec, d), dtype=np.complex128)
    cdef cnp.ndarray[cnp.intp_t, ndim=1, mode="c"] idx = \
        np.empty(n_rec, dtype=np.intp)

    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] U = \
        np.eye(d, dtype=np.complex128)

    # LAPACK workspace, sized by query.
    cdef cnp.ndarray[cnp.complex128_t, ndim=1, mode="c"] abuf = \
        np.empty(d * d, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] w = \
        np.empty(d, dtype=np.float64)
    cdef char jobz = b"V", uplo = b"L"
    cdef int info = 0, lwork = -1, lrwork = -1, liwork = -1, nn = d
    cdef zdouble wkq
    cdef double rwq
    cdef int iwq
    zheevd(&jobz, &uplo, &nn, &abuf[0], &nn, &w[0], &wkq, &lwork,
           &rwq, &lrwork, &iwq, &liwork, &info)
    if info != 0:
        raise RuntimeError(f"zheevd workspace query failed (info={info})")
    lwork = <int>wkq.real
    lrwork = <int>rwq
    liwork = iwq
    cdef cnp.ndarray[cnp.complex128_t, ndim=1, mode="c"] work = \
        np.empty(lwork, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] rwork = \
        np.empty(lrwork, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode="c"] iwork = \
        np.empty(liwork, dtype=np.int32)

    cdef cnp.ndarray[cnp.complex128_t, ndim=1, mode="c"] ustep = \
        np.empty(d * d, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1, mode="c"] utmp = \
        np.empty(d * d, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1, mode="c"] phase = \
        np.empty(d, dtype=np.complex128)

    cdef zdouble* Up = &U[0, 0]
    cdef zdouble* ustepp = &ustep[0]
    cdef zdouble* utmpp = &utmp[0]
    cdef zdouble acc
    cdef int k, i, j, fail = 0

    with nogil:
        for k in range(n):
            if record and k % istride == 0:
                idx[rec] = k
                for i in range(d):
                    acc = 0
                    for j in range(d):
                        acc = acc + Up[i * d + j] * psi[j]
                    states[rec, i] = acc
                rec += 1
            memcpy(&abuf[0], &H[k, 0, 0], d * d * sizeof(zdouble))
            zheevd(&jobz, &uplo, &nn, &abuf[0], &nn, &w[0], &work[0], &lwork,
                   &rwork[0], &lrwork, <int*>&iwork[0], &liwork, &info)
            if info != 0:
                fail = k + 1
                break
            _reconstruct_step(&abuf[0], &w[0], dtc, ustepp, &phase[0], d)
            _zmatmul(ustepp, Up, utmpp, d)
            memcpy(Up, utmpp, d * d * sizeof(zdouble))
    if fail:
        raise RuntimeError(f"zheevd failed at step {fail - 1} (info={info})")

    if record:
        idx[rec] = n
        for i in range(d):
            acc = 0
            for j in range(d):
                acc = acc + Up[i * d + j] * psi[j]
            states[rec, i] = acc
        return U, idx, states
    return U, None, None


cdef void _lindblad_rhs(const zdouble* hbuf, const zdouble* rho,
                        const zdouble* lbuf, int m, const zdouble* hld,
                        zdouble* out, zdouble* t1, zdouble* t2,
                        int d) noexcept nogil:
    """out = -i[H, rho] + sum_m L rho L^dag - {hld, rho}."""
    cdef int i, j, k, q
    cdef zdouble acc
    _zmatmul(hbuf, rho, t1, d)
    _zmatmul(rho, hbuf, t2, d)
    for i in range(d * d):
        out[i] = -1j * (t1[i] - t2[i])
    _zmatmul(hld, rho, t1, d)
    _zmatmul(rho, hld, t2, d)
    for i in range(d * d):
        out[i] = out[i] - t1[i] - t2[i]
    for q in range(m):
        _zmatmul(lbuf + q * d * d, rho, t1, d)
        for i in range(d):
            for j in range(d):
                acc = 0
                for k in range(d):
                    acc = acc + t1[i * d + k] * \
                        (lbuf + q * d * d)[j * d + k].conjugate()
                out[i * d + j] = out[i * d + j] + acc


def lindblad_rk4(h_half, lops, rho0, dt, stride=0):
    """RK4 master-equation stepping; mirrors ``_core_py.lindblad_rk4``.

    ``h_half`` holds the Hamiltonian at step endpoints and half points
    (2n + 1 entries); returns ``(rho, sample_steps, populations)``.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] H = \
        np.ascontiguousarray(h_half, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] L = \
        np.ascontiguousarray(np.asarray(lops, dtype=np.complex128).reshape(
            (-1, H.shape[1], H.shape[1])))
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] rho = \
        np.array(rho0, dtype=np.complex128, copy=True, order="C")
    cdef int n = (H.shape[0] - 1) // 2
    cdef int d = H.shape[1]
    cdef int m = L.shape[0]
    cdef double dtc = float(dt)
    cdef int istride = int(stride)
    cdef bint record = istride > 0

    ldag = np.conj(np.swapaxes(np.asarray(L), -1, -2))
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] hld = \
        np.ascontiguousarray(0.5 * np.einsum("mij,mjk->ik", ldag, np.asarray(L)))

    cdef int n_rec = 1, rec = 0
    if record:
        n_rec = (0 if n == 0 else (n - 1) // istride + 1) + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] pops = \
        np.empty((n_rec, d), dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1, mode="c"] idx = \
        np.empty(n_rec, dtype=np.intp)

    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] scratch = \
        np.empty((7, d * d), dtype=np.complex128)
    cdef zdouble* k1 = &scratch[0, 0]
    cdef zdouble* k2 = &scratch[1, 0]
    cdef zdouble* k3 = &scratch[2, 0]
    cdef zdouble* k4 = &scratch[3, 0]
    cdef zdouble* rt = &scratch[4, 0]
    cdef zdouble* t1 = &scratch[5, 0]
    cdef zdouble* t2 = &scratch[6, 0]
    cdef zdouble* rp = &rho[0, 0]
    cdef zdouble* lp = NULL
    if m > 0:
        lp = &L[0, 0, 0]

    cdef int k, i
    with nogil:
        for k in range(n):
            if record and k % istride == 0:
                idx[rec] = k
                for i in range(d):
                    pops[rec, i] = rp[i * d + i].real
                rec += 1
            _lindblad_rhs(&H[2 * k, 0, 0], rp, lp, m, &hld[0, 0],
                          k1, t1, t2, d)
            for i in range(d * d):
                rt[i] = rp[i] + 0.5 * dtc * k1[i]
            _lindblad_rhs(&H[2 * k + 1, 0, 0], rt, lp, m, &hld[0, 0],
                          k2, t1, t2, d)
            for i in range(d * d):
                rt[i] = rp[i] + 0.5 * dtc * k2[i]
            _lindblad_rhs(&H[2 * k + 1, 0, 0], rt, lp, m, &hld[0, 0],
                          k3, t1, t2, d)
            for i in range(d * d):
                rt[i] = rp[i] + dtc * k3[i]
            _lindblad_rhs(&H[2 * k + 2, 0, 0], rt, lp, m, &hld[0, 0],
                          k4, t1, t2, d)
            for i in range(d * d):
                rp[i] = rp[i] + (dtc / 6.0) * \
                    (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    if record:
        idx[rec] = n
        for i in range(d):
            pops[rec, i] = rp[i * d + i].real
        return rho, idx, pops
    return rho, None, None
