# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline double _dist2(const double* a, const double* b, Py_ssize_t d) noexcept nogil:
    cdef double s = 0.0, t
    cdef Py_ssize_t i
    for i in range(d):
        t = a[i] - b[i]
        s += t * t
    return s


def ball_mass(const double[:, :, ::1] verts, const double[::1] mass, const double[::1] center,
              double radius, const double[:, :, ::1] child_bary, const double[:, ::1] leaf_bary,
              double min_size, int max_depth):
    cdef Py_ssize_t S = verts.shape[0], nv = verts.shape[1], d = verts.shape[2]
    cdef Py_ssize_t C = child_bary.shape[0], P = leaf_bary.shape[0]
    cdef Py_ssize_t block = nv * d
    cdef Py_ssize_t cap = (max_depth + 1) * C + 1
    cdef double* stack = <double*> malloc(cap * block * sizeof(double))
    cdef double* wstack = <double*> malloc(cap * sizeof(double))
    cdef int* dstack = <int*> malloc(cap * sizeof(int))
    cdef double* parent = <double*> malloc(block * sizeof(double))
    cdef double* g = <double*> malloc(d * sizeof(double))
    cdef double* pt = <double*> malloc(d * sizeof(double))
    if not stack or not wstack or not dstack or not parent or not g or not pt:
        free(stack); free(wstack); free(dstack); free(parent); free(g); free(pt)
        raise MemoryError()
    cdef double r2 = radius * radius, total = 0.0, w, spread, dist, acc
    cdef Py_ssize_t s, top, i, j, c, p, a, hits
    cdef int depth
    cdef bint inside
    try:
        with nogil:
            for s in range(S):
                for i in range(nv):
                    for a in range(d):
                        stack[i * d + a] = verts[s, i, a]
                wstack[0] = mass[s]
                dstack[0] = 0
                top = 1
                while top > 0:
                    top -= 1
                    for i in range(block):
                        parent[i] = stack[top * block + i]
                    w = wstack[top]
                    depth = dstack[top]
                    inside = True
                    for i in range(nv):
                        if _dist2(parent + i * d, &center[0], d) > r2:
                            inside = False
                            break
                    if inside:
                        total += w
                        continue
                    for a in range(d):
                        acc = 0.0
                        for i in range(nv):
                            acc += parent[i * d + a]
                        g[a] = acc / nv
                    spread = 0.0
                    for i in range(nv):
                        acc = _dist2(parent + i * d, g, d)
                        if acc > spread:
                            spread = acc
                    spread = sqrt(spread)
                    dist = sqrt(_dist2(g, &center[0], d))
                    if dist > radius + spread:
                        continue
                    if depth >= max_depth or 2.0 * spread <= min_size:
                        hits = 0
                        for p in range(P):
                            for a in range(d):
                                acc = 0.0
                                for i in range(nv):
                                    acc += leaf_bary[p, i] * parent[i * d + a]
                                pt[a] = acc
                            if _dist2(pt, &center[0], d) <= r2:
                                hits += 1
                        total += w * hits / P
                        continue
                    for c in range(C):
                        for i in range(nv):
                            for a in range(d):
                                acc = 0.0
                                for j in range(nv):
                                    acc += child_bary[c, i, j] * parent[j * d + a]
                                stack[(top + c) * block + i * d + a] = acc
                        wstack[top + c] = w / C
                        dstack[top + c] = depth + 1
                    top += C
    finally:
        free(stack); free(wstack); free(dstack); free(parent); free(g); free(pt)
    return total


def cauchy_sum(const double complex[::1] nodes, const double complex[::1] weights,
               const double complex[::1] targets):
    cdef Py_ssize_t N = nodes.shape[0], T = targets.shape[0], k, t
    out = np.empty(T, dtype=np.complex128)
    cdef double complex[::1] res = out
    cdef double complex acc, z
    with nogil:
        for t in range(T):
            z = targets[t]
            acc = 0.0
            for k in range(N):
                acc = acc + weights[k] / (nodes[k] - z)
            res[t] = acc
    return out
