# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled per-cell kernels; bit-identical to kernels._ref.

All floating-point expressions are written with the same operation order
as the reference so IEEE-754 double results match exactly.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"


def life_next(alive, int width, int height, bint torus):
    cdef int n_cells = width * height
    cdef char *cur = <char *> malloc(n_cells)
    cdef char *nxt = <char *> malloc(n_cells)
    if cur == NULL or nxt == NULL:
        free(cur)
        free(nxt)
        raise MemoryError()
    cdef int i, r, c, dr, dc, nr, nc, n
    try:
        for i in range(n_cells):
            cur[i] = 1 if alive[i] else 0
        for r in range(height):
            for c in range(width):
                n = 0
                for dr in range(-1, 2):
                    for dc in range(-1, 2):
                        if dr == 0 and dc == 0:
                            continue
                        nr = r + dr
                        nc = c + dc
                        if torus:
                            nr = nr % height
                            if nr < 0:
                                nr += height
                            nc = nc % width
                            if nc < 0:
                                nc += width
                        elif nr < 0 or nr >= height or nc < 0 or nc >= width:
                            continue
                        n += cur[nr * width + nc]
                i = r * width + c
                nxt[i] = 1 if n == 3 or (cur[i] and n == 2) else 0
        return [nxt[i] for i in range(n_cells)]
    finally:
        free(cur)
        free(nxt)


def pastoral_patch_update(humidity, fresh, dry, trees,
                          double rain, double evaporation, double tree_uptake,
                          double grass_growth, double dry_threshold,
                          double dry_rate, double dry_decay):
    cdef int n = len(humidity)
    cdef double *h = <double *> malloc(n * sizeof(double))
    cdef double *f = <double *> malloc(n * sizeof(double))
    cdef double *d = <double *> malloc(n * sizeof(double))
    cdef int *t = <int *> malloc(n * sizeof(int))
    if h == NULL or f == NULL or d == NULL or t == NULL:
        free(h); free(f); free(d); free(t)
        raise MemoryError()
    cdef int i
    cdef double hv, fv, dv, hn, fn, dn, growth, dryout
    try:
        for i in range(n):
            h[i] = humidity[i]
            f[i] = fresh[i]
            d[i] = dry[i]
            t[i] = trees[i]
        h2 = [0.0] * n
        f2 = [0.0] * n
        d2 = [0.0] * n
        for i in range(n):
            hv = h[i]
            fv = f[i]
            dv = d[i]
            hn = hv + rain - evaporation - tree_uptake * t[i]
            if hn < 0.0:
                hn = 0.0
            elif hn > 1.0:
                hn = 1.0
            growth = grass_growth * hv * (1.0 - fv - dv)
            dryout = dry_rate * fv if hv < dry_threshold else 0.0
            fn = fv + growth - dryout
            if fn < 0.0:
                fn = 0.0
            elif fn > 1.0:
                fn = 1.0
            dn = dv + dryout - dry_decay * dv
            if dn < 0.0:
                dn = 0.0
            elif dn > 1.0:
                dn = 1.0
            if dn > 1.0 - fn:
                dn = 1.0 - fn
            h2[i] = hn
            f2[i] = fn
            d2[i] = dn
        return h2, f2, d2
    finally:
        free(h); free(f); free(d); free(t)


def fnv1a64_digest(bytes data):
    cdef unsigned long long h = 0xCBF29CE484222325ULL
    cdef const unsigned char *p = data
    cdef Py_ssize_t i, n = len(data)
    for i in range(n):
        h = (h ^ p[i]) * 0x100000001B3ULL
    return h
