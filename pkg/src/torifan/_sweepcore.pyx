# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep engine for surfaces and threefolds.

Same contract and sample order as torifan._sweep_pure.run_sweep.  All
per-sample arithmetic runs in C integers with 128-bit intermediates; the
caller (torifan.sweep.select_engine) admits an input only after proving
from precomputed magnitude bounds that nothing can overflow.  Maximum
tracking uses a float prefilter and falls back to exact Fraction
comparison whenever a sample lands near the current best.
"""

from fractions import Fraction

from libc.stdlib cimport free, malloc

from torifan._sweep_pure import RawSweep
from torifan.errors import VerificationError

cdef extern from *:
    ctypedef long long int128 "__int128"


cdef inline long long ll_gcd(long long a, long long b) noexcept:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline int128 i128_abs(int128 x) noexcept:
    return -x if x < 0 else x


cdef object i128_to_py(int128 x):
    cdef bint neg = x < 0
    if neg:
        x = -x
    cdef unsigned long long hi = <unsigned long long> (x >> 64)
    cdef unsigned long long lo = <unsigned long long> (
        x & <int128> 0xFFFFFFFFFFFFFFFF
    )
    value = (int(hi) << 64) | int(lo)
    return -value if neg else value


cdef long long* _alloc(Py_ssize_t count) except NULL:
    cdef long long* p = <long long*> malloc(count * sizeof(long long))
    if p == NULL:
        raise MemoryError()
    return p


def run_sweep(dict skel, int resolution, int collect_cap):
    cdef int n = skel["dim"]
    if n != 2 and n != 3:
        raise ValueError("compiled engine handles dimensions 2 and 3 only")
    rays_py = skel["rays"]
    walls_py = skel["walls"]
    wall_k_py = skel["wall_k"]
    cones_py = skel["cone_indices"]
    mats_py = skel["cone_matrices"]
    simps_py = skel["simplices"]

    cdef int r = len(rays_py)
    cdef int nw = len(walls_py)
    cdef int nc = len(cones_py)
    cdef int ns = len(simps_py)
    cdef int i, j, t, ci, si, rho

    cdef long long* rays = NULL
    cdef long long* walls = NULL
    cdef long long* wall_k = NULL
    cdef long long* cone_idx = NULL
    cdef long long* cone_mat = NULL
    cdef long long* simps = NULL
    cdef long long* c = NULL
    cdef long long* svals = NULL
    cdef long long* verts = NULL
    cdef int128 bary[3]

    cdef long long bound = (n + 1) ** n
    cdef long long candidates = 0
    cdef long long ample = 0
    cdef long long extremal = 0
    cdef double best_f = -1.0
    cdef double score_f
    cdef bint done = False
    cdef bint skip
    cdef long long g, acc, coeff, base_off, voff
    cdef int128 vol, d, tval, tmax, x0, y0, z0, x1, y1, z1, x2, y2, z2
    cdef int128 eps_n, eps_d, del_n, del_d, beta_n, beta_d
    cdef int128 lhs, rhs, vpow, tpow

    best = None
    argmax = None
    collected = []
    collect_complete = True

    try:
        rays = _alloc(r * n)
        walls = _alloc(nw * r)
        wall_k = _alloc(nw)
        cone_idx = _alloc(nc * n)
        cone_mat = _alloc(nc * n * n)
        simps = _alloc(ns * (n + 1))
        c = _alloc(r)
        svals = _alloc(nw)
        verts = _alloc(nc * n)

        for i in range(r):
            for j in range(n):
                rays[i * n + j] = rays_py[i][j]
        for t in range(nw):
            wall_k[t] = wall_k_py[t]
            for j in range(r):
                walls[t * r + j] = walls_py[t][j]
        for ci in range(nc):
            for j in range(n):
                cone_idx[ci * n + j] = cones_py[ci][j]
                for i in range(n):
                    cone_mat[(ci * n + i) * n + j] = mats_py[ci][i][j]
        for si in range(ns):
            for j in range(n + 1):
                simps[si * (n + 1) + j] = simps_py[si][j]

        for i in range(r):
            c[i] = 1

        while not done:
            g = c[0]
            for i in range(1, r):
                g = ll_gcd(g, c[i])
            if g == 1:
                candidates += 1
                skip = False
                for t in range(nw):
                    acc = 0
                    for j in range(r):
                        acc += walls[t * r + j] * c[j]
                    svals[t] = acc
                    if acc <= 0:
                        skip = True
                        break
                if not skip:
                    ample += 1
                    if len(collected) < collect_cap:
                        collected.append(tuple(int(c[i]) for i in range(r)))
                    else:
                        collect_complete = False

                    for ci in range(nc):
                        for i in range(n):
                            acc = 0
                            for j in range(n):
                                coeff = c[cone_idx[ci * n + j]]
                                acc += cone_mat[(ci * n + i) * n + j] * coeff
                            verts[ci * n + i] = acc

                    vol = 0
                    for i in range(n):
                        bary[i] = 0
                    for si in range(ns):
                        base_off = simps[si * (n + 1)] * n
                        x0 = verts[simps[si * (n + 1) + 1] * n] - verts[base_off]
                        y0 = (
                            verts[simps[si * (n + 1) + 1] * n + 1]
                            - verts[base_off + 1]
                        )
                        x1 = verts[simps[si * (n + 1) + 2] * n] - verts[base_off]
                        y1 = (
                            verts[simps[si * (n + 1) + 2] * n + 1]
                            - verts[base_off + 1]
                        )
                        if n == 2:
                            d = i128_abs(x0 * y1 - x1 * y0)
                        else:
                            z0 = (
                                verts[simps[si * (n + 1) + 1] * n + 2]
                                - verts[base_off + 2]
                            )
                            z1 = (
                                verts[simps[si * (n + 1) + 2] * n + 2]
                                - verts[base_off + 2]
                            )
                            x2 = (
                                verts[simps[si * (n + 1) + 3] * n]
                                - verts[base_off]
                            )
                            y2 = (
                                verts[simps[si * (n + 1) + 3] * n + 1]
                                - verts[base_off + 1]
                            )
                            z2 = (
                                verts[simps[si * (n + 1) + 3] * n + 2]
                                - verts[base_off + 2]
                            )
                            d = i128_abs(
                                x0 * (y1 * z2 - z1 * y2)
                                - y0 * (x1 * z2 - z1 * x2)
                                + z0 * (x1 * y2 - y1 * x2)
                            )
                        vol += d
                        for j in range(n + 1):
                            voff = simps[si * (n + 1) + j] * n
                            for i in range(n):
                                bary[i] += d * verts[voff + i]
                    if vol <= 0:
                        raise VerificationError(
                            "ample sample with nonpositive volume",
                            sample=tuple(int(c[i]) for i in range(r)),
                        )

                    tmax = 0
                    for rho in range(r):
                        tval = 0
                        for i in range(n):
                            tval += bary[i] * rays[rho * n + i]
                        tval += (n + 1) * vol * c[rho]
                        if rho == 0 or tval > tmax:
                            tmax = tval
                    vpow = vol * vol
                    tpow = tmax
                    for i in range(n - 1):
                        vpow = vpow * vol
                        tpow = tpow * tmax
                    if vpow > tpow:
                        raise VerificationError(
                            "delta^n * vol exceeds the simplex bound",
                            sample=tuple(int(c[i]) for i in range(r)),
                        )

                    eps_n = wall_k[0]
                    eps_d = svals[0]
                    for t in range(1, nw):
                        if wall_k[t] * eps_d < eps_n * svals[t]:
                            eps_n = wall_k[t]
                            eps_d = svals[t]
                    del_n = (n + 1) * vol
                    del_d = tmax
                    if eps_n * del_d <= del_n * eps_d:
                        beta_n = eps_n
                        beta_d = eps_d
                    else:
                        beta_n = del_n
                        beta_d = del_d

                    lhs = beta_n * beta_n
                    rhs = beta_d * beta_d
                    for i in range(n - 2):
                        lhs = lhs * beta_n
                        rhs = rhs * beta_d
                    lhs = lhs * vol
                    rhs = rhs * bound
                    if lhs > rhs:
                        raise VerificationError(
                            "score exceeds the (n+1)^n bound",
                            sample=tuple(int(c[i]) for i in range(r)),
                        )
                    if lhs == rhs:
                        extremal += 1

                    score_f = (
                        (<double> beta_n / <double> beta_d) ** n
                        * <double> vol
                    )
                    if best is None or score_f >= best_f * (1.0 - 1e-9):
                        score = Fraction(
                            i128_to_py(lhs), i128_to_py(beta_d) ** n
                        )
                        if best is None or score > best:
                            best = score
                            best_f = float(score)
                            argmax = tuple(int(c[i]) for i in range(r))

            i = r - 1
            while i >= 0 and c[i] == resolution:
                c[i] = 1
                i -= 1
            if i < 0:
                done = True
            else:
                c[i] += 1

        return RawSweep(
            candidates=int(candidates),
            ample=int(ample),
            extremal=int(extremal),
            best=best,
            argmax=argmax,
            collected=collected,
            collect_complete=collect_complete,
        )
    finally:
        free(rays)
        free(walls)
        free(wall_k)
        free(cone_idx)
        free(cone_mat)
        free(simps)
        free(c)
        free(svals)
        free(verts)
