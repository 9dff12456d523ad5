"""Reference sweep engine: exact integer arithmetic, any dimension.

Works on the precomputed skeleton from torifan.sweep.  All quantities stay
integers: for integer coefficient vectors c the vertex maps, wall values,
volume sum and barycenter numerator are integer-valued, and both theorem
checks reduce to integer comparisons.  Python bignums make overflow a
non-issue; the compiled engine trades that generality for speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from torifan.errors import VerificationError


@dataclass
class RawSweep:
    candidates: int  # gcd-reduced grid vectors seen
    ample: int
    extremal: int  # samples attaining the (n+1)^n bound exactly
    best: Fraction | None
    argmax: tuple | None
    collected: list  # ample coefficient vectors, capped
    collect_complete: bool


def _abs_det(rows):
    """Fraction-free Bareiss determinant of a square integer matrix."""
    n = len(rows)
    if n == 1:
        return abs(rows[0][0])
    if n == 2:
        return abs(rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0])
    m = [list(r) for r in rows]
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    break
            else:
                return 0
            # swap flips the sign; absolute value makes it irrelevant
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return abs(m[n - 1][n - 1])


def _grid(r, resolution):
    """Lexicographic odometer over {1..resolution}^r, gcd-reduced vectors only."""
    c = [1] * r
    while True:
        g = 0
        for x in c:
            g = gcd(g, x)
        if g == 1:
            yield tuple(c)
        i = r - 1
        while i >= 0 and c[i] == resolution:
            c[i] = 1
            i -= 1
        if i < 0:
            return
        c[i] += 1


def run_sweep(skel, resolution, collect_cap):
    """Evaluate the score on every ample grid sample; track max and checks."""
    n = skel["dim"]
    rays = skel["rays"]
    walls = skel["walls"]
    wall_k = skel["wall_k"]
    cone_idx = skel["cone_indices"]
    cone_m = skel["cone_matrices"]
    simps = skel["simplices"]
    bound = (n + 1) ** n

    candidates = 0
    ample = 0
    extremal = 0
    best = None
    argmax = None
    collected = []
    collect_complete = True

    for c in _grid(len(rays), resolution):
        candidates += 1
        svals = [sum(w[j] * c[j] for j in range(len(c))) for w in walls]
        if any(s <= 0 for s in svals):
            continue
        ample += 1
        if len(collected) < collect_cap:
            collected.append(c)
        else:
            collect_complete = False

        verts = []
        for idx, mat in zip(cone_idx, cone_m):
            coeffs = [c[i] for i in idx]
            verts.append(
                tuple(sum(row[j] * coeffs[j] for j in range(n)) for row in mat)
            )
        vol = 0
        bary_num = [0] * n
        for simplex in simps:
            base = verts[simplex[0]]
            rows = [
                [verts[s][i] - base[i] for i in range(n)] for s in simplex[1:]
            ]
            d = _abs_det(rows)
            vol += d
            for s in simplex:
                v = verts[s]
                for i in range(n):
                    bary_num[i] += d * v[i]
        if vol <= 0:
            raise VerificationError(
                "ample sample with nonpositive volume", sample=c
            )

        # t_rho = (n+1) * vol * S(D_rho); the delta bound is vol^(n+1) <= t_max^n
        t_max = None
        for rho, u in enumerate(rays):
            t = sum(bary_num[i] * u[i] for i in range(n))
            t += (n + 1) * vol * c[rho]
            if t_max is None or t > t_max:
                t_max = t
        if vol ** (n + 1) > t_max**n:
            raise VerificationError(
                "delta^n * vol exceeds the simplex bound", sample=c
            )

        eps_n, eps_d = None, None
        for k, s in zip(wall_k, svals):
            if eps_n is None or k * eps_d < eps_n * s:
                eps_n, eps_d = k, s
        del_n, del_d = (n + 1) * vol, t_max
        if eps_n * del_d <= del_n * eps_d:
            beta_n, beta_d = eps_n, eps_d
        else:
            beta_n, beta_d = del_n, del_d

        lhs = beta_n**n * vol
        rhs = bound * beta_d**n
        if lhs > rhs:
            raise VerificationError(
                "score exceeds the (n+1)^n bound", sample=c
            )
        if lhs == rhs:
            extremal += 1
        score = Fraction(lhs, beta_d**n)
        if best is None or score > best:
            best = score
            argmax = c

    return RawSweep(
        candidates=candidates,
        ample=ample,
        extremal=extremal,
        best=best,
        argmax=argmax,
        collected=collected,
        collect_complete=collect_complete,
    )
