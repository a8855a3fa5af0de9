"""Symmetric Kac-Moody data attached to a loop-free quiver.

Cartan matrix, weights in fundamental or root coordinates, Freudenthal
weight multiplicities (with Peterson root multiplicities, so affine and
wild quivers work on bounded intervals), and the decategorified Chevalley
operators e_i/f_i as ranks between weight spaces over a dimension-vector
grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .quiver import INFINITY


class EdgeLoopError(ValueError):
    pass


class NotDominantError(ValueError):
    pass


class NotBelowError(ValueError):
    pass


def cartan_matrix(quiver):
    """A_ij = 2 delta_ij - #(edges between i and j, both directions)."""
    verts = [v for v in quiver.vertices if v != INFINITY]
    index = {v: k for k, v in enumerate(verts)}
    n = len(verts)
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for e in quiver.old_edges():
        if e.tail == e.head:
            raise EdgeLoopError("edge loop at %r" % (e.tail,))
        i, j = index[e.tail], index[e.head]
        A[i][j] -= 1
        A[j][i] -= 1
    return verts, A


@dataclass(frozen=True)
class KMWeight:
    """Integral weight in either fundamental or root coordinates.

    ``coords`` maps vertex id -> integer.  Conversion between the two bases
    multiplies by the Cartan matrix and is exact; root coordinates are only
    defined for weights in the root lattice shifted by the ambient lambda.
    """

    basis: str  # "fundamental" or "root"
    coords: tuple  # sorted tuple of (vertex, int)

    @staticmethod
    def make(basis, mapping):
        return KMWeight(basis, tuple(sorted(mapping.items())))

    def as_dict(self):
        return dict(self.coords)


def fundamental_from_root_diff(verts, A, lam_fund, root_coords):
    """lambda - sum v_i alpha_i expressed in fundamental coordinates:
    coefficient of varpi_j is lam_j - sum_i A_ji v_i."""
    out = {}
    for j, vj in enumerate(verts):
        out[vj] = lam_fund.get(vj, 0) - sum(A[j][i] * root_coords.get(verts[i], 0)
                                            for i in range(len(verts)))
    return out


def mu_from_dimensions(quiver, dims):
    """mu = sum w_i varpi_i - sum v_i alpha_i, in fundamental coordinates."""
    verts, A = cartan_matrix(quiver)
    lam = {x: dims.w.get(x, 0) for x in verts}
    mu = fundamental_from_root_diff(verts, A, lam, dims.v)
    return KMWeight.make("fundamental", mu)


# -- root multiplicities (Peterson) and Freudenthal ------------------------


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _bilinear(A, a, b):
    return sum(A[i][j] * a[i] * b[j] for i in range(len(a)) for j in range(len(a)))


def _height(a):
    return sum(a)


def _boxed_vectors(bound):
    """All nonzero integer vectors 0 <= beta <= bound coordinatewise."""
    out = [()]
    for b in bound:
        out = [v + (k,) for v in out for k in range(b + 1)]
    return [v for v in out if any(v)]


class RootSystemSlice:
    """Positive roots of the symmetric Kac-Moody algebra of a Cartan matrix,
    restricted to the box 0 <= beta <= bound, with multiplicities.

    Uses the Peterson recursion:  (beta, beta - 2 rho) c_beta =
    sum_{b'+b''=beta} (b', b'') c_b' c_b'',   c_beta = sum_n mult(beta/n)/n.
    """

    def __init__(self, A, bound):
        self.A = A
        self.bound = tuple(bound)
        n = len(A)
        self._c = {}
        self._mult = {}
        betas = sorted(_boxed_vectors(self.bound), key=_height)
        simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        for s in simple:
            if all(x <= b for x, b in zip(s, self.bound)):
                self._c[s] = Fraction(1)
                self._mult[s] = 1
        for beta in betas:
            if beta in self._c:
                continue
            # (beta, beta) - 2 height(beta)  [since (beta, 2rho) = 2 ht for symmetric A]
            denom = Fraction(_bilinear(A, beta, beta) - 2 * _height(beta))
            total = Fraction(0)
            for bp in self._proper_summands(beta):
                bpp = _vec_sub(beta, bp)
                cb1, cb2 = self._c.get(bp), self._c.get(bpp)
                if cb1 and cb2:
                    total += Fraction(_bilinear(A, bp, bpp)) * cb1 * cb2
            divisor_tail = Fraction(0)
            k = 2
            while any(x >= k for x in beta):
                if all(x % k == 0 for x in beta):
                    sub = tuple(x // k for x in beta)
                    divisor_tail += Fraction(self._mult.get(sub, 0), k)
                k += 1
            if denom == 0:
                # (beta, beta - 2 rho) = 0 happens only off the root system,
                # so mult = 0 and c is just the divisor tail
                self._c[beta] = divisor_tail
                self._mult[beta] = 0
                continue
            c = total / denom
            self._c[beta] = c
            m = c - divisor_tail
            if m.denominator != 1 or m < 0:
                raise ArithmeticError("non-integral root multiplicity at %r" % (beta,))
            self._mult[beta] = int(m)

    def _proper_summands(self, beta):
        parts = [()]
        for b in beta:
            parts = [v + (k,) for v in parts for k in range(b + 1)]
        for v in parts:
            if any(v) and v != beta:
                yield v

    def positive_roots(self):
        return [(beta, m) for beta, m in self._mult.items() if m > 0]


def _as_fund_vector(weight, verts, A, ambient_lambda=None):
    if weight.basis == "fundamental":
        d = weight.as_dict()
        return tuple(d.get(v, 0) for v in verts)
    raise ValueError("expected fundamental coordinates")


def weight_multiplicity(quiver, lam, mu):
    """dim V(lam)_mu by the Freudenthal recursion over {mu <= nu <= lam}.

    lam, mu are KMWeights in fundamental coordinates; lam must be dominant
    and lam - mu a nonnegative root-lattice combination.
    """
    verts, A = cartan_matrix(quiver)
    lam_vec = _as_fund_vector(lam, verts, A)
    mu_vec = _as_fund_vector(mu, verts, A)
    if any(c < 0 for c in lam_vec):
        raise NotDominantError("lambda is not dominant: %r" % (lam_vec,))
    diff = _root_coords_of_diff(verts, A, lam_vec, mu_vec)
    if diff is None or any(c < 0 for c in diff):
        raise NotBelowError("mu is not <= lambda in the root order")
    return _freudenthal(A, lam_vec, diff)


def _root_coords_of_diff(verts, A, lam_vec, mu_vec):
    """Solve lam - mu = sum v_i alpha_i for integer v, or None."""
    n = len(verts)
    rhs = [Fraction(lam_vec[i] - mu_vec[i]) for i in range(n)]
    M = [[Fraction(A[j][i]) for i in range(n)] for j in range(n)]
    sol = _solve_linear(M, rhs)
    if sol is None:
        return None
    if any(s.denominator != 1 for s in sol):
        return None
    return tuple(int(s) for s in sol)


def _solve_linear(M, rhs):
    """Gaussian elimination over Q; None when inconsistent (unique solutions
    are all we need: quiver Cartan matrices here are invertible or the
    boxed problem never reaches this path)."""
    n = len(M)
    M = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    row = 0
    pivots = []
    for col in range(n):
        pr = next((r for r in range(row, n) if M[r][col] != 0), None)
        if pr is None:
            continue
        M[row], M[pr] = M[pr], M[row]
        pv = M[row][col]
        M[row] = [x / pv for x in M[row]]
        for r in range(n):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    for r in range(row, n):
        if M[r][n] != 0:
            return None
    sol = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        sol[col] = M[r][n]
    return sol


def _freudenthal(A, lam_vec, diff):
    """Multiplicity of mu = lam - diff (root coords) in V(lam), symmetric A.

    Inner products use (varpi_i, alpha_j) = delta_ij, (alpha_i, alpha_j) = A_ij.
    """
    n = len(A)
    roots = RootSystemSlice(A, diff).positive_roots()
    cache = {}

    def lam_minus(beta):
        # fundamental vector of lam - sum beta_i alpha_i
        return tuple(lam_vec[j] - sum(A[j][i] * beta[i] for i in range(n))
                     for j in range(n))

    def norm_shift(beta):
        # (lam+rho, lam+rho) - (mu+rho, mu+rho) with mu = lam - beta:
        #   = (beta, beta) + 2 (lam - beta, beta) + 2 (rho, beta)
        #   = 2 (lam, beta) - (beta, beta) + 2 ht(beta)
        lam_dot_beta = sum(lam_vec[i] * beta[i] for i in range(n))
        return 2 * lam_dot_beta - _bilinear(A, beta, beta) + 2 * _height(beta)

    def mult(beta):
        beta = tuple(beta)
        if any(b < 0 for b in beta):
            return 0
        if not any(beta):
            return 1
        if beta in cache:
            return cache[beta]
        denom = Fraction(norm_shift(beta))
        total = Fraction(0)
        mu_vec = lam_minus(beta)
        for alpha, am in roots:
            k = 1
            while True:
                beta_up = _vec_sub(beta, tuple(k * a for a in alpha))
                if any(b < 0 for b in beta_up):
                    break
                m_up = mult(beta_up)
                if m_up:
                    # (mu + k alpha, alpha)
                    mu_up = lam_minus(beta_up)
                    val = sum(mu_up[i] * alpha[i] for i in range(n))
                    total += 2 * am * Fraction(val) * m_up
                k += 1
        if denom == 0:
            cache[beta] = 0
            return 0
        m = total / denom
        if m.denominator != 1 or m < 0:
            raise ArithmeticError("Freudenthal produced %r at %r" % (m, beta))
        cache[beta] = int(m)
        return int(m)

    return mult(diff)


# -- finite-type oracle (Kostant/Weyl), used only by tests and suites ------


def finite_weyl_group(A):
    """All elements of the Weyl group as matrices acting on fundamental
    coordinates, with signs; raises if the group exceeds a safety bound."""
    n = len(A)

    def refl(i):
        # s_i in fundamental coordinates: mu |-> mu - mu_i * (A row i applied)
        M = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        for r in range(n):
            M[r][i] -= A[r][i]
        return tuple(tuple(row) for row in M)

    def matmul(X, Y):
        return tuple(tuple(sum(X[r][k] * Y[k][c] for k in range(n)) for c in range(n))
                     for r in range(n))

    gens = [refl(i) for i in range(n)]
    ident = tuple(tuple(1 if r == c else 0 for c in range(n)) for r in range(n))
    seen = {ident: 1}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                wg = matmul(g, w)
                if wg not in seen:
                    seen[wg] = -seen[w]
                    nxt.append(wg)
        frontier = nxt
        if len(seen) > 100000:
            raise ValueError("Weyl group too large; not finite type?")
    return seen


def kostant_multiplicity(quiver, lam, mu):
    """Independent oracle: mult = sum_w (-1)^w P(w(lam+rho) - (mu+rho)),
    with P the Kostant partition function evaluated by enumeration.
    Finite type only."""
    verts, A = cartan_matrix(quiver)
    n = len(verts)
    lam_vec = _as_fund_vector(lam, verts, A)
    mu_vec = _as_fund_vector(mu, verts, A)
    W = finite_weyl_group(A)
    # positive roots in root coordinates: orbit closure of simple roots
    roots = _finite_positive_roots(A)
    rho = tuple(1 for _ in range(n))
    lam_rho = _vec_add(lam_vec, rho)

    def to_root_coords(fund_vec):
        sol = _root_coords_of_diff(verts, A, fund_vec, tuple(0 for _ in range(n)))
        return sol

    def partition(target):
        # number of ways to write target (root coords) as N-combination of roots
        roots_list = sorted(roots, key=_height, reverse=True)

        def count(idx, rem):
            if not any(rem):
                return 1
            if idx == len(roots_list):
                return 0
            alpha = roots_list[idx]
            total, k = 0, 0
            while all(r - k * a >= 0 for r, a in zip(rem, alpha)):
                total += count(idx + 1, tuple(r - k * a for r, a in zip(rem, alpha)))
                k += 1
            return total

        return count(0, target)

    total = 0
    for w, sign in W.items():
        w_lam_rho = tuple(sum(w[r][c] * lam_rho[c] for c in range(n)) for r in range(n))
        diff_f = _vec_sub(w_lam_rho, _vec_add(mu_vec, rho))
        rc = to_root_coords(diff_f)
        if rc is None or any(c < 0 for c in rc):
            continue
        total += sign * partition(rc)
    return total


def _finite_positive_roots(A):
    n = len(A)
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = set(simple)
    while frontier:
        nxt = set()
        for beta in frontier:
            for i in range(n):
                # s_i(beta) = beta - (beta, alpha_i) alpha_i
                pair = sum(A[i][j] * beta[j] for j in range(n))
                cand = tuple(b - (pair if j == i else 0) for j, b in enumerate(beta))
                if all(c >= 0 for c in cand) and any(cand) and cand not in roots:
                    roots.add(cand)
                    nxt.add(cand)
        frontier = nxt
        if len(roots) > 10000:
            raise ValueError("root enumeration diverged; not finite type?")
    return roots


def weyl_dimension(quiver, lam):
    """dim V(lam) by the Weyl dimension formula (finite type)."""
    verts, A = cartan_matrix(quiver)
    n = len(verts)
    lam_vec = _as_fund_vector(lam, verts, A)
    num, den = 1, 1
    for alpha in _finite_positive_roots(A):
        # (lam + rho, alpha) / (rho, alpha); (varpi_i, alpha_j)=delta => dot products
        num *= sum((lam_vec[i] + 1) * alpha[i] for i in range(n))
        den *= sum(alpha[i] for i in range(n))
    q = Fraction(num, den)
    if q.denominator != 1:
        raise ArithmeticError("Weyl dimension is not integral")
    return int(q)


# -- decategorified Chevalley action ---------------------------------------


def _string_decomposition(mults_along_line, pairings):
    """Peel sl2 strings off a multiplicity profile along an alpha_i line.

    mults_along_line[j] is the multiplicity at mu + j*alpha, pairings[j] the
    pairing <mu + j*alpha, alpha_i^vee>.  The profile must cover whole
    strings (zero at both ends).  Returns a list of (top_j, bottom_j) index
    pairs, one per string copy.

    A string with top pairing t is symmetric: it spans pairings t..-t, so
    walking downward we close the strings whose bottom we just passed and
    open new ones whenever the multiplicity exceeds the surviving count.
    """
    strings = []
    open_tops = []  # top indices of strings covering the current position
    for j in range(len(mults_along_line) - 1, -1, -1):
        p = pairings[j]
        # a string with top pairing t reaches down to pairing -t
        open_tops = [jt for jt in open_tops if -pairings[jt] <= p]
        n_new = mults_along_line[j] - len(open_tops)
        if n_new < 0:
            raise ArithmeticError("multiplicity profile is not a string profile")
        if n_new and p < 0:
            raise ArithmeticError("string top with negative pairing")
        open_tops.extend([j] * n_new)
        for _ in range(n_new):
            strings.append((j, j - p))
    return strings


def decat_chevalley(quiver, dims_w, vmax):
    """Dimension table over {0 <= v <= vmax} plus e_i/f_i ranks.

    Returns (table, ranks) where table maps v (tuple over sorted old
    vertices) to dim V(lam)_{mu(v)} and ranks maps (i, v) to
    {"e": rank e_i: K(v) -> K(v - e_i), "f": rank f_i: K(v) -> K(v + e_i)}.
    """
    verts, A = cartan_matrix(quiver)
    n = len(verts)
    lam = KMWeight.make("fundamental", {x: dims_w.get(x, 0) for x in verts})
    vmax_vec = tuple(vmax.get(x, 0) for x in verts)

    grid = [()]
    for b in vmax_vec:
        grid = [g + (k,) for g in grid for k in range(b + 1)]

    def mu_of(vvec):
        lam_vec = tuple(dims_w.get(x, 0) for x in verts)
        fund = fundamental_from_root_diff(verts, A, dict(zip(verts, lam_vec)),
                                          dict(zip(verts, vvec)))
        return KMWeight.make("fundamental", fund)

    def mult_of(vvec):
        if any(x < 0 for x in vvec):
            return 0
        try:
            return weight_multiplicity(quiver, lam, mu_of(vvec))
        except NotBelowError:
            return 0

    table = {v: mult_of(v) for v in grid}

    ranks = {}
    for idx, i in enumerate(verts):
        for v in grid:
            if table[v] == 0:
                continue
            # walk the alpha_i string through mu(v): mu(v) + j alpha_i has
            # dimension vector v - j e_i
            lo = -v[idx]
            hi = vmax_vec[idx] - v[idx]
            # extend upward until multiplicity vanishes (strings are finite)
            hi_ext = hi
            while mult_of(_shift(v, idx, -(hi_ext + 1))) > 0:
                hi_ext += 1
            lo_ext = lo
            while mult_of(_shift(v, idx, -(lo_ext - 1))) > 0:
                lo_ext -= 1
            js = list(range(lo_ext, hi_ext + 1))
            mults = [mult_of(_shift(v, idx, -j)) for j in js]
            pair_at = []
            for j in js:
                mu_j = mu_of(_shift(v, idx, -j)).as_dict()
                pair_at.append(mu_j[i])
            strings = _string_decomposition(mults, pair_at)
            here = js.index(0)
            e_rank = sum(1 for top, bot in strings
                         if bot <= here <= top and here < top)
            f_rank = sum(1 for top, bot in strings
                         if bot <= here <= top and here > bot)
            ranks[(i, v)] = {"e": e_rank, "f": f_rank}
    return dict(zip(["verts", "table", "ranks"], (verts, table, ranks)))


def _shift(v, idx, delta):
    return tuple(x + (delta if k == idx else 0) for k, x in enumerate(v))
