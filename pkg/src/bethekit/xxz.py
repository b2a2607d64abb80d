"""Dense algebraic-Bethe-ansatz oracle for the spin-1/2 XXZ chain.

Everything here is brute force on the full 2^N-dimensional state space:
R-matrix, inhomogeneous monodromy, twisted transfer matrix, B-operator
products.  It exists to cross-check the quiver-side Bethe roots and
eigenfunctions for the single-vertex edgeless quiver against independent
linear algebra, so clarity beats performance throughout.

The multiplicative R-matrix normalization and the placement of the twist
are not pinned down by the structures being verified; ``calibrate`` scans
the small convention space and keeps the one that reproduces the quiver
Bethe equation for one site and one magnon.  The chosen convention id is
reported with every oracle result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import mpmath as mp

from .bethe import bethe_equations, solve, sqrt_map, tangent_class
from .fixedpoints import enumerate_fixed
from .quiver import QuiverModel, a1_quiver


def _kron(A: mp.matrix, B: mp.matrix) -> mp.matrix:
    out = mp.matrix(A.rows * B.rows, A.cols * B.cols)
    for i in range(A.rows):
        for j in range(A.cols):
            a = A[i, j]
            if a == 0:
                continue
            for k in range(B.rows):
                for l in range(B.cols):
                    out[i * B.rows + k, j * B.cols + l] = a * B[k, l]
    return out


def _eye(n: int) -> mp.matrix:
    return mp.eye(n)


def r_entries(u, hbar, c_split: str = "plain"):
    """The three independent six-vertex entries (b, c_upper, c_lower).

    b(u) = hbar^{1/2} (1-u)/(1-hbar u); the two off-diagonal entries
    carry the factor (1-hbar)/(1-hbar u) with the extra power of u on
    one side or the other (a gauge choice, fixed by calibration).
    """
    hs = mp.sqrt(hbar)
    den = 1 - hbar * u
    if den == 0 or u == 0:
        raise ValueError("degenerate spectral parameter")
    b = hs * (1 - u) / den
    c_plain = (1 - hbar) / den
    c_tilted = (1 - hbar) * u / den
    if c_split == "plain":
        return b, c_plain, c_tilted
    if c_split == "tilted":
        return b, c_tilted, c_plain
    raise ValueError(f"unknown c_split {c_split!r}")


def r_matrix(u, hbar, c_split: str = "plain") -> mp.matrix:
    """Six-vertex R-matrix on C^2 x C^2, basis (uu, ud, du, dd)."""
    b, cu, cl = r_entries(u, hbar, c_split)
    R = mp.matrix(4)
    R[0, 0] = R[3, 3] = 1
    R[1, 1] = R[2, 2] = b
    R[1, 2] = cu
    R[2, 1] = cl
    return R


def yang_baxter_residual(u1, u2, hbar, c_split: str = "plain") -> mp.mpf:
    """Max-entry residual of R12(u1/u2) R13(u1) R23(u2) - reverse order."""
    I2 = _eye(2)

    def lift(R, pos):
        if pos == (0, 1):
            return _kron(R, I2)
        if pos == (1, 2):
            return _kron(I2, R)
        # act on factors 1 and 3: conjugate the (1,2) embedding by the
        # swap of the last two factors
        P = mp.matrix(4)
        P[0, 0] = P[3, 3] = 1
        P[1, 2] = P[2, 1] = 1
        S = _kron(I2, P)
        return S * _kron(R, I2) * S

    R12 = lift(r_matrix(u1 / u2, hbar, c_split), (0, 1))
    R13 = lift(r_matrix(u1, hbar, c_split), (0, 2))
    R23 = lift(r_matrix(u2, hbar, c_split), (1, 2))
    diff = R12 * R13 * R23 - R23 * R13 * R12
    return max(abs(diff[i, j]) for i in range(8) for j in range(8))


@dataclass(frozen=True)
class ChainState:
    """Inhomogeneous spin-1/2 chain data: N sites with parameters a_l."""

    hbar: object
    a: tuple
    c_split: str = "plain"
    twist_side: str = "D"  # which diagonal monodromy entry carries z

    @property
    def N(self) -> int:
        return len(self.a)

    @property
    def dim(self) -> int:
        return 2 ** len(self.a)

    def convention_id(self) -> str:
        return (f"c_split={self.c_split},twist={self.twist_side},"
                "chain_twist=(-1)^N z")

    def chain_twist(self, z):
        """Bare twist matching a quiver-side parameter z.

        Each framing factor of the quiver Bethe equation is minus the
        corresponding R-matrix b entry, so the chain twist picks up a
        sign per site.
        """
        return z if self.N % 2 == 0 else -z


def monodromy(s: ChainState, u) -> list[list[mp.matrix]]:
    """2x2 auxiliary-space blocks [[A,B],[C,D]] of R_{0N}...R_{01}(u/a_l)."""
    dim = s.dim
    T = [[_eye(dim), mp.matrix(dim)], [mp.matrix(dim), _eye(dim)]]
    for site in range(s.N):
        b, cu, cl = r_entries(u / s.a[site], s.hbar, s.c_split)
        M = [[mp.matrix([[1, 0], [0, b]]), mp.matrix([[0, 0], [cu, 0]])],
             [mp.matrix([[0, cl], [0, 0]]), mp.matrix([[b, 0], [0, 1]])]]
        left = _eye(2 ** site)
        right = _eye(2 ** (s.N - site - 1))
        L = [[_kron(_kron(left, M[al][be]), right) for be in range(2)]
             for al in range(2)]
        T = [[L[al][0] * T[0][be] + L[al][1] * T[1][be] for be in range(2)]
             for al in range(2)]
    return T


def transfer_matrix(s: ChainState, u, z) -> mp.matrix:
    """Transfer matrix twisted by the quiver-side parameter z.

    The diagonal twist applied to the monodromy trace is
    ``s.chain_twist(z)`` on the calibrated side.
    """
    zc = s.chain_twist(z)
    T = monodromy(s, u)
    if s.twist_side == "A":
        return zc * T[0][0] + T[1][1]
    return T[0][0] + zc * T[1][1]


def commutator_residual(s: ChainState, u1, u2, z) -> mp.mpf:
    """Max entry of [tau(u1; z), tau(u2; z)]."""
    t1 = transfer_matrix(s, u1, z)
    t2 = transfer_matrix(s, u2, z)
    diff = t1 * t2 - t2 * t1
    return max(abs(diff[i, j]) for i in range(s.dim) for j in range(s.dim))


def magnon_number(index: int, N: int) -> int:
    return bin(index).count("1")


def magnon_block_residual(s: ChainState, u, z) -> mp.mpf:
    """Largest transfer-matrix entry connecting different magnon sectors."""
    tau = transfer_matrix(s, u, z)
    worst = mp.mpf(0)
    for i in range(s.dim):
        for j in range(s.dim):
            if magnon_number(i, s.N) != magnon_number(j, s.N):
                worst = max(worst, abs(tau[i, j]))
    return worst


def vacuum(s: ChainState) -> mp.matrix:
    v = mp.matrix(s.dim, 1)
    v[0] = 1
    return v


def off_shell_vector(s: ChainState, xs: Sequence) -> mp.matrix:
    """B(x_1)...B(x_v) applied to the all-up vacuum."""
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if xs[i] == xs[j]:
                raise ValueError("coincident magnon parameters")
    v = vacuum(s)
    for x in xs:
        v = monodromy(s, x)[0][1] * v
    return v


def _vec_norm(v: mp.matrix) -> mp.mpf:
    return mp.sqrt(sum(abs(x) ** 2 for x in v))


def eigen_check(s: ChainState, roots: Sequence, z, us: Sequence) -> mp.mpf:
    """Relative eigenvector residual of B(roots)vac over the given u values."""
    psi = off_shell_vector(s, roots)
    npsi = _vec_norm(psi)
    if npsi == 0:
        raise ValueError("off-shell vector vanished (degenerate roots)")
    worst = mp.mpf(0)
    for u in us:
        tpsi = transfer_matrix(s, u, z) * psi
        lam = sum(mp.conj(psi[i]) * tpsi[i] for i in range(s.dim)) / npsi ** 2
        resid = _vec_norm(tpsi - lam * psi) / (abs(lam) * npsi)
        worst = max(worst, resid)
    return worst


# ----- calibration -------------------------------------------------------


_CALIBRATED: dict = {}


def calibrate(hbar=None, digits: int = 50) -> ChainState:
    """Fix the R-matrix gauge and twist placement against the quiver side.

    Scans the four (c_split, twist_side) combinations and keeps the only
    one whose transfer matrix has B(x)vac as an exact eigenvector at the
    root of the one-magnon two-site quiver Bethe equation.  (One magnon
    on a single site cannot discriminate: that sector is
    one-dimensional, so every convention trivially passes; two sites
    give the smallest sector where the eigenvector condition bites.)
    The winner is checked to reproduce the one-site one-magnon quiver
    Bethe equation as well, and cached per working precision.
    """
    key = (digits,)
    if key in _CALIBRATED:
        return _CALIBRATED[key]
    with mp.workdps(digits + 20):
        hb = mp.mpf("0.3") if hbar is None else mp.mpmathify(hbar)
        aa = (mp.mpf("1.37"), mp.mpf("0.81"))
        z = mp.mpf("0.21") * mp.exp(mp.mpf("0.5") * 1j)
        Q = a1_quiver(1, 2)
        system = bethe_equations(tangent_class(Q))
        recs = solve(system, [z], {"hbar": hb, "a0_0": aa[0], "a0_1": aa[1]},
                     enumerate_fixed(Q), digits=digits)
        rec = next(r for r in recs if r.converged)
        x = rec.roots["x0_0"]
        tol = mp.mpf(10) ** (-(digits - 10))
        us = [mp.mpf("0.83") * mp.exp(0.7j), mp.mpf("1.91") * mp.exp(-0.3j)]
        # the two c placements are related by conjugating each site
        # R-matrix with diag(1, u) on the physical factor, i.e. by the
        # gauge u^(magnon number) times a constant diagonal; eigenvector
        # tests cannot separate them, so only the twist side is scanned
        # and the c placement is fixed to "plain" by fiat (the
        # weight-function comparison records its own diagonal gauge)
        winner = None
        for twist_side in ("A", "D"):
            s = ChainState(hb, aa, "plain", twist_side)
            try:
                r = eigen_check(s, [x], z, us)
            except (ValueError, ZeroDivisionError):
                continue
            if r < tol:
                if winner is not None:
                    raise RuntimeError(
                        "calibration is ambiguous: "
                        f"{winner.convention_id()} and "
                        f"{s.convention_id()} both pass")
                winner = s
        if winner is None:
            raise RuntimeError("no R-matrix convention reproduces the "
                               "quiver Bethe equation")
        # consistency: the one-site one-magnon quiver root must satisfy
        # the one-site eigenvector condition of the winning twist.  The
        # quiver-side twist parameter is minus the bare chain twist (the
        # sign of the half-power normalization), so the condition reads
        # z = -b(x/a_0) for a twist on the A block and z b(x/a_0) = -1
        # for a twist on the D block.
        Q1 = a1_quiver(1, 1)
        rec1 = solve(bethe_equations(tangent_class(Q1)), [z],
                     {"hbar": hb, "a0_0": aa[0]},
                     enumerate_fixed(Q1), digits=digits)[0]
        b1, _, _ = r_entries(rec1.roots["x0_0"] / aa[0], hb, winner.c_split)
        lhs = z + b1 if winner.twist_side == "A" else z * b1 + 1
        if abs(lhs) > tol:
            raise RuntimeError("calibrated convention is inconsistent with "
                               "the one-site Bethe equation")
        _CALIBRATED[key] = winner
        return winner


def chain_for(Q: QuiverModel, params: Mapping[str, object],
              digits: int = 50) -> ChainState:
    """Calibrated chain matching a single-vertex edgeless quiver."""
    if Q.edges or Q.num_vertices != 1:
        raise ValueError("the chain oracle covers edgeless one-vertex "
                         "quivers only")
    template = calibrate(digits=digits)
    a = tuple(mp.mpmathify(params[f"a0_{l}"]) for l in range(Q.w[0]))
    return ChainState(mp.mpmathify(params["hbar"]), a,
                      template.c_split, template.twist_side)


# ----- weight-function comparison ---------------------------------------


def component_index(columns: Sequence[int], N: int) -> int:
    """Basis index of the state with down spins at the given sites."""
    idx = 0
    for c in columns:
        idx |= 1 << (N - 1 - c)
    return idx


def compare_weight_functions(s: ChainState, wfs, xs_points,
                             rel_tol=mp.mpf("1e-8")):
    """Match eigenfunction values against off-shell vector components.

    Each weight function is evaluated at generic numeric Chern roots and
    compared with the coordinate of B(x_1)...B(x_v)vac on the basis
    vector labeled by the same framing-column subset.  The match is up
    to one scalar per evaluation point (the off-shell vector is only
    defined up to normalization, and the R-matrix gauge contributes an
    x-dependent factor common to all components) times one constant per
    component.  Equivalently the ratio matrix

        r[F, p] = f_F(x_p) / Psi_F(x_p)

    must have rank one; this is checked on all of its 2x2 minors.

    Returns (ok, gauge, worst_relative_deviation) where gauge holds the
    fitted per-component constants at the first point.
    """
    params = {"hbar": s.hbar}
    for l, a in enumerate(s.a):
        params[f"a0_{l}"] = a
    ratios = []
    for xs in xs_points:
        sqrts = sqrt_map(params)
        for k, x in enumerate(xs):
            sqrts[f"x0_{k}"] = mp.sqrt(mp.mpmathify(x))
        psi = off_shell_vector(s, [mp.mpmathify(x) for x in xs])
        row = []
        for wf in wfs:
            c = psi[component_index(wf.F.columns, s.N)]
            if c == 0:
                return False, None, mp.mpf("inf")
            row.append(wf.symmetrized().evaluate(sqrts) / c)
        ratios.append(row)
    worst = mp.mpf(0)
    for p in range(1, len(ratios)):
        for f in range(1, len(wfs)):
            lhs = ratios[p][f] * ratios[0][0]
            rhs = ratios[0][f] * ratios[p][0]
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    return worst < rel_tol, ratios[0], worst


def baxter_limit_eigenvalue(s: ChainState, xs: Sequence):
    """Vacuum eigenvalue of the z->0 transfer-matrix product.

    The z->0 limit of the twisted transfer matrix keeps the diagonal
    monodromy block that does not carry the twist.  That block preserves
    magnon number, so the all-up vacuum spans an invariant
    one-dimensional sector; the product of the block operators at the
    spectral parameters xs acts on it by a scalar, which is returned.
    A nonzero off-vacuum component raises.
    """
    lam = mp.mpf(1)
    for x in xs:
        T = monodromy(s, x)
        tau0 = T[1][1] if s.twist_side == "A" else T[0][0]
        col = tau0 * vacuum(s)
        rest = _vec_norm(col[1:, 0]) if s.dim > 1 else mp.mpf(0)
        if rest > abs(col[0]) * mp.mpf(10) ** (-mp.mp.dps + 10):
            raise RuntimeError("vacuum sector is not invariant")
        lam *= col[0]
    return lam
