"""Explicit-formula functionals and the truncated Weil quadratic form.

The explicit formula pairs the zero side

    f^(i/2) + f^(-i/2) - sum_{zeros} f^(s)

with the prime/archimedean side W_R(f) + sum_p W_p(f).  For test functions
supported in [lambda^-1, lambda] the prime side is a finite sum over prime
powers below lambda^2, which is what makes the quadratic form

    QW(f, g) = sum_{zeros} conj(f^) g^

computable without any zero table: QW(f, g) = h^(i/2) + h^(-i/2) - W_R(h)
- sum_p W_p(h) with h = f * g~.

weil_gram assembles the Gram matrix of QW over the orthonormal log-Fourier
basis.  In that basis everything collapses: pole and prime terms are closed
forms, and the archimedean part of every entry is a combination of the 2K+2
one-dimensional integrals I(m), J(k) below, so the assembly needs O(K)
quadratures rather than O(K^2).
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from zetalab.bandfn import ConvolvedBandFunction, LogBandFunction, star_convolve  # noqa: F401
from zetalab.precision import EigenResult, HPMatrix, jacobi_eigensystem
from zetalab.zerotable import ZeroTable

_GUARD = 48


class QuadratureError(ArithmeticError):
    pass


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    p = 2
    while p * p <= n:
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        p += 1
    return [i for i, alive in enumerate(sieve) if alive]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def mellin_hat(f, s, precision_bits: int = 256):
    """f^(s) = integral_0^infty f(x) x^(-is) d*x (closed form for band functions)."""
    with mp.workprec(precision_bits + _GUARD):
        return +f.mellin(mp.mpmathify(s))


def w_prime(p: int, f, precision_bits: int = 256):
    """(log p) sum_m p^(-m/2) (f(p^m) + f(p^-m)); exact finite truncation.

    Terms with p^m outside the support band vanish identically, so no tail
    estimate is involved.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    with mp.workprec(precision_bits + _GUARD):
        logp = mp.log(p)
        S = f.log_halfwidth()
        acc = mpf(0)
        m = 1
        while m * logp <= S:
            t = m * logp
            acc += mp.power(p, -mpf(m) / 2) * (f.evaluate_log(t) + f.evaluate_log(-t))
            m += 1
        return +(logp * acc)


def _quad_checked(integrand, interval, precision_bits, method="tanh-sinh"):
    # run with headroom: tanh-sinh error estimates are conservative, so the
    # rule must over-converge for the certificate below to be meaningful
    with mp.workprec(precision_bits + 80):
        val, err = mp.quad(integrand, interval, method=method, error=True)
    tol = mpf(2) ** (-precision_bits - 8) * (1 + abs(val))
    if err > tol:
        raise QuadratureError(
            f"quadrature error estimate {mp.nstr(err, 5)} exceeds tolerance "
            f"{mp.nstr(tol, 5)} at {precision_bits} bits"
        )
    return +val


def w_arch(f, precision_bits: int = 256, method: str = "tanh-sinh", breakpoints=()):
    """(log 4pi + gamma) f(1) + the archimedean principal-value integral.

    Band functions (anything with evaluate_log_minus_center) use the exact
    cancellation-free integrand plus a closed-form tail beyond the support;
    a plain callable f(x) is integrated over [0, inf) in log coordinates
    with local precision boosts near the removable singularity at x = 1.
    Known kinks of a callable f (in log coordinates) can be passed as
    breakpoints so the quadrature splits there.
    """
    with mp.workprec(precision_bits + _GUARD):
        if hasattr(f, "evaluate_log_minus_center"):
            S = f.log_halfwidth()
            f1 = f.value_at_one()

            def integrand(t):
                if t == 0:
                    return f1 / 2
                n = (
                    f.evaluate_log_minus_center(t)
                    + f.evaluate_log_minus_center(-t)
                    - 2 * f1 * mp.expm1(-t / 2)
                )
                return n * mp.exp(t / 2) / (2 * mp.sinh(t))

            tail = -f1 * mp.log(mp.coth(S / 2))
            core = _quad_checked(integrand, [0, S], precision_bits, method)
            head = (mp.log(4 * mp.pi) + mp.euler) * f1
            return +(head + core + tail)

        f1 = mp.mpmathify(f(mpf(1)))

        def integrand(t):
            if t == 0:
                return f1 / 2
            boost = 16 + max(0, int(-mp.log(abs(t), 2)))
            with mp.workprec(mp.prec + boost):
                x = mp.exp(t)
                n = f(x) + f(1 / x) - 2 * mp.exp(-t / 2) * f1
                val = n * mp.exp(t / 2) / (2 * mp.sinh(t))
            return +val

        interval = [0] + sorted(mp.mpmathify(b) for b in breakpoints) + [mp.inf]
        core = _quad_checked(integrand, interval, precision_bits, method)
        return +((mp.log(4 * mp.pi) + mp.euler) * f1 + core)


@dataclass
class ExplicitFormulaCheck:
    lhs: object
    rhs: object
    residual: object
    zeros_used: int


def explicit_formula_residual(
    f, zeros: ZeroTable, precision_bits: int = 256
) -> ExplicitFormulaCheck:
    """lhs = f^(i/2) + f^(-i/2) - sum over table zeros (both signs);
    rhs = W_R(f) + sum_p W_p(f); residual = lhs - rhs."""
    profile = explicit_formula_profile(f, zeros, [len(zeros)], precision_bits)
    return profile[0]


def explicit_formula_profile(
    f, zeros: ZeroTable, table_sizes, precision_bits: int = 256
) -> list[ExplicitFormulaCheck]:
    """Explicit-formula checks at several nested table prefixes, reusing the
    partial zero sums (table_sizes must be increasing)."""
    sizes = list(table_sizes)
    if sizes != sorted(sizes) or sizes[-1] > len(zeros):
        raise ValueError("table_sizes must be increasing and within the table")
    with mp.workprec(precision_bits + _GUARD):
        pole = f.mellin(mp.mpc(0, 0.5)) + f.mellin(mp.mpc(0, -0.5))
        rhs = w_arch(f, precision_bits)
        S = f.log_halfwidth()
        for p in primes_up_to(int(mp.exp(S)) + 1):
            if mp.log(p) <= S:
                rhs += w_prime(p, f, precision_bits)
        out = []
        zsum = mpf(0)
        done = 0
        for size in sizes:
            zsum += mp.fsum(
                f.mellin(g) + f.mellin(-g) for g in zeros.ordinates[done:size]
            )
            done = size
            lhs = pole - zsum
            out.append(ExplicitFormulaCheck(+lhs, +rhs, +(lhs - rhs), size))
        return out


# -- Gram matrix of the truncated Weil form ------------------------------------


def _psi_hat_poles(K, L, alpha, c0):
    """psi_k^(+-i/2) for k = -K..K: 2 c0 sin((alpha k -+ i/2) L)/(alpha k -+ i/2)."""
    sh = mp.sinh(L / 2)
    a = {}
    b = {}
    for k in range(-K, K + 1):
        sgn = -1 if k % 2 else 1
        a[k] = 2 * c0 * (-sgn * 1j * sh) / (alpha * k - 0.5j)
        b[k] = 2 * c0 * (sgn * 1j * sh) / (alpha * k + 0.5j)
    return a, b


def _sinh_kernel_regular(z):
    """u(z) = e^(z/2)/sinh(z) - 1/z: analytic on |z| < pi, u(0) = 1/2.

    Near zero the subtraction cancels ~|log2 z| bits, so evaluate with a
    local precision boost to keep full relative accuracy.
    """
    az = abs(z)
    if az == 0:
        return mpf(0.5)
    boost = 16 + max(0, int(-mp.log(az, 2)) + 1) if az < 1 else 16
    with mp.workprec(mp.prec + boost):
        val = mp.exp(z / 2) / mp.sinh(z) - 1 / z
    return +val


def _arch_integrals(K, L, alpha, c2, precision_bits):
    """I(m) = int_0^2L sin(alpha m t) e^(t/2)/sinh t dt  (odd in m) and
    J(k) = int_0^2L [c2 (2L-t) cos(alpha k t) - e^(-t/2)] e^(t/2)/sinh t dt.

    Writing e^(t/2)/sinh t = 1/t + u(t) splits each into closed forms
    (Si/Cin/Ein at 2 pi m) plus smooth oscillatory integrals of u.  Small
    orders integrate directly by tanh-sinh; for alpha*m*H >> prec the
    rectangle contour 0 -> iH -> T+iH -> T drops its top edge below the
    working precision, leaving two vertical legs whose nodes are shared by
    every order (so each extra order costs O(nodes))."""
    T = 2 * L
    H = min(mpf("2.6"), mp.pi - mpf("0.4"), T)
    # direct tanh-sinh below the contour threshold
    bound_top = (mp.exp(T / 2) / mp.sin(H) + 1 / H) * (T + 1)
    thresh = mpf(2) ** (-precision_bits - 24) / bound_top
    m_contour = 1
    while mp.exp(-alpha * m_contour * H) > thresh:
        m_contour += 1

    I = {0: mpf(0)}
    J = {}
    direct_I = [m for m in range(1, K + 1) if m < m_contour]
    direct_J = [k for k in range(0, K + 1) if k < m_contour]
    for m in direct_I:
        am = alpha * m

        def integrand(t, am=am):
            if t == 0:
                return am
            return mp.sin(am * t) * mp.exp(t / 2) / mp.sinh(t)

        I[m] = _quad_checked(integrand, [0, T], precision_bits)
    lim0 = mpf(0.5) - c2
    for k in direct_J:
        ak = alpha * k

        def integrand(t, ak=ak, lim0=lim0):
            if t == 0:
                return lim0
            # c2(2L-t)cos - e^(-t/2), written cancellation-free
            n = -2 * mp.sin(ak * t / 2) ** 2 - c2 * t * mp.cos(ak * t) - mp.expm1(-t / 2)
            return n * mp.exp(t / 2) / mp.sinh(t)

        J[k] = _quad_checked(integrand, [0, T], precision_bits)
    if m_contour > K:
        return I, J

    # shared vertical-leg nodes for the contour orders
    n_nodes = max(int(0.75 * precision_bits) + 80, 260)
    legs = _gauss_legendre_nodes(n_nodes, mpf(0), H)
    u_left = [_sinh_kernel_regular(1j * y) for y, _ in legs]
    u_right = [_sinh_kernel_regular(T + 1j * y) for y, _ in legs]
    ein_half_T = mp.euler + mp.log(T / 2) + mp.e1(T / 2)
    s0 = _quad_checked(
        lambda t: mp.exp(-t / 2) * _sinh_kernel_regular(t), [0, T], precision_bits
    )
    for m in range(m_contour, K + 1):
        b = alpha * m
        damp = [w * mp.exp(-b * y) for y, w in legs]
        # R1 = int_0^T e^(ibt) u(t) dt, R2 = same with factor (T - t);
        # top edge below threshold and e^(ibT) = 1 on the frequency grid
        left = mp.fsum(d * ul for d, ul in zip(damp, u_left))
        right = mp.fsum(d * ur for d, ur in zip(damp, u_right))
        R1 = 1j * (left - right)
        left2 = mp.fsum(d * (T - 1j * y) * ul for d, (y, _), ul in zip(damp, legs, u_left))
        right2 = mp.fsum(d * (-1j * y) * ur for d, (y, _), ur in zip(damp, legs, u_right))
        R2 = 1j * (left2 - right2)
        two_pi_m = 2 * mp.pi * m
        I[m] = mp.si(two_pi_m) + mp.im(R1)
        cin = mp.euler + mp.log(two_pi_m) - mp.ci(two_pi_m)
        J[m] = -cin + ein_half_T + c2 * mp.re(R2) - s0
    return I, J


def _gauss_legendre_nodes(n, a, b):
    """Gauss-Legendre (node, weight) pairs on [a, b] at working precision."""
    out = []
    for i in range(1, n + 1):
        x = mp.cos(mp.pi * (i - mpf(1) / 4) / (n + mpf(1) / 2))
        dp = None
        for _ in range(100):
            p0, p1 = mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mpf(2) ** (-mp.prec + 8):
                break
        p0, p1 = mpf(1), x
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - 1)
        w = 2 / ((1 - x * x) * dp * dp)
        out.append((a + (b - a) * (x + 1) / 2, (b - a) / 2 * w))
    return out


def _prime_powers(lam2):
    """(t, weight) for prime powers p^m strictly inside the double band."""
    out = []
    limit = int(mp.floor(lam2)) + 1
    for p in primes_up_to(limit):
        logp = mp.log(p)
        m = 1
        while True:
            t = m * logp
            if not (mp.power(p, m) < lam2):
                break
            out.append((t, logp * mp.power(p, -mpf(m) / 2)))
            m += 1
    return out


def weil_gram_complex(lam2, half_width: int, precision_bits: int):
    """Gram of QW over psi_-K..psi_K as a raw complex matrix (list of rows).

    Entry (j, k) is QW(psi_j, psi_k) = h^(i/2) + h^(-i/2) - W_R(h) - sum_p
    W_p(h) with h = psi_k * psi_j~, all reduced to closed forms plus the
    shared I/J integrals.
    """
    K = half_width
    with mp.workprec(precision_bits + _GUARD):
        L = mp.log(mp.mpmathify(lam2)) / 2
        alpha = mp.pi / L
        c0 = 1 / mp.sqrt(2 * L)
        c2 = c0 * c0
        A, B = _psi_hat_poles(K, L, alpha, c0)
        I, J = _arch_integrals(K, L, alpha, c2, precision_bits)
        pp = _prime_powers(mp.mpmathify(lam2))
        arch_const = mp.log(4 * mp.pi) + mp.euler + mp.log(mp.tanh(L))

        # prime sums collapse to tabulated combinations: for j != k the value
        # is 2 c2 (-1)^(j-k) (Spr[k] - Spr[j])/(alpha (j-k)) with
        # Spr[m] = sum_pp w sin(alpha m t); the diagonal needs the cos table
        Spr = {}
        diag_prime = {}
        for m in range(-K, K + 1):
            Spr[m] = mp.fsum(w * mp.sin(alpha * m * t) for t, w in pp) if pp else mpf(0)
        for m in range(-K, K + 1):
            diag_prime[m] = (
                mp.fsum(w * 2 * c2 * (2 * L - t) * mp.cos(alpha * m * t) for t, w in pp)
                if pp
                else mpf(0)
            )

        def isgn(m):
            return I[m] if m >= 0 else -I[-m]

        size = 2 * K + 1
        G = [[None] * size for _ in range(size)]
        Bc = {k: mp.conj(B[k]) for k in B}
        Ac = {k: mp.conj(A[k]) for k in A}
        for j in range(-K, K + 1):
            for k in range(-K, K + 1):
                pole = A[k] * Bc[j] + B[k] * Ac[j]
                if j == k:
                    arch = arch_const + J[abs(k)]
                    prime = diag_prime[k]
                else:
                    sgn = -1 if (j - k) % 2 else 1
                    d = alpha * (j - k)
                    arch = c2 * sgn * (isgn(k) - isgn(j)) / d
                    prime = 2 * c2 * sgn * (Spr[k] - Spr[j]) / d
                G[j + K][k + K] = pole - arch - prime
        return G


def _real_basis_gram(G, K, precision_bits):
    """Transform the complex Gram to the real basis
    [const, cos_1..cos_K, sin_1..sin_K]; entries must come out real."""
    size = 2 * K + 1
    rt2 = mp.sqrt(2)

    def g(j, k):
        return G[j + K][k + K]

    R = [[mpf(0)] * size for _ in range(size)]
    R[0][0] = g(0, 0)
    for k in range(1, K + 1):
        ck, sk = k, K + k
        R[0][ck] = (g(0, k) + g(0, -k)) / rt2
        R[ck][0] = (g(k, 0) + g(-k, 0)) / rt2
        R[0][sk] = (g(0, k) - g(0, -k)) / (rt2 * 1j)
        R[sk][0] = (g(k, 0) - g(-k, 0)) * 1j / rt2
        for j in range(1, K + 1):
            cj, sj = j, K + j
            R[cj][ck] = (g(j, k) + g(j, -k) + g(-j, k) + g(-j, -k)) / 2
            R[sj][sk] = (g(j, k) - g(j, -k) - g(-j, k) + g(-j, -k)) / 2
            R[cj][sk] = (g(j, k) - g(j, -k) + g(-j, k) - g(-j, -k)) / (2j)
            R[sj][ck] = (g(j, k) + g(j, -k) - g(-j, k) - g(-j, -k)) * 1j / 2
    scale = max(abs(R[i][j]) for i in range(size) for j in range(size))
    tol = scale * mpf(2) ** (-(precision_bits // 2))
    clean = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if abs(mp.im(R[i][j])) > tol:
                raise ArithmeticError(
                    f"real-basis Gram has imaginary residue {mp.im(R[i][j])} "
                    f"at ({i},{j}); insufficient precision"
                )
            clean[i][j] = mp.re(R[i][j])
    return clean


def pole_constraint_vectors(lam2, half_width: int, precision_bits: int):
    """Real-basis coordinate vectors of the functionals f -> f^(+-i/2).

    On real test functions both functionals are real, one per pole; the
    codimension-2 subspace they cut out is where Weil positivity lives.
    """
    K = half_width
    with mp.workprec(precision_bits + _GUARD):
        L = mp.log(mp.mpmathify(lam2)) / 2
        alpha = mp.pi / L
        c0 = 1 / mp.sqrt(2 * L)
        A, B = _psi_hat_poles(K, L, alpha, c0)
        rt2 = mp.sqrt(2)
        out = []
        for hat in (A, B):
            vec = [hat[0]]
            for k in range(1, K + 1):
                vec.append((hat[k] + hat[-k]) / rt2)
            for k in range(1, K + 1):
                vec.append((hat[k] - hat[-k]) / (rt2 * 1j))
            tol = mpf(2) ** (-(precision_bits // 2)) * (1 + max(abs(v) for v in vec))
            if any(abs(mp.im(v)) > tol for v in vec):
                raise ArithmeticError("pole constraint vector is not real")
            out.append([mp.re(v) for v in vec])
        return out


def _project_out(rows, constraints, precision_bits):
    """Compress the symmetric matrix onto the orthocomplement of the span of
    the given row vectors (orthonormalized by Gram-Schmidt)."""
    n = len(rows)
    basis = []
    for c in constraints:
        v = list(c)
        for u in basis:
            dot = mp.fsum(u[i] * v[i] for i in range(n))
            v = [v[i] - dot * u[i] for i in range(n)]
        nrm = mp.sqrt(mp.fsum(x * x for x in v))
        if nrm > mpf(2) ** (-precision_bits // 2):
            basis.append([x / nrm for x in v])
    # complete to an orthonormal basis of the complement via MGS on identity
    comp = []
    for i in range(n):
        v = [mpf(1) if j == i else mpf(0) for j in range(n)]
        for u in basis + comp:
            dot = mp.fsum(u[j] * v[j] for j in range(n))
            v = [v[j] - dot * u[j] for j in range(n)]
        nrm = mp.sqrt(mp.fsum(x * x for x in v))
        if nrm > mpf(1) / 4:  # keep well-conditioned directions only
            comp.append([x / nrm for x in v])
    if len(comp) != n - len(basis):
        raise ArithmeticError("projection basis completion failed")
    av = [[mp.fsum(rows[i][j] * c[j] for j in range(n)) for c in comp] for i in range(n)]
    return [
        [mp.fsum(comp[a][i] * av[i][b] for i in range(n)) for b in range(len(comp))]
        for a in range(len(comp))
    ]


def weil_gram(lam2, half_width: int, precision_bits: int, project_poles: bool = False) -> HPMatrix:
    """Gram matrix of the truncated Weil form in the real log-Fourier basis
    [const, cos_1..cos_K, sin_1..sin_K] (layout matters for the parity
    blocks).  With project_poles=True the matrix is first compressed onto
    the codimension-2 subspace f^(+-i/2) = 0."""
    G = weil_gram_complex(lam2, half_width, precision_bits)
    with mp.workprec(precision_bits + _GUARD):
        R = _real_basis_gram(G, half_width, precision_bits)
        if project_poles:
            cons = pole_constraint_vectors(lam2, half_width, precision_bits)
            R = _project_out(R, cons, precision_bits)
    return HPMatrix(R, precision_bits)


@dataclass
class GramSpectrum:
    matrix: HPMatrix
    eigenvalues: list
    residuals: list
    smallest_positive: object
    blocks: tuple
    precision_bits: int


def weil_gram_spectrum(
    lam2,
    half_width: int,
    precision_bits: int,
    project_poles: bool = False,
    want_vectors: bool = False,
) -> GramSpectrum:
    """Assemble the Gram and solve it.  Without pole projection the real
    basis splits into even/odd parity blocks which are solved separately."""
    m = weil_gram(lam2, half_width, precision_bits, project_poles)
    K = half_width
    with mp.workprec(precision_bits + _GUARD):
        if project_poles or K == 0:
            res = jacobi_eigensystem(m, want_vectors=want_vectors)
            pairs = [(lam, r) for lam, r in zip(res.eigenvalues, res.residuals)]
            blocks = (res,)
        else:
            rows = m.rows
            cos_idx = list(range(0, K + 1))
            sin_idx = list(range(K + 1, 2 * K + 1))
            results = []
            pairs = []
            for idx in (cos_idx, sin_idx):
                sub = [[rows[i][j] for j in idx] for i in idx]
                res = jacobi_eigensystem(
                    HPMatrix(sub, precision_bits), want_vectors=want_vectors
                )
                results.append(res)
                pairs.extend(zip(res.eigenvalues, res.residuals))
            blocks = tuple(results)
        pairs.sort(key=lambda e: e[0])
        eigenvalues = [e[0] for e in pairs]
        residuals = [e[1] for e in pairs]
        smallest_pos = next((lam for lam, r in pairs if lam > r), None)
    return GramSpectrum(m, eigenvalues, residuals, smallest_pos, blocks, precision_bits)
