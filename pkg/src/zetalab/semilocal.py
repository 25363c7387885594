"""Local factors at the archimedean place and semilocal identities.

The functional-equation unitary on the critical line is the unimodular ratio
u(s) = zeta(1/2-is)/zeta(1/2+is) = gamma_R(1/2+is)/gamma_R(1/2-is) with
gamma_R(z) = pi^(-z/2) Gamma(z/2); at a finite place the analogous ratio is
built from the local Euler factor.  Tate's archimedean functional equation,
the adelic lift of finite orbit sums to the map E, and the trace-formula form
of the archimedean explicit-formula distribution are all checked numerically
here at arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from zetalab.scaling import map_E
from zetalab.weil import QuadratureError, is_prime, w_arch

_GUARD = 48


@dataclass(frozen=True)
class PlaceSet:
    """A finite set of places of Q; the archimedean place is always in."""

    primes: frozenset

    def __init__(self, primes=()):
        ps = frozenset(int(p) for p in primes)
        for p in ps:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "primes", ps)

    @property
    def includes_infinity(self) -> bool:
        return True

    def __iter__(self):
        return iter(sorted(self.primes))


def gamma_factor(z, precision_bits: int = 256):
    """gamma_R(z) = pi^(-z/2) Gamma(z/2); poles at z in {0, -2, -4, ...}."""
    with mp.workprec(precision_bits + _GUARD):
        z = mp.mpmathify(z)
        half = z / 2
        if mp.im(half) == 0 and mp.re(half) <= 0 and half == mp.floor(half):
            raise ZeroDivisionError(f"gamma factor pole at z = {z}")
        return +(mp.power(mp.pi, -half) * mp.gamma(half))


def u_arch(s, precision_bits: int = 256):
    """u(s) = gamma_R(1/2+is)/gamma_R(1/2-is); modulus 1 for real s."""
    with mp.workprec(precision_bits + _GUARD):
        s = mp.mpmathify(s)
        return +(gamma_factor(0.5 + 1j * s, precision_bits)
                 / gamma_factor(0.5 - 1j * s, precision_bits))


def zeta_ratio(s, precision_bits: int = 256):
    """zeta(1/2-is)/zeta(1/2+is): the other face of the same unitary."""
    with mp.workprec(precision_bits + _GUARD):
        s = mp.mpmathify(s)
        return +(mp.zeta(0.5 - 1j * s) / mp.zeta(0.5 + 1j * s))


def rho_p(p: int, s, precision_bits: int = 256):
    """Finite-place ratio (1 - p^(-1/2+is))/(1 - p^(-1/2-is)): unimodular on
    the real line and equal to 1 at s = 0."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    with mp.workprec(precision_bits + _GUARD):
        s = mp.mpmathify(s)
        num = 1 - mp.power(p, -0.5 + 1j * s)
        den = 1 - mp.power(p, -0.5 - 1j * s)
        return +(num / den)


def rho_p_phase_derivative(p: int, s, terms: int = 200, precision_bits: int = 256):
    """d/ds arg rho_p(s) = -2 log p sum_m p^(-m/2) cos(m s log p): the local
    winding density carries exactly the prime's explicit-formula weights."""
    with mp.workprec(precision_bits + _GUARD):
        s = mp.mpmathify(s)
        logp = mp.log(p)
        return +(-2 * logp * mp.fsum(
            mp.power(p, -mpf(m) / 2) * mp.cos(m * s * logp) for m in range(1, terms + 1)
        ))


def u_semilocal(s, places: PlaceSet, precision_bits: int = 256):
    """Product of the archimedean ratio and the finite-place ratios over S."""
    with mp.workprec(precision_bits + _GUARD):
        val = u_arch(s, precision_bits)
        for p in places:
            val *= rho_p(p, s, precision_bits)
        return +val


# -- Tate's archimedean functional equation -------------------------------------


def tate_arch_check(f, s, precision_bits: int = 256):
    """Both sides of the local functional equation at the real place for the
    character x -> |x|^(is):

        int F(f)(x) |x|^(-is) |x|^(1/2) d*x
            = rho(s) * int f(x) |x|^(is) |x|^(1/2) d*x

    with rho(s) = gamma_R(1/2-is)/gamma_R(1/2+is) (the reciprocal of u_arch:
    that is the orientation Tate's equation itself forces, cf. the self-dual
    Gaussian).  Returns (lhs, rhs, residual).
    """
    with mp.workprec(precision_bits + _GUARD):
        s = mp.mpmathify(s)
        fhat = f.fourier()
        radius = max(f.decay_radius(precision_bits + 32),
                     fhat.decay_radius(precision_bits + 32))

        def mellin_like(g, sign):
            def integrand(x):
                return g.evaluate(x) * mp.power(x, sign * 1j * s) * mp.sqrt(x) / x

            val, err = mp.quad(integrand, [0, 1, radius], error=True)
            if err > mpf(2) ** (-precision_bits // 2):
                raise QuadratureError(f"tate integral did not converge: err={err}")
            return 2 * val  # even functions: both half-lines

        lhs = mellin_like(fhat, -1)
        rho = gamma_factor(0.5 - 1j * s, precision_bits) / gamma_factor(
            0.5 + 1j * s, precision_bits
        )
        rhs = rho * mellin_like(f, +1)
        return +lhs, +rhs, +(lhs - rhs)


# -- the adelic lift of Prop-type orbit sums -------------------------------------


def _gamma_orbit_integers(mu: float) -> list[int]:
    """Positive integers n <= mu whose prime factors are all < mu (the
    integer points of the S-unit group orbit intersected with [-mu, mu])."""
    out = []
    for n in range(1, int(mp.floor(mu)) + 1):
        m = n
        ok = True
        f = 2
        while f * f <= m:
            while m % f == 0:
                if not (f < mu):
                    ok = False
                m //= f
            f += 1
        if m > 1 and not (m < mu):
            ok = False
        if ok:
            out.append(n)
    return out


def semilocal_lift_check(f, mu, u, lam=None, precision_bits: int = 256):
    """lhs = u^(1/2) * sum over the orbit integers Y of f(g u) versus
    rhs = 2 E(f)(u), valid for u > 1/lambda with lambda = sqrt(mu).

    f must be even with support (numerically) inside [-lambda, lambda]."""
    with mp.workprec(precision_bits + _GUARD):
        mu = mp.mpmathify(mu)
        u = mp.mpmathify(u)
        if lam is None:
            lam = mp.sqrt(mu)
        if not (u > 1 / lam):
            raise ValueError("the lift identity is only asserted for u > 1/lambda")
        ys = _gamma_orbit_integers(mu)
        lhs = mp.sqrt(u) * mp.fsum(2 * f.evaluate(n * u) for n in ys)
        rhs = 2 * map_E(f.evaluate, u, precision_bits, support_radius=lam)
        return +lhs, +rhs


# -- the archimedean trace-formula cross-check ------------------------------------


def arch_phase_derivative(s, precision_bits: int = 256):
    """theta'(s) for u_arch = e^(i theta): -log pi + Re psi(1/4 + is/2).

    For |s| beyond the asymptotic threshold the digamma is evaluated by its
    Stirling series (terms are cheap polynomials; optimal truncation leaves
    an error ~e^(-pi |s|), far below the working precisions used here)."""
    with mp.workprec(precision_bits + _GUARD):
        s = mp.mpmathify(s)
        z = 0.25 + 0.5j * s
        if abs(z) < max(30, precision_bits / 6):
            return +(-mp.log(mp.pi) + mp.re(mp.digamma(z)))
        acc = mp.log(z) - 1 / (2 * z)
        z2 = z * z
        zpow = z2
        prev = mp.inf
        for n in range(1, 200):
            term = mp.bernoulli(2 * n) / (2 * n * zpow)
            if abs(term) > prev:  # asymptotic series turned; stop at best
                break
            acc -= term
            prev = abs(term)
            if prev < mpf(2) ** (-mp.prec - 8):
                break
            zpow *= z2
        return +(-mp.log(mp.pi) + mp.re(acc))


def trace_side_integral(f, precision_bits: int = 256):
    """(1/4pi) integral f^(s) theta'(s) ds over the line, for a real even
    band function (so f^ is real even and the integrand decays)."""
    with mp.workprec(precision_bits + _GUARD):
        L = f.log_halfwidth()

        def integrand(s):
            return f.mellin(s) * arch_phase_derivative(s, precision_bits)

        # split a smooth head from the oscillatory tail (f^ oscillates at
        # frequency L; quadosc handles the tail against the slow digamma)
        a = 8 * mp.pi / L
        head, err = mp.quad(integrand, [0, a], error=True)
        if err > mpf(2) ** (-precision_bits // 2) * (1 + abs(head)):
            raise QuadratureError(f"trace-side head integral: err={err}")
        tail = mp.quadosc(integrand, [a, mp.inf], period=2 * mp.pi / L)
        return +(2 * (head + tail) / (4 * mp.pi))


_CALIBRATION = {}


def trace_calibration(precision_bits: int = 256):
    """The frozen normalization constant of the trace identity, fixed once on
    a reference function: kappa = W_R(f0) / [(1/4pi) int f0^ theta' ds]."""
    key = precision_bits
    if key not in _CALIBRATION:
        from zetalab.bandfn import LogBandFunction

        f0 = LogBandFunction.cosine_power(4, 2)
        with mp.workprec(precision_bits + _GUARD):
            _CALIBRATION[key] = +(w_arch(f0, precision_bits)
                                  / trace_side_integral(f0, precision_bits))
    return _CALIBRATION[key]


def arch_trace_check(f, precision_bits: int = 256, kappa=None):
    """w_inf = W_R(f) against the calibrated trace side; returns the triple
    (w_inf, trace_side, residual)."""
    if kappa is None:
        kappa = trace_calibration(precision_bits)
    with mp.workprec(precision_bits + _GUARD):
        w_inf = w_arch(f, precision_bits)
        trace = kappa * trace_side_integral(f, precision_bits)
        return +w_inf, +trace, +(w_inf - trace)
