"""Common index jump certificates: find a level 2N and iterates 2m_j at
which every geodesic's index window aligns, and verify the alignment.

A certificate (N, m_j, xi_j, M, eps) asserts
    m_j = ([N / (M * ihat_j)] + xi_j) * M,
    |N / (M * ihat_j) - [..] - xi_j| < eps,
with M clearing every rational angle (M * theta / pi integral) and N on the
divisibility lattice (2 * N * B(n,1) integral, plus the parity-family
divisor).  The search additionally demands the jump equalities themselves:

    i(c^(2m_j))              >= 2N - e_j / 2,
    i(c^(2m_j)) + nu(2m_j)   <= 2N + e_j / 2,
    i(c^(2m_j + 1))          == 2N + i(c_j),

checked by exact index evaluation, so every returned certificate verifies.
For a geodesic whose rotation angles are all rational the three checks are
equivalent to the exact divisibility M * ihat_j | N, which is folded into
the scan stride; surd mean indices go through certified fractional parts
with a conservative float prefilter (rejections are provably correct, and
acceptances are re-checked exactly).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Optional, Sequence

from .exact_numbers import PrecisionError, SurdSum, is_rational_turn
from .index_iteration import GeodesicModel, index_at, mean_index, nullity_at
from .loop_homology import constant_B

log = logging.getLogger("geodex.index_jump")

DEFAULT_EPS = Fraction(1, 1000)
DEFAULT_N_BOUND = 10 ** 6
_PREFILTER_MARGIN = 1e-6


class _FracFilter:
    """Certified integer evaluation of floor/frac of N * x for a fixed
    irrational x, used to screen scan candidates without Fraction traffic.

    x is scaled to an integer window [lo, lo + width] at 2**BITS precision
    with exact square-root floors, so every decision taken here is provably
    correct; candidates too close to a threshold are sent to the exact path.
    """

    BITS = 128

    def __init__(self, x: SurdSum):
        from math import lcm as _lcm

        den = 1
        for q in x.terms.values():
            den = _lcm(den, q.denominator)
        self.scale = den << self.BITS
        lo = 0
        width = 0
        for d, q in x.terms.items():
            a = q.numerator * (den // q.denominator)
            if d == 1:
                lo += a << self.BITS
            else:
                f = _floor_sqrt_scaled(d, a, self.BITS)
                lo += f
                width += 1
        self.lo_base = lo          # floor bound of x * scale
        self.width_per_n = width   # uncertainty grows linearly in N

    def classify(self, n_value: int, eps: Fraction):
        """('reject', None, None) | ('candidate', floor, xi) | ('exact',)."""
        lo = n_value * self.lo_base
        hi = lo + n_value * self.width_per_n
        fl = lo // self.scale
        if hi // self.scale != fl:
            return ("exact", None, None)
        rem_lo = lo - fl * self.scale
        rem_hi = hi - fl * self.scale
        # integer thresholds: frac < eps  <=>  rem < eps * scale
        t_num = eps.numerator * self.scale
        t_den = eps.denominator
        below_lo = rem_lo * t_den < t_num
        below_hi = rem_hi * t_den < t_num
        if below_lo and below_hi:
            return ("candidate", fl, 0)
        above_lo = (self.scale - rem_lo) * t_den < t_num
        above_hi = (self.scale - rem_hi) * t_den < t_num
        if above_lo and above_hi:
            return ("candidate", fl, 1)
        if not below_lo and not above_hi and not below_hi and not above_lo:
            return ("reject", None, None)
        return ("exact", None, None)


@dataclass(frozen=True)
class JumpEntry:
    label: str
    m: int
    xi: int


@dataclass(frozen=True)
class JumpCertificate:
    n_value: int                 # the level is 2 * n_value
    modulus: int
    epsilon: Fraction
    entries: tuple

    def entry(self, label: str) -> JumpEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "N": self.n_value,
            "M": self.modulus,
            "eps": str(self.epsilon),
            "entries": [{"label": e.label, "m": e.m, "xi": e.xi}
                        for e in self.entries],
        }


def _angle_pi_denominator(turn) -> int:
    # denominator of theta/pi = 2 * t
    f = Fraction(turn) * 2
    return f.denominator


def choose_modulus(config: Sequence[GeodesicModel]) -> int:
    """Minimal M with M * theta / pi integral for every rational eigen-angle."""
    m = 1
    for g in config:
        c = g.decomposition.counts()
        for t in list(c.rotations) + list(c.nontrivial_angles) + list(c.trivial_angles):
            if is_rational_turn(t):
                m = lcm(m, _angle_pi_denominator(t))
        # +-1 eigenvalues have theta/pi in {0, 1}; any M clears them
    return m


def divisibility_stride(n: int) -> int:
    """Smallest D with 2*D*B(n,1) integral and the parity-family divisor."""
    b = constant_B(n)
    d_b = b.denominator // gcd(b.denominator, 2 * b.numerator)
    fam = (n - 1) // 2 if n % 2 else n - 1
    return lcm(max(d_b, 1), max(fam, 1))


def _has_surd_rotation(g: GeodesicModel) -> bool:
    return any(not is_rational_turn(t) for t in g.decomposition.counts().rotations)


def jump_checks(g: GeodesicModel, n_value: int, m_j: int) -> dict:
    """The three alignment conditions at 2*m_j, exactly, with slacks."""
    e = g.decomposition.elliptic_height()
    i_even = index_at(g, 2 * m_j)
    nu_even = nullity_at(g, 2 * m_j)
    i_odd = index_at(g, 2 * m_j + 1)
    lower_slack = i_even - (2 * n_value - e // 2)
    upper_slack = (2 * n_value + e // 2) - (i_even + nu_even)
    return {
        "lower": {"ok": lower_slack >= 0, "slack": lower_slack},
        "upper": {"ok": upper_slack >= 0, "slack": upper_slack},
        "odd_equality": {"ok": i_odd == 2 * n_value + g.initial_index,
                         "lhs": i_odd, "rhs": 2 * n_value + g.initial_index},
    }


def _passes_jump_checks(g: GeodesicModel, n_value: int, m_j: int) -> bool:
    c = jump_checks(g, n_value, m_j)
    return all(v["ok"] for v in c.values())


def find_jump(config: Sequence[GeodesicModel], n: int,
              eps: Optional[Fraction] = None,
              n_bound: int = DEFAULT_N_BOUND,
              chi_hats: Optional[dict] = None,
              extra_check: Optional[Callable[[JumpCertificate], bool]] = None,
              ) -> Optional[JumpCertificate]:
    """Smallest admissible N <= n_bound, or None when the budget runs out.

    eps defaults to half the reciprocal of (1 + sum 4*M*|chi_hat|) when
    chi_hats are supplied, else 1/1000.  Candidates whose certified interval
    arithmetic cannot decide the fractional-part test are skipped with a
    warning (soundness over completeness).
    """
    config = list(config)
    if not config:
        raise ValueError("empty configuration")
    modulus = choose_modulus(config)
    if eps is None:
        if chi_hats:
            denom = 1 + sum(4 * modulus * abs(Fraction(chi_hats[g.label]))
                            for g in config)
            eps = Fraction(1, 2) / denom
        else:
            eps = DEFAULT_EPS
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")

    stride = divisibility_stride(n)
    members = []     # (model, rational Mihat | None, surd_state | None)
    for g in config:
        ih = mean_index(g)
        if ih.sign() <= 0:
            raise ValueError(f"mean index of {g.label or g!r} is not positive")
        m_ihat = ih * modulus
        if _has_surd_rotation(g):
            inv = m_ihat.inverse()
            members.append((g, None, (inv, _FracFilter(inv))))
        else:
            q = m_ihat.rational_part()
            assert m_ihat.is_rational() and q.denominator == 1, \
                "modulus must clear rational mean-index denominators"
            stride = lcm(stride, q.numerator)
            members.append((g, q.numerator, None))
            if stride > n_bound:
                log.info("stride %d exceeds budget %d; not found", stride, n_bound)
                return None

    eps_f = float(eps)
    n_value = stride
    while n_value <= n_bound:
        cert = _try_candidate(members, n_value, modulus, eps, eps_f)
        if cert is not None and (extra_check is None or extra_check(cert)):
            return cert
        n_value += stride
    log.info("no common index jump up to N = %d (stride %d)", n_bound, stride)
    return None


def _try_candidate(members, n_value, modulus, eps, eps_f):
    entries = []
    for g, rational_mi, surd_state in members:
        xi = 0
        if surd_state is not None:
            inv, approx = surd_state
            x_f = n_value / approx
            frac_f = x_f - int(x_f)
            if _PREFILTER_MARGIN < frac_f - eps_f and frac_f < 1 - eps_f - _PREFILTER_MARGIN:
                return None  # certified reject: far from both ends
            try:
                x = inv * n_value
                fl = x.floor()
                frac = x - fl
                if frac < eps:
                    xi = 0
                elif (SurdSum.from_value(1) - frac) < eps:
                    xi = 1
                else:
                    return None
            except PrecisionError as exc:
                log.warning("skipping N=%d: undecidable fractional part (%s)",
                            n_value, exc)
                return None
            m_j = (fl + xi) * modulus
        else:
            if n_value % rational_mi:
                return None       # rational members demand exact division
            m_j = (n_value // rational_mi) * modulus
        if m_j < 1:
            return None
        if not _passes_jump_checks(g, n_value, m_j):
            return None
        entries.append(JumpEntry(g.label, m_j, xi))
    return JumpCertificate(n_value, modulus, eps, tuple(entries))


def verify_jump(config: Sequence[GeodesicModel], cert: JumpCertificate,
                window: int = 50) -> dict:
    """Re-check every certificate invariant and alignment bound, with slacks.

    The window bounds (all iterates below 2m_j stay under the level, all
    above clear it) are checked on `window` iterates each side; for models
    with i(c) >= e/2 the one-step inequality chains extend them to all m.
    """
    report: dict = {"N": cert.n_value, "M": cert.modulus, "geodesics": {},
                    "ok": True}
    n_value = cert.n_value
    mod_expected = choose_modulus(config)
    structural = {
        "modulus_consistent": cert.modulus % mod_expected == 0,
    }
    report["structural"] = structural
    if not structural["modulus_consistent"]:
        report["ok"] = False
    for g in config:
        entry = cert.entry(g.label)
        m_j, xi = entry.m, entry.xi
        ih = mean_index(g)
        x = SurdSum.from_value(n_value) / (ih * cert.modulus)
        fl = x.floor()
        frac = x - fl
        checks = jump_checks(g, n_value, m_j)
        checks["iterate_formula"] = {
            "ok": m_j == (fl + xi) * cert.modulus,
            "lhs": m_j, "rhs": (fl + xi) * cert.modulus,
        }
        dist = frac - xi
        checks["eps_bound"] = {
            "ok": (dist < cert.epsilon) and (dist > -cert.epsilon),
            "eps": str(cert.epsilon),
        }
        checks["odd_nullity"] = {
            "ok": nullity_at(g, 2 * m_j + 1) == nullity_at(g, 1),
            "lhs": nullity_at(g, 2 * m_j + 1), "rhs": nullity_at(g, 1),
        }
        n_sphere = g.decomposition.n
        e = g.decomposition.elliptic_height()
        if g.initial_index >= n_sphere - 1:
            i_even = index_at(g, 2 * m_j)
            below_ok = True
            for m in range(max(1, 2 * m_j - window), 2 * m_j):
                if index_at(g, m) + nullity_at(g, m) > i_even:
                    below_ok = False
                    break
            above_ok = True
            floor_level = 2 * n_value + n_sphere - 1
            for m in range(2 * m_j + 1, 2 * m_j + window + 1):
                if index_at(g, m) < floor_level:
                    above_ok = False
                    break
            checks["window_below"] = {"ok": below_ok, "window": window}
            checks["window_above"] = {"ok": above_ok, "window": window}
            if e <= 2 * n_sphere - 4:
                cap = 2 * n_value + n_sphere - 2
                checks["nonelliptic_cap"] = {
                    "ok": i_even + nullity_at(g, 2 * m_j) <= cap,
                    "lhs": i_even + nullity_at(g, 2 * m_j), "rhs": cap,
                }
        ok = all(v["ok"] for v in checks.values())
        report["geodesics"][g.label] = {"m": m_j, "xi": xi, "checks": checks,
                                        "ok": ok}
        report["ok"] = report["ok"] and ok
    return report
