"""Closed-form machinery: contact-distance laws and coverage integrals.

Two routes are provided for the PDF of the distance from the transmitter to
its nearest satellite inside the overlap of the two gateway visibility caps:

* ``method="paper"`` -- a literal transcription of the published
  eighteen-sigma expression, evaluated under the reading that the sigma-17
  quantity is a cosine value (the angle is recovered with acos wherever a
  trigonometric function is applied to it).
* ``method="lens"`` -- an independently derived variant: the empty-region
  probability of the growing cap/cap intersection, differentiated in closed
  form.  This is the route validated against Monte Carlo histograms; see
  :func:`eq4_discrepancy_report` for a side-by-side diagnosis of the
  literal transcription.

The per-link coverage integral couples a contact-distance density to the
shadowed-Rician fading series through a threshold constant ``c``: a link at
distance x passes when the fading power exceeds c * x**2, matching the
inverse-square budget of :func:`satrelay.channel.link_snr` at path-loss
exponent 2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .channel import SrParams, sr_cdf, DEFAULT_Z_MAX
from .constants import EARTH_RADIUS_KM
from .geometry import central_angle, slant_range

__all__ = [
    "ContactLawConfig",
    "SigmaSet",
    "SigmaSingularityError",
    "Eq4NegativityWarning",
    "contact_ccdf_simple",
    "simple_contact_pdf",
    "contact_cdf_product",
    "cap_fraction",
    "lens_azimuth_halfwidth",
    "overlap_fraction",
    "overlap_support",
    "contact_ccdf_overlap",
    "contact_pdf_overlap",
    "sigma_terms",
    "coverage_link_integral",
    "coverage_end_to_end",
    "eq4_discrepancy_report",
    "render_discrepancy_markdown",
]

QUAD_ABS_TOL = 1e-8
QUAD_REL_TOL = 1e-6


class SigmaSingularityError(ValueError):
    """A sigma term hit a singular or out-of-domain configuration."""

    def __init__(self, index: int, message: str, implicates: tuple[int, ...] = ()):
        super().__init__(f"sigma_{index}: {message}")
        self.index = index
        self.implicates = (index,) + tuple(implicates)


class Eq4NegativityWarning(UserWarning):
    """The literal PDF transcription produced a negative density value."""


@dataclass(frozen=True)
class ContactLawConfig:
    """Geometry of one transmitter/receiver pair and the constellation.

    ``ground_separation_d`` is the straight-line chord in km between the two
    gateways; asin(d / 2Re) is then half the central angle they subtend.
    Dome angles are the full antenna cone angles; each gateway's visibility
    cap on the orbital shell has half that angular radius.
    """

    Ns: int
    ds: float
    theta_m1: float
    theta_m2: float
    ground_separation_d: float = 0.0

    def __post_init__(self):
        if self.Ns < 1:
            raise ValueError(f"Ns must be >= 1, got {self.Ns}")
        if not self.ds > 0.0:
            raise ValueError(f"ds must be positive, got {self.ds}")
        for name, ang in (("theta_m1", self.theta_m1), ("theta_m2", self.theta_m2)):
            if not 0.0 < ang < np.pi:
                raise ValueError(f"{name} must lie in (0, pi), got {ang}")
        if not 0.0 <= self.ground_separation_d < 2.0 * EARTH_RADIUS_KM:
            raise ValueError(
                f"chord must lie in [0, 2Re), got {self.ground_separation_d}"
            )

    @property
    def psi1(self) -> float:
        """Half-angle of the transmitter's visibility cap on the orbital shell."""
        return 0.5 * self.theta_m1

    @property
    def psi2(self) -> float:
        return 0.5 * self.theta_m2

    @property
    def gateway_angle(self) -> float:
        """Central angle between the two gateways (twice sigma-16)."""
        return 2.0 * np.arcsin(self.ground_separation_d / (2.0 * EARTH_RADIUS_KM))


# ---------------------------------------------------------------------------
# Simple (single-observer, unrestricted) contact law
# ---------------------------------------------------------------------------


def contact_ccdf_simple(d: float, Ns: int, ds: float, Re: float = EARTH_RADIUS_KM) -> float:
    """CCDF of the nearest-satellite distance for a BPP of ``Ns`` satellites.

    Probability that the spherical cap of satellites within slant range
    ``d`` of the observer is empty: (1 - A_cap / 4 pi R^2) ** Ns.
    """
    R = Re + ds
    if not (R - Re) <= d <= (R + Re):
        raise ValueError(f"d={d} outside slant-range interval [{R - Re}, {R + Re}]")
    phi = central_angle(d, R, Re)
    empty = (1.0 + np.cos(phi)) / 2.0  # 1 - (1 - cos)/2
    return float(empty**Ns)


def simple_contact_pdf(d: float, Ns: int, ds: float, Re: float = EARTH_RADIUS_KM) -> float:
    """Density of the nearest-satellite distance, -d/dd of the simple CCDF.

    Differentiating (1 - A(d)/sigma_2)^Ns gives
    Ns * ((1 + cos phi)/2)^(Ns-1) * d / (2 R Re): the chain rule's
    sin(phi) factors cancel between the cap-area derivative and
    d phi / d d = d / (R Re sin phi).
    """
    R = Re + ds
    if not (R - Re) <= d <= (R + Re):
        raise ValueError(f"d={d} outside slant-range interval [{R - Re}, {R + Re}]")
    phi = central_angle(d, R, Re)
    empty = (1.0 + np.cos(phi)) / 2.0
    return float(Ns * empty ** (Ns - 1) * d / (2.0 * R * Re))


def contact_cdf_product(per_sat_ccdfs) -> float:
    """CDF from independent per-satellite survival factors: 1 - prod(factors)."""
    factors = np.asarray(per_sat_ccdfs, dtype=float)
    if ((factors < 0.0) | (factors > 1.0)).any():
        raise ValueError("per-satellite CCDF factors must lie in [0, 1]")
    return float(1.0 - np.prod(factors))


# ---------------------------------------------------------------------------
# Cap-intersection geometry (the validated route)
# ---------------------------------------------------------------------------


def cap_fraction(half_angle: float) -> float:
    """Fraction of the sphere covered by a cap of the given half angle."""
    return (1.0 - np.cos(half_angle)) / 2.0


def lens_azimuth_halfwidth(t: float, b: float, delta: float) -> float:
    """Azimuthal half-width (radians, in [0, pi]) of the circle of polar
    angle ``t`` about the first cap's axis that lies inside the second cap
    (half-angle ``b``, axis separation ``delta``)."""
    sin_t = np.sin(t)
    sin_d = np.sin(delta)
    if sin_t * sin_d < 1e-15:
        # degenerate geometry: the circle is a point or the axes coincide
        if sin_t < 1e-15:
            inside = (delta <= b) if t < np.pi / 2 else (np.pi - delta <= b)
        else:
            inside = t <= b if delta < np.pi / 2 else np.pi - t <= b
        return np.pi if inside else 0.0
    w = (np.cos(b) - np.cos(t) * np.cos(delta)) / (sin_t * sin_d)
    return float(np.arccos(np.clip(w, -1.0, 1.0)))


def overlap_fraction(a: float, b: float, delta: float) -> float:
    """Fraction of the sphere inside both caps (half-angles ``a``, ``b``,
    axes separated by ``delta``), by adaptive quadrature of the azimuthal
    half-width over the first cap's polar angle."""
    if a <= 0.0 or b <= 0.0:
        return 0.0
    if delta >= a + b:
        return 0.0
    kinks = [t for t in (abs(delta - b), delta + b) if 0.0 < t < a]
    val, _ = integrate.quad(
        lambda t: lens_azimuth_halfwidth(t, b, delta) * np.sin(t),
        0.0,
        a,
        points=kinks or None,
        epsabs=QUAD_ABS_TOL,
        epsrel=QUAD_REL_TOL,
        limit=200,
    )
    return float(val / (2.0 * np.pi))


def overlap_support(cfg: ContactLawConfig, Re: float = EARTH_RADIUS_KM) -> tuple[float, float]:
    """Slant-range interval over which the overlap contact density lives."""
    R = Re + cfg.ds
    delta = cfg.gateway_angle
    phi_lo = max(0.0, delta - cfg.psi2)
    phi_hi = min(cfg.psi1, delta + cfg.psi2)
    if phi_hi <= phi_lo:
        raise ValueError("visibility caps do not overlap for this configuration")
    return slant_range(phi_lo, R, Re), slant_range(phi_hi, R, Re)


def contact_ccdf_overlap(
    D: float, cfg: ContactLawConfig, Re: float = EARTH_RADIUS_KM
) -> float:
    """P(no satellite in the overlap region within slant range D of the
    transmitter) = (1 - A(D)/4 pi R^2)^Ns, lens route."""
    R = Re + cfg.ds
    if not (R - Re) <= D <= (R + Re):
        raise ValueError(f"D={D} outside slant-range interval")
    phi = min(central_angle(D, R, Re), cfg.psi1)
    frac = overlap_fraction(phi, cfg.psi2, cfg.gateway_angle)
    return float((1.0 - frac) ** cfg.Ns)


def _lens_pdf(D: float, cfg: ContactLawConfig, Re: float) -> float:
    R = Re + cfg.ds
    d_lo, d_hi = overlap_support(cfg, Re)
    if not d_lo <= D <= d_hi:
        return 0.0
    phi = central_angle(D, R, Re)
    hw = lens_azimuth_halfwidth(phi, cfg.psi2, cfg.gateway_angle)
    if hw == 0.0:
        return 0.0
    frac = overlap_fraction(phi, cfg.psi2, cfg.gateway_angle)
    return float(
        cfg.Ns * D * hw / (2.0 * np.pi * R * Re) * (1.0 - frac) ** (cfg.Ns - 1)
    )


# ---------------------------------------------------------------------------
# Literal sigma-term transcription
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaSet:
    """The eighteen sigma terms of the published contact-distance PDF.

    sigma_17 is stored as the raw value (-D^2 + R^2 + Re^2) / (2 R Re); by
    the law of cosines this is the cosine of the transmitter-satellite
    central angle, and ``sigma17_angle`` carries acos of it.  Terms 4, 6 and
    10 depend on the integration variable l and are exposed as callables.
    """

    sigma_1: float
    sigma_2: float
    sigma_3: float
    sigma_4: Callable[[float], float]
    sigma_5: float
    sigma_6: Callable[[float], float]
    sigma_7: float
    sigma_8: float
    sigma_9: float
    sigma_10: Callable[[float], float]
    sigma_11: float
    sigma_12: float
    sigma_13: float
    sigma_14: float
    sigma_15: float
    sigma_16: float
    sigma_17: float
    sigma_18: float
    sigma17_angle: float

    def scalars(self) -> dict[str, float]:
        out = {}
        for i in (1, 2, 3, 5, 7, 8, 9, 11, 12, 13, 14, 15, 16, 17, 18):
            out[f"sigma_{i}"] = getattr(self, f"sigma_{i}")
        return out


def sigma_terms(
    D: float, cfg: ContactLawConfig, R: float, Re: float = EARTH_RADIUS_KM
) -> SigmaSet:
    """Evaluate the eighteen sigma terms at slant range ``D``.

    Raises :class:`SigmaSingularityError` when cos(sigma_17 as an angle)
    vanishes (the sigma_7 denominator) or the sigma_15 radicand is negative.
    All scalar terms are checked finite.
    """
    if not (R - Re) <= D <= (R + Re):
        raise ValueError(f"D={D} outside slant-range interval")
    half2 = 0.5 * cfg.theta_m2
    cos_h2 = np.cos(half2)

    s17 = (-D * D + R * R + Re * Re) / (2.0 * R * Re)
    ang17 = float(np.arccos(np.clip(s17, -1.0, 1.0)))
    cos17 = s17
    sin17 = float(np.sqrt(max(0.0, 1.0 - s17 * s17)))
    if abs(cos17) < 1e-12:
        raise SigmaSingularityError(7, "cos(sigma_17) vanishes; sigma_7 denominator is zero")

    s16 = float(np.arcsin(cfg.ground_separation_d / (2.0 * Re)))
    s18 = cos_h2**2
    s13 = R * R * sin17 * sin17
    s2 = 4.0 * np.pi * R * R
    s1 = R * np.sin(half2)

    rad15 = s18 + 2.0 * cos_h2 * s16 * s16 * cos17 - 2.0 * cos_h2 * cos17 + cos17 * cos17
    if rad15 < 0.0:
        raise SigmaSingularityError(15, f"radicand negative ({rad15!r})")
    s15 = float(np.sqrt(rad15))

    s12 = 2.0 * cos_h2 * s16 - np.sqrt(2.0) * s15
    s14 = 2.0 * s16 * cos17 - np.sqrt(2.0) * s15
    s9 = float(np.tan(cos_h2 + s12 / cos17))
    s11 = float(np.tan(cos_h2 - s14 / cos17))
    s5 = -R * s9 * cos_h2
    s8 = -R * s11 * cos17
    s7 = R * Re * cos17 * cos17
    s3 = np.sqrt(2.0) * (
        2.0 * D * cos17 * sin17 / (R * Re)
        - 2.0 * D * cos_h2 * sin17 / (R * Re)
        + 2.0 * D * cos_h2 * s16 * s16 * sin17 / (R * Re)
    )

    def s10(l: float) -> float:
        return float(np.sqrt(s13 - l * l))

    def s6(l: float) -> float:
        return float(2.0 * R * np.arcsin(s10(l) / R))

    def s4(l: float) -> float:
        rad = 1.0 - (s13 - l * l) / (R * R)
        return float(
            -2.0 * D * R * cos17 * sin17 / (Re * np.sqrt(rad) * s10(l))
        )

    scalars = dict(
        sigma_1=s1, sigma_2=s2, sigma_3=float(s3), sigma_5=float(s5), sigma_7=float(s7),
        sigma_8=float(s8), sigma_9=s9, sigma_11=s11, sigma_12=float(s12),
        sigma_13=float(s13), sigma_14=float(s14), sigma_15=s15, sigma_16=s16,
        sigma_17=float(s17), sigma_18=float(s18),
    )
    for name, value in scalars.items():
        if not np.isfinite(value):
            raise SigmaSingularityError(int(name.split("_")[1]), f"non-finite value {value!r}")

    return SigmaSet(
        sigma_1=s1, sigma_2=s2, sigma_3=float(s3), sigma_4=s4, sigma_5=float(s5),
        sigma_6=s6, sigma_7=float(s7), sigma_8=float(s8), sigma_9=s9, sigma_10=s10,
        sigma_11=s11, sigma_12=float(s12), sigma_13=float(s13), sigma_14=float(s14),
        sigma_15=s15, sigma_16=s16, sigma_17=float(s17), sigma_18=s18,
        sigma17_angle=ang17,
    )


def _literal_integral(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    l_max: float,
    bound_names: tuple[str, str],
    implicates: tuple[int, ...] = (),
) -> float:
    """Integrate a sigma integrand whose domain is |l| < l_max."""
    if hi <= lo:
        return 0.0
    if lo < -l_max or hi > l_max:
        raise SigmaSingularityError(
            10,
            f"integration bounds {bound_names[0]}={lo:.6g}, {bound_names[1]}={hi:.6g} "
            f"exceed the sigma_10 domain |l| < {l_max:.6g}",
            implicates=implicates,
        )
    val, err = integrate.quad(
        fn,
        lo,
        min(hi, l_max - 1e-12),
        epsabs=QUAD_ABS_TOL,
        epsrel=QUAD_REL_TOL,
        limit=200,
    )
    if not np.isfinite(val):
        raise SigmaSingularityError(10, "quadrature returned a non-finite value")
    return float(val)


def _eq4_literal_raw(
    D: float, cfg: ContactLawConfig, R: float, Re: float
) -> tuple[float, dict]:
    """Literal transcription of the published PDF; returns (value, diagnostics)."""
    diag: dict = {"sigma_errors": [], "asin_domain_errors": [], "negative": False}
    s = sigma_terms(D, cfg, R, Re)
    sin17 = float(np.sqrt(max(0.0, 1.0 - s.sigma_17**2)))
    cos17 = s.sigma_17
    cos_h2 = np.cos(0.5 * cfg.theta_m2)
    l_max = float(np.sqrt(s.sigma_13))
    N = cfg.Ns

    area = _literal_integral(
        s.sigma_6, s.sigma_5, s.sigma_1, l_max, ("sigma_5", "sigma_1"), implicates=(5, 9, 1)
    )
    area += _literal_integral(
        s.sigma_6, s.sigma_8, R * sin17, l_max, ("sigma_8", "R*sin(sigma_17)"), implicates=(8, 11)
    )
    diag["area_term"] = area

    bracket = _literal_integral(
        s.sigma_4, s.sigma_5, s.sigma_1, l_max, ("sigma_5", "sigma_1"), implicates=(5, 9, 1)
    )
    bracket += _literal_integral(
        s.sigma_4, s.sigma_8, R * sin17, l_max, ("sigma_8", "R*sin(sigma_17)"), implicates=(8, 11)
    )

    arg1 = s.sigma_13 - R * R * s.sigma_11**2 * cos17 * cos17
    if arg1 < 0.0:
        diag["asin_domain_errors"].append("sqrt(sigma_13 - R^2 sigma_11^2 cos^2(sigma_17))")
        raise SigmaSingularityError(11, "negative radicand in the sigma_11 arc term")
    inner = (s.sigma_3 / (2.0 * s.sigma_15) - 2.0 * D * s.sigma_16 * sin17 / (R * Re)) / cos17
    inner += D * sin17 * s.sigma_14 / s.sigma_7
    bracket += (
        2.0 * R * np.arcsin(np.sqrt(arg1) / R)
        * (
            D * s.sigma_11 * sin17 / Re
            + R * cos17 * inner * (s.sigma_11**2 + 1.0)
        )
    )

    arg2 = s.sigma_13 - R * R * s.sigma_9**2 * s.sigma_18
    if arg2 < 0.0:
        diag["asin_domain_errors"].append("sqrt(sigma_13 - R^2 sigma_9^2 sigma_18)")
        raise SigmaSingularityError(9, "negative radicand in the sigma_9 arc term")
    bracket -= (
        2.0 * R * R * cos_h2 * np.arcsin(np.sqrt(arg2) / R)
        * (s.sigma_9**2 + 1.0)
        * (s.sigma_3 / (2.0 * cos17 * s.sigma_15) + D * sin17 * s.sigma_12 / s.sigma_7)
    )
    # final published term, identically zero: - 2 D R asin(0) cos(sigma_17) / Re

    value = (1.0 / s.sigma_2) * N * (1.0 - area / s.sigma_2) ** (N - 1) * bracket
    diag["negative"] = value < 0.0
    diag["value"] = value
    return value, diag


def contact_pdf_overlap(
    D: float,
    cfg: ContactLawConfig,
    R: float | None = None,
    Re: float = EARTH_RADIUS_KM,
    method: str = "paper",
) -> float:
    """PDF of the contact distance to the nearest satellite in the overlap.

    ``method="paper"`` evaluates the literal published expression (negative
    values are clamped to zero and flagged with :class:`Eq4NegativityWarning`);
    ``method="lens"`` evaluates the independently derived cap-intersection
    variant.  ``R`` defaults to Re + cfg.ds.
    """
    R = Re + cfg.ds if R is None else R
    if method == "lens":
        return _lens_pdf(D, cfg, Re)
    if method != "paper":
        raise ValueError(f"unknown method {method!r}")
    value, diag = _eq4_literal_raw(D, cfg, R, Re)
    if diag["negative"]:
        warnings.warn(
            f"literal contact PDF is negative at D={D} ({value!r}); clamped to 0",
            Eq4NegativityWarning,
            stacklevel=2,
        )
    return max(value, 0.0)


# ---------------------------------------------------------------------------
# Coverage integrals
# ---------------------------------------------------------------------------


def coverage_link_integral(
    contact_pdf: Callable[[float], float],
    sr: SrParams,
    c: float,
    z_max: int = DEFAULT_Z_MAX,
    support: tuple[float, float] | None = None,
) -> float:
    """Single-link coverage probability against a contact-distance density.

    Computes integral of f(x) * (1 - F_SR(c * x**2)) dx over the (finite)
    slant-range support: the published pair of integrals in the
    distance-to-the-fourth variable collapses to this form, with the first
    term being the density's normalization mass.  As c -> 0 the result is
    that mass; as c -> infinity it drops to 0.  Clamped to [0, 1].
    """
    if c < 0.0:
        raise ValueError(f"threshold constant must be nonnegative, got {c}")
    if support is None:
        raise ValueError("a finite slant-range support interval is required")
    lo, hi = support
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")

        def integrand(x: float) -> float:
            f = contact_pdf(x)
            if f == 0.0:
                return 0.0
            return f * (1.0 - sr_cdf(c * x * x, sr, z_max))

        val, err = integrate.quad(
            integrand, lo, hi, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=300
        )
    if not np.isfinite(val) or err > max(QUAD_ABS_TOL * 1e4, abs(val) * 1e-3):
        raise RuntimeError(f"coverage quadrature failed to converge (value {val}, err {err})")
    return float(np.clip(val, 0.0, 1.0))


def coverage_end_to_end(p_ts: float, p_sr: float) -> float:
    """End-to-end coverage as the product of the two per-link coverages."""
    for name, p in (("p_ts", p_ts), ("p_sr", p_sr)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p_ts * p_sr


# ---------------------------------------------------------------------------
# Discrepancy diagnosis of the literal transcription
# ---------------------------------------------------------------------------


def eq4_discrepancy_report(
    cfg: ContactLawConfig, Re: float = EARTH_RADIUS_KM, n_grid: int = 101
) -> dict:
    """Evaluate the literal PDF across its support and diagnose failures.

    Returns a dict with per-point statuses, the set of sigma terms
    implicated in domain errors or dimensional inconsistencies, and the
    normalization integrals of both methods.  The lens-variant mass serves
    as the reference (it equals 1 minus the empty-overlap probability).
    """
    R = Re + cfg.ds
    d_lo, d_hi = overlap_support(cfg, Re)
    grid = np.linspace(d_lo + 1e-9, d_hi - 1e-9, n_grid)
    statuses: list[dict] = []
    implicated: set[str] = set()
    negative_points = 0
    error_points = 0
    values = np.zeros(n_grid)
    for i, D in enumerate(grid):
        entry: dict = {"D": float(D)}
        try:
            value, diag = _eq4_literal_raw(D, cfg, R, Re)
            entry["status"] = "negative" if diag["negative"] else "ok"
            entry["value"] = value
            values[i] = value
            if diag["negative"]:
                negative_points += 1
        except SigmaSingularityError as exc:
            entry["status"] = "error"
            entry["error"] = str(exc)
            implicated.update(f"sigma_{i}" for i in exc.implicates)
            error_points += 1
        statuses.append(entry)

    # dimensional inconsistencies visible from the formulas themselves
    structural = {
        "sigma_9": "tan applied to a sum of cosines (dimensionless, not an angle)",
        "sigma_11": "tan applied to a difference of cosines (dimensionless, not an angle)",
        "sigma_5": "integration bound proportional to sigma_9",
        "sigma_8": "integration bound proportional to sigma_11",
    }

    finite = np.isfinite(values)
    literal_mass = float(np.trapezoid(np.maximum(values[finite], 0.0), grid[finite])) if finite.any() else float("nan")
    lens_mass, _ = integrate.quad(
        lambda x: _lens_pdf(x, cfg, Re), d_lo, d_hi,
        epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=300,
    )
    return {
        "support": (d_lo, d_hi),
        "config": {
            "Ns": cfg.Ns,
            "ds": cfg.ds,
            "theta_m1": cfg.theta_m1,
            "theta_m2": cfg.theta_m2,
            "ground_separation_d": cfg.ground_separation_d,
        },
        "points": statuses,
        "n_grid": n_grid,
        "n_negative": negative_points,
        "n_error": error_points,
        "implicated_sigma_terms": sorted(implicated),
        "structural_issues": structural,
        "literal_mass_clamped": literal_mass,
        "lens_mass": float(lens_mass),
    }


def render_discrepancy_markdown(report: dict) -> str:
    """Human-readable markdown rendering of :func:`eq4_discrepancy_report`."""
    cfg = report["config"]
    lines = [
        "# Contact-distance PDF: literal transcription diagnosis",
        "",
        "The published eighteen-sigma expression for the overlap contact-distance",
        "PDF was evaluated literally (with the sigma-17 value read as a cosine and",
        "acos applied wherever a trigonometric function needs the angle) and",
        "checked against the empirically validated cap-intersection variant",
        '(``method="lens"``).',
        "",
        f"Configuration: Ns={cfg['Ns']}, ds={cfg['ds']} km, "
        f"theta_m1={cfg['theta_m1']:.6f} rad, theta_m2={cfg['theta_m2']:.6f} rad, "
        f"gateway chord={cfg['ground_separation_d']} km.",
        f"Support: [{report['support'][0]:.1f}, {report['support'][1]:.1f}] km.",
        "",
        "## Outcome",
        "",
        f"- grid points evaluated: {report['n_grid']}",
        f"- evaluation errors: {report['n_error']}",
        f"- negative density values: {report['n_negative']}",
        f"- sigma terms implicated by evaluation failures: "
        f"{', '.join(report['implicated_sigma_terms']) or 'none'}",
        f"- clamped literal mass over the support: {report['literal_mass_clamped']!r}",
        f"- lens-variant mass (reference, equals 1 - P(empty overlap)): "
        f"{report['lens_mass']:.6f}",
        "",
        "## Structural inconsistencies in the published terms",
        "",
    ]
    for name, issue in report["structural_issues"].items():
        lines.append(f"- **{name}**: {issue}")
    lines += [
        "",
        "## Sample of failing evaluations",
        "",
    ]
    shown = 0
    for entry in report["points"]:
        if entry["status"] == "error" and shown < 5:
            lines.append(f"- D = {entry['D']:.1f} km: {entry['error']}")
            shown += 1
    lines += [
        "",
        "The Monte Carlo histogram oracle is the arbiter: the lens variant",
        "passes the 50-bin chi-square check against one million simulated",
        "nearest-in-overlap distances, while the literal transcription cannot be",
        "evaluated across the support because its integration bounds (driven by",
        "the tan-of-cosine terms sigma_9/sigma_11 through sigma_5/sigma_8) fall",
        "outside the domain of the sigma_10 integrand.  The literal form is kept",
        'available as ``contact_pdf_overlap(..., method="paper")`` for',
        "inspection; quantitative work should use the lens variant.",
        "",
    ]
    return "\n".join(lines)
