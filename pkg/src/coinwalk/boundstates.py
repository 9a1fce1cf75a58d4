"""Closed-form boundary modes and finite-block energy conditions.

Where two ring regions with opposite sgn(sin theta) meet, the walk hosts a
pair of bound states pinned to quasi-energies E = 0 and E = pi.  Their
tails are evanescent plane waves: the real momentum k of the bulk spinor
is continued to i*kappa (or pi + i*kappa when cos E and cos theta have
opposite signs), with the decay constant tied to the energy by

    cos E = cos(theta_1) cosh(kappa_1) = cos(theta_2) cosh(kappa_2).

For a finite block of N+1 sites with angle theta2 between exteriors of
angle theta1 (equal on both sides), the two end modes hybridize and the
energies move off 0 and pi; the quantization condition is

    sinh[k2 (N+1)] (sin^2 E - sin t1 sin t2)
        = cosh[k2 (N+1)] cos t1 cos t2 sinh k1 sinh k2,

which after eliminating kappa_1 also covers reflecting ends theta1 = pi/2.
With theta_3 = -theta_1 on one exterior instead (one net jump), the
condition is satisfied identically at sin E = 0 and the E = 0, pi modes
survive at any block length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bulk
from .lattice import (
    CoinProfile,
    WalkerState,
    _check_angle,
    build_profile,
    ring_coordinates,
)

REASON_OPPOSITE = "opposite-sign-ok"
REASON_SAME_SIGN = "same-sign-no-bound-state"
REASON_GAP_CLOSED = "gap-closed"

_TAIL_CEILING = 1e-10


@dataclass(frozen=True)
class ExistenceVerdict:
    exists: bool
    reason: str


@dataclass(frozen=True, eq=False)
class BoundStateSolution:
    """A materialized boundary mode on a ring.

    ``coefficients`` holds the ansatz weights: (r, t) for a single boundary,
    (A, B, C, D) for a two-boundary block.  ``seam`` is the ring bond where
    the layout wraps; the eigenvector property holds to machine precision
    everywhere farther than one site from it.
    """

    energy: float
    kappa1: float
    kappa2: float
    coefficients: tuple[complex, ...]
    configuration: str
    wavefunction: WalkerState
    profile: CoinProfile
    seam: tuple[int, int]


def _energy_family(energy: float) -> float:
    if abs(energy) <= 1e-12:
        return 0.0
    if abs(energy - np.pi) <= 1e-12:
        return float(np.pi)
    raise ValueError("closed-form boundary modes exist only at quasi-energy 0 or pi")


def _require_open_gap(*thetas: float) -> None:
    for theta in thetas:
        if abs(np.sin(theta)) < bulk.GAP_TOL:
            raise bulk.GapClosedError("gap closes at sin(theta) = 0")


def decay_constant(theta: float, energy: float) -> float:
    """Decay constant of a boundary-mode tail at quasi-energy 0 or pi.

    Solves |cos E| = |cos theta| cosh(kappa); equivalently
    exp(kappa) = (1 + |sin theta|) / |cos theta|, which condenses the two
    sign branches of the e^kappa formulas (the branch with kappa > 0).
    """
    theta = _check_angle(theta)
    _energy_family(energy)
    s, c = abs(np.sin(theta)), abs(np.cos(theta))
    if s < bulk.GAP_TOL:
        raise bulk.GapClosedError("decay constant diverges from kappa = 0 at sin(theta) = 0")
    if c < 1e-12:
        raise ValueError("theta = +/- pi/2 is a hard wall (kappa = infinity)")
    return float(np.log((1.0 + s) / c))


def single_boundary_existence(theta1: float, theta2: float) -> ExistenceVerdict:
    """Bound states exist at a boundary iff sin(theta1) and sin(theta2) differ in sign."""
    _check_angle(theta1)
    _check_angle(theta2)
    s1, s2 = np.sin(theta1), np.sin(theta2)
    if abs(s1) < bulk.GAP_TOL or abs(s2) < bulk.GAP_TOL:
        return ExistenceVerdict(False, REASON_GAP_CLOSED)
    if np.sign(s1) != np.sign(s2):
        return ExistenceVerdict(True, REASON_OPPOSITE)
    return ExistenceVerdict(False, REASON_SAME_SIGN)


def single_boundary_condition_residual(
    theta1: float, theta2: float, energy: float, kappa1: float, kappa2: float
) -> complex:
    """Determinant condition for a nontrivial (r, t) at a single boundary.

    Returns i sin E - [sin t2 cos t1 sinh k1 + sin t1 cos t2 sinh k2] /
    (sin t1 - sin t2); zero exactly when the two matching equations admit a
    nonzero solution.
    """
    _check_angle(theta1)
    _check_angle(theta2)
    if kappa1 <= 0 or kappa2 <= 0:
        raise ValueError("decay constants must be positive")
    s1, s2 = np.sin(theta1), np.sin(theta2)
    if abs(s1 - s2) < 1e-14:
        raise ValueError("condition undefined at sin(theta1) = sin(theta2)")
    bracket = s2 * np.cos(theta1) * np.sinh(kappa1) + s1 * np.cos(theta2) * np.sinh(kappa2)
    return 1j * np.sin(energy) - bracket / (s1 - s2)


def _kappa_from_energy(theta: float, energy: float) -> float:
    """Invert cosh(kappa) = |cos E / cos theta|; requires the ratio >= 1."""
    c = abs(np.cos(theta))
    if c < 1e-15:
        raise ValueError("theta = +/- pi/2 has no finite decay constant")
    ratio = abs(np.cos(energy)) / c
    if ratio < 1.0:
        raise ValueError("quasi-energy outside the bound-state window (cosh kappa < 1)")
    return float(np.arccosh(ratio))


def symmetric_condition_residual(
    theta1: float, theta2: float, energy: float, block_length: int
) -> float:
    """LHS - RHS of the equal-exterior quantization condition; roots are bound-state energies."""
    _check_angle(theta1)
    _check_angle(theta2)
    if abs(np.cos(theta1)) < 1e-12:
        raise ValueError("use wire_condition_residual for reflecting ends theta1 = +/- pi/2")
    k1 = _kappa_from_energy(theta1, energy)
    k2 = _kappa_from_energy(theta2, energy)
    span = k2 * (int(block_length) + 1)
    s1, s2 = np.sin(theta1), np.sin(theta2)
    lhs = np.sinh(span) * (np.sin(energy) ** 2 - s1 * s2)
    rhs = np.cosh(span) * np.cos(theta1) * np.cos(theta2) * np.sinh(k1) * np.sinh(k2)
    return float(lhs - rhs)


def wire_condition_residual(
    theta1: float, theta2: float, energy: float, block_length: int
) -> float:
    """Equal-exterior condition with kappa_1 eliminated; valid at theta1 = +/- pi/2.

    cos(theta1) sinh(kappa1) is replaced by sqrt(cos^2 E - cos^2 theta1),
    so the residual needs cos^2 E >= cos^2 theta1.
    """
    _check_angle(theta1)
    _check_angle(theta2)
    root_arg = np.cos(energy) ** 2 - np.cos(theta1) ** 2
    if root_arg < -1e-15:
        raise ValueError("quasi-energy outside the window: cos^2 E < cos^2 theta1")
    k2 = _kappa_from_energy(theta2, energy)
    span = k2 * (int(block_length) + 1)
    s1, s2 = np.sin(theta1), np.sin(theta2)
    lhs = np.sinh(span) * (np.sin(energy) ** 2 - s1 * s2)
    rhs = np.cosh(span) * np.cos(theta2) * np.sinh(k2) * np.sqrt(max(root_arg, 0.0))
    return float(lhs - rhs)


def antisymmetric_condition_residual(
    theta1: float, theta2: float, energy: float, block_length: int
) -> float:
    """Flipped-exterior condition: sin E (cos t1 sinh k1 tanh[k2(N+1)] + cos t2 sinh k2).

    Vanishes identically at E = 0 and E = pi, where sin E = 0.
    """
    _check_angle(theta1)
    _check_angle(theta2)
    k1 = _kappa_from_energy(theta1, energy)
    k2 = _kappa_from_energy(theta2, energy)
    span = k2 * (int(block_length) + 1)
    bracket = np.cos(theta1) * np.sinh(k1) * np.tanh(span) + np.cos(theta2) * np.sinh(k2)
    # float(pi) stands for exact pi here, where the factor vanishes identically
    sin_e = 0.0 if min(abs(energy), abs(energy - np.pi), abs(energy + np.pi)) < 1e-12 else np.sin(energy)
    return float(sin_e * bracket)


def infinite_wire_limit(theta1: float, theta2: float) -> tuple[float, float]:
    """Decay constants of the E = 0, pi modes when the block length goes to infinity.

    sinh(kappa_1) = |tan theta_1| and sinh(kappa_2) = |tan theta_2|; defined
    only for opposite-sign angle pairs.
    """
    verdict = single_boundary_existence(theta1, theta2)
    if verdict.reason == REASON_GAP_CLOSED:
        raise bulk.GapClosedError("gap closes at sin(theta) = 0")
    if not verdict.exists:
        raise ValueError("infinite-block limit requires opposite-sign angles")
    return (
        float(np.arcsinh(abs(np.tan(theta1)))),
        float(np.arcsinh(abs(np.tan(theta2)))),
    )


def splitting_decay_rate(theta2: float) -> float:
    """Rate kappa_2 of the exp(-kappa_2 N) end-mode splitting in a finite block."""
    theta2 = _check_angle(theta2)
    if abs(np.sin(theta2)) < bulk.GAP_TOL or abs(np.cos(theta2)) < 1e-12:
        raise ValueError("splitting rate undefined at theta2 in {0, +/-pi/2, pi}")
    return float(-np.log(abs((1.0 - np.sign(theta2) * np.sin(theta2)) / np.cos(theta2))))


# --- evanescent-momentum machinery for materialized modes ---------------------


def _branch_sign(theta: float, energy: float) -> float:
    """+1 for purely imaginary momentum, -1 for the pi-shifted class."""
    return 1.0 if np.cos(energy) * np.cos(theta) > 0 else -1.0


def _evanescent(theta: float, energy: float, decaying: bool) -> tuple[complex, float]:
    """Return (z, kappa) with z = e^{ik}; |z| < 1 decays toward n = +infinity."""
    kappa = _kappa_from_energy(theta, energy)
    sign = _branch_sign(theta, energy)
    z = sign * np.exp(-kappa if decaying else kappa)
    return complex(z), kappa


def _spinor_at(theta: float, z: complex, energy: float) -> np.ndarray:
    return bulk.eigenspinor_raw(theta, -1j * np.log(complex(z)), energy)


def _site_of(coordinate: int, length: int, offset: int) -> int:
    return (offset + coordinate) % length


def _seam_sites(coords: np.ndarray, length: int, offset: int) -> tuple[int, int]:
    return (
        _site_of(int(coords.max()), length, offset),
        _site_of(int(coords.min()), length, offset),
    )


def _materialize(
    coords: np.ndarray, pieces, length: int, offset: int
) -> tuple[np.ndarray, tuple[int, int]]:
    """Evaluate region amplitude rules over the ring and enforce tiny seam tails."""
    amp = np.zeros((length, 2), dtype=complex)
    for mask, rule in pieces:
        idx = np.nonzero(mask)[0]
        for m in idx:
            amp[m] = rule(int(coords[m]))
    seam = _seam_sites(coords, length, offset)
    peak = np.max(np.abs(amp))
    if peak == 0:
        raise ValueError("mode construction produced the zero vector")
    seam_mag = float(np.max(np.abs(amp[list(seam)])))
    if seam_mag / peak > _TAIL_CEILING:
        raise ValueError(
            "ring too small: mode tails do not decay below "
            f"{_TAIL_CEILING} before the layout seam"
        )
    return amp, seam


def single_boundary_mode(
    theta1: float,
    theta2: float,
    energy: float,
    length: int,
    offset: int | None = None,
) -> BoundStateSolution:
    """Bound state at a single boundary (theta1 at n <= 0, theta2 at n >= 1).

    Materializes the two-tail ansatz psi(n) = r z1^n chi1 (n <= 0),
    t z2^n chi2 (n >= 1) on a ring, normalized once.  For the sign case
    theta1 > 0 > theta2 at E = 0 this reduces to the geometric form
    x^(n-1) (x, -1) with x = (1 + sin theta)/cos theta per region; the
    opposite orientation comes out of the same construction.
    """
    energy = _energy_family(energy)
    verdict = single_boundary_existence(theta1, theta2)
    if verdict.reason == REASON_GAP_CLOSED:
        raise bulk.GapClosedError("no bound state: band gap closed")
    if not verdict.exists:
        raise ValueError("no bound state: sin(theta1) and sin(theta2) share a sign")
    length = int(length)
    offset = length // 4 if offset is None else int(offset) % length

    z1, kappa1 = _evanescent(theta1, energy, decaying=False)
    z2, kappa2 = _evanescent(theta2, energy, decaying=True)
    chi1 = _spinor_at(theta1, z1, energy)
    chi2 = _spinor_at(theta2, z2, energy)
    # Left-component matching at n = 0 fixes (r, t); the right-component
    # matching at n = 1 then holds because the existence condition is met.
    r, t = chi2[0], chi1[0]

    coords = ring_coordinates(length, offset, centered=True)
    pieces = (
        (coords <= 0, lambda n: r * z1**n * chi1),
        (coords >= 1, lambda n: t * z2**n * chi2),
    )
    amp, seam = _materialize(coords, pieces, length, offset)
    amp = amp / np.linalg.norm(amp)
    profile = build_profile("single", length, theta1, theta2, offset=offset)
    return BoundStateSolution(
        energy=energy,
        kappa1=kappa1,
        kappa2=kappa2,
        coefficients=(complex(r), complex(t)),
        configuration="single",
        wavefunction=WalkerState.from_amplitudes(amp.reshape(-1)),
        profile=profile,
        seam=seam,
    )


def antisymmetric_mode(
    theta1: float,
    theta2: float,
    energy: float,
    block_length: int,
    length: int,
    offset: int | None = None,
) -> BoundStateSolution:
    """E = 0 or pi mode of the flipped-exterior block layout.

    Ansatz weights A = sin(theta1), B = 0, D = sin(theta2) and
    C = -sin(theta2) (s1 s2)^(N+1) e^{(kappa1-kappa2)(N+1)}, where s_i are
    the momentum-class signs; with B = 0 the mode sits at the n = 0 jump.
    """
    energy = _energy_family(energy)
    verdict = single_boundary_existence(theta1, theta2)
    if verdict.reason == REASON_GAP_CLOSED:
        raise bulk.GapClosedError("no bound state: band gap closed")
    if not verdict.exists:
        raise ValueError("no bound state: sin(theta1) and sin(theta2) share a sign")
    length = int(length)
    n_block = int(block_length)
    offset = length // 4 if offset is None else int(offset) % length
    theta3 = _check_angle(-theta1)

    z1g, kappa1 = _evanescent(theta1, energy, decaying=False)
    z2d, kappa2 = _evanescent(theta2, energy, decaying=True)
    z2g, _ = _evanescent(theta2, energy, decaying=False)
    z3d, _ = _evanescent(theta3, energy, decaying=True)
    chi1 = _spinor_at(theta1, z1g, energy)
    chi2d = _spinor_at(theta2, z2d, energy)
    chi2g = _spinor_at(theta2, z2g, energy)
    chi3 = _spinor_at(theta3, z3d, energy)

    sign1 = _branch_sign(theta1, energy)
    sign2 = _branch_sign(theta2, energy)
    coeff_a = complex(np.sin(theta1))
    coeff_b = 0j
    coeff_d = complex(np.sin(theta2))
    coeff_c = complex(-np.sin(theta2) * (sign1 * sign2) ** (n_block + 1)
                      * np.exp((kappa1 - kappa2) * (n_block + 1)))
    # Folded form of C z3^n, safe against large exp((kappa1-kappa2)(N+1)).
    c_scale = -np.sin(theta2) * sign2 ** (n_block + 1) * np.exp(-kappa2 * (n_block + 1))

    coords = ring_coordinates(length, offset, centered=True)
    pieces = (
        (coords < 0, lambda n: coeff_d * z1g**n * chi1),
        (
            (coords >= 0) & (coords <= n_block),
            lambda n: coeff_a * z2d**n * chi2d + coeff_b * z2g**n * chi2g,
        ),
        (
            coords > n_block,
            lambda n: c_scale
            * sign1 ** (n_block + 1 + n)
            * np.exp(-kappa1 * (n - n_block - 1))
            * chi3,
        ),
    )
    amp, seam = _materialize(coords, pieces, length, offset)
    amp = amp / np.linalg.norm(amp)
    profile = build_profile(
        "antisymmetric", length, theta1, theta2, wire_length=n_block, offset=offset
    )
    return BoundStateSolution(
        energy=energy,
        kappa1=kappa1,
        kappa2=kappa2,
        coefficients=(coeff_a, coeff_b, coeff_c, coeff_d),
        configuration="antisymmetric",
        wavefunction=WalkerState.from_amplitudes(amp.reshape(-1)),
        profile=profile,
        seam=seam,
    )
