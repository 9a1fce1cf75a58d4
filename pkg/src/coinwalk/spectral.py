"""Numerical machinery: exact diagonalization oracle and energy-equation roots.

The one-step operator of any coin layout is assembled as an explicit
2L x 2L unitary acting on the interleaved amplitude vector, and fully
diagonalized; quasi-energies are E = -arg(lambda) of the unit-circle
eigenvalues.  Localized states are separated from band states by the
inverse participation ratio sum_n p_n^2, which scales like 1/L for
extended states but stays O(tanh kappa) for bound states.

Bound-state energies of a finite block with reflecting ends are obtained
independently by bracketed root finding on the block quantization
condition, giving a dual route that cross-checks the closed-form modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import boundstates
from .lattice import CoinProfile, WalkerState, step
from .boundstates import BoundStateSolution

SIZE_CAP = 512


def build_unitary(profile: CoinProfile) -> np.ndarray:
    """Assemble the 2L x 2L one-step matrix; its action equals ``lattice.step``."""
    length = profile.length
    c, s = np.cos(profile.angles), np.sin(profile.angles)
    mat = np.zeros((2 * length, 2 * length), dtype=complex)
    for n in range(length):
        src_a = (n + 1) % length  # left component arrives from the right neighbor
        src_b = (n - 1) % length
        mat[2 * n, 2 * src_a] = c[src_a]
        mat[2 * n, 2 * src_a + 1] = s[src_a]
        mat[2 * n + 1, 2 * src_b] = -s[src_b]
        mat[2 * n + 1, 2 * src_b + 1] = c[src_b]
    return mat


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Eigen-decomposition of a one-step unitary, sorted by quasi-energy.

    ``vectors`` holds normalized eigenvectors as columns aligned with
    ``quasi_energies``; ``ipr`` is the inverse participation ratio of each
    eigenvector's position distribution.  ``indices`` point back into the
    ordering of the decomposition a subset was taken from.
    """

    quasi_energies: np.ndarray
    vectors: np.ndarray
    ipr: np.ndarray
    length: int
    indices: np.ndarray

    def state(self, i: int) -> WalkerState:
        return WalkerState.from_amplitudes(self.vectors[:, i], normalize=True)

    @property
    def count(self) -> int:
        return int(self.quasi_energies.size)


def diagonalize(profile: CoinProfile, size_cap: int = SIZE_CAP) -> SpectralResult:
    """Full eigen-decomposition of the one-step unitary for ``profile``.

    Eigenvalues are projected onto the unit circle before extracting
    E = -arg(lambda) in (-pi, pi]; a modulus off the circle by more than
    1e-10 is treated as an eigensolver failure.
    """
    if profile.length > size_cap:
        raise ValueError(f"ring size {profile.length} exceeds the dense-solver cap {size_cap}")
    mat = build_unitary(profile)
    eigenvalues, vectors = np.linalg.eig(mat)
    radii = np.abs(eigenvalues)
    if np.max(np.abs(radii - 1.0)) > 1e-10:
        raise RuntimeError("eigensolver failure: eigenvalues left the unit circle")
    energies = -np.angle(eigenvalues / radii)
    energies[energies == -np.pi] = np.pi
    order = np.argsort(energies)
    energies = energies[order]
    vectors = vectors[:, order]
    vectors = vectors / np.linalg.norm(vectors, axis=0, keepdims=True)
    site_prob = (np.abs(vectors) ** 2).reshape(profile.length, 2, -1).sum(axis=1)
    ipr = (site_prob**2).sum(axis=0)
    return SpectralResult(
        quasi_energies=energies,
        vectors=vectors,
        ipr=ipr,
        length=profile.length,
        indices=np.arange(energies.size),
    )


def circle_distance(energy, target: float):
    """Distance between quasi-energies on the 2-pi circle."""
    return np.abs(np.mod(np.asarray(energy) - target + np.pi, 2 * np.pi) - np.pi)


def find_bound_states(
    result: SpectralResult, target: float, ipr_threshold: float | None = None
) -> SpectralResult:
    """Localized eigenpairs nearest the target quasi-energy (0 or pi).

    Keeps states with IPR above the threshold (default 4/L) and, among
    those, the cluster at minimal circle distance from the target, so both
    members of a split pair are returned.  No localized states is an empty
    result, not an error.
    """
    threshold = 4.0 / result.length if ipr_threshold is None else float(ipr_threshold)
    localized = np.nonzero(result.ipr > threshold)[0]
    if localized.size == 0:
        keep = localized
    else:
        dist = circle_distance(result.quasi_energies[localized], target)
        keep = localized[dist <= dist.min() + 1e-6]
    return SpectralResult(
        quasi_energies=result.quasi_energies[keep],
        vectors=result.vectors[:, keep],
        ipr=result.ipr[keep],
        length=result.length,
        indices=result.indices[keep],
    )


def _energy_window(theta1: float, theta2: float) -> float:
    """Upper edge of the near-zero bound-state window in E."""
    return min(
        abs(theta1), np.pi - abs(theta1), abs(theta2), np.pi - abs(theta2)
    )


def solve_wire_energy(
    theta1: float, theta2: float, block_length: int, family: str = "near-0"
) -> float:
    """Bound-state energy of a finite block from the quantization condition.

    Brackets the root of ``wire_condition_residual`` inside the window
    (0, E_max) and solves it to 1e-12 absolute; the near-pi partner is
    pi - E by the spectral mirror symmetry.  ``theta1`` may be +/- pi/2
    (reflecting ends) or any gapped angle of opposite sign to ``theta2``.
    """
    if family not in ("near-0", "near-pi"):
        raise ValueError("family must be 'near-0' or 'near-pi'")
    verdict = boundstates.single_boundary_existence(theta1, theta2)
    if not verdict.exists:
        raise ValueError(f"no bound states to solve for: {verdict.reason}")

    def residual(energy: float) -> float:
        return boundstates.wire_condition_residual(theta1, theta2, energy, block_length)

    lo = 1e-12
    hi = _energy_window(theta1, theta2) * (1.0 - 1e-9)
    f_lo, f_hi = residual(lo), residual(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise RuntimeError("no sign change in the bound-state window; no bracketed root")
    root = brentq(residual, lo, hi, xtol=1e-12, maxiter=200)
    return float(np.pi - root) if family == "near-pi" else float(root)


@dataclass(frozen=True)
class SplittingFit:
    """Least-squares fit of ln E versus block length."""

    slope: float
    intercept: float
    r_squared: float
    kappa2_predicted: float


def fit_splitting_decay(theta2: float, block_lengths) -> SplittingFit:
    """Fit the exponential decay of the end-mode splitting against block length.

    Solves the reflecting-end block (theta1 = -pi/2) for every N in
    ``block_lengths`` and fits ln E = intercept + slope * N; the slope
    estimates -kappa_2.
    """
    lengths = [int(n) for n in block_lengths]
    if len(lengths) < 4:
        raise ValueError("need at least 4 block lengths for a meaningful fit")
    energies = np.array(
        [solve_wire_energy(-np.pi / 2, theta2, n) for n in lengths], dtype=float
    )
    x = np.asarray(lengths, dtype=float)
    y = np.log(energies)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = intercept + slope * x
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return SplittingFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        kappa2_predicted=boundstates.splitting_decay_rate(theta2),
    )


def oracle_compare(
    analytic: BoundStateSolution,
    profile: CoinProfile,
    energy_window: float = 1e-6,
    result: SpectralResult | None = None,
) -> float:
    """Fidelity of a closed-form mode against the exact-diagonalization oracle.

    Projects the analytic wavefunction onto the (possibly degenerate)
    eigenspace within ``energy_window`` of its quasi-energy and returns the
    squared projection norm.  Raises when no eigenvector lies in the window.
    """
    if analytic.wavefunction.length != profile.length:
        raise ValueError("analytic solution and profile live on different rings")
    if result is None:
        result = diagonalize(profile)
    sel = np.nonzero(circle_distance(result.quasi_energies, analytic.energy) < energy_window)[0]
    if sel.size == 0:
        raise RuntimeError("no eigenvector matches the analytic quasi-energy")
    basis, _ = np.linalg.qr(result.vectors[:, sel])
    overlaps = basis.conj().T @ analytic.wavefunction.amplitudes
    return float(np.real(np.vdot(overlaps, overlaps)))


def mode_residual(solution: BoundStateSolution) -> float:
    """Max-norm of U psi - e^{-iE} psi, skipping sites within 1 of the layout seam."""
    mat = build_unitary(solution.profile)
    psi = solution.wavefunction.amplitudes
    residual = mat @ psi - np.exp(-1j * solution.energy) * psi
    length = solution.profile.length
    excluded = set()
    for site in solution.seam:
        for shift in (-1, 0, 1):
            excluded.add((site + shift) % length)
    mask = np.ones(2 * length, dtype=bool)
    for site in excluded:
        mask[2 * site] = mask[2 * site + 1] = False
    return float(np.max(np.abs(residual[mask])))


def step_matrix_residual(profile: CoinProfile, state: WalkerState) -> float:
    """Elementwise gap between ``lattice.step`` and the assembled matrix action."""
    via_matrix = build_unitary(profile) @ state.amplitudes
    via_step = step(state, profile).amplitudes
    return float(np.max(np.abs(via_matrix - via_step)))
