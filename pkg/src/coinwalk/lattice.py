"""Ring lattice model and one-step evolution of a two-component walker.

The walker carries a two-dimensional internal (left/right) state at each of
L ring sites.  One time step applies a site-dependent coin rotation

    C(theta) = [[cos theta,  sin theta],
                [-sin theta, cos theta]]

to every internal doublet and then a conditional shift that moves left
components one site leftward and right components one site rightward, with
periodic wrap.  Composite step: U = S C (coin first, shift second).

Amplitudes are stored as one flat interleaved complex vector
(a0, b0, a1, b1, ...) so that the step is exactly the 2L x 2L matrix
assembled by ``spectral.build_unitary``.

Named coin layouts are mapped onto the ring through an integer ``offset``:
the site carrying layout coordinate n sits at ring index (offset + n) % L.
Layouts with two unequal exterior angles close the ring with a seam on the
far side of the boundary, placed so both exponential tails of a boundary
mode have maximal room.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROFILE_KINDS = ("uniform", "single", "symmetric", "antisymmetric", "wire")

_NORM_GUARD = 1e-9


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not np.isfinite(theta) or abs(theta) > np.pi + 1e-12:
        raise ValueError(f"coin angle must lie in [-pi, pi], got {theta!r}")
    return theta


def coin_matrix(theta: float) -> np.ndarray:
    """Return the 2x2 coin rotation [[c, s], [-s, c]] with c=cos(theta), s=sin(theta)."""
    theta = _check_angle(theta)
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=complex)


@dataclass(frozen=True, eq=False)
class CoinProfile:
    """Assignment of one coin angle to every site of the ring.

    ``regions`` is optional metadata: maximal runs of equal angle as
    half-open ring segments (start, stop, theta) that tile [0, L).
    """

    angles: np.ndarray
    regions: tuple[tuple[int, int, float], ...] | None = None

    def __post_init__(self):
        arr = np.array(self.angles, dtype=float, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("profile needs a one-dimensional, non-empty angle array")
        if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > np.pi + 1e-12):
            raise ValueError("all coin angles must be finite and lie in [-pi, pi]")
        arr.setflags(write=False)
        object.__setattr__(self, "angles", arr)
        if self.regions is not None:
            regs = tuple((int(a), int(b), float(t)) for a, b, t in self.regions)
            self._check_regions(regs)
            object.__setattr__(self, "regions", regs)

    def _check_regions(self, regs) -> None:
        length = self.angles.size
        cursor = 0
        for start, stop, theta in sorted(regs):
            if start != cursor or stop <= start:
                raise ValueError("region descriptors must tile [0, L) without overlap")
            if not np.allclose(self.angles[start:stop], theta, atol=1e-15):
                raise ValueError("region descriptor disagrees with the angle array")
            cursor = stop
        if cursor != length:
            raise ValueError("region descriptors must cover the whole ring")

    @property
    def length(self) -> int:
        return int(self.angles.size)


def _runs(angles: np.ndarray) -> tuple[tuple[int, int, float], ...]:
    """Maximal runs of equal angle, as half-open segments tiling [0, L)."""
    breaks = [0] + [i for i in range(1, angles.size) if angles[i] != angles[i - 1]]
    breaks.append(angles.size)
    return tuple(
        (breaks[j], breaks[j + 1], float(angles[breaks[j]]))
        for j in range(len(breaks) - 1)
    )


def ring_coordinates(length: int, offset: int, centered: bool) -> np.ndarray:
    """Layout coordinate n of every ring site; site (offset + n) % L has coordinate n.

    ``centered`` selects n in [-L//2, L - L//2); otherwise n in [0, L).
    """
    sites = np.arange(length)
    if centered:
        return ((sites - offset + length // 2) % length) - length // 2
    return (sites - offset) % length


def build_profile(
    kind: str,
    length: int,
    theta1: float,
    theta2: float | None = None,
    wire_length: int | None = None,
    offset: int | None = None,
) -> CoinProfile:
    """Assemble one of the named coin layouts on a ring of ``length`` sites.

    Parameters
    ----------
    kind:
        "uniform"        theta1 everywhere.
        "single"         theta1 at coordinates n <= 0, theta2 at n >= 1.
        "symmetric"      theta2 on the block n = 0..N (N = ``wire_length``),
                         theta1 on every other site (both exteriors equal).
        "antisymmetric"  theta2 on n = 0..N, -theta1 for n > N, theta1 for
                         n < 0; the compensating seam sits diametrically
                         opposite the n = 0 boundary.
        "wire"           symmetric layout with theta1 = +/- pi/2 (reflecting
                         end coins), i.e. a hard-walled finite wire.
    offset:
        Ring index of coordinate n = 0; defaults to length // 4.
    """
    if kind not in PROFILE_KINDS:
        raise ValueError(f"unknown profile kind {kind!r}; expected one of {PROFILE_KINDS}")
    length = int(length)
    if length < 2:
        raise ValueError("ring needs at least 2 sites")
    offset = length // 4 if offset is None else int(offset) % length
    theta1 = _check_angle(theta1)

    if kind == "uniform":
        angles = np.full(length, theta1)
        return CoinProfile(angles, regions=_runs(angles))

    if theta2 is None:
        raise ValueError(f"profile kind {kind!r} needs theta2")
    theta2 = _check_angle(theta2)

    if kind == "single":
        n = ring_coordinates(length, offset, centered=True)
        angles = np.where(n <= 0, theta1, theta2)
        return CoinProfile(angles, regions=_runs(angles))

    if wire_length is None:
        raise ValueError(f"profile kind {kind!r} needs wire_length")
    n_block = int(wire_length)
    if n_block < 0:
        raise ValueError("wire_length must be non-negative")
    if n_block + 1 >= length:
        raise ValueError("block of wire_length+1 sites leaves no exterior on the ring")

    if kind == "wire" and abs(abs(theta1) - np.pi / 2) > 1e-12:
        raise ValueError("wire layout requires theta1 = +/- pi/2")

    if kind in ("symmetric", "wire"):
        n = ring_coordinates(length, offset, centered=False)
        angles = np.where(n <= n_block, theta2, theta1)
        return CoinProfile(angles, regions=_runs(angles))

    # antisymmetric: exterior split between theta1 (n < 0) and -theta1
    # (n > N); the split point must stay clear of the block.
    if n_block > length // 2 - 2:
        raise ValueError("antisymmetric layout needs wire_length <= length//2 - 2")
    n = ring_coordinates(length, offset, centered=True)
    angles = np.where(
        n < 0, theta1, np.where(n <= n_block, theta2, _check_angle(-theta1))
    )
    return CoinProfile(angles, regions=_runs(angles))


@dataclass(frozen=True, eq=False)
class WalkerState:
    """Unit-norm two-component wavefunction, interleaved as (a0, b0, a1, b1, ...)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.array(self.amplitudes, dtype=complex, copy=True)
        if arr.ndim != 1 or arr.size == 0 or arr.size % 2:
            raise ValueError("amplitudes must be a flat interleaved array of even length")
        if not np.all(np.isfinite(arr.view(float))):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > _NORM_GUARD:
            raise ValueError(f"state norm {norm!r} is not 1 within {_NORM_GUARD}")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def length(self) -> int:
        return self.amplitudes.size // 2

    def spinors(self) -> np.ndarray:
        """Per-site view of shape (L, 2); column 0 is the left component."""
        return self.amplitudes.reshape(self.length, 2)

    @classmethod
    def from_amplitudes(cls, values, normalize: bool = False) -> "WalkerState":
        arr = np.asarray(values, dtype=complex)
        if normalize:
            norm = np.linalg.norm(arr)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            arr = arr / norm
        return cls(arr)


def delta_state(length: int, site: int, component: str = "left") -> WalkerState:
    """State fully localized at one site, in the left or right internal component."""
    if component not in ("left", "right"):
        raise ValueError("component must be 'left' or 'right'")
    amp = np.zeros(2 * int(length), dtype=complex)
    amp[2 * (int(site) % int(length)) + (component == "right")] = 1.0
    return WalkerState(amp)


def _split(state: WalkerState) -> tuple[np.ndarray, np.ndarray]:
    spin = state.spinors()
    return spin[:, 0], spin[:, 1]


def _join(a: np.ndarray, b: np.ndarray) -> WalkerState:
    out = np.empty(2 * a.size, dtype=complex)
    out[0::2] = a
    out[1::2] = b
    return WalkerState(out)


def _check_same_length(state: WalkerState, profile: CoinProfile) -> None:
    if state.length != profile.length:
        raise ValueError(
            f"state has {state.length} sites but profile has {profile.length}"
        )


def apply_coin(state: WalkerState, profile: CoinProfile) -> WalkerState:
    """Rotate every internal doublet by the local coin angle."""
    _check_same_length(state, profile)
    c, s = np.cos(profile.angles), np.sin(profile.angles)
    a, b = _split(state)
    return _join(c * a + s * b, -s * a + c * b)


def apply_shift(state: WalkerState) -> WalkerState:
    """Conditional translation: a'_n = a_{n+1}, b'_n = b_{n-1} (indices mod L)."""
    a, b = _split(state)
    return _join(np.roll(a, -1), np.roll(b, 1))


def step(state: WalkerState, profile: CoinProfile) -> WalkerState:
    """One full evolution step, coin followed by shift."""
    return apply_shift(apply_coin(state, profile))


def evolve(state: WalkerState, profile: CoinProfile, t: int) -> WalkerState:
    """Apply ``t`` steps; t = 0 returns the input state unchanged."""
    t = int(t)
    if t < 0:
        raise ValueError("step count must be non-negative")
    if t == 0:
        return state
    _check_same_length(state, profile)
    c, s = np.cos(profile.angles), np.sin(profile.angles)
    a, b = _split(state)
    a, b = a.copy(), b.copy()
    for _ in range(t):
        a, b = c * a + s * b, -s * a + c * b
        a = np.roll(a, -1)
        b = np.roll(b, 1)
    return _join(a, b)


def position_distribution(state: WalkerState) -> np.ndarray:
    """Site-resolved probability p_n = |a_n|^2 + |b_n|^2."""
    return np.abs(state.spinors()) ** 2 @ np.ones(2)
