"""Synthetic multichannel data with planted directed structure.

Realizes the cross-channel coupling graphs the analysis is meant to
detect: each channel is driven by Gaussian noise, optional self AR terms,
and lagged couplings from other channels. Generation is a pure function of
the spec (seed included), and specs whose companion matrix is not strictly
stable are rejected up front.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCouplingError, UnstableSpecError
from .series import EpochedSeries, MultichannelSeries

STABILITY_MARGIN = 1e-8
BURN_IN_FACTOR = 10


class Role(enum.Enum):
    SENDER = "sender"
    HUB = "hub"
    RECEIVER = "receiver"
    ISOLATED = "isolated"


@dataclass(frozen=True)
class Coupling:
    """Directed lagged influence: target gets coefficient * source[t - lag]."""

    source: int
    target: int
    lag: int
    coefficient: float


@dataclass(frozen=True)
class NetworkSpec:
    """Recipe for a simulated recording.

    ``self_coefficients[i]`` are channel i's own AR terms (lag 1 first).
    ``activation_window`` is a 1-based inclusive frame interval outside
    which cross-channel couplings are switched off; it requires epoched
    output (``n_epochs`` set). Self terms are never gated.
    """

    n_channels: int
    couplings: tuple[Coupling, ...] = ()
    noise_std: float = 1.0
    n_frames: int = 1000
    n_epochs: int | None = None
    seed: int = 0
    self_coefficients: tuple[tuple[float, ...], ...] | None = None
    activation_window: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "couplings", tuple(self.couplings))
        if self.self_coefficients is not None:
            object.__setattr__(
                self,
                "self_coefficients",
                tuple(tuple(float(a) for a in row) for row in self.self_coefficients),
            )

    @property
    def max_lag(self) -> int:
        lags = [c.lag for c in self.couplings]
        if self.self_coefficients is not None:
            lags.extend(len(row) for row in self.self_coefficients)
        return max(lags, default=1)


def _validate_spec(spec: NetworkSpec):
    nv = spec.n_channels
    if nv < 1:
        raise InvalidCouplingError("n_channels must be at least 1")
    if spec.noise_std <= 0:
        raise InvalidCouplingError("noise_std must be positive")
    if spec.n_frames < 1:
        raise InvalidCouplingError("n_frames must be at least 1")
    if spec.n_epochs is not None and spec.n_epochs < 2:
        raise InvalidCouplingError("n_epochs must be at least 2")
    for c in spec.couplings:
        if c.source == c.target:
            raise InvalidCouplingError(
                f"coupling {c} is a self loop; use self_coefficients instead"
            )
        if not (0 <= c.source < nv and 0 <= c.target < nv):
            raise InvalidCouplingError(f"coupling {c} references a missing channel")
        if c.lag < 1:
            raise InvalidCouplingError(f"coupling {c} must have lag >= 1")
        if not np.isfinite(c.coefficient):
            raise InvalidCouplingError(f"coupling {c} has a non-finite coefficient")
    if spec.self_coefficients is not None:
        if len(spec.self_coefficients) != nv:
            raise InvalidCouplingError(
                f"{len(spec.self_coefficients)} self-coefficient rows "
                f"for {nv} channels"
            )
        for i, row in enumerate(spec.self_coefficients):
            if not all(np.isfinite(a) for a in row):
                raise InvalidCouplingError(f"channel {i} has non-finite self terms")
    if spec.activation_window is not None:
        if spec.n_epochs is None:
            raise InvalidCouplingError(
                "activation_window requires epoched output (set n_epochs)"
            )
        a, b = spec.activation_window
        if not (1 <= a <= b <= spec.n_frames):
            raise InvalidCouplingError(
                f"activation_window {spec.activation_window} must lie "
                f"within frames 1..{spec.n_frames}"
            )


def coefficient_matrices(spec: NetworkSpec):
    """Per-lag coefficient matrices (self_terms, cross_terms).

    Each is a (max_lag, n, n) array with entry [k-1, target, source]
    multiplying source[t - k] in target's recursion.
    """
    nv, p = spec.n_channels, spec.max_lag
    self_terms = np.zeros((p, nv, nv))
    cross_terms = np.zeros((p, nv, nv))
    if spec.self_coefficients is not None:
        for i, row in enumerate(spec.self_coefficients):
            for k, a in enumerate(row, start=1):
                self_terms[k - 1, i, i] = a
    for c in spec.couplings:
        cross_terms[c.lag - 1, c.target, c.source] += c.coefficient
    return self_terms, cross_terms


def companion_spectral_radius(spec: NetworkSpec) -> float:
    """Spectral radius of the companion matrix of the full recursion."""
    self_terms, cross_terms = coefficient_matrices(spec)
    coefs = self_terms + cross_terms
    nv, p = spec.n_channels, spec.max_lag
    companion = np.zeros((nv * p, nv * p))
    companion[:nv, :] = np.concatenate([coefs[k] for k in range(p)], axis=1)
    if p > 1:
        companion[nv:, : nv * (p - 1)] = np.eye(nv * (p - 1))
    return float(np.abs(np.linalg.eigvals(companion)).max())


def generate(spec: NetworkSpec):
    """Simulate the recursion described by the spec.

    Stationary output discards a burn-in of ``10 * max_lag`` frames;
    epoched output draws independent noise per epoch, starts each epoch
    from zero initial lags, and gates cross couplings by the activation
    window when one is set. Deterministic per seed.

    Returns a MultichannelSeries, or an EpochedSeries when ``n_epochs``
    is set.
    """
    _validate_spec(spec)
    radius = companion_spectral_radius(spec)
    if radius >= 1.0 - STABILITY_MARGIN:
        raise UnstableSpecError(
            f"companion spectral radius {radius:.6f} is not strictly below 1"
        )
    rng = np.random.default_rng(spec.seed)
    self_terms, cross_terms = coefficient_matrices(spec)
    nv, p = spec.n_channels, spec.max_lag
    if spec.n_epochs is None:
        coefs = self_terms + cross_terms
        burn = BURN_IN_FACTOR * p
        total = burn + spec.n_frames
        noise = rng.standard_normal((nv, total)) * spec.noise_std
        u = np.zeros((nv, total))
        for t in range(total):
            acc = noise[:, t].copy()
            for k in range(1, min(p, t) + 1):
                acc += coefs[k - 1] @ u[:, t - k]
            u[:, t] = acc
        return MultichannelSeries(values=u[:, burn:])
    nt, ns = spec.n_frames, spec.n_epochs
    noise = rng.standard_normal((nv, nt, ns)) * spec.noise_std
    u = np.zeros((nv, nt, ns))
    window = spec.activation_window
    for t in range(nt):
        frame = t + 1  # 1-based
        active = window is None or (window[0] <= frame <= window[1])
        acc = noise[:, t, :].copy()
        for k in range(1, min(p, t) + 1):
            acc += self_terms[k - 1] @ u[:, t - k, :]
            if active:
                acc += cross_terms[k - 1] @ u[:, t - k, :]
        u[:, t, :] = acc
    return EpochedSeries(values=u)


def expected_roles(spec: NetworkSpec) -> dict[int, Role]:
    """Role each channel should play, from the coupling graph alone.

    Outgoing couplings only: sender. Incoming only: receiver. Both: hub.
    Neither: isolated.
    """
    _validate_spec(spec)
    sources = {c.source for c in spec.couplings}
    targets = {c.target for c in spec.couplings}
    roles = {}
    for i in range(spec.n_channels):
        if i in sources and i in targets:
            roles[i] = Role.HUB
        elif i in sources:
            roles[i] = Role.SENDER
        elif i in targets:
            roles[i] = Role.RECEIVER
        else:
            roles[i] = Role.ISOLATED
    return roles


def spec_to_dict(spec: NetworkSpec) -> dict:
    """JSON-ready form of a spec; inverse of :func:`spec_from_dict`."""
    return {
        "n_channels": spec.n_channels,
        "couplings": [
            {
                "source": c.source,
                "target": c.target,
                "lag": c.lag,
                "coefficient": c.coefficient,
            }
            for c in spec.couplings
        ],
        "self_coefficients": (
            None
            if spec.self_coefficients is None
            else [list(row) for row in spec.self_coefficients]
        ),
        "noise_std": spec.noise_std,
        "n_frames": spec.n_frames,
        "n_epochs": spec.n_epochs,
        "seed": spec.seed,
        "activation_window": (
            None if spec.activation_window is None else list(spec.activation_window)
        ),
    }


def spec_from_dict(data: dict) -> NetworkSpec:
    """Parse a spec from its JSON form, rejecting unknown keys."""
    known = {
        "n_channels",
        "couplings",
        "self_coefficients",
        "noise_std",
        "n_frames",
        "n_epochs",
        "seed",
        "activation_window",
    }
    unknown = set(data) - known
    if unknown:
        raise InvalidCouplingError(f"unknown spec fields: {sorted(unknown)}")
    try:
        couplings = tuple(
            Coupling(
                source=int(c["source"]),
                target=int(c["target"]),
                lag=int(c["lag"]),
                coefficient=float(c["coefficient"]),
            )
            for c in data.get("couplings", [])
        )
        window = data.get("activation_window")
        spec = NetworkSpec(
            n_channels=int(data["n_channels"]),
            couplings=couplings,
            noise_std=float(data.get("noise_std", 1.0)),
            n_frames=int(data.get("n_frames", 1000)),
            n_epochs=None if data.get("n_epochs") is None else int(data["n_epochs"]),
            seed=int(data.get("seed", 0)),
            self_coefficients=(
                None
                if data.get("self_coefficients") is None
                else tuple(tuple(float(a) for a in row) for row in data["self_coefficients"])
            ),
            activation_window=None if window is None else (int(window[0]), int(window[1])),
        )
    except (KeyError, TypeError, ValueError) as err:
        raise InvalidCouplingError(f"malformed network spec: {err}") from err
    _validate_spec(spec)
    return spec
