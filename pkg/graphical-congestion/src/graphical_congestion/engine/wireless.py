"""Spectrum sharing between transmitter/receiver links as a congestion game.

Transmitters are dropped uniformly on an L x L square, each receiver
uniformly in the 100 m disk around its own transmitter. Interference from
link m on link n is the received power ``P_m / d(tx_m, rx_n)^alpha`` and
each link's payoff is its Shannon rate on the chosen channel. Receivers may
fall outside the square; only distances matter.

Units: metres, mW, Hz, mW/Hz; payoffs in bits/s.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from dataclasses_json import DataClassJsonMixin, config

from ..errors import InvalidGameError, WirelessPlacementError
from ..interfaces import Game, SpatialMatrix, State
from ..payoffs.shannon import Shannon
from .game import payoff_vector

logger = logging.getLogger(__name__)

DEFAULT_POWER_MW = 100.0
DEFAULT_BANDWIDTH_HZ = 20e6
DEFAULT_ALPHA = 4.0
DEFAULT_NOISE_DENSITY = 10**-17.4
RECEIVER_RADIUS_M = 100.0
MIN_SEPARATION_M = 1.0
MAX_REDRAWS = 10**4


@dataclass
class WirelessUser(DataClassJsonMixin):
    tx: List[float]
    rx: List[float]
    power_mw: float


@dataclass
class WirelessScenario(DataClassJsonMixin):
    region_length: float = field(metadata=config(field_name="L"))
    n_users: int = field(metadata=config(field_name="N"))
    n_channels: int = field(metadata=config(field_name="R"))
    alpha: float
    noise_density: float = field(metadata=config(field_name="tau0"))
    users: List[WirelessUser]
    bandwidth_hz: List[float]
    # per-user channel subsets; None means every channel for everybody
    available: Optional[List[List[int]]] = None

    def transmitters(self) -> np.ndarray:
        return np.array([u.tx for u in self.users], dtype=float)

    def receivers(self) -> np.ndarray:
        return np.array([u.rx for u in self.users], dtype=float)

    def distances(self) -> np.ndarray:
        """d[m, n] = distance from transmitter m to receiver n."""
        tx, rx = self.transmitters(), self.receivers()
        return np.linalg.norm(tx[:, None, :] - rx[None, :, :], axis=2)

    def gains(self) -> np.ndarray:
        return 1.0 / self.distances() ** self.alpha

    def spatial_matrix(self) -> SpatialMatrix:
        powers = np.array([u.power_mw for u in self.users], dtype=float)
        w = powers[:, None] * self.gains()
        np.fill_diagonal(w, 0.0)
        return SpatialMatrix(w)

    def game(self) -> Game:
        gains = self.gains()
        signal = [u.power_mw * gains[n, n] for n, u in enumerate(self.users)]

        def payoff_for(n: int, r: int) -> Shannon:
            return Shannon(self.bandwidth_hz[r - 1], signal[n], self.noise_density)

        return Game.build(self.spatial_matrix(), self.n_channels, payoff_for, self.available)


def _per_item(value: Union[float, Sequence[float]], count: int, name: str) -> List[float]:
    values = np.broadcast_to(np.asarray(value, dtype=float), (count,))
    if np.any(values <= 0):
        raise InvalidGameError(f"{name} must be positive")
    return values.tolist()


def _place_receiver(tx: np.ndarray, own: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    for _ in range(MAX_REDRAWS):
        u, turn = rng.random(2)
        radius = RECEIVER_RADIUS_M * np.sqrt(u)
        angle = 2.0 * np.pi * turn
        rx = own + radius * np.array([np.cos(angle), np.sin(angle)])
        if np.min(np.linalg.norm(tx - rx, axis=1)) >= MIN_SEPARATION_M:
            return rx
    logger.warning("no receiver position at least %g m from every transmitter after %d draws", MIN_SEPARATION_M, MAX_REDRAWS)
    raise WirelessPlacementError(f"Receiver placement failed after {MAX_REDRAWS} redraws")


def gen_wireless(
    n_users: int,
    n_channels: int,
    region_length: float,
    rng: np.random.Generator,
    power_mw: Union[float, Sequence[float]] = DEFAULT_POWER_MW,
    bandwidth_hz: Union[float, Sequence[float]] = DEFAULT_BANDWIDTH_HZ,
    alpha: float = DEFAULT_ALPHA,
    noise_density: float = DEFAULT_NOISE_DENSITY,
    available: Optional[Sequence[Sequence[int]]] = None,
) -> Tuple[WirelessScenario, Game]:
    """Random scenario and its game. All transmitters are placed before any receiver."""
    if region_length <= 0:
        raise InvalidGameError(f"Region length must be positive, got {region_length}")
    if n_users < 1 or n_channels < 1:
        raise InvalidGameError("Need at least one user and one channel")
    if alpha <= 0 or noise_density <= 0:
        raise InvalidGameError("alpha and noise_density must be positive")
    powers = _per_item(power_mw, n_users, "power_mw")
    bandwidths = _per_item(bandwidth_hz, n_channels, "bandwidth_hz")

    tx = rng.random((n_users, 2)) * region_length
    rx = np.array([_place_receiver(tx, tx[n], rng) for n in range(n_users)])
    users = [WirelessUser(tx[n].tolist(), rx[n].tolist(), powers[n]) for n in range(n_users)]
    scenario = WirelessScenario(
        region_length=float(region_length),
        n_users=n_users,
        n_channels=n_channels,
        alpha=float(alpha),
        noise_density=float(noise_density),
        users=users,
        bandwidth_hz=bandwidths,
        available=[list(rs) for rs in available] if available is not None else None,
    )
    return scenario, scenario.game()


def interference_asymmetry(spatial: SpatialMatrix) -> float:
    """Mean over linked ordered pairs of |S[m, n] - S[n, m]| / max(S[m, n], S[n, m])."""
    w = spatial.weights
    larger = np.maximum(w, w.T)
    linked = (larger > 0) & ~np.eye(spatial.n_players, dtype=bool)
    if not linked.any():
        return 0.0
    return float(np.mean(np.abs(w - w.T)[linked] / larger[linked]))


def mean_transmission_rate(game: Game, state: State) -> float:
    """Average Shannon rate over users at ``state``, in Mbps."""
    return float(np.mean(payoff_vector(game, state))) / 1e6
