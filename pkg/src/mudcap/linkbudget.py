"""Link budget of the mobile S-band return link: dB bookkeeping to transmit SNR."""

from dataclasses import dataclass

from .capacity import SnrPoint, SpectralEfficiency


@dataclass(frozen=True)
class LinkBudget:
    """Physical-layer budget of the return-link uplink (GEO S-band defaults)."""

    tx_power_dbw: float = 4.5
    tx_antenna_gain_db: float = 3.0
    max_sat_gain_dbi: float = 52.0
    free_space_loss_db: float = 190.0
    atmospheric_loss_db: float = 0.5
    fading_margin_db: float = 3.0
    noise_power_dbw: float = -133.0
    user_bandwidth_hz: float = 15e6

    def __post_init__(self):
        for name in ("free_space_loss_db", "atmospheric_loss_db", "fading_margin_db"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.user_bandwidth_hz > 0.0:
            raise ValueError(f"user_bandwidth_hz must be positive, got {self.user_bandwidth_hz}")


def transmit_snr(budget: LinkBudget, include_sat_gain: bool = False) -> SnrPoint:
    """Transmit SNR from the budget.

    gamma_dB = P_tx + G_tx - FSL - L_atm - margin - P_noise. Set
    `include_sat_gain` when the beam-gain matrix is normalized to unit
    peak, so the 52 dBi receive gain enters here instead of through B.
    """
    gamma_db = (
        budget.tx_power_dbw
        + budget.tx_antenna_gain_db
        - budget.free_space_loss_db
        - budget.atmospheric_loss_db
        - budget.fading_margin_db
        - budget.noise_power_dbw
    )
    if include_sat_gain:
        gamma_db += budget.max_sat_gain_dbi
    return SnrPoint(gamma_db)


def throughput(se: SpectralEfficiency, budget: LinkBudget) -> float:
    """System throughput in bits/s: spectral efficiency times user bandwidth.

    Applied uniformly to every system, so cross-system throughput ratios
    equal spectral-efficiency ratios regardless of normalization.
    """
    return se.value * budget.user_bandwidth_hz
