"""
Laboratory quantities to model rates.

Constants are CODATA 2018. The gyromagnetic ratio is taken in rad s^-1 T^-1,
so couplings and Rabi frequencies come out as angular rates (rad/s).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

MU_0 = 1.25663706212e-6  # T m / A
HBAR = 1.054571817e-34  # J s
C_LIGHT = 299792458.0  # m / s
GAMMA_E = 1.76085963023e11  # rad s^-1 T^-1

CONSTANTS = {"mu_0": MU_0, "hbar": HBAR, "c": C_LIGHT, "gamma_e": GAMMA_E}

# Illustrative lab defaults. DEFAULT_GAMMA is fitted so that Omega/gamma = 1e5
# at 1 uW with the default sample; it is not a measured linewidth.
DEFAULT_RHO1 = 4.22e27  # spins / m^3, YIG
DEFAULT_D1 = 1.0e-3  # m
DEFAULT_POWER = 1.0e-6  # W
DEFAULT_OMEGA_C = 2 * math.pi * 10e9  # rad/s
DEFAULT_V_C = 1.0e-6  # m^3
DEFAULT_N = 1.0e18


def _positive(**values: float) -> None:
    for name, value in values.items():
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"{name} must be positive and finite, got {value!r}")


def vacuum_field(omega_c: float, V_c: float) -> float:
    """Vacuum magnetic field sqrt(mu0 hbar omega_c / (2 V_c)) in tesla."""
    _positive(omega_c=omega_c, V_c=V_c)
    return math.sqrt(MU_0 * HBAR * omega_c / (2.0 * V_c))


def coupling_g(N_j: float, omega_c: float, V_c: float) -> float:
    """Collective magnon-photon coupling (sqrt(5)/2) gamma_e sqrt(N) B_vac."""
    if not (N_j >= 0 and math.isfinite(N_j)):
        raise ValueError(f"spin count must be >= 0, got {N_j!r}")
    return 0.5 * math.sqrt(5.0) * GAMMA_E * math.sqrt(N_j) * vacuum_field(omega_c, V_c)


def rabi_omega(rho1: float, d1: float, D_p: float) -> float:
    """Drive Rabi frequency (gamma_e/2) sqrt(5 mu0 rho1 d1 D_p / (3 c))."""
    _positive(rho1=rho1, d1=d1)
    if not (D_p >= 0 and math.isfinite(D_p)):
        raise ValueError(f"drive power must be >= 0, got {D_p!r}")
    return 0.5 * GAMMA_E * math.sqrt(5.0 * MU_0 * rho1 * d1 * D_p / (3.0 * C_LIGHT))


DEFAULT_GAMMA = rabi_omega(DEFAULT_RHO1, DEFAULT_D1, DEFAULT_POWER) / 1e5


@dataclass(frozen=True)
class LabParams:
    omega_c: float = DEFAULT_OMEGA_C
    V_c: float = DEFAULT_V_C
    N1: float = DEFAULT_N
    N2: float = DEFAULT_N
    rho1: float = DEFAULT_RHO1
    d1: float = DEFAULT_D1
    D_p: float = DEFAULT_POWER
    gamma: float = DEFAULT_GAMMA


def lab_report(lab: LabParams) -> dict[str, float]:
    """Physical rates plus their values in units of the linewidth gamma."""
    _positive(gamma=lab.gamma)
    b_vac = vacuum_field(lab.omega_c, lab.V_c)
    g1 = coupling_g(lab.N1, lab.omega_c, lab.V_c)
    g2 = coupling_g(lab.N2, lab.omega_c, lab.V_c)
    omega = rabi_omega(lab.rho1, lab.d1, lab.D_p)
    return {
        **asdict(lab),
        "B_vac": b_vac,
        "g1": g1,
        "g2": g2,
        "omega_rabi": omega,
        "g1_over_gamma": g1 / lab.gamma,
        "g2_over_gamma": g2 / lab.gamma,
        "omega_over_gamma": omega / lab.gamma,
    }
