"""Ergotropy-based quantum thermodynamics of small open systems.

Dense Hermitian operator tools, ergotropy/passive-state decompositions with
three effective temperatures, heat/work ledgers for four differential
formulations, qubit channel dynamics, and heat-based non-Markovianity
measures, plus a configuration-driven command-line runner.
"""

from .errors import ConfigError, NumericsError
from .opcore import (bloch_to_density, density_to_bloch, eig_hermitian,
                     field_to_hamiltonian, gibbs_state, relative_entropy,
                     von_neumann_entropy)
from .ergo import (PassiveDecomposition, TemperatureTriple, ergotropy,
                   passive_state, qubit_temperatures, temperatures)
from .thermo import (Environment, Formulation, OperationalSplit,
                     ProcessEndpoints, SplitResult, ThermoSample,
                     differential_split, ledger, operational_split)
from .dynamics import (ChannelSpec, Trajectory, dephasing_factor, gad_spec,
                       gamma_ohmic, integrate, pd_markov_spec,
                       pd_nonmarkov_spec)
from .nonmarkov import (NMReport, SignInterval, WitnessReport,
                        negative_rate_intervals, nm_measure,
                        temperature_witness)

__all__ = [
    "ConfigError", "NumericsError",
    "bloch_to_density", "density_to_bloch", "eig_hermitian",
    "field_to_hamiltonian", "gibbs_state", "relative_entropy",
    "von_neumann_entropy",
    "PassiveDecomposition", "TemperatureTriple", "ergotropy",
    "passive_state", "qubit_temperatures", "temperatures",
    "Environment", "Formulation", "OperationalSplit", "ProcessEndpoints",
    "SplitResult", "ThermoSample", "differential_split", "ledger",
    "operational_split",
    "ChannelSpec", "Trajectory", "dephasing_factor", "gad_spec",
    "gamma_ohmic", "integrate", "pd_markov_spec", "pd_nonmarkov_spec",
    "NMReport", "SignInterval", "WitnessReport", "negative_rate_intervals",
    "nm_measure", "temperature_witness",
]
