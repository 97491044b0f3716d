"""Numerical tolerances and size limits shared by every module."""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10   # max-entry |m - m^dagger|
    unitary: float = 1e-10     # max-entry |U^dagger U - I|
    trace: float = 1e-10
    psd: float = 1e-10         # allowed negative eigenvalue magnitude
    state_norm: float = 1e-12  # pure-state amplitude norm
    imag: float = 1e-10        # imaginary residue of correlation traces
    compare: float = 1e-9      # norm-vs-bound comparisons
    purity: float = 1e-9       # "is this state pure" test
    tie: float = 1e-12         # |margin| below this is a tie -> inconclusive


@dataclass(frozen=True)
class OracleConfig:
    samples_qubit: int = 1000
    samples_qudit: int = 100
    violation_tol: float = 1e-9
    schmidt_tol: float = 1e-8  # entangled across a cut iff top Schmidt coeff < 1 - this
    max_resample: int = 1000

    def default_samples(self, d: int) -> int:
        return self.samples_qubit if d == 2 else self.samples_qudit


TOL = Tolerances()
ORACLE = OracleConfig()
DIM_CAP = 2**14
