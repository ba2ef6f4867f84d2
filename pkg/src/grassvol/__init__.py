"""Numerical verification of Grassmannian volumes, gate algebra and holonomy.

Modules:
    linalg: dense complex helpers and the Jacobi Hermitian eigensolver.
    grassmann: projections, charts, volume forms and volume integrals.
    flags: spectral classification of the exponential kernel.
    gates: Walsh-Hadamard, CNOT and uniton identities on qubit wires.
    pauli: clock and shift matrices with their Fourier diagonalizer.
    synthesis: controlled-U circuits from controlled roots and CNOTs.
    holonomy: adiabatic connection, curvature and path-ordered holonomy.
    families: built-in unitary families for the holonomy engine.
    checks: registry of verification checks and the suite runner.
    report: JSON and CSV report emission.
"""

from .checks import CHECKS, UnknownCheckError, run_suite
from .report import emit_report, load_report

__version__ = "0.1.0"

__all__ = ["CHECKS", "UnknownCheckError", "__version__", "emit_report", "load_report", "run_suite"]
