"""Convention ledger. Every other module imports these; none redefines them.

Quadratures and ladder operators (hbar = 1):

    a = (Q + iP)/sqrt(2),   Q = (a + a†)/sqrt(2),   P = (a - a†)/(i sqrt(2)),
    [Q, P] = i              (exact on the truncated matrix away from the
                             last row/column).

Fourier transform on the line:

    f~(p) = ∫ f(q) e^{+iqp} dq.

Displacements:

    D(alpha) = exp(alpha a† - conj(alpha) a);  e^{-icP} displaces q by +c.
    Parity conjugation:  e^{-icP} Π e^{+icP} = Π e^{2icP}  (factor-of-2
    rule for displaced parity kernels).

Phase-space points and measure:

    alpha = (q + ip)/sqrt(2),  d²alpha = dq dp / 2.
    Point operator at alpha:  D(alpha) Π D(alpha)† = D(2 alpha) Π.
    Vacuum Wigner value (bare convention):  e^{-2|alpha|²}.

Circle/segment/disc smearing kernels: those constructions parameterize the
line by a variable x whose unit is the coherent amplitude, i.e. the kernel
"e^{2ixP}" is realized exactly as D(-x) = e^{i sqrt(2) x P}.  The 1D region
machinery (characteristic functions on the q axis) uses the plain kernel
e^{iqP} throughout; the two parameterizations differ by the sqrt(2) rescale
recorded here.
"""

import numpy as np

HBAR = 1.0

#: sign of the exponent in the forward Fourier transform
FOURIER_SIGN = +1

#: |p| beyond sqrt(2 dim) is outside the band the truncated basis resolves
RELIABLE_BAND_FACTOR = np.sqrt(2.0)


def reliable_momentum(dim: int) -> float:
    """Largest |p| the dim-truncated momentum operator resolves."""
    return float(np.sqrt(2.0 * dim))


def ledger() -> dict:
    """Conventions in force, for provenance headers."""
    return {
        "hbar": HBAR,
        "annihilation": "(Q + iP)/sqrt(2)",
        "commutator": "[Q, P] = i",
        "fourier": "f~(p) = integral f(q) exp(+iqp) dq",
        "displacement": "D(alpha) = exp(alpha*adag - conj(alpha)*a)",
        "point_operator": "D(alpha) Pi D(alpha)^dag = D(2 alpha) Pi",
        "phase_point": "alpha = (q + ip)/sqrt(2), d2alpha = dq dp / 2",
        "circle_kernel": "e^{2ixP} of the rotated constructions = D(-x)",
    }
