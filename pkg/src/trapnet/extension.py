"""Harmonic continuation of planar data and the ponderomotive potential.

A plane source term P(x, y) is continued into three dimensions so that the
result solves Laplace's equation.  For polynomial data the continuation is a
finite z-power series built from the recursion ``layer_{n+2} = -lap(layer_n)``;
for periodic data each Fourier mode picks up a sinh(k z)/k kernel.  The odd
continuation vanishes on the plane z=0 and has normal derivative P there, so
the in-plane RF null set is exactly the zero set of P.

The ponderomotive potential of a charge in the oscillating field is
``U = kappa * |grad(phi)|**2`` with ``kappa = Q**2 / (4 * M * Omega**2)``;
its gradient and Hessian are assembled from analytic derivatives of the
potential, never from finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Poly2, SymMat3, ZSeries
from .generators import FourierGen, FourierMode

__all__ = [
    "TrapParams",
    "FourierField",
    "Field",
    "odd_extend",
    "even_extend",
    "cauchy_extend",
    "odd_extend_fourier",
    "synthesize",
]

# below this |k*z| the sinh kernel switches to its series to avoid losing
# accuracy right on the z=0 plane, the primary evaluation locus
_SMALL_KZ = 1e-4


@dataclass(frozen=True)
class TrapParams:
    """Drive parameters fixing the pseudopotential prefactor.

    With charge Q [C], mass M [kg] and RF angular frequency Omega [rad/s],
    the prefactor is kappa = Q**2 / (4 M Omega**2).  The default instance is
    normalized (kappa = 1); geometry results never need SI values.
    """

    charge: float | None = None
    mass: float | None = None
    omega: float | None = None

    def __post_init__(self):
        given = (self.charge, self.mass, self.omega)
        if any(v is not None for v in given) and not all(v is not None for v in given):
            raise ValueError("charge, mass and omega must be given together")
        if self.mass is not None and self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.omega is not None and self.omega <= 0:
            raise ValueError("omega must be positive")

    @property
    def kappa(self) -> float:
        if self.charge is None:
            return 1.0
        return self.charge**2 / (4.0 * self.mass * self.omega**2)

    @classmethod
    def normalized(cls) -> "TrapParams":
        return cls()


# ----------------------------------------------------------------------
# polynomial continuations
# ----------------------------------------------------------------------

def odd_extend(p: Poly2) -> ZSeries:
    """Odd harmonic continuation of a plane polynomial source term.

    Layer 2m+1 is (-1)**m * lap**m applied to p; the series terminates after
    at most floor(deg/2)+1 layers.  The result vanishes on z=0 and has
    z-derivative p there.
    """
    layers: dict[int, Poly2] = {}
    q = p
    m = 0
    while not q.is_zero():
        layers[2 * m + 1] = q
        q = -q.laplacian()
        m += 1
    return ZSeries(layers)


def even_extend(phi0: Poly2) -> ZSeries:
    """Even harmonic continuation with prescribed plane value phi0."""
    layers: dict[int, Poly2] = {}
    q = phi0
    m = 0
    while not q.is_zero():
        layers[2 * m] = q
        q = -q.laplacian()
        m += 1
    return ZSeries(layers)


def cauchy_extend(phi0: Poly2, phi1: Poly2) -> ZSeries:
    """Harmonic continuation of full Cauchy data (plane value, z-slope)."""
    return even_extend(phi0) + odd_extend(phi1)


# ----------------------------------------------------------------------
# periodic continuation
# ----------------------------------------------------------------------

def _sinh_kernel(k: float, z, order: int):
    """order-th z-derivative of sinh(k z)/k, stable near the plane.

    Even orders give k**(order-1) * sinh(k z), odd orders
    k**(order-1) * cosh(k z).
    """
    kz = k * np.asarray(z, dtype=float)
    if order % 2 == 1:
        return k ** (order - 1) * np.cosh(kz)
    if order == 0:
        series = np.asarray(z, dtype=float) + k * k * np.asarray(z, dtype=float) ** 3 / 6.0
        return np.where(np.abs(kz) < _SMALL_KZ, series, np.sinh(kz) / k)
    return k ** (order - 1) * np.sinh(kz)


class FourierField:
    """Periodic harmonic potential with a sinh kernel per mode.

    The value is ``p00*z + sum_k amp_k * sinh(k z)/k * exp(i k.r)`` over the
    nonzero modes; it vanishes identically on z=0 and its z-derivative there
    reproduces the generating mode set.
    """

    __slots__ = ("_periods", "_p00", "_modes")

    def __init__(self, periods: tuple[float, float], p00: float, modes):
        self._periods = (float(periods[0]), float(periods[1]))
        self._p00 = float(p00)
        cleaned = []
        for mode in modes:
            if (mode.m, mode.n) == (0, 0):
                raise ValueError("mode (0, 0) belongs in p00, not in the mode set")
            cleaned.append(mode)
        self._modes = tuple(sorted(cleaned))

    @property
    def periods(self) -> tuple[float, float]:
        return self._periods

    @property
    def p00(self) -> float:
        return self._p00

    @property
    def modes(self) -> tuple[FourierMode, ...]:
        return self._modes

    def wavevector(self, mode: FourierMode) -> tuple[float, float, float]:
        kx = 2 * math.pi * mode.m / self._periods[0]
        ky = 2 * math.pi * mode.n / self._periods[1]
        return kx, ky, math.hypot(kx, ky)

    def deriv_eval(self, nx: int, ny: int, nz: int, x, y, z):
        """Analytic partial derivative d^(nx,ny,nz) of the potential."""
        acc = 0.0
        for mode in self._modes:
            kx, ky, k = self.wavevector(mode)
            plane = (1j * kx) ** nx * (1j * ky) ** ny
            if plane == 0:
                continue
            wave = np.exp(1j * (kx * np.asarray(x) + ky * np.asarray(y)))
            acc = acc + mode.amp * plane * _sinh_kernel(k, z, nz) * wave
        acc = np.real(acc)
        if nx == 0 and ny == 0:
            if nz == 0:
                acc = acc + self._p00 * np.asarray(z, dtype=float)
            elif nz == 1:
                acc = acc + self._p00
        return float(acc) if np.ndim(acc) == 0 else acc

    def eval(self, x, y, z):
        return self.deriv_eval(0, 0, 0, x, y, z)

    def __repr__(self) -> str:
        return (f"FourierField(periods={self._periods}, p00={self._p00}, "
                f"modes={self._modes!r})")


def odd_extend_fourier(gen: FourierGen) -> FourierField:
    """Odd harmonic continuation of a periodic generator, mode by mode."""
    p00 = gen.amplitude(0, 0).real
    modes = [m for m in gen.modes if (m.m, m.n) != (0, 0)]
    return FourierField(gen.periods, p00, modes)


# ----------------------------------------------------------------------
# unified field interface
# ----------------------------------------------------------------------

_AXES = "xyz"


class Field:
    """A harmonic potential plus trap parameters.

    Wraps either a polynomial continuation (ZSeries) or a periodic one
    (FourierField) and exposes analytic value, gradient, Hessian and third
    derivatives, plus the ponderomotive potential built from them.
    """

    def __init__(self, potential, params: TrapParams | None = None):
        if not isinstance(potential, (ZSeries, FourierField)):
            raise TypeError(f"unsupported potential type {type(potential).__name__}")
        self.potential = potential
        self.params = params or TrapParams.normalized()
        self._series_memo: dict[tuple[int, int, int], ZSeries] = {}

    @property
    def kappa(self) -> float:
        return self.params.kappa

    def derivative(self, nx: int, ny: int, nz: int, x, y, z):
        """Analytic partial derivative of the potential at a point."""
        if isinstance(self.potential, FourierField):
            return self.potential.deriv_eval(nx, ny, nz, x, y, z)
        key = (nx, ny, nz)
        series = self._series_memo.get(key)
        if series is None:
            series = self.potential
            for axis, count in zip(_AXES, key):
                for _ in range(count):
                    series = series.diff(axis)
            self._series_memo[key] = series
        return series.eval(x, y, z)

    def value(self, x, y, z):
        return self.derivative(0, 0, 0, x, y, z)

    def gradient(self, x, y, z) -> np.ndarray:
        return np.array([
            self.derivative(1, 0, 0, x, y, z),
            self.derivative(0, 1, 0, x, y, z),
            self.derivative(0, 0, 1, x, y, z),
        ])

    def hessian(self, x, y, z) -> SymMat3:
        d = self.derivative
        return SymMat3(
            xx=d(2, 0, 0, x, y, z), xy=d(1, 1, 0, x, y, z), xz=d(1, 0, 1, x, y, z),
            yy=d(0, 2, 0, x, y, z), yz=d(0, 1, 1, x, y, z), zz=d(0, 0, 2, x, y, z),
        )

    def third(self, x, y, z) -> np.ndarray:
        """Symmetric third-derivative tensor, shape (3, 3, 3)."""
        out = np.zeros((3, 3, 3))
        for a in range(3):
            for b in range(a, 3):
                for c in range(b, 3):
                    counts = [0, 0, 0]
                    for ax in (a, b, c):
                        counts[ax] += 1
                    val = self.derivative(*counts, x, y, z)
                    for perm in {(a, b, c), (a, c, b), (b, a, c),
                                 (b, c, a), (c, a, b), (c, b, a)}:
                        out[perm] = val
        return out

    # ------------------------------------------------------------------
    # ponderomotive potential
    # ------------------------------------------------------------------

    def pseudopotential(self, x, y, z):
        """kappa * |grad(phi)|**2; accepts scalars or numpy arrays."""
        gx = self.derivative(1, 0, 0, x, y, z)
        gy = self.derivative(0, 1, 0, x, y, z)
        gz = self.derivative(0, 0, 1, x, y, z)
        return self.kappa * (gx * gx + gy * gy + gz * gz)

    def pseudopotential_gradient(self, x, y, z) -> np.ndarray:
        g = self.gradient(x, y, z)
        h = self.hessian(x, y, z).as_array()
        return 2.0 * self.kappa * h @ g

    def pseudopotential_hessian(self, x, y, z) -> SymMat3:
        g = self.gradient(x, y, z)
        h = self.hessian(x, y, z).as_array()
        t = self.third(x, y, z)
        hess = 2.0 * self.kappa * (h @ h + np.tensordot(t, g, axes=([2], [0])))
        return SymMat3.from_array(hess)


def synthesize(generator, params: TrapParams | None = None) -> Field:
    """Build the odd-continued field of a plane generator (Poly2 or FourierGen)."""
    if isinstance(generator, Poly2):
        return Field(odd_extend(generator), params)
    if isinstance(generator, FourierGen):
        return Field(odd_extend_fourier(generator), params)
    raise TypeError(f"unsupported generator type {type(generator).__name__}")
