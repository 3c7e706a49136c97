"""Exact solutions of the benchmark convection-diffusion problems."""

import math
from abc import ABC, abstractmethod
from typing import ClassVar

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from ..fourier.symbols import exact_symbol
from ..models.params import SchemeParams

Points = NDArray[np.float64]


class ExactSolution(BaseModel, ABC):
    """Base class of the analytic solutions.

    ``evaluate`` and ``time_derivative`` take points of shape ``(N, dim)`` (or
    ``(N,)`` in 1D). ``velocity`` returns the convection field with the time
    factor ``convection_scale(t)`` left out, so it can be assembled once.
    """

    model_config = ConfigDict(frozen=True)

    dim: ClassVar[int] = 1
    is_complex: ClassVar[bool] = False

    name: str = Field("", description="Short name of the example")
    t_end: float = Field(0.5, gt=0.0, description="Default evaluation time")

    @property
    @abstractmethod
    def kappa(self) -> float:
        """Diffusion coefficient."""

    @property
    def bounds(self) -> tuple[tuple[float, float], ...]:
        """Domain box, one ``(lo, hi)`` per axis."""
        return tuple((0.0, 1.0) for _ in range(self.dim))

    def _coords(self, points: Points) -> Points:
        pts = np.asarray(points, dtype=np.float64)
        return pts.reshape(-1, self.dim)

    @abstractmethod
    def evaluate(self, t: float, points: Points) -> NDArray:
        """Solution values at time ``t``."""

    @abstractmethod
    def time_derivative(self, t: float, points: Points) -> NDArray:
        """Time derivative of the solution at time ``t``."""

    @abstractmethod
    def velocity(self, points: Points) -> Points:
        """Convection field without the time factor."""

    def convection_scale(self, t: float) -> float:
        return 1.0


def exact_eval(sol: ExactSolution, t: float, point: tuple[float, ...] | float) -> complex | float:
    """Evaluate an exact solution at a single point."""
    value = sol.evaluate(t, np.atleast_1d(np.asarray(point, dtype=np.float64)).reshape(1, sol.dim))
    return complex(value[0]) if sol.is_complex else float(value[0])


def _constant_velocity(vector: tuple[float, ...], points: Points) -> Points:
    return np.broadcast_to(np.asarray(vector, dtype=np.float64), points.shape).copy()


class Harmonic1D(ExactSolution):
    """``A exp(w t) exp(i p x)`` with ``w = -kappa p^2 - i lambda p``."""

    is_complex: ClassVar[bool] = True

    amplitude: float = Field(1.0, description="Amplitude A")
    p: float = Field(3.0 * math.pi, description="Wave number")
    lam: float = Field(1.0, description="Convection speed")
    diffusion: float = Field(0.01, ge=0.0, description="Diffusion coefficient")
    a: float = Field(0.0, description="Left end of the periodic domain")
    b: float = Field(10.0, description="Right end of the periodic domain")

    @property
    def kappa(self) -> float:
        return self.diffusion

    @property
    def bounds(self) -> tuple[tuple[float, float], ...]:
        return ((self.a, self.b),)

    @property
    def length(self) -> float:
        return self.b - self.a

    def params(self, h: float) -> SchemeParams:
        """Scheme parameters on a mesh of size ``h``."""
        return SchemeParams(lam=self.lam, kappa=self.diffusion, h=h, p=self.p)

    @property
    def omega(self) -> complex:
        return exact_symbol(self.params(1.0)).to_complex()

    def evaluate(self, t: float, points: Points) -> NDArray:
        x = self._coords(points)[:, 0]
        return self.amplitude * np.exp(self.omega * t) * np.exp(1j * self.p * x)

    def time_derivative(self, t: float, points: Points) -> NDArray:
        return self.omega * self.evaluate(t, points)

    def velocity(self, points: Points) -> Points:
        return _constant_velocity((self.lam,), self._coords(points))


class _ExponentialConvDiff(ExactSolution):
    """``A exp(k.x + |k|^2 kappa t) exp(lambda.x/(2 kappa) - |lambda|^2 t/(4 kappa))``."""

    amplitude: float
    k: tuple[float, ...]
    lam: tuple[float, ...]
    diffusion: float = Field(..., gt=0.0)

    @property
    def kappa(self) -> float:
        return self.diffusion

    def _rates(self) -> tuple[NDArray[np.float64], float]:
        k = np.asarray(self.k)
        lam = np.asarray(self.lam)
        gradient = k + lam / (2.0 * self.diffusion)
        growth = float(k @ k) * self.diffusion - float(lam @ lam) / (4.0 * self.diffusion)
        return gradient, growth

    def evaluate(self, t: float, points: Points) -> NDArray:
        gradient, growth = self._rates()
        return self.amplitude * np.exp(self._coords(points) @ gradient + growth * t)

    def time_derivative(self, t: float, points: Points) -> NDArray:
        _, growth = self._rates()
        return growth * self.evaluate(t, points)

    def velocity(self, points: Points) -> Points:
        return _constant_velocity(self.lam, self._coords(points))


class ConvDiff2D(_ExponentialConvDiff):
    """Two-dimensional exponential convection-diffusion solution."""

    dim: ClassVar[int] = 2

    amplitude: float = 100.0
    k: tuple[float, float] = (1.0, 2.0)
    lam: tuple[float, float] = (1.0, 1.5)
    diffusion: float = Field(1.0, gt=0.0)


class ConvDiff3D(_ExponentialConvDiff):
    """Three-dimensional exponential convection-diffusion solution."""

    dim: ClassVar[int] = 3

    amplitude: float = 10.0
    k: tuple[float, float, float] = (1.0, 1.5, 2.0)
    lam: tuple[float, float, float] = (1.0, 1.5, 2.0)
    diffusion: float = Field(2.0, gt=0.0)


class Transport2D(ExactSolution):
    """``cos(2 pi (x - l1 t)) cos(2 pi (y - l2 t))``."""

    dim: ClassVar[int] = 2

    lam: tuple[float, float] = (1.0, 1.5)

    @property
    def kappa(self) -> float:
        return 0.0

    def _phases(self, t: float, points: Points) -> Points:
        return 2.0 * math.pi * (self._coords(points) - t * np.asarray(self.lam))

    def evaluate(self, t: float, points: Points) -> NDArray:
        phase = self._phases(t, points)
        return np.cos(phase[:, 0]) * np.cos(phase[:, 1])

    def time_derivative(self, t: float, points: Points) -> NDArray:
        phase = self._phases(t, points)
        l1, l2 = self.lam
        return (
            2.0 * math.pi * l1 * np.sin(phase[:, 0]) * np.cos(phase[:, 1])
            + 2.0 * math.pi * l2 * np.cos(phase[:, 0]) * np.sin(phase[:, 1])
        )

    def velocity(self, points: Points) -> Points:
        return _constant_velocity(self.lam, self._coords(points))


class Transport3D(ExactSolution):
    """``sin(2 pi (x - l1 t)) sin(2 pi (y - l2 t)) sin(2 pi (z - l3 t))``."""

    dim: ClassVar[int] = 3

    lam: tuple[float, float, float] = (1.0, -2.0, 3.0)

    @property
    def kappa(self) -> float:
        return 0.0

    def evaluate(self, t: float, points: Points) -> NDArray:
        phase = 2.0 * math.pi * (self._coords(points) - t * np.asarray(self.lam))
        return np.prod(np.sin(phase), axis=1)

    def time_derivative(self, t: float, points: Points) -> NDArray:
        phase = 2.0 * math.pi * (self._coords(points) - t * np.asarray(self.lam))
        s, c = np.sin(phase), np.cos(phase)
        total = np.zeros(phase.shape[0])
        for axis, speed in enumerate(self.lam):
            factors = s.copy()
            factors[:, axis] = c[:, axis]
            total -= 2.0 * math.pi * speed * np.prod(factors, axis=1)
        return total

    def velocity(self, points: Points) -> Points:
        return _constant_velocity(self.lam, self._coords(points))


class Decay3D(ExactSolution):
    """Radially symmetric decay under the stretching field ``lambda x/(t + 1)``.

    ``u = A(1 - 2 lambda)|x|^2 (t+1)^(-2 lambda) + 6 A kappa (t+1)^(1 - 2 lambda)``.
    """

    dim: ClassVar[int] = 3

    amplitude: float = 100.0
    diffusion: float = Field(0.35, gt=0.0)
    lam: float = 1.0

    @property
    def kappa(self) -> float:
        return self.diffusion

    def evaluate(self, t: float, points: Points) -> NDArray:
        r2 = np.sum(self._coords(points) ** 2, axis=1)
        lam, a = self.lam, self.amplitude
        return a * (1.0 - 2.0 * lam) * r2 * (t + 1.0) ** (-2.0 * lam) + 6.0 * a * self.diffusion * (
            t + 1.0
        ) ** (1.0 - 2.0 * lam)

    def time_derivative(self, t: float, points: Points) -> NDArray:
        r2 = np.sum(self._coords(points) ** 2, axis=1)
        lam, a = self.lam, self.amplitude
        return (
            -2.0 * lam * a * (1.0 - 2.0 * lam) * r2 * (t + 1.0) ** (-2.0 * lam - 1.0)
            + 6.0 * a * self.diffusion * (1.0 - 2.0 * lam) * (t + 1.0) ** (-2.0 * lam)
        )

    def velocity(self, points: Points) -> Points:
        return self.lam * self._coords(points)

    def convection_scale(self, t: float) -> float:
        return 1.0 / (t + 1.0)
