"""
固定刻みの常微分方程式ソルバ
"""
from typing import Callable

Derivative = Callable[[float, float], float]


def rk4_step(f: Derivative, t: float, y: float, dt: float) -> float:
    """
    古典的な4次 Runge-Kutta 法で1ステップ進める

        k1 = f(t, y)
        k2 = f(t + dt/2, y + dt/2 k1)
        k3 = f(t + dt/2, y + dt/2 k2)
        k4 = f(t + dt, y + dt k3)
        y_next = y + dt/6 (k1 + 2 k2 + 2 k3 + k4)
    """
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
