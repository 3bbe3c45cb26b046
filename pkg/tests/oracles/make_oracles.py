"""Regenerate ``values.json`` from mpmath at 40 significant digits.

Run from the repository root: ``python tests/oracles/make_oracles.py``.
Every value is computed from first principles (defining integrals or mpmath's
own special functions), never by calling the package.
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40


def f(x):
    return float(x)


def ln_gamma_cases():
    pts = [(0.5, 0.0), (3.7, 2.1), (-2.3, 0.7), (-7.5, -3.2), (0.1, 25.0), (-4.2, 30.0),
           (12.5, -40.0), (1e-3, 1e-3), (-0.5, 0.0), (150.0, 1.0)]
    return [[x, y, f(mp.loggamma(mp.mpc(x, y)).real), f(mp.loggamma(mp.mpc(x, y)).imag)]
            for x, y in pts]


def hyp2f1_cases():
    pts = [(0.5, 1.5, 2.0, 0.3), (1.2, 0.7, 3.1, -0.8), (0.3, 0.4, 1.2, 0.75),
           (1.5, 0.5, 2.0, 0.9),   # c - a - b = 0: logarithmic case
           (0.25, 0.75, 2.0, 0.95),  # c - a - b = 1
           (2.0, -0.5, 1.5, 0.6), (0.6, 0.9, 2.5, 1.0), (1.1, 2.3, 0.7, -0.45),
           (0.7, 0.8, 1.5, 0.999)]
    return [[a, b, c, z, f(mp.hyp2f1(a, b, c, z))] for a, b, c, z in pts]


def beta_inc_cases():
    pts = [(0.3, 0.5, 2.0), (0.9, 2.5, 0.7), (0.5, 0.25, 0.75), (1e-4, 1.5, 1.5), (0.999, 0.6, 3.0)]
    return [[x, a, b, f(mp.betainc(a, b, 0, x))] for x, a, b in pts]


def psi(alpha, rho, theta):
    if theta == 0:
        return mp.mpc(0)
    sgn = 1 if theta > 0 else -1
    return abs(theta) ** alpha * mp.expj(sgn * mp.pi * alpha * (mp.mpf(1) / 2 - rho))


def transition_cases():
    out = []
    for alpha, rho, t, x in [(1.5, 0.6, 1.0, 0.3), (0.8, 0.4, 1.0, -0.5), (1.2, 0.5, 0.5, 2.0),
                             (1.0, 0.5, 1.0, 1.0), (1.8, 0.45, 2.0, -1.5)]:
        g = lambda th: mp.re(mp.exp(-t * psi(alpha, rho, th) - 1j * th * x))
        val = mp.quad(g, [0, 1, 5, 20, mp.inf]) / mp.pi
        out.append([alpha, rho, t, x, f(val)])
    return out


def exit_up_cases():
    out = []
    for alpha, rho, x in [(1.5, 0.6, 0.3), (0.8, 0.4, -0.2), (1.2, 0.5, 0.0), (0.5, 0.3, 0.9),
                          (1.9, 0.48, -0.99)]:
        ar, arh = alpha * rho, alpha * (1 - rho)
        # I_{(1+x)/2}(alpha rho_hat, alpha rho) as a defining integral
        s = (1 + mp.mpf(x)) / 2
        num = mp.quad(lambda t: t ** (arh - 1) * (1 - t) ** (ar - 1), [0, s])
        out.append([alpha, rho, x, f(num / mp.beta(arh, ar))])
    return out


def resolvent_interval_cases():
    out = []
    for alpha, rho, x, y in [(1.5, 0.6, 0.1, -0.4), (0.8, 0.4, -0.3, 0.5), (1.2, 0.5, 0.9, -0.9),
                             (0.6, 0.5, 0.2, 0.25)]:
        ar, arh = alpha * rho, alpha * (1 - rho)
        # integral form of the occupation density; the exponents swap when y < x.
        # (s - 1) carries the descending index for y > x, so u ~ (1 + x)^(alpha rho_hat)
        # as x -> -1, the order of the probability of not leaving through -1
        e_plus, e_minus = (ar, arh) if x <= y else (arh, ar)
        z = abs(1 - x * y) / abs(y - x)
        j = mp.quad(lambda s: (s + 1) ** (e_plus - 1) * (s - 1) ** (e_minus - 1), [1, z])
        val = 2 ** (1 - alpha) * abs(y - x) ** (alpha - 1) * j / (mp.gamma(ar) * mp.gamma(arh))
        out.append([alpha, rho, x, y, f(val)])
    return out


def riesz_cases():
    out = []
    for d, alpha in [(2, 1.5), (2, 1.2), (3, 1.5), (3, 1.9)]:
        if d == 2:
            # symmetric about pi; t = s^5 removes the endpoint singularity
            val = mp.quad(lambda s: (2 * mp.sin(s ** 5 / 2)) ** (alpha - 2) * 5 * s ** 4,
                          [0, mp.pi ** 0.2]) / mp.pi
        else:
            val = mp.quad(lambda t: (2 * mp.sin(t / 2)) ** (alpha - 3) * mp.sin(t), [0, mp.pi]) / 2
        out.append([d, alpha, f(val)])
    return out


def overshoot_cases():
    out = []
    for alpha, rho, a, u in [(1.5, 0.5, 1.0, 0.5), (1.2, 0.6, 2.0, 0.1), (0.7, 0.3, 1.0, 3.0)]:
        ar = alpha * rho
        dens = lambda v: (mp.sin(mp.pi * ar) / mp.pi) * a ** ar * v ** (-ar) / (a + v)
        out.append([alpha, rho, a, u, f(dens(u)), f(mp.quad(dens, [0, u]))])
    return out


def never_enter_cases():
    out = []
    for d, alpha, r in [(2, 1.0, 2.0), (3, 1.5, 1.3), (2, 0.5, 5.0)]:
        val = mp.betainc(alpha / 2, (d - alpha) / 2, 0, 1 - r ** -2, regularized=True)
        out.append([d, alpha, r, f(val)])
    return out


def main():
    data = {
        "ln_gamma": ln_gamma_cases(),
        "hyp2f1": hyp2f1_cases(),
        "beta_inc": beta_inc_cases(),
        "transition_density": transition_cases(),
        "exit_up_prob": exit_up_cases(),
        "resolvent_interval": resolvent_interval_cases(),
        "riesz_sphere_constant": riesz_cases(),
        "overshoot": overshoot_cases(),
        "never_enter_ball_prob": never_enter_cases(),
    }
    path = Path(__file__).with_name("values.json")
    path.write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
