"""Independent oracle values for geometry, fields and mass tests.

Run: python3 tests/oracles/geometry_fields.py
"""
import numpy as np
from scipy import integrate, special


def lipschitz_perturbed_disk():
    # rho = 1 + 0.05 sin(3 theta), window |x'| <= 0.2 around theta = 0 in the
    # local frame with e_n = -nu.
    rho = lambda t: 1 + 0.05 * np.sin(3 * t)
    drho = lambda t: 0.15 * np.cos(3 * t)
    x0 = np.array([rho(0.0), 0.0])
    tan = np.array([drho(0.0), rho(0.0)])
    tan /= np.linalg.norm(tan)
    nu = np.array([tan[1], -tan[0]])
    en = -nu
    et = np.array([en[1], -en[0]])
    th = np.linspace(-0.6, 0.6, 400001)
    pts = np.stack([rho(th) * np.cos(th), rho(th) * np.sin(th)], axis=1) - x0
    xl = pts @ et
    yl = pts @ en
    order = np.argsort(xl)
    xl, yl = xl[order], yl[order]
    xs = np.linspace(-0.2, 0.2, 10000)
    F = np.interp(xs, xl, yl)
    best = 0.0
    for i in range(0, len(xs), 500):
        a = xs[i:i + 500, None]
        fa = F[i:i + 500, None]
        d = np.abs(xs[None, :] - a)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(d > 0, np.abs(F[None, :] - fa) / d, 0.0)
        best = max(best, s.max())
    return best


def disk_mode_gradient():
    # disk mode (1,1): u = J1(k r) cos(theta), k = j'_{1,1}; at r = 0.5, theta = 0
    k = special.jnp_zeros(1, 1)[0]
    return k * special.jvp(1, k * 0.5), 0.0


def square_mode_mass():
    # int over B((0.5,0.5), 0.25) of (cos(2 pi x) cos(pi y))^2
    c = (0.5, 0.5)
    f = lambda r, t: (np.cos(2 * np.pi * (c[0] + r * np.cos(t))) * np.cos(np.pi * (c[1] + r * np.sin(t)))) ** 2 * r
    val, err = integrate.dblquad(f, 0, 2 * np.pi, 0, 0.25, epsabs=1e-14, epsrel=1e-13)
    rng = np.random.default_rng(0x5EED)
    n = 10 ** 6
    p = rng.uniform(-0.25, 0.25, size=(n, 2))
    keep = (p ** 2).sum(1) <= 0.0625
    q = p[keep] + 0.5
    vals = (np.cos(2 * np.pi * q[:, 0]) * np.cos(np.pi * q[:, 1])) ** 2
    mc = vals.sum() / n * 0.25
    return val, mc


if __name__ == "__main__":
    print("lipschitz_perturbed_disk %.12f" % lipschitz_perturbed_disk())
    g = disk_mode_gradient()
    print("disk11_grad_r05 %.15f %.15f" % g)
    val, mc = square_mode_mass()
    print("square21_mass_center_r025 %.15e (mc 1e6: %.6e)" % (val, mc))
    print("jp11 %.12f jp21 %.12f j21 %.12f j01 %.12f jp01 %.12f jp55 %.12f" % (
        special.jnp_zeros(1, 1)[0], special.jnp_zeros(2, 1)[0], special.jn_zeros(2, 1)[0],
        special.jn_zeros(0, 1)[0], special.jnp_zeros(0, 1)[0], special.jnp_zeros(5, 5)[-1]))
