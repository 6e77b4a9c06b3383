"""Recompute the frozen test constants with 50-digit decimal arithmetic.

Run: python3 scripts/reference_values.py

The printed values are pasted into the test suite as oracle constants; this
script is the independent route (no package imports, plain Decimal math).
"""

from decimal import Decimal, getcontext

getcontext().prec = 50

PI = Decimal("3.1415926535897932384626433832795028841971693993751")
ONE = Decimal(1)


def merged(p: Decimal, layers: int) -> Decimal:
    return ONE - (ONE - p) ** layers


def s_const(lam: Decimal) -> Decimal:
    return Decimal("1.5") + lam


def g_const(lam: Decimal, d: int) -> Decimal:
    return d * (ONE + 3 * PI * lam)


def mu_const(lam: Decimal, d: int) -> Decimal:
    return (lam * PI - ONE) ** 2 / (ONE + lam * d * 9 * PI**2)


def r1(d, t, k, b, lam, pt):
    s = s_const(lam)
    g = g_const(lam, d)
    shrink = (ONE - pt) ** 2
    term1 = 2 * s * (ONE + 90 * lam * d) / (t * shrink)
    term2 = (2 * pt - pt**2) * (2 * g + d) * (ONE + 10 * lam) ** 2 / shrink
    term3 = (6 * d * k + 8 * d) / (shrink * b * k**2)
    return term1 + term2 + term3


def r2(d, t, k, b, lam, pt):
    s = s_const(lam)
    g = g_const(lam, d)
    mu = mu_const(lam, d)
    term1 = (ONE + 90 * lam * d) * (-mu * (ONE - pt) ** 2 * t / s).exp()
    inner = (2 * pt - pt**2) * (g + 2 * d) * (ONE + 10 * lam) ** 2 * b * k**2 + 6 * d * k + 8 * d
    return term1 + t * inner / (2 * s * b * k**2)


def eps_query(pt, r, k):
    return ((ONE - pt) + pt * r).ln() - k * (pt * (ONE - pt) * (ONE - r)).ln()


def eps_compose_literal(k, eps, delta):
    root = (2 * k * (ONE / delta).ln() * eps).sqrt()
    return root + k * eps * (eps.exp() - ONE)


def eps_compose_composed(k, eps, delta):
    root = (2 * k * (ONE / delta).ln()).sqrt() * eps
    return root + k * eps * (eps.exp() - ONE)


def qsq_count(tau, b, pt, nu, trm):
    eff = tau - pt * nu - trm
    ratio = (2 / b).ln() / (2 * eff**2)
    whole = int(ratio)
    return whole if ratio == whole else whole + 1


def show(name, value):
    print(f"{name} = {value}")


p = Decimal("0.0025")
show("merged_rate(0.0025, 5) ", merged(p, 5))
show("merged_rate(0.0025, 8) ", merged(p, 8))
show("merged_rate(0.0025, 20)", merged(p, 20))
show("merged_rate(0.0025, 23)", merged(p, 23))

# decomposition C1 at the pinned context: only the regularizer term survives
show("C1 example (0.019*pi)  ", Decimal("0.019") * PI)

show("S(0.5)                 ", s_const(Decimal("0.5")))
show("G(0.5, 15)             ", g_const(Decimal("0.5"), 15))
show("mu(0.5, 15)            ", mu_const(Decimal("0.5"), 15))
show("mu(2/pi, 1)            ", mu_const(2 / PI, 1))
show("1/(1+18*pi)            ", ONE / (ONE + 18 * PI))

show("r1(15,400,20,280,0,merged(p,5))  ", r1(15, 400, 20, 280, Decimal(0), merged(p, 5)))
show("r1(15,400,20,280,0,merged(p,8))  ", r1(15, 400, 20, 280, Decimal(0), merged(p, 8)))
show("r1(60,400,20,280,0,merged(p,23)) ", r1(60, 400, 20, 280, Decimal(0), merged(p, 23)))
show("r2(15,400,20,280,0.5,merged(p,8))", r2(15, 400, 20, 280, Decimal("0.5"), merged(p, 8)))
show("r2(1,1,1,1,0.5,0)                ", r2(1, 1, 1, 1, Decimal("0.5"), Decimal(0)))

show("ln 6                   ", Decimal(6).ln())
show("eps_query(0.5,0.5,1)   ", eps_query(Decimal("0.5"), Decimal("0.5"), 1))

# gradient-level composition example: eps'=1, delta=e^-1 -> sqrt(6) + 3(e-1)
e1 = ONE.exp()
show("grad_eps(1, e^-1)      ", Decimal(6).sqrt() + 3 * (e1 - ONE))

# total-level literal example: d=2, T=3, eps''=0.1, delta=0.05
d_eps = 2 * Decimal("0.1")
show("total_eps(d=2,T=3,0.1,0.05)", eps_compose_literal(3, d_eps, Decimal("0.05")))

# full chain, literal variant, at a point where everything stays finite:
# p~=0.5, r=0.5, K=1, d=2, T=3, delta_grad=delta_total=1e-5
eq = eps_query(Decimal("0.5"), Decimal("0.5"), 1)
eg = eps_compose_literal(3, eq, Decimal("0.00001"))
et = eps_compose_literal(3, 2 * eg, Decimal("0.00001"))
show("chain literal eps_query", eq)
show("chain literal eps_grad ", eg)
show("chain literal eps_total", et)
egc = eps_compose_composed(3, eq, Decimal("0.00001"))
etc = eps_compose_composed(3, 2 * egc, Decimal("0.00001"))
show("chain composed eps_grad ", egc)
show("chain composed eps_total", etc)

show("qsq_count(0.1,0.05,0,0,0)        ", qsq_count(Decimal("0.1"), Decimal("0.05"), Decimal(0), Decimal(0), Decimal(0)))
show("qsq_count(0.3,0.05,0.02,0.5,0.25)", qsq_count(Decimal("0.3"), Decimal("0.05"), Decimal("0.02"), Decimal("0.5"), Decimal("0.25")))
