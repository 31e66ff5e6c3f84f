#!/usr/bin/env python3
"""High-precision reference values for the Rust test suite.

Computes, with mpmath at 60 significant digits, the quantities the tests
freeze as golden numbers: binary entropy samples, the statistical
fluctuation term, key lengths, fixed-point truncation lengths and their
security levels, and the SplitMix64 stream used for seeded matrices.

Run:  python3 scripts/goldens.py
"""

from mpmath import mp, mpf, log, ln, sqrt, floor

mp.dps = 60

LN2 = ln(2)
LOG10_2 = log(2, 10)


def h2(x):
    """Binary entropy in bits."""
    x = mpf(x)
    if x == 0 or x == 1:
        return mpf(0)
    return -x * log(x, 2) - (1 - x) * log(1 - x, 2)


def mu(n_key, n_pe, ln_2_over_eps):
    """Statistical fluctuation term; ln_2_over_eps = ln(2/eps)."""
    n_key, n_pe = mpf(n_key), mpf(n_pe)
    return sqrt((n_key + n_pe) / (n_key * n_pe) * (n_pe + 1) / n_pe * ln_2_over_eps)


def key_length_rhs(n_key, n_pe, q, f, log2_eps):
    """N[1-h(Q+mu)] - f*N*h(Q) - log2(2/eps^3), eps given as log2(eps).

    Returns -inf where Q+mu >= 1/2 (outside the entropy term's monotone
    regime), which keeps the bisection bracket ordered.
    """
    n_key = mpf(n_key)
    ln_2_over_eps = (1 - mpf(log2_eps)) * LN2
    m = mu(n_key, n_pe, ln_2_over_eps)
    if mpf(q) + m >= mpf("0.5"):
        return mpf("-inf")
    return n_key * (1 - h2(mpf(q) + m)) - mpf(f) * n_key * h2(q) - (1 - 3 * mpf(log2_eps))


def epsilon_of_length(n_key, n_pe, q, f, n2, lo=None, hi=mpf(0)):
    """log2(eps) solving n2 == key_length_rhs, by bisection."""
    if lo is None:
        lo = mpf(-20) * mpf(n_key)
    for _ in range(400):
        mid = (lo + hi) / 2
        if key_length_rhs(n_key, n_pe, q, f, mid) >= n2:
            hi = mid
        else:
            lo = mid
    return hi


def fixed_point(n_key, n_pe, q, f):
    """Real x solving 4x + 1 = N[1-h(Q+mu(x))] - f*N*h(Q), mu at ln(2/eps)=(x+1)ln2."""
    n_key = mpf(n_key)

    def g(x):
        m = mu(n_key, n_pe, (x + 1) * LN2)
        qm = mpf(q) + m
        if qm >= mpf("0.5"):
            return mpf(1)
        return 4 * x + 1 + mpf(f) * n_key * h2(q) - n_key * (1 - h2(qm))

    lo, hi = mpf(1), n_key
    for _ in range(400):
        mid = (lo + hi) / 2
        if g(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return lo


def splitmix64(seed):
    mask = (1 << 64) - 1
    state = seed
    while True:
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        yield z ^ (z >> 31)


def main():
    q, f = mpf("0.0214"), mpf("1.1")
    log2_1e9 = -9 / LOG10_2  # log2(1e-9)

    print("== binary entropy ==")
    print(f"h(0.0214)  = {h2(q)}")
    print(f"h(0.25)    = {h2(mpf('0.25'))}")

    print("\n== mu term (N=780000, N_z=220000, eps=1e-9) ==")
    print(f"mu = {mu(780000, 220000, (1 - log2_1e9) * LN2)}")

    print("\n== log2_add(-3322.0, -33.2) ==")
    a, b = mpf(-3322), mpf("-33.2")
    print(f"= {log(2**a + 2**b, 2)}")

    rows = [(10**4, 7800, 2200), (10**5, 78000, 22000), (10**6, 780000, 220000)]

    print("\n== key lengths at eps = 1e-9 (table regression) ==")
    for n_tol, n_key, n_pe in rows:
        rhs = key_length_rhs(n_key, n_pe, q, f, log2_1e9)
        print(f"N_tol={n_tol:>8}: rhs={rhs}  floor={int(floor(rhs))}  r={rhs / n_tol}")

    print("\n== fixed point: x* with 2^-x = eps(x) ==")
    for n_tol, n_key, n_pe in rows:
        x = fixed_point(n_key, n_pe, q, f)
        n2 = int(floor(x))
        le = epsilon_of_length(n_key, n_pe, q, f, n2)
        thm2_log10 = -(mpf(n2) - 1) * LOG10_2
        print(f"N_tol={n_tol:>8}: x*={x}")
        print(f"  n2=floor(x*)={n2}  log2 eps(n2)={le}")
        print(f"  -log10 eps(n2)={-le * LOG10_2}")
        print(f"  thm2 bound log2=-(n2-1)={-(n2 - 1)}  -log10={-thm2_log10}")
        print(f"  r' = n2/N_tol = {mpf(n2) / n_tol}")

    print("\n== n' as key length of an eps'-secure key (eps' = 10^-32/-327/-3277) ==")
    for (n_tol, n_key, n_pe), d in zip(rows, [32, 327, 3277]):
        le = -d / LOG10_2
        rhs = key_length_rhs(n_key, n_pe, q, f, le)
        print(f"N_tol={n_tol:>8}, eps'=1e-{d}: rhs={rhs}  floor={int(floor(rhs))}  r'={rhs / n_tol}")

    print("\n== epsilon_of_length at published follow-up lengths (reverse check) ==")
    for (n_tol, n_key, n_pe), n2 in zip(rows, [136, 1120, 11000]):
        le = epsilon_of_length(n_key, n_pe, q, f, n2)
        print(f"N_tol={n_tol:>8}, n2={n2}: log2 eps={le}  -log10 eps={-le * LOG10_2}")

    print("\n== SplitMix64 streams ==")
    for seed in (0, 1, 42):
        g = splitmix64(seed)
        outs = [next(g) for _ in range(4)]
        print(f"seed={seed}: " + " ".join(f"{o:016X}" for o in outs))

    print("\n== misc ==")
    print(f"log2(1e-9)   = {log2_1e9}")
    print(f"log10 of 2^-29 = {-29 * LOG10_2} (baseline-bound n1=30 example check: 2^-30={mpf(2)**-30})")
    print(f"mu at eps=1e-9, N=7800/2200:   {mu(7800, 2200, (1 - log2_1e9) * LN2)}")
    print(f"mu at eps=1e-9, N=78000/22000: {mu(78000, 22000, (1 - log2_1e9) * LN2)}")


if __name__ == "__main__":
    main()
