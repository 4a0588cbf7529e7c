# Generates frozen oracle constants for the test suite.
# Run from the repo root:  python3 scripts/make_oracles.py
# Output lands in scripts/generated/ and is pasted (reviewed, not blindly) into
# the C++ sources.

import sympy as sp
import mpmath as mp

mp.mp.dps = 40

OUT = "scripts/generated"
import os

os.makedirs(OUT, exist_ok=True)

# ---------------------------------------------------------------------------
# 1. Polarization potential: U_pol(r) = -(9/(2 r^4)) * B(r),
#    B(r) = 1 - exp(-2r) * (1 + 2r + 2r^2 + (4/3)r^3 + (2/3)r^4 + (4/27)r^5)
#    Series of B(r) about r=0 (exact rationals).  B starts at r^5.
r = sp.symbols("r")
P = 1 + 2 * r + 2 * r**2 + sp.Rational(4, 3) * r**3 + sp.Rational(2, 3) * r**4 + sp.Rational(4, 27) * r**5
B = 1 - sp.exp(-2 * r) * P
ser = sp.series(B, r, 0, 17).removeO().expand()
coeffs = [sp.nsimplify(ser.coeff(r, n)) for n in range(0, 17)]
with open(f"{OUT}/polarization_series.txt", "w") as f:
    for n, c in enumerate(coeffs):
        if c != 0:
            f.write(f"n={n}  c={c}  double={sp.Float(c, 25)}\n")
    # U_pol series: -(9/2) * sum c_n r^(n-4); leading term:
    f.write("\nU_pol(r->0) leading: -(9/2)*c5*r = %s * r\n" % sp.Float(-sp.Rational(9, 2) * coeffs[5], 25))

# High-precision U_pol at checkpoints (direct formula, 40 digits)
def upol(x):
    x = mp.mpf(x)
    poly = 1 + 2 * x + 2 * x**2 + mp.mpf(4) / 3 * x**3 + mp.mpf(2) / 3 * x**4 + mp.mpf(4) / 27 * x**5
    return -(mp.mpf(9) / 2) / x**4 * (1 - mp.e ** (-2 * x) * poly)

with open(f"{OUT}/polarization_values.txt", "w") as f:
    for x in ["0.05", "0.1", "0.2", "0.5", "1.0", "2.0", "10.0"]:
        f.write(f"U_pol({x}) = {mp.nstr(upol(x), 22)}\n")

# Static potential checkpoints
def ust(x):
    x = mp.mpf(x)
    return -2 * (1 + 1 / x) * mp.e ** (-2 * x)

with open(f"{OUT}/static_values.txt", "w") as f:
    for x in ["0.1", "0.5", "1.0", "2.0", "5.0"]:
        f.write(f"U_st({x}) = {mp.nstr(ust(x), 22)}\n")

# ---------------------------------------------------------------------------
# 2. Riccati-Bessel oracles: s_l = rho*j_l, c_l = -rho*y_l, plus derivatives
#    via x_l' = x_(l-1) - (l/rho) x_l.
def riccati_sc(l, rho):
    rho = mp.mpf(rho)
    s = mp.sqrt(mp.pi * rho / 2) * mp.besselj(l + mp.mpf("0.5"), rho)
    c = -mp.sqrt(mp.pi * rho / 2) * mp.bessely(l + mp.mpf("0.5"), rho)
    if l == 0:
        sp_ = mp.cos(rho)
        cp_ = -mp.sin(rho)
    else:
        sm = mp.sqrt(mp.pi * rho / 2) * mp.besselj(l - mp.mpf("0.5"), rho)
        cm = -mp.sqrt(mp.pi * rho / 2) * mp.bessely(l - mp.mpf("0.5"), rho)
        sp_ = sm - l / rho * s
        cp_ = cm - l / rho * c
    return s, c, sp_, cp_

with open(f"{OUT}/riccati_values.txt", "w") as f:
    for l, rho in [(5, "0.1"), (7, "0.05"), (2, "10.0"), (10, "1.0"), (1, "0.3")]:
        s, c, spv, cpv = riccati_sc(l, mp.mpf(rho))
        f.write(f"l={l} rho={rho}\n")
        f.write(f"  s  = {mp.nstr(s, 22)}\n  c  = {mp.nstr(c, 22)}\n")
        f.write(f"  s' = {mp.nstr(spv, 22)}\n  c' = {mp.nstr(cpv, 22)}\n")
        f.write(f"  wronskian s*c'-s'*c = {mp.nstr(s * cpv - spv * c, 22)}\n")

# ---------------------------------------------------------------------------
# 3. Local-exchange golden values (Furness-McCarthy / asymptotic-energy form),
#    Rydberg units.  |W|(r) = 0.5*(sqrt(X^2 + 16 exp(-2 r)) - X).
def w_mag(X, x):
    X = mp.mpf(X)
    x = mp.mpf(x)
    D = 16 * mp.e ** (-2 * x)
    return (mp.sqrt(X * X + D) - X) / 2

with open(f"{OUT}/local_exchange_values.txt", "w") as f:
    for k, x in [("0.5", "1.0"), ("0.1", "1.0"), ("1.0", "2.0")]:
        T = mp.mpf(k) ** 2 - ust(x)
        f.write(f"k={k} r={x}: FM |W| = {mp.nstr(w_mag(T, x), 22)}\n")
        f.write(f"k={k} r={x}: BN |W| = {mp.nstr(w_mag(mp.mpf(k)**2, x), 22)}\n")

# O'Malley polarization Born check: tan d_l ~ pi*alpha*k^2/((2l-1)(2l+1)(2l+3)),
# alpha = 4.5 au^3
with open(f"{OUT}/born_check.txt", "w") as f:
    for l in [2, 3, 4, 5]:
        cl = mp.pi * mp.mpf("4.5") / ((2 * l - 1) * (2 * l + 1) * (2 * l + 3))
        f.write(f"l={l}: coeff = {mp.nstr(cl, 12)}; at k=0.1: {mp.nstr(cl*mp.mpf('0.01'), 8)}; k=0.3: {mp.nstr(cl*mp.mpf('0.09'), 8)}\n")

print("oracle files written to", OUT)
