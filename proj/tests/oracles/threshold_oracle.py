"""High-precision reference values for the horizon root and t0/A formulas."""
import mpmath as mp

mp.mp.dps = 40


def horizon(beta, c1):
    x0 = mp.findroot(lambda x: beta * x**16 + 32 * c1 * x - beta, (mp.mpf(0), mp.mpf(1)), solver="anderson")
    return x0, mp.log(1 / x0)


for beta, c1 in [(32, 1), (mp.mpf("1e-4"), 1), (mp.mpf("4.2237933758649924e-4"), mp.mpf("9.707990444000176e-4"))]:
    x0, T = horizon(beta, c1)
    print("beta", beta, "c1", c1, "x0", mp.nstr(x0, 20), "T", mp.nstr(T, 20))
print("1/(8e)", mp.nstr(1 / (8 * mp.e), 20))
t0 = 1 / (8 * mp.e)
print("A(1/(8e))", mp.nstr(mp.exp(t0 - mp.mpf(1) / 4) / (mp.sqrt(2) * t0 ** mp.mpf(0.25)), 20))
print("A(1/4)", mp.exp(0) / (mp.sqrt(2) * mp.mpf(0.25) ** mp.mpf(0.25)))
