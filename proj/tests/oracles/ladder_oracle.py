"""Predicted acceptance bands for the ladder, from the Hardy-Littlewood
asymptotic model I(T) = T ln(T / 2 pi) + (2c - 1) T with c0 = 0.

Run: python3 tests/oracles/ladder_oracle.py
The model drops the oscillating error term of the mean-square formula, so it
predicts the smooth part of each ratio; the frozen bands must contain these
predictions with room for the O(T^(1/2)) fluctuations.
"""
import mpmath as mp

mp.mp.dps = 30
c = mp.euler
L2P = mp.log(2 * mp.pi)


def I(T):
    return T * mp.log(T / (2 * mp.pi)) + (2 * c - 1) * T


def H(V):
    return V * mp.log(V) + (c - L2P) * V


def phi1(T):
    return mp.findroot(lambda V: H(V) - I(T), T - (1 - c) * T / mp.log(T))


def phi1_inv(U):
    return mp.findroot(lambda x: phi1(x) - U, U + (1 - c) * U / mp.log(U))


def omega(T):
    return mp.log(phi1(T)) + 1 + c - L2P


def show(name, value):
    print(f"{name} = {mp.nstr(value, 12)}")


for T in [1e3, 1e4, 1e5]:
    T = mp.mpf(T)
    show(f"complement_ratio({int(T)})", (T - phi1(T)) * mp.log(T) / ((1 - c) * T))
T = mp.mpf(1e4)
show("omega(1e4)/ln(1e4)", omega(T) / mp.log(T))
show("reverse_step_ratio(1e4)", (phi1_inv(T) - T) * mp.log(T) / ((1 - c) * T))

for T0 in [1e4, 1e5]:
    T = mp.mpf(T0)
    lows, highs = [T], [T + 1]
    for r in range(1, 4):
        lows.append(phi1_inv(lows[-1]))
        highs.append(phi1_inv(highs[-1]))
        gap = lows[r] - highs[r - 1]
        show(f"gap_ratio(T={int(T0)}, r={r})", gap * mp.log(T) / ((1 - c) * T))
        show(f"segment_length(T={int(T0)}, r={r}) * lnT / T", (highs[r] - lows[r]) * mp.log(T) / T)


def moment_ratio(T, k):
    # prod_r omega(phi1^r(t)) / ln^k T at the segment's left end; omega varies
    # by O(1/T) across the segment.
    x = T
    for _ in range(k):
        x = phi1_inv(x)
    prod = mp.mpf(1)
    y = x
    for _ in range(k):
        prod *= omega(y)
        y = phi1(y)
    return prod / mp.log(T) ** k


for T0 in [1e3, 1e4, 1e5]:
    for k in [1, 2]:
        show(f"moment_ratio(T={int(T0)}, k={k})", moment_ratio(mp.mpf(T0), k))
