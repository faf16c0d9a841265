#!/usr/bin/env python3
"""Independent reference values for the 1D constant-coefficient Helmholtz problem.

Solves  -u'' - w^2 u = 0  on (0,1) with Dirichlet data, in closed form,
without touching the C++ solver.  The numbers printed here are frozen into
the C++ test suite; rerun this script to regenerate them.

Closed forms (a = eps = 1, sigma = 0, w not a multiple of pi):
  boundary data f = 1 :  u1(x) = cos(w x) + (1 - cos w)/sin w * sin(w x)
                                = cos(w (x - 1/2)) / cos(w / 2)
  boundary data f = x :  u2(x) = sin(w x) / sin(w)
  Wronskian            W(x) = u1 u2' - u2 u1'  is constant;  W(0) = w / sin(w)
  theta_w(x) = u1(x) * W(0)   (column-determinant functional, d = 1)
  zeros of u1:  x = 1/2 + (2k+1) pi / (2 w),  k integer
"""
import math

def u1(w, x):
    return math.cos(w * x) + (1.0 - math.cos(w)) / math.sin(w) * math.sin(w * x)

def u2(w, x):
    return math.sin(w * x) / math.sin(w)

def du1(w, x):
    return -w * math.sin(w * x) + (1.0 - math.cos(w)) / math.sin(w) * w * math.cos(w * x)

def du2(w, x):
    return w * math.cos(w * x) / math.sin(w)

def residual(u, w, x, h=1e-5):
    # second-difference check that -u'' - w^2 u = 0
    d2 = (u(w, x - h) - 2.0 * u(w, x) + u(w, x + h)) / (h * h)
    return -d2 - w * w * u(w, x)

def zeros_of_u1(w, lo, hi):
    zs = []
    k = -64
    while k <= 64:
        x = 0.5 + (2 * k + 1) * math.pi / (2.0 * w)
        if lo <= x <= hi:
            zs.append(x)
        k += 1
    return sorted(zs)

def main():
    print("== closed-form checks (omega = pi/2) ==")
    w = math.pi / 2.0
    for x in (0.0, 0.25, 0.5, 0.75, 1.0):
        print(f"u1({x:4.2f}) = {u1(w, x):.17g}   ode residual = {residual(u1, w, x):.3e}")
    assert abs(u1(w, 0.0) - 1.0) < 1e-15
    assert abs(u1(w, 1.0) - 1.0) < 1e-15
    assert abs(u1(w, 0.5) - math.sqrt(2.0)) < 1e-15
    print(f"u1(0.5) - sqrt(2) = {u1(w, 0.5) - math.sqrt(2.0):.3e}")

    print("\n== Wronskian (constant in x) ==")
    for w in (math.pi / 2.0, 5.0, 8.0, 12.3):
        ws = [u1(w, x) * du2(w, x) - u2(w, x) * du1(w, x) for x in (0.1, 0.37, 0.5, 0.82)]
        spread = max(ws) - min(ws)
        print(f"omega = {w:.6g}: W = {ws[0]:.17g}  (w/sin w = {w/math.sin(w):.17g}, spread {spread:.3e})")
        assert spread < 1e-9
        assert abs(ws[0] - w / math.sin(w)) < 1e-9

    print("\n== zero locus of u1 inside [0.1, 0.9] ==")
    for w in (5.0, 8.0, 12.0, 20.0):
        zs = zeros_of_u1(w, 0.1, 0.9)
        print(f"omega = {w:5.2f}: zeros = {[f'{z:.17g}' for z in zs]}")

    print("\n== every candidate in the band [5, 20] (M = 40 equispaced) has a zero in [0.1, 0.9] ==")
    all_have = True
    for k in range(40):
        w = 5.0 + 15.0 * k / 39.0
        if not zeros_of_u1(w, 0.1, 0.9):
            all_have = False
            print(f"  omega = {w}: NO ZERO")
    print("all candidates have a zero:", all_have)
    assert all_have

    print("\n== manufactured 2D solution u* = sin(pi x) sin(pi y), omega = 1 ==")
    # -lap(u*) - u* = (2 pi^2 - 1) u*  => g = (2 pi^2 - 1) sin(pi x) sin(pi y)
    print(f"source factor 2*pi^2 - 1 = {2.0 * math.pi**2 - 1.0:.17g}")
    gx, gy = 0.3, 0.7
    us = math.sin(math.pi * gx) * math.sin(math.pi * gy)
    h = 1e-5
    lap = (math.sin(math.pi*(gx-h))*math.sin(math.pi*gy) - 2*us + math.sin(math.pi*(gx+h))*math.sin(math.pi*gy)) / h**2 \
        + (math.sin(math.pi*gx)*math.sin(math.pi*(gy-h)) - 2*us + math.sin(math.pi*gx)*math.sin(math.pi*(gy+h))) / h**2
    res = -lap - us - (2.0 * math.pi**2 - 1.0) * us
    print(f"pointwise residual of the manufactured identity at (0.3,0.7): {res:.3e}")
    assert abs(res) < 1e-4

    print("\n== first Dirichlet eigenfrequencies (a = eps = 1) ==")
    print(f"1D unit interval: pi = {math.pi:.17g}")
    print(f"2D unit square : pi*sqrt(2) = {math.pi * math.sqrt(2.0):.17g}")
    dis = sorted(math.pi * math.sqrt(m*m + n*n) for m in range(1, 6) for n in range(1, 6))
    print("2D spectrum head:", [f"{w:.6f}" for w in dis[:8]])

    print("\nall oracle checks passed")

if __name__ == "__main__":
    main()
