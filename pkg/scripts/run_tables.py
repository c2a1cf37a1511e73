"""Reproduce the three accuracy tables: endpoint values of the fourth-order
scheme, its deviation from a fine reference, and the third-order scheme's
deviation from the exact inverse hyperbolic tangent."""
import math
import time

from invdisc import (Constant, FunctionOfX, SchemeKind, SchemeSpec, Stencil,
                     Uniform, chi, integrate, rk4_integrate,
                     schwarzian_rate_system, seed_stencil_from_function)

H_REF = 1e-5


def main():
    t0 = time.monotonic()
    system = schwarzian_rate_system(math.cos)
    ref = rk4_integrate(system, (1.0, -1.0, -2.5, 5.0), 1.0, H_REF,
                        round(1.5 / H_REF))
    print(f"fine RK4 reference over [1, 2.5] built in {time.monotonic() - t0:.2f}s")

    print("\nfourth-order scheme, solution values")
    print(f"{'x':>5} {'reference':>12}", end="")
    steps_h = (0.1, 0.01, 0.001)
    for h in steps_h:
        print(f" {'inv h=' + str(h):>14}", end="")
    print()
    runs = {}
    for h in steps_h:
        stride = round(h / H_REF)
        seed = Stencil(tuple(ref.points[k * stride] for k in range(4)))
        spec = SchemeSpec(SchemeKind.SLY4, FunctionOfX(math.cos, "cos"), Uniform(h))
        runs[h] = integrate(spec, seed, round(1.5 / h) - 3)
    for x in (1.5, 2.0, 2.5):
        print(f"{x:5.1f} {ref.points[round((x - 1.0) / H_REF)].y:12.6f}", end="")
        for h in steps_h:
            print(f" {runs[h].points[round((x - 1.0) / h)].y:14.6f}", end="")
        print()

    print("\ndeviation from the fine reference (chi)")
    for h in steps_h:
        stride = round(h / H_REF)
        ref_ys = [ref.points[n * stride].y for n in range(len(runs[h].points))]
        print(f"  h={h:<6} chi = {chi(runs[h], ref_ys):.4e}")

    print("\nthird-order scheme vs exact arctanh over [-0.9, 0.9] (chi)")
    for h in steps_h:
        seed = seed_stencil_from_function(math.atanh, -0.9, h, 3)
        spec = SchemeSpec(SchemeKind.SLX3, Constant(2.0), Uniform(h))
        traj = integrate(spec, seed, round(1.8 / h) - 2)
        value = chi(traj, [math.atanh(p.x) for p in traj.points])
        print(f"  h={h:<6} chi = {value:.6f}   (stop: {traj.stop.value}, "
              f"last x = {traj.points[-1].x:.2f})")


if __name__ == "__main__":
    main()
