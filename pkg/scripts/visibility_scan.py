"""Critical white-noise visibility of GHZ states for every k."""
import argparse

from gmetensor import states as S
from gmetensor.criteria import critical_visibility


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()
    for d in args.d:
        psi = S.ghz(4, d)
        for k in range(1, d * d):
            cv = critical_visibility(psi, k, tol=args.tol)
            p = "NotDetectable" if cv.p is None else f"{cv.p:.8f}"
            print(f"GHZ4 d={d} k={k}: threshold={cv.threshold:.6f} p_crit={p}")


if __name__ == "__main__":
    main()
