"""Print the base-10 logarithms of the gap constants and the inequalities they satisfy."""

import mpmath

from dpphard.gadgets import HardnessConstants


def main():
    H = HardnessConstants()
    print(f"alpha = {H.alpha}, ell = {H.ell}")
    with mpmath.workdps(30):
        for name, value in H.logs().items():
            print(f"log10 {name:12s} = {mpmath.nstr(value, 20)}")
    for name, ok in H.checks().items():
        print(f"{'ok ' if ok else 'FAIL'} {name}")


if __name__ == "__main__":
    main()
