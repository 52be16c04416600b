"""Print diagonal decay profiles of |H| and |K| for a few contrasting surfaces.

The four-root surface sits inside the regime where the mean curvature
decays; the three-root one with a wide negative gap does not.
"""

import argparse

from odesurface import SurfaceSpec, decay_profile, validate_spectrum

CASES = {
    "{2,1,-1,-2}^2": [2, 1, -1, -2],
    "{1,0,-1}^2": [1, 0, -1],
    "{1,-3,-4}^2": [1, -3, -4],
    "{1,-2}^2": [1, -2],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radii", default="1,2,4,6,8,10")
    args = ap.parse_args()
    radii = [float(r) for r in args.radii.split(",")]
    print("surface".ljust(16) + "quantity".ljust(17) + "trend".ljust(13) + "  ".join(f"r={r:g}" for r in radii))
    for name, roots in CASES.items():
        spec = validate_spectrum(roots)
        s = SurfaceSpec(spec, spec)
        for q in ("mean_curvature", "gauss_curvature"):
            p = decay_profile(s, radii, q)
            print(name.ljust(16) + q.ljust(17) + p.trend.ljust(13) + "  ".join(f"{v:.3e}" for v in p.values))


if __name__ == "__main__":
    main()
