"""Compare the gmpy2 and pure-int backends on the exact scan kernels.

    python benchmarks/bench_kernels.py [--terms 6000] [--repeat 3]

Each backend runs in its own interpreter (the backend is fixed at import)
and times three kernels on E(30,989) with recurrence [33,-2,30,-11]:
generating the Pisot sequence, evaluating the recurrence, and the
multiplication-only bracket test used by the decision scan.
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
from itertools import islice
from pisotrec import PisotParams, generate
from pisotrec import _kernels as K
n, repeat = int(sys.argv[1]), int(sys.argv[2])
big = K.number_type()
coeffs = [33, -2, 30, -11]
init = list(generate(PisotParams(30, 989), 4).terms)

def best(fn):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

out = {
    "backend": K.BACKEND,
    "pisot_stream": best(lambda: list(islice(K.pisot_stream(big(30), big(989), 1, 2), n))),
    "recurrence_stream": best(lambda: list(islice(
        K.recurrence_stream(K.lift(coeffs), K.lift(init)), n))),
    "bracket_scan": best(lambda: K.first_bracket_failure(islice(
        K.recurrence_stream(K.lift(coeffs), K.lift(init)), n), 1, 2)),
}
print(json.dumps(out))
"""


def run(backend, terms, repeat):
    env = dict(os.environ, PISOTREC_BACKEND=backend)
    proc = subprocess.run([sys.executable, "-c", CHILD, str(terms), str(repeat)],
                          env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        return {"backend": backend, "error": proc.stderr.strip().splitlines()[-1]}
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terms", type=int, default=6000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rows = [run(b, args.terms, args.repeat) for b in ("python", "gmpy2")]
    kernels = ("pisot_stream", "recurrence_stream", "bracket_scan")
    print(f"E(30,989), {args.terms} terms, best of {args.repeat}")
    print(f"{'kernel':<20}" + "".join(f"{r['backend']:>12}" for r in rows) + f"{'speedup':>10}")
    for k in kernels:
        vals = [r.get(k) for r in rows]
        cells = "".join(f"{v:>11.3f}s" if v is not None else f"{'n/a':>12}" for v in vals)
        speed = f"{vals[0] / vals[1]:>9.1f}x" if None not in vals else f"{'':>10}"
        print(f"{k:<20}{cells}{speed}")
    for r in rows:
        if "error" in r:
            print(f"{r['backend']}: {r['error']}")


if __name__ == "__main__":
    main()
