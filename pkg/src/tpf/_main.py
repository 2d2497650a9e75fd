"""Console entry point.

Applies TPF_THREADS to the BLAS thread-count env vars before numpy is
imported, then hands off to the real CLI.
"""

import os
import sys


def main() -> int:
    threads = os.environ.get("TPF_THREADS")
    if threads:
        for var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    from .cli import main as run

    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
