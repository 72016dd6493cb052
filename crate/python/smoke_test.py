#!/usr/bin/env python3
"""Smoke test for the ratio_bounds_py extension module.

Builds are plain cargo artifacts; this script locates the cdylib under
target/{release,debug}, stages it under an importable name and exercises the
main entry points against frozen reference values.

Usage:
    cargo build -p ratio-bounds-py            # or --release
    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def stage_module() -> None:
    candidates = [
        REPO_ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libratio_bounds_py.so", "ratio_bounds_py.dll", "libratio_bounds_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("extension not built; run `cargo build -p ratio-bounds-py` first")
    stage = Path(tempfile.mkdtemp(prefix="ratio-bounds-py-"))
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    shutil.copy2(built, stage / f"ratio_bounds_py{suffix}")
    sys.path.insert(0, str(stage))


def close(a: float, b: float, tol: float = 1e-13) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b), 1.0)


def main() -> None:
    stage_module()
    import ratio_bounds_py as rb

    # Closed-form family values at the reference point.
    assert close(rb.b_alpha(1.0, 0.0, 1.0), 0.6180339887498949)
    assert close(rb.b_alpha(1.0, 1.0, 1.0), 0.41421356237309503)
    assert close(rb.big_b_alpha(1.0, 0.0, 1.0), 0.5107378857764576)
    assert close(rb.big_b_tilde_alpha(1.0, 0.0, 1.0), 0.44538276889462814)
    assert close(rb.d_alpha(1.0, 0.0, 1.0), 0.6180339887498949)
    assert close(rb.big_d_alpha(1.0, 0.0, 1.0), 0.7611005096586445)

    lo, hi = rb.cf1_bounds(1.0, 1.0)
    assert close(lo, 0.4342585459106649) and close(hi, 0.4472135954999579)

    # Validity table spot checks.
    ok, reason = rb.validity_i("b", 0.0, "upper", 0.3)
    assert not ok and "1/2" in reason
    ok, _ = rb.validity_k("d", 1.0, "upper", -3.0)
    assert ok

    # Enclosures sandwich the oracle.
    enc = rb.enclose_i(1.0, 1.0, level=1)
    oracle = rb.oracle_ratio_i(1.0, 1.0)
    assert enc.lower <= oracle <= enc.upper
    assert enc.lower_family == "Btilde0" and enc.upper_family == "Btilde2"
    assert close(oracle, 0.4463899658965345)
    assert enc.gap > 0.0 and enc.width > 0.0

    enc_k = rb.enclose_k(1.0, 1.0, level=1)
    oracle_k = rb.oracle_ratio_k(1.0, 1.0)
    assert enc_k.lower <= oracle_k <= enc_k.upper
    assert close(oracle_k, 0.6994839355937723)

    # Half-order identities: the I ratio is tanh(x), the K ratio is 1.
    value, iterations = rb.evaluate_ratio_i(0.5, 2.0, tol=1e-12, policy="b")
    assert close(value, math.tanh(2.0), 1e-12) and iterations > 0
    assert close(rb.oracle_ratio_k(0.5, 3.0), 1.0)

    # Continued-fraction approximants bracket the ratio by parity.
    h1 = rb.cf_approximant(1.0, 1.0, 1)
    h2 = rb.cf_approximant(1.0, 1.0, 2)
    assert h2 <= oracle <= h1
    assert close(h1 / h2 - 1.0, 0.125, 1e-14)
    assert close(rb.cf_map_i(1.0, 1.0, 0.0), 0.5)

    # The generic engine reproduces the closed forms.
    beta0, _ = rb.riccati_iterate("I", 1.0, 0.0, 0, 1.0)
    assert close(beta0, rb.b_alpha(1.0, 0.0, 1.0))
    beta1, eta1 = rb.riccati_iterate("K", 1.0, 0.0, 1, 1.0)
    assert close(beta1, rb.big_d_alpha(1.0, 0.0, 1.0))
    assert close(eta1, 0.2763932022500210)

    # Errors surface as Python exceptions.
    try:
        rb.b_alpha(1.0, 0.0, -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative x must raise ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
