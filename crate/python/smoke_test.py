"""Smoke test for the kummer_verify extension.

Builds the module with cargo unless KUMMER_VERIFY_LIB points at a built
library, imports it, exercises each entry point once and checks the
returned reports against schema/report-v1.schema.json.
"""

import importlib.util
import math
import os
import shutil
import subprocess
import sys
import tempfile
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def build_library():
    lib = os.environ.get("KUMMER_VERIFY_LIB")
    if lib:
        return Path(lib)
    subprocess.run(
        ["cargo", "build", "--release", "-p", "kummer-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    name = {"darwin": "libkummer_verify.dylib", "win32": "kummer_verify.dll"}.get(
        sys.platform, "libkummer_verify.so"
    )
    return ROOT / "target" / "release" / name


def load(lib):
    suffix = ".pyd" if sys.platform == "win32" else ".so"
    tmp = Path(tempfile.mkdtemp())
    target = tmp / ("kummer_verify" + suffix)
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("kummer_verify", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def report_validator():
    import jsonschema

    schema = json.loads((ROOT / "schema" / "report-v1.schema.json").read_text())
    defs = schema["$defs"]

    def check(report, name):
        sub = {"$schema": schema["$schema"], "$defs": defs, "$ref": "#/$defs/" + name}
        jsonschema.validate(report, sub)

    return check


def close(x, y, tol):
    assert abs(x - y) <= tol * max(1.0, abs(y)), (x, y)


def main():
    kv = load(build_library())
    check = report_validator()

    k = kv.Kummer(3.0, 2.0, 1.0)
    close(k.pdf(1.0), math.exp(-k.ln_norm - 1.0 - 5.0 * math.log(2.0)) * 1.0, 1e-12)
    close(k.cdf(1e6), 1.0, 1e-12)
    close(k.laplace(0.0), 1.0, 1e-12)
    g = kv.Gamma(2.0, 1.0)
    close(g.mean(), 2.0, 1e-15)
    close(g.laplace(-1.0), 0.25, 1e-14)
    be = kv.Beta(2.0, 1.0)
    close(be.cdf(0.5), 0.25, 1e-14)
    assert len(k.sample(1000, seed=7)) == 1000
    assert k.sample(100, seed=7) == k.sample(100, seed=7)

    u, v = kv.kv_forward(1.5, 0.7)
    x, y = kv.kv_inverse(u, v)
    close(x, 1.5, 1e-13)
    close(y, 0.7, 1e-13)
    alpha, beta = kv.constants_from_params(3.0, 2.0)
    a, b = kv.params_from_constants(alpha, beta)
    close(a, 3.0, 1e-13)
    close(b, 2.0, 1e-13)
    assert kv.kv_output_laws(3.0, 2.0, 1.0) == ((3.0, 2.0), (5.0, -2.0, 1.0))
    close(kv.tricomi_u(2.0, 0.5, 3.0), 0.04054178437189277, 1e-10)
    close(kv.log_gamma(5.0), math.log(24.0), 1e-14)

    try:
        kv.Kummer(-1.0, 2.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative shape accepted")

    pairs = kv.sample_pairs(3.0, 2.0, 1.0, 2000, seed=1)
    assert set(pairs) == {"x", "y", "u", "v"}
    assert all(0.0 < w < 1.0 for w in pairs["u"])

    grid = [-2.0, -1.0, -0.5]
    check(kv.run_forward_property(3.0, 2.0, 1.0, n=20000), "independence_report")
    check(kv.run_regression_check(3.0, 2.0, 1.0, n=20000, q_bins=10), "regression_report")
    check(kv.check_regression_identities(3.0, 2.0, 1.0, grid), "residual_report")
    check(kv.check_transform_identities(3.0, 2.0, 1.0, grid), "residual_report")
    check(kv.check_kummer_ode(3.0, 2.0, 1.0, grid), "residual_report")
    check(kv.check_gamma_ode(alpha, beta, 1.0, grid), "residual_report")

    big = kv.sample_pairs(2.0, 1.0, 1.0, 200000, seed=3)
    fit = kv.fit_from_sample(big["u"], big["v"], truth=(2.0, 1.0, 1.0))
    check(fit, "fit_report")
    print("kummer_verify", kv.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
