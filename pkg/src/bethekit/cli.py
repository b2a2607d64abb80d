"""Command-line surface: parse a quiver spec, run the requested pipeline,
and write deterministic machine-readable reports.

Tasks
-----
certify   exact structural certificates for every weight function
          (polynomiality, weight-bound box membership, triangularity)
solve     Bethe roots continued from every fixed component
oracle    spin-chain cross-checks (edgeless one-vertex quivers only)
saddle    q -> 1 saddle residual table at a generic point
all       everything above

A failed certificate or oracle check exits nonzero with the witness in
the report; reports are reproducible from (config, seed).
"""

from __future__ import annotations

import argparse
import csv
import json
import platform
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath as mp

from . import __version__
from .bethe import bethe_equations, solve, tangent_class
from .envelope import (build_weight_function, check_polynomial,
                       check_weight_bound, quiver_parameters,
                       restriction_matrix)
from .fixedpoints import component_order, enumerate_fixed
from .qseries import saddle_residual
from .quiver import QuiverModel, load_quiver
from . import xxz


@dataclass
class JobConfig:
    spec_path: str
    task: str = "all"
    digits: int = 50
    z: tuple[str, ...] = ()
    hbar: str = "0.3"
    params: dict[str, str] = field(default_factory=dict)
    epsilon: str = "1/10"
    seed: int = 0
    out: str = "reports"

    def to_json(self) -> dict:
        return {"spec_path": self.spec_path, "task": self.task,
                "digits": self.digits, "z": list(self.z),
                "hbar": self.hbar, "params": dict(sorted(self.params.items())),
                "epsilon": self.epsilon, "seed": self.seed, "out": self.out}


def _num(text: str):
    """Parse a decimal or complex literal at working precision."""
    try:
        return mp.mpmathify(text.replace(" ", ""))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"cannot parse numeric value {text!r}") from exc


def default_z(Q: QuiverModel) -> list:
    """Generic small twists off the real axis, one per vertex."""
    return [mp.mpf("0.001") * mp.exp(1j * (mp.mpf("0.4") - mp.mpf("1.1") * i))
            for i in range(Q.num_vertices)]


def resolve_params(Q: QuiverModel, config: JobConfig) -> dict[str, mp.mpf]:
    """Numeric parameter map with deterministic generic defaults."""
    out = {"hbar": _num(config.hbar)}
    step = 0
    for name in quiver_parameters(Q):
        if name == "hbar":
            continue
        step += 1
        if name in config.params:
            out[name] = _num(config.params[name])
        elif name.startswith("a"):
            out[name] = mp.mpf(1) + mp.mpf(step) / 3
        else:
            out[name] = mp.mpf("0.45") + mp.mpf(step) / 7
    for name, val in config.params.items():
        if name not in out:
            raise ValueError(f"parameter {name!r} is not used by this quiver")
    return out


def _fmt(x, digits: int) -> str:
    return mp.nstr(mp.mpmathify(x), digits, strip_zeros=False)


def write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# ----- tasks --------------------------------------------------------------


def task_certify(Q, config, outdir, manifest):
    eps = Fraction(config.epsilon)
    wfs = [build_weight_function(Q, F) for F in enumerate_fixed(Q)]
    certs = []
    for wf in wfs:
        certs.append(check_polynomial(wf))
        certs.append(check_weight_bound(wf, eps))
    leq = component_order(Q)
    if leq is not None and len(wfs) > 1:
        _, cert = restriction_matrix(wfs, leq, seed=config.seed, points=3)
        certs.append(cert)
    else:
        manifest["notes"] = manifest.get("notes", []) + [
            "triangularity skipped: no attracting order wired up "
            "for this quiver shape"]
    rows = [[c.kind, c.component, "pass" if c.passed else "FAIL", c.witness]
            for c in certs]
    write_csv(outdir / "certificates.csv",
              ["kind", "component", "status", "witness"], rows)
    with open(outdir / "certificates.txt", "w") as fh:
        for c in certs:
            fh.write(c.line() + "\n")
    return all(c.passed for c in certs)


def task_solve(Q, config, outdir, manifest, z_vals, params):
    system = bethe_equations(tangent_class(Q))
    records = solve(system, z_vals, params, enumerate_fixed(Q),
                    digits=config.digits)
    rows = []
    for rec in records:
        for var in system.variables:
            val = rec.roots.get(var)
            rows.append([rec.component, var,
                         _fmt(mp.re(val), config.digits) if val else "",
                         _fmt(mp.im(val), config.digits) if val else "",
                         _fmt(rec.residual, 8),
                         "yes" if rec.converged else "no",
                         rec.message])
    write_csv(outdir / "bethe_roots.csv",
              ["component", "variable", "re", "im", "residual",
               "converged", "message"], rows)
    return all(rec.converged for rec in records), records


def task_oracle(Q, config, outdir, manifest, z_vals, params, records):
    if Q.edges or Q.num_vertices != 1:
        manifest["notes"] = manifest.get("notes", []) + [
            "oracle skipped: spin-chain cross-check covers edgeless "
            "one-vertex quivers only"]
        return True
    chain = xxz.chain_for(Q, params, digits=config.digits)
    manifest["conventions"]["r_matrix"] = chain.convention_id()
    rng = random.Random(config.seed)
    us = [mp.mpf(f"{rng.uniform(0.4, 2.5):.8f}")
          * mp.exp(1j * mp.mpf(f"{rng.uniform(0.1, 6.2):.8f}"))
          for _ in range(3)]
    tol = mp.mpf("1e-10")
    rows, ok = [], True
    v = Q.v[0]
    for rec in records:
        if not rec.converged:
            ok = False
            rows.append(["eigenvector", rec.component, "", "FAIL"])
            continue
        roots = [rec.roots[f"x0_{k}"] for k in range(v)]
        r = xxz.eigen_check(chain, roots, z_vals[0], us)
        rows.append(["eigenvector", rec.component, _fmt(r, 8),
                     "pass" if r < tol else "FAIL"])
        ok = ok and r < tol
    if v >= 1:
        wfs = [build_weight_function(Q, F) for F in enumerate_fixed(Q)]
        pts = [[mp.mpf(f"{rng.uniform(0.5, 2.0):.8f}")
                * mp.exp(1j * mp.mpf(f"{rng.uniform(0.1, 6.2):.8f}"))
                for _ in range(v)] for _ in range(4)]
        match, _, worst = xxz.compare_weight_functions(chain, wfs, pts)
        rows.append(["weight_function_match", "all", _fmt(worst, 8),
                     "pass" if match else "FAIL"])
        ok = ok and match
        xs = pts[0]
        lam = xxz.baxter_limit_eigenvalue(chain, xs)
        from .bethe import sqrt_map
        sq = sqrt_map(params)
        for k, x in enumerate(xs):
            sq[f"x0_{k}"] = mp.sqrt(x)
        pred = Q.baxter_eigenvalue().evaluate(sq)
        r = abs(lam - pred) / abs(pred)
        rows.append(["baxter_limit", "vacuum", _fmt(r, 8),
                     "pass" if r < tol else "FAIL"])
        ok = ok and r < tol
    write_csv(outdir / "oracle.csv",
              ["check", "component", "residual", "status"], rows)
    return ok


def task_saddle(Q, config, outdir, manifest, z_vals, params):
    tc = tangent_class(Q)
    rng = random.Random(config.seed + 1)
    xvals = {var: mp.mpf(f"{rng.uniform(0.5, 1.5):.8f}")
             * mp.exp(1j * mp.mpf(f"{rng.uniform(0.1, 6.2):.8f}"))
             for var in Q.all_chern_roots()}
    zs = {i: mp.mpf("0.4") * mp.exp(1j * (mp.mpf("0.3") + i))
          for i in range(Q.num_vertices)}
    qs = [mp.mpf(s) for s in ("0.9", "0.95", "0.99", "0.999")]
    rows_data = saddle_residual(tc, xvals, zs, params, qs,
                                digits=min(config.digits, 30))
    order = list(Q.all_chern_roots())
    rows = [[_fmt(r["q"], 6)] + [_fmt(r[var], 8) for var in order]
            + [_fmt(r["max"], 8)] for r in rows_data]
    write_csv(outdir / "saddle.csv", ["q"] + order + ["max"], rows)
    final = rows_data[-1]["max"]
    manifest["saddle_final_residual"] = _fmt(final, 8)
    return final < mp.mpf("1e-2")


# ----- entry point --------------------------------------------------------


def run(config: JobConfig) -> int:
    mp.mp.dps = config.digits + 10
    try:
        Q = load_quiver(config.spec_path)
    except (ValueError, OSError) as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 2
    try:
        params = resolve_params(Q, config)
        z_vals = ([_num(s) for s in config.z] if config.z
                  else default_z(Q))
        if len(z_vals) != Q.num_vertices:
            raise ValueError(f"expected {Q.num_vertices} twist values, "
                             f"got {len(z_vals)}")
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    outdir = Path(config.out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "bethekit_version": __version__,
        "mpmath_version": mp.__version__,
        "python_version": platform.python_version(),
        "config": config.to_json(),
        "conventions": {
            "half_power": "doubled exponent lattice, principal square roots",
            "twist_seed": "fixed components at z -> 0",
        },
        "timings_s": {},
    }
    ok = True
    tasks = (["certify", "solve", "oracle", "saddle"]
             if config.task == "all" else [config.task])
    records = None
    for name in tasks:
        t0 = time.monotonic()
        if name == "certify":
            ok = task_certify(Q, config, outdir, manifest) and ok
        elif name == "solve":
            good, records = task_solve(Q, config, outdir, manifest,
                                       z_vals, params)
            ok = good and ok
        elif name == "oracle":
            if records is None:
                good, records = task_solve(Q, config, outdir, manifest,
                                           z_vals, params)
                ok = good and ok
            ok = task_oracle(Q, config, outdir, manifest, z_vals, params,
                             records) and ok
        elif name == "saddle":
            ok = task_saddle(Q, config, outdir, manifest, z_vals, params) \
                and ok
        else:
            print(f"config error: unknown task {name!r}", file=sys.stderr)
            return 2
        manifest["timings_s"][name] = round(time.monotonic() - t0, 3)
    manifest["status"] = "PASS" if ok else "FAIL"
    with open(outdir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0 if ok else 1


def _parse_args(argv) -> JobConfig:
    parser = argparse.ArgumentParser(
        prog="bethekit",
        description="certificates, Bethe roots, and oracle cross-checks "
                    "for framed quiver data")
    parser.add_argument("--spec", required=True, help="quiver spec file (JSON)")
    parser.add_argument("--task", default="all",
                        choices=["certify", "solve", "oracle", "saddle", "all"])
    parser.add_argument("--digits", type=int, default=50)
    parser.add_argument("--z", default=None,
                        help="comma-separated twist values, one per vertex")
    parser.add_argument("--hbar", default="0.3")
    parser.add_argument("--params", nargs="*", default=[], metavar="NAME=VAL",
                        help="framing/loop parameter values")
    parser.add_argument("--epsilon", default="1/10",
                        help="weight-bound slope offset (exact fraction)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="reports")
    ns = parser.parse_args(argv)
    params = {}
    for item in ns.params:
        if "=" not in item:
            parser.error(f"--params entries look like NAME=VALUE, got {item!r}")
        name, _, val = item.partition("=")
        params[name] = val
    z = tuple(s for s in ns.z.split(",")) if ns.z else ()
    return JobConfig(spec_path=ns.spec, task=ns.task, digits=ns.digits,
                     z=z, hbar=ns.hbar, params=params,
                     epsilon=ns.epsilon, seed=ns.seed, out=ns.out)


def main(argv=None) -> int:
    return run(_parse_args(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    sys.exit(main())
