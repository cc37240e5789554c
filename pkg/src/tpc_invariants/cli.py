"""Command line front end.

Exit codes: 0 success, 1 a job raised a named domain error, 2 the input
document (or the command line) does not fit the schema.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any

from . import embed, jspace, kirby, lattice, lens, selftest
from .errors import InvariantError
from .io import SCHEMA_VERSION, InputDocument, Job, SchemaError, encode, parse_certificate, parse_document
from .residue import Residue

COMMANDS = ("invariants", "jclass", "orbit", "lens", "feasible", "construct", "check-cert", "selftest")


def _int_arg(x: Any, path: str) -> int:
    if isinstance(x, bool):
        raise SchemaError(path, "expected an integer")
    if isinstance(x, int):
        return x
    try:
        return int(str(x), 10)
    except ValueError:
        raise SchemaError(path, f"expected an integer, got {x!r}") from None


def _arity(job: Job, lo: int, hi: int | None = None) -> None:
    hi = lo if hi is None else hi
    if not lo <= len(job.args) <= hi:
        want = str(lo) if lo == hi else f"{lo} to {hi}"
        raise SchemaError(job.path + ".args", f"{job.command} takes {want} arguments, got {len(job.args)}")


def _descriptor(doc: InputDocument, job: Job):
    """Shared argument prefix ``presentation spin surface``."""
    p = job.path + ".args"
    P = doc.presentation(str(job.args[0]), f"{p}[0]")
    s = doc.spin(str(job.args[1]), P, f"{p}[1]")
    F = doc.surface(str(job.args[2]), P, f"{p}[2]")
    return P, s, F


def _orbit_text(m: int) -> str:
    return "Z" if m == 0 else f"Z/{m}"


def cmd_invariants(doc: InputDocument, job: Job) -> dict:
    _arity(job, 1)
    P = doc.presentation(str(job.args[0]), job.path + ".args[0]")
    P.validate_arf()
    inv = kirby.invariants(P)
    spins = [{"sublink": s, "mu": Residue(kirby.rohlin(P, s), 16)} for s in kirby.spin_structures(P)]
    return {
        "chi_Y": inv.chi_Y, "sigma_Y": inv.sigma_Y, "b_plus": inv.b_plus, "b_minus": inv.b_minus,
        "nullity": inv.nullity, "H1_M": inv.H1_M, "b1_M": inv.b1_M, "spin_count": inv.spin_count,
        "spin_structures": spins,
    }


def _jclass_record(P, s, F, d) -> dict:
    out = {
        "descriptor": d,
        "euler_rel": jspace.euler_rel(P, F),
        "orbit": _orbit_text(d.orbit_order),
        "omega_orbit_order": jspace.omega_orbit_order(P, F),
        "coset_check": {
            "required_mod4": jspace.coset_residue(P, s),
            "theta_mod4": d.theta.value % 4,
            "passed": d.theta.congruent(jspace.coset_residue(P, s), 4),
        },
    }
    if d.orbit_order == 0 and lattice.determinant(P.L) != 0:
        out["theta_rational"] = jspace.theta_rational(P, s, F)
    return out


def cmd_jclass(doc: InputDocument, job: Job) -> dict:
    _arity(job, 3)
    P, s, F = _descriptor(doc, job)
    return _jclass_record(P, s, F, jspace.theta_tilde(P, s, F))


def cmd_orbit(doc: InputDocument, job: Job) -> dict:
    _arity(job, 4)
    P, s, F = _descriptor(doc, job)
    k = _int_arg(job.args[3], job.path + ".args[3]")
    d = jspace.theta_tilde(P, s, F)
    step = 1 if k >= 0 else -1
    ks = list(range(0, k + step, step))
    return {
        "descriptor": d,
        "k": ks,
        "act_J": [jspace.act_J(d, t).theta for t in ks],
        "act_omega": [jspace.act_omega(d, t).theta for t in ks],
        "simultaneous_identity": all(jspace.act_omega(jspace.act_J(d, t), t) == d for t in ks),
        "orbit": _orbit_text(d.orbit_order),
    }


def cmd_lens(doc: InputDocument, job: Job) -> dict:
    _arity(job, 2)
    p = _int_arg(job.args[0], job.path + ".args[0]")
    q = _int_arg(job.args[1], job.path + ".args[1]")
    out: dict = {"p": p, "q": q, "exception": lens.lens_exception(p, q)}
    if p > 0 and p % 2 == 0:
        cf = lens.even_cf(p, q)
        P = lens.chain_matrix(cf)
        pair = lens.rohlin_pair(p, q)
        out.update({
            "coefficients": list(cf.coeffs),
            "odd_sum": cf.odd_sum,
            "chain": P.L,
            "det": lattice.determinant(P.L),
            "H1": lattice.cokernel(P.L).group,
            "rohlin_pair": [Residue(x, 16) for x in pair],
            "difference": Residue(pair[1] - pair[0], 16),
        })
    return out


def _with_target(doc: InputDocument, job: Job):
    _arity(job, 4, 5)
    P, s, F = _descriptor(doc, job)
    X = doc.target(str(job.args[3]), job.path + ".args[3]")
    d = jspace.theta_tilde(P, s, F)
    if len(job.args) == 5:
        d = jspace.act_J(d, _int_arg(job.args[4], job.path + ".args[4]"))
    return P, s, F, X, d


def cmd_feasible(doc: InputDocument, job: Job) -> dict:
    P, s, F, X, d = _with_target(doc, job)
    nM = embed.n_M(P, F)
    out = {
        "descriptor": d,
        "n_M": nM,
        "immersion": embed.immersion_feasible(d, X),
        "embedding": embed.embedding_feasible(d, X, nM),
    }
    if X.div_c1:
        out["spin_caveat"] = embed.spin_caveat(d.c1.group, X.div_c1)
        out["spin_selection"] = [
            {"sublink": r.spin, "gamma": r.gamma, "k": r.k, "passes": r.passes, "witness": r.witness}
            for r in embed.factor_spin_selection(d, X.div_c1)]
    return out


def cmd_construct(doc: InputDocument, job: Job) -> dict:
    P, s, F, X, d = _with_target(doc, job)
    cert = embed.construct_plan(P, s, F, d, X)
    ok, report = embed.check_certificate(cert)
    return {"certificate": cert, "verified": ok}


def cmd_check_cert(doc: InputDocument, job: Job) -> dict:
    _arity(job, 1)
    name = str(job.args[0])
    path = job.path + ".args[0]"
    if name not in doc.certificates and os.path.isfile(name):
        try:
            with open(name, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise SchemaError(path, f"cannot read certificate: {e}") from None
        cert = parse_certificate(data.get("certificate", data) if isinstance(data, dict) else data, name)
    else:
        cert = doc.certificate(name, path)
    ok, report = embed.check_certificate(cert)
    return {"valid": ok, "report": report}


def cmd_selftest(doc: InputDocument, job: Job) -> dict:
    _arity(job, 0)
    checks = selftest.run()
    return {
        "passed": all(c.passed for c in checks),
        "checks": [{"name": c.name, "expected": c.expected, "actual": c.actual, "passed": c.passed}
                   for c in checks],
    }


HANDLERS = {
    "invariants": cmd_invariants,
    "jclass": cmd_jclass,
    "orbit": cmd_orbit,
    "lens": cmd_lens,
    "feasible": cmd_feasible,
    "construct": cmd_construct,
    "check-cert": cmd_check_cert,
    "selftest": cmd_selftest,
}


def run_job(doc: InputDocument, job: Job) -> dict:
    """Run one job; domain errors become error records, schema errors propagate."""
    if job.command not in HANDLERS:
        raise SchemaError(job.path + ".command", f"unknown command {job.command!r}")
    record: dict = {"command": job.command, "args": [str(a) for a in job.args], "path": job.path}
    try:
        record["result"] = encode(HANDLERS[job.command](doc, job))
        record["ok"] = True
    except InvariantError as e:
        record["ok"] = False
        record["error"] = {"name": type(e).__name__, "message": str(e), "path": job.path}
    return record


def run_document(doc: InputDocument, workers: int = 1) -> tuple[int, dict]:
    """Evaluate all jobs; results keep document order."""
    if workers > 1 and len(doc.jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda j: run_job(doc, j), doc.jobs))
    else:
        records = [run_job(doc, j) for j in doc.jobs]
    failed_selftest = any(r["ok"] and r["command"] == "selftest" and not r["result"]["passed"]
                          for r in records)
    code = 0 if all(r["ok"] for r in records) and not failed_selftest else 1
    return code, {"version": SCHEMA_VERSION, "results": records}


def format_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _compact(v: Any) -> str:
    return v if isinstance(v, str) else json.dumps(v, sort_keys=True, ensure_ascii=False)


def format_text(report: dict) -> str:
    lines = []
    for r in report["results"]:
        lines.append(f"== {r['command']} {' '.join(r['args'])}".rstrip())
        if not r["ok"]:
            e = r["error"]
            lines.append(f"error: {e['name']} at {e['path']}: {e['message']}")
            continue
        for k, v in sorted(r["result"].items()):
            lines.append(f"{k}: {_compact(v)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tpc-invariants",
        description="Invariants of almost-complex structures on R x M from a linking matrix.")
    p.add_argument("--input", metavar="FILE", help="input document (JSON, schema %s)" % SCHEMA_VERSION)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--quiet", action="store_true", help="print nothing; report only through the exit code")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="evaluate jobs on N threads")
    p.add_argument("--output", metavar="FILE", help="write the report to FILE instead of stdout")
    p.add_argument("command", nargs="?", choices=COMMANDS, help="run a single job")
    p.add_argument("args", nargs="*", help="job arguments (names or integers)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.input:
            try:
                with open(ns.input, encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as e:
                raise SchemaError("$", f"cannot read {ns.input}: {e}") from None
            doc = parse_document(data)
        else:
            doc = InputDocument()
        if ns.command:
            doc.jobs = [Job(ns.command, list(ns.args), "$.argv")]
        elif not ns.input:
            parser.error("give a command or --input")
        code, report = run_document(doc, max(1, ns.jobs))
    except SchemaError as e:
        if not ns.quiet:
            print(f"schema error: {e}", file=sys.stderr)
        return 2
    text = format_json(report) if ns.json else format_text(report)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif not ns.quiet:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
