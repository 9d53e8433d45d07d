"""Command-line interface: ``troptev <command> ...`` (also ``python -m troptev``).

Every command prints one JSON document on stdout.  Big integers are always
written as decimal strings.  Each document carries a manifest with the
command line, seed, versions, wall time in milliseconds and a sha256 digest
of the result payload.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .enumeration import (
    NoStandardConfiguration,
    PointConfig,
    enumerate_contributing,
    paper_point_config,
)
from .formula import (
    comparison_report,
    conjecture_blowup,
    conjecture_pbundle,
    predicted_counts,
    search_separations,
    trop_tev,
    trop_tev_p2,
)
from .model import ContactData, InvalidContactData, grid_instances, load_instance
from .oracle import (
    FULL_ORACLE_MAX_LEGS,
    formula_value,
    full_oracle_seeded,
    identity_check,
    structured_oracle_seeded,
)
from .render import EmptyScene, RenderOptions, render_all

EXIT_DISAGREE = 1
EXIT_INVALID = 2


@dataclass
class RunManifest:
    command: str
    argv: List[str]
    instance: Optional[Dict]
    seed: Optional[int]
    versions: Dict[str, str]
    elapsed_ms: int
    digest: str

    def to_json(self) -> Dict:
        return asdict(self)


def _digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _versions() -> Dict[str, str]:
    return {"troptev": __version__, "python": platform.python_version()}


def _emit(args, payload: Dict, instance: Optional[Dict], started: int, out=None) -> None:
    manifest = RunManifest(
        command=args.command,
        argv=list(args.argv),
        instance=instance,
        seed=getattr(args, "seed", None),
        versions=_versions(),
        elapsed_ms=(time.perf_counter_ns() - started) // 1_000_000,
        digest=_digest(payload),
    )
    doc = dict(payload)
    doc["manifest"] = manifest.to_json()
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    return max(1, int(os.environ.get("TROPTEV_THREADS", "1")))


def _parse_range(text: str) -> Tuple[int, int]:
    """'1..3' -> (1, 3); a bare integer k -> (k, k)."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    return int(text), int(text)


def _parse_profiles(text: str) -> List[List[int]]:
    """JSON list of lists, or profiles separated by ';' with entries by ','."""
    text = text.strip()
    if text.startswith("["):
        return [list(map(int, p)) for p in json.loads(text)]
    return [[int(w) for w in part.split(",") if w.strip()] for part in text.split(";")]


def _load(args) -> ContactData:
    target = "p2" if getattr(args, "p2", False) else None
    return load_instance(args.input, target)


def _invalid(args, exc: InvalidContactData, started: int) -> int:
    payload = {
        "error": "InvalidContactData",
        "violations": [v.describe() for v in exc.violations],
    }
    _emit(args, payload, None, started)
    return EXIT_INVALID


# -- commands ------------------------------------------------------------------------


def cmd_compute(args) -> int:
    started = time.perf_counter_ns()
    try:
        gamma = _load(args)
    except InvalidContactData as exc:
        return _invalid(args, exc, started)
    res = trop_tev_p2(gamma) if gamma.is_p2 else trop_tev(gamma)
    payload = {
        "result": res.to_json(),
        "labelled_degree": str(res.value * gamma.symmetry),
        "symmetry": str(gamma.symmetry),
        "predicted_counts": predicted_counts(gamma).to_json(),
    }
    _emit(args, payload, gamma.to_json(), started)
    return 0


def cmd_enumerate(args) -> int:
    started = time.perf_counter_ns()
    try:
        gamma = _load(args)
    except InvalidContactData as exc:
        return _invalid(args, exc, started)
    if args.points:
        config = PointConfig.from_json(json.loads(Path(args.points).read_text()))
    else:
        try:
            config = paper_point_config(gamma, args.seed)
        except NoStandardConfiguration as exc:
            payload = {"curves": [], "count": {"trop_tev": "0", "unlabelled_curves": "0"}, "note": str(exc)}
            _emit(args, payload, gamma.to_json(), started, args.out)
            return 0
    curves = enumerate_contributing(gamma, config, labelled=False)
    sym = gamma.symmetry
    tt = sum(c.multiplicity for c in curves)
    payload = {
        "config": config.to_json(),
        "count": {
            "trop_tev": str(tt),
            "labelled_sum": str(tt * sym),
            "unlabelled_curves": str(len(curves)),
            "labelled_curves": str(len(curves) * sym),
            "type_a": str(sum(1 for c in curves if c.curve_type == "A")),
            "type_b": str(sum(1 for c in curves if c.curve_type == "B")),
            "formula": str(formula_value(gamma)),
        },
        "curves": [c.to_json() for c in curves],
    }
    if args.labelled:
        payload["labelled"] = [c.to_json() for c in enumerate_contributing(gamma, config, labelled=True)]
    _emit(args, payload, gamma.to_json(), started, args.out)
    return 0


def _verify_one(gamma: ContactData, oracle: str, trials: int, seed: int, force_full: bool = False) -> Dict:
    formula = formula_value(gamma)
    out: Dict = {"formula": str(formula), "discrepancies": []}
    values = [formula]
    if oracle in ("structured", "both"):
        reps = [structured_oracle_seeded(gamma, seed + t) for t in range(trials)]
        out["structured"] = [str(r.trop_tev) for r in reps]
        values.extend(r.trop_tev for r in reps)
    if oracle in ("full", "both"):
        N = gamma.n + gamma.m
        if N <= FULL_ORACLE_MAX_LEGS or force_full:
            rep, stats = full_oracle_seeded(gamma, seed, max_legs=max(N, FULL_ORACLE_MAX_LEGS))
            out["full"] = str(rep.trop_tev)
            out["full_stats"] = stats.to_json()
            values.append(rep.trop_tev)
            if stats.shapes.get("NotContributingShape"):
                out["discrepancies"].append("full oracle accepted a tree without the central-vertex shape")
            if stats.max_resolutions > 1:
                out["discrepancies"].append("a central-vertex curve had several skeleton resolutions")
        else:
            out["full"] = None
            out["full_skipped"] = f"N={N} exceeds {FULL_ORACLE_MAX_LEGS}"
    if len(set(values)) != 1:
        out["discrepancies"].append(f"values differ: {sorted(set(values))}")
    out["agree"] = not out["discrepancies"]
    return out


def cmd_verify(args) -> int:
    started = time.perf_counter_ns()
    try:
        gamma = _load(args)
    except InvalidContactData as exc:
        return _invalid(args, exc, started)
    verdict = _verify_one(gamma, args.oracle, args.trials, args.seed, args.force_full)
    _emit(args, verdict, gamma.to_json(), started)
    return 0 if verdict["agree"] else EXIT_DISAGREE


def _sweep_row(job: Tuple[ContactData, int]) -> List[str]:
    gamma, seed = job
    f = formula_value(gamma)
    s = structured_oracle_seeded(gamma, seed).trop_tev
    mus = ["(" + " ".join(map(str, p)) + ")" for p in gamma.mu]
    return [str(gamma.a), str(gamma.n), *mus, str(f), str(s), "true" if f == s else "false"]


def cmd_sweep(args) -> int:
    started = time.perf_counter_ns()
    a_lo, a_hi = _parse_range(args.a)
    instances = list(grid_instances(range(a_lo, a_hi + 1), args.s1_max, args.wmax, args.nmax))
    jobs = [(g, args.seed) for g in instances]
    workers = _threads(args)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs, chunksize=32))
    else:
        rows = [_sweep_row(j) for j in jobs]
    header = ["a", "n", "mu1", "mu2", "mu3", "mu4", "formula", "oracle", "agree"]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    bad = [r for r in rows if r[-1] != "true"]
    payload = {
        "instances": str(len(rows)),
        "nonzero": str(sum(1 for r in rows if r[6] != "0")),
        "disagreements": str(len(bad)),
        "out": args.out,
    }
    _emit(args, payload, None, started)
    return 0 if not bad else EXIT_DISAGREE


def cmd_identities(args) -> int:
    started = time.perf_counter_ns()
    grid = [] if args.no_grid else list(grid_instances())
    verdict = identity_check(_parse_range(args.xrange), _parse_range(args.yrange), args.nmax, grid, seed=args.seed)
    _emit(args, verdict, None, started)
    return 0 if verdict["passed"] else EXIT_DISAGREE


def cmd_compare(args) -> int:
    started = time.perf_counter_ns()
    if args.search:
        reports = search_separations(args.parity, args.j or 3, args.d or 8)
        payload = {"reports": [r.to_json() for r in reports]}
    else:
        if args.j is None or args.d is None or args.n is None:
            print("compare needs --j, --d and --n (or --search)", file=sys.stderr)
            return EXIT_INVALID
        payload = comparison_report(args.parity, args.j, args.d, args.n, args.k).to_json()
    _emit(args, payload, None, started)
    return 0


def cmd_render(args) -> int:
    started = time.perf_counter_ns()
    data = json.loads(Path(args.curves).read_text())
    curves = data["curves"] if isinstance(data, dict) else data
    a = args.a if args.a is not None else int(data.get("manifest", {}).get("instance", {}).get("a", 1))
    try:
        files = render_all(curves, a, RenderOptions(fan=not args.no_fan, label_all=args.label_all))
    except EmptyScene as exc:
        print(f"EmptyScene: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)
    _emit(args, {"files": sorted(files)}, None, started)
    return 0


def cmd_conjecture(args) -> int:
    started = time.perf_counter_ns()
    mus = _parse_profiles(args.mu)
    try:
        if args.kind == "pbundle":
            val = conjecture_pbundle(args.r, args.a, mus, args.n)
        else:
            val = conjecture_blowup(args.r, mus, args.n, args.points)
    except (InvalidContactData, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(args, val.to_json(), None, started)
    return 0


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="troptev", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"troptev {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True, seed=True):
        if instance:
            sp.add_argument("--input", required=True, help="instance JSON {a, n, mu, target}")
            sp.add_argument("--p2", action="store_true", help="treat the instance as plane data")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None, help="worker cap (env TROPTEV_THREADS)")

    sp = sub.add_parser("compute", help="closed formula with factor breakdown")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("enumerate", help="contributing curves for the standard point placement")
    common(sp)
    sp.add_argument("--points", help="PointConfig JSON (as printed under 'config')")
    sp.add_argument("--labelled", action="store_true", help="also list every labelled curve")
    sp.add_argument("--out", help="also write the JSON document here")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("verify", help="formula against the oracles; exit 0 iff all agree")
    common(sp)
    sp.add_argument("--oracle", choices=("structured", "full", "both"), default="both")
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--force-full", action="store_true", help=f"run the full oracle beyond N={FULL_ORACLE_MAX_LEGS}")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="grid of instances to CSV")
    common(sp, instance=False)
    sp.add_argument("--a", default="1..3")
    sp.add_argument("--s1-max", type=int, default=3)
    sp.add_argument("--wmax", type=int, default=4)
    sp.add_argument("--nmax", type=int, default=6)
    sp.add_argument("--out", default="grid.csv")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("identities", help="binomial identity suite")
    common(sp, instance=False)
    sp.add_argument("--xrange", default="-10..10")
    sp.add_argument("--yrange", default="0..10")
    sp.add_argument("--nmax", type=int, default=12)
    sp.add_argument("--no-grid", action="store_true", help="skip the lemma check on the instance grid")
    sp.set_defaults(func=cmd_identities)

    sp = sub.add_parser("compare", help="all-ones log count against the stable-map reference")
    common(sp, instance=False, seed=False)
    sp.add_argument("--parity", choices=("even", "odd"), required=True)
    sp.add_argument("--j", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--search", action="store_true", help="scan j <= J, d <= D instead of one triple")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("render", help="SVG pictures of enumerated curves")
    common(sp, instance=False, seed=False)
    sp.add_argument("--curves", required=True, help="output of 'enumerate'")
    sp.add_argument("--out", required=True, help="directory")
    sp.add_argument("--a", type=int, help="fan parameter (default: read from the manifest)")
    sp.add_argument("--label-all", action="store_true")
    sp.add_argument("--no-fan", action="store_true")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("conjecture", help="conjectural higher-dimensional products")
    common(sp, instance=False, seed=False)
    sp.add_argument("kind", choices=("pbundle", "blowup"))
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mu", required=True, help="e.g. '1,1;2;;3' or a JSON list of lists")
    sp.add_argument("--points", type=int, help="number of blown-up points (blowup only)")
    sp.set_defaults(func=cmd_conjecture)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
