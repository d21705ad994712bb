"""Command-line interface: cumulants, mgf, sample, experiment, verify."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path


from . import acceptance, cumulants, ensembles, harness, moments
from .errors import AccuracyError, ConfigError, DomainError, NoClosedFormError, \
    UnsupportedFamilyError
from .moments import EnsembleSpec, Family


def _family(name: str) -> Family:
    key = name.strip().lower().replace("-", "_")
    for fam in Family:
        if fam.value == key or fam.name.lower() == key:
            return fam
    raise DomainError(f"unknown family {name!r}; choose from "
                      f"{[f.value for f in Family]}")


def _variant(name: str) -> harness.Variant:
    key = name.strip().lower().replace("-", "_")
    for v in harness.Variant:
        if v.value == key:
            return v
    raise DomainError(f"unknown variant {name!r}; choose from "
                      f"{[v.value for v in harness.Variant]}")


def _out_dir(arg) -> Path:
    if arg:
        return Path(arg)
    env = os.environ.get("LOGDETSTATS_OUT")
    return Path(env) if env else Path(".")


def _cmd_cumulants(args) -> int:
    spec = EnsembleSpec(family=_family(args.family), n=args.n)
    if args.asymptotic:
        payload = {}
        for j in (1, 2):
            if j > args.jmax:
                continue
            res = cumulants.asymptotic_cumulant(spec, j)
            payload[f"j{j}"] = res.value
            if res.undetermined_constant:
                payload[f"j{j}_undetermined_constant"] = True
    else:
        table = cumulants.cumulant_table(spec, args.jmax)
        payload = {f"j{j}": v for j, v in table.values}
        payload["method"] = table.method.value
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print("key,value")
        for k, v in sorted(payload.items()):
            print(f"{k},{v:.17g}" if isinstance(v, float) else f"{k},{v}")
    return 0


def _cmd_mgf(args) -> int:
    spec = EnsembleSpec(family=_family(args.family), n=args.n)
    if args.quadrature:
        value = moments.log_mgf_quadrature(spec, args.s)
    else:
        value = moments.log_mgf_closed(spec, args.s)
    if args.format == "json":
        print(json.dumps({"log_mgf": value}))
    else:
        print(f"{value:.17g}")
    return 0


def _cmd_sample(args) -> int:
    spec = EnsembleSpec(family=_family(args.family), n=args.n)
    out = Path(args.out) if args.out else _out_dir(None) / "samples.csv"
    from .logdet import log_abs_det  # local import keeps CLI start fast
    with open(out, "w") as fh:
        if args.emit == "logdet":
            fh.write("index,log_abs_det\n")
            for i in range(args.count):
                mat = ensembles.sample(spec, ensembles.RandomStream(args.seed, i))
                fh.write(f"{i},{log_abs_det(mat):.17g}\n")
        else:
            complex_entries = _family(args.family) in (
                Family.GUE, Family.GINIBRE_COMPLEX, Family.FOUR_MOMENT_WIGNER)
            cols = []
            for c in range(args.n):
                cols.extend([f"re{c}", f"im{c}"] if complex_entries else [f"c{c}"])
            fh.write("sample,row," + ",".join(cols) + "\n")
            for i in range(args.count):
                mat = ensembles.sample(spec, ensembles.RandomStream(args.seed, i))
                for r, rowvals in enumerate(mat.data):
                    cells = []
                    for z in rowvals:
                        if complex_entries:
                            cells.append(f"{z.real:.17g}")
                            cells.append(f"{z.imag:.17g}")
                        else:
                            cells.append(f"{z:.17g}")
                    fh.write(f"{i},{r}," + ",".join(cells) + "\n")
    print(str(out))
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    fam = _family(raw["family"])
    n = int(raw["n"])
    spec = EnsembleSpec(family=fam, n=n, beta=int(raw.get("beta", 0)))
    mdp = None
    if raw.get("mdp"):
        mdp = harness.MdpConfig(a_n=float(raw["mdp"]["a_n"]),
                                b=float(raw["mdp"]["b"]),
                                c=float(raw["mdp"]["c"]))
    cfg = harness.ExperimentConfig(
        spec=spec,
        variant=_variant(raw["variant"]),
        m=int(raw.get("m", harness.default_sample_count(n))),
        seed=int(raw["seed"]),
        shards=int(raw.get("shards", 1)),
        x_grid=tuple(raw.get("x_grid", harness.default_x_grid())),
        mdp=mdp,
    )
    summary = harness.run_experiment(cfg)
    out = _out_dir(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.json").write_text(harness.summary_json(summary))
    harness.write_samples_csv(summary, out / "samples.csv")
    print(str(out / "summary.json"))
    return 0


def _cmd_verify(args) -> int:
    results = acceptance.run_all(quick=args.quick)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="logdetstats",
        description="Finite-n statistics of log|det| for Gaussian ensembles")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cumulants", help="exact or asymptotic cumulant table")
    c.add_argument("--family", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--jmax", type=int, default=2)
    c.add_argument("--asymptotic", action="store_true")
    c.add_argument("--format", choices=("csv", "json"), default="json")
    c.set_defaults(fn=_cmd_cumulants)

    g = sub.add_parser("mgf", help="log E|det|^s")
    g.add_argument("--family", required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--s", type=float, required=True)
    g.add_argument("--quadrature", action="store_true")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.set_defaults(fn=_cmd_mgf)

    s = sub.add_parser("sample", help="draw matrices or log|det| values")
    s.add_argument("--family", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--emit", choices=("logdet", "matrices"), default="logdet")
    s.set_defaults(fn=_cmd_sample)

    e = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    e.add_argument("--config", required=True)
    e.add_argument("--out", default=None)
    e.set_defaults(fn=_cmd_experiment)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--quick", action="store_true")
    v.set_defaults(fn=_cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, NoClosedFormError, UnsupportedFamilyError,
            ConfigError, AccuracyError, FileNotFoundError, KeyError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
