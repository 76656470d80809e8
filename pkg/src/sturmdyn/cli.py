"""Command-line driver: ``words``, ``spectrum``, and ``dynamics`` subcommands.

Runs are config-driven and deterministic: the effective configuration
(including the random seed) is embedded in every output file, floats print
with 17 significant digits, and nothing time- or host-dependent is written,
so identical configs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import LeakageError, SturmdynError
from .rotations import (
    RotationNumber,
    convergents,
    growth_certificate,
    real_value,
)
from .spectra import (
    band_set,
    band_set_csv,
    band_set_json,
    derivative_bound_check,
    generating_bands,
    sigma_approx,
)
from .dynamics import verify_dynbound
from .words import factors, k_partition, sample_potential, standard_word, word_length

SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def parse_rotation(text: str) -> RotationNumber:
    """golden | silver | a float in (0,1) | comma list of coefficients,
    optionally ending in ",..." to repeat the final block forever."""
    text = text.strip()
    if text == "golden":
        return RotationNumber.golden()
    if text == "silver":
        return RotationNumber.periodic([2])
    if "," in text:
        periodic = text.endswith(",...")
        body = text[:-4] if periodic else text
        coeffs = [int(tok) for tok in body.split(",") if tok.strip()]
        if periodic:
            return RotationNumber.periodic(coeffs)
        return RotationNumber.from_coefficients(coeffs)
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse rotation number {text!r}")
    return RotationNumber.from_float(x)


def _theta(value: str) -> float:
    x = float(value)
    if not 0.0 <= x < 1.0:
        raise argparse.ArgumentTypeError("theta must lie in [0, 1)")
    return x


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _json_doc(config: dict, results) -> str:
    return json.dumps(
        {"schema_version": SCHEMA_VERSION, "config": config, "results": results},
        sort_keys=True,
        indent=2,
        default=_fmt,
    ) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_words(args, config) -> int:
    rot = args.alpha
    lines = []
    results: dict = {}
    if args.k is not None:
        s = standard_word(rot, args.k)
        lines.append(f"s_{args.k} = {s}")
        results["standard_word"] = {"k": args.k, "word": s, "length": len(s)}
    if args.complexity is not None:
        n = args.complexity
        qm = 1
        m = 0
        while word_length(rot, m) < max(n, 1):
            m += 1
        qm = word_length(rot, m)
        pad = 2 * (n + qm) + 4
        window = sample_potential(rot, args.theta, 1, pad)
        count = len(factors(window, n))
        lines.append(f"n={n}: {count} factors")
        results["complexity"] = {"n": n, "count": count}
    if args.partition is not None:
        k = args.partition
        margin = word_length(rot, k + 2)
        lo, hi = args.range
        window = sample_potential(rot, args.theta, lo - margin, hi + margin)
        part = k_partition(window, k, reporting=(lo, hi))
        lines.append(f"{len(part.blocks)} blocks at level {k} on [{lo},{hi}]")
        results["partition"] = {
            "level": k,
            "range": [lo, hi],
            "blocks": part.to_json_obj(),
        }
    for line in lines:
        print(line)
    if args.out:
        _write(Path(args.out) / "words.json", _json_doc(config, results))
    return 0


def cmd_spectrum(args, config) -> int:
    rot = args.alpha
    results: dict = {}
    out = Path(args.out) if args.out else None
    if args.check_lwcor and args.lam <= 20:
        print(
            "error: the derivative-bound check requires coupling > 20",
            file=sys.stderr,
        )
        return 2
    if args.k is not None and args.p is not None:
        bs = band_set(args.k, args.p, args.lam, rot)
        print(f"sigma_({args.k},{args.p}): {len(bs.bands)} bands")
        if out:
            _write(out / "bands.csv", band_set_csv(bs))
            _write(out / "bands.json", band_set_json(bs))
        results["band_count"] = len(bs.bands)
    if args.generating is not None:
        bands = generating_bands(args.generating, args.lam, rot)
        print(f"order {args.generating}: {len(bands)} generating bands")
        results["generating"] = [
            {"lo": _fmt(b.lo), "hi": _fmt(b.hi), "type": b.band_type,
             "type_index": b.type_word()}
            for b in bands
        ]
    if args.check_lwcor:
        reports = []
        for k in range(1, args.lwcor_k + 1):
            rep = derivative_bound_check(k, args.lam, rot,
                                         samples_per_band=args.samples_per_band)
            reports.append({"k": k, "min_ratio": _fmt(rep.min_ratio),
                            "bound": _fmt(rep.bound)})
            print(f"k={k}: min |x_k'|/bound = {rep.min_ratio:.6g}")
        results["lwcor"] = reports
    if args.sigma_approx is not None:
        approx = sigma_approx(args.sigma_approx, args.lam, rot)
        measure = sum(b - a for a, b in approx)
        print(f"depth-{args.sigma_approx} approximant: {len(approx)} intervals, "
              f"measure {measure:.6g}")
        results["sigma_approx"] = {
            "depth": args.sigma_approx,
            "intervals": [[_fmt(a), _fmt(b)] for a, b in approx],
            "measure": _fmt(measure),
        }
    if out and results:
        _write(out / "spectrum.json", _json_doc(config, results))
    return 0


def cmd_dynamics(args, config) -> int:
    rot = args.alpha
    rng = np.random.default_rng(args.seed)
    thetas = [args.theta]
    if args.theta_sweep:
        thetas = [float(x) for x in rng.random(args.theta_sweep)]
    rows = []
    exponent = None
    for theta in thetas:
        res = verify_dynbound(
            args.lam, rot, theta, args.T, C1=args.c1, N=args.N,
            diagnostic_exponents=tuple(args.diagnostic_exponents),
        )
        exponent = res.exponent
        for T, radius, prob in zip(res.T_grid, res.radii, res.inside_prob):
            rows.append({"theta": theta, "T": T, "radius": radius,
                         "inside_prob": prob, "leakage": res.leakage})
    print(f"p(lambda, alpha) = {exponent:.6g}")
    floor = min(r["inside_prob"] for r in rows)
    print(f"min inside probability over grid: {floor:.9g}")
    if args.out:
        out = Path(args.out)
        lines = ["# schema_version=1", "theta,T,radius,inside_prob,leakage"]
        for r in rows:
            lines.append(",".join(_fmt(r[c]) for c in
                                  ("theta", "T", "radius", "inside_prob", "leakage")))
        _write(out / "dynamics.csv", "\n".join(lines) + "\n")
        _write(out / "dynamics.json",
               _json_doc(config, {"exponent": _fmt(exponent), "rows": [
                   {k: _fmt(v) for k, v in r.items()} for r in rows]}))
    return 0


def cmd_rotation(args, config) -> int:
    rot = args.alpha
    K = rot.depth_or(args.depth)
    table = convergents(rot, K)
    cert = growth_certificate(table)
    print(f"alpha = {real_value(rot, K):.15g}  ({rot.describe()})")
    print(f"q: {list(table.q[: min(K, 12) + 1])}")
    print(f"B_est = {cert.B_est:.15g} at depth {cert.depth}")
    if args.out:
        _write(Path(args.out) / "rotation.json", _json_doc(config, {
            "rotation": json.loads(rot.to_json()),
            "value": _fmt(real_value(rot, K)),
            "B_est": _fmt(cert.B_est),
            "depth": cert.depth,
        }))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sturmdyn",
        description="Sturmian quasicrystal operators: words, spectra, dynamics",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", type=Path, help="JSON file with defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--alpha", type=parse_rotation, default=None,
                       help="golden | silver | float | a1,a2,... (',...' repeats)")
        p.add_argument("--out", help="output directory")

    w = sub.add_parser("words", help="word tables, complexity, partitions")
    common(w)
    w.add_argument("--theta", type=_theta, default=0.0)
    w.add_argument("--k", type=int, default=None, help="print the standard word s_k")
    w.add_argument("--complexity", type=int, default=None,
                   help="count the factors of this length")
    w.add_argument("--partition", type=int, default=None,
                   help="emit the partition at this level")
    w.add_argument("--range", type=int, nargs=2, default=(1, 30),
                   metavar=("LO", "HI"))
    w.set_defaults(func=cmd_words)

    s = sub.add_parser("spectrum", help="band sets, hierarchy, derivative bounds")
    common(s)
    s.add_argument("--lambda", dest="lam", type=float, default=24.0)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--generating", type=int, default=None, metavar="ORDER")
    s.add_argument("--check-lwcor", action="store_true")
    s.add_argument("--lwcor-k", type=int, default=6)
    s.add_argument("--samples-per-band", type=int, default=9)
    s.add_argument("--sigma-approx", type=int, default=None, metavar="DEPTH")
    s.set_defaults(func=cmd_spectrum)

    d = sub.add_parser("dynamics", help="time evolution and spreading bounds")
    common(d)
    d.add_argument("--lambda", dest="lam", type=float, default=24.0)
    d.add_argument("--theta", type=_theta, default=0.0)
    d.add_argument("--N", type=int, default=300)
    d.add_argument("--T", type=lambda s: [float(x) for x in s.split(",")],
                   default=[5.0, 10.0])
    d.add_argument("--c1", type=float, default=1.0)
    d.add_argument("--diagnostic-exponents", type=lambda s: [float(x) for x in s.split(",")],
                   default=[])
    d.add_argument("--theta-sweep", type=int, default=0, metavar="COUNT")
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_dynamics)

    r = sub.add_parser("rotation", help="convergents and growth certificate")
    common(r)
    r.add_argument("--depth", type=int, default=20)
    r.set_defaults(func=cmd_rotation)

    return parser


def _effective_config(args) -> dict:
    # the output path is where results land, not part of what was computed
    skip = {"func", "config", "out"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(val, RotationNumber):
            val = json.loads(val.to_json())
        elif isinstance(val, Path):
            val = str(val)
        elif isinstance(val, Fraction):
            val = float(val)
        out[key] = val
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = json.loads(Path(args.config).read_text())
        for key, val in defaults.items():
            attr = key.replace("-", "_")
            if getattr(args, attr, None) in (None, parser.get_default(attr)):
                if attr == "alpha" and isinstance(val, str):
                    val = parse_rotation(val)
                setattr(args, attr, val)
    if getattr(args, "alpha", None) is None:
        args.alpha = RotationNumber.golden()
    config = _effective_config(args)
    try:
        return args.func(args, config)
    except LeakageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.suggested_half_width:
            print(f"suggested half-width: N >= {exc.suggested_half_width}",
                  file=sys.stderr)
        return 3
    except SturmdynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
