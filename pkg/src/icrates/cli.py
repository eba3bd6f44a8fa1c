"""Command-line front end.

Subcommands: ``classify``, ``region``, ``sumrate``, ``outer``, ``certify``,
``verify``, ``gaussian``.  All outputs are JSON (plus CSV frontiers for
regions) with byte-stable formatting; every document embeds the effective
configuration with resolved defaults.

Exit codes: 0 success / clean suite, 1 suite failures, 2 usage error,
3 validation or parse error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .channels import (
    DiscreteIC,
    GaussianIC,
    channel_digest,
    is_one_sided,
    load_channel,
    load_coupling,
)
from .errors import IcError
from .gaussian import GaussianNoisyReport, GaussianVeryWeakReport
from .regimes import (
    SearchConfig,
    check_noisy_gaussian,
    check_strong_both,
    check_very_weak,
    check_very_weak_gaussian,
)
from .regions import GAUSSIAN_SCHEMES, SCHEMES, RateRegion, region_gaussian, region_scheme
from .serialize import frontier_csv, stable_json_dumps
from .sumcap import certify_sum_capacity, gaussian_noisy_sumcap, outer_bound, tin_sumrate
from .verify import SUITES, run_suite


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, default=8, help="marginal simplex grid steps")
    p.add_argument("--cgrid", type=int, default=4, help="conditional simplex grid steps")
    p.add_argument("--aux-w", type=int, default=None, help="auxiliary layer cardinality")
    p.add_argument("--aux-u", type=int, default=None, help="auxiliary U cardinality")
    p.add_argument("--restarts", type=int, default=4, help="seeded random restarts")
    p.add_argument("--seed", type=int, default=0, help="search seed")
    p.add_argument("--angles", type=int, default=91, help="support angle samples")
    p.add_argument("--tol", type=float, default=None,
                   help="tolerance in bits for the command's main check")


def _config(args: argparse.Namespace) -> SearchConfig:
    kwargs = dict(
        grid_steps=args.grid,
        cond_grid_steps=args.cgrid,
        restarts=args.restarts,
        aux_card_w=args.aux_w,
        aux_card_u=args.aux_u,
        seed=args.seed,
        angles=args.angles,
    )
    if args.tol is not None:
        kwargs["violation_tol"] = args.tol
    return SearchConfig(**kwargs)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _channel_header(ch: DiscreteIC | GaussianIC) -> dict:
    if isinstance(ch, DiscreteIC):
        return {"type": "discrete", "digest": channel_digest(ch), "sizes": list(ch.sizes)}
    return {"type": "gaussian", "digest": channel_digest(ch),
            "a": ch.a, "b": ch.b, "p1": ch.p1, "p2": ch.p2}


def _gaussian_vw_dict(r: GaussianVeryWeakReport) -> dict:
    return {"in_regime": r.in_regime, "margin1": r.margin1, "margin2": r.margin2}


def _gaussian_noisy_dict(r: GaussianNoisyReport) -> dict:
    cert = None
    if r.certificate is not None:
        cert = {"eta1": r.certificate.eta1, "eta2": r.certificate.eta2,
                "rho1": r.certificate.rho1, "rho2": r.certificate.rho2}
    return {"in_regime": r.in_regime, "margin": r.margin,
            "certificate": cert, "search_feasible": r.search_feasible}


def _region_doc(region: RateRegion, scheme: str, header: dict, cfg_doc: dict) -> dict:
    return {
        "command": "region",
        "scheme": scheme,
        "channel": header,
        "region": region.to_json_dict(),
        "config": cfg_doc,
    }


def _cmd_classify(args: argparse.Namespace) -> int:
    ch = load_channel(args.channel)
    cfg = _config(args)
    if isinstance(ch, GaussianIC):
        side = "side_a" if ch.b == 0.0 else ("side_b" if ch.a == 0.0 else "none")
        doc = {
            "command": "classify",
            "channel": _channel_header(ch),
            "one_sided": side,
            "very_weak_gaussian": _gaussian_vw_dict(check_very_weak_gaussian(ch)),
            "noisy_gaussian": _gaussian_noisy_dict(check_noisy_gaussian(ch)),
            "config": cfg.to_json_dict(),
        }
    else:
        vw1, vw2 = check_very_weak(ch, cfg)
        st2, st1 = check_strong_both(ch, cfg)
        doc = {
            "command": "classify",
            "channel": _channel_header(ch),
            "one_sided": is_one_sided(ch).value,
            "very_weak": [vw1.to_json_dict(), vw2.to_json_dict()],
            "strong_y2": st2.to_json_dict(),
            "strong_y1": st1.to_json_dict(),
            "config": cfg.to_json_dict(),
        }
    _emit(stable_json_dumps(doc), args.out)
    return 0


def _cmd_region(args: argparse.Namespace) -> int:
    ch = load_channel(args.channel)
    cfg = _config(args)
    if isinstance(ch, GaussianIC):
        region = region_gaussian(ch, args.scheme, splits=args.splits, angles=args.angles)
    else:
        region = region_scheme(ch, args.scheme, cfg)
    doc = _region_doc(region, args.scheme, _channel_header(ch), cfg.to_json_dict())
    _emit(stable_json_dumps(doc), args.out)
    if args.csv:
        _emit(frontier_csv(region.theta_deg, region.h_bits, region.points), args.csv)
    return 0


def _cmd_sumrate(args: argparse.Namespace) -> int:
    ch = load_channel(args.channel)
    cfg = _config(args)
    if isinstance(ch, GaussianIC):
        raise IcError("use `gaussian sumcap` for gaussian channels")
    opt, value = tin_sumrate(ch, cfg)
    doc = {
        "command": "sumrate",
        "channel": _channel_header(ch),
        "tin_bits": value,
        "optimal_input": opt.to_json_dict(),
        "config": cfg.to_json_dict(),
    }
    _emit(stable_json_dumps(doc), args.out)
    return 0


def _cmd_outer(args: argparse.Namespace) -> int:
    ch = load_channel(args.channel)
    if not isinstance(ch, DiscreteIC):
        raise IcError("outer bound needs a discrete channel")
    vc = load_coupling(args.virtual)
    cfg = _config(args)
    doc = {
        "command": "outer",
        "channel": _channel_header(ch),
        "outer_bits": outer_bound(ch, vc, cfg),
        "config": cfg.to_json_dict(),
    }
    _emit(stable_json_dumps(doc), args.out)
    return 0


def _cmd_certify(args: argparse.Namespace) -> int:
    ch = load_channel(args.channel)
    if not isinstance(ch, DiscreteIC):
        raise IcError("certification needs a discrete channel")
    vc = load_coupling(args.virtual)
    cfg = _config(args)
    cert = certify_sum_capacity(ch, vc, cfg)
    doc = {
        "command": "certify",
        "channel": _channel_header(ch),
        **cert.to_json_dict(),
        "config": cfg.to_json_dict(),
    }
    _emit(stable_json_dumps(doc), args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    outcome = run_suite(args.suite, trials=args.trials, seed=args.seed, cfg=cfg, tol=args.tol)
    doc = {"command": "verify", **outcome.to_json_dict()}
    _emit(stable_json_dumps(doc), args.out)
    return 0 if outcome.ok else 1


def _cmd_gaussian(args: argparse.Namespace) -> int:
    g = GaussianIC(a=args.a, b=args.b, p1=args.p1, p2=args.p2)
    if args.mode == "regime":
        doc = {
            "command": "gaussian regime",
            "channel": _channel_header(g),
            "very_weak_gaussian": _gaussian_vw_dict(check_very_weak_gaussian(g)),
            "noisy_gaussian": _gaussian_noisy_dict(check_noisy_gaussian(g)),
            "config": {"certificate_search_points": 256},
        }
        _emit(stable_json_dumps(doc), args.out)
        return 0
    if args.mode == "sumcap":
        value = gaussian_noisy_sumcap(g)
        doc = {
            "command": "gaussian sumcap",
            "channel": _channel_header(g),
            "in_regime": value is not None,
            "sum_capacity_bits": value,
            "config": {},
        }
        _emit(stable_json_dumps(doc), args.out)
        return 0
    region = region_gaussian(g, args.scheme, splits=args.splits, angles=args.angles)
    doc = _region_doc(region, args.scheme, _channel_header(g),
                      {"splits": args.splits, "angles": args.angles})
    doc["command"] = "gaussian region"
    _emit(stable_json_dumps(doc), args.out)
    if args.csv:
        _emit(frontier_csv(region.theta_deg, region.h_bits, region.points), args.csv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icrates",
        description="Rate regions, regime classification, and sum-capacity "
                    "certificates for two-user interference channels.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("classify", help="regime report for a channel file")
    p.add_argument("channel")
    _add_search_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("region", help="rate region frontier for one scheme")
    p.add_argument("channel")
    p.add_argument("--scheme", required=True, choices=SCHEMES)
    p.add_argument("--splits", type=int, default=17, help="gaussian power-split grid")
    _add_search_flags(p)
    p.add_argument("--out", default=None, help="region JSON path (default stdout)")
    p.add_argument("--csv", default=None, help="frontier CSV path")
    p.set_defaults(fn=_cmd_region)

    p = sub.add_parser("sumrate", help="interference-as-noise sum rate")
    p.add_argument("channel")
    _add_search_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_sumrate)

    p = sub.add_parser("outer", help="genie-aided sum-rate outer bound")
    p.add_argument("channel")
    p.add_argument("--virtual", required=True, help="coupling JSON file")
    _add_search_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_outer)

    p = sub.add_parser("certify", help="sum-capacity certification pipeline")
    p.add_argument("channel")
    p.add_argument("--virtual", required=True, help="coupling JSON file")
    _add_search_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_certify)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=10)
    _add_search_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("gaussian", help="closed-form gaussian channel tools")
    p.add_argument("mode", choices=("regime", "region", "sumcap"))
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--scheme", default="tin", choices=GAUSSIAN_SCHEMES)
    p.add_argument("--splits", type=int, default=17)
    p.add_argument("--angles", type=int, default=91)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=_cmd_gaussian)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except IcError as e:
        sys.stderr.write(f"{e}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
