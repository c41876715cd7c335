"""Command-line entry point: ingest, synth, train, eval, sweep, pcc, serve.

Every run echoes its fully resolved invocation (defaults included) so any
result can be reproduced from the console log alone. Exit codes: 0 success,
1 runtime failure, 2 usage or validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import evaluation as ev
from . import gbm as gbm_mod
from .baselines import DnnConfig
from .core import ChunkMask, Dataset, dataset_validate, default_food_list, FoodCategoryList
from .features import FeatureConfig, build_feature_matrix, feature_names, mask_columns
from .geo import build_index
from .ingest import (
    BoundingBox,
    SynthConfig,
    category_summary,
    filter_scope,
    build_vocabulary,
    load_dataset,
    parse_profiles,
    save_dataset,
)


class ValidationFailure(Exception):
    """Input or dataset problems that should exit with status 2."""


def _echo(args: argparse.Namespace, flags: dict) -> None:
    parts = [f"--{k.replace('_', '-')} {v}" for k, v in flags.items() if v is not None]
    print(f"# placepulse {args.command} " + " ".join(parts))


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise ValidationFailure(f"{what} not found: {path}")
    return p


def _parse_box(text: str) -> BoundingBox:
    try:
        values = [float(v) for v in text.split(",")]
        if len(values) != 4:
            raise ValueError
        return BoundingBox(values[0], values[1], values[2], values[3])
    except ValueError:
        raise ValidationFailure(
            f"box must be 'minlat,minlon,maxlat,maxlon' with min < max, got {text!r}")


def _load_dataset_checked(path: str) -> Dataset:
    _require_file(path, "dataset file")
    try:
        return load_dataset(path)
    except (ValueError, KeyError) as exc:
        raise ValidationFailure(f"cannot load dataset: {exc}")


def _mask_arg(text: str) -> ChunkMask:
    try:
        return ChunkMask.from_string(text)
    except ValueError as exc:
        raise ValidationFailure(str(exc))


def cmd_ingest(args) -> int:
    _echo(args, {"in": args.infile, "out": args.out, "box": args.box,
                 "food-list": args.food_list or "(builtin)",
                 "food-only": args.food_only, "rejects": args.rejects,
                 "summary-out": args.summary_out})
    src = _require_file(args.infile, "input path")
    box = _parse_box(args.box)
    if args.food_list:
        food_path = _require_file(args.food_list, "food list")
        labels = [l.strip() for l in food_path.read_text(encoding="utf-8").splitlines()
                  if l.strip()]
        if not labels:
            raise ValidationFailure("food list file is empty")
        food = FoodCategoryList(frozenset(labels))
    else:
        food = default_food_list()

    with open(src, "r", encoding="utf-8") as fh:
        profiles, rejects = parse_profiles(fh)
    kept = filter_scope(profiles, box, food, food_only=args.food_only)
    if not kept:
        raise ValidationFailure("no profiles retained; nothing to build")

    rejects_path = args.rejects or (str(src) + ".rejects.jsonl")
    with open(rejects_path, "w", encoding="utf-8") as fh:
        for r in rejects:
            fh.write(json.dumps({"line_no": r.line_no, "reason": r.reason,
                                 "raw": r.raw}) + "\n")

    dataset = Dataset(profiles=kept, vocabulary=build_vocabulary(kept), food_list=food)
    violations = dataset_validate(dataset)
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        raise ValidationFailure(f"dataset has {len(violations)} invariant violations")
    save_dataset(dataset, args.out)

    if args.summary_out:
        with open(args.summary_out, "w", encoding="utf-8") as fh:
            fh.write("label,count,total_checkins,expected,pct_above\n")
            for row in category_summary(kept):
                fh.write(f"{row.label},{row.business_count},{row.total_checkins},"
                         f"{row.expected_checkins_per_business!r},"
                         f"{row.pct_above_expected!r}\n")
        print(f"wrote category summary to {args.summary_out}")

    n_food = sum(1 for p in kept if p.is_food)
    print(f"parsed {len(profiles) + len(rejects)} lines: "
          f"{len(profiles)} ok, {len(rejects)} rejected")
    print(f"kept {len(kept)} in scope ({n_food} food), vocabulary size "
          f"{len(dataset.vocabulary)}")
    print(f"wrote {args.out}; rejects in {rejects_path}")
    return 0


def cmd_synth(args) -> int:
    _echo(args, {"n": args.n, "centers": args.centers, "box": args.box,
                 "decay-scale": args.decay_scale, "noise": args.noise,
                 "categories": args.categories, "seed": args.seed, "out": args.out})
    box = _parse_box(args.box)
    try:
        cfg = SynthConfig(n_profiles=args.n, n_hotspot_centers=args.centers,
                          box=box, decay_scale_m=args.decay_scale,
                          noise_sigma=args.noise,
                          category_pool_size=args.categories, seed=args.seed)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    from .ingest import synth_generate
    dataset = synth_generate(cfg)
    save_dataset(dataset, args.out)
    checkins = [p.checkins for p in dataset.profiles]
    print(f"generated {len(dataset)} profiles, vocabulary size "
          f"{len(dataset.vocabulary)}, check-ins min/median/max "
          f"{min(checkins)}/{int(np.median(checkins))}/{max(checkins)}")
    print(f"wrote {args.out}")
    return 0


def _gbm_config(args) -> gbm_mod.GbmConfig:
    try:
        return gbm_mod.GbmConfig(n_iterations=args.iterations,
                                 learning_rate=args.learning_rate,
                                 max_depth=args.max_depth, seed=args.seed)
    except ValueError as exc:
        raise ValidationFailure(str(exc))


def cmd_train(args) -> int:
    _echo(args, {"in": args.infile, "out": args.out, "mask": args.mask,
                 "iterations": args.iterations, "learning-rate": args.learning_rate,
                 "max-depth": args.max_depth, "seed": args.seed})
    dataset = _load_dataset_checked(args.infile)
    mask = _mask_arg(args.mask)
    cfg = _gbm_config(args)
    fcfg = FeatureConfig(vocabulary=dataset.vocabulary)
    idx = build_index(dataset.profiles, max(fcfg.radii.radii))
    cols = mask_columns(mask, len(dataset.vocabulary))
    X = build_feature_matrix(dataset.profiles, idx, fcfg, exclude_self=True)[:, cols]
    y = np.log1p(np.array([p.checkins for p in dataset.profiles], dtype=np.float64))
    model = gbm_mod.fit(X, y, cfg)
    gbm_mod.save_model(model, args.out)

    names = [feature_names(fcfg)[c] for c in cols]
    order = np.argsort(-model.importance)
    print(f"trained {len(model.trees)} trees on {X.shape[0]} profiles x "
          f"{X.shape[1]} features (mask {mask.to_string()})")
    print(f"final training MSE (log scale): {model.train_mse[-1]:.6f}")
    print("top feature importance:")
    for rank, c in enumerate(order[:20], start=1):
        print(f"  {rank:2d}. {names[c]:<32s} {model.importance[c]:.5f}")
    print(f"wrote {args.out}")
    return 0


def cmd_eval(args) -> int:
    _echo(args, {"in": args.infile, "mask": args.mask, "family": args.family,
                 "k": args.k, "seed": args.seed, "radius": args.radius,
                 "iterations": args.iterations, "learning-rate": args.learning_rate,
                 "max-depth": args.max_depth, "out": args.out})
    dataset = _load_dataset_checked(args.infile)
    try:
        plan = ev.make_folds([p.id for p in dataset.profiles], k=args.k, seed=args.seed)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    if args.family == "gbm":
        cfg = _gbm_config(args)
        mask = _mask_arg(args.mask)
    elif args.family == "dnn":
        cfg = DnnConfig(radius=args.radius)
        mask = None
    else:
        cfg, mask = None, None
    report = ev.cross_validate(dataset, mask, args.family, cfg, plan)
    print(f"{'fold':>4}  {'MALE':>10}  {'MSLE':>10}")
    for i, (m, s) in enumerate(zip(report.fold_male, report.fold_msle)):
        print(f"{i:>4}  {m:>10.5f}  {s:>10.5f}")
    print(f"{'mean':>4}  {report.mean_male:>10.5f}  {report.mean_msle:>10.5f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2)
        print(f"wrote {args.out}")
    return 0


def cmd_sweep(args) -> int:
    _echo(args, {"in": args.infile, "family": args.family, "k": args.k,
                 "seed": args.seed, "iterations": args.iterations,
                 "learning-rate": args.learning_rate, "max-depth": args.max_depth,
                 "out": args.out, "counts-out": args.counts_out})
    dataset = _load_dataset_checked(args.infile)
    try:
        plan = ev.make_folds([p.id for p in dataset.profiles], k=args.k, seed=args.seed)
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    cfg = _gbm_config(args)
    rows, counts = ev.variant_sweep(dataset, args.family, cfg, plan)
    ev.write_sweep_csv(args.out, rows)
    counts_out = args.counts_out or (str(Path(args.out).with_suffix("")) + "_counts.csv")
    ev.write_counts_csv(counts_out, counts)
    best = sorted(rows, key=lambda r: r.mean_msle)[:10]
    print(f"{len(rows)} variants evaluated; top 10 by MSLE:")
    for r in best:
        print(f"  {r.mask.to_string()}  male={r.mean_male:.5f}  msle={r.mean_msle:.5f}")
    print("chunk presence in top 10 (male): " + " ".join(map(str, counts["male"])))
    print("chunk presence in top 10 (msle): " + " ".join(map(str, counts["msle"])))
    print(f"wrote {args.out} and {counts_out}")
    return 0


def cmd_pcc(args) -> int:
    _echo(args, {"in": args.infile, "signal": args.signal, "out": args.out})
    dataset = _load_dataset_checked(args.infile)
    idx = build_index(dataset.profiles, 1000.0)
    curve = ev.pcc_by_radius(dataset, idx, neighbor_signal=args.signal)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("radius_m,pcc\n")
        for r in sorted(curve):
            fh.write(f"{r},{curve[r]!r}\n")
    for r in sorted(curve):
        print(f"  r={r:>4d} m  pcc={curve[r]:+.4f}")
    print(f"wrote {args.out}")
    return 0


def cmd_serve(args) -> int:
    _echo(args, {"in": args.infile, "model": args.model, "mask": args.mask,
                 "host": args.host, "port": args.port})
    dataset = _load_dataset_checked(args.infile)
    _require_file(args.model, "model file")
    try:
        model = gbm_mod.load_model(args.model)
    except (ValueError, KeyError) as exc:
        raise ValidationFailure(f"cannot load model: {exc}")
    from .service import create_app, make_state
    try:
        state = make_state(dataset, model, _mask_arg(args.mask))
    except ValueError as exc:
        raise ValidationFailure(str(exc))
    app = create_app(state)
    import uvicorn
    print(f"serving {len(dataset)} profiles on http://{args.host}:{args.port}")
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:
        # uvicorn exits 3 on startup failures such as a port already in use
        if exc.code:
            print(f"error: server failed to start on {args.host}:{args.port}",
                  file=sys.stderr)
            return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="placepulse",
        description="Location popularity analytics: predict check-ins anywhere on the map")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_gbm_flags(p):
        p.add_argument("--iterations", type=int, default=1000)
        p.add_argument("--learning-rate", type=float, default=0.1)
        p.add_argument("--max-depth", type=int, default=10)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("ingest", help="parse a profiles.jsonl crawl into a dataset bundle")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--box", default="1.13,103.6,1.48,104.1",
                   help="minlat,minlon,maxlat,maxlon")
    p.add_argument("--food-list", default=None,
                   help="newline-separated labels; builtin list when omitted")
    p.add_argument("--food-only", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--rejects", default=None, help="sidecar report path")
    p.add_argument("--summary-out", default=None,
                   help="optional per-category statistics CSV")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate a deterministic synthetic city")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--centers", type=int, default=5)
    p.add_argument("--box", default="1.24,103.80,1.30,103.86")
    p.add_argument("--decay-scale", type=float, default=120.0)
    p.add_argument("--noise", type=float, default=0.6)
    p.add_argument("--categories", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit the boosted model on a dataset")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mask", default="111111")
    add_gbm_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="k-fold cross-validation of one model family")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--family", choices=("gbm", "dnn", "mean"), default="gbm")
    p.add_argument("--mask", default="111111")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--radius", type=float, default=100.0,
                   help="neighborhood radius for the dnn family")
    p.add_argument("--out", default=None, help="report JSON path")
    add_gbm_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="evaluate all 63 chunk-mask variants")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--family", choices=("gbm",), default="gbm")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", required=True, help="sweep CSV path")
    p.add_argument("--counts-out", default=None, help="top-10 counts CSV path")
    add_gbm_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pcc", help="neighbor-signal correlation curve by radius")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--signal", choices=("checkins", "likes"), default="checkins")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pcc)

    p = sub.add_parser("serve", help="run the prediction HTTP service")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--mask", default="111111")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures exit 1, never a traceback
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
