"""Command-line front end: ``kreinweave {analyze,weave,jweave,erasure}``.

Subset indices in CLI input (``--check projection:2,3``) and output are
1-based, matching how families are usually written down by hand; the Python
API is 0-based.

Exit codes
----------
0  frame / weaving / J-weaving (certified), or erasure run finished
1  input, validation or budget error
2  not a frame / not weaving / not J-weaving (certified by a witness)
3  sampled mode found no counterexample (not refuted, not certified)
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import __version__
from .bundle import ReportEnvelope, digest, load_bundle
from .errors import KreinWeaveError
from .erasure import ErasureConfig, exact_erasure_mean, monte_carlo_bound, uniform_tight_frame
from .frames import frame_bounds, frame_operator, gramian, is_frame
from .jframes import is_j_weaving, sign_partition
from .weaving import (
    MAX_EXHAUSTIVE,
    SubsetSpec,
    check_equivalences,
    inverse_operator_weaving_check,
    operator_lower_bound_check,
    perturbation_weaving_check,
    projection_characterization_check,
    subset_masks,
    universal_bounds,
)

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE, EXIT_UNREFUTED = 0, 1, 2, 3

# keys whose values are 0-based index sets in library reports
_INDEX_KEYS = {"worst_subset", "s_min_subset", "sigma", "failing_subset", "plus", "minus"}

_CHECK_ALIASES = {
    "thm23": "equivalence",
    "prop25": "operator-lower",
    "prop28": "perturbation",
    "prop210": "inverse",
    "thm212": "projection",
}


def _one_based(obj, key=None):
    if isinstance(obj, dict):
        return {k: _one_based(v, k) for k, v in obj.items()}
    if isinstance(obj, list):
        if key in _INDEX_KEYS and all(isinstance(v, (int, np.integer)) for v in obj):
            return [int(v) + 1 for v in obj]
        return [_one_based(v) for v in obj]
    return obj


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (float, np.floating)):
        return f"{x:.6g}"
    if isinstance(x, (complex, np.complexfloating)):
        return f"{x.real:.6g}{x.imag:+.6g}j" if x.imag else f"{x.real:.6g}"
    if isinstance(x, (set, frozenset)):
        return "{" + ", ".join(str(i + 1) for i in sorted(x)) + "}"
    if isinstance(x, np.ndarray):
        return "(" + ", ".join(_fmt(v) for v in x) + ")"
    return str(x)


def _table(rows) -> str:
    w = max(len(k) for k, _ in rows)
    return "\n".join(f"  {k:<{w}}  {_fmt(v)}" for k, v in rows)


def _threads(args) -> int | None:
    env = os.environ.get("KW_THREADS")
    if env:
        return int(env)
    return args.threads


def _resolve_seed(seed):
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (1 << 63))
        print(f"seed: {seed} (drawn from entropy)")
    return seed


def _spec(mode: str, m: int, seed):
    if mode == "exhaustive":
        return SubsetSpec.exhaustive(m), None
    if mode.startswith("sampled:"):
        seed = _resolve_seed(seed)
        return SubsetSpec.sampled(m, int(mode.split(":", 1)[1]), seed), seed
    raise KreinWeaveError(f"--mode: expected 'exhaustive' or 'sampled:N', got {mode!r}")


def _parse_sigma(text: str, m: int):
    text = text.strip()
    if text == "all":
        return "all"
    if not text:
        return frozenset()
    try:
        idx = [int(t) - 1 for t in text.split(",")]
    except ValueError:
        raise KreinWeaveError(f"subset {text!r}: expected comma-separated 1-based indices") from None
    bad = [i + 1 for i in idx if not 0 <= i < m]
    if bad:
        raise KreinWeaveError(f"subset {text!r}: indices {bad} outside 1..{m}")
    return frozenset(idx)


def _emit(args, command, bundle_digest, seed, payload, t0) -> None:
    env = ReportEnvelope(__version__, command, bundle_digest, seed, _one_based(payload), time.perf_counter() - t0)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(env.to_json(include_timing=not args.no_timing))


def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    b = load_bundle(args.bundle)
    F = b.family(args.family)
    ok, witness = is_frame(F)
    fb = frame_bounds(F)
    G = gramian(F)
    part = sign_partition(F)
    payload = {
        "family": args.family,
        "m": len(F),
        "lower": fb.lower,
        "upper": fb.upper,
        "is_frame": ok,
        "witness": witness,
        "gramian": G if len(F) <= 16 else None,
        "gramian_eigenvalues": np.linalg.eigvalsh(G),
        "frame_operator": frame_operator(F),
        "sign_partition": part.to_dict(),
    }
    print(f"analyze {args.family} (m = {len(F)}, signature {b.space.signature})")
    print(
        _table(
            [
                ("lower bound", fb.lower),
                ("upper bound", fb.upper),
                ("is_frame", ok),
                ("sigma_plus", part.plus),
                ("sigma_minus", part.minus),
                ("gramian eig", np.linalg.eigvalsh(G)),
            ]
        )
    )
    if witness is not None:
        print(_table([("witness", witness)]))
    _emit(args, "analyze", digest(b), None, payload, t0)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _run_check(check: str, F, G, b, spec, workers):
    name, _, arg = check.partition(":")
    name = _CHECK_ALIASES.get(name, name)
    if name == "equivalence":
        return name, check_equivalences(F, G, spec, workers=workers).to_dict()
    if name == "operator-lower":
        return name, operator_lower_bound_check(F, G, spec, workers=workers).to_dict()
    if name == "perturbation":
        if not arg:
            raise KreinWeaveError("perturbation check needs an operator name: --check prop28:U")
        return name, perturbation_weaving_check(F, b.operator(arg), spec, workers=workers).to_dict()
    if name == "inverse":
        return name, inverse_operator_weaving_check(F, G, spec, workers=workers).to_dict()
    if name == "projection":
        sig = _parse_sigma(arg, len(F))
        if sig == "all":
            if len(F) > MAX_EXHAUSTIVE:
                raise KreinWeaveError(f"projection:all needs m <= {MAX_EXHAUSTIVE}")
            rows = [
                projection_characterization_check(F, G, np.flatnonzero(r)).to_dict()
                for batch in subset_masks(SubsetSpec.exhaustive(len(F)))
                for r in batch
            ]
            return name, {"all_agree": all(r["agree"] for r in rows), "subsets": rows}
        return name, projection_characterization_check(F, G, sig).to_dict()
    raise KreinWeaveError(f"unknown check {check!r}")


def _verdict_code(ok: bool, certified: bool) -> int:
    if not ok:
        return EXIT_NEGATIVE
    return EXIT_OK if certified else EXIT_UNREFUTED


def cmd_weave(args) -> int:
    t0 = time.perf_counter()
    b = load_bundle(args.bundle)
    F, G = b.family(args.first), b.family(args.second)
    spec, seed = _spec(args.mode, len(F), args.seed)
    workers = _threads(args)
    rep = universal_bounds(F, G, spec, table=args.table, workers=workers)
    payload = {"first": args.first, "second": args.second, "weaving": rep.to_dict(), "checks": {}}
    for check in args.check or []:
        name, res = _run_check(check, F, G, b, spec, workers)
        payload["checks"][name] = res
    status = "weaving" if rep.is_weaving else "NOT weaving"
    if rep.is_weaving and not rep.certified:
        status = "not refuted (sampled)"
    print(f"weave {args.first} / {args.second}: {status}")
    print(
        _table(
            [
                ("universal lower", rep.universal_lower),
                ("universal upper", rep.universal_upper),
                ("subsets examined", rep.n_subsets),
                ("exhaustive", rep.exhaustive),
                ("worst subset", rep.worst_subset),
                ("witness", rep.witness),
            ]
        )
    )
    for name, res in payload["checks"].items():
        flat = [(k, v) for k, v in res.items() if isinstance(v, (bool, float, int))]
        print(f"check {name}:")
        if flat:
            print(_table(flat))
    _emit(args, "weave", digest(b), seed, payload, t0)
    return _verdict_code(rep.is_weaving, rep.certified)


def cmd_jweave(args) -> int:
    t0 = time.perf_counter()
    b = load_bundle(args.bundle)
    F, G = b.family(args.first), b.family(args.second)
    spec, seed = _spec(args.mode, len(F), args.seed)
    rep = is_j_weaving(F, G, spec, bounds=args.bounds)
    payload = {"first": args.first, "second": args.second, "j_weaving": rep.to_dict()}
    status = "J-weaving" if rep.is_j_weaving else "NOT J-weaving"
    if rep.is_j_weaving and not rep.certified:
        status = "not refuted (sampled)"
    print(f"jweave {args.first} / {args.second}: {status}")
    rows = [("subsets examined", rep.n_subsets), ("failing subsets", rep.n_failing)]
    if rep.failing_subset is not None:
        fr = rep.failing_report
        side = fr.plus if not fr.plus.maximal_definite else fr.minus
        rows += [
            ("failing subset", rep.failing_subset),
            ("failing side", "positive" if side.sign > 0 else "negative"),
            ("definiteness margin", side.margin),
            ("span dimension", side.dim),
        ]
        if side.extremal_vector is not None:
            rows.append(("extremal vector", side.extremal_vector))
    print(_table(rows))
    if args.bounds:
        for sigma, entry in rep.per_subset:
            ts = entry["two_sided"]
            if "error" in ts:
                print(f"  sigma {_fmt(sigma)}: {ts['error']}")
            else:
                print(
                    f"  sigma {_fmt(sigma)}: alpha+ {_fmt(ts['alpha_plus'])} beta+ {_fmt(ts['beta_plus'])}"
                    f" alpha- {_fmt(ts['alpha_minus'])} beta- {_fmt(ts['beta_minus'])}"
                )
    _emit(args, "jweave", digest(b), seed, payload, t0)
    return _verdict_code(rep.is_j_weaving, rep.certified)


def cmd_erasure(args) -> int:
    t0 = time.perf_counter()
    if args.exhaustive:
        F = uniform_tight_frame(args.n, args.m)
        ks = np.eye(args.n)
        mean = exact_erasure_mean(F, F, range(args.m), ks, args.erasure_prob)
        cfg = ErasureConfig(args.n, args.m, 1, args.erasure_prob, 0)
        eps = cfg.epsilon
        payload = {
            "mode": "exhaustive",
            "mean_relative_error": mean,
            "epsilon": eps,
            "m_hat": mean / eps if eps > 0 else None,
            "n": args.n,
            "m": args.m,
            "erasure_prob": args.erasure_prob,
        }
        seed = None
        print(f"erasure n={args.n} m={args.m}: exact mean relative error {mean:.6g} over {2 ** args.m} patterns")
    else:
        seed = _resolve_seed(args.seed)
        cfg = ErasureConfig(
            n=args.n,
            m=args.m,
            trials=args.trials,
            erasure_prob=args.erasure_prob,
            seed=seed,
            test_vectors=args.test_vectors,
            second_frame=args.second_frame,
        )
        rep = monte_carlo_bound(cfg, workers=_threads(args))
        payload = {"mode": "monte_carlo", **rep.to_dict()}
        rows = [
            ("mean rel. error", rep.mean_relative_error),
            ("std error", rep.std_error),
            ("epsilon", rep.epsilon),
            ("M_hat", rep.m_hat if rep.m_hat is not None else "undefined (epsilon = 0)"),
            ("M_hat std error", rep.m_hat_std_error if rep.m_hat_std_error is not None else "-"),
        ]
        if not rep.unbiased:
            rows.append(("note", "2/m rescaling is unbiased only at erasure_prob = 0.5"))
        print(f"erasure n={cfg.n} m={cfg.m} trials={cfg.trials} seed={seed}")
        print(_table(rows))
    _emit(args, "erasure", None, seed, payload, t0)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the structured JSON report here")
    common.add_argument("--no-timing", action="store_true", help="omit wall time from the JSON report")
    common.add_argument("--threads", type=int, default=None, help="worker threads (env KW_THREADS overrides)")

    p = argparse.ArgumentParser(prog="kreinweave", description="Weaving frames in finite-dimensional Krein spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="frame bounds, Gramian and sign partition of one family")
    a.add_argument("bundle")
    a.add_argument("family")
    a.set_defaults(func=cmd_analyze)

    for name, func, help_ in (
        ("weave", cmd_weave, "universal weaving bounds of two families"),
        ("jweave", cmd_jweave, "J-weaving verdict of two families"),
    ):
        w = sub.add_parser(name, parents=[common], help=help_)
        w.add_argument("bundle")
        w.add_argument("first")
        w.add_argument("second")
        w.add_argument("--mode", default="exhaustive", help="'exhaustive' or 'sampled:N'")
        w.add_argument("--seed", type=int, default=None)
        w.set_defaults(func=func)
        if name == "weave":
            w.add_argument(
                "--check",
                action="append",
                help="thm23|prop25|prop28:U|prop210|thm212:SIGMA (aliases: equivalence, operator-lower, "
                "perturbation:U, inverse, projection:SIGMA); SIGMA is 1-based like 2,3 or 'all'",
            )
            w.add_argument("--table", action="store_true", help="include per-subset bounds in the report")
        else:
            w.add_argument("--bounds", action="store_true", help="include two-sided bounds per subset")

    e = sub.add_parser("erasure", parents=[common], help="Monte Carlo erasure reconstruction error")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--trials", type=int, default=10000)
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--erasure-prob", type=float, default=0.5)
    e.add_argument("--test-vectors", type=int, default=4)
    e.add_argument("--second-frame", choices=("same", "rotated"), default="same")
    e.add_argument("--exhaustive", action="store_true", help="enumerate all 2**m erasure patterns exactly")
    e.set_defaults(func=cmd_erasure)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KreinWeaveError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
