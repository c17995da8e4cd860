"""Seeded experiment runner.

Every subcommand emits machine-readable output (CSV with a '#' metadata
header, or tab-separated reports) that is byte-reproducible from the
resolved configuration and seed embedded in the header.

Exit codes: 0 success, 1 usage error, 2 verification or acceptance failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import attacks, information, noise, optics, protocol, walk

_FMT = "%.12g"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this tool reserves 2 for
    # verification failures, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _fmt(value) -> str:
    if isinstance(value, float) or isinstance(value, np.floating):
        return _FMT % value
    return str(value)


def _write_csv(path: str | None, meta: dict, header: list[str], rows) -> None:
    lines = [f"# {key}={_fmt(val)}" for key, val in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_config_file(path: str) -> dict:
    """key=value lines; '#' comments; values stay strings."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {line!r} is not key=value")
        key, val = line.split("=", 1)
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def _resolve(args, key, cast, default=None):
    """Flag value if given, else config-file value, else default."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in args._file_config:
        return cast(args._file_config[key])
    return default


def _walk_config(args) -> walk.WalkConfig:
    k = _resolve(args, "k", int, 5)
    rho_raw = _resolve(args, "rho", str)
    chi = _resolve(args, "chi", float, walk.DEFAULT_COIN_ANGLE)
    if rho_raw is None or str(rho_raw) == "table1":
        rho, t_r = walk.known_cycle_params(k)
        return walk.WalkConfig(k=k, rho=rho, chi=chi, t_r=t_r)
    config = walk.WalkConfig(k=k, rho=float(rho_raw), chi=chi)
    t_r = walk.find_recurrence(config, 200)
    return walk.WalkConfig(k=k, rho=float(rho_raw), chi=chi, t_r=t_r)


def _noise_spec(args) -> noise.NoiseSpec:
    kind = _resolve(args, "noise", str, "none")
    gammas = _gamma_list(args)
    gamma = gammas[0] if gammas else 0.0
    return noise.NoiseSpec(kind=kind, gamma=gamma)


def _gamma_list(args) -> list[float]:
    raw = _resolve(args, "gamma", str)
    if raw is None:
        return []
    return [float(g) for g in str(raw).split(",") if g != ""]


def _meta(args, config, **extra) -> dict:
    meta = {"command": args.command, "k": config.k, "rho": config.rho,
            "chi": config.chi, "t_r": config.t_r}
    meta.update(extra)
    return meta


# --- subcommands ----------------------------------------------------------------

def cmd_walk(args) -> int:
    config = _walk_config(args)
    t_max = _resolve(args, "steps", int, 120)
    state = walk.initial_state(config, 0)
    rows = [(0, 1.0)]
    for t in range(1, t_max + 1):
        state = walk.evolve(state, config, 1)
        rows.append((t, float(walk.position_distribution(state)[0])))
    _write_csv(args.out, _meta(args, config, steps=t_max), ["t", "p_initial"], rows)
    return 0


def cmd_table1(args) -> int:
    rows = []
    for k in walk.SUPPORTED_CYCLES:
        config = walk.known_cycle_config(k)
        joint = information.joint_distribution(config)
        rows.append((
            k, config.rho, config.t_r,
            float(information.marginal_oam(joint)[0]),
            information.eve_mutual_information(joint),
        ))
    meta = {"command": args.command, "chi": walk.DEFAULT_COIN_ANGLE}
    _write_csv(args.out, meta, ["k", "rho", "t_r", "p_ell_min", "eve_mutual_information"], rows)
    return 0


def cmd_noise_sweep(args) -> int:
    config = _walk_config(args)
    kind = _resolve(args, "noise", str, "amplitude_damping")
    gammas = _gamma_list(args) or [0.0, 0.01, 0.1, 0.3, 0.5]
    t_max = _resolve(args, "steps", int, config.t_r or 60)
    rows = []
    for gamma in gammas:
        spec = noise.NoiseSpec(kind=kind, gamma=gamma) if gamma else noise.NoiseSpec()
        rho = noise.to_density(walk.initial_state(config, 0))
        rows.append((0, gamma, 1.0, information.mutual_information_quantum(rho)))
        for t in range(1, t_max + 1):
            rho = noise.noisy_step(rho, config, spec)
            p = float((rho[0, 0] + rho[config.k, config.k]).real)
            rows.append((t, gamma, p, information.mutual_information_quantum(rho)))
    meta = _meta(args, config, noise=kind, steps=t_max, gammas=",".join(_FMT % g for g in gammas))
    _write_csv(args.out, meta, ["t", "gamma", "p_initial", "mutual_information"], rows)
    return 0


def cmd_joint(args) -> int:
    config = _walk_config(args)
    joint = information.joint_distribution(config)
    header = ["ell"] + [str(t) for t in joint.steps]
    rows = []
    for i, ell in enumerate(joint.labels):
        rows.append([ell] + [float(v) for v in joint.table[i]])
    meta = _meta(args, config,
                 p_ell_min=float(information.marginal_oam(joint)[0]),
                 eve_mutual_information=information.eve_mutual_information(joint))
    _write_csv(args.out, meta, header, rows)
    return 0


def cmd_protocol(args) -> int:
    config = _walk_config(args)
    n = _resolve(args, "n", int, 40)
    seed = _resolve(args, "seed", int, 0)
    reps = _resolve(args, "reps", int, 1)
    message = _resolve(args, "message", str, "hi")
    spec = _noise_spec(args)
    digits = protocol.encode_message_text(message, config.k)
    capacity = n // 2
    if len(digits) > capacity:
        sys.stderr.write(f"error: message needs {len(digits)} digits, capacity is {capacity}\n")
        return 1
    params = protocol.ProtocolParams(
        n=n, config=config, seed=seed, noise=spec,
        repetitions=reps, message_digits=tuple(digits),
    )
    eve_kind = _resolve(args, "eve", str, "none")
    x = _resolve(args, "x", int, 0)
    eve = None if eve_kind == "none" else attacks.EveStrategy(kind=eve_kind, x=x)

    if reps > 1:
        voted = protocol.run_with_repetitions(params, eve)
        decoded = voted
        transcript = None
    else:
        transcript = protocol.run_protocol(params, eve)
        decoded = None if transcript.aborted else transcript.decoded_digits

    header = [
        f"# command=protocol", f"# k={config.k}", f"# rho={_FMT % config.rho}",
        f"# t_r={config.t_r}", f"# n={n}", f"# seed={seed}", f"# reps={reps}",
        f"# noise={spec.kind}", f"# gamma={_FMT % spec.gamma}", f"# eve={eve_kind}",
        f"# message={message}",
    ]
    body = transcript.to_text() if transcript is not None else ""
    text = "\n".join(header) + "\n" + body
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)

    if decoded is None:
        print("verdict: aborted (security check failed)" if reps == 1
              else "verdict: aborted (no successful repetitions)")
        return 0
    recovered = protocol.decode_message_text(decoded, config.k)
    exact = recovered == message.encode("utf-8")
    print(f"decoded digits: {decoded}")
    print(f"recovered message: {recovered!r}  exact={exact}")
    return 0


def cmd_attack(args) -> int:
    config = _walk_config(args)
    n = _resolve(args, "n", int, 400)
    seed = _resolve(args, "seed", int, 0)
    trials = _resolve(args, "trials", int, 10000)
    x = _resolve(args, "x", int, 0)
    spec = _noise_spec(args)
    params = protocol.ProtocolParams(n=n, config=config, seed=seed, noise=spec)
    rng = np.random.default_rng(seed)
    report = attacks.optimal_attack_simulation(params, x, trials, rng)
    n_quarter = n // 4
    header = [
        f"# command=attack", f"# k={config.k}", f"# t_r={config.t_r}", f"# n={n}",
        f"# seed={seed}", f"# trials={trials}", f"# x={x}",
        f"# noise={spec.kind}", f"# gamma={_FMT % spec.gamma}",
        f"# decrypt-log10-probability={_FMT % attacks.decrypt_log10_probability(n_quarter, config.t_r)}",
    ]
    text = "\n".join(header) + "\n" + report.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"detection rate: {report.detection_rate:.4f} +- {report.detection_se:.4f} "
          f"(noiseless closed form {report.analytic_detection:.4f})")
    return 0


def cmd_verify_optics(args) -> int:
    config = _walk_config(args)
    layout = optics.parse_layout(Path(args.layout).read_text(), config.k)
    target_name = _resolve(args, "target", str, "step")
    targets = {
        "step": lambda: walk.step_operator(config),
        "shift": lambda: walk.shift_operator(config.k),
        "identity": lambda: np.eye(2 * config.k, dtype=complex),
    }
    if target_name not in targets:
        sys.stderr.write(f"error: unknown target {target_name!r}\n")
        return 1
    try:
        ok, distance = optics.verify_step_layout(layout, config, targets[target_name]())
    except (optics.LayoutError, optics.SorterInterferenceError) as exc:
        print(f"FAIL: layout invalid: {exc}")
        return 2
    print(f"{'PASS' if ok else 'FAIL'}: operator distance to {target_name} = {distance:.3e}")
    return 0 if ok else 2


# --- entry point -------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="cyclewalk", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", help="key=value config file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **flags):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        for flag, (cast, help_text) in flags.items():
            p.add_argument(f"--{flag}", type=cast, help=help_text)
        return p

    common = {
        "k": (int, "cycle length"),
        "rho": (str, "coin parameter, or 'table1' for the known revival value"),
        "chi": (float, "initial coin angle"),
        "out": (str, "output path (default: stdout)"),
    }
    add("walk", cmd_walk, **common, steps=(int, "number of steps"))
    add("table1", cmd_table1, out=(str, "output path"))
    add("noise-sweep", cmd_noise_sweep, **common,
        noise=(str, "amplitude_damping or depolarizing"),
        gamma=(str, "comma-separated gamma grid"),
        steps=(int, "number of steps"))
    add("joint", cmd_joint, **common)
    add("protocol", cmd_protocol, **common,
        n=(int, "photon count, multiple of 4"), seed=(int, "run seed"),
        reps=(int, "odd repetition count for majority voting"),
        noise=(str, "channel noise kind"), gamma=(str, "noise strength"),
        eve=(str, "none, intercept_resend_all, or tamper_subset"),
        x=(int, "photons Eve tampers (tamper_subset)"),
        message=(str, "message text to transmit"))
    add("attack", cmd_attack, **common,
        n=(int, "photon count, multiple of 4"), seed=(int, "simulation seed"),
        trials=(int, "Monte Carlo trials"), x=(int, "photons Eve tampers"),
        noise=(str, "channel noise kind"), gamma=(str, "noise strength"))
    p = add("verify-optics", cmd_verify_optics, **common,
            target=(str, "step (default), shift, or identity"))
    p.add_argument("--layout", required=True, help="layout description file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._file_config = _load_config_file(args.config) if args.config else {}
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
