"""Command-line front end.

Commands
--------
simulate     full scenario: blow-up search, condition dynamics, density,
             profiles; writes CSV tables and ``summary.json``
certify      smoothness condition on the initial data, one line per n
blowup       blow-up search only
reproduce K  ``simulate`` with the parameters of variant K (1..6)

Exit status: 0 success (also when nothing breaks before ``theta_cap``),
2 usage error, 3 simple-wave data, 4 integrator failure.
"""
import argparse
from dataclasses import asdict, dataclass, field, fields
import json
import logging
import math
import os
from pathlib import Path
import sys

import numpy as np

from .certifier import certify
from .errors import IntegratorFailure, SimpleWaveError, UsageError
from .experiments import (
    DEFAULT_D_RHO_COARSE, DEFAULT_D_RHO_FINE, DEFAULT_DTHETA, FINE_HALF_WINDOW,
    PROFILE_COLUMNS, DensityTracker, PhiTracker, default_half_width,
    eulerian_profiles, find_blowup, gaussian_pulse, label_grid,
)

log = logging.getLogger("coldplasma")

OUTPUT_DIR_ENV = "COLDPLASMA_OUTPUT_DIR"

# (alpha, beta, rho_star) of the six reference runs
VARIANTS = {
    1: (0.4761, 0.0, 3.0),
    2: (0.4761, 0.0, 4.5),
    3: (0.4761, 0.0, 6.0),
    4: (0.0, -0.6129, 4.0),
    5: (0.0, -0.7857, 4.0),
    6: (0.0, -0.9088, 4.0),
}

# snapshot times before blow-up written as profile tables
PROFILE_LEADS = (0.1, 0.01, 0.001)

EXIT_OK, EXIT_USAGE, EXIT_SIMPLE_WAVE, EXIT_INTEGRATOR = 0, 2, 3, 4


def fmt(x):
    """12 significant digits; ``nan`` for missing values."""
    if x is None:
        return "nan"
    return format(float(x), ".12g")


@dataclass
class ScenarioConfig:
    alpha: float
    beta: float
    rho_star: float
    domain_half_width: float | None = None
    d_rho_coarse: float = DEFAULT_D_RHO_COARSE
    d_rho_fine: float = DEFAULT_D_RHO_FINE
    d_theta: float = DEFAULT_DTHETA
    theta_cap: float = 100.0
    n_list: list = field(default_factory=lambda: [1, 2, 3])
    output_dir: str = field(default_factory=lambda: os.environ.get(OUTPUT_DIR_ENV, "out"))

    def __post_init__(self):
        for name in ("alpha", "beta", "rho_star", "d_rho_coarse", "d_rho_fine",
                     "d_theta", "theta_cap"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise UsageError(f"{name} must be a finite number")
            setattr(self, name, float(v))
        for name in ("rho_star", "d_rho_coarse", "d_rho_fine", "d_theta", "theta_cap"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name} must be positive")
        if self.domain_half_width is not None:
            if not self.domain_half_width > 0:
                raise UsageError("domain_half_width must be positive")
            self.domain_half_width = float(self.domain_half_width)
        if not self.n_list or any(
                isinstance(n, bool) or int(n) != n or n < 1 for n in self.n_list):
            raise UsageError("n_list entries must be integers >= 1")
        self.n_list = [int(n) for n in self.n_list]
        self.output_dir = str(self.output_dir)

    @classmethod
    def from_mapping(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        missing = [k for k in ("alpha", "beta", "rho_star") if k not in data]
        if missing:
            raise UsageError(f"missing config keys: {', '.join(missing)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        return cls.from_mapping(data)

    @classmethod
    def for_variant(cls, k, **overrides):
        if k not in VARIANTS:
            raise UsageError(f"variant must be one of 1..6, got {k}")
        alpha, beta, rho_star = VARIANTS[k]
        return cls(alpha=alpha, beta=beta, rho_star=rho_star, **overrides)

    def field(self):
        return gaussian_pulse(self.alpha, self.beta, self.rho_star)

    def half_width(self):
        if self.domain_half_width is not None:
            return self.domain_half_width
        return default_half_width(self.field())


@dataclass
class RunArtifacts:
    report: object
    dynamics: dict
    density: object
    profiles: dict
    summary: dict
    files: list = field(default_factory=list)


def _summary(label, config, report, dynamics, profiles):
    s = {
        "variant": label,
        "blowup_detected": report.detected,
        "T_br": report.T_br,
        "rho_br_plus": report.rho_br[0],
        "rho_br_minus": report.rho_br[1],
        "rho0_star": _rho0_star(report),
        "theta_cap": config.theta_cap,
    }
    for n, cd in dynamics.items():
        s[f"phi0_{n}"] = float(cd.phi[0]) if cd.phi.size else None
        s[f"theta_{n}"] = cd.theta_n
        s[f"T_sm_{n}"] = cd.T_n_sm
        s[f"theta_{n}_last"] = cd.theta_n_last
    s["profile_thetas"] = sorted(profiles)
    # round-trip through the CSV format so summary and tables agree exactly
    for k, v in s.items():
        if isinstance(v, float):
            s[k] = None if math.isnan(v) else float(fmt(v))
    s["profile_thetas"] = [float(fmt(t)) for t in s["profile_thetas"]]
    return s


def _rho0_star(report):
    plus, minus = report.rho0_star
    return plus if not math.isnan(plus) else minus


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")


def write_blowup_csv(path, label, report):
    _write_csv(path, ["variant", "T_br", "rho_br_plus", "rho_br_minus", "rho0_star"],
               [[str(label), report.T_br, report.rho_br[0], report.rho_br[1],
                 _rho0_star(report) if report.detected else None]])


def profile_filename(theta):
    return f"profile_{theta:.4f}.csv"


def run_scenario(config, label="custom", write=True, backend=None):
    """Run every diagnostic for one configuration and write the tables.

    A single coarse sweep feeds the blow-up search, the condition tracker for
    all n and the density tracker.
    """
    fld = config.field()
    phi = PhiTracker(config.n_list)
    dens = DensityTracker()
    log.info("scenario %s: alpha=%g beta=%g rho*=%g", label, config.alpha, config.beta,
             config.rho_star)
    report = find_blowup(fld, config.half_width(), config.d_rho_coarse, config.d_rho_fine,
                         config.d_theta, config.theta_cap, observers=(phi, dens),
                         backend=backend)
    dynamics = phi.result(report.T_br)
    density = dens.result(report.T_br)

    coarse = label_grid(config.half_width(), config.d_rho_coarse)
    profiles = {}
    if report.detected:
        half = int(round(FINE_HALF_WINDOW * config.d_rho_coarse / config.d_rho_fine))
        windows = [l0 + config.d_rho_fine * np.arange(-half, half + 1, dtype=float)
                   for l0 in report.rho0_star if not math.isnan(l0)]
        grid = np.unique(np.concatenate([coarse] + windows))
        snap_times = [report.T_br - lead for lead in PROFILE_LEADS if report.T_br > lead]
    else:
        grid = coarse
        snap_times = [config.theta_cap]
    for t in snap_times:
        profiles[t] = eulerian_profiles(fld, grid, config.d_theta, t, backend=backend)

    art = RunArtifacts(report, dynamics, density, profiles,
                       _summary(label, config, report, dynamics, profiles))
    if write:
        art.files = write_artifacts(art, label, config.output_dir)
    return art


def write_artifacts(art, label, output_dir):
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = [out / "blowup.csv", out / "phi.csv", out / "density.csv"]
    write_blowup_csv(files[0], label, art.report)
    _write_csv(files[1], ["n", "theta", "phi_min", "argmin_rho0"],
               ([str(n), t, v, r] for n, cd in art.dynamics.items()
                for t, v, r in zip(cd.theta, cd.phi, cd.argmin_rho0)))
    d = art.density
    _write_csv(files[2], ["theta", "N_origin", "N_max", "rho_at_max"],
               zip(d.theta, d.N_origin, d.N_max, d.rho_at_max))
    for t, prof in sorted(art.profiles.items()):
        path = out / profile_filename(t)
        _write_csv(path, list(PROFILE_COLUMNS), prof.table())
        files.append(path)
    path = out / "summary.json"
    path.write_text(json.dumps(art.summary, indent=2, sort_keys=True) + "\n")
    files.append(path)
    return files


def reproduce_variant(k, write=True, backend=None, **overrides):
    """Run one of the six reference configurations with ``n_list = [1, 2, 3]``."""
    config = ScenarioConfig.for_variant(k, **overrides)
    return run_scenario(config, label=str(k), write=write, backend=backend)


# ---------------------------------------------------------------------------
# argument handling

_FLAG_FIELDS = ("alpha", "beta", "rho_star", "domain_half_width", "d_rho_coarse",
                "d_rho_fine", "d_theta", "theta_cap")


def _add_config_flags(p, with_pulse=True):
    p.add_argument("--config", help="JSON file with scenario fields")
    names = _FLAG_FIELDS if with_pulse else _FLAG_FIELDS[3:]
    for name in names:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=float)
    p.add_argument("--n-list", dest="n_list", type=int, nargs="+")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--backend", choices=("cython", "python"),
                   help="sweep kernel (default: compiled if available)")


def build_parser():
    parser = argparse.ArgumentParser(prog="coldplasma", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("simulate", "full scenario"),
                        ("certify", "smoothness condition at theta = 0"),
                        ("blowup", "blow-up search only")):
        _add_config_flags(sub.add_parser(name, help=help_))
    rep = sub.add_parser("reproduce", help="run reference variant K")
    rep.add_argument("k", type=int, choices=sorted(VARIANTS))
    _add_config_flags(rep, with_pulse=False)
    return parser


def _config_from_args(args, base=None):
    data = {}
    if args.config:
        cfg = ScenarioConfig.from_json(args.config)
        data = asdict(cfg)
    elif base is not None:
        data = asdict(base)
    for name in _FLAG_FIELDS + ("n_list", "output_dir"):
        v = getattr(args, name, None)
        if v is not None:
            data[name] = v
    return ScenarioConfig.from_mapping(data)


def _cmd_certify(config):
    fld = config.field()
    samples = fld.sample(label_grid(config.half_width(), config.d_rho_fine))
    print("n,infimum,holds,horizon,argmin_rho")
    for n in config.n_list:
        c = certify(samples, n)
        print(f"{n},{fmt(c.infimum)},{str(c.holds).lower()},{fmt(c.horizon)},"
              f"{fmt(c.argmin_rho)}")


def _cmd_blowup(config, backend):
    report = find_blowup(config.field(), config.half_width(), config.d_rho_coarse,
                         config.d_rho_fine, config.d_theta, config.theta_cap,
                         backend=backend)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_blowup_csv(out / "blowup.csv", "custom", report)
    _print_report(report, config)


def _print_report(report, config):
    if report.detected:
        print(f"T_br = {fmt(report.T_br)}  rho_br = +{fmt(report.rho_br[0])} / "
              f"{fmt(report.rho_br[1])}  rho0* = {fmt(_rho0_star(report))}")
    else:
        print(f"no blow-up detected within horizon theta_cap = {fmt(config.theta_cap)}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "reproduce":
            base = ScenarioConfig.for_variant(args.k)
            if args.config:
                raise UsageError("reproduce takes its pulse from the variant table; "
                                 "use flags to override grids")
            config = _config_from_args(args, base)
        else:
            config = _config_from_args(args)
        if args.command == "certify":
            _cmd_certify(config)
        elif args.command == "blowup":
            _cmd_blowup(config, args.backend)
        else:
            label = str(args.k) if args.command == "reproduce" else "custom"
            art = run_scenario(config, label=label, backend=args.backend)
            _print_report(art.report, config)
            for n in config.n_list:
                t = art.summary[f"T_sm_{n}"]
                print(f"T_{n},sm = {fmt(t) if t is not None else 'absent'}")
            print(f"wrote {len(art.files)} files to {config.output_dir}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SimpleWaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIMPLE_WAVE
    except IntegratorFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
