# -*- coding: utf-8 -*-
# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2025 Semantic R&D Group

# cli.py
# Command-line front end: argument parsing, dispatch, exit codes
import argparse
import logging
import sys
from dataclasses import dataclass

import numpy as np
import pandas as pd

from . import criteria, harness, report
from .besov import SpaceParams, besov_norm_estimate, offset_sum_norm, wavelet_coeffs
from .bspline import bspline_gram, gram_row, shifted_bspline
from .config import FORMATS, merge_config, read_config_file
from .errors import PreconditionError, exit_code_for
from .piecewise import pp_eval, to_json_dict
from .rliouville import LEFT, RIGHT, RLSpec, rl_apply, rl_duality_residual, rl_window
from .templates import (COEFF_COLUMNS, DOUBLING_COLUMNS, ELEMENT_COLUMNS, EXIT_FAIL_VERDICT, EXIT_OK,
                        EXIT_PRECONDITION, FAIL, FUNCTIONAL_COLUMNS, HOMOGENEITY_COLUMNS, LEVEL_PROFILE_COLUMNS,
                        MEMBER_RATIO_COLUMNS, MUCKENHOUPT_COLUMNS, SAMPLE_COLUMNS, SUBCOMMANDS)
from .wavelet import (SplineSystemSpec, capital_phi, capital_psi, euler_constants, generalized_psi, phi, psi,
                      theta_overlap)
from .weights import MuckenhouptScan, doubling_check, muckenhoupt_constant, weight_mass

logger = logging.getLogger(__name__)

CSV_HELP = (
    "CSV tables (semicolon separated): "
    f"functionals {FUNCTIONAL_COLUMNS}; level profiles {LEVEL_PROFILE_COLUMNS}; coefficients {COEFF_COLUMNS}; "
    f"member ratios {MEMBER_RATIO_COLUMNS}; Muckenhoupt scans {MUCKENHOUPT_COLUMNS}; "
    f"doubling pairs {DOUBLING_COLUMNS}; samples {SAMPLE_COLUMNS}; elements {ELEMENT_COLUMNS}; "
    f"homogeneity profiles {HOMOGENEITY_COLUMNS}. Commands without a table emit one row of their scalars."
)


@dataclass
class Outcome:
    payload: dict
    table: pd.DataFrame = None
    columns: list = None
    verdict: str = None


class _Parser(argparse.ArgumentParser):
    # usage errors leave through the exit-code mapping instead of SystemExit(2)
    def error(self, message):
        self.print_usage(sys.stderr)
        raise PreconditionError(message)


# ----------------------------------------------------------------------------------------------------------------
# Handlers


def _function(cfg, prefix="f"):
    """The B-spline ``B_n(2**level x - shift)`` selected by ``--{prefix}-n/-shift/-level``."""
    params = cfg.params
    return shifted_bspline(params[f"{prefix}_n"], params[f"{prefix}_shift"], params[f"{prefix}_level"])


def _space(cfg, key="u"):
    params = cfg.params
    return SpaceParams(params["p"], params["q"], params["s"], cfg.weight(key))


def spline_eval(cfg):
    n, xs = cfg.params["n"], np.asarray(cfg.params["x"], dtype=float)
    values = pp_eval(shifted_bspline(n, 0), xs)
    table = pd.DataFrame({"x": xs, "value": values})
    return Outcome({"n": n, "x": xs, "values": values}, table, SAMPLE_COLUMNS)


def spline_gram(cfg):
    n, offset = cfg.params["n"], cfg.params["offset"]
    if offset is not None:
        return Outcome({"n": n, "offset": offset, "gram": bspline_gram(n, offset)})
    row = gram_row(n)
    payload = {"n": n, "gram_row": row}
    table = pd.DataFrame({"x": np.arange(-n, n + 1), "value": row})
    return Outcome(payload, table, SAMPLE_COLUMNS)


def wavelet_constants(cfg):
    return Outcome(euler_constants(cfg.params["n"]).as_dict())


def _element(cfg):
    params = cfg.params
    n, kind = params["n"], params["kind"]
    if kind == "phi":
        return phi(n, cfg.tol)
    if kind == "psi":
        return psi(n, params["s"], cfg.tol)
    if kind == "Phi":
        return capital_phi(n, params["a"])
    if kind == "Psi":
        return capital_psi(n, params["a"], params["s"])
    spec = SplineSystemSpec(n, a=params["a"], s=params["s"], m=params["m"], k_flag=params["k_flag"],
                            zeta_flag=params["zeta_flag"], alpha=params["alpha"])
    return generalized_psi(spec)


def wavelet_build(cfg):
    element = _element(cfg)
    shifts = element.first_shift + np.arange(element.length)
    payload = {"kind": element.kind, "n": element.spec.n, "support": list(element.support),
               "first_shift": element.first_shift, "dilation_log2": element.dilation_log2,
               "tail_bound": element.tail_bound, "coeffs": np.asarray(element.coeffs)}
    table = pd.DataFrame({"Shift": shifts, "Coefficient": np.asarray(element.coeffs)})
    return Outcome(payload, table, ELEMENT_COLUMNS)


def wavelet_theta(cfg):
    params = cfg.params
    return Outcome(theta_overlap(params["n_star"], params["m_star"], params["tau0"]).as_dict())


def weights_mass(cfg):
    w = cfg.weight("u")
    lo, hi = cfg.params["lo"], cfg.params["hi"]
    return Outcome({"weight": w.describe(), "lower": lo, "upper": hi, "mass": weight_mass(w, lo, hi)})


def weights_muckenhoupt(cfg):
    params = cfg.params
    w = cfg.weight("u")
    scan = MuckenhouptScan(d_max=params["scan_d_max"], tau_span=params["scan_tau_span"],
                           d_min=params["scan_d_min"])
    estimate = muckenhoupt_constant(w, params["rho"], local=not params["global_class"], scan=scan,
                                    threads=cfg.threads)
    payload = {"weight": w.describe(), "rho": estimate.rho, "local": estimate.local, "value": estimate.value,
               "witness": list(estimate.witness), "intervals": estimate.intervals}
    return Outcome(payload, estimate.as_frame(), MUCKENHOUPT_COLUMNS)


def _pairs(text):
    # "f_lo,f_hi,b_lo,b_hi;..." -> [((f_lo, f_hi), (b_lo, b_hi)), ...]
    pairs = []
    for chunk in filter(None, (part.strip() for part in text.split(";"))):
        values = [float(x) for x in chunk.split(",")]
        if len(values) != 4:
            raise PreconditionError("a doubling pair needs four numbers", pair=chunk)
        pairs.append(((values[0], values[1]), (values[2], values[3])))
    return pairs


def weights_doubling(cfg):
    params = cfg.params
    w = cfg.weight("u")
    result = doubling_check(w, params["rho"], _pairs(params["pairs"]), params["rho_star"])
    payload = {"weight": w.describe(), "rho": result.rho, "rho_star": result.rho_star, "c_one": result.c_one,
               "c_two": result.c_two}
    return Outcome(payload, result.table, DOUBLING_COLUMNS)


def _rl_spec(cfg):
    params = cfg.params
    return RLSpec(params["alpha"], params["side"], params["origin"])


def rl_apply_command(cfg):
    f = _function(cfg)
    image = rl_apply(_rl_spec(cfg), f)
    lo, hi = rl_window(image, cfg.rl_window)
    xs = np.linspace(lo, hi, cfg.params["samples"])
    table = pd.DataFrame({"x": xs, "value": pp_eval(image, xs)})
    return Outcome({"image": to_json_dict(image), "support": list(image.support)}, table, SAMPLE_COLUMNS)


def rl_duality(cfg):
    alpha = cfg.params["alpha"]
    residual = rl_duality_residual(alpha, _function(cfg), _function(cfg, "g"))
    return Outcome({"alpha": alpha, "residual": residual})


def _family(cfg):
    params = cfg.params
    return SplineSystemSpec(params["n"], a=params["a"])


def besov_coeffs(cfg):
    lam = wavelet_coeffs(_function(cfg), _family(cfg), cfg.params["levels"], threads=cfg.threads)
    return Outcome({"d_max": lam.d_max, "coefficients": lam.to_json_list()}, lam.to_frame(), COEFF_COLUMNS)


def besov_norm(cfg):
    params = cfg.params
    f, sp = _function(cfg), _space(cfg)
    if params["offset_sum"]:
        value = offset_sum_norm(f, sp, params["n"], params["levels"], rw=params["rw"], threads=cfg.threads)
        return Outcome({"value": value, "offsets": "0,1/2,-1/2"})
    estimate = besov_norm_estimate(f, sp, params["n"], params["levels"], spec=_family(cfg), rw=params["rw"],
                                   threads=cfg.threads)
    return Outcome(estimate.as_dict(), estimate.profile, LEVEL_PROFILE_COLUMNS)


def _criterion_outcome(report_, prior=None):
    payload = report_.as_dict()
    if prior is not None:
        payload["prior"] = prior.as_dict()
        payload["redundant"] = criteria.redundancy_check(report_, prior)
    return Outcome(payload, report_.as_frame(), FUNCTIONAL_COLUMNS)


def criteria_full_line(cfg):
    params, trunc = cfg.params, cfg.truncation()
    u, v = cfg.weight("u"), cfg.weight("v")
    args = (params["alpha"], params["kappa"], params["p"], u, v, trunc, params["side"], cfg.threads)
    prior = criteria.criterion_prior_upper(*args) if params["prior"] else None
    return _criterion_outcome(criteria.criterion_full_line(*args), prior)


def criteria_lower(cfg):
    params, trunc = cfg.params, cfg.truncation()
    u, w = cfg.weight("u"), cfg.weight("w")
    args = (params["alpha"], params["kappa"], params["p"], u, w, trunc, params["side"], cfg.threads)
    prior = criteria.criterion_prior_lower(*args) if params["prior"] else None
    return _criterion_outcome(criteria.criterion_lower(*args), prior)


def criteria_half_line(cfg):
    params, trunc = cfg.params, cfg.truncation()
    part = params["part"]
    weights = {"u": cfg.weight("u"), "v": cfg.weight("v", part == "upper"), "w": cfg.weight("w", part == "lower")}
    args = (params["alpha"], params["kappa"], params["c"], params["side"], params["p"], weights, trunc, part,
            cfg.threads)
    prior = criteria.criterion_prior_half_line(*args) if params["prior"] else None
    return _criterion_outcome(criteria.criterion_half_line(*args), prior)


def criteria_integral_form(cfg):
    params = cfg.params
    result = criteria.integral_form(params["theta"], params["epsilon"], params["side"], cfg.weight("u"),
                                    cfg.weight("v"), params["p"], cfg.truncation(), params["c"])
    payload = {**result.as_dict(), "warnings": list(result.warnings)}
    return Outcome(payload, pd.DataFrame([result.as_row()], columns=FUNCTIONAL_COLUMNS), FUNCTIONAL_COLUMNS)


def criteria_reduce(cfg):
    params = cfg.params
    result = criteria.homogeneity_reduction(params["s1"], params["s2"], params["kappa"], params["p"],
                                            cfg.weight("u", False), cfg.weight("v", False), params["c"] or 0.0,
                                            params["side"], trunc=cfg.truncation())
    return Outcome(result.as_dict(), result.profile, HOMOGENEITY_COLUMNS if result.profile is not None else None)


def _setup(cfg):
    params = cfg.params
    return harness.VerifySetup(p=params["p"], q=params["q"] or params["p"], s=params["s"], alpha=params["alpha"],
                               kappa=params["kappa"], u=cfg.weight("u", False), v=cfg.weight("v", False),
                               w=cfg.weight("w", False), c=params["c"], side=params["side"], n_in=params["n_in"],
                               n_out=params["n_out"], d_max=params["levels"], family_size=cfg.family_size,
                               seed=cfg.seed, order=params["order"], trunc=cfg.truncation(), k_lo=cfg.k_lo,
                               k_hi=cfg.k_hi, tail_slack=cfg.tail_slack, threads=cfg.threads)


def _verify_outcome(result):
    tables = [part.empirical.table for part in (result.parts or (result,))]
    return Outcome(result.as_dict(), pd.concat(tables, ignore_index=True), MEMBER_RATIO_COLUMNS, result.verdict)


def verify_forward(cfg):
    return _verify_outcome(harness.verify(harness.FORWARD, _setup(cfg)))


def verify_reverse(cfg):
    return _verify_outcome(harness.verify(harness.REVERSE, _setup(cfg)))


def verify_example_ex1(cfg):
    params = cfg.params
    base = _setup(cfg)
    setup = harness.example_ex1_setup(params["p"], params["alpha"], params["s"], params["t"],
                                      **{key: getattr(base, key) for key in ("d_max", "family_size", "seed", "order",
                                                                            "trunc", "k_lo", "k_hi", "tail_slack",
                                                                            "threads", "n_in", "n_out")})
    return _verify_outcome(harness.verify(harness.EXAMPLE_EX1, setup))


HANDLERS = {
    ("spline", "eval"): spline_eval,
    ("spline", "gram"): spline_gram,
    ("wavelet", "constants"): wavelet_constants,
    ("wavelet", "build"): wavelet_build,
    ("wavelet", "theta"): wavelet_theta,
    ("weights", "mass"): weights_mass,
    ("weights", "muckenhoupt"): weights_muckenhoupt,
    ("weights", "doubling"): weights_doubling,
    ("rl", "apply"): rl_apply_command,
    ("rl", "duality"): rl_duality,
    ("besov", "coeffs"): besov_coeffs,
    ("besov", "norm"): besov_norm,
    ("criteria", "full-line"): criteria_full_line,
    ("criteria", "half-line"): criteria_half_line,
    ("criteria", "lower"): criteria_lower,
    ("criteria", "integral-form"): criteria_integral_form,
    ("criteria", "reduce"): criteria_reduce,
    ("verify", "forward"): verify_forward,
    ("verify", "reverse"): verify_reverse,
    ("verify", "example-ex1"): verify_example_ex1,
}


# ----------------------------------------------------------------------------------------------------------------
# Parser


def _common(parser):
    group = parser.add_argument_group("run options")
    group.add_argument("--config", help="key=value file; flags override its values")
    group.add_argument("--format", choices=FORMATS, default=None, help="report format (default json)")
    group.add_argument("--output", help="write the report to this file instead of stdout")
    group.add_argument("--threads", type=int, help="worker cap of the concurrent stages")
    group.add_argument("--verbose", action="store_true", help="log progress at INFO")
    group.add_argument("--tol", type=float, help="truncation tolerance of phi/psi series")
    group.add_argument("--tau-window", type=int, help="|tau| bound of every sup")
    group.add_argument("--series-window", type=int, help="terms kept in every series")
    group.add_argument("--d-max", type=int, help="last level of every sup over d")
    group.add_argument("--rl-window", type=int, help="sampling margin around RL images")
    group.add_argument("--k-lo", type=float, help="equivalence constant criterion <= K_lo * empirical")
    group.add_argument("--k-hi", type=float, help="equivalence constant empirical <= K_hi * criterion")
    group.add_argument("--tail-slack", type=float, help="slack added to the empirical constant")
    group.add_argument("--family-size", type=int, help="random members of verification families")
    group.add_argument("--seed", type=int, help="seed of the random members")
    group.add_argument("--u", help='target weight, e.g. "power t=3"')
    group.add_argument("--v", help="source weight of the forward inequality")
    group.add_argument("--w", help="weight of the reverse inequality")


def _function_args(parser, prefix="f"):
    parser.add_argument(f"--{prefix}-n", type=int, default=2, help="order of the B-spline argument")
    parser.add_argument(f"--{prefix}-shift", default="0", help="dyadic shift of the B-spline argument")
    parser.add_argument(f"--{prefix}-level", type=int, default=0, help="dilation level of the B-spline argument")


def _space_args(parser):
    parser.add_argument("--p", type=float, default=2.0)
    parser.add_argument("--q", type=float, default=2.0)
    parser.add_argument("--s", type=float, default=1.0)


def _criteria_args(parser, prior=True):
    parser.add_argument("--alpha", type=int, default=1)
    parser.add_argument("--p", type=float, default=2.0)
    parser.add_argument("--kappa", type=float, default=0.0)
    parser.add_argument("--side", choices=("+", "-"), default="+")
    if prior:
        parser.add_argument("--prior", action="store_true", help="also evaluate the earlier aggregate")


def _verify_args(parser, example=False):
    parser.add_argument("--p", type=float, default=2.0)
    parser.add_argument("--alpha", type=int, default=1)
    parser.add_argument("--s", type=float, default=2.0)
    if example:
        parser.add_argument("--t", type=float, default=3.0, help="decay exponent of the worked weights")
        parser.set_defaults(q=None, kappa=0.0, c=0.0, side="+")
    else:
        parser.add_argument("--q", type=float, default=None, help="defaults to p")
        parser.add_argument("--kappa", type=float, default=0.0)
        parser.add_argument("--c", type=float, default=None, help="half-line origin; whole line when omitted")
        parser.add_argument("--side", choices=("+", "-"), default="+")
    parser.add_argument("--n-in", type=int, default=None)
    parser.add_argument("--n-out", type=int, default=None)
    parser.add_argument("--order", type=int, default=2, help="spline order of the test members")
    parser.add_argument("--levels", type=int, default=harness.HARNESS_D_MAX, help="last wavelet level of norms")


def build_parser():
    parser = _Parser(prog="rlbesov", description="Riemann-Liouville operators on weighted Besov spaces",
                     epilog=CSV_HELP)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    actions = {}
    for group, names in SUBCOMMANDS.items():
        sub = groups.add_parser(group).add_subparsers(dest="action", required=True, parser_class=_Parser)
        for name in names:
            actions[(group, name)] = sub.add_parser(name, epilog=CSV_HELP)
            _common(actions[(group, name)])

    a = actions[("spline", "eval")]
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--x", type=float, nargs="+", required=True)
    a = actions[("spline", "gram")]
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--offset", type=int, default=None)

    actions[("wavelet", "constants")].add_argument("--n", type=int, required=True)
    a = actions[("wavelet", "build")]
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--kind", choices=("phi", "psi", "Phi", "Psi", "generalized"), default="Psi")
    a.add_argument("--a", default="0", help="origin 0, 1/2 or -1/2")
    a.add_argument("--s", type=int, default=0)
    a.add_argument("--m", type=int, default=1)
    a.add_argument("--k-flag", type=int, default=0)
    a.add_argument("--zeta-flag", type=int, default=0)
    a.add_argument("--alpha", type=int, default=1)
    a = actions[("wavelet", "theta")]
    a.add_argument("--n-star", type=int, required=True)
    a.add_argument("--m-star", type=int, required=True)
    a.add_argument("--tau0", type=int, default=0)

    a = actions[("weights", "mass")]
    a.add_argument("--lo", type=float, required=True)
    a.add_argument("--hi", type=float, required=True)
    a = actions[("weights", "muckenhoupt")]
    a.add_argument("--rho", type=float, required=True)
    a.add_argument("--global-class", action="store_true", help="also scan intervals longer than 1")
    a.add_argument("--scan-d-max", type=int, default=MuckenhouptScan.d_max)
    a.add_argument("--scan-tau-span", type=float, default=MuckenhouptScan.tau_span)
    a.add_argument("--scan-d-min", type=int, default=MuckenhouptScan.d_min)
    a = actions[("weights", "doubling")]
    a.add_argument("--rho", type=float, required=True)
    a.add_argument("--rho-star", type=float, default=None)
    a.add_argument("--pairs", required=True, help='"f_lo,f_hi,b_lo,b_hi;..." nested interval pairs')

    for key in (("rl", "apply"), ("rl", "duality")):
        actions[key].add_argument("--alpha", type=int, required=True)
        _function_args(actions[key])
    a = actions[("rl", "apply")]
    a.add_argument("--side", choices=(LEFT, RIGHT), default=LEFT)
    a.add_argument("--origin", default=None, help="dyadic c; -inf/+inf when omitted")
    a.add_argument("--samples", type=int, default=65)
    _function_args(actions[("rl", "duality")], "g")

    for key in (("besov", "coeffs"), ("besov", "norm")):
        a = actions[key]
        a.add_argument("--n", type=int, required=True, help="spline order of the wavelet family")
        a.add_argument("--a", default="0", help="origin of the family")
        a.add_argument("--levels", type=int, default=6, help="last wavelet level")
        _function_args(a)
    a = actions[("besov", "norm")]
    _space_args(a)
    a.add_argument("--rw", type=float, default=None, help="Muckenhoupt index; estimated when omitted")
    a.add_argument("--offset-sum", action="store_true", help="sum over the origins 0, 1/2, -1/2")

    _criteria_args(actions[("criteria", "full-line")])
    _criteria_args(actions[("criteria", "lower")])
    a = actions[("criteria", "half-line")]
    _criteria_args(a)
    a.add_argument("--c", type=float, default=0.0)
    a.add_argument("--part", choices=("upper", "lower"), default="upper")
    a = actions[("criteria", "integral-form")]
    a.add_argument("--theta", type=int, default=1)
    a.add_argument("--epsilon", type=float, default=1.0)
    a.add_argument("--p", type=float, default=2.0)
    a.add_argument("--side", choices=("+", "-"), default="+")
    a.add_argument("--c", type=float, default=None)
    a = actions[("criteria", "reduce")]
    a.add_argument("--s1", type=float, required=True)
    a.add_argument("--s2", type=float, required=True)
    a.add_argument("--kappa", type=float, default=None)
    a.add_argument("--p", type=float, default=2.0)
    a.add_argument("--side", choices=("+", "-"), default="+")
    a.add_argument("--c", type=float, default=None)

    _verify_args(actions[("verify", "forward")])
    _verify_args(actions[("verify", "reverse")])
    _verify_args(actions[("verify", "example-ex1")], example=True)
    return parser


def _render(cfg, outcome):
    if cfg.format == "json":
        return report.json_text(cfg.command, outcome.payload) + "\n"
    if outcome.table is not None:
        return report.csv_text(outcome.table, outcome.columns)
    scalars = {key: value for key, value in report.sanitize(outcome.payload).items()
               if not isinstance(value, (list, dict))}
    return report.csv_text(pd.DataFrame([scalars]), list(scalars))


def run(argv):
    """
    Parses ``argv``, runs one subcommand and returns the exit code.

    0 on success, 1 on a usage or precondition error, 2 on a numeric failure,
    3 when a verification ends with a FAIL verdict.
    """
    try:
        args = build_parser().parse_args(argv)
    except PreconditionError as e:
        print(f"Error while parsing the command line: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_PRECONDITION
    flags = vars(args)
    verbose = flags.pop("verbose")
    logging.basicConfig(format="%(message)s", level=logging.INFO if verbose else logging.WARNING, force=True)
    config_path = flags.pop("config")
    try:
        file_values = read_config_file(config_path) if config_path else {}
        cfg = merge_config(file_values, flags)
        outcome = HANDLERS[(cfg.group, cfg.action)](cfg)
        text = report.emit(_render(cfg, outcome), cfg.output)
    except Exception as e:
        print(f"Error while running '{flags.get('group')} {flags.get('action')}': {e}", file=sys.stderr)
        return exit_code_for(e)
    if text is not None:
        sys.stdout.write(text)
    if outcome.verdict == FAIL:
        return EXIT_FAIL_VERDICT
    return EXIT_OK
