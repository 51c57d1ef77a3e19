"""
curves: detected Fano factor and output correlation versus relative phase.

One CSV per (gamma, eta) with columns `phi,fano,gamma_corr`, phi on an
nphi-point grid over [0, 2 pi). With --distribution-phis, the arm-1
detected-photon distribution at each listed phi is written as
`m,probability`.
"""
from __future__ import annotations

import argparse
import math
from pathlib import Path

import numpy as np

from brackets.commands.common import (
    add_output_args,
    angle_list,
    float_list,
    parse_float,
    request_fields,
)
from brackets.core.errors import EXIT_OK
from brackets.schemas.photostat import DetectorModel
from brackets.schemas.run import CurvesRequest
from brackets.schemas.splitter import SplitterSpec
from brackets.schemas.states import Displacement
from brackets.services import emit, photostat, splitter, states


def curve_path(prefix: Path, gamma: float, eta: float) -> Path:
    return prefix.with_name(f"{prefix.name}_gamma-{gamma:.6g}_eta-{eta:.6g}.csv")


def distribution_path(prefix: Path, gamma: float, eta: float, phi: float) -> Path:
    return prefix.with_name(f"{prefix.name}_gamma-{gamma:.6g}_eta-{eta:.6g}_phi-{phi:.6g}_dist.csv")


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "curves",
        parents=parents,
        allow_abbrev=False,
        help="Fano factor and correlation curves versus phase",
        description="Analytic detected Fano factor and beam-splitter correlation over phi in [0, 2 pi).",
    )
    parser.add_argument("--b", type=parse_float, help="Bracket amplitude (default 2).")
    parser.add_argument("--mag", type=parse_float, help="Local-oscillator amplitude |alpha| (default 2).")
    parser.add_argument("--gammas", type=angle_list, required=True, help="Comma-separated phase spreads.")
    parser.add_argument("--tau", type=parse_float, help="Beam-splitter transmissivity (default 0.5).")
    parser.add_argument("--etas", type=float_list, help="Comma-separated detector efficiencies (default 1).")
    parser.add_argument("--nphi", type=int, help="Phase grid points (default 64).")
    parser.add_argument(
        "--distribution-phis",
        type=angle_list,
        help="Phases at which to also write the arm-1 detected-photon distribution.",
    )
    add_output_args(parser, "curves")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    req = CurvesRequest.model_validate(request_fields(args, CurvesRequest))
    prefix = emit.resolve(req.out)
    phis = 2.0 * math.pi * np.arange(req.nphi) / req.nphi
    config = req.model_dump()

    for eta in req.etas:
        split = SplitterSpec(tau=req.tau, eta1=eta, eta2=eta)
        for gamma in req.gammas:
            spec = states.validate({"b": req.b, "gamma": gamma})
            rows = splitter.phase_curves(spec, req.mag, split, phis)
            path = emit.write_csv(
                curve_path(prefix, gamma, eta),
                ("phi", "fano", "gamma_corr"),
                ((r.phi, r.fano_detected, r.gamma) for r in rows),
            )
            emit.write_json(
                emit.sidecar(path),
                emit.provenance("curves", config, req.seed, gamma=gamma, eta=eta),
            )

            for phi in req.distribution_phis:
                dist = photostat.distribution(
                    spec, Displacement(mag=req.mag, phase=phi), DetectorModel(eta=split.t1),
                )
                dist_path = emit.write_csv(
                    distribution_path(prefix, gamma, eta, phi),
                    ("m", "probability"),
                    enumerate(dist.probs),
                )
                emit.write_json(
                    emit.sidecar(dist_path),
                    emit.provenance(
                        "curves", config, req.seed,
                        gamma=gamma, eta=eta, phi=phi,
                        mean=dist.mean, variance=dist.variance, tail_bound=dist.tail_bound,
                    ),
                )
    return EXIT_OK
