"""
discriminate: Kennedy-like receiver error probability over a parameter grid.

Writes <out>.csv with columns `b,gamma,dephase,p_error` (b outermost).
"""
from __future__ import annotations

import argparse

from brackets.commands.common import (
    add_output_args,
    angle_list,
    float_list,
    parse_angle,
    parse_float,
    request_fields,
)
from brackets.core.errors import EXIT_OK
from brackets.schemas.discrim import ReceiverSpec
from brackets.schemas.photostat import DetectorModel
from brackets.schemas.run import DiscriminateRequest
from brackets.schemas.states import Displacement
from brackets.services import discrim, emit


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "discriminate",
        parents=parents,
        allow_abbrev=False,
        help="Receiver error probability grid",
        description=(
            "Equal-prior error probability of a displacement + photon-counting receiver "
            "for +/- b hypotheses under phase spread gamma and preparation dephasing."
        ),
    )
    parser.add_argument("--bs", type=float_list, required=True, help="Comma-separated amplitudes b.")
    parser.add_argument("--gammas", type=angle_list, required=True, help="Comma-separated phase spreads.")
    parser.add_argument("--dephases", type=angle_list, help="Comma-separated preparation dephasings (default 0).")
    parser.add_argument("--beta", type=parse_float, help="Displacement magnitude (default: b of each row).")
    parser.add_argument("--beta-phase", type=parse_angle, help="Displacement phase (default 0).")
    parser.add_argument("--threshold", type=int, help="Declare '+' at counts >= threshold (default 1).")
    parser.add_argument("--eta", type=parse_float, help="Detector efficiency (default 1).")
    parser.add_argument("--workers", type=int, help="Worker threads for the grid.")
    add_output_args(parser, "discriminate")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    req = DiscriminateRequest.model_validate(request_fields(args, DiscriminateRequest))
    displacement = None
    if req.beta is not None:
        displacement = Displacement(mag=req.beta, phase=req.beta_phase)
    rx = ReceiverSpec(displacement=displacement, threshold=req.threshold, det=DetectorModel(eta=req.eta))

    rows = discrim.sweep_error(req.bs, req.gammas, rx, req.dephases, workers=req.workers)
    path = emit.write_csv(
        emit.with_ext(emit.resolve(req.out), ".csv"),
        ("b", "gamma", "dephase", "p_error"),
        ((r.b, r.gamma, r.dephase, r.p_error) for r in rows),
    )
    emit.write_json(emit.sidecar(path), emit.provenance("discriminate", req.model_dump(), req.seed))
    return EXIT_OK
