"""
wigner: Wigner function of a bracket state on a square grid.

Writes <out>.csv (`x,y,w`, x outer, y inner) and <out>.json.
"""
from __future__ import annotations

import argparse

import numpy as np

from brackets.commands.common import add_output_args, parse_angle, parse_float, request_fields
from brackets.core.errors import EXIT_OK
from brackets.schemas.run import WignerRequest
from brackets.services import emit, states


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "wigner",
        parents=parents,
        allow_abbrev=False,
        help="Wigner function grid of a bracket state",
        description="Evaluate W(z) of the bracket state (b, gamma) on [-extent, extent]^2.",
    )
    parser.add_argument("--b", type=parse_float, required=True, help="Coherent amplitude b >= 0.")
    parser.add_argument("--gamma", type=parse_angle, required=True, help="Phase spread in [0, pi].")
    parser.add_argument("--extent", type=parse_float, help="Half-width of the grid (default 4).")
    parser.add_argument("--n", type=int, help="Grid points per axis, n >= 2 (default 201).")
    add_output_args(parser, "wigner")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    req = WignerRequest.model_validate(request_fields(args, WignerRequest))
    spec = states.validate({"b": req.b, "gamma": req.gamma})
    grid = states.wigner_grid(spec, req.extent, req.n)

    xx, yy = np.meshgrid(grid.x, grid.y, indexing="ij")
    prefix = emit.resolve(req.out)
    path = emit.write_csv(
        emit.with_ext(prefix, ".csv"),
        ("x", "y", "w"),
        zip(xx.ravel(), yy.ravel(), grid.values.ravel()),
    )
    peak = grid.argmax()
    emit.write_json(
        emit.sidecar(path),
        emit.provenance(
            "wigner",
            req.model_dump(),
            req.seed,
            normalization=states.wigner_normalization(spec),
            maximum={"x": peak.re, "y": peak.im, "w": float(grid.values.max())},
        ),
    )
    return EXIT_OK
