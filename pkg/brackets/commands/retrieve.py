"""
retrieve: phase determination and post-selected bracket statistics from a
stored sweep.

Outputs
-------
<out>_phases.csv                       step,mean,normalized,phase
<out>_stats.csv                        one row per (center, gamma): measured
                                       values with batch standard errors,
                                       analytic values, histogram fidelities and
                                       the phase read back from the arm-1 Fano factor
<out>_hist_center-C_gamma-G.csv        m,p1,p2,p1_analytic,p2_analytic
"""
from __future__ import annotations

import argparse
import logging
import math
from pathlib import Path

import numpy as np

from brackets.commands.common import add_output_args, angle_list, request_fields
from brackets.core.errors import EXIT_OK, DegenerateInputError
from brackets.schemas.photostat import DetectorModel
from brackets.schemas.run import RetrieveRequest
from brackets.schemas.simshot import SweepConfig
from brackets.schemas.states import Displacement
from brackets.services import emit, fringe, photostat, splitter, states, storage

logger = logging.getLogger(__name__)

STATS_HEADER = (
    "center", "gamma", "shots",
    "fano1", "fano1_err", "fano1_analytic",
    "fano2", "fano2_err", "fano2_analytic",
    "gamma_corr", "gamma_corr_err", "gamma_corr_analytic",
    "fidelity1", "fidelity2", "phase_from_fano",
)


def histogram_path(prefix: Path, center: float, gamma: float) -> Path:
    return prefix.with_name(f"{prefix.name}_hist_center-{center:.6g}_gamma-{gamma:.6g}.csv")


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "retrieve",
        parents=parents,
        allow_abbrev=False,
        help="Retrieve phases and post-selected ensemble statistics from a sweep",
        description=(
            "Fit the fringe of one arm, assign a phase to every step, then pool shots "
            "into bracket ensembles for each (center, gamma) and compare with theory."
        ),
    )
    parser.add_argument("--dataset", required=True, help="Sweep CSV written by `sweep`.")
    parser.add_argument("--centers", type=angle_list, required=True, help="Comma-separated window centers.")
    parser.add_argument("--gammas", type=angle_list, required=True, help="Comma-separated window widths.")
    parser.add_argument("--arm", type=int, help="Arm whose fringe fixes the phases (default 1).")
    parser.add_argument("--batches", type=int, help="Batches for standard errors (default 50).")
    add_output_args(parser, "retrieve")
    parser.set_defaults(func=run)


def _analytic(config: SweepConfig, center: float, gamma: float):
    spec = states.validate({"b": config.b, "gamma": gamma})
    disp = Displacement(mag=config.mag, phase=center)
    t1 = config.tau * config.eta1
    t2 = (1.0 - config.tau) * config.eta2
    f = states.fano(spec, disp)
    return (
        splitter.detected_fano(f, t1),
        splitter.detected_fano(f, t2),
        splitter.gamma_thinned(f, t1, t2),
        photostat.distribution(spec, disp, DetectorModel(eta=t1)),
        photostat.distribution(spec, disp, DetectorModel(eta=t2)),
    )


def _fano_phase(config: SweepConfig, gamma: float, fano1: float) -> float:
    """Relative phase in [0, pi/2] from the measured arm-1 Fano factor; NaN when F is phase-blind."""
    t1 = config.tau * config.eta1
    if t1 == 0.0:
        return math.nan
    undetected = 1.0 + (fano1 - 1.0) / t1
    try:
        return states.phase_from_fano(states.validate({"b": config.b, "gamma": gamma}), config.mag, undetected)
    except DegenerateInputError:
        return math.nan


def _padded(columns: list[np.ndarray]) -> np.ndarray:
    size = max(len(c) for c in columns)
    table = np.zeros((size, len(columns)))
    for k, column in enumerate(columns):
        table[: len(column), k] = column
    return table


def run(args: argparse.Namespace) -> int:
    req = RetrieveRequest.model_validate(request_fields(args, RetrieveRequest))
    ds = storage.read_dataset(req.dataset)
    config = ds.config
    seed = config.seed if req.seed is None else req.seed
    prefix = emit.resolve(req.out)
    provenance = {"dataset": req.dataset, "sweep": config.model_dump(mode="json"), **req.model_dump()}

    fit = fringe.determine_phases(ds, req.arm)
    means = fringe.fringe_means(ds, req.arm)
    normalized, _ = fringe.normalize(means, fit)
    truth = ds.step_phases
    error = np.angle(np.exp(1j * (fit.per_step_phase - truth)))
    phases_path = emit.write_csv(
        prefix.with_name(f"{prefix.name}_phases.csv"),
        ("step", "mean", "normalized", "phase"),
        zip(range(config.steps), means, normalized, fit.per_step_phase),
    )
    emit.write_json(
        emit.sidecar(phases_path),
        emit.provenance(
            "retrieve", provenance, seed,
            offset=fit.offset, amplitude=fit.amplitude, clamped=fit.clamped,
            iterations=fit.iterations, rms_error_vs_truth=float(math.sqrt(np.mean(error**2))),
        ),
    )

    stats_rows = []
    for center in req.centers:
        for gamma in req.gammas:
            ensemble = fringe.post_select(ds, fit.per_step_phase, center, gamma, seed=seed)
            measured = fringe.ensemble_stats(ensemble, req.batches)
            fano1, fano2, corr, dist1, dist2 = _analytic(config, center, gamma)
            fid1 = photostat.fidelity(measured.histogram1, dist1)
            fid2 = photostat.fidelity(measured.histogram2, dist2)
            logger.info(
                "center=%.6g gamma=%.6g: %d shots, fidelities %.6f / %.6f",
                center, gamma, len(ensemble), fid1, fid2,
            )
            stats_rows.append((
                center, gamma, len(ensemble),
                measured.fano1, measured.fano1_err, fano1,
                measured.fano2, measured.fano2_err, fano2,
                measured.gamma_corr, measured.gamma_corr_err, corr,
                fid1, fid2, _fano_phase(config, gamma, measured.fano1),
            ))

            table = _padded([
                measured.histogram1.probs, measured.histogram2.probs, dist1.probs, dist2.probs,
            ])
            hist_path = emit.write_csv(
                histogram_path(prefix, center, gamma),
                ("m", "p1", "p2", "p1_analytic", "p2_analytic"),
                ((m, *row) for m, row in enumerate(table)),
            )
            emit.write_json(
                emit.sidecar(hist_path),
                emit.provenance("retrieve", provenance, seed, center=center, gamma=gamma),
            )

    stats_path = emit.write_csv(prefix.with_name(f"{prefix.name}_stats.csv"), STATS_HEADER, stats_rows)
    emit.write_json(emit.sidecar(stats_path), emit.provenance("retrieve", provenance, seed))
    return EXIT_OK
