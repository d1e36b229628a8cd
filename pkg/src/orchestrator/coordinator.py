"""Central coordinator: run one configured experiment and emit its artifacts"""

import logging
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from ..evolution.propagator import free_trajectory
from ..expansion.towers import ExpansionSet, ExpansionVariant, build_z_terms, build_zeta_terms
from ..experiments.counterexamples import (
    TRILINEAR_FREQUENCIES,
    Z3_FREQUENCIES,
    CounterexampleSpec,
    box_convolution_bound,
    trilinear_nonsmoothing,
    z3_nonsmoothing_counterexample,
)
from ..experiments.data import ball_data, gaussian_bump, power_profile_data
from ..experiments.smoothing import predicted_profile_slope, smoothing_fit
from ..experiments.strichartz import (
    bilinear_strichartz,
    dispersive_decay,
    integrability_gain,
    strichartz_tail,
    tube_bilinear,
)
from ..models.config import RunConfig
from ..monitoring.metrics_collector import MetricsCollector
from ..persistence.manifest import MANIFEST_NAME, ExperimentRecord, RunManifest, inventory, write_manifest
from ..persistence.reports import write_csv, write_json
from ..persistence.snapshots import write_expansion, write_snapshot
from ..randomization.wiener import EnsembleSpec, occupied_cubes, randomize_ensemble, wiener_randomize
from ..randomization.windows import WindowSpec
from ..solver.picard import SolverConfig, energy_trajectory, picard_solve, sup_sobolev, sweep_horizons
from ..spectral.grid import SpectralField
from ..spectral.norms import dyadic_profile, l2_norm, sobolev_norm
from ..utils.logger import bind_run_context, clear_run_context

logger = logging.getLogger(__name__)

DEFAULT_OUT_DIR = "randwave-out"

# Lower bound of the box convolution constant on the sum box
CONVOLUTION_CONSTANT = 1.0 / 8.0


@dataclass
class ExperimentOutcome:
    """Status and emitted files of one experiment"""
    status: str
    files: List[Path] = field(default_factory=list)
    members: int = 1


def _status(passed: Optional[bool]) -> str:
    if passed is None:
        return "completed"
    return "passed" if passed else "failed"


class Coordinator:
    """Dispatch a RunConfig to its experiment and write reports, snapshots and the manifest"""

    def __init__(
        self,
        cfg: RunConfig,
        out_dir: Optional[Path] = None,
        workers: Optional[int] = None,
        metrics: Optional[MetricsCollector] = None,
    ):
        self.cfg = cfg
        self.out_dir = Path(out_dir or cfg.output.dir or DEFAULT_OUT_DIR)
        self.workers = workers if workers is not None else (cfg.workers or 1)
        self.metrics = metrics or MetricsCollector()

        self.grid = cfg.grid.to_grid()
        self.time_grid = cfg.time.to_time_grid()
        self.quadrature = cfg.time.quadrature
        self.window = WindowSpec(cfg.randomization.window, cfg.randomization.width)
        self.ensemble = EnsembleSpec(cfg.randomization.law, cfg.randomization.seed, cfg.randomization.members)

        self._handlers: Dict[str, Callable[[], ExperimentOutcome]] = {
            "randomize": self._randomize,
            "expand": self._expand,
            "solve": self._solve,
            "tail": self._tail,
            "smooth-fit": self._smooth_fit,
            "counterexample": self._counterexample,
            "dispersive": self._dispersive,
            "bilinear": self._bilinear,
            "gain": self._gain,
        }

    # ------------------------------------------------------------------ helpers

    def _path(self, *parts: str) -> Path:
        return self.out_dir.joinpath(*parts)

    def _reports(self, name: str, columns, rows, summary) -> List[Path]:
        return [
            write_csv(self._path(f"{name}.csv"), name, columns, rows),
            write_json(self._path(f"{name}.json"), summary),
        ]

    def build_data(self) -> SpectralField:
        """Deterministic data phi from the data section"""
        data, grid = self.cfg.data, self.grid
        if data.kind == "power":
            return power_profile_data(grid, self.cfg.regularity.s, self.cfg.regularity.delta, data.amplitude)
        if data.kind == "bump":
            return gaussian_bump(grid, data.width, data.amplitude or 1.0)
        phi = ball_data(grid, data.radius)
        return phi * data.amplitude if data.amplitude is not None else phi

    def build_expansion(self, member: int = 0) -> ExpansionSet:
        """Expansion of depth k for one ensemble member"""
        phi_omega = wiener_randomize(
            self.build_data(), self.window, self.ensemble.law, self.ensemble.master_seed, member
        )
        z1 = free_trajectory(phi_omega, self.time_grid)
        metadata = {"ensemble": self.ensemble.to_dict(), "member": member, "window": self.window.to_dict()}
        if self.cfg.experiment.variant is ExpansionVariant.FULL_Z:
            return build_z_terms(z1, self.cfg.depth, self.quadrature, metadata)
        return build_zeta_terms(z1, self.cfg.depth, self.quadrature, metadata)

    # --------------------------------------------------------------- experiments

    def _randomize(self) -> ExperimentOutcome:
        phi = self.build_data()
        s = self.cfg.regularity.s
        files: List[Path] = []
        rows: List[Tuple[float, ...]] = []
        for member, phi_omega in randomize_ensemble(phi, self.window, self.ensemble):
            rows.append((member, l2_norm(phi_omega), sobolev_norm(phi_omega, s)))
            if self.cfg.output.snapshots:
                files.append(write_snapshot(self._path("members", f"member_{member:04d}.rwv"), phi_omega))
        summary = {
            "experiment": "randomize",
            "ensemble": self.ensemble.to_dict(),
            "window": self.window.to_dict(),
            "occupied_cubes": len(occupied_cubes(phi, self.window)),
            "data_l2": l2_norm(phi),
            "data_hs": sobolev_norm(phi, s),
            "s": s,
        }
        files.extend(self._reports("randomize", ("member", "l2", "hs"), rows, summary))
        return ExperimentOutcome("completed", files, self.ensemble.count)

    def _expand(self) -> ExperimentOutcome:
        expansion = self.build_expansion()
        files: List[Path] = []
        if self.cfg.output.snapshots:
            files.extend(write_expansion(self._path("expansion"), expansion))

        last = self.time_grid.nodes - 1
        rows = []
        for order, term in expansion.as_dict().items():
            profile = dyadic_profile(term.snapshot(last))
            rows.extend((order, float(N), float(v)) for N, v in zip(profile.scales, profile.norms))
        sigma = self.cfg.regularity.sigma
        summary = {
            "experiment": "expand",
            "variant": expansion.variant.value,
            "orders": expansion.orders,
            "s": self.cfg.regularity.s,
            "sigma": sigma,
            "sup_hsigma": {str(o): sup_sobolev(t, sigma) for o, t in expansion.as_dict().items()},
            "predicted_slopes": {str(o): predicted_profile_slope(o, self.cfg.regularity.s) for o in expansion.orders},
        }
        files.extend(self._reports("expand", ("order", "N", "norm"), rows, summary))
        return ExperimentOutcome("completed", files)

    def _solve(self) -> ExperimentOutcome:
        exp = self.cfg.experiment
        expansion = self.build_expansion()
        solver_cfg = SolverConfig(
            depth=self.cfg.depth,
            tolerance=exp.solver_tolerance,
            max_iterations=exp.max_iterations,
            sigma=self.cfg.regularity.sigma,
            quadrature=self.quadrature,
        )
        v, report = picard_solve(expansion, solver_cfg)

        files: List[Path] = []
        if self.cfg.output.snapshots:
            for m, snap in enumerate(v.snapshots):
                files.append(write_snapshot(self._path("residual", f"snap_{m:04d}.rwv"), snap))

        energies = energy_trajectory(v)
        rows = [(float(t), float(e)) for t, e in zip(self.time_grid.times, energies)]
        summary = {"experiment": "solve", "depth": self.cfg.depth, "sigma": self.cfg.regularity.sigma,
                   **report.to_dict()}
        if exp.horizons:
            outcomes = sweep_horizons(expansion, solver_cfg, exp.horizons)
            files.append(write_csv(
                self._path("solve_horizons.csv"), "solve-horizons",
                ("T", "converged", "iterations", "contraction_ratio"),
                [(o.horizon, int(o.converged), o.iterations, o.contraction_ratio) for o in outcomes],
            ))
        files.extend(self._reports("solve", ("t", "energy"), rows, summary))
        return ExperimentOutcome(_status(report.converged), files)

    def _tail(self) -> ExperimentOutcome:
        exp = self.cfg.experiment
        result = strichartz_tail(
            self.build_data(), self.window, self.ensemble, exp.q, exp.r, self.time_grid,
            thresholds=exp.thresholds, fit=self.ensemble.count >= 50, workers=self.workers,
        )
        files = self._reports("tail", result.columns, result.rows(), result.summary())
        passed = None if result.fit is None else result.fit.slope < 0
        return ExperimentOutcome(_status(passed), files, self.ensemble.count)

    def _smooth_fit(self) -> ExperimentOutcome:
        exp, reg = self.cfg.experiment, self.cfg.regularity
        result = smoothing_fit(
            self.build_data(), self.window, self.ensemble, exp.order, reg.s, self.time_grid,
            delta=reg.delta, tolerance=exp.tolerance, quadrature=self.quadrature, workers=self.workers,
        )
        files = self._reports("smooth-fit", result.columns, result.rows(), result.summary())
        return ExperimentOutcome(_status(result.passed), files, self.ensemble.count)

    def _counterexample(self) -> ExperimentOutcome:
        exp, reg = self.cfg.experiment, self.cfg.regularity
        frequencies = exp.frequencies or (TRILINEAR_FREQUENCIES if exp.kind == "trilinear" else Z3_FREQUENCIES)
        spec = CounterexampleSpec(
            box_scale=exp.box_scale, offset=exp.offset, frequencies=tuple(frequencies),
            s=reg.s, sigma=reg.sigma, box_fraction=exp.box_fraction, time_nodes=self.cfg.time.M_t,
        )
        name = f"counterexample-{exp.kind}"
        if exp.kind == "convolution":
            rows = []
            for N in spec.frequencies:
                bound = box_convolution_bound(self.grid, (N, 0.0, 0.0), (0.0, N, 0.0), spec.box_scale)
                rows.append((N, bound.minimum, bound.peak, bound.constant))
            constant = min(r[3] for r in rows)
            passed = constant >= CONVOLUTION_CONSTANT - 1e-12
            summary = {"experiment": name, "lambda": spec.box_scale, "constant": constant,
                       "lower_bound": CONVOLUTION_CONSTANT, "passed": passed}
            files = self._reports(name, ("N", "minimum", "peak", "constant"), rows, summary)
            return ExperimentOutcome(_status(passed), files)

        kwargs = {"quadrature": self.quadrature}
        if exp.tolerance is not None:
            kwargs["tolerance"] = exp.tolerance
        if exp.kind == "z3":
            result = z3_nonsmoothing_counterexample(self.grid, spec, **kwargs)
        else:
            result = trilinear_nonsmoothing(self.grid, spec, **kwargs)
        files = self._reports(name, result.columns, result.rows(), result.summary())
        return ExperimentOutcome(_status(result.passed), files)

    def _dispersive(self) -> ExperimentOutcome:
        exp, data = self.cfg.experiment, self.cfg.data
        f = gaussian_bump(self.grid, data.width, data.amplitude or 1.0)
        result = dispersive_decay(f, exp.r, times=exp.times, tolerance=exp.tolerance)
        files = self._reports("dispersive", result.columns, result.rows(), result.summary())
        return ExperimentOutcome(_status(result.passed), files)

    def _bilinear(self) -> ExperimentOutcome:
        exp = self.cfg.experiment
        if exp.pairing == "tube":
            result = tube_bilinear(self.grid, exp.n1, exp.n2, self.time_grid)
        else:
            phi = self.build_data()
            result = bilinear_strichartz(phi, phi, exp.n1, exp.n2, self.time_grid)
        if exp.tolerance is not None:
            result.tolerance = exp.tolerance
        files = self._reports("bilinear", ("N2", "norm", "ratio"), result.rows(), result.summary())
        return ExperimentOutcome(_status(result.passed), files)

    def _gain(self) -> ExperimentOutcome:
        exp = self.cfg.experiment
        kwargs = {} if exp.tolerance is None else {"tolerance": exp.tolerance}
        result = integrability_gain(
            self.build_data(), self.window, self.ensemble, self.cfg.depth, exp.q, exp.r, self.time_grid,
            scales=exp.scales, horizons=exp.horizons, quadrature=self.quadrature, workers=self.workers,
            **kwargs,
        )
        files = self._reports("gain", result.columns, result.rows(), result.summary())
        return ExperimentOutcome(_status(result.passed), files, self.ensemble.count)

    # ----------------------------------------------------------------------- run

    def run(self) -> RunManifest:
        """
        Run the configured experiment

        Experiment failures are caught, logged and recorded with status
        "error"; the manifest is written last.

        Returns:
            The written RunManifest
        """
        name = self.cfg.experiment.name
        self.out_dir.mkdir(parents=True, exist_ok=True)
        stale = self.out_dir / MANIFEST_NAME
        if stale.exists():
            stale.unlink()

        bind_run_context(experiment=name, seed=self.ensemble.master_seed, out_dir=str(self.out_dir))
        try:
            return self._run(name)
        finally:
            clear_run_context()

    def _run(self, name: str) -> RunManifest:
        started = datetime.now(timezone.utc)
        start_time = time.time()
        handle = self.metrics.start_experiment(name)
        logger.info(f"Running {name} into {self.out_dir} with {self.workers} worker(s)")

        try:
            outcome = self._handlers[name]()
            record = ExperimentRecord(
                status=outcome.status,
                files=[p.relative_to(self.out_dir).as_posix() for p in outcome.files],
            )
            self.metrics.end_experiment(handle, outcome.status, outcome.members)
            logger.info(f"Experiment {name} finished: {outcome.status}")
        except Exception as e:
            logger.error(f"Experiment {name} failed: {e}", exc_info=True)
            record = ExperimentRecord(status="error", error=f"{type(e).__name__}: {e}")
            self.metrics.end_experiment(handle, "error")

        self.metrics.write(self.out_dir)
        manifest = RunManifest(
            config=self.cfg.model_dump(mode="json"),
            started_at=started.isoformat(),
            finished_at=datetime.now(timezone.utc).isoformat(),
            wall_clock_seconds=time.time() - start_time,
            experiments={name: record},
            files=inventory(self.out_dir),
        )
        write_manifest(self.out_dir, manifest)
        return manifest


def run(
    cfg: RunConfig,
    out_dir: Optional[Path] = None,
    workers: Optional[int] = None,
    metrics: Optional[MetricsCollector] = None,
) -> RunManifest:
    """Run a validated configuration; see Coordinator.run"""
    return Coordinator(cfg, out_dir, workers, metrics).run()
