"""Subcommand implementations.

Each command takes the parsed arguments, does its work through the library
and returns an exit code; failures propagate as ``FastSizeError`` subclasses
and are mapped onto exit codes by ``main``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..config import DB_ENV_VAR, Settings
from ..exceptions import ConstraintError, InputError, NonConvergenceError
from ..geometry import export_wireframe, format_for_path, generate_geometry, load_template
from ..mission import (
    FlightVehicle,
    MissionResult,
    fly_mission,
    read_history_csv,
    write_history_csv,
)
from ..models import load_mission, load_spec
from ..powertrain import check_compatibility, load_architecture
from ..regression import HistoricalDatabase, fill_unknowns, fit, load_database, predict
from ..sizing import (
    SizingOptions,
    format_report,
    load_sized,
    size_aircraft,
    sized_to_json,
    write_iterations_csv,
)
from .manifest import build_manifest, utc_now, write_manifest
from .plotting import render_history_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0

SIZED_TEXT = "sized.txt"
SIZED_JSON = "sized.json"
HISTORY_CSV = "history.csv"
ITERATIONS_CSV = "iterations.csv"
FLIGHT_JSON = "flight.json"
PREDICTION_JSON = "prediction.json"
MANIFEST_JSON = "manifest.json"


class SegmentReport(BaseModel):
    """Totals of one flown segment."""

    index: int
    kind: str
    reserve: bool
    duration: float = Field(..., description="Segment duration, s")
    distance: float = Field(..., description="Ground distance, m")
    energy: dict[str, float] = Field(..., description="Energy drawn per source, J")
    idle_clamps: int

    model_config = ConfigDict(frozen=True)


class FlightReport(BaseModel):
    """Outcome of an off-design flight, as written to ``flight.json``."""

    name: str
    mtow: float = Field(..., description="Takeoff mass, kg")
    design_distance: float = Field(..., description="Design-segment distance, m")
    flight_time: float = Field(..., description="Time to the end of the reserves, s")
    landing_mass: float = Field(..., description="Mass after the last segment, kg")
    energy_per_source: dict[str, float]
    fuel_per_source: dict[str, float]
    peak_power: dict[str, float]
    idle_clamps: int
    segments: list[SegmentReport]

    model_config = ConfigDict(frozen=True)

    @classmethod
    def from_result(cls, name: str, mtow: float, result: MissionResult) -> FlightReport:
        """Summarize a mission result."""
        return cls(
            name=name,
            mtow=mtow,
            design_distance=result.design_distance,
            flight_time=result.final_state.time,
            landing_mass=result.final_state.mass,
            energy_per_source=result.energy_per_source,
            fuel_per_source=result.fuel_per_source,
            peak_power=result.peak_power,
            idle_clamps=result.idle_clamps,
            segments=[
                SegmentReport(
                    index=s.index,
                    kind=s.kind,
                    reserve=s.reserve,
                    duration=s.duration,
                    distance=s.distance,
                    energy=s.energy,
                    idle_clamps=s.idle_clamps,
                )
                for s in result.segments
            ],
        )

    def to_text(self) -> str:
        """Human-readable summary."""
        lines = [
            f"Flight: {self.name}",
            f"  takeoff mass      {self.mtow:>14.3f} kg",
            f"  landing mass      {self.landing_mass:>14.3f} kg",
            f"  design distance   {self.design_distance / 1000:>14.1f} km",
            f"  flight time       {self.flight_time / 3600:>14.3f} h",
            f"  idle clamps       {self.idle_clamps:>14d}",
        ]
        lines += [
            f"  fuel {sid:<12} {mass:>14.3f} kg" for sid, mass in self.fuel_per_source.items()
        ]
        lines += [
            f"  energy {sid:<10} {energy / 1e9:>14.6f} GJ"
            for sid, energy in self.energy_per_source.items()
        ]
        return "\n".join(lines) + "\n"


class PredictionReport(BaseModel):
    """Structured output of ``predict``."""

    output: str
    unit: str = Field("", description="Unit of the output column")
    inputs: dict[str, float]
    mean: float
    std: float = Field(..., ge=0)
    model: str

    model_config = ConfigDict(frozen=True)


def _out_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        msg = f"cannot create output directory {path}: {e}"
        raise InputError(msg) from e
    return path


def _database(override: Path | None) -> tuple[Path, HistoricalDatabase]:
    if override is not None:
        path = override
        logger.info("historical database: %s (--db)", path)
    else:
        settings = Settings.from_env()
        path = settings.database_path
        origin = DB_ENV_VAR if settings.database_overridden else "bundled"
        logger.info("historical database: %s (%s)", path, origin)
    return path, load_database(path)


def _sizing_options(args: argparse.Namespace) -> SizingOptions:
    try:
        return SizingOptions(
            tolerance=args.tolerance,
            max_iterations=args.max_iter,
            relaxation=args.relaxation,
            initial_mtow_guess=args.initial_mtow,
            dt_max=args.dt_max,
        )
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        msg = f"invalid option {field}: {error['msg']}"
        raise ConstraintError(msg, invariant=field) from e


def cmd_size(args: argparse.Namespace) -> int:
    """Size an aircraft and write its reports.

    Writes ``sized.txt``, ``sized.json``, ``history.csv``, ``iterations.csv``
    and ``manifest.json`` into ``--out-dir``. When the iteration budget runs
    out, ``iterations.csv`` is still written before the error propagates.
    """
    started = utc_now()
    spec = load_spec(args.aircraft)
    profile = load_mission(args.mission)
    arch = load_architecture(args.arch)
    options = _sizing_options(args)
    db_path, db = _database(args.db)
    out = _out_dir(args.out_dir)

    try:
        result = size_aircraft(spec, profile, arch, db, options)
    except NonConvergenceError as e:
        write_iterations_csv(e.iterations, out / ITERATIONS_CSV)
        logger.info("iteration log written to %s", out / ITERATIONS_CSV)
        raise

    sized = result.aircraft
    report = format_report(sized, result.mission)
    structured = sized_to_json(sized)
    (out / SIZED_TEXT).write_text(report, encoding="utf-8")
    (out / SIZED_JSON).write_text(structured, encoding="utf-8")
    write_history_csv(result.mission.history, out / HISTORY_CSV)
    write_iterations_csv(sized.iterations, out / ITERATIONS_CSV)

    manifest = build_manifest(
        "size",
        {"aircraft": args.aircraft, "mission": args.mission, "architecture": args.arch},
        {**options.model_dump(), "database": db_path},
        [SIZED_TEXT, SIZED_JSON, HISTORY_CSV, ITERATIONS_CSV],
        started,
    )
    write_manifest(manifest, out / MANIFEST_JSON)
    sys.stdout.write(structured if args.format == "structured" else report)
    return EXIT_OK


def cmd_fly(args: argparse.Namespace) -> int:
    """Fly an aircraft with fixed masses over a mission.

    The aircraft is either a specification carrying ``[weights]`` together
    with its architecture, or a ``sized.json`` report (``--sized``), which
    embeds both.
    """
    started = utc_now()
    profile = load_mission(args.mission)
    db_path: Path | None = None
    if args.sized is not None:
        sized = load_sized(args.sized)
        arch = load_architecture(args.arch) if args.arch else sized.build_architecture()
        check_compatibility(sized.spec, arch, profile)
        vehicle = sized.vehicle()
    else:
        if args.aircraft is None or args.arch is None:
            msg = "fly needs --aircraft and --arch, or --sized"
            raise InputError(msg)
        spec = load_spec(args.aircraft)
        if spec.weights is None:
            msg = f"{args.aircraft}: aircraft '{spec.name}' has no [weights] table to fly with"
            raise InputError(msg)
        arch = load_architecture(args.arch)
        check_compatibility(spec, arch, profile)
        db_path, db = _database(args.db)
        filled = fill_unknowns(spec, db, arch)
        arch = filled.architecture or arch
        vehicle = FlightVehicle.from_fixed_weights(filled.spec)

    out = _out_dir(args.out_dir)
    result = fly_mission(vehicle, profile, arch, dt_max=args.dt_max)
    flight = FlightReport.from_result(vehicle.spec.name, vehicle.mtow, result)
    structured = flight.model_dump_json(indent=2) + "\n"
    write_history_csv(result.history, out / HISTORY_CSV)
    (out / FLIGHT_JSON).write_text(structured, encoding="utf-8")

    manifest = build_manifest(
        "fly",
        {
            "aircraft": args.aircraft,
            "sized": args.sized,
            "mission": args.mission,
            "architecture": args.arch,
        },
        {"dt_max": args.dt_max, "database": db_path},
        [HISTORY_CSV, FLIGHT_JSON],
        started,
    )
    write_manifest(manifest, out / MANIFEST_JSON)
    sys.stdout.write(structured if args.format == "structured" else flight.to_text())
    return EXIT_OK


def _parse_assignment(text: str) -> tuple[str, float]:
    column, sep, value = text.partition("=")
    if not sep or not column.strip():
        msg = f"expected column=value, got '{text}'"
        raise InputError(msg)
    try:
        return column.strip(), float(value)
    except ValueError:
        msg = f"value of '{column.strip()}' is not a number: '{value}'"
        raise InputError(msg) from None


def cmd_predict(args: argparse.Namespace) -> int:
    """Fit a regression on the database and print one prediction.

    Writes ``prediction.json`` and ``manifest.json`` into ``--out-dir``.
    """
    started = utc_now()
    if not args.at:
        msg = "predict needs at least one --at column=value"
        raise InputError(msg)
    assignments = [_parse_assignment(text) for text in args.at]
    inputs = [column for column, _ in assignments]
    db_path, db = _database(args.db)
    where = {"type": args.type} if args.type else None
    model = fit(db, inputs, args.output, args.mode, where=where)
    prediction = predict(model, [value for _, value in assignments])
    info = db.column_info(db.table_of([*inputs, args.output]), args.output)
    report = PredictionReport(
        output=args.output,
        unit=info.unit,
        inputs=dict(assignments),
        mean=prediction.mean,
        std=prediction.std,
        model=model.describe(),
    )
    structured = report.model_dump_json(indent=2) + "\n"
    out = _out_dir(args.out_dir)
    (out / PREDICTION_JSON).write_text(structured, encoding="utf-8")
    manifest = build_manifest(
        "predict",
        {},
        {
            "output": args.output,
            "at": dict(assignments),
            "mode": args.mode,
            "type": args.type,
            "database": db_path,
        },
        [PREDICTION_JSON],
        started,
    )
    write_manifest(manifest, out / MANIFEST_JSON)
    if args.format == "structured":
        sys.stdout.write(structured)
    else:
        unit = f" {info.unit}" if info.unit else ""
        sys.stdout.write(f"{args.output} = {prediction.mean:.6g} ± {prediction.std:.3g}{unit}\n")
        sys.stdout.write(f"  {info.description}: {model.describe()}\n")
    return EXIT_OK


def _write_output(path: Path, content: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(content)
    except OSError as e:
        msg = f"cannot write {path}: {e}"
        raise InputError(msg) from e


def cmd_plot(args: argparse.Namespace) -> int:
    """Plot a history CSV as a multi-panel SVG.

    ``manifest.json`` goes next to the SVG.
    """
    started = utc_now()
    history = read_history_csv(args.history)
    if not history.samples:
        msg = f"no samples in {args.history}"
        raise InputError(msg)
    out = Path(args.out)
    _write_output(out, render_history_svg(history, title=args.title))
    logger.info("wrote %s (%d samples)", out, len(history))
    manifest = build_manifest(
        "plot", {"history": args.history}, {"title": args.title}, [out.name], started
    )
    write_manifest(manifest, out.parent / MANIFEST_JSON)
    return EXIT_OK


def cmd_viz(args: argparse.Namespace) -> int:
    """Draw the wireframe of a sized aircraft.

    ``manifest.json`` goes next to the drawing.
    """
    started = utc_now()
    sized = load_sized(args.sized)
    template = load_template(args.template)
    out = Path(args.out)
    fmt = args.export_format or format_for_path(out)
    db_path, db = _database(args.db) if args.db is not None else (None, None)
    wireframe = generate_geometry(sized, template, db=db)
    _write_output(out, export_wireframe(wireframe, fmt))
    manifest = build_manifest(
        "viz",
        {"sized": args.sized, "template": args.template},
        {"format": fmt, "database": db_path},
        [out.name],
        started,
    )
    write_manifest(manifest, out.parent / MANIFEST_JSON)
    dims = wireframe.dimensions
    sys.stdout.write(
        f"{sized.name}: span {dims['span']:.2f} m, length {dims['fuselage_length']:.2f} m "
        f"-> {args.out}\n"
    )
    return EXIT_OK
