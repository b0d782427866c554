"""Cross-document consistency checks."""

from __future__ import annotations

import logging

from ..exceptions import ConstraintError
from ..models import AircraftSpec, MissionProfile
from .architecture import PropArchitecture

logger = logging.getLogger(__name__)


def check_compatibility(
    spec: AircraftSpec, arch: PropArchitecture, profile: MissionProfile | None = None
) -> None:
    """Verify that the aircraft, architecture and mission documents agree.

    Checks that the specification names this architecture, that every source
    component has an energy source entry of the same kind, and that every
    operation the mission uses exists.

    Raises:
        ConstraintError: The documents disagree.
    """
    if spec.architecture_id != arch.id:
        msg = (
            f"aircraft '{spec.name}' expects architecture '{spec.architecture_id}', "
            f"got '{arch.id}'"
        )
        raise ConstraintError(msg, invariant="architecture_id")

    declared = {source.id: source for source in spec.energy_sources}
    for source_id in arch.source_ids:
        if source_id not in declared:
            msg = f"architecture source '{source_id}' has no entry in energy_sources"
            raise ConstraintError(msg, invariant="energy_sources")
        kind = arch.component(source_id).kind
        if declared[source_id].kind != kind:
            msg = (
                f"energy source '{source_id}' is {declared[source_id].kind} in the aircraft "
                f"document but {kind} in the architecture"
            )
            raise ConstraintError(msg, invariant="energy_sources")
    unused = sorted(set(declared) - set(arch.source_ids))
    if unused:
        logger.warning("energy sources not used by architecture '%s': %s", arch.id, unused)

    if profile is not None:
        for index, segment, _ in profile.flight_order():
            if segment.operation_id not in arch.operations:
                msg = (
                    f"segment {index}: operation '{segment.operation_id}' is not defined by "
                    f"architecture '{arch.id}'"
                )
                raise ConstraintError(msg, invariant="operation_id")
