"""
Collection strategies as pure per-round device functions.

Each ``step_*`` function reads a ``RoundContext`` (own state plus the
latest exports of linked devices) and returns the device's new
``ExportPayload``. Information only flows down the potential field: a
device takes inflow from a higher-potential neighbour, and by default only
when that neighbour's exported routing metadata names it (parent id, lower
set or share key). Under the claimed flow rule multi-path and weighted
receivers evaluate the sender's exported count or weight total themselves.
"""

import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from collection_sim.core.constants import (
    ALGORITHM_MULTI_PATH,
    ALGORITHM_SINGLE_PATH,
    ALGORITHM_WEIGHTED,
    FLOW_CLAIMED,
    FLOW_NAMED,
)
from collection_sim.models.payload import DeviceId, ExportPayload, NeighborView, RoundContext


def partition_neighbors(
    own_potential: float,
    neighbors: Sequence[NeighborView],
) -> Tuple[List[NeighborView], List[NeighborView]]:
    """
    Split neighbours into strictly lower (D⁻) and strictly higher (D⁺) potential.

    Equal-potential neighbours belong to neither set. A device whose own
    potential is +inf is unreachable and gets two empty sets.

    Examples:
        own P=5, neighbours {a: 3, b: 7, c: 5} -> ([a], [b])
    """
    if math.isinf(own_potential):
        return [], []
    d_minus = [view for view in neighbors if view.potential < own_potential]
    d_plus = [view for view in neighbors if view.potential > own_potential]
    return d_minus, d_plus


def select_parent(d_minus: Sequence[NeighborView]) -> Optional[DeviceId]:
    """Minimal-potential member of D⁻, ties broken by smallest id."""
    if not d_minus:
        return None
    return min(d_minus, key=lambda view: (view.potential, view.id)).id


def link_weight(radius: float, link_distance: float, p_self: float, p_other: float) -> float:
    """
    Weight of a link: (R - D) * |P - P'|.

    The first factor penalizes links close to the edge of the communication
    range, the second penalizes neighbours with nearly equal potential.

    Raises:
        ValueError: If ``link_distance`` lies outside [0, radius]
    """
    if link_distance < 0 or link_distance > radius:
        raise ValueError(f"link distance {link_distance} outside [0, {radius}]")
    return (radius - link_distance) * abs(p_self - p_other)


def _link_weights(
    radius: float,
    d_minus: Sequence[NeighborView],
    own_potential: float,
) -> Tuple[Dict[DeviceId, float], float]:
    weights = {
        view.id: link_weight(radius, view.link_distance, own_potential, view.potential)
        for view in d_minus
    }
    return weights, math.fsum(weights.values())


def _normalize(weights: Dict[DeviceId, float], total: float) -> Dict[DeviceId, float]:
    if not total > 0:
        return {}
    return {device_id: weight / total for device_id, weight in weights.items()}


def normalized_shares(
    radius: float,
    d_minus: Sequence[NeighborView],
    own_potential: float,
) -> Dict[DeviceId, float]:
    """
    Normalized weights w / N over D⁻, N being the sum of weights.

    Returns an empty map when D⁻ is empty or every weight is zero.
    """
    if not d_minus:
        return {}
    return _normalize(*_link_weights(radius, d_minus, own_potential))


def _lower_set(d_minus: Sequence[NeighborView]) -> frozenset:
    return frozenset(view.id for view in d_minus)


def _downhill(ctx: RoundContext) -> Tuple[List[NeighborView], List[NeighborView]]:
    d_minus, d_plus = partition_neighbors(ctx.own_potential, ctx.neighbors)
    # The source is the sink of the field and never forwards
    if ctx.is_source:
        d_minus = []
    return d_minus, d_plus


# Inflow rules: whether (and how much of) an uphill neighbour's aggregate
# the evaluating device takes this round.

def _takes_single_path(ctx: RoundContext, view: NeighborView) -> bool:
    return view.payload.parent == ctx.own_id


def _takes_multi_path(ctx: RoundContext, view: NeighborView) -> bool:
    payload = view.payload
    if payload.lower_count < 1:
        return False
    return ctx.flow == FLOW_CLAIMED or ctx.own_id in payload.lower_set


def _weighted_fraction(ctx: RoundContext, view: NeighborView) -> Optional[float]:
    """
    Fraction of ``view``'s aggregate assigned to the evaluating device.

    Named flow reads the sender's exported share map. Claimed flow
    recomputes the symmetric link weight w(δ′, δ) from the current link
    length and the sender's exported potential, and divides it by the
    sender's exported N(δ′); receivers then need not sum to exactly 1.
    """
    payload = view.payload
    if ctx.flow == FLOW_NAMED:
        return payload.shares.get(ctx.own_id)
    if not payload.weight_total > 0:
        return None
    weight = link_weight(ctx.radius, view.link_distance, view.potential, ctx.own_potential)
    if not weight > 0:
        return None
    return min(weight / payload.weight_total, 1.0)


def _takes_weighted(ctx: RoundContext, view: NeighborView) -> bool:
    return _weighted_fraction(ctx, view) is not None


def step_single_path(ctx: RoundContext) -> ExportPayload:
    """C_sp: own value plus the whole aggregate of every child that chose us."""
    aggregation = ctx.kind
    d_minus, d_plus = _downhill(ctx)

    total = ctx.own_value
    for view in d_plus:
        if _takes_single_path(ctx, view):
            total = aggregation.combine(total, view.payload.aggregate)

    return ExportPayload(
        aggregate=total,
        parent=select_parent(d_minus),
        lower_set=_lower_set(d_minus),
    )


def step_multi_path(ctx: RoundContext) -> ExportPayload:
    """C_mp: own value plus an even share of every uphill neighbour's aggregate."""
    aggregation = ctx.kind
    d_minus, d_plus = _downhill(ctx)

    total = ctx.own_value
    for view in d_plus:
        payload = view.payload
        if _takes_multi_path(ctx, view):
            total = aggregation.combine(
                total, aggregation.split_even(payload.aggregate, payload.lower_count)
            )

    return ExportPayload(aggregate=total, lower_set=_lower_set(d_minus))


def step_weighted(ctx: RoundContext) -> ExportPayload:
    """C_wmp: own value plus the weighted share each uphill neighbour assigned us."""
    aggregation = ctx.kind
    d_minus, d_plus = _downhill(ctx)

    total = ctx.own_value
    for view in d_plus:
        fraction = _weighted_fraction(ctx, view)
        if fraction is not None:
            total = aggregation.combine(total, aggregation.scale(view.payload.aggregate, fraction))

    weights, weight_total = _link_weights(ctx.radius, d_minus, ctx.own_potential)
    return ExportPayload(
        aggregate=total,
        shares=_normalize(weights, weight_total),
        lower_set=_lower_set(d_minus),
        weight_total=weight_total,
    )


StepFunction = Callable[[RoundContext], ExportPayload]

STEP_FUNCTIONS: Dict[str, StepFunction] = {
    ALGORITHM_SINGLE_PATH: step_single_path,
    ALGORITHM_MULTI_PATH: step_multi_path,
    ALGORITHM_WEIGHTED: step_weighted,
}

_TAKES_INFLOW = {
    ALGORITHM_SINGLE_PATH: _takes_single_path,
    ALGORITHM_MULTI_PATH: _takes_multi_path,
    ALGORITHM_WEIGHTED: _takes_weighted,
}


def get_step_function(algorithm: str) -> StepFunction:
    try:
        return STEP_FUNCTIONS[algorithm]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {algorithm!r}, expected one of {sorted(STEP_FUNCTIONS)}"
        ) from None


def inflow_sources(ctx: RoundContext, algorithm: str) -> List[DeviceId]:
    """Ids of the neighbours ``ctx``'s device takes inflow from this round."""
    takes_inflow = _TAKES_INFLOW[algorithm]
    _, d_plus = _downhill(ctx)
    return [view.id for view in d_plus if takes_inflow(ctx, view)]
