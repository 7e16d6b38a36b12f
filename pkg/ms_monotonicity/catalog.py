"""
JSON documents for field models and boundary traces
"""

import json
import logging
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator, model_validator

from .competitors import TWO_PI, FourierTrace, SectorTrace
from .errors import ConfigError
from .geometry import (
    CrackTip,
    FieldModel,
    PlanarInterface,
    Point2,
    Propeller,
    SmoothHarmonic,
    UnitVector,
)

logger = logging.getLogger(__name__)

Pair = Tuple[float, float]


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CrackTipDoc(_Doc):
    kind: Literal["crack_tip"] = "crack_tip"
    tip: Pair = (0.0, 0.0)
    axis_angle: float = 0.0

    def build(self):
        return CrackTip(Point2(*self.tip), self.axis_angle)


class PlanarInterfaceDoc(_Doc):
    kind: Literal["planar_interface"] = "planar_interface"
    point: Pair = (0.0, 0.0)
    normal: Pair = (0.0, 1.0)
    alpha: float = 1.0
    beta: float = 0.0

    @field_validator("normal")
    @classmethod
    def _unit_normal(cls, v):
        if abs(v[0] ** 2 + v[1] ** 2 - 1.0) > 1e-12:
            raise ValueError("normal must be a unit vector")
        return v

    @model_validator(mode="after")
    def _distinct_values(self):
        if self.alpha == self.beta:
            raise ValueError("alpha and beta must differ")
        return self

    def build(self):
        return PlanarInterface(Point2(*self.point), UnitVector(*self.normal), self.alpha, self.beta)


class PropellerDoc(_Doc):
    kind: Literal["propeller"] = "propeller"
    center: Pair = (0.0, 0.0)
    axis_angle: float = 0.0
    values: Tuple[float, float, float] = (0.0, 1.0, 2.0)

    @field_validator("values")
    @classmethod
    def _distinct(cls, v):
        if len(set(v)) != 3:
            raise ValueError("the three values must be pairwise distinct")
        return v

    def build(self):
        return Propeller(Point2(*self.center), self.axis_angle, self.values)


class SmoothHarmonicDoc(_Doc):
    kind: Literal["smooth_harmonic"] = "smooth_harmonic"
    center: Pair = (0.0, 0.0)
    coefficients: List[Pair] = Field(min_length=1)

    def build(self):
        return SmoothHarmonic(Point2(*self.center), tuple(tuple(c) for c in self.coefficients))


ModelDoc = Annotated[
    Union[CrackTipDoc, PlanarInterfaceDoc, PropellerDoc, SmoothHarmonicDoc],
    Field(discriminator="kind"),
]
_model_adapter = TypeAdapter(ModelDoc)


class TraceDoc(_Doc):
    """Boundary trace: a_0 + sum a_k cos k phi + b_k sin k phi on a circle, or sum a_k cos(k pi phi / theta) on an arc"""

    r: float = Field(gt=0.0)
    theta: Optional[float] = Field(default=None, gt=0.0, le=6.283185307179586)
    a: List[float] = Field(min_length=1)
    b: List[float] = Field(default_factory=list)
    allow_slit: bool = False

    @model_validator(mode="after")
    def _lengths(self):
        if self.theta is not None and self.theta >= TWO_PI and not self.allow_slit:
            raise ValueError("theta = 2pi is a slit disk and needs allow_slit: true")
        if self.theta is None and len(self.b) != len(self.a) - 1:
            raise ValueError("disk traces need one sine coefficient per mode k >= 1")
        if self.theta is not None and self.b:
            raise ValueError("sector traces carry sine coefficients in a only")
        return self


# =========================
# Conversions
# =========================
def _config_error(exc: ValidationError, where: str) -> ConfigError:
    lines = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"])
        lines.append(f"{path or where}: {err['msg']}")
    return ConfigError("\n".join(lines), field=where)


def _load(source):
    if isinstance(source, (str, Path)) and Path(source).suffix == ".json" and Path(source).exists():
        with open(source) as f:
            return json.load(f)
    if isinstance(source, str):
        return json.loads(source)
    return source


def model_to_doc(model: FieldModel):
    if isinstance(model, CrackTip):
        return CrackTipDoc(tip=(model.tip.x, model.tip.y), axis_angle=model.axis_angle)
    if isinstance(model, PlanarInterface):
        return PlanarInterfaceDoc(point=(model.point.x, model.point.y), normal=(model.normal.ux, model.normal.uy),
                                  alpha=model.alpha, beta=model.beta)
    if isinstance(model, Propeller):
        return PropellerDoc(center=(model.center.x, model.center.y), axis_angle=model.axis_angle,
                            values=model.values)
    if isinstance(model, SmoothHarmonic):
        return SmoothHarmonicDoc(center=(model.center.x, model.center.y), coefficients=list(model.coefficients))
    raise TypeError(f"no document type for {type(model).__name__}")


def parse_model(source) -> FieldModel:
    """FieldModel from a JSON string, a .json path or an already-decoded dict"""
    try:
        doc = _model_adapter.validate_python(_load(source))
        return doc.build()
    except ValidationError as exc:
        raise _config_error(exc, "model") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", field="model") from exc
    except ValueError as exc:
        raise ConfigError(str(exc), field="model") from exc


def dump_model(model: FieldModel) -> dict:
    return model_to_doc(model).model_dump(mode="json")


def parse_catalog(source) -> dict:
    """{name: FieldModel} from a JSON object of named model documents"""
    data = _load(source)
    if not isinstance(data, dict):
        raise ConfigError("catalog must be a JSON object of named models", field="catalog")
    out = {}
    for name, entry in data.items():
        try:
            out[name] = _model_adapter.validate_python(entry).build()
        except ValidationError as exc:
            raise _config_error(exc, f"catalog.{name}") from exc
    return out


def dump_catalog(models: dict) -> dict:
    return {name: dump_model(m) for name, m in models.items()}


def parse_trace(source):
    """FourierTrace (no theta) or SectorTrace from a trace document"""
    try:
        doc = TraceDoc.model_validate(_load(source))
    except ValidationError as exc:
        raise _config_error(exc, "trace") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", field="trace") from exc
    if doc.theta is None:
        return FourierTrace(doc.r, tuple(doc.a), tuple(doc.b))
    return SectorTrace(doc.r, doc.theta, tuple(doc.a), allow_slit=doc.allow_slit)


def dump_trace(trace) -> dict:
    """JSON document of a FourierTrace or SectorTrace"""
    theta = getattr(trace, "theta", None)
    if theta is None:
        doc = TraceDoc(r=trace.r, a=list(trace.a), b=list(trace.b))
    else:
        doc = TraceDoc(r=trace.r, theta=theta, a=list(trace.a), allow_slit=trace.allow_slit)
    exclude = None if doc.allow_slit else {"allow_slit"}
    return doc.model_dump(mode="json", exclude_none=True, exclude=exclude)
