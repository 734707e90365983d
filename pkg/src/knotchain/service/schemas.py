"""Pydantic request/response models for the service.

The service validates incoming JSON against these models and parses it
into the core types; diagram inputs accept a PD tuple list, a PD/Gauss
text string, a bundled corpus name, or the unknot sentinel.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field, model_validator


class DiagramInput(BaseModel):
    name: Optional[str] = None          # bundled corpus name
    pd: Optional[list[list[int]]] = None
    pd_text: Optional[str] = None
    gauss: Optional[str] = None
    unknot: bool = False
    base_region: Optional[int] = None

    @model_validator(mode="after")
    def _one_source(self):
        given = [x is not None and x is not False
                 for x in (self.name, self.pd, self.pd_text, self.gauss,
                           self.unknot or None)]
        if sum(bool(g) for g in given) != 1:
            raise ValueError("give exactly one of name/pd/pd_text/gauss/unknot")
        return self


class PresentationRequest(BaseModel):
    diagram: DiagramInput


class PresentationResponse(BaseModel):
    name: str = ""
    wirtinger: dict
    boundary: Optional[dict] = None
    longitude: Optional[list] = None
    connecting_words: Optional[dict] = None
    base_region_used: Optional[int] = None
    identities_verified: bool
    writhe: Optional[int] = None


class ComplexRequest(BaseModel):
    diagram: DiagramInput
    ring: str = Field("abelian", pattern="^(aug|abelian|metabelian)$")
    which: str = Field("full", pattern="^(full|unicover|surgery)$")


class ComplexResponse(BaseModel):
    complex: dict
    valid: bool
    dd_residual_zero: bool


class TriadRequest(BaseModel):
    diagram: DiagramInput
    coeff: str = Field("metabelian", pattern="^(abelian|metabelian)$")
    include_matrices: bool = False


class TriadResponse(BaseModel):
    name: str
    checks: dict
    all_passed: bool
    consistency: dict
    alexander_orders: list
    ranks: dict
    matrices: Optional[dict] = None


class SumRequest(BaseModel):
    left: DiagramInput
    right: DiagramInput


class SumResponse(BaseModel):
    name: str
    checks: dict
    all_passed: bool
    consistency: dict
    homology_degree1: dict
    unknot_identity: Optional[dict] = None


class SurgeryRequest(BaseModel):
    diagram: DiagramInput
    coeff: str = Field("abelian", pattern="^(abelian|metabelian)$")


class SurgeryResponse(BaseModel):
    valid: bool
    structure_residual_zero: bool
    q_betti: dict
    h1_laurent: dict


class BlanchfieldRequest(BaseModel):
    diagram: Optional[DiagramInput] = None
    seifert: Optional[list[list[int]]] = None
    search_metabolisers: bool = True


class BlanchfieldResponse(BaseModel):
    seifert_route: Optional[dict] = None
    chain_route: Optional[dict] = None
    route_match: Optional[dict] = None
    metabolisers: Optional[dict] = None


class ObstructRequest(BaseModel):
    diagram: Optional[DiagramInput] = None
    seifert: Optional[list[list[int]]] = None
    omega_samples: Optional[list[list[int]]] = None


class ObstructResponse(BaseModel):
    name: str = ""
    alexander: dict
    fox_milnor: dict
    signature_profile: dict
    seifert_screen: Optional[dict] = None
    blanchfield_metabolisers: Optional[dict] = None
    consistent: bool


class TwistSweepRequest(BaseModel):
    k_max: int = Field(50, ge=0, le=200)


class TwistSweepResponse(BaseModel):
    table: list  # rows: {k, alexander, verdict, square}
    matches_square_rule: bool


class VerifyRequest(BaseModel):
    names: Optional[list[str]] = None
    entries: Optional[list[dict]] = None
    threads: Optional[int] = None


class VerifyEntryReport(BaseModel):
    name: str
    passed: bool
    checks: dict
    error: Optional[str] = None


class VerifyResponse(BaseModel):
    passed: bool
    warning: Optional[str] = None
    entries: list[VerifyEntryReport]


class HealthResponse(BaseModel):
    status: str
    version: str
