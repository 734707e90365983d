"""The FastAPI service wrapping the core package.

Every endpoint is a pure function of its request; computations run in
worker threads (FastAPI's default for sync endpoints), and per-entry
parallelism in /verify honours KNOTCHAIN_THREADS.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..chains import symmetric_complex_residuals
from ..corpus import CORPUS_NAMES, SEIFERT, corpus_diagram
from ..diagram import Diagram, DiagramError, is_reduced, parse_diagram
from ..invariants import (DEFAULT_OMEGA_SAMPLES, alexander_from_seifert,
                          alexander_polynomial, blanchfield_chain_level,
                          blanchfield_from_seifert,
                          blanchfield_metaboliser_search,
                          blanchfield_route_match, fox_milnor_test,
                          levine_tristram,
                          omega_is_alexander_root, seifert_metabolic_screen)
from ..knotcx import (abelian_word_hom, augmentation_word_hom,
                      build_alexander_data, build_knot_chain_data,
                      metabelian_word_hom, specialize_complex)
from ..linalg import betti_numbers, laurent_homology
from ..rings import MetabelianRing
from ..serialize import (blanchfield_to_json, complex_to_json,
                         laurent_to_json, presentation_to_json, word_to_json)
from ..triads import (connected_sum, fundamental_triad, to_laurent_complex,
                      unknot_sum_equivalence, unknot_triad, verify_triad,
                      zero_surgery_complex, zero_surgery_laurent)
from ..chains import rationalize
from .schemas import (BlanchfieldRequest, BlanchfieldResponse, ComplexRequest,
                      ComplexResponse, DiagramInput, HealthResponse,
                      ObstructRequest, ObstructResponse, PresentationRequest,
                      PresentationResponse, SumRequest, SumResponse,
                      SurgeryRequest, SurgeryResponse, TriadRequest,
                      TriadResponse, TwistSweepRequest, TwistSweepResponse,
                      VerifyEntryReport, VerifyRequest, VerifyResponse)

app = FastAPI(title="knotchain",
              description="Chain-level knot concordance computations")


def _diagram(inp: DiagramInput) -> Diagram:
    try:
        if inp.name:
            return corpus_diagram(inp.name)
        if inp.unknot:
            return Diagram.unknot()
        if inp.pd is not None:
            return Diagram.from_pd([tuple(t) for t in inp.pd],
                                   base_region=inp.base_region)
        if inp.pd_text is not None:
            return parse_diagram(inp.pd_text, base_region=inp.base_region)
        if inp.gauss is not None:
            return parse_diagram({"gauss": inp.gauss},
                                 base_region=inp.base_region)
    except (DiagramError, KeyError, ValueError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    raise HTTPException(status_code=422, detail="no diagram given")


@app.get("/health", response_model=HealthResponse)
def health():
    return HealthResponse(status="ok", version=__version__)


@app.post("/presentation", response_model=PresentationResponse)
def presentation(req: PresentationRequest):
    d = _diagram(req.diagram)
    if d.is_unknot:
        from ..words import Presentation, Word
        wirt = Presentation(1, [], names={1: "g1"})
        mu, lam = Word.gen(1), Word.gen(2)
        bnd = Presentation(2, [lam * mu * lam.inverse() * mu.inverse(), lam],
                           names={1: "mu", 2: "lambda"})
        return PresentationResponse(
            name=d.name, wirtinger=presentation_to_json(wirt),
            boundary=presentation_to_json(bnd), longitude=[],
            identities_verified=True, writhe=0)
    try:
        data = build_knot_chain_data(d)
    except DiagramError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return PresentationResponse(
        name=d.name,
        wirtinger=presentation_to_json(data.wirtinger),
        boundary=presentation_to_json(data.presentation),
        longitude=word_to_json(data.longitude),
        connecting_words={str(i): word_to_json(w)
                          for i, w in sorted(data.w.items())},
        base_region_used=data.base_region,
        identities_verified=True,
        writhe=d.writhe())


def _hom_for(data, ring_tag):
    if ring_tag == "aug":
        return augmentation_word_hom(data)
    if ring_tag == "abelian":
        return abelian_word_hom(data)
    alex = build_alexander_data(data.wirtinger)
    return metabelian_word_hom(data, MetabelianRing(alex))


@app.post("/complex", response_model=ComplexResponse)
def complex_endpoint(req: ComplexRequest):
    d = _diagram(req.diagram)
    if d.is_unknot:
        from ..triads import circle_complex
        from ..rings import LAURENT_Q
        cx = circle_complex(LAURENT_Q, LAURENT_Q.t())
        return ComplexResponse(complex=complex_to_json(cx, name="unknot"),
                               valid=True, dd_residual_zero=True)
    data = build_knot_chain_data(d)
    free_cx = {"full": data.complex_free, "unicover": data.unicover_free,
               "surgery": data.surgery_free}[req.which]
    cx = specialize_complex(free_cx, _hom_for(data, req.ring))
    valid = cx.validate()
    return ComplexResponse(complex=complex_to_json(cx, name=d.name),
                           valid=valid, dd_residual_zero=valid)


def _triad_report(t):
    checks = verify_triad(t)
    return checks, all(checks.values())


@app.post("/triad", response_model=TriadResponse)
def triad_endpoint(req: TriadRequest):
    d = _diagram(req.diagram)
    t = fundamental_triad(d, coeff=req.coeff) if not d.is_unknot \
        else unknot_triad()
    checks, ok = _triad_report(t)
    out = TriadResponse(
        name=t.name, checks=checks, all_passed=ok, consistency=t.xi,
        alexander_orders=[repr(o) for o in t.alex.orders],
        ranks={str(r): t.Y.rank(r) for r in t.Y.degrees()})
    if req.include_matrices:
        from ..serialize import structure_to_json
        ring = t.ring
        out.matrices = {
            "C": complex_to_json(t.models.C, "C"),
            "D_minus": complex_to_json(t.models.Dm, "D-"),
            "D_plus": complex_to_json(t.models.Dp, "D+"),
            "Y": complex_to_json(t.Y, "Y"),
            "E": complex_to_json(t.E, "E"),
            "i_minus": {str(r): [[ring.to_str(x) for x in row]
                                 for row in t.models.im.comp(r).rows]
                        for r in (0, 1)},
            "i_plus": {str(r): [[ring.to_str(x) for x in row]
                                for row in t.models.ip.comp(r).rows]
                       for r in (0, 1)},
            "varpi": {str(r): [[ring.to_str(x) for x in row]
                               for row in t.models.varpi.comp(r).rows]
                      for r in (0, 1)},
            "f_minus": {str(r): [[ring.to_str(x) for x in row]
                                 for row in t.fm.comp(r).rows]
                        for r in (0, 1)},
            "f_plus": {str(r): [[ring.to_str(x) for x in row]
                                for row in t.fp.comp(r).rows]
                       for r in (0, 1)},
            "g_homotopy": {str(r): [[ring.to_str(x) for x in row]
                                    for row in m.rows]
                           for r, m in t.g_htpy.items()},
            "phi_C": structure_to_json(t.models.phiC, t.models.C),
            "phi_E": structure_to_json(t.phiE, t.E),
            "Phi": structure_to_json(t.Phi, t.Y),
            "distinguished": {
                "g1": ring.to_str(t.g1), "g_q": ring.to_str(t.gq),
                "l_a": ring.to_str(t.la), "l_b": ring.to_str(t.lb)},
        }
    return out


@app.post("/sum", response_model=SumResponse)
def sum_endpoint(req: SumRequest):
    dl, dr = _diagram(req.left), _diagram(req.right)
    tl = fundamental_triad(dl) if not dl.is_unknot else unknot_triad()
    tr = fundamental_triad(dr) if not dr.is_unknot else unknot_triad()
    s = connected_sum(tl, tr)
    checks, ok = _triad_report(s)
    h1 = laurent_homology(to_laurent_complex(s.Y))[1]
    out = SumResponse(
        name=s.name, checks=checks, all_passed=ok, consistency=s.xi,
        homology_degree1={"free_rank": h1[0],
                          "torsion": [repr(x) for x in h1[1]]})
    if dl.is_unknot:
        eq = unknot_sum_equivalence(s)
        out.unknot_identity = eq["checks"]
    return out


@app.post("/surgery", response_model=SurgeryResponse)
def surgery_endpoint(req: SurgeryRequest):
    d = _diagram(req.diagram)
    if d.is_unknot:
        raise HTTPException(status_code=422,
                            detail="zero surgery on the sentinel is S1 x S2; "
                                   "use a diagram")
    t = fundamental_triad(d, coeff=req.coeff)
    N, theta = zero_surgery_complex(t)
    res = symmetric_complex_residuals(N, theta)
    betti = betti_numbers(rationalize(N))
    h1 = laurent_homology(to_laurent_complex(N))[1]
    return SurgeryResponse(
        valid=N.validate(),
        structure_residual_zero=all(m.is_zero() for m in res.values()),
        q_betti={str(r): b for r, b in sorted(betti.items())},
        h1_laurent={"free_rank": h1[0], "torsion": [repr(x) for x in h1[1]]})


@app.post("/blanchfield", response_model=BlanchfieldResponse)
def blanchfield_endpoint(req: BlanchfieldRequest):
    out = BlanchfieldResponse()
    b_seifert = b_chain = None
    if req.seifert is not None:
        b_seifert = blanchfield_from_seifert(req.seifert)
        out.seifert_route = blanchfield_to_json(b_seifert)
    if req.diagram is not None:
        d = _diagram(req.diagram)
        if d.is_unknot:
            out.chain_route = {"dim": 0, "orders": [], "values": [],
                               "hermitian": True, "sesquilinear": True,
                               "nonsingular": True, "basis": "chain"}
        else:
            t = fundamental_triad(d, coeff="abelian")
            NL, thetaL = zero_surgery_laurent(t)
            b_chain = blanchfield_chain_level(NL, thetaL)
            out.chain_route = blanchfield_to_json(b_chain)
    if b_seifert is not None and b_chain is not None:
        out.route_match = blanchfield_route_match(b_seifert, b_chain)
    if req.search_metabolisers:
        b = b_seifert or b_chain
        if b is not None and b.dim <= 6:
            out.metabolisers = blanchfield_metaboliser_search(b)
    return out


@app.post("/obstruct", response_model=ObstructResponse)
def obstruct_endpoint(req: ObstructRequest):
    name = ""
    V = req.seifert
    d = None
    if req.diagram is not None:
        d = _diagram(req.diagram)
        name = d.name
        if V is None and name in SEIFERT:
            V = SEIFERT[name]
    if V is None and d is None:
        raise HTTPException(status_code=422, detail="need a diagram or a "
                                                    "Seifert matrix")
    samples = [tuple(s) for s in req.omega_samples] if req.omega_samples \
        else DEFAULT_OMEGA_SAMPLES
    if V is not None:
        delta = alexander_from_seifert(V)
    else:
        delta = alexander_polynomial(d)
    fm = fox_milnor_test(delta)
    fm_out = {"passes": fm["passes"]}
    if fm.get("factor") is not None:
        fm_out["factor"] = laurent_to_json(fm["factor"])
    if "reason" in fm:
        fm_out["reason"] = fm["reason"]
    sig_profile = {}
    screen = None
    metab = None
    if V is not None:
        for (k, m) in samples:
            if omega_is_alexander_root(delta, k, m):
                sig_profile[f"{k}/{m}"] = None
            else:
                sig_profile[f"{k}/{m}"] = levine_tristram(V, k, m)
        screen = seifert_metabolic_screen(V, samples=samples)
        b = blanchfield_from_seifert(V)
        if b.dim <= 6:
            metab = blanchfield_metaboliser_search(b)
    consistent = True
    if fm["passes"]:
        consistent = all(v in (0, None) for v in sig_profile.values())
    return ObstructResponse(
        name=name, alexander=laurent_to_json(delta), fox_milnor=fm_out,
        signature_profile=sig_profile, seifert_screen=screen,
        blanchfield_metabolisers=metab, consistent=consistent)


@app.post("/obstruct/twist-sweep", response_model=TwistSweepResponse)
def twist_sweep(req: TwistSweepRequest):
    """The concordance screen table over the twist-knot family
    V = [[-1,1],[0,k]]; the screen passes exactly when 4k+1 is a square."""
    import math
    from ..corpus import twist_seifert
    rows, all_match = [], True
    for k in range(req.k_max + 1):
        screen = seifert_metabolic_screen(twist_seifert(k))
        root = math.isqrt(4 * k + 1)
        square = root * root == 4 * k + 1
        rows.append({
            "k": k,
            "alexander": laurent_to_json(
                alexander_from_seifert(twist_seifert(k))),
            "verdict": screen["verdict"],
            "first_failure": screen.get("first_failure"),
            "square_4k_plus_1": square})
        all_match = all_match and             ((screen["verdict"] == "passes screen") == square)
    return TwistSweepResponse(table=rows, matches_square_rule=all_match)


def _verify_entry(name):
    try:
        d = corpus_diagram(name) if isinstance(name, str) else \
            parse_diagram(name)
        checks = {}
        if d.is_unknot:
            t = unknot_triad()
            checks = verify_triad(t, check_consistency=False)
            checks["consistency"] = True
        else:
            checks["reduced"] = is_reduced(d)
            t = fundamental_triad(d, coeff="metabelian")
            checks.update(verify_triad(t))
            N, theta = zero_surgery_complex(t)
            checks["surgery_d2"] = N.validate()
            res = symmetric_complex_residuals(N, theta)
            checks["surgery_structure"] = all(m.is_zero()
                                              for m in res.values())
            betti = betti_numbers(rationalize(N))
            checks["surgery_betti_circle_x_s2"] = \
                [betti.get(r, 0) for r in range(4)] == [1, 1, 1, 1]
        nm = name if isinstance(name, str) else d.name
        return VerifyEntryReport(name=nm, passed=all(checks.values()),
                                 checks=checks)
    except Exception as e:  # report, do not crash the suite
        nm = name if isinstance(name, str) else str(name)
        return VerifyEntryReport(name=nm, passed=False, checks={},
                                 error=f"{type(e).__name__}: {e}")


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest):
    names = req.names
    entries = req.entries or []
    if names is None and not entries:
        names = CORPUS_NAMES
    names = names or []
    work = list(names) + [e.get("diagram", e) for e in entries]
    if not work:
        return VerifyResponse(passed=True, warning="empty corpus", entries=[])
    threads = req.threads or int(os.environ.get("KNOTCHAIN_THREADS", "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(_verify_entry, work))
    else:
        reports = [_verify_entry(w) for w in work]
    reports.sort(key=lambda r: r.name)
    return VerifyResponse(passed=all(r.passed for r in reports),
                          entries=reports)
