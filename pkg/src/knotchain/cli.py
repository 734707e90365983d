"""Batch command-line front end.

The CLI is a thin client of the service: by default it mounts the FastAPI
app in-process over an ASGI transport (no server or network needed), or
talks to a remote instance with --server.  Exit codes: 0 success,
1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys


def _client(server):
    import httpx
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process: mount the ASGI app behind a sync httpx client
    from fastapi.testclient import TestClient
    from .service import app
    return TestClient(app)


def _diagram_arg(args):
    if args.input == "unknot":
        return {"unknot": True}
    from .corpus import CORPUS_NAMES
    if args.input in CORPUS_NAMES:
        return {"name": args.input}
    if os.path.exists(args.input):
        with open(args.input) as f:
            text = f.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            if text.strip().upper().startswith(("O", "U")):
                return {"gauss": text.strip()}
            return {"pd_text": text.strip()}
        if isinstance(data, dict):
            out = {}
            if "pd" in data:
                out["pd"] = data["pd"]
            elif "gauss" in data:
                out["gauss"] = data["gauss"]
            if "base_region" in data:
                out["base_region"] = data["base_region"]
            if out:
                return out
            raise SystemExit(_fail(2, f"no 'pd' or 'gauss' key in {args.input}"))
        return {"pd": data}
    # inline PD text
    if "[" in args.input or "(" in args.input:
        return {"pd_text": args.input}
    raise SystemExit(_fail(2, f"unknown knot or unreadable file: {args.input}"))


def _fail(code, message):
    print(json.dumps({"error": message}), file=sys.stderr)
    return code


def _emit(payload, args):
    if getattr(args, "format", "json") == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(payload)


def _post(args, path, body):
    with _client(args.server) as c:
        r = c.post(path, json=body)
    if r.status_code == 422:
        detail = r.json().get("detail", "invalid input")
        raise SystemExit(_fail(2, f"{detail}"))
    r.raise_for_status()
    return r.json()


def cmd_presentation(args):
    out = _post(args, "/presentation", {"diagram": _diagram_arg(args)})
    _emit(out, args)
    return 0 if out["identities_verified"] else 1


def cmd_complex(args):
    out = _post(args, "/complex", {"diagram": _diagram_arg(args),
                                   "ring": args.ring, "which": args.which})
    _emit(out, args)
    return 0 if out["valid"] else 1


def cmd_triad(args):
    out = _post(args, "/triad", {"diagram": _diagram_arg(args),
                                 "coeff": args.ring
                                 if args.ring != "aug" else "metabelian"})
    _emit(out, args)
    return 0 if out["all_passed"] else 1


def cmd_sum(args):
    left = {"unknot": True} if args.left == "unknot" else \
        _diagram_arg(argparse.Namespace(input=args.left))
    right = {"unknot": True} if args.right == "unknot" else \
        _diagram_arg(argparse.Namespace(input=args.right))
    out = _post(args, "/sum", {"left": left, "right": right})
    _emit(out, args)
    return 0 if out["all_passed"] else 1


def cmd_surgery(args):
    out = _post(args, "/surgery", {"diagram": _diagram_arg(args),
                                   "coeff": "abelian" if args.ring == "aug"
                                   else args.ring})
    _emit(out, args)
    ok = out["valid"] and out["structure_residual_zero"]
    return 0 if ok else 1


def cmd_blanchfield(args):
    body = {"search_metabolisers": not args.no_metabolisers}
    if args.input:
        body["diagram"] = _diagram_arg(args)
    if args.seifert:
        body["seifert"] = _load_seifert(args.seifert)
    elif args.input:
        from .corpus import SEIFERT
        if args.input in SEIFERT:
            body["seifert"] = SEIFERT[args.input]
    out = _post(args, "/blanchfield", body)
    _emit(out, args)
    ok = True
    for route in ("seifert_route", "chain_route"):
        if out.get(route):
            ok = ok and out[route]["hermitian"] and \
                out[route]["sesquilinear"] and out[route]["nonsingular"]
    return 0 if ok else 1


def _load_seifert(path_or_json):
    try:
        data = json.loads(path_or_json)
    except json.JSONDecodeError:
        with open(path_or_json) as f:
            data = json.load(f)
    if isinstance(data, dict):
        data = data["V"]
    return data


def cmd_obstruct(args):
    if args.twist_sweep is not None:
        out = _post(args, "/obstruct/twist-sweep",
                    {"k_max": args.twist_sweep})
        _emit(out, args)
        return 0 if out["matches_square_rule"] else 1
    body = {}
    if args.input:
        body["diagram"] = _diagram_arg(args)
    if args.seifert:
        body["seifert"] = _load_seifert(args.seifert)
    out = _post(args, "/obstruct", body)
    _emit(out, args)
    return 0 if out["consistent"] else 1


def cmd_verify(args):
    body = {}
    if args.corpus:
        entries = []
        for fn in sorted(os.listdir(args.corpus)):
            if fn.endswith(".json"):
                with open(os.path.join(args.corpus, fn)) as f:
                    entries.append(json.load(f))
        body["entries"] = entries
        body["names"] = []
    elif args.names:
        body["names"] = args.names
    if args.threads:
        body["threads"] = args.threads
    out = _post(args, "/verify", body)
    _emit(out, args)
    return 0 if out["passed"] else 1


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="knotchain",
        description="chain-level knot concordance computations")
    ap.add_argument("--server", default=os.environ.get("KNOTCHAIN_SERVER"),
                    help="remote service URL (default: run in-process)")
    ap.add_argument("--format", default="json", choices=["json"])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    p = add("presentation", cmd_presentation,
            help="Wirtinger and boundary presentations with identities")
    p.add_argument("input", help="corpus name, PD file/text, or 'unknot'")

    p = add("complex", cmd_complex, help="handle chain complex as JSON")
    p.add_argument("input")
    p.add_argument("--ring", default="abelian",
                   choices=["aug", "abelian", "metabelian"])
    p.add_argument("--which", default="full",
                   choices=["full", "unicover", "surgery"])

    p = add("triad", cmd_triad, help="fundamental symmetric Poincare triad")
    p.add_argument("input")
    p.add_argument("--ring", default="metabelian",
                   choices=["abelian", "metabelian"])

    p = add("sum", cmd_sum, help="connected sum of two triads")
    p.add_argument("left")
    p.add_argument("right")

    p = add("surgery", cmd_surgery, help="algebraic zero surgery complex")
    p.add_argument("input")
    p.add_argument("--ring", default="abelian",
                   choices=["abelian", "metabelian"])

    p = add("blanchfield", cmd_blanchfield,
            help="Blanchfield forms by both routes")
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--seifert", help="JSON matrix or file with {'V': [[..]]}")
    p.add_argument("--no-metabolisers", action="store_true")

    p = add("obstruct", cmd_obstruct, help="concordance obstruction report")
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--seifert")
    p.add_argument("--twist-sweep", type=int, metavar="K_MAX",
                   help="screen table for the twist-knot family k = 0..K_MAX")

    p = add("verify", cmd_verify, help="run the verification suite")
    p.add_argument("names", nargs="*", help="corpus names (default: all)")
    p.add_argument("--corpus", help="directory of corpus entry JSON files")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("KNOTCHAIN_THREADS", "0")) or None)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as e:
        raise
    except FileNotFoundError as e:
        return _fail(2, str(e))


if __name__ == "__main__":
    sys.exit(main())
