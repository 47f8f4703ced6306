#!/usr/bin/env python3
"""Persistent MILP worker: JSON-lines over stdin/stdout.

Each request line:
  {"id": int, "op": "solve", "n": int, "obj": [...], "lb": [...], "ub": [...],
   "int": [0/1...], "astart": [...], "acol": [...], "aval": [...],
   "rlo": [...], "rhi": [...], "opt": {"time_limit": s, "gap": g}}
Values with magnitude >= 1e299 are treated as +/- infinity.
Response line:
  {"id": int, "status": "optimal|feasible|infeasible|unbounded|timeout|error",
   "obj": float|null, "x": [...]|null, "msg": str}
"op": "ping" answers {"id":..., "status":"ok", "solver": "...", "msg": ""}.
"""
import json
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

INF_SENTINEL = 1e299


def _decode(arr):
    a = np.asarray(arr, dtype=float)
    a[a >= INF_SENTINEL] = np.inf
    a[a <= -INF_SENTINEL] = -np.inf
    return a


def solve(req):
    n = int(req["n"])
    obj = _decode(req["obj"])
    lb = _decode(req["lb"])
    ub = _decode(req["ub"])
    integ = np.asarray(req["int"], dtype=np.uint8)
    astart = np.asarray(req["astart"], dtype=np.int64)
    acol = np.asarray(req["acol"], dtype=np.int64)
    aval = np.asarray(req["aval"], dtype=float)
    rlo = _decode(req["rlo"])
    rhi = _decode(req["rhi"])
    nrows = len(rlo)
    if n == 0:
        # Degenerate model: every row evaluates to zero.
        ok = all(lo <= 0.0 <= hi for lo, hi in zip(rlo, rhi))
        return {"status": "optimal" if ok else "infeasible",
                "obj": 0.0 if ok else None,
                "x": [] if ok else None}
    opt = req.get("opt", {})
    options = {
        "presolve": True,
        "time_limit": float(opt.get("time_limit", 300.0)),
        "mip_rel_gap": float(opt.get("gap", 1e-6)),
    }
    a_mat = sparse.csr_matrix((aval, acol, astart), shape=(nrows, n))
    res = milp(
        obj,
        constraints=LinearConstraint(a_mat, rlo, rhi),
        bounds=Bounds(lb, ub),
        integrality=integ,
        options=options,
    )
    has_x = res.x is not None
    if res.status == 0:
        status = "optimal"
    elif res.status == 1:
        status = "feasible" if has_x else "timeout"
    elif res.status == 2:
        status = "infeasible"
    elif res.status == 3:
        status = "unbounded"
    else:
        status = "error"
    return {
        "status": status,
        "obj": float(res.fun) if has_x else None,
        "x": [float(v) for v in res.x] if has_x else None,
        "msg": str(res.message),
    }


def main():
    out = sys.stdout
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        rid = None
        try:
            req = json.loads(line)
            rid = req.get("id")
            op = req.get("op", "solve")
            if op == "ping":
                import scipy

                resp = {
                    "status": "ok",
                    "solver": "scipy-highs",
                    "msg": f"scipy {scipy.__version__}",
                }
            elif op == "quit":
                break
            else:
                resp = solve(req)
        except Exception as exc:  # noqa: BLE001 - report and keep serving
            resp = {"status": "error", "obj": None, "x": None, "msg": repr(exc)}
        resp["id"] = rid
        out.write(json.dumps(resp, separators=(",", ":")) + "\n")
        out.flush()


if __name__ == "__main__":
    main()
