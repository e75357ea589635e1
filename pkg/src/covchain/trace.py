"""JSON-lines chain traces and CSV step summaries.

One JSON object per chain step::

    {"step": 2, "view": "dual",
     "decomposition": [[1, 4], [3, 3], ["w", 2]],
     "basis": [[0, 5], [2, 4], [4, 3]],
     "size": 3, "norm": 4, "basis_norm": 4,
     "proper": [["w", 2]],
     "monitors": {"controlled": true, "thin": true, "nearly_thin": true,
                  "monotone": true}}

Ideals are arrays whose omega components are the string ``"w"``.  The
``proper`` list holds the ideals of this step missing from the next one
(empty on the last step).  ``monitors`` is present only when a control was
supplied.
"""

from __future__ import annotations

import csv
import json
from typing import Iterable, Optional

from .bounds import BoundTable, Control, build_bound_table, is_nearly_thin, is_thin
from .engine import ChainRecord, default_control, step_monotone_ok
from .ideals import OMEGA, DownSet, UpSet, downset_canonicalize, ideal, upset_minimize


def encode_vec(v) -> list:
    return ["w" if c is OMEGA else c for c in v]


def decode_vec(v) -> tuple:
    return ideal(*v)


def step_records(
    chain: ChainRecord, control: Optional[Control] = None, table: Optional[BoundTable] = None
) -> list:
    if control is not None and table is None:
        table = build_bound_table(control, chain.steps[0].downset.dim)
    out = []
    for k, st in enumerate(chain.steps):
        D, U = st.downset, st.upset
        rec = {
            "step": k,
            "view": chain.view,
            "decomposition": [encode_vec(I) for I in D.sorted()],
            "basis": [encode_vec(v) for v in U.sorted()],
            "size": len(D),
            "norm": D.norm,
            "basis_norm": U.norm,
            "proper": [encode_vec(I) for I in sorted(chain.proper[k], key=repr)]
            if k < chain.length
            else [],
            "seconds": st.seconds,
        }
        if control is not None:
            rec["monitors"] = {
                "controlled": D.norm <= control.iterate(k),
                "thin": all(is_thin(I, table) for I in D.ideals),
                "nearly_thin": all(is_nearly_thin(v, table) for v in U.basis),
                "monotone": step_monotone_ok(chain, k),
            }
        out.append(rec)
    return out


def write_jsonl(path, chain: ChainRecord, control: Optional[Control] = None) -> None:
    if control is None and chain.model is not None:
        control = default_control(chain.model, chain.target)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in step_records(chain, control):
            fh.write(json.dumps(rec) + "\n")


def read_jsonl(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def decode_downset(rec: dict, dim: int) -> DownSet:
    return downset_canonicalize((decode_vec(v) for v in rec["decomposition"]), dim)


def decode_upset(rec: dict, dim: int) -> UpSet:
    return upset_minimize((tuple(int(c) for c in v) for v in rec["basis"]), dim)


CSV_COLUMNS = ["step", "size", "norm", "proper_count", "thin_ok", "monotone_ok"]


def write_csv(path, chain: ChainRecord, control: Optional[Control] = None) -> None:
    if control is None and chain.model is not None:
        control = default_control(chain.model, chain.target)
    recs = step_records(chain, control)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for rec in recs:
            mon = rec.get("monitors", {})
            w.writerow(
                [
                    rec["step"],
                    rec["size"],
                    rec["norm"],
                    len(rec["proper"]),
                    int(mon.get("thin", True)),
                    int(mon.get("monotone", True)),
                ]
            )


def format_vectors(vs: Iterable) -> str:
    return ", ".join("(" + ",".join(str(c) for c in encode_vec(v)) + ")" for v in vs)
