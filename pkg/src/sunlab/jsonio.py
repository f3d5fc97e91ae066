"""JSON serialisation for every artifact the CLI reads or writes.

All emitters sort keys so identical inputs give byte-identical files.
Relations are stored as explicit tuple lists with no symmetry closure,
exactly as held in memory.
"""

from __future__ import annotations

import json
from typing import Optional

from .ksets import Presentation, SunflowerCert
from .partitionlab import Colouring, Partition, PartitionReport
from .ramsey import PartitionedHypergraph
from .structures import ClassSpec, Embedding, QfType, Signature, Structure
from .witness import ExtractionTrace, TraceStep, WitnessChain, WitnessLevel


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def signature_to_json(sig: Signature) -> list:
    return [{"name": n, "arity": a} for n, a in sig.relations]


def signature_from_json(data) -> Signature:
    return Signature((d["name"], d["arity"]) for d in data)


def structure_to_json(S: Structure) -> dict:
    out = {
        "signature": signature_to_json(S.signature),
        "size": S.size,
        "relations": {n: sorted(list(t) for t in S.relations[n])
                      for n in S.signature.names},
    }
    if S.meta:
        out["meta"] = S.meta
    return out


def structure_from_json(data) -> Structure:
    return Structure(signature_from_json(data["signature"]), data["size"],
                     data.get("relations", {}), data.get("meta"))


def classspec_to_json(K: ClassSpec) -> dict:
    return {
        "signature": signature_to_json(K.signature),
        "forbidden": [structure_to_json(F) for F in K.forbidden],
        "name": K.name,
    }


def classspec_from_json(data) -> ClassSpec:
    return ClassSpec(signature_from_json(data["signature"]),
                     [structure_from_json(d) for d in data["forbidden"]],
                     name=data.get("name", ""))


def partition_to_json(P: Partition) -> dict:
    return {"blocks": [sorted(b) for b in P.blocks]}


def partition_from_json(data, size: int) -> Partition:
    return Partition(size, data["blocks"])


def colouring_to_json(chi: Colouring) -> dict:
    return {"values": list(chi.values)}


def colouring_from_json(data) -> Colouring:
    return Colouring(data["values"])


def qftype_to_json(p: QfType) -> dict:
    return {
        "parameters": list(p.parameters),
        "positives": sorted([n, list(pat)] for n, pat in p.positives),
    }


def qftype_from_json(data) -> QfType:
    return QfType(data["parameters"],
                  [(n, tuple(pat)) for n, pat in data["positives"]])


def presentation_to_json(P: Presentation) -> dict:
    return {"k": P.k, "sets": [sorted(s) for s in P.sets]}


def presentation_from_json(data, base: Structure) -> Presentation:
    return Presentation(base, data["k"], data["sets"])


def cert_to_json(cert: SunflowerCert) -> dict:
    return {
        "petals": list(cert.petals),
        "centre": sorted(cert.centre),
        "iso": list(cert.iso.map),
        "degenerate": cert.degenerate,
    }


def cert_from_json(data, B: Structure, base: Structure) -> SunflowerCert:
    iso = Embedding(B, base, data["iso"], validate=False)
    return SunflowerCert(data["petals"], data["centre"], iso,
                         data.get("degenerate", False))


def hypergraph_to_json(H: PartitionedHypergraph) -> dict:
    return {
        "n": H.n,
        "parts": [list(p) for p in H.parts],
        "edges": sorted(sorted(e) for e in H.edges),
        "meta": H.meta,
    }


def hypergraph_from_json(data) -> PartitionedHypergraph:
    return PartitionedHypergraph(data["n"], data["parts"], data["edges"],
                                 data.get("meta"))


def chain_to_json(chain: WitnessChain) -> dict:
    levels = []
    for lvl in chain.levels:
        levels.append({
            "structure": structure_to_json(lvl.structure),
            "parts": None if lvl.parts is None else [list(p) for p in lvl.parts],
            "colourings": lvl.colourings,
            "hypergraph_meta": lvl.hypergraph_meta,
        })
    return {"class": classspec_to_json(chain.klass), "levels": levels,
            "seed": chain.seed}


def chain_from_json(data) -> WitnessChain:
    levels = []
    for d in data["levels"]:
        levels.append(WitnessLevel(structure_from_json(d["structure"]),
                                   d.get("parts"), d.get("colourings"),
                                   d.get("hypergraph_meta")))
    return WitnessChain(classspec_from_json(data["class"]), levels,
                        data.get("seed"))


def trace_to_json(trace: ExtractionTrace) -> dict:
    steps = []
    for st in trace.steps:
        steps.append({"level": st.level, "case": st.case, "part": st.part,
                      "f": None if st.f is None else list(st.f),
                      "shared": st.shared, "copy": list(st.copy)})
    return {"steps": steps}


def trace_from_json(data) -> ExtractionTrace:
    steps = [TraceStep(d["level"], d["case"], d.get("part"), d.get("f"),
                       d.get("shared"), d.get("copy", ()))
             for d in data["steps"]]
    return ExtractionTrace(steps)


def partition_report_to_json(report: PartitionReport) -> dict:
    blocks = []
    for b in report.blocks:
        blocks.append({
            "index": b.index,
            "vertices": list(b.vertices),
            "probe_embeds": list(b.probe_embeds),
            "defects": [{"base": list(d.base),
                         "type": qftype_to_json(d.qftype)} for d in b.defects],
            "open_sets": [{"base": list(w.base),
                           "type": qftype_to_json(w.qftype),
                           "realisations": list(w.realisations),
                           "contained_outside_block":
                               not (set(w.realisations) & set(b.vertices))}
                          for w in b.open_sets],
        })
    return {"blocks": blocks, "reverify_with": "partition_report"}


def partition_report_to_csv(report: PartitionReport) -> str:
    lines = ["block,kind,detail,value"]
    for b in report.blocks:
        lines.append(f"{b.index},size,,{len(b.vertices)}")
        for i, flag in enumerate(b.probe_embeds):
            lines.append(f"{b.index},probe,{i},{flag}")
        for d in b.defects:
            base = " ".join(map(str, d.base))
            lines.append(f"{b.index},defect,{base},missing")
    return "\n".join(lines) + "\n"
