"""Bundled cylinder-decomposition models.

Each preset is a data file in the diagram JSON schema plus bookkeeping:
display names for components, the cylinder numbering used by the
deformation certificates, named metrics, a canonical involution and the
certificate vectors themselves.

The encodings are generated from cylinder boundary walks: listing the
oriented saddle connections along every boundary circle determines the
whole prediagram, since the rotation at the singularities is the walk
permutation composed with the end swap.  Positive (bottom) walks use the
even end of each connection, negative (top) walks the odd end.

Presets are read from the packaged ``data`` directory, or from the
directory named by the ``FLATKERN_PRESETS`` environment variable.

Run ``python -m flatkern.presets <output-dir>`` to regenerate the files.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional

from .diagram import (
    Matching,
    Prediagram,
    SeparatrixDiagram,
    perm_from_cycles,
    prediagram_from_json,
    prediagram_to_json,
)
from .exactalg import QuadraticNumber, qn
from .surface import Surface

PRESET_IDS = (
    "genus2",
    "prym22odd",
    "prym211",
    "prym1111-base",
    "prym1111-s1",
    "prym1111-s2",
    "prym1111-s3",
    "prym1111-s4",
    "prym1111-s5",
)


def prediagram_from_walks(n_sc: int, cycles) -> Prediagram:
    """Build (E, sigma, tau, theta) from the boundary walk cycles.

    Ends 2i and 2i+1 are the two orientations of saddle connection i; the
    cycles partition the ends and define sigma_inf, so sigma is
    sigma_inf∘tau and the positive set is the even ends.
    """
    n = 2 * n_sc
    sigma_inf = perm_from_cycles(n, cycles)
    tau = perm_from_cycles(n, [(2 * i, 2 * i + 1) for i in range(n_sc)])
    sigma = tuple(sigma_inf[tau[e]] for e in range(n))
    return Prediagram(n, sigma, tau, frozenset(range(0, n, 2)))


@dataclass(frozen=True)
class PresetEntry:
    id: str
    note: str
    prediagram: Prediagram
    names: dict[str, str]
    matching: Optional[Matching]
    cylinder_order: tuple[str, ...]
    metrics: dict[str, tuple[int, dict[str, QuadraticNumber]]]
    involution: Optional[tuple[int, ...]]
    kind: Optional[str]
    certificates: dict
    raw: dict

    def diagram(self, metric: str = "unit-rational") -> SeparatrixDiagram:
        if self.matching is None:
            raise ValueError(f"preset {self.id} is a bare prediagram")
        _, lengths = self.metrics[metric]
        return SeparatrixDiagram(self.prediagram, self.matching, tuple(sorted(lengths.items())))

    def surface(self, metric: str = "unit-rational") -> Surface:
        return Surface.from_diagram(self.diagram(metric))

    def metric_base(self, metric: str) -> int:
        return self.metrics[metric][0]

    @property
    def default_locus(self) -> str:
        """Locus the preset's certificates live in."""
        if self.involution is not None or "prym_minimal" in self.certificates:
            return "prym"
        return "full"

    def certificate_vector(self, spec: dict, metric: str):
        """Materialize a certificate vector: entries are q * c_i^{-1}.

        The ``cylinder`` indices in the spec follow the drawn numbering
        (``cylinder_order``); the returned tuple uses the canonical
        cylinder order of the diagram, which is what the twist kernels
        use.
        """
        D = self.diagram(metric)
        d = self.metric_base(metric)
        canonical = [p for p, _ in D.cylinders()]
        entries = [qn(0, d) for _ in canonical]
        for item in spec["coefficients"]:
            idx = int(item["cylinder"]) - 1
            coeff = Fraction(item["times"])
            cid = self.cylinder_order[idx]
            entries[canonical.index(cid)] = qn(coeff, d) * D.circumference(cid).inverse()
        return tuple(entries)


# -- walk data -------------------------------------------------------------------


def _metric(d: int, lengths: dict) -> dict:
    return {
        "d": d,
        "lengths": {
            sid: {"a": str(Fraction(a)), "b": str(Fraction(b)), "d": d}
            for sid, (a, b) in lengths.items()
        },
    }


HALF = Fraction(1, 2)


def _vec(*items) -> dict:
    return {"coefficients": [{"cylinder": i, "times": str(Fraction(t))} for i, t in items]}


def _build_genus2() -> dict:
    # cylinders: 1 small bottom, 2 wide middle, 3 small top; sc p,q,r,s
    P = prediagram_from_walks(4, [(6,), (2, 0), (4,), (1,), (7, 5), (3,)])
    obj = prediagram_to_json(P)
    obj.update(
        {
            "schema": "flatkern/1",
            "id": "genus2",
            "note": "the stable three-cylinder decomposition in genus 2, "
            "two order-1 singularities, hyperelliptic symmetry",
            "d": 0,
            "matching": {"C0": "C5", "C4": "C3", "C6": "C1"},
            "cylinder_order": ["C6", "C0", "C4"],
            "metrics": {
                "unit-rational": _metric(0, {"S0": (1, 0), "S2": (1, 0), "S4": (1, 0), "S6": (1, 0)}),
                "golden-irrational": _metric(2, {"S0": (1, 0), "S2": (0, 1), "S4": (0, 1), "S6": (1, 0)}),
            },
            "certificates": {
                "kernel_generator": _vec((1, 1), (2, -1), (3, 1)),
            },
        }
    )
    obj["lengths"] = obj["metrics"]["unit-rational"]["lengths"]
    return obj


def _build_prym22odd() -> dict:
    # sc q1,q2,q3 at one singularity, r1,r2,r3 at the other
    P = prediagram_from_walks(
        6, [(8,), (0, 2, 4), (6,), (10,), (3,), (11, 9, 7), (1,), (5,)]
    )
    obj = prediagram_to_json(P)
    obj.update(
        {
            "schema": "flatkern/1",
            "id": "prym22odd",
            "note": "four-cylinder model with two order-2 singularities; the "
            "cylinder involution fixes cylinders 1 and 2 and swaps 3 with 4",
            "d": 0,
            "matching": {"C0": "C7", "C6": "C1", "C8": "C3", "C10": "C5"},
            "cylinder_order": ["C8", "C0", "C6", "C10"],
            "metrics": {
                "unit-rational": _metric(0, {f"S{2*i}": (1, 0) for i in range(6)}),
                "golden-irrational": _metric(
                    2,
                    {
                        "S0": (0, 1),
                        "S2": (1, 0),
                        "S4": (0, 1),
                        "S6": (0, 1),
                        "S8": (1, 0),
                        "S10": (0, 1),
                    },
                ),
            },
            "certificates": {
                "prym_minimal": _vec((1, 1), (2, -1), (3, 1), (4, 1)),
            },
        }
    )
    obj["lengths"] = obj["metrics"]["unit-rational"]["lengths"]
    return obj


def _build_prym211() -> dict:
    # sc s1..s7; order-2 singularity carries s2, s3, s7
    P = prediagram_from_walks(
        7,
        [(0,), (2, 4), (6,), (8, 10), (12,), (3,), (7, 1), (9,), (13, 5), (11,)],
    )
    obj = prediagram_to_json(P)
    obj.update(
        {
            "schema": "flatkern/1",
            "id": "prym211",
            "note": "five-cylinder model with singularity orders (2,1,1); the "
            "cylinder involution exchanges 1 with 5 and 2 with 4, fixing 3",
            "d": 0,
            "matching": {"C0": "C3", "C2": "C1", "C6": "C9", "C8": "C5", "C12": "C11"},
            "cylinder_order": ["C0", "C2", "C6", "C8", "C12"],
            "metrics": {
                "unit-rational": _metric(0, {f"S{2*i}": (1, 0) for i in range(7)}),
                "golden-irrational": _metric(
                    2,
                    {
                        "S0": (1, 0),
                        "S2": (1, 0),
                        "S4": (0, 1),
                        "S6": (0, 1),
                        "S8": (0, 1),
                        "S10": (1, 0),
                        "S12": (1, 0),
                    },
                ),
            },
            "certificates": {
                "prym_minimal": _vec((1, 1), (2, -1), (3, 2), (4, -1), (5, 1)),
            },
        }
    )
    obj["lengths"] = obj["metrics"]["unit-rational"]["lengths"]
    return obj


_BASE_NAMES = {
    "C0": "a", "C2": "b", "C4": "c", "C8": "d", "C10": "e", "C12": "f",
    "C1": "1", "C5": "2", "C7": "3", "C9": "4", "C13": "5", "C15": "6",
}
_BASE_INVOLUTION = [5, 4, 7, 6, 1, 0, 3, 2, 13, 12, 15, 14, 9, 8, 11, 10]


def _base_prediagram() -> Prediagram:
    # four 4-end stars; letters are the loop interiors at stars 1 and 3,
    # digits the interiors at stars 2 and 4
    return prediagram_from_walks(
        8,
        [
            (0,), (1, 3), (2,),          # a, 1, b
            (4, 6), (5,), (7,),          # c, 2, 3
            (8,), (9, 11), (10,),        # d, 4, e
            (12, 14), (13,), (15,),      # f, 5, 6
        ],
    )


def _build_base() -> dict:
    P = _base_prediagram()
    obj = prediagram_to_json(P)
    obj.update(
        {
            "schema": "flatkern/1",
            "id": "prym1111-base",
            "note": "the four-star base prediagram with singularity orders "
            "(1,1,1,1); matchings on it are the input of the classification",
            "d": 0,
            "component_names": dict(_BASE_NAMES),
            "involution": list(_BASE_INVOLUTION),
        }
    )
    return obj


# per surface: matching tuple, figure cylinder order, metrics, certificates
_SURFACE_TABLE = {
    "prym1111-s1": {
        "tuple": "fabced",
        "kind": "first",
        "order": ["b", "c", "d", "e", "f", "a"],
        "metrics": {
            "unit-rational": (0, {f"S{2*i}": (1, 0) for i in range(8)}),
            "golden-irrational": (
                2,
                {
                    "S0": (1, 0), "S4": (1, 0),
                    "S2": (0, 1), "S6": (0, 1),
                    "S8": (HALF, HALF), "S10": (HALF, HALF),
                    "S12": (HALF, HALF), "S14": (HALF, HALF),
                },
            ),
            "stratum-irrational": (
                2,
                {
                    "S0": (1, 0), "S4": (1, 0),
                    "S2": (0, 1), "S6": (0, 1),
                    "S8": (0, 1), "S14": (0, 1),
                    "S10": (1, 0), "S12": (1, 0),
                },
            ),
        },
        "certificates": {
            "prym_minimal": _vec((1, 1), (3, -1), (4, -1), (6, 1)),
            "transverse_pair": {
                "metric": "stratum-irrational",
                "vectors": [_vec((1, 1), (5, -1), (6, 1)), _vec((2, 1), (3, -1), (4, -1))],
            },
        },
    },
    "prym1111-s2": {
        "tuple": "faecdb",
        "kind": "second",
        "order": ["c", "e", "d", "f", "a", "b"],
        "metrics": {
            "unit-rational": (0, {f"S{2*i}": (1, 0) for i in range(8)}),
            "golden-irrational": (
                2,
                {
                    "S0": (1, 0), "S4": (1, 0), "S8": (1, 0), "S12": (1, 0),
                    "S2": (0, 1), "S14": (0, 1), "S6": (0, 1), "S10": (0, 1),
                },
            ),
        },
        "certificates": {
            "prym_minimal": _vec((1, 1), (2, -1), (4, 1), (5, -2), (6, -1)),
            "transverse_pair": {
                "metric": "golden-irrational",
                "vectors": [_vec((1, 1), (2, -1), (5, -1)), _vec((3, 1), (4, -1), (6, 1))],
            },
        },
    },
    "prym1111-s3": {
        "tuple": "cdefab",
        "kind": "second",
        "order": ["b", "f", "e", "d", "c", "a"],
        "metrics": {
            "unit-rational": (0, {f"S{2*i}": (1, 0) for i in range(8)}),
            "golden-irrational": (
                2,
                {
                    "S2": (1, 0), "S14": (1, 0), "S6": (1, 0), "S10": (1, 0),
                    "S0": (0, 1), "S12": (0, 1), "S4": (0, 1), "S8": (0, 1),
                },
            ),
        },
        "certificates": {
            "prym_minimal": _vec((1, 1), (3, 1), (4, 1), (5, -2), (6, 1)),
            "transverse_pair": {
                "metric": "golden-irrational",
                "vectors": [_vec((1, 1), (5, -1), (6, 1)), _vec((2, 1), (3, -1), (4, -1))],
            },
        },
    },
    "prym1111-s4": {
        "tuple": "cafbed",
        "kind": "first",
        "order": ["f", "a", "c", "b", "d", "e"],
        "metrics": {
            "unit-rational": (
                0,
                {
                    "S0": (1, 0), "S4": (1, 0), "S2": (2, 0), "S6": (2, 0),
                    "S8": (1, 0), "S10": (1, 0), "S12": (1, 0), "S14": (1, 0),
                },
            ),
            "golden-irrational": (
                2,
                {
                    "S0": (0, 1), "S4": (0, 1), "S2": (2, 0), "S6": (2, 0),
                    "S8": (1, 0), "S10": (1, 0), "S12": (1, 0), "S14": (1, 0),
                },
            ),
            "stratum-irrational": (
                2,
                {
                    "S0": (1, 0), "S4": (1, 0), "S2": (1, 1), "S6": (1, 1),
                    "S8": (0, 1), "S14": (0, 1), "S10": (1, 0), "S12": (1, 0),
                },
            ),
        },
        "certificates": {
            "prym_minimal": _vec((2, 1), (3, -1), (5, 1), (6, 1)),
            "transverse_pair": {
                "metric": "stratum-irrational",
                "vectors": [_vec((1, 1), (5, -1), (6, -1)), _vec((2, 1), (3, -1), (4, 1))],
            },
        },
    },
    "prym1111-s5": {
        "tuple": "cfeadb",
        "kind": "second",
        "order": ["d", "f", "c", "a", "b", "e"],
        "metrics": {
            "unit-rational": (
                0,
                {
                    "S8": (1, 0), "S12": (1, 0), "S2": (1, 0), "S14": (1, 0),
                    "S6": (1, 0), "S10": (1, 0), "S4": (2, 0), "S0": (2, 0),
                },
            ),
            "golden-irrational": (
                2,
                {
                    "S8": (1, 0), "S12": (1, 0), "S2": (0, 1), "S14": (0, 1),
                    "S6": (0, 1), "S10": (0, 1), "S4": (1, 1), "S0": (1, 1),
                },
            ),
        },
        "certificates": {
            "prym_minimal": _vec((1, 1), (3, -1), (5, 1), (6, 1)),
            "kernel_triple": {
                "metric": "golden-irrational",
                "vectors": [
                    _vec((1, 1), (4, -1), (6, 1)),
                    _vec((2, 1), (4, -1), (5, -1), (6, 1)),
                    _vec((3, 1), (4, -1), (5, -1)),
                ],
            },
        },
    },
}


def _build_surface(pid: str) -> dict:
    P = _base_prediagram()
    spec = _SURFACE_TABLE[pid]
    names = dict(_BASE_NAMES)
    id_of = {v: k for k, v in names.items()}
    digits = sorted(n for n in names.values() if n.isdigit())
    matching = {id_of[letter]: id_of[digits[i]] for i, letter in enumerate(spec["tuple"])}
    obj = prediagram_to_json(P)
    obj.update(
        {
            "schema": "flatkern/1",
            "id": pid,
            "note": f"classified matching ({spec['tuple']}) on the (1,1,1,1) base, "
            f"{spec['kind']} kind, with its certificate vectors",
            "d": 0,
            "component_names": names,
            "matching": matching,
            "cylinder_order": [id_of[x] for x in spec["order"]],
            "metrics": {name: _metric(d, lengths) for name, (d, lengths) in spec["metrics"].items()},
            "involution": list(_BASE_INVOLUTION),
            "kind": spec["kind"],
            "certificates": spec["certificates"],
        }
    )
    obj["lengths"] = obj["metrics"]["unit-rational"]["lengths"]
    return obj


def build_all() -> dict[str, dict]:
    out = {
        "genus2": _build_genus2(),
        "prym22odd": _build_prym22odd(),
        "prym211": _build_prym211(),
        "prym1111-base": _build_base(),
    }
    for pid in _SURFACE_TABLE:
        out[pid] = _build_surface(pid)
    return out


# -- loading ---------------------------------------------------------------------


def _data_dir():
    override = os.environ.get("FLATKERN_PRESETS")
    if override:
        return override
    return None


def _read_preset_json(pid: str) -> dict:
    override = _data_dir()
    if override:
        path = os.path.join(override, f"{pid}.json")
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    ref = resources.files("flatkern").joinpath("data", f"{pid}.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def list_presets() -> list[str]:
    return list(PRESET_IDS)


def load_preset(pid: str) -> PresetEntry:
    if pid not in PRESET_IDS:
        raise KeyError(f"unknown preset {pid!r}")
    obj = _read_preset_json(pid)
    P = prediagram_from_json(obj)
    matching = Matching.from_dict(obj["matching"]) if "matching" in obj else None
    metrics = {}
    for name, mobj in obj.get("metrics", {}).items():
        lengths = {sid: QuadraticNumber.from_json(v) for sid, v in mobj["lengths"].items()}
        metrics[name] = (int(mobj["d"]), lengths)
    involution = tuple(obj["involution"]) if "involution" in obj else None
    return PresetEntry(
        id=pid,
        note=obj.get("note", ""),
        prediagram=P,
        names=obj.get("component_names", {}),
        matching=matching,
        cylinder_order=tuple(obj.get("cylinder_order", ())),
        metrics=metrics,
        involution=involution,
        kind=obj.get("kind"),
        certificates=obj.get("certificates", {}),
        raw=obj,
    )


def write_data_files(directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    for pid, obj in build_all().items():
        path = os.path.join(directory, f"{pid}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True, indent=1)
            fh.write("\n")


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "data"
    )
    write_data_files(target)
    print(f"wrote {len(PRESET_IDS)} presets to {target}")
