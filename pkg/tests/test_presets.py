import json
import os
import subprocess
import sys

import pytest

from flatkern.presets import PRESET_IDS, build_all, list_presets, load_preset
from flatkern.prym import cylinder_permutation, find_prym_involutions
from flatkern.surface import stratum_signature
from flatkern.twistspace import (
    PrymLocus,
    degree,
    is_minimal,
    isoperiodic_twist_space,
    twist_kernel,
    vector_in_kernel,
)

EXPECTED_STRATA = {
    "genus2": ((1, 1), 2, 3),
    "prym22odd": ((2, 2), 3, 4),
    "prym211": ((2, 1, 1), 3, 5),
    "prym1111-s1": ((1, 1, 1, 1), 3, 6),
    "prym1111-s2": ((1, 1, 1, 1), 3, 6),
    "prym1111-s3": ((1, 1, 1, 1), 3, 6),
    "prym1111-s4": ((1, 1, 1, 1), 3, 6),
    "prym1111-s5": ((1, 1, 1, 1), 3, 6),
}


def test_list_presets():
    assert list_presets() == list(PRESET_IDS)


def test_unknown_preset():
    with pytest.raises(KeyError):
        load_preset("nonexistent")


def test_data_files_match_builder():
    built = build_all()
    for pid in PRESET_IDS:
        assert load_preset(pid).raw == built[pid]


def test_every_preset_validates():
    for pid in PRESET_IDS:
        entry = load_preset(pid)
        assert entry.prediagram.validate() == []
        assert entry.prediagram.is_stable()
        if entry.matching is None:
            continue
        kappa, genus, ncyl = EXPECTED_STRATA[pid]
        sig = stratum_signature(entry.prediagram)
        assert sig.kappa == kappa
        assert sig.genus == genus
        assert len(entry.matching.pairs) == ncyl
        for metric in entry.metrics:
            assert entry.diagram(metric).is_valid(), (pid, metric)


def test_round_trip_byte_identical():
    for pid in PRESET_IDS:
        raw = load_preset(pid).raw
        s1 = json.dumps(raw, sort_keys=True)
        s2 = json.dumps(json.loads(s1), sort_keys=True)
        assert s1 == s2


def test_golden_metrics_have_irrational_ratios():
    from flatkern.twistspace import field_ratio_generators

    for pid in PRESET_IDS:
        entry = load_preset(pid)
        if entry.matching is None or "golden-irrational" not in entry.metrics:
            continue
        D = entry.diagram("golden-irrational")
        cs = [D.circumference(p) for p, _ in D.cylinders()]
        _, dim = field_ratio_generators(cs)
        assert dim == 2, pid


def test_prym_certificates_rederive():
    for pid in ("prym22odd", "prym211", "prym1111-s1", "prym1111-s2",
                "prym1111-s3", "prym1111-s4", "prym1111-s5"):
        entry = load_preset(pid)
        D = entry.diagram("golden-irrational")
        invs = find_prym_involutions(D)
        assert invs, pid
        pi = cylinder_permutation(invs[0])
        k_prym = twist_kernel(D, PrymLocus.from_mapping(pi))
        w = entry.certificate_vector(entry.certificates["prym_minimal"], "golden-irrational")
        assert vector_in_kernel(w, k_prym), pid
        assert is_minimal(w, k_prym), pid
        assert degree(w) >= 1, pid


def test_bundled_involution_is_valid():
    for pid in ("prym1111-base", "prym1111-s1", "prym1111-s5"):
        entry = load_preset(pid)
        rho = entry.involution
        assert rho is not None
        P = entry.prediagram
        for e in P.ends():
            assert rho[rho[e]] == e
            assert rho[P.sigma[e]] == P.sigma[rho[e]]
            assert rho[P.tau[e]] == P.tau[rho[e]]
            assert (e in P.positive) != (rho[e] in P.positive)


def test_preset_directory_override(tmp_path):
    from flatkern.presets import write_data_files

    write_data_files(str(tmp_path))
    env = dict(os.environ, FLATKERN_PRESETS=str(tmp_path))
    code = (
        "from flatkern.presets import load_preset;"
        "print(load_preset('genus2').raw['id'])"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "genus2"


def test_surface_presets_match_their_tuple():
    from flatkern.reports import named_base

    nb = named_base("prym1111-base")
    for n, word in ((1, "fabced"), (2, "faecdb"), (3, "cdefab"),
                    (4, "cafbed"), (5, "cfeadb")):
        entry = load_preset(f"prym1111-s{n}")
        assert entry.matching == nb.matching_from_tuple(word)


def test_default_locus():
    assert load_preset("genus2").default_locus == "full"
    assert load_preset("prym22odd").default_locus == "prym"
    assert load_preset("prym1111-s1").default_locus == "prym"
