"""The worked-example corpus written by ``kumlift demo``."""

from __future__ import annotations

import random

from kumlift.document import to_json
from kumlift.kummer import make_kummer_context
from kumlift.lift import lift_criterion, n_context
from kumlift.linalg import RatMatrix
from kumlift.mukai import identity_block, orlov_iso_of_sp, phi_P, unipotent_upper
from kumlift.sampling import random_symplectic, standard_tori
from kumlift.torus import J0, product_torus


def _torus_entry(T) -> dict:
    return {"g": T.g, "J": to_json(T.J)}


def _scalar(torus: str, c: int) -> dict:
    return {"scalar": str(c), "torus": torus}


def _identity_suite() -> dict:
    T = standard_tori()
    E, A = T["E"], T["ExE"]
    return {
        "comment": "identity maps: every task passes",
        "tori": {"E": _torus_entry(E), "A": {"product": ["E", "E"]}},
        "homs": {"id_E": _scalar("E", 1), "two_E": _scalar("E", 2)},
        "block_maps": {
            "id_sp_E": {"kind": "sp", "source": "E", "target": "E", "matrix": to_json(identity_block(E).g)},
            "id_sp_A": {"kind": "sp", "source": "A", "target": "A", "matrix": to_json(identity_block(A).g)},
        },
        "tasks": [
            {"id": "sp-identity", "op": "check-sp", "map": "id_sp_E"},
            {"id": "hodge-identity", "op": "check-hodge", "map": "id_sp_E"},
            {"id": "lift-identity-id", "op": "check-lift", "map": "id_sp_E", "isogeny": "id_E"},
            {"id": "lift-identity-n2", "op": "check-lift", "map": "id_sp_E", "n": 2},
            {"id": "pd-identity", "op": "pd-square", "isogeny": "id_E"},
            {"id": "kummer-identity", "op": "kummer-split", "map": "id_sp_A", "n": 2},
        ],
    }


def _phi_p() -> dict:
    E = standard_tori()["E"]
    return {
        "comment": "Poincare map on V_E: a Hodge isometry that does not lift along n_E",
        "tori": {"E": _torus_entry(E)},
        "homs": {"two_E": _scalar("E", 2), "three_E": _scalar("E", 3)},
        "block_maps": {"phi": {"kind": "mukai", "source": "E", "target": "E", "matrix": to_json(phi_P(E).F)}},
        "tasks": [
            {"id": "phi-hodge", "op": "check-hodge", "map": "phi"},
            {"id": "phi-lift-2", "op": "check-lift", "map": "phi", "isogeny": "two_E"},
            {"id": "phi-lift-3", "op": "check-lift", "map": "phi", "n": 3},
            {"id": "phi-restrict-2", "op": "restrict", "map": "phi", "n": 2},
        ],
    }


def _unipotent() -> dict:
    E = standard_tori()["E"]
    u4 = unipotent_upper(E, J0.scale(4))
    u1 = unipotent_upper(E, J0)
    gamma = lift_criterion(n_context(E, 2), orlov_iso_of_sp(u4)).value
    return {
        "comment": "unipotent symplectic maps with upper block 4J and J",
        "tori": {"E": _torus_entry(E)},
        "homs": {"two_E": _scalar("E", 2)},
        "block_maps": {
            "u4": {"kind": "sp", "source": "E", "target": "E", "matrix": to_json(u4.g)},
            "u1": {"kind": "sp", "source": "E", "target": "E", "matrix": to_json(u1.g)},
            "gamma4": {"kind": "mukai", "source": "E", "target": "E", "matrix": to_json(gamma.F)},
        },
        "tasks": [
            {"id": "sp-u4", "op": "check-sp", "map": "u4"},
            {"id": "lift-u4", "op": "check-lift", "map": "u4", "n": 2},
            {"id": "restrict-gamma4", "op": "restrict", "map": "gamma4", "isogeny": "two_E"},
            {"id": "lift-u1", "op": "check-lift", "map": "u1", "n": 2},
        ],
    }


def _not_symplectic() -> dict:
    E = standard_tori()["E"]
    N = RatMatrix.from_rows([[1, 0], [0, -1]])
    return {
        "comment": "a symmetric upper block is not symplectic; a real-structure swap is not Hodge",
        "tori": {"E": _torus_entry(E)},
        "block_maps": {
            "uN": {"kind": "sp", "source": "E", "target": "E", "matrix": to_json(unipotent_upper(E, N).g)},
            "swap": {"kind": "mukai", "source": "E", "target": "E",
                     "matrix": [["0", "1", "0", "0"], ["1", "0", "0", "0"], ["0", "0", "0", "1"], ["0", "0", "1", "0"]]},
        },
        "tasks": [
            {"id": "sp-symmetric", "op": "check-sp", "map": "uN"},
            {"id": "hodge-swap", "op": "check-hodge", "map": "swap"},
        ],
    }


def _pd_squares() -> dict:
    T = standard_tori()
    k = make_kummer_context(T["ExE"], n=2)
    NxA = k.src.NxA
    return {
        "comment": "deg(q) phi_A = q^* phi_B q^* for multiplication maps and the Kummer isogeny",
        "tori": {
            "E": _torus_entry(T["E"]),
            "A": {"product": ["E", "E"]},
            "T": _torus_entry(T["T"]),
            "NxA": _torus_entry(NxA),
            "A2": {"product": ["A", "A"]},
        },
        "homs": {
            "two_E": _scalar("E", 2),
            "three_E": _scalar("E", 3),
            "two_A": _scalar("A", 2),
            "three_T": _scalar("T", 3),
            "kummer_q": {"source": "NxA", "target": "A2", "matrix": to_json(k.src.q.M)},
        },
        "tasks": [
            {"id": f"pd-{h}", "op": "pd-square", "isogeny": h}
            for h in ("two_E", "three_E", "two_A", "three_T", "kummer_q")
        ],
    }


def _kummer() -> dict:
    T = standard_tori()
    A = T["ExE"]
    rng = random.Random(2024)
    good = random_symplectic(rng, A, 3, upper_modulus=4)
    bad = unipotent_upper(A, product_torus([T["E"], T["E"]]).J.scale(2))
    return {
        "comment": "Kummer transport for n = 2: upper block divisible by 4 versus by 2",
        "tori": {"E": _torus_entry(T["E"]), "A": {"product": ["E", "E"]}},
        "block_maps": {
            "good": {"kind": "sp", "source": "A", "target": "A", "matrix": to_json(good.g)},
            "bad": {"kind": "sp", "source": "A", "target": "A", "matrix": to_json(bad.g)},
            "phi_A": {"kind": "mukai", "source": "A", "target": "A", "matrix": to_json(phi_P(A).F)},
        },
        "tasks": [
            {"id": "kummer-good", "op": "kummer-split", "map": "good", "n": 2},
            {"id": "kummer-bad", "op": "kummer-split", "map": "bad", "n": 2},
            {"id": "phi-A-lift", "op": "check-lift", "map": "phi_A", "n": 2},
        ],
    }


DOCUMENTS = {
    "identity_suite": _identity_suite,
    "phi_p": _phi_p,
    "unipotent": _unipotent,
    "not_symplectic": _not_symplectic,
    "pd_squares": _pd_squares,
    "kummer": _kummer,
}

MALFORMED = '{"tori": {"E": {"g": 1, "J": [["0", "-1"], ["1", "0"]]}}, "tasks": [{"op": "check-sp"'
