#!/usr/bin/env python3
"""Smoke test for the fbl_lab extension module.

Build and stage the module first:

    cargo build --release -p fbl-lab-py
    cp target/release/libfbl_lab.so python/fbl_lab.so

then run `python3 python/smoke_test.py` from the repository root.
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import fbl_lab


def main():
    # Evaluation and norms.
    assert fbl_lab.eval_expr("sup(gen(1,0),gen(0,1))", ["2", "7"]) == "7"
    cert = json.loads(fbl_lab.norm("l1:1", "abs(gen(1))"))
    assert cert["value"] == "1" and cert["method"] == "exact-cone-enumeration"
    cert = json.loads(fbl_lab.norm("l1:2", "sup(abs(gen(1,0)),abs(gen(0,1)))"))
    assert cert["value"] == "2"
    sample = json.loads(fbl_lab.norm("l1:2", "abs(gen(1,1))", "sample", 200, 7))
    assert sample["method"] == "sampling-lower-bound"
    assert fbl_lab.sup_norm("l1:2", "sup(gen(1,0),gen(0,1))") == "1"

    # Disjointness.
    out = json.loads(fbl_lab.disjoint("l1:2", "abs(gen(1,0))", "abs(gen(0,1))"))
    assert out["disjoint"] is False and "witness" in out
    out = json.loads(
        fbl_lab.disjoint("l1:1", "sup(gen(1),gen(0))", "sup(neg(gen(1)),gen(0))")
    )
    assert out["disjoint"] is True

    # Classification and the witness pipeline.
    record = json.loads(fbl_lab.classify("l1:1", "abs(gen(1))"))
    assert record["x_base"] == ["1/3"]
    assert record["index"] == {"n": 1, "delta": "1/16", "eps": "1/6"}
    out = json.loads(
        fbl_lab.witness("l1:2", ["abs(gen(1,0))", "abs(gen(0,1))", "abs(gen(1,1))"])
    )
    assert "found" in out

    # Chain-condition verification.
    report = json.loads(
        fbl_lab.sigma_bcc("l1:2", json.dumps({"2": ["abs(gen(1,0))", "abs(gen(0,1))"]}))
    )
    assert report["pass"] is True  # the coordinate moduli meet at (1,1)
    report = json.loads(
        fbl_lab.sigma_bcc(
            "l1:1", json.dumps({"2": ["sup(gen(1),gen(0))", "sup(neg(gen(1)),gen(0))"]})
        )
    )
    assert report["pass"] is False  # positive and negative parts are disjoint
    assert report["violation"]["subset"] == [0, 1]

    # Ramsey operations.
    parity = {
        "n": 5,
        "a": 2,
        "values": [
            [i, j, (i + j) % 2] for i in range(5) for j in range(5) if i != j
        ],
    }
    out = json.loads(fbl_lab.ramsey_witness(json.dumps(parity)))
    assert (out["i"], out["j"], out["k"]) == (0, 2, 4)
    out = json.loads(fbl_lab.ramsey_min_n(1, 10))
    assert out["min_n"] == 3
    mono = json.loads(
        fbl_lab.ramsey_mono(
            json.dumps(
                {
                    "n": 4,
                    "p": 2,
                    "q": 1,
                    "values": [
                        [[i, j], 0] for i in range(4) for j in range(i + 1, 4)
                    ],
                }
            ),
            3,
        )
    )
    assert mono["subset"] == [0, 1, 2]

    # Measures.
    mu = json.dumps(
        {
            "atoms": [
                {"point": ["1", "0"], "weight": "1/2"},
                {"point": ["0", "1"], "weight": "1/2"},
            ]
        }
    )
    assert fbl_lab.integrate("l1:2", "abs(gen(1,0))", mu) == "1/2"
    report = json.loads(fbl_lab.superlevel_bound("l1:2", "abs(gen(1,0))", mu))
    assert report["pass"] is True
    classes = json.loads(fbl_lab.horn_tarski("l1:2", ["abs(gen(1,0))"], mu))
    assert classes == {"3": ["abs(gen(1,0))"]}
    mu5 = json.dumps(
        {"atoms": [{"point": ["1/2", "1/2", "0", "0", "0"], "weight": "1"}]}
    )
    assert fbl_lab.null_generators(5, mu5) == [3, 4, 5]

    # Corpus determinism.
    assert fbl_lab.corpus(9, 4, 2) == fbl_lab.corpus(9, 4, 2)

    print("fbl_lab smoke test: OK")


if __name__ == "__main__":
    main()
