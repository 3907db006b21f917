"""Smoke test for the pymaboost extension module.

Build and install first, e.g.

    cd crates/py && maturin build --release -o dist && pip install dist/*.whl

then run ``python python/smoke_test.py``.
"""

import math
import os
import tempfile

import pymaboost as mb


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for x, y in zip(a, b)) and len(a) == len(b)


def check_geometry():
    ent = mb.Geometry("entropy")
    assert ent.dual_norm_sq_bound == 1.0
    assert abs(ent.divergence([0.5, 0.5], [0.25, 0.75]) - (0.5 * math.log(2) + 0.5 * math.log(2 / 3))) < 1e-12
    assert close(ent.inverse_mirror_map(ent.mirror_map([0.2, 0.8])), [0.2, 0.8])
    quad = mb.Geometry("quadratic", 4)
    assert quad.dual_norm_sq_bound == 4.0
    assert quad.divergence([1.0, 0.0], [0.0, 0.0]) == 0.5
    try:
        ent.mirror_map([0.0, 1.0])
    except ValueError:
        pass
    else:
        raise AssertionError("mirror map at zero should fail")


def check_projections():
    ent = mb.Geometry("entropy")
    quad = mb.Geometry("quadratic", 2)
    assert close(mb.project(ent, "simplex", [2.0, 2.0]), [0.5, 0.5])
    assert close(mb.project(ent, "hypercube", [0.5, 3.0]), [0.5, 1.0])
    assert close(mb.project(quad, "simplex", [0.8, 0.4]), [0.7, 0.3])
    capped = mb.project(ent, "capped", [1.0, 1.0, 8.0], cap=0.4)
    assert max(capped) <= 0.4 and abs(sum(capped) - 1.0) < 1e-12
    assert mb.project_orthant_l1([1.0, 0.2, -1.0], 0.5) == [0.5, 0.0, 0.0]


def check_boosting():
    blobs = mb.Dataset.blobs(0, 100, 0.5)
    res = mb.train(blobs, "maboost-active", geometry="entropy", rounds=50)
    assert res.rounds == 1 and res.final_error == 0.0 and res.stop == "target_reached"

    noisy = mb.Dataset.noisy(0, 200, 0.1)
    res = mb.train(noisy, "maboost-lazy", geometry="quadratic", rounds=100)
    total = 0.0
    for rec in res.trace:
        total += rec["gamma"] ** 2
        assert rec["train_error"] <= 1.0 / (1.0 + total) + 1e-9
    assert abs(sum(res.weights) - 1.0) < 1e-10

    res = mb.train(noisy, "sparse", alpha_mode="half", rounds=50)
    assert any(rec["nnz"] < noisy.n for rec in res.trace)
    res = mb.train(noisy, "mada", rounds=30)
    assert all(rec["y_norm_next"] >= noisy.n * rec["train_error"] - 1e-9 for rec in res.trace)
    res = mb.train(noisy, "smooth", k=10.0, rounds=300)
    assert max(res.weights) <= 10.0 / noisy.n

    mixed = mb.Dataset.combined(0, 150, 50, 0.3, 0.3)
    res = mb.train(mixed, "combined", k=4.0, target_eps=0.02, rounds=500)
    last = res.trace[-1]
    assert res.stop == "target_reached" and last["eps_B"] <= 0.25

    margin = mb.train(mb.Dataset.blobs(1, 100, 0.4), "maxmargin", rounds=200)
    assert margin.rounds == 200 and margin.ensemble.margin(mb.Dataset.blobs(1, 100, 0.4)) > 0

    ens = res.ensemble
    preds = [ens.predict(row) for row in mixed.rows]
    wrong = sum(p != y for p, y in zip(preds, mixed.labels)) / mixed.n
    assert abs(wrong - ens.error(mixed)) < 1e-15

    feature, threshold, polarity, edge = mb.train_stump(blobs, [1.0 / blobs.n] * blobs.n)
    assert feature == 0 and polarity == 1 and abs(edge - 1.0) < 1e-12

    flat = mb.Dataset([[1.0], [1.0]], [1.0, -1.0])
    try:
        mb.train(flat, "maboost-active")
    except RuntimeError:
        pass
    else:
        raise AssertionError("expected no weak learnability")
    try:
        mb.train(noisy, "sparse", geometry="entropy")
    except ValueError:
        pass
    else:
        raise AssertionError("sparse needs the quadratic geometry")


def check_io():
    ds = mb.Dataset.noisy(3, 20, 0.1)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "noisy.csv")
        ds.save_csv(path)
        back = mb.Dataset.load_csv(path)
        assert back.rows == ds.rows and back.labels == ds.labels
        svm = os.path.join(tmp, "tiny.svm")
        with open(svm, "w") as f:
            f.write("+1 1:0.5 3:1.0\n-1\n")
        tiny = mb.Dataset.load_libsvm(svm)
        assert tiny.rows == [[0.5, 0.0, 1.0], [0.0, 0.0, 0.0]]


if __name__ == "__main__":
    check_geometry()
    check_projections()
    check_boosting()
    check_io()
    print("pymaboost smoke test: ok")
