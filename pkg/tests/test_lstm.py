import math

import numpy as np
import pytest

from emoforge.errors import DataError, ParameterError
from emoforge.lstm import (
    LstmClassifier,
    LstmParams,
    LstmState,
    lstm_forward,
    lstm_step,
    sequence_gradients,
)


def zero_params(input_size=2, hidden=3, classes=2, dropout=0.0):
    return LstmParams(
        w={g: np.zeros((hidden, input_size)) for g in "fioc"},
        u={g: np.zeros((hidden, hidden)) for g in "fioc"},
        b={g: np.zeros(hidden) for g in "fioc"},
        w_out=np.zeros((classes, hidden)),
        b_out=np.zeros(classes),
        dropout_rate=dropout,
    )


def cumsum_task(seed, n=100, tmax=8):
    rng = np.random.default_rng(seed)
    seqs, labels = [], []
    for _ in range(n):
        steps = int(rng.integers(4, tmax + 1))
        xs = rng.uniform(-1, 1, size=(steps, 1))
        seqs.append(xs)
        labels.append(int(xs.sum() > 0))
    return seqs, np.asarray(labels)


# --- single step


def test_zero_params_step():
    params = zero_params()
    state = LstmState(h=np.zeros(3), c=np.array([1.0, -2.0, 0.5]))
    out = lstm_step(params, state, np.array([3.0, -1.0]))
    # all gates sit at sigmoid(0) = 0.5, so the cell halves and h = 0.5*tanh(c)
    assert np.allclose(out.c, 0.5 * state.c)
    assert np.allclose(out.h, 0.5 * np.tanh(out.c))
    from_rest = lstm_step(params, LstmState.zeros(3), np.array([3.0, -1.0]))
    assert np.all(from_rest.h == 0.0) and np.all(from_rest.c == 0.0)


def test_two_step_matches_scalar_oracle():
    scal = dict(wf=0.7, wi=-0.3, wo=0.5, wc=1.1, uf=0.2, ui=0.9, uo=-0.6, uc=0.4,
                bf=0.1, bi=-0.2, bo=0.3, bc=0.0)
    xs = [0.8, -0.45]

    def sig(z):
        return 1.0 / (1.0 + math.exp(-z))

    h = c = 0.0
    for x in xs:
        f = sig(scal["wf"] * x + scal["uf"] * h + scal["bf"])
        i = sig(scal["wi"] * x + scal["ui"] * h + scal["bi"])
        o = sig(scal["wo"] * x + scal["uo"] * h + scal["bo"])
        g = math.tanh(scal["wc"] * x + scal["uc"] * h + scal["bc"])
        c = f * c + i * g
        h = o * math.tanh(c)

    params = LstmParams(
        w={g: np.array([[scal[f"w{g}"]]]) for g in "fioc"},
        u={g: np.array([[scal[f"u{g}"]]]) for g in "fioc"},
        b={g: np.array([scal[f"b{g}"]]) for g in "fioc"},
        w_out=np.zeros((2, 1)),
        b_out=np.zeros(2),
    )
    state = LstmState.zeros(1)
    for x in xs:
        state = lstm_step(params, state, np.array([x]))
    assert abs(state.h[0] - h) < 1e-12
    assert abs(state.c[0] - c) < 1e-12


def test_saturating_inputs_pin_gates():
    rng = np.random.default_rng(0)
    params = LstmParams.init(2, 4, 2, rng)
    big = np.array([1e4, -1e4])
    hidden = params.hidden_size
    z = params._w_stack @ big + params._b_stack
    gates = 1.0 / (1.0 + np.exp(-np.clip(z[: 3 * hidden], -700, 700)))
    assert np.all((gates < 1e-6) | (gates > 1 - 1e-6))


def test_step_shape_errors():
    params = zero_params()
    with pytest.raises(ParameterError):
        lstm_step(params, LstmState.zeros(3), np.zeros(5))
    with pytest.raises(ParameterError):
        lstm_step(params, LstmState.zeros(2), np.zeros(2))


def test_hidden_state_bounded():
    rng = np.random.default_rng(1)
    params = LstmParams.init(3, 5, 2, rng)
    params.set_vector(rng.uniform(-2, 2, size=params.to_vector().size))
    state = LstmState.zeros(5)
    for _ in range(20):
        state = lstm_step(params, state, rng.normal(size=3))
        assert np.all(np.abs(state.h) < 1.0)
        assert np.isfinite(state.c).all()


# --- forward pass


def test_forward_probabilities_sum_to_one():
    rng = np.random.default_rng(2)
    params = LstmParams.init(4, 6, 3, rng)
    params.set_vector(rng.uniform(-1, 1, size=params.to_vector().size))
    for _ in range(10):
        seq = rng.normal(size=(int(rng.integers(1, 7)), 4))
        probs = lstm_forward(params, seq)
        assert probs.shape == (3,)
        assert abs(probs.sum() - 1.0) < 1e-9


def test_forward_dropout_zero_matches_inference():
    rng = np.random.default_rng(3)
    params = LstmParams.init(2, 4, 2, rng, dropout_rate=0.0)
    seq = rng.normal(size=(5, 2))
    train = lstm_forward(params, seq, training=True, rng=np.random.default_rng(0))
    infer = lstm_forward(params, seq)
    assert np.array_equal(train, infer)


def test_forward_length_one_equals_step_plus_projection():
    rng = np.random.default_rng(4)
    params = LstmParams.init(3, 4, 2, rng)
    params.set_vector(rng.uniform(-1, 1, size=params.to_vector().size))
    x = rng.normal(size=3)
    state = lstm_step(params, LstmState.zeros(4), x)
    logits = params.w_out @ state.h + params.b_out
    expected = np.exp(logits - logits.max())
    expected /= expected.sum()
    assert np.allclose(lstm_forward(params, x[np.newaxis, :]), expected, atol=1e-12)


def test_forward_empty_sequence_errors():
    params = zero_params()
    with pytest.raises(DataError):
        lstm_forward(params, np.zeros((0, 2)))


# --- gradients


@pytest.mark.parametrize("seed", range(20))
def test_bptt_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 7))
    hidden = int(rng.integers(2, 9))
    steps = int(rng.integers(1, 6))
    classes = int(rng.integers(2, 5))
    params = LstmParams.init(d, hidden, classes, rng)
    vec = rng.uniform(-0.7, 0.7, size=params.to_vector().size)
    params.set_vector(vec)
    xs = rng.normal(size=(steps, d))
    label = int(rng.integers(0, classes))

    _, grads = sequence_gradients(params, xs, label)
    analytic = grads.to_vector()
    eps = 1e-5
    fd = np.zeros_like(vec)
    for i in range(vec.size):
        up = vec.copy()
        up[i] += eps
        params.set_vector(up)
        loss_up = -np.log(lstm_forward(params, xs)[label])
        down = vec.copy()
        down[i] -= eps
        params.set_vector(down)
        loss_down = -np.log(lstm_forward(params, xs)[label])
        fd[i] = (loss_up - loss_down) / (2 * eps)
    rel = np.abs(analytic - fd) / np.maximum(np.abs(analytic) + np.abs(fd), 1e-8)
    assert rel.max() < 1e-4


# --- training


def test_cumsum_task_quick():
    seqs, labels = cumsum_task(101)
    model = LstmClassifier(
        hidden_size=6, epochs=150, learning_rate=0.3, batch_size=16,
        dropout_rate=0.0, patience=150, seed=1,
    ).fit(seqs, labels)
    assert (model.predict(seqs) == labels).mean() >= 0.9


def test_training_deterministic():
    seqs, labels = cumsum_task(7, n=40)
    a = LstmClassifier(hidden_size=4, epochs=15, seed=5).fit(seqs, labels)
    b = LstmClassifier(hidden_size=4, epochs=15, seed=5).fit(seqs, labels)
    assert np.array_equal(a.params_.to_vector(), b.params_.to_vector())


def test_early_stopping_and_best_checkpoint():
    seqs, labels = cumsum_task(13, n=60)
    model = LstmClassifier(
        hidden_size=4, epochs=400, learning_rate=0.3, patience=5, seed=2,
        dropout_rate=0.0,
    ).fit(seqs, labels)
    history = model.val_accuracy_history_
    assert len(history) < 400  # patience fired
    assert model.best_val_accuracy_ == max(history)


def test_dropout_training_still_learns_and_is_deterministic():
    seqs, labels = cumsum_task(23, n=50)
    a = LstmClassifier(hidden_size=4, epochs=20, dropout_rate=0.3, seed=9).fit(seqs, labels)
    b = LstmClassifier(hidden_size=4, epochs=20, dropout_rate=0.3, seed=9).fit(seqs, labels)
    assert np.array_equal(a.params_.to_vector(), b.params_.to_vector())
    assert np.isfinite(a.loss_history_).all()


def test_matrix_input_is_one_step_sequences():
    rng = np.random.default_rng(31)
    X = rng.normal(size=(30, 5))
    y = rng.integers(0, 2, size=30)
    model = LstmClassifier(hidden_size=4, epochs=10, seed=0).fit(X, y)
    proba = model.predict_proba(X)
    assert proba.shape == (30, 2)
    assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)


def test_label_permutation_permutes_columns():
    rng = np.random.default_rng(37)
    seqs = [rng.normal(size=(int(rng.integers(2, 6)), 2)) for _ in range(40)]
    y = rng.integers(0, 3, size=40)
    perm = np.array([2, 0, 1])
    a = LstmClassifier(hidden_size=4, epochs=12, dropout_rate=0.0, seed=3).fit(seqs, y)
    b = LstmClassifier(hidden_size=4, epochs=12, dropout_rate=0.0, seed=3).fit(seqs, perm[y])
    assert np.allclose(b.predict_proba(seqs)[:, perm], a.predict_proba(seqs), atol=1e-9)
