import numpy as np
import pytest

from transtag import neural
from transtag.classifier import (
    ClassifierConfig,
    ClassifierModel,
    EvalStats,
    Label,
    LabeledSentence,
    batch_loss_and_grads,
    build_classifier,
    evaluate,
    load_classifier,
    predict,
    save_classifier,
    train_classifier,
)
from transtag.harness import StyleBenchmarkSpec, generate_style_dataset
from transtag.subword import learn_bpe

SMALL = ClassifierConfig(embed_dim=16, conv_widths=(3, 4, 5), filters=8, epochs=4, eval_every=50, seed=1)


def _bpe_for(lines, extra_merges=60, reserved=()):
    symbols = set(reserved)
    for line in lines:
        for word in line.split():
            symbols.update(word[:-1])
            symbols.add(word[-1] + "</w>")
    return learn_bpe(lines, target_vocab_size=len(symbols) + extra_merges, reserved=reserved)


@pytest.fixture(scope="module")
def separable():
    spec = StyleBenchmarkSpec(
        vocab_size=30, shared_fraction=0.0, train_per_class=200, dev_per_class=60, test_per_class=60, seed=3
    )
    return generate_style_dataset(spec)


@pytest.fixture(scope="module")
def separable_bpe(separable):
    train, _, _ = separable
    return _bpe_for([s.text for s in train])


@pytest.fixture(scope="module")
def trained_separable(separable, separable_bpe):
    train, dev, _ = separable
    return train_classifier(train, dev, separable_bpe, SMALL)


class TestPredict:
    def test_zero_weights_give_half(self, separable_bpe):
        model = build_classifier(separable_bpe, SMALL)
        for arr in model.params.arrays.values():
            arr[...] = 0.0
        assert predict(model, "orig1 orig2") == pytest.approx(0.5)
        assert predict(model, "anything at all") == pytest.approx(0.5)

    def test_deterministic_bit_for_bit(self, trained_separable):
        model, _ = trained_separable
        text = "orig1 orig2 orig3"
        assert predict(model, text) == predict(model, text)

    def test_trailing_whitespace_invariant(self, trained_separable):
        model, _ = trained_separable
        assert predict(model, "orig1 orig2") == predict(model, "orig1 orig2   \t")

    def test_empty_text_rejected(self, trained_separable):
        model, _ = trained_separable
        with pytest.raises(ValueError):
            predict(model, "   ")

    def test_probability_in_open_interval(self, trained_separable, separable):
        model, _ = trained_separable
        _, _, test = separable
        for sent in test[:50]:
            p = predict(model, sent.text)
            assert 0.0 < p < 1.0


class TestTraining:
    def test_separable_styles_reach_perfect_dev_f1(self, trained_separable):
        _, log = trained_separable
        assert log.best_f1 == 1.0

    def test_overlapping_styles_reach_good_f1(self, separable_bpe):
        spec = StyleBenchmarkSpec(
            vocab_size=30,
            shared_fraction=0.5,
            train_per_class=300,
            dev_per_class=80,
            test_per_class=80,
            seed=4,
        )
        train, dev, test = generate_style_dataset(spec)
        bpe = _bpe_for([s.text for s in train])
        model, log = train_classifier(train, dev, bpe, SMALL)
        assert log.best_f1 >= 0.9
        assert evaluate(model, test).f1 >= 0.9

    def test_single_class_rejected(self, separable, separable_bpe):
        train, dev, _ = separable
        only_orig = [s for s in train if s.label is Label.ORIGINAL]
        with pytest.raises(ValueError, match="both classes"):
            train_classifier(only_orig, dev, separable_bpe, SMALL)
        with pytest.raises(ValueError, match="both classes"):
            train_classifier(train, only_orig[:10], separable_bpe, SMALL)

    def test_checkpoint_selection_is_argmax_of_log(self, trained_separable):
        _, log = trained_separable
        best = max(f1 for _, f1 in log.evals)
        assert log.best_f1 == best
        # earliest tie wins
        first_best_step = next(step for step, f1 in log.evals if f1 == best)
        assert log.best_step == first_best_step

    def test_loss_log_covers_all_steps(self, trained_separable, separable):
        _, log = trained_separable
        train, _, _ = separable
        expected = SMALL.epochs * (len(train) // SMALL.batch_size)
        assert len(log.losses) == expected


class TestEvaluate:
    def test_perfect_predictor(self, trained_separable, separable):
        model, _ = trained_separable
        _, _, test = separable
        stats = evaluate(model, test)
        assert stats.precision == stats.recall == stats.f1 == 1.0

    def test_threshold_zero_labels_everything_original(self, trained_separable, separable):
        model, _ = trained_separable
        _, _, test = separable
        stats = evaluate(model, test, threshold=0.0)
        assert stats.recall == 1.0
        assert stats.precision == pytest.approx(0.5)
        assert stats.f1 == pytest.approx(2 / 3)
        assert stats.tn == stats.fn == 0

    def test_threshold_one_labels_everything_translated(self, trained_separable, separable):
        model, _ = trained_separable
        _, _, test = separable
        stats = evaluate(model, test, threshold=1.0)
        assert stats.recall == 0.0
        assert stats.tp == stats.fp == 0

    def test_matches_brute_force_recount(self, trained_separable, separable):
        model, _ = trained_separable
        _, _, test = separable
        stats = evaluate(model, test, threshold=0.7)
        tp = fp = fn = tn = 0
        for sent in test:
            pred = predict(model, sent.text) > 0.7
            true = sent.label is Label.ORIGINAL
            tp += pred and true
            fp += pred and not true
            fn += (not pred) and true
            tn += (not pred) and (not true)
        assert (stats.tp, stats.fp, stats.fn, stats.tn) == (tp, fp, fn, tn)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        assert stats.f1 == pytest.approx(f1, abs=0.02)

    def test_from_counts_zero_denominator(self):
        stats = EvalStats.from_counts(0, 0, 0, 10)
        assert stats.precision == stats.recall == stats.f1 == 0.0


class TestGradients:
    def test_downsized_model_gradient_check(self, separable_bpe):
        config = ClassifierConfig(embed_dim=6, conv_widths=(2, 3), filters=4, seed=5)
        model = build_classifier(separable_bpe, config)
        model64 = ClassifierModel(
            separable_bpe, config, model.token_ids, model.params.astype(np.float64)
        )
        batch = [
            LabeledSentence("orig1 orig2 orig3", Label.ORIGINAL),
            LabeledSentence("tran4 tran5", Label.TRANSLATED),
            LabeledSentence("orig7 tran2 orig1 tran9", Label.ORIGINAL),
            LabeledSentence("tran0", Label.TRANSLATED),
        ]
        err = neural.gradient_check(
            lambda ps: batch_loss_and_grads(
                ClassifierModel(separable_bpe, config, model.token_ids, ps), batch
            ),
            model64.params,
            min_coords=200,
        )
        assert err <= 1e-3


class TestCheckpoint:
    def test_roundtrip_preserves_predictions(self, trained_separable, separable_bpe, tmp_path):
        model, _ = trained_separable
        path = tmp_path / "clf.ckpt"
        save_classifier(model, path)
        loaded = load_classifier(path, separable_bpe)
        for text in ["orig1 orig2", "tran3 tran4 tran5"]:
            assert predict(loaded, text) == predict(model, text)

    def test_mismatched_bpe_rejected(self, trained_separable, tmp_path):
        model, _ = trained_separable
        path = tmp_path / "clf.ckpt"
        save_classifier(model, path)
        other_bpe = learn_bpe(["completely different corpus here"], target_vocab_size=30)
        with pytest.raises(ValueError, match="mismatch"):
            load_classifier(path, other_bpe)
