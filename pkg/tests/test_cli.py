import json

import pytest

from transtag.cli import main
from transtag.corpus import Corpus, write_mono
from transtag.subword import BpeModel
from transtag.tagging import TAG_TOKEN, read_tagged


def write_lines(path, lines):
    write_mono(Corpus.mono(lines), path)


@pytest.fixture()
def quadrant_dir(tmp_path):
    out = tmp_path / "quad"
    assert (
        main(
            [
                "--seed",
                "19",
                "gen-quadrants",
                "--outdir",
                str(out),
                "--src-orig",
                "500",
                "--trg-orig",
                "500",
                "--zero-shot",
                "20",
            ]
        )
        == 0
    )
    return out


class TestBleuCommand:
    def test_prints_score_and_signature(self, tmp_path, capsys):
        write_lines(tmp_path / "hyp.txt", ["the cat sat on a mat", "a dog ran far away"])
        write_lines(tmp_path / "ref.txt", ["the cat sat on a mat", "a dog ran far away"])
        rc = main(
            ["bleu", "--hypotheses", str(tmp_path / "hyp.txt"), "--references", str(tmp_path / "ref.txt")]
        )
        out = capsys.readouterr().out
        assert rc == 0
        assert "BLEU = 100.00" in out
        assert "BLEU+case.mixed+numrefs.1+smooth.exp+tok.intl+version.1.2.15" in out

    def test_mismatched_lengths_fail_with_one_line(self, tmp_path, capsys):
        write_lines(tmp_path / "hyp.txt", ["a"])
        write_lines(tmp_path / "ref.txt", ["a", "b"])
        rc = main(
            ["bleu", "--hypotheses", str(tmp_path / "hyp.txt"), "--references", str(tmp_path / "ref.txt")]
        )
        err = capsys.readouterr().err
        assert rc == 1
        assert err.startswith("error: ")
        assert len(err.strip().splitlines()) == 1


class TestMetricsCommand:
    def test_text_and_json(self, tmp_path, capsys):
        write_lines(tmp_path / "out.txt", ["the cat", "a hat"])
        write_lines(tmp_path / "src.txt", ["le chat", "un chapeau"])
        rc = main(
            ["metrics", "--input", str(tmp_path / "out.txt"), "--sources", str(tmp_path / "src.txt")]
        )
        assert rc == 0
        assert "lexical_variety\t" in capsys.readouterr().out
        rc = main(["metrics", "--input", str(tmp_path / "out.txt"), "--json"])
        assert rc == 0
        parsed = json.loads(capsys.readouterr().out)
        assert parsed["token_count"] == 4


class TestFilterAndDedup:
    def test_dedup_mono(self, tmp_path, capsys):
        write_lines(tmp_path / "in.txt", ["a", "a", "b"])
        rc = main(
            ["dedup", "--kind", "mono", "--input", str(tmp_path / "in.txt"), "--output", str(tmp_path / "out.txt")]
        )
        assert rc == 0
        assert (tmp_path / "out.txt").read_text() == "a\nb\n"
        assert "dropped.duplicate\t1" in capsys.readouterr().out

    def test_filter_mono_with_config_file(self, tmp_path, capsys):
        write_lines(tmp_path / "in.txt", ["one two three", "one two three four"])
        (tmp_path / "cfg.txt").write_text("max-tokens = 3\n")
        rc = main(
            [
                "--config",
                str(tmp_path / "cfg.txt"),
                "filter",
                "--kind",
                "mono",
                "--input",
                str(tmp_path / "in.txt"),
                "--output",
                str(tmp_path / "out.txt"),
            ]
        )
        assert rc == 0
        assert (tmp_path / "out.txt").read_text() == "one two three\n"

    def test_filter_backtranslated(self, tmp_path, capsys):
        (tmp_path / "bt.tsv").write_text("short source\tt\n" + "s " * 80 + "\tt\n")
        rc = main(
            [
                "filter",
                "--kind",
                "backtranslated",
                "--input",
                str(tmp_path / "bt.tsv"),
                "--output",
                str(tmp_path / "kept.tsv"),
            ]
        )
        assert rc == 0
        assert (tmp_path / "kept.tsv").read_text() == "short source\tt\n"

    def test_filter_language(self, tmp_path):
        write_lines(tmp_path / "src_sample.txt", ["abcd efgh ijkl"] * 5)
        write_lines(tmp_path / "trg_sample.txt", ["αβγδ εζηθ"] * 5)
        (tmp_path / "in.tsv").write_text("abc def\tαβγ δε\nsame\tsame\nαβγ\tabc\n")
        rc = main(
            [
                "filter",
                "--kind",
                "language",
                "--input",
                str(tmp_path / "in.tsv"),
                "--output",
                str(tmp_path / "out.tsv"),
                "--src-sample",
                str(tmp_path / "src_sample.txt"),
                "--trg-sample",
                str(tmp_path / "trg_sample.txt"),
            ]
        )
        assert rc == 0
        assert (tmp_path / "out.tsv").read_text() == "abc def\tαβγ δε\n"


class TestSubwordCommands:
    def test_learn_apply_reverse_roundtrip(self, tmp_path, capsys):
        write_lines(tmp_path / "corpus.txt", ["low lower lowest", "new newer newest"] * 3)
        model_path = tmp_path / "model.bpe"
        rc = main(
            [
                "learn-bpe",
                "--input",
                str(tmp_path / "corpus.txt"),
                "--vocab-size",
                "20",
                "--output",
                str(model_path),
            ]
        )
        assert rc == 0
        assert TAG_TOKEN in BpeModel.load(model_path).reserved

        write_lines(tmp_path / "text.txt", ["lower newest unseen"])
        rc = main(
            [
                "apply-bpe",
                "--model",
                str(model_path),
                "--input",
                str(tmp_path / "text.txt"),
                "--output",
                str(tmp_path / "seg.txt"),
            ]
        )
        assert rc == 0
        rc = main(
            [
                "apply-bpe",
                "--reverse",
                "--input",
                str(tmp_path / "seg.txt"),
                "--output",
                str(tmp_path / "back.txt"),
            ]
        )
        assert rc == 0
        assert (tmp_path / "back.txt").read_text() == "lower newest unseen\n"

    def test_filter_bitext_uses_model(self, tmp_path):
        write_lines(tmp_path / "corpus.txt", ["aa bb cc dd"] * 4)
        model_path = tmp_path / "model.bpe"
        main(["learn-bpe", "--input", str(tmp_path / "corpus.txt"), "--vocab-size", "12", "--output", str(model_path)])
        (tmp_path / "bitext.tsv").write_text("aa bb\tcc dd\naa aa aa aa aa aa\tbb\n")
        rc = main(
            [
                "filter",
                "--kind",
                "bitext",
                "--input",
                str(tmp_path / "bitext.tsv"),
                "--output",
                str(tmp_path / "kept.tsv"),
                "--bpe",
                str(model_path),
                "--max-ratio",
                "2.0",
            ]
        )
        assert rc == 0
        assert (tmp_path / "kept.tsv").read_text() == "aa bb\tcc dd\n"


class TestSynthdataCommands:
    def _lexicon(self, tmp_path, name, pairs):
        path = tmp_path / name
        path.write_text("".join(f"{a}\t{b}\n" for a, b in pairs))
        return path

    def test_build_ft_with_toy_translator(self, tmp_path):
        write_lines(tmp_path / "src.txt", ["hello world", "good day"])
        write_lines(tmp_path / "trg.txt", ["bonjour monde", "bonne journee"])
        lex = self._lexicon(tmp_path, "lex.tsv", [("hello", "bonjour"), ("world", "monde")])
        rc = main(
            [
                "build-ft",
                "--src-mono",
                str(tmp_path / "src.txt"),
                "--trg-mono",
                str(tmp_path / "trg.txt"),
                "--mt-lexicon",
                str(lex),
                "--output",
                str(tmp_path / "ft.tsv"),
            ]
        )
        assert rc == 0
        lines = (tmp_path / "ft.tsv").read_text().splitlines()
        assert len(lines) == 4
        assert lines[0] == "original\tbonjour monde"
        assert lines[1] == "translated\tbonjour monde"

    def test_build_rtt(self, tmp_path):
        write_lines(tmp_path / "trg.txt", ["alpha beta", "gamma delta"])
        t2s = self._lexicon(tmp_path, "t2s.tsv", [("alpha", "A"), ("gamma", "G")])
        s2t = self._lexicon(tmp_path, "s2t.tsv", [("A", "alpha"), ("G", "gamma")])
        rc = main(
            [
                "build-rtt",
                "--trg-mono",
                str(tmp_path / "trg.txt"),
                "--t2s-lexicon",
                str(t2s),
                "--s2t-lexicon",
                str(s2t),
                "--output",
                str(tmp_path / "rtt.tsv"),
            ]
        )
        assert rc == 0
        assert len((tmp_path / "rtt.tsv").read_text().splitlines()) == 4


class TestTaggingCommands:
    def test_length_threshold(self, tmp_path, capsys):
        write_lines(tmp_path / "x.txt", ["a b c d e", "a b c d e"])
        write_lines(tmp_path / "y.txt", ["a b c d", "a b c d"])
        rc = main(["length-threshold", "--src-mono", str(tmp_path / "x.txt"), "--trg-mono", str(tmp_path / "y.txt")])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "1.250000"

    def test_tag_upsample_merge(self, tmp_path, capsys):
        (tmp_path / "bitext.tsv").write_text("a b c\tx y\nd\te f g\nh i\tj k\n")
        rc = main(
            [
                "tag",
                "--input",
                str(tmp_path / "bitext.tsv"),
                "--policy",
                "length-ratio:1.0",
                "--output",
                str(tmp_path / "tagged.tsv"),
            ]
        )
        assert rc == 0
        tagged = read_tagged(tmp_path / "tagged.tsv")
        assert [p.tagged for p in tagged.items] == [True, False, False]

        rc = main(
            ["upsample", "--input", str(tmp_path / "tagged.tsv"), "--output", str(tmp_path / "balanced.tsv")]
        )
        assert rc == 0
        balanced = read_tagged(tmp_path / "balanced.tsv")
        assert sum(p.tagged for p in balanced.items) == 2

        (tmp_path / "bt.tsv").write_text("p q\tr s\n")
        rc = main(
            [
                "merge-bt",
                "--bitext",
                str(tmp_path / "tagged.tsv"),
                "--bt",
                str(tmp_path / "bt.tsv"),
                "--bt-policy",
                "all",
                "--output",
                str(tmp_path / "merged.tsv"),
                "--inline",
            ]
        )
        assert rc == 0
        merged = read_tagged(tmp_path / "merged.tsv")
        assert len(merged.items) == 4
        assert merged.items[-1].tagged
        raw = (tmp_path / "merged.tsv").read_text()
        assert f"{TAG_TOKEN} p q\tr s" in raw


class TestClassifierCommands:
    def test_train_classify_eval(self, tmp_path, capsys):
        orig = [f"orig{i} orig{(i+1) % 9} orig{(i+2) % 9}" for i in range(9)]
        tran = [f"tran{i} tran{(i+1) % 9} tran{(i+2) % 9}" for i in range(9)]
        labeled = [f"original\t{t}" for t in orig] + [f"translated\t{t}" for t in tran]
        (tmp_path / "train.tsv").write_text("\n".join(labeled) + "\n")
        (tmp_path / "dev.tsv").write_text("\n".join(labeled) + "\n")
        write_lines(tmp_path / "corpus.txt", orig + tran)
        main(["learn-bpe", "--input", str(tmp_path / "corpus.txt"), "--vocab-size", "40", "--output", str(tmp_path / "m.bpe")])
        rc = main(
            [
                "train-classifier",
                "--train",
                str(tmp_path / "train.tsv"),
                "--dev",
                str(tmp_path / "dev.tsv"),
                "--bpe",
                str(tmp_path / "m.bpe"),
                "--output",
                str(tmp_path / "clf.ckpt"),
                "--embed-dim",
                "8",
                "--filters",
                "4",
                "--widths",
                "2,3",
                "--epochs",
                "30",
                "--batch-size",
                "8",
                "--eval-every",
                "15",
            ]
        )
        assert rc == 0
        assert "best dev F1" in capsys.readouterr().out

        write_lines(tmp_path / "lines.txt", ["orig1 orig2", "tran3 tran4"])
        rc = main(
            [
                "classify",
                "--model",
                str(tmp_path / "clf.ckpt"),
                "--bpe",
                str(tmp_path / "m.bpe"),
                "--input",
                str(tmp_path / "lines.txt"),
                "--output",
                str(tmp_path / "scored.txt"),
            ]
        )
        assert rc == 0
        rows = (tmp_path / "scored.txt").read_text().splitlines()
        assert len(rows) == 2
        for row in rows:
            prob, label = row.split("\t")
            assert 0.0 < float(prob) < 1.0
            assert label in ("original", "translated")

        rc = main(
            [
                "eval-classifier",
                "--model",
                str(tmp_path / "clf.ckpt"),
                "--bpe",
                str(tmp_path / "m.bpe"),
                "--test",
                str(tmp_path / "dev.tsv"),
            ]
        )
        assert rc == 0
        assert "f1\t" in capsys.readouterr().out


class TestToyPipeline:
    def test_gen_train_decode_grid(self, quadrant_dir, tmp_path, capsys):
        for name in ("train.tsv", "src_orig.tsv", "trg_orig.tsv", "zero_shot.src", "zero_shot.lit", "zero_shot.nat", "spec.cfg"):
            assert (quadrant_dir / name).exists()

        dev_dir = tmp_path / "dev"
        main(
            [
                "--seed",
                "1901",
                "gen-quadrants",
                "--outdir",
                str(dev_dir),
                "--src-orig",
                "15",
                "--trg-orig",
                "15",
                "--zero-shot",
                "1",
            ]
        )
        model_path = tmp_path / "toy.ckpt"
        rc = main(
            [
                "--seed",
                "19",
                "--manifest",
                str(tmp_path / "manifest.json"),
                "toy-train",
                "--train",
                str(quadrant_dir / "train.tsv"),
                "--dev",
                str(dev_dir / "train.tsv"),
                "--output",
                str(model_path),
                "--embed-dim",
                "16",
                "--hidden-dim",
                "64",
                "--epochs",
                "8",
                "--eval-every",
                "100000",
            ]
        )
        assert rc == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["command"] == "toy-train"
        assert str(quadrant_dir / "train.tsv") in manifest["input_hashes"]
        assert manifest["stage_stats"]["toy-train"]["steps"] > 0

        rc = main(
            [
                "toy-decode",
                "--model",
                str(model_path),
                "--input",
                str(quadrant_dir / "zero_shot.src"),
                "--output",
                str(tmp_path / "decoded.nat"),
                "--natural",
            ]
        )
        assert rc == 0
        decoded = (tmp_path / "decoded.nat").read_text().splitlines()
        assert len(decoded) == 20
        assert all(TAG_TOKEN not in line.split() for line in decoded)

        test_dir = tmp_path / "gridtest"
        main(
            [
                "--seed",
                "1903",
                "gen-quadrants",
                "--outdir",
                str(test_dir),
                "--src-orig",
                "20",
                "--trg-orig",
                "20",
                "--zero-shot",
                "1",
            ]
        )
        # grid test set: both halves with origin labels, via the plain TSVs
        grid_tsv = tmp_path / "grid.tsv"
        grid_tsv.write_text(
            (test_dir / "src_orig.tsv").read_text() + (test_dir / "trg_orig.tsv").read_text()
        )
        rc = main(
            [
                "grid-eval",
                "--model",
                str(model_path),
                "--test",
                str(grid_tsv),
                "--json",
                str(tmp_path / "grid.json"),
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "combined matched BLEU" in out
        parsed = json.loads((tmp_path / "grid.json").read_text())
        assert len(parsed["cells"]) == 4


class TestErrorHandling:
    def test_missing_file_single_line_error(self, tmp_path, capsys):
        rc = main(["dedup", "--kind", "mono", "--input", str(tmp_path / "absent.txt"), "--output", str(tmp_path / "o")])
        assert rc == 1
        err = capsys.readouterr().err
        assert err.startswith("error: ") and len(err.strip().splitlines()) == 1

    def test_unknown_policy(self, tmp_path, capsys):
        (tmp_path / "in.tsv").write_text("a\tb\n")
        rc = main(
            ["tag", "--input", str(tmp_path / "in.tsv"), "--policy", "bogus", "--output", str(tmp_path / "o.tsv")]
        )
        assert rc == 1
        assert "unknown policy" in capsys.readouterr().err

    def test_bad_config_key(self, tmp_path, capsys):
        (tmp_path / "cfg.txt").write_text("not-an-option = 3\n")
        (tmp_path / "in.txt").write_text("a\n")
        rc = main(
            [
                "--config",
                str(tmp_path / "cfg.txt"),
                "dedup",
                "--kind",
                "mono",
                "--input",
                str(tmp_path / "in.txt"),
                "--output",
                str(tmp_path / "o.txt"),
            ]
        )
        assert rc == 1
        assert "unknown option" in capsys.readouterr().err
