import json

import numpy as np
import pytest
from conftest import REFERENCE_LIBRARY_IDS

from fuzzyfp import (
    ActivationDataset,
    DataFormatError,
    DimensionError,
    EmbeddingRecord,
    FeatureSpace,
    FuzzifyParams,
    TokenDataset,
    TokenRecord,
    UnsupportedVersionError,
    build_library,
    dailydialog_token_records,
    load_dailydialog,
    load_embeddings,
    load_library,
    load_token_dataset,
    save_embeddings,
    save_library,
    save_token_dataset,
    tokenize,
)
from fuzzyfp.storage import DAILYDIALOG_LABELS


def embedding_line(id_, split, label, vector):
    return json.dumps({"id": id_, "split": split, "label": label, "vector": vector})


class TestEmbeddingFiles:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        records = tuple(
            EmbeddingRecord(id=f"r{i}", split="train", label="lbl", vector=rng.normal(size=5))
            for i in range(4)
        )
        dataset = ActivationDataset(records=records, dimension=5)
        path = tmp_path / "data.jsonl"
        save_embeddings(dataset, path)
        loaded = load_embeddings(path)
        assert loaded.dimension == 5
        assert len(loaded) == 4
        for orig, back in zip(dataset.records, loaded.records):
            assert back.id == orig.id and back.split == orig.split and back.label == orig.label
            assert back.vector.tolist() == orig.vector.tolist()

    def test_three_valid_records(self, tmp_path):
        path = tmp_path / "ok.jsonl"
        path.write_text(
            "\n".join(
                embedding_line(f"r{i}", "test", "x", [float(i), 1.0, 2.0]) for i in range(3)
            )
            + "\n"
        )
        assert len(load_embeddings(path)) == 3

    def test_parse_error_carries_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(embedding_line("a", "train", "x", [1.0]) + "\nnot json\n")
        with pytest.raises(DataFormatError, match=r":2"):
            load_embeddings(path)

    def test_dimension_error_names_record(self, tmp_path):
        path = tmp_path / "dim.jsonl"
        lines = [embedding_line(f"r{i}", "train", "x", [1.0] * 768) for i in range(2)]
        lines.append(embedding_line("shorty", "train", "x", [1.0] * 767))
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(DimensionError, match="shorty"):
            load_embeddings(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with pytest.raises(DataFormatError, match="empty"):
            load_embeddings(path)

    def test_blank_line_rejected(self, tmp_path):
        path = tmp_path / "blank.jsonl"
        path.write_text(embedding_line("a", "train", "x", [1.0]) + "\n\n")
        with pytest.raises(DataFormatError, match=r":2"):
            load_embeddings(path)

    def test_unknown_split(self, tmp_path):
        path = tmp_path / "split.jsonl"
        path.write_text(embedding_line("a", "dev", "x", [1.0]) + "\n")
        with pytest.raises(DataFormatError, match="split"):
            load_embeddings(path)

    def test_non_finite_vector(self, tmp_path):
        path = tmp_path / "nan.jsonl"
        path.write_text('{"id": "a", "split": "train", "label": "x", "vector": [1.0, NaN]}\n')
        with pytest.raises(DataFormatError, match="finite"):
            load_embeddings(path)

    def test_missing_field(self, tmp_path):
        path = tmp_path / "missing.jsonl"
        path.write_text('{"id": "a", "split": "train", "vector": [1.0]}\n')
        with pytest.raises(DataFormatError, match="label"):
            load_embeddings(path)


class TestTokenFiles:
    def test_round_trip(self, tmp_path):
        dataset = TokenDataset(records=(
            TokenRecord(id="u1", split="train", label="joy", text="what a day"),
            TokenRecord(id="u2", split="test", label="calm", text="ok."),
        ))
        path = tmp_path / "texts.jsonl"
        save_token_dataset(dataset, path)
        assert load_token_dataset(path) == dataset

    def test_text_must_be_string(self, tmp_path):
        path = tmp_path / "badtext.jsonl"
        path.write_text('{"id": "a", "split": "train", "label": "x", "text": 7}\n')
        with pytest.raises(DataFormatError, match="text"):
            load_token_dataset(path)


class TestTokenize:
    def test_lowercase_and_split(self):
        assert tokenize("Hello, WORLD!!") == ["hello", "world"]

    def test_alnum_runs(self):
        assert tokenize("it's a 2-par°t thing") == ["it", "s", "a", "2", "par", "t", "thing"]

    def test_empty(self):
        assert tokenize("...!?") == []


DIALOGUES = [
    "Say , Jim , how about going for a few beers after dinner ? __eou__ You know that is tempting but is really not good for our fitness . __eou__\n",
    "Can you do push-ups ? __eou__ Of course I can . It's a piece of cake ! __eou__ Really ? I think that's impossible ! __eou__\n",
]
LABELS = ["0 4\n", "0 6 1\n"]


def write_dailydialog(root, nested=True):
    for split, dlg_lines, lab_lines in (
        ("train", DIALOGUES, LABELS),
        ("validation", DIALOGUES[:1], LABELS[:1]),
    ):
        base = root / split if nested else root
        base.mkdir(parents=True, exist_ok=True)
        (base / f"dialogues_{split}.txt").write_text("".join(dlg_lines))
        (base / f"dialogues_emotion_{split}.txt").write_text("".join(lab_lines))


class TestDailyDialog:
    def test_exact_parse(self, tmp_path):
        write_dailydialog(tmp_path)
        splits = load_dailydialog(tmp_path)
        assert set(splits) == {"train", "validation"}
        train = splits["train"]
        assert len(train) == 2
        assert [len(d) for d in train] == [2, 3]
        first = train[0][0]
        assert first.label == "neutral" and first.turn_index == 0
        assert first.text.startswith("Say , Jim")
        assert train[0][1].label == "happiness"
        assert train[1][1].label == "surprise"
        assert train[1][2].label == "anger"

    def test_flat_layout(self, tmp_path):
        write_dailydialog(tmp_path, nested=False)
        splits = load_dailydialog(tmp_path)
        assert len(splits["train"]) == 2

    def test_label_count_mismatch(self, tmp_path):
        write_dailydialog(tmp_path)
        bad = tmp_path / "train" / "dialogues_emotion_train.txt"
        bad.write_text("0 4 4\n0 6 1\n")
        with pytest.raises(DataFormatError, match=r":1"):
            load_dailydialog(tmp_path)

    def test_label_out_of_range(self, tmp_path):
        write_dailydialog(tmp_path)
        bad = tmp_path / "train" / "dialogues_emotion_train.txt"
        bad.write_text("0 9\n0 6 1\n")
        with pytest.raises(DataFormatError, match="9"):
            load_dailydialog(tmp_path)

    def test_non_integer_label(self, tmp_path):
        write_dailydialog(tmp_path)
        bad = tmp_path / "train" / "dialogues_emotion_train.txt"
        bad.write_text("0 joy\n0 6 1\n")
        with pytest.raises(DataFormatError, match="joy"):
            load_dailydialog(tmp_path)

    def test_line_count_mismatch(self, tmp_path):
        write_dailydialog(tmp_path)
        (tmp_path / "train" / "dialogues_emotion_train.txt").write_text("0 4\n")
        with pytest.raises(DataFormatError, match="label lines"):
            load_dailydialog(tmp_path)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(DataFormatError):
            load_dailydialog(tmp_path / "nowhere")

    def test_no_split_files(self, tmp_path):
        (tmp_path / "stray.txt").write_text("hello")
        with pytest.raises(DataFormatError, match="split files"):
            load_dailydialog(tmp_path)

    def test_label_table(self):
        assert DAILYDIALOG_LABELS == (
            "neutral", "anger", "disgust", "fear", "happiness", "sadness", "surprise",
        )

    def test_token_records_conversion(self, tmp_path):
        write_dailydialog(tmp_path)
        dataset = dailydialog_token_records(load_dailydialog(tmp_path))
        assert len(dataset) == 5 + 2
        assert len(dataset.split("train")) == 5
        assert len(dataset.split("validation")) == 2
        ids = [rec.id for rec in dataset.records]
        assert len(set(ids)) == len(ids)
        assert dataset.records[0].id == "train-1:0"


class TestLibraryFiles:
    def _toy_library(self):
        rng = np.random.default_rng(0)
        records = tuple(
            EmbeddingRecord(id=f"{label}{i}", split="train", label=label, vector=rng.normal(size=24))
            for label in ("ira", "joy")
            for i in range(3)
        )
        return build_library(
            ActivationDataset(records=records, dimension=24), FuzzifyParams(k=6, a=0.8)
        )

    def test_round_trip_field_exact(self, tmp_path):
        lib = self._toy_library()
        path = tmp_path / "lib.json"
        save_library(lib, path)
        back = load_library(path)
        assert back.params == lib.params
        assert back.dimension == lib.dimension
        assert back.feature_space == lib.feature_space
        assert back.use_magnitude == lib.use_magnitude
        assert back.labels() == lib.labels()
        for label in lib.labels():
            assert back[label] == lib[label]

    def test_reference_fingerprints_survive_bit_identically(self, tmp_path, reference_library):
        path = tmp_path / "reference.json"
        save_library(reference_library, path)
        back = load_library(path)
        for label, ids in REFERENCE_LIBRARY_IDS.items():
            assert back[label].elements == tuple(ids)
            assert back[label].entries == reference_library[label].entries

    def test_save_twice_is_byte_identical(self, tmp_path):
        lib = self._toy_library()
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_library(lib, a)
        save_library(lib, b)
        assert a.read_bytes() == b.read_bytes()

    def test_version_mismatch(self, tmp_path):
        lib = self._toy_library()
        path = tmp_path / "lib.json"
        save_library(lib, path)
        doc = json.loads(path.read_text())
        doc["format_version"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(UnsupportedVersionError):
            load_library(path)

    def test_truncated_file_is_rejected_whole(self, tmp_path):
        lib = self._toy_library()
        path = tmp_path / "lib.json"
        save_library(lib, path)
        path.write_text(path.read_text()[: len(path.read_text()) // 2])
        with pytest.raises(DataFormatError):
            load_library(path)

    def test_token_library_round_trip(self, tmp_path):
        lib = build_library(
            TokenDataset(records=(
                TokenRecord(id="1", split="train", label="A", text="green tea green"),
                TokenRecord(id="2", split="train", label="B", text="black coffee black"),
            )),
            FuzzifyParams(k=2, a=1.0),
        )
        path = tmp_path / "tok.json"
        save_library(lib, path)
        back = load_library(path)
        assert back.feature_space is FeatureSpace.TOKEN
        assert back.dimension is None
        assert back["A"].entries == lib["A"].entries

    def test_corrupt_membership_rejected(self, tmp_path):
        lib = self._toy_library()
        path = tmp_path / "lib.json"
        save_library(lib, path)
        doc = json.loads(path.read_text())
        first = next(iter(doc["classes"]))
        doc["classes"][first][0][1] = 3.5
        path.write_text(json.dumps(doc))
        with pytest.raises(DataFormatError):
            load_library(path)
