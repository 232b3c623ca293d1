"""Test fixtures: a deterministic 768-dim encoder and a 50-dialogue corpus.

The contract tests prefer a locally cached `roberta-base`; when no cache is
available they fall back to a small randomly initialized (fixed seed) encoder
with the same 768-dim hidden size, saved to disk so weights stay fixed.
"""

import json
import random

import pytest

from ffp_extractor.corpus import LABELS, read_utterance_file

WORDS = (
    "yes no maybe sure what when where how come go stay fine thanks sorry "
    "hello again really never always files dinner tonight morning work call"
).split()


def _try_cached_roberta():
    try:
        from transformers import AutoTokenizer

        AutoTokenizer.from_pretrained("roberta-base", local_files_only=True)
        return "roberta-base"
    except Exception:
        return None


def _build_tiny_encoder(target_dir):
    import torch
    from tokenizers import Tokenizer, models, pre_tokenizers, processors
    from transformers import PreTrainedTokenizerFast, RobertaConfig, RobertaModel

    specials = ["<s>", "<pad>", "</s>", "<unk>"]
    vocab = {tok: i for i, tok in enumerate(specials + sorted(WORDS))}
    tok = Tokenizer(models.WordLevel(vocab, unk_token="<unk>"))
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    tok.post_processor = processors.TemplateProcessing(
        single="<s> $A </s>",
        pair="<s> $A </s> </s> $B </s>",
        special_tokens=[("<s>", vocab["<s>"]), ("</s>", vocab["</s>"])],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=tok,
        bos_token="<s>",
        eos_token="</s>",
        sep_token="</s>",
        cls_token="<s>",
        unk_token="<unk>",
        pad_token="<pad>",
    )
    torch.manual_seed(0)
    config = RobertaConfig(
        vocab_size=len(vocab),
        hidden_size=768,
        num_hidden_layers=2,
        num_attention_heads=8,
        intermediate_size=512,
        max_position_embeddings=192,
        pad_token_id=vocab["<pad>"],
        bos_token_id=vocab["<s>"],
        eos_token_id=vocab["</s>"],
    )
    model = RobertaModel(config)
    model.save_pretrained(target_dir)
    tokenizer.save_pretrained(target_dir)
    return str(target_dir)


@pytest.fixture(scope="session")
def encoder_path(tmp_path_factory):
    cached = _try_cached_roberta()
    if cached is not None:
        return cached
    return _build_tiny_encoder(tmp_path_factory.mktemp("tiny-encoder"))


def make_corpus_rows(n_dialogues=50, seed=1):
    """Deterministic dialogues in the converted utterance-file shape."""
    rnd = random.Random(seed)
    rows = []
    for d in range(n_dialogues):
        split = "train" if d < n_dialogues * 0.6 else ("validation" if d < n_dialogues * 0.8 else "test")
        turns = rnd.randint(2, 4)
        for t in range(turns):
            text = " ".join(rnd.choice(WORDS) for _ in range(rnd.randint(3, 8)))
            rows.append(
                {
                    "id": f"{split}-{d}:{t}",
                    "split": split,
                    "label": rnd.choice(LABELS),
                    "text": text,
                }
            )
    return rows


@pytest.fixture(scope="session")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "utterances.jsonl"
    rows = make_corpus_rows()
    path.write_text("".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def fifty_dialogues(corpus_file):
    dialogues = read_utterance_file(corpus_file)
    assert len(dialogues) == 50
    return dialogues
