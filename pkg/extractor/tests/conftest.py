import pytest
import torch
from tokenizers import Tokenizer, models, normalizers, pre_tokenizers, processors
from transformers import BertConfig, BertModel, PreTrainedTokenizerFast

from lexembed.encoding import Encoder, ExtractionConfig

WORDS = [
    "the", "cat", "sat", "on", "a", "mat", "plane", "##s", "to", "travel",
    "in", "an", "air", "##plane", ":", "head", "record", "wood", "##en",
    "tool", "for", "smooth", "##ing", "surface", "fly", "flying", "over",
    "hills", "old", "new", ".", ",",
]


def build_tokenizer():
    vocab = {"[PAD]": 0, "[UNK]": 1, "[CLS]": 2, "[SEP]": 3}
    for token in WORDS:
        vocab[token] = len(vocab)
    backend = Tokenizer(models.WordPiece(vocab=vocab, unk_token="[UNK]"))
    backend.normalizer = normalizers.BertNormalizer(lowercase=True)
    backend.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    backend.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", 2), ("[SEP]", 3)],
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=backend,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
    )


def build_model(vocab_size, max_positions=32):
    config = BertConfig(
        vocab_size=vocab_size,
        hidden_size=16,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=max_positions,
    )
    torch.manual_seed(7)
    return BertModel(config)


@pytest.fixture(scope="session")
def tiny_encoder():
    tokenizer = build_tokenizer()
    model = build_model(tokenizer.vocab_size)
    config = ExtractionConfig(model="tiny-random-bert", batch_size=4)
    return Encoder(config, model=model, tokenizer=tokenizer)
