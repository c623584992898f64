"""Model plumbing: word-level tokenizer, tiny encoder-decoder, generation.

Pre-trained checkpoints are deliberately out of scope: training here is
from random initialization on a word-level vocabulary built from the
dataset itself, which keeps a fine-tune run at smoke-test scale on a
CPU.  The architecture is a standard text-to-text transformer, shrunk.
"""

from __future__ import annotations

import json
import os

import torch

# Quiet the library before anything can print: the serving loop owns stdout.
import transformers

transformers.logging.set_verbosity_error()
transformers.logging.disable_progress_bar()

from tokenizers import Tokenizer, models as tok_models, pre_tokenizers, trainers
from transformers import PreTrainedTokenizerFast, T5Config, T5ForConditionalGeneration

from .config import AdapterConfig

PAD, EOS, UNK = "<pad>", "</s>", "<unk>"

# Desk-scale architecture; recorded in the artifact so serve() can state
# what it loaded.
ARCH = {"d_model": 64, "d_ff": 128, "d_kv": 16, "num_layers": 2, "num_heads": 4}

CONFIG_NAME = "adapter_config.json"


def build_tokenizer(texts) -> PreTrainedTokenizerFast:
    """Word-level vocabulary over whitespace/punctuation splits of texts."""
    tokenizer = Tokenizer(tok_models.WordLevel(unk_token=UNK))
    tokenizer.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.WordLevelTrainer(special_tokens=[PAD, EOS, UNK])
    tokenizer.train_from_iterator(texts, trainer)
    return PreTrainedTokenizerFast(
        tokenizer_object=tokenizer, pad_token=PAD, eos_token=EOS, unk_token=UNK
    )


def build_model(vocab_size: int, tokenizer: PreTrainedTokenizerFast, seed: int):
    torch.manual_seed(seed)
    config = T5Config(
        vocab_size=vocab_size,
        pad_token_id=tokenizer.pad_token_id,
        eos_token_id=tokenizer.eos_token_id,
        decoder_start_token_id=tokenizer.pad_token_id,
        num_decoder_layers=ARCH["num_layers"],
        **ARCH,
    )
    return T5ForConditionalGeneration(config)


def save_artifact(model, tokenizer, out_dir: str, extra: dict) -> None:
    os.makedirs(out_dir, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    with open(os.path.join(out_dir, CONFIG_NAME), "w", encoding="utf-8") as handle:
        json.dump({"arch": ARCH, **extra}, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_artifact(path: str, device: str = "cpu"):
    """Load a saved model directory; raises on anything unloadable."""
    if not os.path.isdir(path):
        raise FileNotFoundError(f"model directory not found: {path}")
    model = T5ForConditionalGeneration.from_pretrained(path)
    tokenizer = PreTrainedTokenizerFast.from_pretrained(path)
    model.to(device)
    model.eval()
    return model, tokenizer


def generate_one(model, tokenizer, nl: str, config: AdapterConfig) -> str:
    encoded = tokenizer(nl, return_tensors="pt", truncation=True, max_length=config.max_length)
    encoded = {k: v.to(config.device) for k, v in encoded.items()}
    with torch.no_grad():
        output = model.generate(
            **encoded,
            max_length=config.max_length,
            num_beams=config.beams,
            do_sample=False,
            # floor: candidates are never empty — the first step may not
            # emit a special token, so at least one real word comes out
            min_new_tokens=1,
            begin_suppress_tokens=[
                tokenizer.pad_token_id,
                tokenizer.eos_token_id,
                tokenizer.unk_token_id,
            ],
        )
    return tokenizer.decode(output[0], skip_special_tokens=True)
