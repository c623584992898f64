"""Training loop: random-init tiny model on NL->CNL pairs, early stopping.

Reference settings carried as defaults: batch size 16, decoupled weight
decay (AdamW, wd 0.01), learning rate 2e-5, early stopping on validation
loss in minimum mode with patience 20.  Large-model translation quality
is explicitly not a goal here — the artifact is for protocol-level and
smoke-scale use.
"""

from __future__ import annotations

import json
import os
import random

import torch

from .model import build_model, build_tokenizer, save_artifact
from .records import TrainPair, read_many

LOG_NAME = "training_log.jsonl"


def _batches(pairs: list[TrainPair], size: int):
    for start in range(0, len(pairs), size):
        yield pairs[start : start + size]


def _encode(batch, tokenizer, max_length: int, device: str):
    source = tokenizer(
        [p.nl for p in batch],
        return_tensors="pt", padding=True, truncation=True, max_length=max_length,
    )
    target = tokenizer(
        [p.cnl + " " + tokenizer.eos_token for p in batch],
        return_tensors="pt", padding=True, truncation=True, max_length=max_length,
    )
    labels = target.input_ids.clone()
    labels[labels == tokenizer.pad_token_id] = -100
    return (
        source.input_ids.to(device),
        source.attention_mask.to(device),
        labels.to(device),
    )


def _epoch_loss(model, pairs, tokenizer, batch_size, max_length, device, optimizer=None):
    total, seen = 0.0, 0
    for batch in _batches(pairs, batch_size):
        input_ids, attention_mask, labels = _encode(batch, tokenizer, max_length, device)
        output = model(input_ids=input_ids, attention_mask=attention_mask, labels=labels)
        if optimizer is not None:
            optimizer.zero_grad()
            output.loss.backward()
            optimizer.step()
        total += float(output.loss.detach()) * len(batch)
        seen += len(batch)
    return total / seen


def finetune(
    dataset_paths,
    out_dir: str,
    *,
    epochs: int = 200,
    batch_size: int = 16,
    lr: float = 2e-5,
    weight_decay: float = 0.01,
    patience: int = 20,
    val_fraction: float = 0.1,
    max_length: int = 64,
    seed: int = 0,
    log=None,
) -> dict:
    """Train and save an artifact; returns a summary dict.

    The epoch log (train/val loss per epoch) is written to
    training_log.jsonl inside the artifact directory, and the best
    weights by monitored loss are what get saved.
    """
    pairs = read_many(dataset_paths)
    rng = random.Random(seed)
    shuffled = list(pairs)
    rng.shuffle(shuffled)
    n_val = int(len(shuffled) * val_fraction)
    val, train = shuffled[:n_val], shuffled[n_val:]
    if not train:
        train, val = val, []

    tokenizer = build_tokenizer([p.nl for p in pairs] + [p.cnl for p in pairs])
    model = build_model(tokenizer.vocab_size + len(tokenizer.all_special_tokens), tokenizer, seed)
    optimizer = torch.optim.AdamW(model.parameters(), lr=lr, weight_decay=weight_decay)

    history: list[dict] = []
    best = float("inf")
    best_state = None
    best_epoch = 0
    stale = 0
    for epoch in range(1, epochs + 1):
        order = list(train)
        random.Random((seed, epoch).__hash__()).shuffle(order)
        model.train()
        train_loss = _epoch_loss(
            model, order, tokenizer, batch_size, max_length, "cpu", optimizer
        )
        val_loss = None
        if val:
            model.eval()
            with torch.no_grad():
                val_loss = _epoch_loss(model, val, tokenizer, batch_size, max_length, "cpu")
        monitored = val_loss if val_loss is not None else train_loss
        history.append({"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss})
        if log is not None:
            log.write(
                f"epoch {epoch}/{epochs}  train {train_loss:.4f}"
                + (f"  val {val_loss:.4f}" if val_loss is not None else "")
                + "\n"
            )
            log.flush()
        if monitored < best:
            best, best_epoch, stale = monitored, epoch, 0
            best_state = {k: v.detach().clone() for k, v in model.state_dict().items()}
        else:
            stale += 1
            if stale > patience:
                break

    if best_state is not None:
        model.load_state_dict(best_state)
    model.eval()
    summary = {
        "records": len(pairs),
        "train_records": len(train),
        "val_records": len(val),
        "epochs_run": len(history),
        "best_epoch": best_epoch,
        "best_loss": best,
        "max_length": max_length,
        "seed": seed,
        "settings": {
            "batch_size": batch_size,
            "lr": lr,
            "weight_decay": weight_decay,
            "patience": patience,
        },
    }
    save_artifact(model, tokenizer, out_dir, summary)
    with open(os.path.join(out_dir, LOG_NAME), "w", encoding="utf-8") as handle:
        for entry in history:
            handle.write(json.dumps(entry, sort_keys=True) + "\n")
    return summary
