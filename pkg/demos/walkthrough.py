"""Walk through prompt biasing on one test utterance of a finished run.

Shows the training layout of a ``<hit>/<miss>`` sequence, the hit probabilities
the filter assigns to the true entities and to a handful of distractors, and the
transcripts decoded with no prompt, the exact list, and shallow fusion.

Usage::

    promptbias reproduce --config configs/tiny.cfg --out runs/tiny
    python3 demos/walkthrough.py --run runs/tiny --config configs/tiny.cfg --index 0
"""

import argparse

import numpy as np
import torch

from promptbias.decoding import beam_search, build_bias_trie, hypothesis_text
from promptbias.filtering import score_entities
from promptbias.harness import load_config, load_data
from promptbias.model import load_checkpoint
from promptbias.prompt_format import BiasingEntity, build_inference_prompt, build_training_sequence, sample_biasing_list
from promptbias.tokenizer import encode_text


def render(vocab, ids):
    """Units joined back into text, specials set off by spaces."""
    return "".join(f" {vocab.id_to_unit(t)} " if vocab.is_special(t) else vocab.id_to_unit(t) for t in ids).strip()


def show_training_layout(utt, cfg, vocab, corpus):
    rng = np.random.default_rng(0)
    sampler = cfg.sampler
    sampler.negative_pool = corpus.negative_pool
    sampler.biasing_fraction = 1.0
    ents = sample_biasing_list(utt.words, sampler, rng, vocab, utt.entity_spans)
    seq = build_training_sequence(ents, encode_text(vocab, utt.text), vocab)
    print("training sample")
    print("  prompt :", render(vocab, seq.input_ids[: seq.prompt_len + 1]))
    print("  labels :", ", ".join(f"{e.text!r}->{e.label}" for e in ents))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--run", default="runs/default", help="directory written by `promptbias reproduce`")
    ap.add_argument("--config", default="configs/default.cfg")
    ap.add_argument("--index", type=int, default=0, help="test utterance index")
    ap.add_argument("--distractors", type=int, default=8)
    args = ap.parse_args()

    torch.set_num_threads(1)
    cfg = load_config(args.config)
    corpus, vocab = load_data(f"{args.run}/data")
    prompt_model = load_checkpoint(f"{args.run}/prompt.ckpt")[0].eval()
    baseline = load_checkpoint(f"{args.run}/baseline.ckpt")[0].eval()
    utt = corpus.test[args.index]
    print("reference :", utt.text)
    print("entities  :", utt.entity_texts())
    show_training_layout(utt, cfg, vocab, corpus)

    truth = [BiasingEntity.from_text(vocab, t) for t in utt.entity_texts()]
    noise = [BiasingEntity.from_text(vocab, t) for t in corpus.distractor_pool[: args.distractors]]
    with torch.no_grad():
        enc = prompt_model.encode(utt.features)
        print("hit probabilities")
        for s in score_entities(prompt_model, enc, truth + noise):
            tag = "present" if s.entity in truth else "distractor"
            print(f"  {s.p_hit:6.3f}  {tag:<10} {s.entity.text}")

        def run(model, prompt, trie=None):
            hyp = beam_search(model, model.encode(utt.features), prompt, cfg.decode, trie)
            return hypothesis_text(vocab, hyp.token_ids)

        print("decodes")
        print("  baseline          :", run(baseline, [vocab.sot]))
        trie = build_bias_trie(truth, cfg.decode.fusion_weight, vocab)
        print("  baseline + fusion :", run(baseline, [vocab.sot], trie))
        print("  prompt, empty     :", run(prompt_model, build_inference_prompt([], vocab)))
        exact = build_inference_prompt(truth, vocab)
        print("  prompt, exact     :", run(prompt_model, exact))
        print("exact prompt:", render(vocab, exact))


if __name__ == "__main__":
    main()
