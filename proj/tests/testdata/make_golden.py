#!/usr/bin/env python3
# Copyright 2026 The mtrobust Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates tokenizer and corpus BLEU golden files with sacrebleu."""

import json
import os
import random

import sacrebleu
from sacrebleu.tokenizers.tokenizer_13a import Tokenizer13a

HERE = os.path.dirname(os.path.abspath(__file__))

TOKENIZER_INPUTS = [
    "Hello, world!",
    "The cat sat on the mat.",
    "It costs $3.50, or 3,000 yen.",
    "Mr. Smith's e-mail is smith@example.com.",
    "A well-known fact: 1-2 isn't 3.",
    "He said &quot;no&quot; &amp; left.",
    "x &lt; y &gt; z",
    "&amp;quot; stays half-decoded",
    "line one\nline two",
    "hyphen-\nated word",
    "before <skipped> after",
    "Tabs\there\tand  double  spaces",
    "   leading and trailing   ",
    "",
    ".",
    ",,,",
    "1,000,000.25",
    "a.b,c",
    "3.14.15",
    "end with number 42.",
    "42-year-old",
    "pre-1990s and post-2000",
    "(parenthesised) [bracketed] {braced}",
    "path/to/file.txt",
    "C:\\Windows\\system32",
    "50% off + tax = total",
    "email: a_b@c-d.org; phone: +1 (555) 123-4567",
    "Ünïcödé wörds, façade.",
    "Größe: 12,5 cm.",
    "日本語の文です。",
    "猫が好き、犬も好き。",
    "Привет, мир!",
    "¿Qué tal? ¡Bien!",
    "emoji 😀, ok.",
    "it's a 'quoted' \"string\"",
    "back`tick ~tilde ^caret |pipe",
    "under_score and hash#tag",
    "a-b-c-d",
    "1-a 2-b",
    "x.1 1.x 1.1 .1 1.",
    "x,1 1,x 1,1 ,1 1,",
    "...",
    "Wait... what?!",
    "U.S.A. and U.K.",
    "non\u00a0breaking space",
    "ideographic\u3000space",
    "zero\u200bwidth",
    "mixed\u2028separator",
    "tab\u000bvertical",
    "The &quot;end&quot;.",
    "&lt;b&gt;bold&lt;/b&gt;",
    "nested &amp;amp; entity",
    "Sentence with a trailing hyphen -",
    "- leading dash",
    "9-",
    "-9",
    "Numbers: 1.2.3, 4,5,6",
    "Apostrophe’s curly “quotes”",
]


def make_corpora():
    rng = random.Random(20260117)
    words = ("the cat sat on a mat dog ran far away house green tree "
             "quickly jumped over lazy fox river bank The Dog , . ! ?").split()
    corpora = []
    for n_sent in (3, 10, 40):
        hyps, refs = [], []
        for _ in range(n_sent):
            ref = [rng.choice(words) for _ in range(rng.randint(5, 15))]
            hyp = [w if rng.random() < 0.7 else rng.choice(words) for w in ref]
            if rng.random() < 0.3:
                hyp = hyp[:-rng.randint(1, 3)]
            hyps.append(" ".join(hyp))
            refs.append(" ".join(ref))
        corpora.append((hyps, refs))
    corpora.append((["The quick brown fox jumped over the dog ."],
                    ["A quick brown fox leaped over the lazy dog ."]))
    corpora.append((["completely unrelated words here"],
                    ["nothing matches in this sentence"]))
    return corpora


def main():
    tok = Tokenizer13a()
    with open(os.path.join(HERE, "tokenize_13a.jsonl"), "w",
              encoding="utf-8") as f:
        for line in TOKENIZER_INPUTS:
            f.write(json.dumps({"input": line, "output": tok(line)},
                               ensure_ascii=False) + "\n")

    with open(os.path.join(HERE, "corpus_bleu.jsonl"), "w",
              encoding="utf-8") as f:
        for hyps, refs in make_corpora():
            for tokenize in ("13a", "char"):
                for lowercase in (True, False):
                    for smooth in ("none", "floor"):
                        bleu = sacrebleu.corpus_bleu(
                            hyps, [refs], tokenize=tokenize,
                            lowercase=lowercase, smooth_method=smooth,
                            smooth_value=0.1 if smooth == "floor" else None)
                        f.write(json.dumps({
                            "hyps": hyps,
                            "refs": refs,
                            "tokenize": tokenize,
                            "lowercase": lowercase,
                            "smooth": "none" if smooth == "none" else "epsilon",
                            "score": bleu.score,
                            "counts": bleu.counts,
                            "totals": bleu.totals,
                            "sys_len": bleu.sys_len,
                            "ref_len": bleu.ref_len,
                        }, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
