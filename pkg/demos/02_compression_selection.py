"""Encode a sequence with an episode set and let the greedy selector pick one.

Run:  python demos/02_compression_selection.py
"""

import io

from episodeseq import (
    EventDataset,
    FrequencyMode,
    decode,
    encode,
    forced_selection,
    overlap_score,
    save_table,
    score,
    select,
    total_length,
)
from episodeseq.datasets import sample_dataset, sample_selection

data = sample_dataset()

# --- Coding a dataset with a hand-picked episode set -----------------------
# Each table row costs 2N + 1 + f integer units; uncovered events fall into
# 1-node residual rows, which keeps the code lossless.
episodes = sample_selection()
state = forced_selection(data, episodes, FrequencyMode.DISTINCT)
table = encode(data, state)
buffer = io.StringIO()
save_table(table, buffer)
print("Encoding table for the bundled sample:")
print(buffer.getvalue())
print(f"Total encoded length: {total_length(table)} units")
print(f"Decodes back to the original data: {decode(table) == data}")
print()

# The per-episode score is the coding benefit over 1-node rows; the
# overlap-score discounts events already covered by earlier picks.
first, second = episodes[0], episodes[1]
print(f"score({second}) with f=2:", score(second, 2))
print(
    f"overlap-score({second}) given {{{first}}}:",
    overlap_score(second, data, [first], FrequencyMode.DISTINCT),
)
print()

# --- Greedy selection on data with a strong repeating pattern --------------
seq = [
    (t, s)
    for k in range(5)
    for t, s in ((3 * k + 1, "A"), (3 * k + 2, "B"), (3 * k + 3, "C"))
]
clean = EventDataset.from_tuples([seq])
chosen = select(clean, max_gap=2)
print("Selection on five clean repetitions of A -1-> B -1-> C:")
for sel in chosen.selected:
    print(f"  picked {sel.episode} with frequency {sel.frequency}")
best = encode(clean, chosen)
naive = encode(clean, forced_selection(clean, []))
print(f"  code length {total_length(best)} vs {total_length(naive)} without it")
