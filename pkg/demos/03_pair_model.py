"""Sample the episode-pair generative model and inspect its likelihoods.

Run:  python demos/03_pair_model.py
"""

from episodeseq import (
    PairStats,
    build_model,
    closed_form_decomposed,
    compare_pairs,
    count_no_general,
    default_pair_alphabet,
    joint_log_likelihood,
    overlap_score_1,
    overlap_score_2,
    parse_serial_episode,
    simulate,
    trajectory_counts,
    trajectory_dataset,
    trajectory_stats,
    viterbi,
)

alpha = parse_serial_episode("A -> B -> C")
beta = parse_serial_episode("D -> B -> E")  # shares the middle symbol B
alphabet = default_pair_alphabet(alpha, beta, 7)
model = build_model(alpha, beta, alphabet, eta=0.25)

print(f"Pair model for {alpha} and {beta} over {alphabet.size} symbols")
print(f"  states: {model.n_states} (episode + noise + start)")
print(
    "  shared-event transitions:",
    sorted(
        f"{model.state(a).label()}->{model.state(b).label()}"
        for a, b in model.shared_entry_edges
    ),
)
print()

traj = simulate(model, length=24, seed=12)
print("A sampled trajectory (top: states, bottom: emitted symbols):")
print("  ", " ".join(model.state(idx).label() for idx in traj.states))
print("  ", " ".join(alphabet.name(sym) for sym in traj.outputs))
n_noise, n_unshared, n_shared = trajectory_counts(model, traj)
print(f"  {n_noise} noise, {n_unshared} unshared, {n_shared} shared emissions")
print()

# The joint probability of (output, states) collapses to a product over the
# three emission kinds, so the two numbers below agree to rounding error.
exact = joint_log_likelihood(model, traj.outputs, traj.states)
closed = closed_form_decomposed(model, n_noise, n_unshared, n_shared)
print(f"joint log-likelihood {exact:.6f} vs count closed form {closed:.6f}")

best = viterbi(model, traj.outputs)
print(f"most likely path score {joint_log_likelihood(model, traj.outputs, best):.6f}")
stats = trajectory_stats(model, best)
print(
    f"occurrences along it: {stats.f_first} of {alpha}, {stats.f_second} of"
    f" {beta}, sharing {stats.shared_events} event(s)"
)
print()

# On long outputs the realized non-overlapped frequency tracks the design
# value T(1-eta)/(2N).
long_traj = simulate(model, length=6000, seed=5)
data = trajectory_dataset(model, long_traj)
print("Realized counts at T=6000:", {
    str(ep): count_no_general(data, ep) for ep in (alpha, beta)
}, f"(design value {6000 * 0.75 / 6:.0f})")
print()

# Rating two candidate partners for a fixed episode: higher frequency helps,
# sharing events hurts, and when both metrics agree so does the likelihood.
stats_beta = PairStats(n_nodes=3, f_first=8, f_second=10, shared_events=1)
stats_gamma = PairStats(n_nodes=3, f_first=8, f_second=8, shared_events=6)
for name, s in (("beta", stats_beta), ("gamma", stats_gamma)):
    print(
        f"  {name}: metric1={overlap_score_1(s.n_nodes, s.f_second, s.shared_events)}"
        f" metric2={overlap_score_2(s.n_nodes, s.f_second, s.shared_events)}"
    )
verdict = compare_pairs(stats_beta, stats_gamma, eta=0.25, alphabet_size=7)
print(f"  likelihood ratio prefers: {verdict.preferred} (log ratio {verdict.log_ratio:.3f})")
